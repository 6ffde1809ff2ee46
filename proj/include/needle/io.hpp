#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "needle/deficit.hpp"
#include "needle/ensemble.hpp"
#include "needle/needle_measure.hpp"
#include "needle/product_sim.hpp"

namespace needle::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// numbers, or "inf"/"-inf" strings; null maps to the given default
double parse_real(const json& j, double if_null);
json real_json(double v);
std::string fmt(double v);  // %.17g, inf/-inf/nan spelled out

struct NamedWeight {
    std::string name;
    Interval domain;
    ConvexWeight weight;
};

NamedWeight parse_weight(const json& j);
json weight_json(const NamedWeight& w);
std::vector<NamedWeight> load_weight_family(const std::string& path);
std::vector<NamedWeight> parse_weight_family(const json& j);

struct EnsembleFile {
    NeedleEnsemble ensemble;
    bool centred = false;
};
EnsembleFile parse_ensemble(const json& j);
EnsembleFile load_ensemble(const std::string& path);

struct ProductFile {
    ProductSpec spec;
    std::vector<double> intensities;
};
ProductFile parse_product(const json& j);
ProductFile load_product(const std::string& path);

json read_json_file(const std::string& path);

json report_json(const DeficitReport& r);
json interval_set_json(const IntervalSet& s);

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& table, std::vector<std::string> columns);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(const std::string& s);
    CsvWriter& operator<<(bool b);
    void end_row();

private:
    std::ostream& os_;
    std::size_t ncol_;
    std::size_t cur_ = 0;
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// static log-log chart; non-positive points are dropped
std::string loglog_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series);

}  // namespace needle::io
