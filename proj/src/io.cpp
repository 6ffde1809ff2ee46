#include "needle/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace needle::io {

double parse_real(const json& j, double if_null)
{
    if (j.is_null()) return if_null;
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
        if (s == "-inf" || s == "-Infinity") return -kInf;
    }
    throw std::runtime_error("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

json real_json(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

NamedWeight parse_weight(const json& j)
{
    NamedWeight w;
    w.name = j.value("name", "");
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        if (!d.is_array() || d.size() != 2) throw std::runtime_error("weight domain must be [lo, hi]");
        w.domain = make_interval(parse_real(d[0], -kInf), parse_real(d[1], kInf));
    }
    if (j.contains("hinge")) {
        const json& h = j.at("hinge");
        w.weight = ConvexWeight::hinge(h.at("t").get<double>(), h.value("p", 0.0));
        return w;
    }
    std::vector<Knot> knots;
    for (const auto& k : j.value("knots", json::array())) {
        if (!k.is_array() || k.size() != 2) throw std::runtime_error("knot must be [position, value]");
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    double sl = j.value("slope_left", 0.0);
    double sr = j.value("slope_right", sl);
    w.weight = ConvexWeight(std::move(knots), sl, sr);
    return w;
}

json weight_json(const NamedWeight& w)
{
    json k = json::array();
    for (const auto& kn : w.weight.knots()) k.push_back({kn.pos, kn.value});
    return {{"name", w.name},
            {"domain", {real_json(w.domain.lo), real_json(w.domain.hi)}},
            {"knots", k},
            {"slope_left", w.weight.slope_left()},
            {"slope_right", w.weight.slope_right()}};
}

std::vector<NamedWeight> parse_weight_family(const json& j)
{
    const json& arr = j.is_array() ? j : j.at("weights");
    std::vector<NamedWeight> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        try {
            out.push_back(parse_weight(arr[i]));
        } catch (const std::exception& e) {
            throw std::runtime_error("weight record " + std::to_string(i) + ": " + e.what());
        }
        if (out.back().name.empty()) out.back().name = "w" + std::to_string(i);
    }
    return out;
}

std::vector<NamedWeight> load_weight_family(const std::string& path)
{
    return parse_weight_family(read_json_file(path));
}

namespace {
IntervalSet parse_set(const json& j, const NeedleMeasure& m, double theta)
{
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "left") return IntervalSet::left_of(m.quantile_r(theta, Side::minus)).clip(m.domain());
        if (s == "right") return IntervalSet::right_of(m.quantile_r(theta, Side::plus)).clip(m.domain());
        throw std::runtime_error("set shorthand must be \"left\" or \"right\"");
    }
    std::vector<Interval> parts;
    for (const auto& c : j) {
        if (!c.is_array() || c.size() != 2) throw std::runtime_error("set component must be [lo, hi]");
        parts.push_back(make_interval(parse_real(c[0], -kInf), parse_real(c[1], kInf)));
    }
    return IntervalSet(std::move(parts));
}
}  // namespace

EnsembleFile parse_ensemble(const json& j)
{
    double theta = j.at("theta").get<double>();
    std::vector<NamedWeight> library;
    if (j.contains("weights")) library = parse_weight_family(j.at("weights"));
    std::vector<EnsembleEntry> entries;
    const json& arr = j.at("entries");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& r = arr[i];
        NamedWeight nw;
        if (r.contains("needle") && r.at("needle").is_string()) {
            std::string name = r.at("needle").get<std::string>();
            auto it = std::find_if(library.begin(), library.end(), [&](const NamedWeight& w) { return w.name == name; });
            if (it == library.end()) throw std::runtime_error("entry " + std::to_string(i) + ": unknown needle " + name);
            nw = *it;
        } else if (r.contains("needle")) {
            nw = parse_weight(r.at("needle"));
        } else {
            nw.weight = ConvexWeight::gaussian();
        }
        EnsembleEntry en;
        en.label = r.value("label", "");
        en.weight = r.value("weight", 1.0);
        en.needle = normalize(nw.domain, nw.weight);
        en.A = parse_set(r.at("A"), en.needle, theta);
        en.offset = r.value("offset", 0.0);
        entries.push_back(std::move(en));
    }
    EnsembleFile f;
    if (j.contains("global_perimeter"))
        f.ensemble = build_ensemble_with_perimeter(std::move(entries), theta, j.at("global_perimeter").get<double>());
    else
        f.ensemble = build_ensemble(std::move(entries), theta, j.value("slack", 0.0));
    if (j.value("center", true)) {
        f.ensemble = center_guiding(f.ensemble);
        f.centred = true;
    }
    return f;
}

EnsembleFile load_ensemble(const std::string& path) { return parse_ensemble(read_json_file(path)); }

ProductFile parse_product(const json& j)
{
    ProductFile f;
    ProductSpec& s = f.spec;
    if (j.contains("fiber_weights")) {
        s.fiber_weights = j.at("fiber_weights").get<std::vector<double>>();
    } else {
        int n = j.value("fibers", 16);
        if (n < 1) throw std::runtime_error("fibers must be >= 1");
        s.fiber_weights.assign(n, 1.0 / n);
    }
    s.labels = j.value("labels", std::vector<std::string>{});
    s.theta = j.value("theta", 0.3);
    s.perturbation = parse_perturbation(j.value("perturbation", std::string("hinge")));
    s.kink_pos = j.value("kink_pos", std::vector<double>{});
    s.kink_scale = j.value("kink_scale", std::vector<double>{});
    s.slack = j.value("slack", 0.0);
    s.intensity = j.value("intensity", 0.0);
    f.intensities = j.value("intensities", std::vector<double>{});
    return f;
}

ProductFile load_product(const std::string& path) { return parse_product(read_json_file(path)); }

json interval_set_json(const IntervalSet& s)
{
    json a = json::array();
    for (const auto& c : s.components()) a.push_back({real_json(c.lo), real_json(c.hi)});
    return a;
}

json report_json(const DeficitReport& r)
{
    return {{"theta", r.theta},       {"a_theta", r.a_theta},        {"delta", r.delta},
            {"alpha", r.alpha},       {"slope", r.slope},            {"T", real_json(r.T)},
            {"S", real_json(r.S)},    {"tail_T", r.tail_T},          {"tail_S", r.tail_S},
            {"in_regime", r.in_regime}, {"valid", r.valid},          {"flags", r.flags}};
}

CsvWriter::CsvWriter(std::ostream& os, const std::string& table, std::vector<std::string> columns)
    : os_(os), ncol_(columns.size())
{
    os_ << "# schema: needle-lab/" << table << "/v" << kSchemaVersion << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << '\n';
}

CsvWriter& CsvWriter::operator<<(double v)
{
    os_ << (cur_++ ? "," : "") << fmt(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s)
{
    os_ << (cur_++ ? "," : "") << s;
    return *this;
}

CsvWriter& CsvWriter::operator<<(bool b)
{
    os_ << (cur_++ ? "," : "") << (b ? 1 : 0);
    return *this;
}

void CsvWriter::end_row()
{
    if (cur_ != ncol_) throw std::logic_error("CsvWriter: row has the wrong number of fields");
    os_ << '\n';
    cur_ = 0;
}

std::string loglog_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series)
{
    const double W = 640, H = 440, L = 80, R = 160, T = 40, B = 60;
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!(s.x[i] > 0 && s.y[i] > 0) || std::isinf(s.x[i]) || std::isinf(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    if (!(xmax >= xmin)) {
        os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">no positive data</text>\n</svg>\n";
        return os.str();
    }
    double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax));
    double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
    if (lx1 == lx0) lx1 += 1;
    if (ly1 == ly0) ly1 += 1;
    auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = lx0; d <= lx1; d += 1) {
        double x = px(std::pow(10, d));
        os << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\"" << T
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << x << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (double d = ly0; d <= ly1; d += 1) {
        double y = py(std::pow(10, d));
        os << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << L - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d
           << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colors[k % 5];
        os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            if (s.x[i] > 0 && s.y[i] > 0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        os << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            if (s.x[i] > 0 && s.y[i] > 0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << c
                   << "\"/>\n";
        os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 + 18 * k << "\" fill=\"" << c << "\">" << s.name
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace needle::io
