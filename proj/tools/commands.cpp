#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "needle/deficit.hpp"
#include "needle/ensemble.hpp"
#include "needle/gauss.hpp"
#include "needle/io.hpp"
#include "needle/product_sim.hpp"
#include "needle/profile_bounded.hpp"

namespace needle::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

bool wants(const Common& c, const std::string& f)
{
    return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end();
}

fs::path out_path(const Common& c, const std::string& name)
{
    fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
    fs::create_directories(dir);
    return dir / name;
}

std::ofstream open_out(const Common& c, const std::string& name)
{
    fs::path p = out_path(c, name);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    std::cerr << "wrote " << p.string() << '\n';
    return os;
}

void write_json(const Common& c, const std::string& name, const json& j)
{
    auto os = open_out(c, name);
    os << j.dump(2) << '\n';
}

void write_svg(const Common& c, const std::string& name, const std::string& svg)
{
    auto os = open_out(c, name);
    os << svg;
}

// runs f(i) for i < n on up to `jobs` threads; results land by index
template <class F>
void run_indexed(std::size_t n, int jobs, F&& f)
{
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> err(n);
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs && j < static_cast<int>(n); ++j)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) try {
                    f(i);
                } catch (...) {
                    err[i] = std::current_exception();
                }
        });
    for (auto& t : pool) t.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
}

json j_real(double v) { return io::real_json(v); }

}  // namespace

void write_run_meta(const Common& c, const std::string& command, const std::vector<std::string>& argv)
{
    std::time_t now = std::time(nullptr);
    char ts[64];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json j{{"command", command}, {"argv", argv}, {"timestamp_utc", ts}, {"schema_version", io::kSchemaVersion},
           {"jobs", c.jobs}, {"formats", c.formats}};
    auto os = std::ofstream(out_path(c, "run_meta.json"));
    os << j.dump(2) << '\n';
}

int cmd_profile(const Common& c, const ProfileArgs& a)
{
    if (a.theta_grid < 1) throw std::domain_error("--theta-grid must be >= 1");
    GaussianModel g(a.K);
    double bound = gap_lower_bound(a.K, a.D);
    std::size_t n = static_cast<std::size_t>(a.theta_grid);
    std::vector<BoundedProfile> pd(n);
    std::vector<double> th(n);
    for (std::size_t i = 0; i < n; ++i) th[i] = double(i + 1) / double(n + 1);
    run_indexed(n, c.jobs, [&](std::size_t i) { pd[i] = profile_D({a.K, a.D, th[i]}); });

    bool flagged = false;
    json rows = json::array();
    std::ostringstream csv;
    io::CsvWriter w(csv, "profile", {"theta", "I_inf", "I_D", "argmin_xi", "gap", "gap_bound", "gap_ok"});
    for (std::size_t i = 0; i < n; ++i) {
        double inf = g.profile_inf(th[i]);
        double gap = pd[i].value - inf;
        bool ok = gap > bound;
        flagged |= !ok;
        w << th[i] << inf << pd[i].value << pd[i].argmin_xi << gap << bound << ok;
        w.end_row();
        rows.push_back({{"theta", th[i]}, {"I_inf", inf}, {"I_D", pd[i].value}, {"argmin_xi", pd[i].argmin_xi},
                        {"gap", gap}, {"gap_bound", bound}, {"gap_ok", ok}});
    }
    if (wants(c, "csv")) open_out(c, "profile.csv") << csv.str();
    if (wants(c, "json")) write_json(c, "profile.json", {{"K", a.K}, {"D", a.D}, {"rows", rows}});
    if (wants(c, "svg")) {
        io::Series s{"I_D - I_inf", th, {}};
        io::Series b{"gap bound", th, {}};
        for (std::size_t i = 0; i < n; ++i) {
            s.y.push_back(pd[i].value - g.profile_inf(th[i]));
            b.y.push_back(bound);
        }
        write_svg(c, "profile.svg", io::loglog_svg("diameter gap", "theta", "gap", {s, b}));
    }
    return flagged ? kFlagged : kOk;
}

namespace {
const std::vector<std::string> kReportCols{"theta",  "a_theta",      "delta",        "alpha",    "T",
                                           "S",      "tail_T",       "tail_S",       "lower_margin",
                                           "upper_margin", "rp_ratio", "in_regime", "valid"};

void report_row(io::CsvWriter& w, const DeficitReport& r, const EnvelopeMargins& m, double rp)
{
    w << r.theta << r.a_theta << r.delta << r.alpha << r.T << r.S << r.tail_T << r.tail_S << m.lower_margin
      << m.upper_margin << rp << r.in_regime << r.valid;
}

json report_full(const DeficitReport& r, const EnvelopeMargins& m, double rp)
{
    json j = io::report_json(r);
    j["lower_margin"] = m.lower_margin;
    j["upper_margin"] = m.upper_margin;
    j["rp_ratio"] = rp;
    return j;
}
}  // namespace

int cmd_needle_report(const Common& c, const NeedleArgs& a)
{
    std::vector<io::NamedWeight> ws;
    if (a.weights.empty())
        ws.push_back({"gaussian", Interval{}, ConvexWeight::gaussian()});
    else
        ws = io::load_weight_family(a.weights);
    if (!a.name.empty()) {
        std::erase_if(ws, [&](const io::NamedWeight& w) { return w.name != a.name; });
        if (ws.empty()) throw std::runtime_error("no weight named " + a.name);
    }
    DeficitOptions opt;
    if (a.c4 >= 0) opt.c4 = a.c4;
    struct Out {
        bool reflected;
        DeficitReport r;
        EnvelopeMargins m;
        double rp;
    };
    std::vector<Out> out(ws.size());
    run_indexed(ws.size(), c.jobs, [&](std::size_t i) {
        Orientation o = orient_detail(normalize(ws[i].domain, ws[i].weight), a.theta);
        DeficitReport r = deficit(o.measure, a.theta, opt);
        EnvelopeMargins m = envelope_check(o.measure, a.theta, r, default_envelope_grid(o.measure, r));
        VarianceEnergy ve = o.measure.variance_affine(1, 0);
        out[i] = {o.reflected, r, m, ve.variance / ve.energy};
    });
    std::ostringstream csv;
    std::vector<std::string> cols{"name", "reflected"};
    cols.insert(cols.end(), kReportCols.begin(), kReportCols.end());
    io::CsvWriter w(csv, "needle-report", cols);
    json rows = json::array();
    bool flagged = false;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        w << ws[i].name << out[i].reflected;
        report_row(w, out[i].r, out[i].m, out[i].rp);
        w.end_row();
        json j = report_full(out[i].r, out[i].m, out[i].rp);
        j["name"] = ws[i].name;
        j["reflected"] = out[i].reflected;
        j["weight"] = io::weight_json(ws[i]);
        rows.push_back(j);
        flagged |= !out[i].r.valid || out[i].m.lower_margin < -1e-9;
    }
    if (wants(c, "csv")) open_out(c, "needle-report.csv") << csv.str();
    if (wants(c, "json")) write_json(c, "needle-report.json", {{"theta", a.theta}, {"reports", rows}});
    return flagged ? kFlagged : kOk;
}

int cmd_deficit_sweep(const Common& c, const HingeSweepArgs& a)
{
    auto rows = hinge_family(a.theta, a.t_list, a.kink_pos);
    // C4 is read off the first (largest) row and frozen
    double c4 = std::max(tail_ratio_T(rows[0].report), tail_ratio_S(rows[0].report));
    double up0 = rows[0].margins.upper_margin;
    std::ostringstream csv;
    std::vector<std::string> cols{"t", "reflected"};
    cols.insert(cols.end(), kReportCols.begin(), kReportCols.end());
    for (const char* s : {"tail_ratio_T", "tail_ratio_S", "c4", "tail_ok", "lower_ok", "upper_ok"}) cols.push_back(s);
    io::CsvWriter w(csv, "deficit-sweep", cols);
    json jr = json::array();
    bool flagged = false;
    io::Series sl{"lower_margin", {}, {}}, su{"upper_margin", {}, {}};
    for (const auto& r : rows) {
        double d = r.report.delta;
        double budget = std::sqrt(d) + c4 * d;
        bool tail_ok = r.report.tail_T <= budget && r.report.tail_S <= budget;
        bool lower_ok = r.margins.lower_margin >= -1e-9;
        bool upper_ok = r.margins.upper_margin <= 2 * up0;
        flagged |= !(tail_ok && lower_ok && upper_ok);
        w << r.t << r.reflected;
        report_row(w, r.report, r.margins, r.rp_ratio);
        w << tail_ratio_T(r.report) << tail_ratio_S(r.report) << c4 << tail_ok << lower_ok << upper_ok;
        w.end_row();
        json j = report_full(r.report, r.margins, r.rp_ratio);
        j["t"] = r.t;
        j["tail_ok"] = tail_ok;
        jr.push_back(j);
        sl.x.push_back(d);
        sl.y.push_back(r.margins.lower_margin);
        su.x.push_back(d);
        su.y.push_back(r.margins.upper_margin);
    }
    if (wants(c, "csv")) open_out(c, "deficit-sweep.csv") << csv.str();
    if (wants(c, "json"))
        write_json(c, "deficit-sweep.json",
                   {{"theta", a.theta}, {"kink_pos", a.kink_pos}, {"c4", c4}, {"rows", jr}});
    if (wants(c, "svg"))
        write_svg(c, "deficit-sweep.svg", io::loglog_svg("envelope margins", "delta", "margin", {sl, su}));
    return flagged ? kFlagged : kOk;
}

int cmd_revpoincare_sweep(const Common& c, const HingeSweepArgs& a)
{
    auto rows = hinge_family(a.theta, a.t_list, a.kink_pos);
    std::vector<double> d, g;
    std::ostringstream csv;
    io::CsvWriter w(csv, "revpoincare-sweep", {"t", "delta", "rp_ratio", "one_minus_ratio", "poincare_ok"});
    bool flagged = false;
    for (const auto& r : rows) {
        bool ok = r.rp_ratio <= 1 + 1e-9;
        flagged |= !ok;
        w << r.t << r.report.delta << r.rp_ratio << 1 - r.rp_ratio << ok;
        w.end_row();
        d.push_back(r.report.delta);
        g.push_back(1 - r.rp_ratio);
    }
    double slope = rows.size() >= 2 ? loglog_slope(d, g) : std::nan("");
    if (wants(c, "csv")) open_out(c, "revpoincare-sweep.csv") << csv.str();
    if (wants(c, "json")) {
        json jr = json::array();
        for (const auto& r : rows) jr.push_back({{"t", r.t}, {"delta", r.report.delta}, {"rp_ratio", r.rp_ratio}});
        write_json(c, "revpoincare-sweep.json", {{"theta", a.theta}, {"loglog_slope", j_real(slope)}, {"rows", jr}});
    }
    if (wants(c, "svg"))
        write_svg(c, "revpoincare-sweep.svg", io::loglog_svg("reverse Poincare gap", "delta", "1 - ratio", {{"1 - ratio", d, g}}));
    return flagged ? kFlagged : kOk;
}

int cmd_ensemble_run(const Common& c, const EnsembleArgs& a)
{
    if (a.file.empty()) throw std::domain_error("--ensemble FILE is required");
    io::EnsembleFile f = io::load_ensemble(a.file);
    const NeedleEnsemble& e = f.ensemble;
    DeficitDecomposition dd = deficit_decomposition(e);
    ClassificationReport cls = classify(e);
    GlobalPoincare gp = reverse_poincare_global(e);
    CenteringOptions co;
    co.eps = a.eps;
    CenteredReport cr = centered_needles(e, cls, co);
    json summary{{"theta", e.theta},
                 {"delta_A", dd.delta_A},
                 {"nu_integral", dd.nu_integral},
                 {"slack", e.slack},
                 {"global_perimeter", e.global_perimeter},
                 {"nu_long", cls.nu_long},
                 {"nu_minus", cls.nu_minus},
                 {"nu_plus", cls.nu_plus},
                 {"nu_centered", cr.nu_centered},
                 {"long_ok", cls.long_ok},
                 {"sides_ok", cls.sides_ok},
                 {"variance", gp.variance},
                 {"energy", gp.energy},
                 {"ratio", gp.ratio},
                 {"mean_sq_integral", gp.mean_sq_integral},
                 {"poincare_ok", gp.poincare_ok},
                 {"c7p", cr.c7p},
                 {"markov_ok", cr.markov_ok},
                 {"max_gap", cr.max_gap}};
    bool flagged = !cls.long_ok || !cls.sides_ok || !gp.poincare_ok || !cr.markov_ok;
    if (std::abs(e.theta - 0.5) > 1e-15) {
        MainSymdiff ms = main_symdiff(e);
        MinSideMass mm = min_side_mass(e, cls);
        summary["main_symdiff"] = ms.value;
        summary["main_side"] = ms.side == Side::minus ? "minus" : "plus";
        summary["min_side"] = mm.min_side;
        summary["slice_bound"] = mm.slice_bound;
    } else {
        summary["main_symdiff"] = nullptr;
        summary["note"] = "theta = 1/2 is not covered by the quantitative estimate";
    }
    auto in = [](const std::vector<std::size_t>& v, std::size_t q) { return std::binary_search(v.begin(), v.end(), q); };
    std::ostringstream csv;
    io::CsvWriter w(csv, "ensemble-needles",
                    {"label", "nu", "offset", "perimeter", "needle_deficit", "symdiff_minus", "symdiff_plus",
                     "mean_u", "long", "minus", "plus", "centered"});
    json needles = json::array();
    for (std::size_t q = 0; q < e.entries.size(); ++q) {
        const auto& en = e.entries[q];
        double mu = en.needle.mean() + en.offset;
        w << en.label << en.weight << en.offset << en.needle.perimeter(en.A) << dd.per_needle[q]
          << cls.symdiff_minus[q] << cls.symdiff_plus[q] << mu << in(cls.Q_long, q) << in(cls.Q_minus, q)
          << in(cls.Q_plus, q) << in(cr.Q_centered, q);
        w.end_row();
        needles.push_back({{"label", en.label}, {"nu", en.weight}, {"offset", en.offset},
                           {"A", io::interval_set_json(en.A)}, {"needle_deficit", dd.per_needle[q]}, {"mean_u", mu}});
    }
    if (wants(c, "csv")) open_out(c, "ensemble-run.csv") << csv.str();
    if (wants(c, "json")) write_json(c, "ensemble-run.json", {{"summary", summary}, {"needles", needles}});
    return flagged ? kFlagged : kOk;
}

int cmd_product_sim(const Common& c, const ProductArgs& a)
{
    ProductSpec spec;
    std::vector<double> ts = a.intensities;
    if (!a.spec.empty()) {
        io::ProductFile f = io::load_product(a.spec);
        spec = f.spec;
        if (!f.intensities.empty()) ts = f.intensities;
    } else {
        spec = uniform_spec(a.fibers, a.theta, parse_perturbation(a.perturbation));
        spec.slack = a.slack;
    }
    SweepOptions so;
    so.eps = a.eps;
    so.jobs = c.jobs;
    auto rows = sweep(spec, ts, so);
    std::ostringstream csv;
    io::CsvWriter w(csv, "product-sim",
                    {"t", "delta_A", "main_symdiff", "side", "ratio", "min_side", "nu_long", "nu_minus", "nu_plus",
                     "nu_centered", "mean_sq", "max_gap", "slice_bound", "symdiff_scaled", "long_ok", "sides_ok",
                     "poincare_ok", "markov_ok"});
    bool flagged = false;
    io::Series s{"main_symdiff", {}, {}};
    json jr = json::array();
    for (const auto& r : rows) {
        w << r.t << r.delta_A << r.main_symdiff << std::string(r.side == Side::minus ? "minus" : "plus") << r.ratio
          << r.min_side << r.nu_long << r.nu_minus << r.nu_plus << r.nu_centered << r.mean_sq << r.max_gap
          << r.slice_bound << r.symdiff_scaled << r.long_ok << r.sides_ok << r.poincare_ok << r.markov_ok;
        w.end_row();
        flagged |= !(r.long_ok && r.sides_ok && r.poincare_ok && r.markov_ok);
        s.x.push_back(r.delta_A);
        s.y.push_back(r.main_symdiff);
        jr.push_back({{"t", r.t}, {"delta_A", r.delta_A}, {"main_symdiff", r.main_symdiff}, {"ratio", r.ratio},
                      {"min_side", r.min_side}, {"symdiff_scaled", r.symdiff_scaled}});
    }
    if (wants(c, "csv")) open_out(c, "product-sim.csv") << csv.str();
    if (wants(c, "json"))
        write_json(c, "product-sim.json",
                   {{"theta", spec.theta}, {"fibers", spec.fiber_weights.size()},
                    {"perturbation", to_string(spec.perturbation)}, {"rows", jr}});
    if (wants(c, "svg"))
        write_svg(c, "product-sim.svg", io::loglog_svg("symmetric difference vs deficit", "delta_A", "main_symdiff", {s}));
    return flagged ? kFlagged : kOk;
}

int cmd_lsi_witness(const Common& c, const LsiArgs& a)
{
    ProductSpec spec = uniform_spec(a.fibers, a.theta, Perturbation::hinge);
    spec.intensity = a.t;
    NeedleEnsemble e = build_product(spec);
    double r = reverse_poincare_global(e).ratio;
    double lambda = a.lambda_factor / r;
    std::ostringstream csv;
    io::CsvWriter w(csv, "lsi-witness", {"eps_amp", "in_range", "lhs", "rhs", "holds"});
    bool any = false;
    for (double eps : a.eps_list) {
        try {
            LsiWitness lw = reverse_lsi_witness_global(e, a.sigma, eps, lambda);
            any |= lw.holds;
            w << eps << true << lw.lhs << lw.rhs << lw.holds;
        } catch (const std::domain_error&) {
            w << eps << false << std::nan("") << std::nan("") << false;
        }
        w.end_row();
    }
    std::ostringstream tcsv;
    io::CsvWriter tw(tcsv, "talagrand", {"shift", "w2_sq", "ent", "holds"});
    NeedleMeasure g = gaussian_needle();
    for (double s : a.shifts) {
        TalagrandWitness t = talagrand_witness(g, [s](double x) { return std_pdf(x - s); }, 1.0);
        tw << s << t.w2_sq << t.ent << t.holds;
        tw.end_row();
    }
    if (wants(c, "csv")) {
        open_out(c, "lsi-witness.csv") << csv.str();
        open_out(c, "talagrand.csv") << tcsv.str();
    }
    if (wants(c, "json"))
        write_json(c, "lsi-witness.json", {{"t", a.t}, {"ratio", r}, {"lambda", lambda}, {"any_holds", any}});
    return any ? kOk : kFlagged;
}

}  // namespace needle::cli
