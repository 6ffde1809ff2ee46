// needle-lab: batch front end for the needle laboratory.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "needle/io.hpp"

using namespace needle::cli;

namespace {

// {"command": "profile", "D": 3, "theta-grid": 9} -> profile --D 3 --theta-grid 9
std::vector<std::string> config_to_args(const std::string& path)
{
    auto j = needle::io::read_json_file(path);
    if (!j.is_object() || !j.contains("command")) throw std::runtime_error(path + ": config needs a \"command\" key");
    std::vector<std::string> args{j.at("command").get<std::string>()};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "command") continue;
        args.push_back("--" + it.key());
        const auto& v = it.value();
        if (v.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ',';
                s += v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
            }
            args.push_back(s);
        } else if (v.is_string()) {
            args.push_back(v.get<std::string>());
        } else {
            args.push_back(v.dump());
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    // --config FILE [more flags]; later flags override the file
    if (args.size() >= 2 && args[0] == "--config") {
        try {
            auto rest = std::vector<std::string>(args.begin() + 2, args.end());
            args = config_to_args(args[1]);
            args.insert(args.end(), rest.begin(), rest.end());
        } catch (const std::exception& e) {
            std::cerr << "needle-lab: " << e.what() << '\n';
            return kUsage;
        }
    }

    CLI::App app{"needle-lab: needle decomposition laboratory"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Common common;
    if (const char* env = std::getenv("NEEDLE_LAB_OUT")) common.out_dir = env;
    std::string formats = "csv";

    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", common.out_dir, "output directory (default $NEEDLE_LAB_OUT or .)");
        s->add_option("--format", formats, "comma list from csv,json,svg");
        s->add_option("--jobs", common.jobs, "concurrent evaluations")->check(CLI::PositiveNumber);
    };

    ProfileArgs pa;
    auto* sp = app.add_subcommand("profile", "model and diameter-bounded profiles");
    sp->add_option("--K", pa.K)->check(CLI::PositiveNumber);
    sp->add_option("--D", pa.D)->check(CLI::PositiveNumber);
    sp->add_option("--theta-grid", pa.theta_grid, "number of interior theta points")->check(CLI::PositiveNumber);
    add_common(sp);

    NeedleArgs na;
    auto* sn = app.add_subcommand("needle-report", "deficit report for one weight or a family file");
    sn->add_option("--weights", na.weights, "weight family JSON (default: the Gaussian)");
    sn->add_option("--name", na.name, "only the weight with this name");
    sn->add_option("--theta", na.theta);
    sn->add_option("--c4", na.c4, "tail constant to check against");
    add_common(sn);

    HingeSweepArgs ha;
    auto* sd = app.add_subcommand("deficit-sweep", "hinge family through the deficit lab");
    auto* sr = app.add_subcommand("revpoincare-sweep", "reverse Poincare ratio along the hinge family");
    for (auto* s : {sd, sr}) {
        s->add_option("--theta", ha.theta);
        s->add_option("--t-list", ha.t_list)->delimiter(',');
        s->add_option("--kink-pos", ha.kink_pos);
        add_common(s);
    }

    EnsembleArgs ea;
    auto* se = app.add_subcommand("ensemble-run", "classification and main estimate for an ensemble file");
    se->add_option("--ensemble", ea.file)->required();
    se->add_option("--eps", ea.eps);
    add_common(se);

    ProductArgs pr;
    auto* sps = app.add_subcommand("product-sim", "product-space sweep");
    sps->add_option("--spec", pr.spec, "ProductSpec JSON (overrides the flags below)");
    sps->add_option("--fibers", pr.fibers)->check(CLI::PositiveNumber);
    sps->add_option("--theta", pr.theta);
    sps->add_option("--perturbation", pr.perturbation)->check(CLI::IsMember({"hinge", "flip", "offset"}));
    sps->add_option("--intensity-list", pr.intensities)->delimiter(',');
    sps->add_option("--eps", pr.eps);
    sps->add_option("--slack", pr.slack);
    add_common(sps);

    LsiArgs la;
    auto* sl = app.add_subcommand("lsi-witness", "reverse log-Sobolev and Talagrand witnesses");
    sl->add_option("--fibers", la.fibers)->check(CLI::PositiveNumber);
    sl->add_option("--theta", la.theta);
    sl->add_option("--t", la.t);
    sl->add_option("--sigma", la.sigma)->check(CLI::PositiveNumber);
    sl->add_option("--lambda-factor", la.lambda_factor);
    sl->add_option("--eps-list", la.eps_list)->delimiter(',');
    sl->add_option("--shift-list", la.shifts)->delimiter(',');
    add_common(sl);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    common.formats.clear();
    std::string cur;
    for (char ch : formats + ",") {
        if (ch != ',') {
            cur += ch;
            continue;
        }
        if (cur != "csv" && cur != "json" && cur != "svg") {
            std::cerr << "needle-lab: unknown format '" << cur << "'\n";
            return kUsage;
        }
        common.formats.push_back(cur);
        cur.clear();
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        int rc = kOk;
        if (sub == sp) rc = cmd_profile(common, pa);
        else if (sub == sn) rc = cmd_needle_report(common, na);
        else if (sub == sd) rc = cmd_deficit_sweep(common, ha);
        else if (sub == sr) rc = cmd_revpoincare_sweep(common, ha);
        else if (sub == se) rc = cmd_ensemble_run(common, ea);
        else if (sub == sps) rc = cmd_product_sim(common, pr);
        else if (sub == sl) rc = cmd_lsi_witness(common, la);
        write_run_meta(common, sub->get_name(), args);
        if (rc == kFlagged) std::cerr << "needle-lab: contract flags raised (see output)\n";
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "needle-lab: " << e.what() << '\n';
        return kError;
    }
}
