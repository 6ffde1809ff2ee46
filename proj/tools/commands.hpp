#pragma once

#include <string>
#include <vector>

namespace needle::cli {

enum Exit { kOk = 0, kError = 1, kFlagged = 2, kUsage = 64 };

struct Common {
    std::string out_dir;
    std::vector<std::string> formats{"csv"};
    int jobs = 1;
};

struct ProfileArgs {
    double K = 1, D = 2;
    int theta_grid = 19;
};

struct NeedleArgs {
    std::string weights;  // empty: the Gaussian
    std::string name;
    double theta = 0.3;
    double c4 = -1;  // < 0: unset
};

struct HingeSweepArgs {
    double theta = 0.3;
    std::vector<double> t_list{0.4, 0.2, 0.1, 0.05, 0.025};
    double kink_pos = 0;
};

struct EnsembleArgs {
    std::string file;
    double eps = 0.1;
};

struct ProductArgs {
    std::string spec;
    int fibers = 16;
    double theta = 0.3;
    std::string perturbation = "hinge";
    std::vector<double> intensities{0.4, 0.2, 0.1, 0.05};
    double eps = 0.1;
    double slack = 0;
};

struct LsiArgs {
    int fibers = 16;
    double theta = 0.3;
    double t = 0.1;
    double sigma = 6;
    double lambda_factor = 1.05;
    std::vector<double> eps_list{0.01, 0.02, 0.05, 0.1, 0.15, 0.2};
    std::vector<double> shifts{0.1, 0.5};
};

int cmd_profile(const Common& c, const ProfileArgs& a);
int cmd_needle_report(const Common& c, const NeedleArgs& a);
int cmd_deficit_sweep(const Common& c, const HingeSweepArgs& a);
int cmd_revpoincare_sweep(const Common& c, const HingeSweepArgs& a);
int cmd_ensemble_run(const Common& c, const EnsembleArgs& a);
int cmd_product_sim(const Common& c, const ProductArgs& a);
int cmd_lsi_witness(const Common& c, const LsiArgs& a);

void write_run_meta(const Common& c, const std::string& command, const std::vector<std::string>& argv);

}  // namespace needle::cli
