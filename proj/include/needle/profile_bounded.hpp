#pragma once

namespace needle {

struct BoundedProfileQuery {
    double K = 1.0;
    double D = 1.0;
    double theta = 0.5;
};

struct BoundedProfile {
    double value;
    double argmin_xi;
};

void validate(const BoundedProfileQuery& q);

// b in [xi, xi+D] splitting the window mass in proportion theta
double b_of(const BoundedProfileQuery& q, double xi);
double f_xi_D(const BoundedProfileQuery& q, double xi);
// grid of 65 points on [-D, 0], then golden section on the best bracket
BoundedProfile profile_D(const BoundedProfileQuery& q);
double gap_lower_bound(double K, double D);

}  // namespace needle
