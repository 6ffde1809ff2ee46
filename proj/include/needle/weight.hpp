#pragma once

#include <vector>

#include "needle/interval_set.hpp"

namespace needle {

struct Knot {
    double pos;
    double value;
};

struct WeightEval {
    double value;
    double left_slope;
    double right_slope;
};

// psi on a piece: x^2/2 + slope*x + intercept  (offset already folded in)
struct WeightPiece {
    double lo;
    double hi;
    double slope;
    double intercept;
};

// psi(x) = x^2/2 + c(x) + offset with c convex piecewise linear.  Convexity of
// c is checked on construction, so psi is 1-convex by construction.
class ConvexWeight {
public:
    ConvexWeight() = default;
    ConvexWeight(std::vector<Knot> knots, double slope_left, double slope_right, double offset = 0.0);

    static ConvexWeight gaussian();
    // t * max(x - p, 0)
    static ConvexWeight hinge(double t, double p = 0.0);
    // slopes has knots.size()+1 entries; c(positions[0]) = 0
    static ConvexWeight from_slopes(const std::vector<double>& positions, const std::vector<double>& slopes,
                                    double offset = 0.0);

    const std::vector<Knot>& knots() const { return knots_; }
    double slope_left() const { return sl_; }
    double slope_right() const { return sr_; }
    double offset() const { return offset_; }

    double correction(double x) const;
    double operator()(double x) const { return 0.5 * x * x + correction(x) + offset_; }
    WeightEval eval(double x) const;
    std::vector<WeightPiece> pieces() const;

    ConvexWeight with_offset(double off) const;
    // x -> psi(-x)
    ConvexWeight reflected() const;
    // x -> psi(x - c)
    ConvexWeight translated(double c) const;

private:
    std::vector<Knot> knots_;
    double sl_ = 0.0;
    double sr_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> slopes_;  // size knots+1, nondecreasing
};

WeightEval weight_eval(const ConvexWeight& w, double x);

}  // namespace needle
