#pragma once

#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

namespace needle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool interior(double x) const { return x > lo && x < hi; }
    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

Interval make_interval(double lo, double hi);

// Finite union of intervals kept sorted, disjoint and with strict gaps.
// Endpoint openness is not tracked: every consumer integrates against a
// density, so a single point carries no mass.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::initializer_list<Interval> parts);
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet line() { return IntervalSet{{-kInf, kInf}}; }
    static IntervalSet left_of(double r) { return IntervalSet{{-kInf, r}}; }
    static IntervalSet right_of(double r) { return IntervalSet{{r, kInf}}; }

    const std::vector<Interval>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    IntervalSet complement() const;
    IntervalSet complement_within(const Interval& dom) const;
    IntervalSet clip(const Interval& dom) const;
    // every component widened by eps on both sides
    IntervalSet dilate(double eps) const;
    std::vector<double> boundary_points() const;

    std::string str() const;
    bool operator==(const IntervalSet&) const = default;

private:
    void canonicalize();
    std::vector<Interval> parts_;
};

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_symdiff(const IntervalSet& a, const IntervalSet& b);

struct SetAlgebra {
    IntervalSet union_set;
    IntervalSet intersection;
    IntervalSet symmetric_difference;
};
SetAlgebra set_algebra(const IntervalSet& a, const IntervalSet& b);

}  // namespace needle
