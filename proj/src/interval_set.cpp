#include "needle/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace needle {

Interval make_interval(double lo, double hi)
{
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw std::domain_error("interval needs lo <= hi");
    return {lo, hi};
}

IntervalSet::IntervalSet(std::initializer_list<Interval> parts) : parts_(parts) { canonicalize(); }

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { canonicalize(); }

void IntervalSet::canonicalize()
{
    for (const auto& c : parts_)
        if (std::isnan(c.lo) || std::isnan(c.hi)) throw std::domain_error("interval with NaN endpoint");
    std::erase_if(parts_, [](const Interval& c) { return !(c.hi > c.lo); });
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const auto& c : parts_) {
        if (!out.empty() && c.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, c.hi);
        else
            out.push_back(c);
    }
    parts_ = std::move(out);
}

IntervalSet IntervalSet::complement() const
{
    std::vector<Interval> out;
    double cur = -kInf;
    for (const auto& c : parts_) {
        if (c.lo > cur) out.push_back({cur, c.lo});
        cur = c.hi;
    }
    if (cur < kInf) out.push_back({cur, kInf});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement_within(const Interval& dom) const
{
    return complement().clip(dom);
}

IntervalSet IntervalSet::clip(const Interval& dom) const
{
    std::vector<Interval> out;
    for (const auto& c : parts_) out.push_back({std::max(c.lo, dom.lo), std::min(c.hi, dom.hi)});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::dilate(double eps) const
{
    std::vector<Interval> out;
    for (const auto& c : parts_) out.push_back({c.lo - eps, c.hi + eps});
    return IntervalSet(std::move(out));
}

std::vector<double> IntervalSet::boundary_points() const
{
    std::vector<double> pts;
    for (const auto& c : parts_) {
        if (std::isfinite(c.lo)) pts.push_back(c.lo);
        if (std::isfinite(c.hi)) pts.push_back(c.hi);
    }
    return pts;
}

std::string IntervalSet::str() const
{
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " U ";
        os << '[' << parts_[i].lo << ", " << parts_[i].hi << ']';
    }
    return os.str();
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b)
{
    std::vector<Interval> all = a.components();
    all.insert(all.end(), b.components().begin(), b.components().end());
    return IntervalSet(std::move(all));
}

IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b)
{
    std::vector<Interval> out;
    const auto& x = a.components();
    const auto& y = b.components();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        double lo = std::max(x[i].lo, y[j].lo);
        double hi = std::min(x[i].hi, y[j].hi);
        if (hi > lo) out.push_back({lo, hi});
        if (x[i].hi < y[j].hi)
            ++i;
        else
            ++j;
    }
    return IntervalSet(std::move(out));
}

IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b)
{
    return set_intersection(a, b.complement());
}

IntervalSet set_symdiff(const IntervalSet& a, const IntervalSet& b)
{
    return set_union(set_difference(a, b), set_difference(b, a));
}

SetAlgebra set_algebra(const IntervalSet& a, const IntervalSet& b)
{
    return {set_union(a, b), set_intersection(a, b), set_symdiff(a, b)};
}

}  // namespace needle
