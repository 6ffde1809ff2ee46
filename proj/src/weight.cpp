#include "needle/weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "needle/gauss.hpp"

namespace needle {

ConvexWeight::ConvexWeight(std::vector<Knot> knots, double slope_left, double slope_right, double offset)
    : knots_(std::move(knots)), sl_(slope_left), sr_(slope_right), offset_(offset)
{
    if (!std::isfinite(sl_) || !std::isfinite(sr_) || !std::isfinite(offset_))
        throw std::domain_error("ConvexWeight: non-finite slope or offset");
    for (const auto& k : knots_)
        if (!std::isfinite(k.pos) || !std::isfinite(k.value))
            throw std::domain_error("ConvexWeight: non-finite knot");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].pos > knots_[i - 1].pos))
            throw std::domain_error("ConvexWeight: knot positions must be strictly increasing");
    if (knots_.empty()) {
        if (sl_ != sr_) throw std::domain_error("ConvexWeight: a kink needs a knot");
        slopes_ = {sl_};
        return;
    }
    slopes_.push_back(sl_);
    for (std::size_t i = 1; i < knots_.size(); ++i)
        slopes_.push_back((knots_[i].value - knots_[i - 1].value) / (knots_[i].pos - knots_[i - 1].pos));
    slopes_.push_back(sr_);
    for (std::size_t i = 1; i < slopes_.size(); ++i) {
        double tol = 1e-12 * std::max(1.0, std::abs(slopes_[i]));
        if (slopes_[i] < slopes_[i - 1] - tol)
            throw std::domain_error("ConvexWeight: correction slopes must be nondecreasing");
    }
}

ConvexWeight ConvexWeight::gaussian() { return ConvexWeight({}, 0.0, 0.0, kLogSqrt2Pi); }

ConvexWeight ConvexWeight::hinge(double t, double p)
{
    if (!(t >= 0)) throw std::domain_error("hinge: negative kink");
    return ConvexWeight({{p, 0.0}}, 0.0, t);
}

ConvexWeight ConvexWeight::from_slopes(const std::vector<double>& positions, const std::vector<double>& slopes,
                                       double offset)
{
    if (slopes.size() != positions.size() + 1) throw std::domain_error("from_slopes: need knots+1 slopes");
    std::vector<Knot> k;
    double v = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i) v += slopes[i] * (positions[i] - positions[i - 1]);
        k.push_back({positions[i], v});
    }
    return ConvexWeight(std::move(k), slopes.front(), slopes.back(), offset);
}

double ConvexWeight::correction(double x) const
{
    if (knots_.empty()) return sl_ * x;
    if (x <= knots_.front().pos) return knots_.front().value + sl_ * (x - knots_.front().pos);
    if (x >= knots_.back().pos) return knots_.back().value + sr_ * (x - knots_.back().pos);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const Knot& k) { return v < k.pos; });
    const Knot& r = *it;
    const Knot& l = *(it - 1);
    double s = (x - l.pos) / (r.pos - l.pos);
    return l.value + s * (r.value - l.value);
}

WeightEval ConvexWeight::eval(double x) const
{
    if (!std::isfinite(x)) throw std::domain_error("weight_eval: x must be finite");
    double sl, sr;
    if (knots_.empty()) {
        sl = sr = sl_;
    } else {
        // index of first knot with pos >= x
        std::size_t i = std::lower_bound(knots_.begin(), knots_.end(), x,
                                         [](const Knot& k, double v) { return k.pos < v; }) -
                        knots_.begin();
        if (i < knots_.size() && knots_[i].pos == x) {
            sl = slopes_[i];
            sr = slopes_[i + 1];
        } else {
            sl = sr = slopes_[i];
        }
    }
    return {(*this)(x), x + sl, x + sr};
}

std::vector<WeightPiece> ConvexWeight::pieces() const
{
    std::vector<WeightPiece> out;
    if (knots_.empty()) {
        out.push_back({-kInf, kInf, sl_, offset_});
        return out;
    }
    double lo = -kInf;
    for (std::size_t i = 0; i <= knots_.size(); ++i) {
        double hi = i < knots_.size() ? knots_[i].pos : kInf;
        // line through the knot that bounds this piece
        const Knot& anchor = i < knots_.size() ? knots_[i] : knots_.back();
        double s = slopes_[i];
        out.push_back({lo, hi, s, anchor.value - s * anchor.pos + offset_});
        lo = hi;
    }
    return out;
}

ConvexWeight ConvexWeight::with_offset(double off) const
{
    ConvexWeight w = *this;
    w.offset_ = off;
    return w;
}

ConvexWeight ConvexWeight::reflected() const
{
    std::vector<Knot> k;
    for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) k.push_back({-it->pos, it->value});
    return ConvexWeight(std::move(k), -sr_, -sl_, offset_);
}

ConvexWeight ConvexWeight::translated(double c) const
{
    // (x-c)^2/2 = x^2/2 - c x + c^2/2; the -c x goes into the correction
    std::vector<Knot> k;
    for (const auto& kn : knots_) k.push_back({kn.pos + c, kn.value - c * (kn.pos + c)});
    // correction(x - c) for an unknotted line sl*x gives sl*x - sl*c
    double extra = knots_.empty() ? -sl_ * c : 0.0;
    return ConvexWeight(std::move(k), sl_ - c, sr_ - c, offset_ + 0.5 * c * c + extra);
}

WeightEval weight_eval(const ConvexWeight& w, double x) { return w.eval(x); }

}  // namespace needle
