#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nesyv {

// Closed interval [lo, hi] over finite doubles. Endpoints use native
// rounding; downstream tests supply their own tolerances. Construction
// rejects NaN/infinite endpoints and inverted bounds so failures localize
// at the producing operation.
class Interval {
public:
    Interval() = default;

    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("interval endpoints must be finite");
        if (lo > hi)
            throw std::invalid_argument("interval requires lo <= hi");
    }

    static Interval point(double x) { return Interval(x, x); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    bool degenerate() const { return lo_ == hi_; }

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
    }

    friend Interval operator*(const Interval& a, const Interval& b) {
        double p1 = a.lo_ * b.lo_;
        double p2 = a.lo_ * b.hi_;
        double p3 = a.hi_ * b.lo_;
        double p4 = a.hi_ * b.hi_;
        return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                        std::max(std::max(p1, p2), std::max(p3, p4)));
    }

private:
    double lo_ = 0;
    double hi_ = 0;
};

inline Interval one_minus(const Interval& a) { return Interval(1.0 - a.hi(), 1.0 - a.lo()); }

} // namespace nesyv
