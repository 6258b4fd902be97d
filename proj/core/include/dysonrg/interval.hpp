#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dysonrg {

inline double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

// Enclosure arithmetic with outward ulp widening.
//
// Hardware +,-,*,/ are correctly rounded (error <= 0.5 ulp), so widening the
// rounded result by one ulp on each side encloses the exact real result.
// glibc exp/log are faithful to about 1 ulp, so those endpoints are widened
// by two ulps. This avoids fesetround(), which gcc reorders around under
// default flags.
class Interval {
 public:
  Interval() : lo_(0.0), hi_(0.0) {}
  Interval(double point) : lo_(point), hi_(point) {}  // exact, no widening
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw std::invalid_argument("interval: lo > hi");
  }

  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  double width() const { return hi_ - lo_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  Interval operator-() const { return Interval(-hi_, -lo_); }

  Interval& operator+=(const Interval& r) {
    lo_ = next_down(lo_ + r.lo_);
    hi_ = next_up(hi_ + r.hi_);
    return *this;
  }
  Interval& operator-=(const Interval& r) { return *this += (-r); }

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
    const double p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    const double lo = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    const double hi = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    return Interval(next_down(lo), next_up(hi));
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo_ <= 0.0 && b.hi_ >= 0.0)
      throw std::domain_error("interval division: denominator contains zero");
    const double p1 = a.lo_ / b.lo_, p2 = a.lo_ / b.hi_;
    const double p3 = a.hi_ / b.lo_, p4 = a.hi_ / b.hi_;
    const double lo = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    const double hi = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    return Interval(next_down(lo), next_up(hi));
  }

  Interval& operator*=(const Interval& r) { return *this = *this * r; }
  Interval& operator/=(const Interval& r) { return *this = *this / r; }

  static Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::fmin(a.lo_, b.lo_), std::fmax(a.hi_, b.hi_));
  }

 private:
  double lo_, hi_;
};

inline Interval exp(const Interval& x) {
  double lo = next_down(next_down(std::exp(x.lower())));
  const double hi = next_up(next_up(std::exp(x.upper())));
  if (lo < 0.0) lo = 0.0;  // exp > 0; widening may cross below at underflow
  return Interval(lo, hi);
}

inline Interval log(const Interval& x) {
  if (x.lower() <= 0.0) throw std::domain_error("interval log: argument not positive");
  return Interval(next_down(next_down(std::log(x.lower()))),
                  next_up(next_up(std::log(x.upper()))));
}

inline Interval abs(const Interval& x) {
  if (x.lower() >= 0.0) return x;
  if (x.upper() <= 0.0) return -x;
  return Interval(0.0, std::fmax(-x.lower(), x.upper()));
}

inline Interval max(const Interval& a, const Interval& b) {
  return Interval(std::fmax(a.lower(), b.lower()), std::fmax(a.upper(), b.upper()));
}

inline Interval min(const Interval& a, const Interval& b) {
  return Interval(std::fmin(a.lower(), b.lower()), std::fmin(a.upper(), b.upper()));
}

}  // namespace dysonrg
