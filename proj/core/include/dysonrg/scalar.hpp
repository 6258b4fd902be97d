#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dysonrg/interval.hpp"

// Uniform scalar vocabulary so the algebra templates run unchanged in
// double (float mode) and Interval (enclosure mode).

namespace dysonrg {

inline double sabs(double x) { return std::fabs(x); }
inline Interval sabs(const Interval& x) { return abs(x); }

inline double sexp(double x) { return std::exp(x); }
inline Interval sexp(const Interval& x) { return exp(x); }

inline double slog(double x) { return std::log(x); }
inline Interval slog(const Interval& x) { return log(x); }

inline double smax(double a, double b) { return a > b ? a : b; }
inline Interval smax(const Interval& a, const Interval& b) { return max(a, b); }

// Endpoint accessors; for plain doubles the point is its own enclosure.
inline double sup(double x) { return x; }
inline double sup(const Interval& x) { return x.upper(); }
inline double inf(double x) { return x; }
inline double inf(const Interval& x) { return x.lower(); }
inline double mid(double x) { return x; }
inline double mid(const Interval& x) { return x.mid(); }

inline bool is_exact_zero(double x) { return x == 0.0; }
inline bool is_exact_zero(const Interval& x) {
  return x.lower() == 0.0 && x.upper() == 0.0;
}

// Fixed-shape pairwise reduction tree; results do not depend on how the
// caller might distribute the terms across threads.
template <class T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T(0.0);
  if (n <= 8) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace dysonrg
