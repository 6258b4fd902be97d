#include "dysonrg/series.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace dysonrg {

namespace {

// int_a^inf x^-alpha dx = a^(1-alpha)/(alpha-1), evaluated as an enclosure.
Interval power_integral_from(double alpha, double a) {
  const Interval la = log(Interval(a));
  const Interval expo = Interval(1.0) - Interval(alpha);
  return exp(expo * la) / (Interval(alpha) - Interval(1.0));
}

}  // namespace

Interval power_sum_tail(double alpha, std::int64_t j_start, std::int64_t explicit_terms) {
  if (!(alpha > 1.0)) throw std::domain_error("power_sum_tail: alpha must exceed 1");
  if (j_start < 1) throw std::invalid_argument("power_sum_tail: j_start must be >= 1");

  Interval partial(0.0);
  const std::int64_t last = j_start + explicit_terms - 1;
  for (std::int64_t j = j_start; j <= last; ++j) {
    const Interval term = exp(Interval(-alpha) * log(Interval(static_cast<double>(j))));
    partial += term;
  }
  const Interval tail = Interval::hull(power_integral_from(alpha, static_cast<double>(last + 1)),
                                       power_integral_from(alpha, static_cast<double>(last)));
  return partial + tail;
}

Interval coupling_tail_sum(double alpha, std::int64_t r_start) {
  if (r_start < 2) throw std::invalid_argument("coupling_tail_sum: r_start must be >= 2");
  struct Key {
    double alpha;
    std::int64_t r;
    bool operator<(const Key& o) const {
      return alpha < o.alpha || (alpha == o.alpha && r < o.r);
    }
  };
  static std::map<Key, Interval> cache;
  static std::mutex mutex;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(Key{alpha, r_start});
    if (it != cache.end()) return it->second;
  }
  const Interval value = Interval(2.0) * power_sum_tail(alpha, r_start);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(Key{alpha, r_start}, value);
  return value;
}

}  // namespace dysonrg
