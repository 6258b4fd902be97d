#pragma once

#include <cmath>
#include <cstdint>

#include "dysonrg/interval.hpp"

namespace dysonrg {

// Enclosure of sum_{j >= j_start} j^-alpha: explicit partial sum plus the
// integral-comparison bracket [int_{N+1}^inf x^-alpha dx, int_N^inf x^-alpha dx]
// for the remainder. Requires alpha > 1.
Interval power_sum_tail(double alpha, std::int64_t j_start,
                        std::int64_t explicit_terms = 1000000);

// c(alpha) = 2 sum_{j >= r_start} j^-alpha, the norm of the long-range
// coupling tail per unit epsilon (r_start = 2 gives the full tail h of the
// hat-Hamiltonian truncated to its nearest-neighbor part).
Interval coupling_tail_sum(double alpha, std::int64_t r_start = 2);

}  // namespace dysonrg
