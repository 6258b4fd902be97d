#include "dysonrg/certify.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dysonrg {

namespace {

std::array<double, 2> seed_equations_rhs(double a, double b) {
  const double x = std::log(std::exp(b - a) + 0.5 * std::exp(a - b));
  const double y = std::log(1.5 * std::exp(b - a) + 0.5 * std::exp(a - b));
  const double z = std::log(std::exp(-a - b) + 0.5 * std::exp(a + b));
  const double w = std::log(1.5 * std::exp(-a - b) + 0.5 * std::exp(a + b));
  const double log15_2 = 2.0 * std::log(1.5);
  return {(-log15_2 + x - y + z - w) / 8.0, (-log15_2 - x + y - z + w) / 8.0};
}

double seed_residual(double a, double b) {
  const auto rhs = seed_equations_rhs(a, b);
  return std::fabs(a - rhs[0]) + std::fabs(b - rhs[1]);
}

}  // namespace

MajoritySeedSolution majority_seed_solve(double tolerance, int max_iterations) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double a = 0.0, b = 0.0;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const auto rhs = seed_equations_rhs(a, b);
    a = rhs[0];
    b = rhs[1];
    const double resid = seed_residual(a, b);
    if (resid < tolerance) return MajoritySeedSolution{a, b, iter, resid};
    if (iter == max_iterations / 2) {
      // Plain iteration is slow to settle here; switch to Newton on
      // g(a,b) = (a,b) - rhs(a,b) with a finite-difference Jacobian.
      for (int newton = 0; newton < 60; ++newton) {
        const auto r0 = seed_equations_rhs(a, b);
        const double ga = a - r0[0], gb = b - r0[1];
        const double step = 1e-7;
        const auto ra = seed_equations_rhs(a + step, b);
        const auto rb = seed_equations_rhs(a, b + step);
        const double j11 = 1.0 - (ra[0] - r0[0]) / step;
        const double j12 = -(rb[0] - r0[0]) / step;
        const double j21 = -(ra[1] - r0[1]) / step;
        const double j22 = 1.0 - (rb[1] - r0[1]) / step;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        a -= (j22 * ga - j12 * gb) / det;
        b -= (-j21 * ga + j11 * gb) / det;
        const double nr = seed_residual(a, b);
        if (nr < tolerance) return MajoritySeedSolution{a, b, iter + newton + 1, nr};
      }
    }
  }
  throw std::runtime_error("majority_seed_solve: no convergence within iteration cap");
}

}  // namespace dysonrg
