#pragma once

#include <cmath>
#include <string>

#include "dysonrg/hamiltonian.hpp"
#include "dysonrg/rg_map.hpp"
#include "dysonrg/series.hpp"

namespace dysonrg {

// Approximate fixed points of F(c + hat H) for the two kernels.
//
// Decimation: c0 = gamma sigma_0 s_{-1} is exact at epsilon = 0.
// Majority rule: c0 = (gamma + a) sigma_0 s_{-1} + b sigma_0 s_{-2} with (a,b)
// solving the gamma-independent pair of equations from the one-block sum.
template <class T>
struct SeedPoint {
  KernelKind kernel;
  double gamma;
  double a = 0.0;
  double b = 0.0;
  SpinPolynomial<T> c0;
};

struct MajoritySeedSolution {
  double a;
  double b;
  int iterations;
  double residual;
};

// Solves a = (-2 ln 1.5 + x - y + z - w)/8, b = (-2 ln 1.5 - x + y - z + w)/8
// with x = ln(e^{b-a} + e^{a-b}/2), y = ln(3 e^{b-a}/2 + e^{a-b}/2),
// z = ln(e^{-a-b} + e^{a+b}/2), w = ln(3 e^{-a-b}/2 + e^{a+b}/2), by damped
// fixed-point iteration with a Newton fallback.
MajoritySeedSolution majority_seed_solve(double tolerance = 1e-14, int max_iterations = 400);

template <class T>
SeedPoint<T> decimation_seed(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("decimation_seed: gamma must be positive");
  return SeedPoint<T>{KernelKind::decimation, gamma, 0.0, 0.0,
                      SpinPolynomial<T>::from_terms(
                          {{SiteSet::original({0}), SiteSet::block({-1}), T(gamma)}})};
}

template <class T>
SeedPoint<T> majority_seed(double gamma, double tolerance = 1e-14) {
  if (!(gamma > 0.0)) throw std::invalid_argument("majority_seed: gamma must be positive");
  const MajoritySeedSolution sol = majority_seed_solve(tolerance);
  return SeedPoint<T>{
      KernelKind::majority, gamma, sol.a, sol.b,
      SpinPolynomial<T>::from_terms(
          {{SiteSet::original({0}), SiteSet::block({-1}), T(gamma + sol.a)},
           {SiteSet::original({0}), SiteSet::block({-2}), T(sol.b)}})};
}

template <class T>
SeedPoint<T> make_seed(KernelKind kind, double gamma) {
  return kind == KernelKind::decimation ? decimation_seed<T>(gamma)
                                        : majority_seed<T>(gamma);
}

// Inputs and verdict of the contraction-certificate check
//
//   inf_{r>0} (||F(c0+hatH0)-c0|| + h) / (r [1 - D(c0+hatH0) - rho(r+h)]) < 1
//
// with hatH0 the nearest-neighbor truncation and h = ||hatH - hatH0||. In
// enclosure mode the verdict requires the upper endpoints of both D0 and the
// objective to clear their thresholds.
template <class T>
struct Certificate {
  KernelKind kernel = KernelKind::majority;
  double gamma = 0.0;
  double epsilon = 0.0;
  double alpha = 2.0;
  NormWeights weights;
  double seed_a = 0.0;
  double seed_b = 0.0;

  T d0{0.0};           // D(c0 + hatH0)
  T residual{0.0};     // ||F(c0 + hatH0) - c0||
  T h_weighted{0.0};   // eps e^{2 mu} c(alpha), the norm-consistent tail
  T h_plain{0.0};      // eps c(alpha), the unweighted variant, for the report
  double r_max = 0.0;  // where the denominator bracket closes
  double r_star = 0.0;
  T objective{0.0};
  bool pass = false;
  std::string note;
};

namespace detail {

inline double rho_point(double r) { return 2.0 * std::expm1(r) / (2.0 - std::exp(r)); }

// r solving rho(r) = y, i.e. the largest usable radius before the
// denominator bracket closes.
inline double rho_inverse(double y) { return std::log((2.0 * y + 2.0) / (y + 2.0)); }

template <class T>
T from_enclosure(const Interval& value);

template <>
inline double from_enclosure<double>(const Interval& value) {
  return value.upper();
}
template <>
inline Interval from_enclosure<Interval>(const Interval& value) {
  return value;
}

}  // namespace detail

template <class T>
Certificate<T> theorem_certificate(const SeedPoint<T>& seed, const HamiltonianSpec& spec,
                                   const NormWeights& w) {
  spec.validate();
  Certificate<T> cert;
  cert.kernel = seed.kernel;
  cert.gamma = spec.gamma;
  cert.epsilon = spec.epsilon;
  cert.alpha = spec.alpha;
  cert.weights = w;
  cert.seed_a = seed.a;
  cert.seed_b = seed.b;

  HamiltonianSpec nn_only = spec;
  nn_only.epsilon = 0.0;
  const SpinPolynomial<T> hat0 = hamiltonian_hat<T>(nn_only, w).poly;
  const SpinPolynomial<T> input = seed.c0 + hat0;
  const BlockKernel kernel = make_kernel(seed.kernel);

  cert.d0 = contraction_diagnostic(input, kernel, w);
  cert.residual = (rg_fixed_point_map(input, kernel) - seed.c0).weighted_norm(w);
  if (spec.epsilon > 0.0) {
    const Interval c_alpha = coupling_tail_sum(spec.alpha);
    const T eps = T(spec.epsilon);
    cert.h_weighted = eps * sexp(T(2.0) * T(w.mu)) * detail::from_enclosure<T>(c_alpha);
    cert.h_plain = eps * detail::from_enclosure<T>(c_alpha);
  }

  if (!(sup(cert.d0) < 1.0)) {
    cert.note = "D(c0 + hatH0) >= 1";
    return cert;
  }
  const double y = 1.0 - sup(cert.d0);
  cert.r_max = detail::rho_inverse(y) - sup(cert.h_weighted);
  if (!(cert.r_max > 0.0)) {
    cert.note = "r_max <= 0: h exceeds rho^{-1}(1 - D0)";
    return cert;
  }

  // Scan a dense grid, then tighten the best bracket by golden section. The
  // objective looks unimodal but the grid guards against surprises.
  const double resid_mid = mid(cert.residual);
  const double h_mid = mid(cert.h_weighted);
  const double d0_mid = mid(cert.d0);
  auto objective_at = [&](double r) {
    const double den = r * (1.0 - d0_mid - detail::rho_point(r + h_mid));
    return den > 0.0 ? (resid_mid + h_mid) / den : std::numeric_limits<double>::infinity();
  };
  constexpr int kGrid = 1024;
  int best = 1;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kGrid; ++i) {
    const double val = objective_at(cert.r_max * i / (kGrid + 1.0));
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double lo = cert.r_max * (best - 1) / (kGrid + 1.0);
  double hi = cert.r_max * (best + 1) / (kGrid + 1.0);
  constexpr double kGolden = 0.6180339887498949;
  double c1 = hi - kGolden * (hi - lo);
  double c2 = lo + kGolden * (hi - lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    if (objective_at(c1) < objective_at(c2))
      hi = c2;
    else
      lo = c1;
    c1 = hi - kGolden * (hi - lo);
    c2 = lo + kGolden * (hi - lo);
  }
  cert.r_star = 0.5 * (lo + hi);

  const T r(cert.r_star);
  const T denominator = r * (T(1.0) - cert.d0 - rho(r + cert.h_weighted));
  if (!(inf(denominator) > 0.0)) {
    cert.note = "denominator bracket not positive at r*";
    return cert;
  }
  cert.objective = (cert.residual + cert.h_weighted) / denominator;
  cert.pass = sup(cert.objective) < 1.0 && sup(cert.d0) < 1.0;
  return cert;
}

// Largest tested epsilon with a passing certificate, located by bisection to
// relative width 1e-6. The search interval is capped where h alone closes the
// denominator bracket, so the top end always fails.
template <class T>
struct ThresholdResult {
  double epsilon_pass = 0.0;  // largest epsilon with verdict pass
  double epsilon_fail = 0.0;  // smallest tested epsilon with verdict fail
  Certificate<T> certificate;  // certificate at epsilon_pass
};

template <class T>
ThresholdResult<T> epsilon_threshold(KernelKind kind, double alpha, double gamma,
                                     const NormWeights& w) {
  const SeedPoint<T> seed = make_seed<T>(kind, gamma);
  HamiltonianSpec spec;
  spec.gamma = gamma;
  spec.alpha = alpha;
  spec.epsilon = 0.0;
  ThresholdResult<T> result;
  result.certificate = theorem_certificate(seed, spec, w);
  if (!result.certificate.pass) return result;

  const double y = 1.0 - sup(result.certificate.d0);
  const double h_max = detail::rho_inverse(y);
  double lo = 0.0;
  double hi = h_max / (std::exp(2.0 * w.mu) * coupling_tail_sum(alpha).lower());
  for (int i = 0; i < 80 && hi - lo > 1e-6 * hi; ++i) {
    spec.epsilon = 0.5 * (lo + hi);
    const Certificate<T> cert = theorem_certificate(seed, spec, w);
    if (cert.pass) {
      lo = spec.epsilon;
      result.certificate = cert;
    } else {
      hi = spec.epsilon;
    }
  }
  result.epsilon_pass = lo;
  result.epsilon_fail = hi;
  return result;
}

}  // namespace dysonrg
