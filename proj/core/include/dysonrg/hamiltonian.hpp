#pragma once

#include <cmath>
#include <stdexcept>

#include "dysonrg/series.hpp"
#include "dysonrg/spin_polynomial.hpp"

namespace dysonrg {

// Couplings of H = -gamma sum sigma_i sigma_{i+1} - eps sum J_ij sigma_i sigma_j
// with J_ij = |i-j|^-alpha for |i-j| >= 2 and zero otherwise. The exponent of
// the Gibbs weight exp(-H) is what the block machinery consumes, so all
// polynomial coefficients below carry the positive sign.
struct HamiltonianSpec {
  double gamma = 1.0;    // nearest-neighbor coupling, > 0
  double epsilon = 0.0;  // long-range amplitude, >= 0
  double alpha = 2.0;    // decay power, > 1
  int r_max = 8;         // range of explicitly kept long-range terms, >= 2

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    if (r_max < 2) throw std::invalid_argument("r_max must be >= 2");
  }

  double coupling(int i, int j) const {
    const int d = i < j ? j - i : i - j;
    return d >= 2 ? std::pow(static_cast<double>(d), -alpha) : 0.0;
  }
};

// The part of the Hamiltonian exponent whose terms touch the block being
// summed out: gamma(sigma0 sigma1 + sigma1 sigma2) plus the long-range terms
// anchored at sites 0 or 1, truncated at distance r_max. The weighted norm of
// the dropped tail is bounded by 2 eps e^{2 mu} sum_{d > r_max} d^-alpha.
template <class T>
struct HatHamiltonian {
  SpinPolynomial<T> poly;
  double tail_norm;  // upper bound on the weighted norm of the dropped tail
};

template <class T>
HatHamiltonian<T> hamiltonian_hat(const HamiltonianSpec& spec, const NormWeights& w) {
  spec.validate();
  using Term = typename SpinPolynomial<T>::Term;
  std::vector<Term> terms;
  terms.push_back(Term{SiteSet::original({0, 1}), SiteSet::block({}), T(spec.gamma)});
  terms.push_back(Term{SiteSet::original({1, 2}), SiteSet::block({}), T(spec.gamma)});
  if (spec.epsilon > 0.0) {
    for (int i = 0; i <= 1; ++i)
      for (int j = i + 2; j - i <= spec.r_max; ++j)
        terms.push_back(Term{SiteSet(Lattice::original, {i, j}), SiteSet::block({}),
                             T(spec.epsilon * spec.coupling(i, j))});
  }
  double tail = 0.0;
  if (spec.epsilon > 0.0)
    tail = 2.0 * spec.epsilon * std::exp(2.0 * w.mu) *
           power_sum_tail(spec.alpha, spec.r_max + 1).upper();
  return HatHamiltonian<T>{SpinPolynomial<T>::from_terms(terms), tail};
}

}  // namespace dysonrg
