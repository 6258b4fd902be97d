#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dysonrg/certify.hpp"
#include "dysonrg/hamiltonian.hpp"
#include "dysonrg/rg_map.hpp"

namespace dysonrg {

// Window and size limits applied after every application of F. Everything
// dropped is accumulated into a reported norm-loss bound; the windows, not
// the map itself, are the only truncation (each f-entry feeds exactly one
// shift k, so the shift sum in F needs no series cutoff).
struct TruncationPolicy {
  int window_sigma = 12;     // largest original site kept
  int window_s = -8;         // most negative block site kept
  int max_x_size = 4;
  int max_y_size = 4;
  double drop_tol = 1e-12;   // weighted-coefficient drop threshold
  int support_cap = SpinPolynomial<double>::kDefaultSupportCap;

  void validate() const {
    if (window_sigma < 2 || window_s > -1)
      throw std::invalid_argument("truncation windows must cover the block");
    if (max_x_size < 1 || max_y_size < 1)
      throw std::invalid_argument("max term sizes must be >= 1");
    if (drop_tol < 0.0) throw std::invalid_argument("drop_tol must be >= 0");
    if (window_sigma + 1 - window_s + 1 > support_cap + 2)
      throw std::invalid_argument("windows exceed the support cap");
  }
};

class divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
struct FixedPointResult {
  SpinPolynomial<T> c_star;
  T residual{0.0};  // || truncate(F(c* + hatH)) - c* ||
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> rate_history;  // successive residual ratios
  RenormalizedHamiltonian<T> hamiltonian;
  T flip_norm{0.0};
  double truncation_loss = 0.0;  // weighted mass dropped across all steps
  double empty_y_mass = 0.0;     // weight on c*(X, empty) terms
};

namespace detail {

template <class T>
SpinPolynomial<T> reindex_ftable(const FTable<T>& f) {
  std::vector<typename SpinPolynomial<T>::Term> terms;
  for (const auto& term : f.entries.terms()) {
    if (term.X.empty()) continue;
    const int k = term.X.min_site() / 2;
    terms.push_back({term.X.shifted(-2 * k), term.Y.shifted(-k), term.coef});
  }
  return SpinPolynomial<T>::from_terms(terms);
}

template <class T>
SpinPolynomial<T> apply_windows(const SpinPolynomial<T>& p, const TruncationPolicy& policy,
                                const NormWeights& w, double& lost) {
  std::vector<typename SpinPolynomial<T>::Term> kept;
  for (const auto& term : p.terms()) {
    const bool out = (!term.X.empty() && term.X.max_site() > policy.window_sigma) ||
                     (!term.Y.empty() && term.Y.min_site() < policy.window_s) ||
                     static_cast<int>(term.X.size()) > policy.max_x_size ||
                     static_cast<int>(term.Y.size()) > policy.max_y_size;
    if (out)
      lost += sup(sabs(term.coef)) *
              std::exp(w.mu * term.X.size() + w.nu * term.Y.size());
    else
      kept.push_back(term);
  }
  return SpinPolynomial<T>::from_terms(kept, policy.support_cap);
}

}  // namespace detail

// Iterates c -> truncate(F(c + hatH)) from the seed until the weighted
// residual drops under tol. The renormalized Hamiltonian comes from the final
// block sum-out. Throws divergence_error after five consecutive residual
// increases.
template <class T>
FixedPointResult<T> iterate_rg(const SeedPoint<T>& seed, const HamiltonianSpec& spec,
                               const BlockKernel& kernel, const TruncationPolicy& policy,
                               const NormWeights& w, double tol = 1e-10,
                               int max_iter = 100) {
  spec.validate();
  policy.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("iterate_rg: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("iterate_rg: max_iter must be >= 1");

  HamiltonianSpec windowed = spec;
  windowed.r_max = std::min(spec.r_max, policy.window_sigma);
  const SpinPolynomial<T> hat = hamiltonian_hat<T>(windowed, w).poly;

  FixedPointResult<T> result;
  SpinPolynomial<T> c = seed.c0;
  FTable<T> ftable;
  int grew = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    ftable = block_sum_out(c + hat, kernel);
    SpinPolynomial<T> next = detail::reindex_ftable(ftable);
    result.truncation_loss += next.prune(w, policy.drop_tol);
    next = detail::apply_windows(next, policy, w, result.truncation_loss);
    const T resid = (next - c).weighted_norm(w);
    result.iterations = iter;
    result.residual = resid;
    if (!result.residual_history.empty())
      result.rate_history.push_back(sup(resid) / result.residual_history.back());
    result.residual_history.push_back(sup(resid));

    if (sup(resid) < tol) {
      result.converged = true;
      break;
    }
    const std::size_t n = result.residual_history.size();
    grew = (n >= 2 && result.residual_history[n - 1] > result.residual_history[n - 2])
               ? grew + 1
               : 0;
    if (grew >= 5)
      throw divergence_error("iterate_rg: residual grew for 5 consecutive iterations");
    c = std::move(next);
  }
  result.c_star = c;
  result.hamiltonian = extract_hamiltonian(ftable);
  result.flip_norm = single_flip_norm(result.hamiltonian);
  for (const auto& term : c.terms())
    if (term.Y.empty())
      result.empty_y_mass += sup(sabs(term.coef)) * std::exp(w.mu * term.X.size());
  return result;
}

// Energy of flipping a single block spin in the renormalized Hamiltonian.
template <class T>
T flip_cost(const FixedPointResult<T>& result) {
  return single_flip_norm(result.hamiltonian);
}

}  // namespace dysonrg
