#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "dysonrg/kernel.hpp"
#include "dysonrg/scalar.hpp"
#include "dysonrg/spin_polynomial.hpp"

namespace dysonrg {

// Coefficients f(c,V,W) of the one-block sum-out
//   exp[sum f(c,V,W) sigma(V) s(W)] = sum_{sigma0,sigma1} k(sigma0,sigma1;s0) exp(c(sigma,s)),
// with V >= 2 (or empty), W <= 0 (or empty). The (empty,empty) entry is the
// free energy contributed by the block and is kept apart from the spin terms.
template <class T>
struct FTable {
  SpinPolynomial<T> entries;
  T constant{0.0};
};

namespace detail {

// Shared layout for the one-block sums: sigma sites ascending with 0,1 in the
// two lowest bits, block sites above them with s0 last, so the four internal
// configurations of a fixed external configuration sit at consecutive indices.
template <class T>
struct BlockLayout {
  std::vector<int> sigma_all;   // starts with 0,1
  std::vector<int> sigma_ext;   // sites >= 2
  std::vector<int> block_all;   // <= 0, contains 0
  std::vector<T> values;        // c on the full support
  std::size_t ext_size;         // 2^(n-2)
  int s0_ext_bit;

  int s0_spin(std::size_t ext_index) const {
    return (ext_index >> s0_ext_bit) & 1 ? -1 : 1;
  }
  std::size_t full_index(std::size_t ext_index, int internal) const {
    return (ext_index << 2) | static_cast<std::size_t>(internal);
  }
};

template <class T>
void check_boundary_support(const SpinPolynomial<T>& c) {
  if (!c.sigma_support().empty() && c.sigma_support().front() < 0)
    throw std::invalid_argument("block input: sigma sites must be >= 0");
  if (!c.block_support().empty() && c.block_support().back() > 0)
    throw std::invalid_argument("block input: block sites must be <= 0");
  for (const auto& term : c.terms())
    if (!term.X.contains(0) && !term.X.contains(1))
      throw std::invalid_argument(
          "block input: every term must touch sigma_0 or sigma_1 (class X)");
}

template <class T>
BlockLayout<T> make_block_layout(const SpinPolynomial<T>& c,
                                 const std::vector<int>& extra_sigma,
                                 const std::vector<int>& extra_block) {
  auto merge = [](std::vector<int> base, const std::vector<int>& more) {
    for (int s : more)
      if (!std::binary_search(base.begin(), base.end(), s)) {
        base.insert(std::upper_bound(base.begin(), base.end(), s), s);
      }
    return base;
  };
  BlockLayout<T> layout;
  layout.sigma_all = merge(merge({0, 1}, c.sigma_support()), extra_sigma);
  layout.block_all = merge(merge({0}, c.block_support()), extra_block);
  if (layout.sigma_all.front() < 0)
    throw std::invalid_argument("block layout: negative sigma site");
  if (layout.block_all.back() > 0)
    throw std::invalid_argument("block layout: positive block site");
  layout.sigma_ext.assign(layout.sigma_all.begin() + 2, layout.sigma_all.end());
  const int n = static_cast<int>(layout.sigma_all.size() + layout.block_all.size());
  layout.values = c.values_on(layout.sigma_all, layout.block_all);
  layout.ext_size = std::size_t(1) << (n - 2);
  layout.s0_ext_bit = n - 3;  // s0 is the last block site; externals drop bits 0,1
  return layout;
}

// Kernel weights per internal configuration i = (sigma1_down << 1) | sigma0_down
// for both signs of s0.
inline std::array<std::array<double, 4>, 2> kernel_rows(const BlockKernel& kernel) {
  std::array<std::array<double, 4>, 2> rows{};
  for (int s0_down = 0; s0_down < 2; ++s0_down)
    for (int i = 0; i < 4; ++i)
      rows[s0_down][i] =
          kernel(i & 1 ? -1 : 1, i & 2 ? -1 : 1, s0_down ? -1 : 1);
  return rows;
}

// ln sum_i k_i exp(v_i) over the at most four internal configurations,
// max-shifted so nothing overflows at large gamma.
template <class T>
T log_kernel_sum(const std::array<double, 4>& k, const T* v) {
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    if (k[i] > 0.0) shift = smax(shift, sup(v[i]));
  T acc(0.0);
  for (int i = 0; i < 4; ++i)
    if (k[i] > 0.0) acc += T(k[i]) * sexp(v[i] - T(shift));
  if (!(inf(acc) > 0.0))
    throw std::domain_error("block sum-out: nonpositive inner sum");
  return T(shift) + slog(acc);
}

}  // namespace detail

// The map c -> f(c, ., .), computed per external configuration in the log
// domain and inverted by the fast transform.
template <class T>
FTable<T> block_sum_out(const SpinPolynomial<T>& c, const BlockKernel& kernel) {
  detail::check_boundary_support(c);
  auto layout = detail::make_block_layout(c, {}, {});
  const auto rows = detail::kernel_rows(kernel);
  std::vector<T> out(layout.ext_size, T(0.0));
  for (std::size_t e = 0; e < layout.ext_size; ++e) {
    const int s0_down = layout.s0_spin(e) < 0;
    out[e] = detail::log_kernel_sum(rows[s0_down], &layout.values[e << 2]);
  }
  SpinPolynomial<T> f =
      SpinPolynomial<T>::from_values(std::move(out), layout.sigma_ext, layout.block_all);
  FTable<T> table;
  table.constant = f.coefficient(SiteSet::original({}), SiteSet::block({}));
  std::vector<typename SpinPolynomial<T>::Term> spin_terms;
  for (auto& term : f.terms())
    if (!(term.X.empty() && term.Y.empty())) spin_terms.push_back(std::move(term));
  table.entries = SpinPolynomial<T>::from_terms(spin_terms);
  return table;
}

// <g>_c: the block average of g under the normalized one-block weight. The
// result depends only on sigma sites >= 2 and block sites <= 0.
template <class T>
SpinPolynomial<T> block_average(const SpinPolynomial<T>& g, const SpinPolynomial<T>& c,
                                const BlockKernel& kernel) {
  detail::check_boundary_support(c);
  auto layout = detail::make_block_layout(c, g.sigma_support(), g.block_support());
  const std::vector<T> g_values = g.values_on(layout.sigma_all, layout.block_all);
  const auto rows = detail::kernel_rows(kernel);
  std::vector<T> out(layout.ext_size, T(0.0));
  for (std::size_t e = 0; e < layout.ext_size; ++e) {
    const auto& k = rows[layout.s0_spin(e) < 0];
    const T* v = &layout.values[e << 2];
    const T* gv = &g_values[e << 2];
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      if (k[i] > 0.0) shift = smax(shift, sup(v[i]));
    T num(0.0), den(0.0);
    for (int i = 0; i < 4; ++i) {
      if (k[i] <= 0.0) continue;
      const T weight = T(k[i]) * sexp(v[i] - T(shift));
      num += gv[i] * weight;
      den += weight;
    }
    if (!(inf(den) > 0.0))
      throw std::domain_error("block average: vanishing normalization Z");
    out[e] = num / den;
  }
  return SpinPolynomial<T>::from_values(std::move(out), layout.sigma_ext, layout.block_all);
}

// <sigma(A)>_c for nonempty A inside {0,1}.
template <class T>
SpinPolynomial<T> block_expectation(const SiteSet& A, const SpinPolynomial<T>& c,
                                    const BlockKernel& kernel) {
  if (A.empty() || A.min_site() < 0 || A.max_site() > 1)
    throw std::invalid_argument("block_expectation: A must be a nonempty subset of {0,1}");
  return block_average(
      SpinPolynomial<T>::from_terms({{A, SiteSet::block({}), T(1.0)}}), c, kernel);
}

// D(c) = max over A in {{0},{1},{0,1}} of e^{-mu|A|} ||<sigma(A)>_c||, the
// bound on the Jacobian of the fixed-point map.
template <class T>
T contraction_diagnostic(const SpinPolynomial<T>& c, const BlockKernel& kernel,
                         const NormWeights& w) {
  const std::array<SiteSet, 3> subsets = {SiteSet::original({0}), SiteSet::original({1}),
                                          SiteSet::original({0, 1})};
  T best(0.0);
  bool first = true;
  for (const SiteSet& A : subsets) {
    const T norm = block_expectation(A, c, kernel).weighted_norm(w);
    const T weighted =
        sexp(T(-w.mu) * T(static_cast<double>(A.size()))) * norm;
    best = first ? weighted : smax(best, weighted);
    first = false;
  }
  return best;
}

// F(c): re-indexes the f-table by the block shift that returns each entry to
// the class X. An entry (V,W) with V nonempty lands on (V-2k, W-k) for the
// unique k putting min(V)-2k into {0,1}; entries with empty V belong to the
// renormalized Hamiltonian and are excluded.
template <class T>
SpinPolynomial<T> rg_fixed_point_map(const SpinPolynomial<T>& c, const BlockKernel& kernel) {
  FTable<T> f = block_sum_out(c, kernel);
  std::vector<typename SpinPolynomial<T>::Term> terms;
  for (const auto& term : f.entries.terms()) {
    if (term.X.empty()) continue;
    const int k = term.X.min_site() / 2;
    terms.push_back({term.X.shifted(-2 * k), term.Y.shifted(-k), term.coef});
  }
  return SpinPolynomial<T>::from_terms(terms);
}

// Renormalized block-spin couplings, organized by translation class. Classes
// are canonicalized to max(W) = 0; h'(class) sums the f-entries over the
// translates with W <= 0 (finitely many for a finite-support f-table).
template <class T>
struct RenormalizedHamiltonian {
  std::map<std::vector<int>, T> classes;
  T free_energy_per_block{0.0};
};

template <class T>
RenormalizedHamiltonian<T> extract_hamiltonian(const FTable<T>& f) {
  RenormalizedHamiltonian<T> h;
  h.free_energy_per_block = f.constant;
  for (const auto& term : f.entries.terms()) {
    if (!term.X.empty() || term.Y.empty()) continue;
    std::vector<int> canonical = term.Y.shifted(-term.Y.max_site()).sites();
    auto [it, inserted] = h.classes.try_emplace(std::move(canonical), term.coef);
    if (!inserted) it->second += term.coef;
  }
  for (auto it = h.classes.begin(); it != h.classes.end();)
    it = is_exact_zero(it->second) ? h.classes.erase(it) : std::next(it);
  return h;
}

// Energy of flipping one block spin: each canonical class W contains 0 in
// exactly |W| of its translates, so the class contributes |h'(W)| |W|.
template <class T>
T single_flip_norm(const RenormalizedHamiltonian<T>& h) {
  std::vector<T> parts;
  parts.reserve(h.classes.size());
  for (const auto& [sites, coef] : h.classes)
    parts.push_back(sabs(coef) * T(static_cast<double>(sites.size())));
  return pairwise_sum(parts);
}

// rho(r) = 2(e^r - 1)/(2 - e^r), the modulus controlling how block averages
// respond to perturbations of c. Defined for 0 <= r < ln 2.
template <class T>
T rho(const T& r) {
  if (inf(r) < 0.0 || !(sup(r) < 0.6931471805599453))
    throw std::domain_error("rho: argument must lie in [0, ln 2)");
  const T er = sexp(r);
  return T(2.0) * (er - T(1.0)) / (T(2.0) - er);
}

}  // namespace dysonrg
