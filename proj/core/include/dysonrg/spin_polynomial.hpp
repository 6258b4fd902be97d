#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dysonrg/scalar.hpp"
#include "dysonrg/sites.hpp"

namespace dysonrg {

// Weights of the term norm sum |c(X,Y)| exp(mu|X| + nu|Y|). nu = 0 is the
// working norm; nu > 0 is the strengthened variant used for the single-flip
// finiteness argument.
struct NormWeights {
  double mu = 0.0;
  double nu = 0.0;

  NormWeights() = default;
  NormWeights(double mu_, double nu_ = 0.0) : mu(mu_), nu(nu_) {
    if (mu < 0.0 || nu < 0.0)
      throw std::invalid_argument("NormWeights: weights must be nonnegative");
  }
};

// Multilinear function sum_{X,Y} c(X,Y) sigma(X) s(Y) of +-1 spins, where X
// runs over subsets of original-lattice sites and Y over subsets of block
// sites. Terms are keyed by a dense bitmask over the polynomial's declared
// local support (sigma sites in the low bits, block sites above them), so a
// product is an XOR and the configuration<->coefficient transform is a
// butterfly pass over a 2^n array.
//
// Values are immutable after construction; every accessor is const.
template <class T>
class SpinPolynomial {
 public:
  struct Term {
    SiteSet X;  // original-lattice sites
    SiteSet Y;  // block-lattice sites
    T coef;
  };

  static constexpr int kDefaultSupportCap = 24;
  static constexpr int kHardTransformCap = 26;  // 2^26 values, ~0.5 GiB

  SpinPolynomial() = default;

  static SpinPolynomial zero() { return SpinPolynomial(); }

  static SpinPolynomial constant(const T& value) {
    SpinPolynomial p;
    if (!is_exact_zero(value)) p.terms_[0] = value;
    return p;
  }

  // Duplicate keys are summed; exact zeros are dropped.
  static SpinPolynomial from_terms(const std::vector<Term>& terms,
                                   int support_cap = kDefaultSupportCap) {
    SpinPolynomial p;
    for (const Term& t : terms) {
      if (t.X.lattice() != Lattice::original)
        throw std::invalid_argument("from_terms: X must be on the original lattice");
      if (t.Y.lattice() != Lattice::block)
        throw std::invalid_argument("from_terms: Y must be on the block lattice");
      merge_sites(p.sigma_sites_, t.X.sites());
      merge_sites(p.block_sites_, t.Y.sites());
    }
    if (static_cast<int>(p.sigma_sites_.size() + p.block_sites_.size()) > support_cap)
      throw std::length_error("from_terms: support cap exceeded (" +
                              std::to_string(p.sigma_sites_.size() + p.block_sites_.size()) +
                              " sites > " + std::to_string(support_cap) + ")");
    for (const Term& t : terms) {
      const std::uint64_t key = p.mask_for(t.X, t.Y);
      auto [it, inserted] = p.terms_.try_emplace(key, t.coef);
      if (!inserted) it->second += t.coef;
    }
    p.drop_exact_zeros();
    return p;
  }

  const std::vector<int>& sigma_support() const { return sigma_sites_; }
  const std::vector<int>& block_support() const { return block_sites_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Canonical term list, sorted by (X, Y).
  std::vector<Term> terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [key, coef] : terms_)
      out.push_back(Term{x_of(key), y_of(key), coef});
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
      if (!(a.X == b.X)) return a.X < b.X;
      return a.Y < b.Y;
    });
    return out;
  }

  T coefficient(const SiteSet& X, const SiteSet& Y) const {
    for (int s : X.sites())
      if (!std::binary_search(sigma_sites_.begin(), sigma_sites_.end(), s)) return T(0.0);
    for (int s : Y.sites())
      if (!std::binary_search(block_sites_.begin(), block_sites_.end(), s)) return T(0.0);
    auto it = terms_.find(mask_for(X, Y));
    return it == terms_.end() ? T(0.0) : it->second;
  }

  friend SpinPolynomial operator+(const SpinPolynomial& a, const SpinPolynomial& b) {
    return combined(a, b, false);
  }
  friend SpinPolynomial operator-(const SpinPolynomial& a, const SpinPolynomial& b) {
    return combined(a, b, true);
  }

  SpinPolynomial scaled(const T& factor) const {
    SpinPolynomial out(*this);
    for (auto& [key, coef] : out.terms_) coef = coef * factor;
    out.drop_exact_zeros();
    return out;
  }

  // sigma(X1)s(Y1) * sigma(X2)s(Y2) = sigma(X1^X2) s(Y1^Y2) since spins square
  // to one, so the product convolves coefficients under symmetric difference.
  friend SpinPolynomial multiply(const SpinPolynomial& a, const SpinPolynomial& b,
                                 int support_cap = kDefaultSupportCap) {
    auto [pa, pb] = aligned(a, b, support_cap);
    SpinPolynomial out;
    out.sigma_sites_ = pa.sigma_sites_;
    out.block_sites_ = pa.block_sites_;
    for (const auto& [ka, ca] : pa.terms_)
      for (const auto& [kb, cb] : pb.terms_) {
        const std::uint64_t key = ka ^ kb;
        auto [it, inserted] = out.terms_.try_emplace(key, ca * cb);
        if (!inserted) it->second += ca * cb;
      }
    out.drop_exact_zeros();
    return out;
  }

  friend SpinPolynomial operator*(const SpinPolynomial& a, const SpinPolynomial& b) {
    return multiply(a, b);
  }

  // sum over terms of coef * prod_{i in X} sigma_i * prod_{j in Y} s_j.
  // Assignments map site -> +-1 and must cover the support.
  T evaluate(const std::map<int, int>& sigma_assign,
             const std::map<int, int>& block_assign) const {
    std::uint64_t flip = 0;  // bit set where the assigned spin is -1
    for (std::size_t i = 0; i < sigma_sites_.size(); ++i)
      if (spin_at(sigma_assign, sigma_sites_[i], "sigma") < 0) flip |= bit(i);
    for (std::size_t j = 0; j < block_sites_.size(); ++j)
      if (spin_at(block_assign, block_sites_[j], "block") < 0)
        flip |= bit(sigma_sites_.size() + j);
    std::vector<T> parts;
    parts.reserve(terms_.size());
    for (const auto& [key, coef] : terms_)
      parts.push_back(std::popcount(key & flip) % 2 ? -coef : coef);
    return pairwise_sum(parts);
  }

  T weighted_norm(const NormWeights& w) const {
    std::vector<T> parts;
    parts.reserve(terms_.size());
    const std::uint64_t sigma_mask = low_bits(sigma_sites_.size());
    for (const auto& [key, coef] : terms_) {
      const int nx = std::popcount(key & sigma_mask);
      const int ny = std::popcount(key & ~sigma_mask);
      const T exponent = T(w.mu) * T(static_cast<double>(nx)) +
                         T(w.nu) * T(static_cast<double>(ny));
      parts.push_back(sabs(coef) * sexp(exponent));
    }
    return pairwise_sum(parts);
  }

  // Evaluation table over all configurations of the requested support, which
  // must contain this polynomial's support. Entry index m encodes the
  // configuration where bit b set means the spin at site b is -1 (sigma sites
  // first, ascending, then block sites ascending).
  std::vector<T> values_on(const std::vector<int>& sigma_sites,
                           const std::vector<int>& block_sites) const {
    const int n = check_transform_size(sigma_sites, block_sites);
    std::vector<T> a(std::size_t(1) << n, T(0.0));
    const std::vector<int> sig_pos = positions_in(sigma_sites_, sigma_sites, 0);
    const std::vector<int> blk_pos =
        positions_in(block_sites_, block_sites, static_cast<int>(sigma_sites.size()));
    for (const auto& [key, coef] : terms_) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < sigma_sites_.size(); ++i)
        if (key & bit(i)) mask |= bit(sig_pos[i]);
      for (std::size_t j = 0; j < block_sites_.size(); ++j)
        if (key & bit(sigma_sites_.size() + j)) mask |= bit(blk_pos[j]);
      a[mask] += coef;
    }
    walsh_transform(a);
    return a;
  }

  // Inverse of values_on: recovers g(X,Y) = (1/N) sum_{sigma,s} sigma(X)s(Y) g(sigma,s).
  static SpinPolynomial from_values(std::vector<T> values,
                                    const std::vector<int>& sigma_sites,
                                    const std::vector<int>& block_sites) {
    const int n = check_support_lists(sigma_sites, block_sites);
    if (values.size() != (std::size_t(1) << n))
      throw std::invalid_argument("from_values: array length != 2^support");
    walsh_transform(values);
    const T scale = T(1.0) / T(static_cast<double>(std::size_t(1) << n));
    SpinPolynomial p;
    p.sigma_sites_ = sigma_sites;
    p.block_sites_ = block_sites;
    for (std::size_t m = 0; m < values.size(); ++m) {
      const T coef = values[m] * scale;
      if (!is_exact_zero(coef)) p.terms_.emplace_hint(p.terms_.end(), m, coef);
    }
    return p;
  }

  // Every key (X,Y) becomes (X+dsigma, Y+dblock); coefficients unchanged.
  SpinPolynomial shifted(int dsigma, int dblock) const {
    SpinPolynomial out(*this);
    for (int& s : out.sigma_sites_) s += dsigma;
    for (int& s : out.block_sites_) s += dblock;
    return out;
  }

  // Drops terms whose weighted magnitude falls below eps; returns an upper
  // bound on the weighted norm removed.
  double prune(const NormWeights& w, double eps) {
    double lost = 0.0;
    const std::uint64_t sigma_mask = low_bits(sigma_sites_.size());
    for (auto it = terms_.begin(); it != terms_.end();) {
      const int nx = std::popcount(it->first & sigma_mask);
      const int ny = std::popcount(it->first & ~sigma_mask);
      const double weighted = sup(sabs(it->second)) * std::exp(w.mu * nx + w.nu * ny);
      if (weighted < eps) {
        lost += weighted;
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return lost;
  }

  // Rebuild with the minimal support actually used by the terms.
  SpinPolynomial compacted() const {
    std::vector<Term> ts = terms();
    SpinPolynomial p;
    for (const Term& t : ts) {
      merge_sites(p.sigma_sites_, t.X.sites());
      merge_sites(p.block_sites_, t.Y.sites());
    }
    for (const Term& t : ts) p.terms_[p.mask_for(t.X, t.Y)] = t.coef;
    return p;
  }

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t(1) << i; }
  static std::uint64_t low_bits(std::size_t n) {
    return n >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
  }

  static void merge_sites(std::vector<int>& dest, const std::vector<int>& src) {
    std::vector<int> merged;
    merged.reserve(dest.size() + src.size());
    std::merge(dest.begin(), dest.end(), src.begin(), src.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    dest = std::move(merged);
  }

  static int spin_at(const std::map<int, int>& assign, int site, const char* which) {
    auto it = assign.find(site);
    if (it == assign.end())
      throw std::invalid_argument(std::string("evaluate: missing ") + which +
                                  " site " + std::to_string(site));
    if (it->second != 1 && it->second != -1)
      throw std::invalid_argument("evaluate: spin values must be +-1");
    return it->second;
  }

  std::uint64_t mask_for(const SiteSet& X, const SiteSet& Y) const {
    std::uint64_t key = 0;
    for (int s : X.sites()) key |= bit(index_of(sigma_sites_, s));
    for (int s : Y.sites()) key |= bit(sigma_sites_.size() + index_of(block_sites_, s));
    return key;
  }

  static std::size_t index_of(const std::vector<int>& sites, int s) {
    auto it = std::lower_bound(sites.begin(), sites.end(), s);
    if (it == sites.end() || *it != s)
      throw std::out_of_range("site " + std::to_string(s) + " outside support");
    return static_cast<std::size_t>(it - sites.begin());
  }

  SiteSet x_of(std::uint64_t key) const {
    std::vector<int> sites;
    for (std::size_t i = 0; i < sigma_sites_.size(); ++i)
      if (key & bit(i)) sites.push_back(sigma_sites_[i]);
    return SiteSet(Lattice::original, std::move(sites));
  }

  SiteSet y_of(std::uint64_t key) const {
    std::vector<int> sites;
    for (std::size_t j = 0; j < block_sites_.size(); ++j)
      if (key & bit(sigma_sites_.size() + j)) sites.push_back(block_sites_[j]);
    return SiteSet(Lattice::block, std::move(sites));
  }

  void drop_exact_zeros() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = is_exact_zero(it->second) ? terms_.erase(it) : std::next(it);
  }

  static std::pair<SpinPolynomial, SpinPolynomial> aligned(const SpinPolynomial& a,
                                                           const SpinPolynomial& b,
                                                           int support_cap) {
    std::vector<int> sig = a.sigma_sites_, blk = a.block_sites_;
    merge_sites(sig, b.sigma_sites_);
    merge_sites(blk, b.block_sites_);
    if (static_cast<int>(sig.size() + blk.size()) > support_cap)
      throw std::length_error("combined support exceeds cap");
    return {a.remapped(sig, blk), b.remapped(sig, blk)};
  }

  SpinPolynomial remapped(const std::vector<int>& sig, const std::vector<int>& blk) const {
    SpinPolynomial out;
    out.sigma_sites_ = sig;
    out.block_sites_ = blk;
    const std::vector<int> sp = positions_in(sigma_sites_, sig, 0);
    const std::vector<int> bp = positions_in(block_sites_, blk, static_cast<int>(sig.size()));
    for (const auto& [key, coef] : terms_) {
      std::uint64_t nk = 0;
      for (std::size_t i = 0; i < sigma_sites_.size(); ++i)
        if (key & bit(i)) nk |= bit(sp[i]);
      for (std::size_t j = 0; j < block_sites_.size(); ++j)
        if (key & bit(sigma_sites_.size() + j)) nk |= bit(bp[j]);
      out.terms_[nk] = coef;
    }
    return out;
  }

  static std::vector<int> positions_in(const std::vector<int>& own,
                                       const std::vector<int>& target, int offset) {
    std::vector<int> pos(own.size());
    for (std::size_t i = 0; i < own.size(); ++i)
      pos[i] = offset + static_cast<int>(index_of(target, own[i]));
    return pos;
  }

  static SpinPolynomial combined(const SpinPolynomial& a, const SpinPolynomial& b,
                                 bool subtract) {
    auto [pa, pb] = aligned(a, b, kDefaultSupportCap);
    for (const auto& [key, coef] : pb.terms_) {
      auto [it, inserted] = pa.terms_.try_emplace(key, subtract ? T(0.0) - coef : coef);
      if (!inserted) it->second = subtract ? it->second - coef : it->second + coef;
    }
    pa.drop_exact_zeros();
    return pa;
  }

  static int check_support_lists(const std::vector<int>& sig, const std::vector<int>& blk) {
    if (!std::is_sorted(sig.begin(), sig.end()) || !std::is_sorted(blk.begin(), blk.end()))
      throw std::invalid_argument("support site lists must be sorted");
    const int n = static_cast<int>(sig.size() + blk.size());
    if (n > kHardTransformCap)
      throw std::length_error("transform support too large: " + std::to_string(n) + " sites");
    return n;
  }

  int check_transform_size(const std::vector<int>& sig, const std::vector<int>& blk) const {
    const int n = check_support_lists(sig, blk);
    for (int s : sigma_sites_) index_of(sig, s);
    for (int s : block_sites_) index_of(blk, s);
    return n;
  }

  // In-place +- butterfly: a[m] <- sum_X c[X] (-1)^{popcount(m & X)}.
  // Self-inverse up to division by the array length. Fixed loop order keeps
  // the result identical run to run.
  static void walsh_transform(std::vector<T>& a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1)
      for (std::size_t i = 0; i < n; i += h << 1)
        for (std::size_t j = i; j < i + h; ++j) {
          const T u = a[j];
          const T v = a[j + h];
          a[j] = u + v;
          a[j + h] = u - v;
        }
  }

  std::vector<int> sigma_sites_;           // ascending
  std::vector<int> block_sites_;           // ascending
  std::map<std::uint64_t, T> terms_;       // mask -> coefficient, no exact zeros
};

}  // namespace dysonrg
