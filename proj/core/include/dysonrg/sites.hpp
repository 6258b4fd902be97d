#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dysonrg {

// Two 1D lattices appear throughout: the original spin chain and the block
// (renormalized) chain, with one block site per two original sites.
enum class Lattice { original, block };

// A finite set of lattice sites, kept strictly increasing.
class SiteSet {
 public:
  SiteSet() : lattice_(Lattice::original) {}
  SiteSet(Lattice lattice, std::vector<int> sites)
      : lattice_(lattice), sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
      throw std::invalid_argument("SiteSet: duplicate site");
  }

  static SiteSet original(std::initializer_list<int> sites) {
    return SiteSet(Lattice::original, std::vector<int>(sites));
  }
  static SiteSet block(std::initializer_list<int> sites) {
    return SiteSet(Lattice::block, std::vector<int>(sites));
  }

  Lattice lattice() const { return lattice_; }
  const std::vector<int>& sites() const { return sites_; }
  bool empty() const { return sites_.empty(); }
  std::size_t size() const { return sites_.size(); }
  int min_site() const { return sites_.front(); }
  int max_site() const { return sites_.back(); }
  bool contains(int site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
  }

  // The class X of the boundary coefficients c: X >= 0 and X meets {0,1}.
  bool in_class_x() const {
    return !empty() && min_site() >= 0 && (contains(0) || contains(1));
  }

  SiteSet shifted(int delta) const {
    SiteSet out;
    out.lattice_ = lattice_;
    out.sites_.reserve(sites_.size());
    for (int s : sites_) out.sites_.push_back(s + delta);
    return out;
  }

  friend bool operator==(const SiteSet& a, const SiteSet& b) {
    return a.lattice_ == b.lattice_ && a.sites_ == b.sites_;
  }
  friend bool operator<(const SiteSet& a, const SiteSet& b) {
    if (a.lattice_ != b.lattice_) return a.lattice_ < b.lattice_;
    return a.sites_ < b.sites_;
  }

 private:
  Lattice lattice_;
  std::vector<int> sites_;
};

inline std::string to_string(const SiteSet& s) {
  std::string out = "{";
  bool first = true;
  for (int site : s.sites()) {
    if (!first) out += ",";
    out += std::to_string(site);
    first = false;
  }
  return out + "}";
}

}  // namespace dysonrg
