#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dysonrg {

// One-block RG kernel k(sigma0, sigma1; s0): the conditional weight of block
// spin s0 given the two original spins of the block. Normalization
// sum_{s0} k = 1 makes the transformation preserve the partition function.
class BlockKernel {
 public:
  explicit BlockKernel(const std::array<double, 8>& table) : k_(table) {
    for (double v : k_)
      if (!(v >= 0.0)) throw std::invalid_argument("kernel entries must be >= 0");
    for (int s0 = 0; s0 < 2; ++s0)
      for (int s1 = 0; s1 < 2; ++s1) {
        const double total = k_[index(s0, s1, 0)] + k_[index(s0, s1, 1)];
        if (std::fabs(total - 1.0) > 1e-12)
          throw std::invalid_argument("kernel not normalized: sum_{s0} k = " +
                                      std::to_string(total));
      }
  }

  // Spins are +-1.
  double operator()(int sigma0, int sigma1, int s0) const {
    return k_[index(sigma0 < 0, sigma1 < 0, s0 < 0)];
  }

  const std::array<double, 8>& table() const { return k_; }

  // k = 1/2 + (1/2) s0 sigma1: freezes sigma1 to the block spin.
  static BlockKernel decimation() {
    return from_formula([](int sigma0, int sigma1, int s0) {
      (void)sigma0;
      return 0.5 + 0.5 * s0 * sigma1;
    });
  }

  // k = 1/2 + (1/4) s0 (sigma0 + sigma1): block spin follows the majority,
  // ties split evenly.
  static BlockKernel majority() {
    return from_formula([](int sigma0, int sigma1, int s0) {
      return 0.5 + 0.25 * s0 * (sigma0 + sigma1);
    });
  }

  // k = 1/2 independent of the spins; the degenerate reference kernel.
  static BlockKernel uniform() {
    return from_formula([](int, int, int) { return 0.5; });
  }

 private:
  template <class F>
  static BlockKernel from_formula(F f) {
    std::array<double, 8> table{};
    for (int b0 = 0; b0 < 2; ++b0)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int bs = 0; bs < 2; ++bs)
          table[index(b0, b1, bs)] = f(b0 ? -1 : 1, b1 ? -1 : 1, bs ? -1 : 1);
    return BlockKernel(table);
  }

  static std::size_t index(bool sigma0_down, bool sigma1_down, bool s0_down) {
    return (std::size_t(s0_down) << 2) | (std::size_t(sigma0_down) << 1) |
           std::size_t(sigma1_down);
  }

  std::array<double, 8> k_;
};

enum class KernelKind { decimation, majority };

inline BlockKernel make_kernel(KernelKind kind) {
  return kind == KernelKind::decimation ? BlockKernel::decimation()
                                        : BlockKernel::majority();
}

inline std::string to_string(KernelKind kind) {
  return kind == KernelKind::decimation ? "decimation" : "majority";
}

inline KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "decimation") return KernelKind::decimation;
  if (name == "majority") return KernelKind::majority;
  throw std::invalid_argument("unknown kernel: " + name);
}

}  // namespace dysonrg
