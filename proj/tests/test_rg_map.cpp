#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dysonrg/certify.hpp"
#include "dysonrg/hamiltonian.hpp"
#include "dysonrg/rg_map.hpp"

#include <gsl/gsl_sf_zeta.h>

using dysonrg::BlockKernel;
using dysonrg::HamiltonianSpec;
using dysonrg::Lattice;
using dysonrg::NormWeights;
using dysonrg::SiteSet;
template <class T>
using Poly = dysonrg::SpinPolynomial<T>;

namespace {

// Random boundary coefficients c: keys X in the class X (touching site 0 or
// 1), Y strictly negative.
template <class Rng>
Poly<double> random_boundary_c(Rng& rng, double scale,
                               const std::vector<int>& sigma_pool = {0, 1, 2, 3},
                               const std::vector<int>& block_pool = {-2, -1}) {
  std::uniform_real_distribution<double> coef(-scale, scale);
  std::bernoulli_distribution pick(0.4);
  std::vector<Poly<double>::Term> terms;
  for (int t = 0; t < 6; ++t) {
    std::vector<int> x, y;
    for (int s : sigma_pool)
      if (pick(rng)) x.push_back(s);
    if (x.empty() || (x[0] != 0 && x[0] != 1)) x.insert(x.begin(), pick(rng) ? 0 : 1);
    for (int s : block_pool)
      if (pick(rng)) y.push_back(s);
    terms.push_back({SiteSet(Lattice::original, x), SiteSet(Lattice::block, y), coef(rng)});
  }
  return Poly<double>::from_terms(terms);
}

double xyzw_coefficient_c(double gamma, double a, double b) {
  const double x = std::log(std::exp(b - a) + 0.5 * std::exp(a - b));
  const double y = std::log(1.5 * std::exp(b - a) + 0.5 * std::exp(a - b));
  const double z = std::log(std::exp(-a - b) + 0.5 * std::exp(a + b));
  const double w = std::log(1.5 * std::exp(-a - b) + 0.5 * std::exp(a + b));
  return gamma + (-2.0 * std::log(1.5) + x - y + z - w) / 8.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------------

TEST_CASE("kernel tables match their formulas") {
  const BlockKernel dec = BlockKernel::decimation();
  CHECK(dec(1, 1, 1) == 1.0);
  CHECK(dec(1, -1, 1) == 0.0);
  CHECK(dec(-1, 1, 1) == 1.0);
  const BlockKernel maj = BlockKernel::majority();
  CHECK(maj(1, 1, 1) == 1.0);
  CHECK(maj(1, -1, 1) == 0.5);
  CHECK(maj(1, -1, -1) == 0.5);
  CHECK(maj(-1, -1, 1) == 0.0);
  for (const BlockKernel& k : {dec, maj, BlockKernel::uniform()})
    for (int s0 : {1, -1})
      for (int s1 : {1, -1}) CHECK(k(s0, s1, 1) + k(s0, s1, -1) == 1.0);
}

TEST_CASE("kernel validation rejects bad tables") {
  std::array<double, 8> table{};
  table.fill(0.25);  // sums to 1/2 over s0
  CHECK_THROWS_AS(BlockKernel{table}, std::invalid_argument);
  table.fill(0.5);
  table[0] = -0.5;
  CHECK_THROWS_AS(BlockKernel{table}, std::invalid_argument);
}

// ---------------------------------------------------------------------------
// hat Hamiltonian
// ---------------------------------------------------------------------------

TEST_CASE("hat Hamiltonian at eps = 0 is the two-bond polynomial") {
  HamiltonianSpec spec;
  spec.gamma = 1.7;
  const NormWeights w(1.0);
  const auto hat = dysonrg::hamiltonian_hat<double>(spec, w);
  CHECK(hat.poly.term_count() == 2);
  CHECK(hat.poly.weighted_norm(w) ==
        doctest::Approx(2 * 1.7 * std::exp(2.0)).epsilon(1e-14));
  CHECK(hat.tail_norm == 0.0);
}

TEST_CASE("hat Hamiltonian tail vanishes as r_max grows") {
  HamiltonianSpec spec;
  spec.gamma = 1.0;
  spec.epsilon = 0.01;
  spec.alpha = 2.0;
  const NormWeights w(1.0);
  spec.r_max = 10;
  const double tail10 = dysonrg::hamiltonian_hat<double>(spec, w).tail_norm;
  spec.r_max = 10000;
  const double tail_far = dysonrg::hamiltonian_hat<double>(spec, w).tail_norm;
  CHECK(tail10 > 0.0);
  CHECK(tail_far < 1e-2 * tail10);
  CHECK(tail_far < 1e-5);
}

TEST_CASE("explicit norm plus tail is bounded by eps e^{2mu} c(alpha)") {
  HamiltonianSpec spec;
  spec.gamma = 1.0;
  spec.epsilon = 0.01;
  spec.alpha = 2.0;
  spec.r_max = 100;
  const NormWeights w(1.0);
  const auto hat = dysonrg::hamiltonian_hat<double>(spec, w);
  const double eps_norm = hat.poly.weighted_norm(w) - 2 * spec.gamma * std::exp(2.0);
  const double c_alpha = 2.0 * (gsl_sf_zeta(2.0) - 1.0);
  const double bound = spec.epsilon * std::exp(2.0) * c_alpha;
  CHECK(eps_norm + hat.tail_norm <= bound * (1.0 + 1e-12));
  CHECK(eps_norm + hat.tail_norm >= bound * (1.0 - 1e-9));
}

// ---------------------------------------------------------------------------
// block sum-out
// ---------------------------------------------------------------------------

TEST_CASE("decimation sum-out has the closed form") {
  for (double gamma : {0.5, 1.3}) {
    const auto input = Poly<double>::from_terms(
        {{SiteSet::original({0}), SiteSet::block({-1}), gamma},
         {SiteSet::original({0, 1}), SiteSet::block({}), gamma},
         {SiteSet::original({1, 2}), SiteSet::block({}), gamma}});
    const auto f = dysonrg::block_sum_out(input, BlockKernel::decimation());
    CHECK(f.entries.term_count() == 2);
    CHECK(f.entries.coefficient(SiteSet::original({2}), SiteSet::block({0})) ==
          doctest::Approx(gamma).epsilon(1e-14));
    CHECK(f.entries.coefficient(SiteSet::original({}), SiteSet::block({-1, 0})) ==
          doctest::Approx(0.5 * std::log(std::cosh(2 * gamma))).epsilon(1e-14));
    CHECK(f.constant ==
          doctest::Approx(std::log(2.0) + 0.5 * std::log(std::cosh(2 * gamma)))
              .epsilon(1e-14));
  }
}

TEST_CASE("uniform kernel with zero input yields only ln 2") {
  const auto f = dysonrg::block_sum_out(Poly<double>::zero(), BlockKernel::uniform());
  CHECK(f.entries.is_zero());
  CHECK(f.constant == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("majority sum-out matches the closed-form sigma2 s0 coefficient at a=b=0") {
  const double gamma = 40.0;
  HamiltonianSpec spec;
  spec.gamma = gamma;
  const auto input =
      Poly<double>::from_terms({{SiteSet::original({0}), SiteSet::block({-1}), gamma}}) +
      dysonrg::hamiltonian_hat<double>(spec, NormWeights(1.0)).poly;
  const auto f = dysonrg::block_sum_out(input, BlockKernel::majority());
  CHECK(f.entries.coefficient(SiteSet::original({2}), SiteSet::block({0})) ==
        doctest::Approx(xyzw_coefficient_c(gamma, 0.0, 0.0)).epsilon(1e-13));
}

TEST_CASE("sum-out validates its input support") {
  const auto bad = Poly<double>::from_terms(
      {{SiteSet::original({2, 3}), SiteSet::block({}), 1.0}});
  CHECK_THROWS_AS(dysonrg::block_sum_out(bad, BlockKernel::majority()),
                  std::invalid_argument);
}

TEST_CASE("f-identity: exp of the f-table reproduces the kernel sum pointwise") {
  std::mt19937 rng(101);
  const BlockKernel kernels[] = {BlockKernel::decimation(), BlockKernel::majority()};
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = random_boundary_c(rng, 1.0, {0, 1, 2, 3, 4}, {-3, -2, -1});
    const BlockKernel& kernel = kernels[trial % 2];
    const auto f = dysonrg::block_sum_out(c, kernel);

    const std::vector<int> sig = {0, 1, 2, 3, 4};
    const std::vector<int> blk = {-3, -2, -1, 0};
    const auto cv = c.values_on(sig, blk);
    const auto fv = f.entries.values_on({2, 3, 4}, blk);
    const std::size_t n_ext = sig.size() - 2 + blk.size();
    for (std::size_t e = 0; e < (std::size_t(1) << n_ext); ++e) {
      const int s0 = (e >> (n_ext - 1)) & 1 ? -1 : 1;  // s0 is the top bit
      double direct = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double k = kernel(i & 1 ? -1 : 1, i & 2 ? -1 : 1, s0);
        if (k > 0.0) direct += k * std::exp(cv[(e << 2) | i]);
      }
      const double reconstructed = std::exp(fv[e] + f.constant);
      CHECK(reconstructed == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("sum-out output support: V >= 2 or empty, W <= 0") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_boundary_c(rng, 1.5);
    const auto f = dysonrg::block_sum_out(
        c, trial % 2 ? BlockKernel::majority() : BlockKernel::decimation());
    for (const auto& term : f.entries.terms()) {
      if (!term.X.empty()) CHECK(term.X.min_site() >= 2);
      if (!term.Y.empty()) CHECK(term.Y.max_site() <= 0);
      CHECK(!(term.X.empty() && term.Y.empty()));
    }
  }
}

// ---------------------------------------------------------------------------
// expectations and the contraction diagnostic
// ---------------------------------------------------------------------------

TEST_CASE("decimation expectations have their closed forms") {
  const double gamma = 1.1;
  HamiltonianSpec spec;
  spec.gamma = gamma;
  const auto input = dysonrg::decimation_seed<double>(gamma).c0 +
                     dysonrg::hamiltonian_hat<double>(spec, NormWeights(1.0)).poly;
  const double d = std::tanh(2 * gamma);
  const BlockKernel kernel = BlockKernel::decimation();

  const auto e0 = dysonrg::block_expectation(SiteSet::original({0}), input, kernel);
  CHECK(e0.term_count() == 2);
  CHECK(e0.coefficient(SiteSet::original({}), SiteSet::block({0})) ==
        doctest::Approx(d / 2).epsilon(1e-14));
  CHECK(e0.coefficient(SiteSet::original({}), SiteSet::block({-1})) ==
        doctest::Approx(d / 2).epsilon(1e-14));

  // sigma_1 is frozen to s_0; the sigma_2 dependence cancels exactly.
  const auto e1 = dysonrg::block_expectation(SiteSet::original({1}), input, kernel);
  CHECK(e1.term_count() == 1);
  CHECK(e1.coefficient(SiteSet::original({}), SiteSet::block({0})) == 1.0);

  const auto e01 = dysonrg::block_expectation(SiteSet::original({0, 1}), input, kernel);
  CHECK(e01.coefficient(SiteSet::original({}), SiteSet::block({})) ==
        doctest::Approx(d / 2).epsilon(1e-14));
  CHECK(e01.coefficient(SiteSet::original({}), SiteSet::block({-1, 0})) ==
        doctest::Approx(d / 2).epsilon(1e-14));
}

TEST_CASE("block_expectation validates A") {
  const auto c = dysonrg::decimation_seed<double>(1.0).c0;
  CHECK_THROWS_AS(
      dysonrg::block_expectation(SiteSet::original({}), c, BlockKernel::decimation()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      dysonrg::block_expectation(SiteSet::original({2}), c, BlockKernel::decimation()),
      std::invalid_argument);
}

TEST_CASE("decimation contraction diagnostic is e^{-mu}") {
  for (double gamma : {0.5, 2.0, 40.0})
    for (double mu : {0.5, 1.0}) {
      HamiltonianSpec spec;
      spec.gamma = gamma;
      const NormWeights w(mu);
      const auto input = dysonrg::decimation_seed<double>(gamma).c0 +
                         dysonrg::hamiltonian_hat<double>(spec, w).poly;
      CHECK(dysonrg::contraction_diagnostic(input, BlockKernel::decimation(), w) ==
            doctest::Approx(std::exp(-mu)).epsilon(1e-12));
    }
}

TEST_CASE("majority expectation and diagnostic reproduce the published values") {
  const auto seed = dysonrg::majority_seed<double>(40.0);
  HamiltonianSpec spec;
  spec.gamma = 40.0;
  const NormWeights w(1.0);
  const auto input = seed.c0 + dysonrg::hamiltonian_hat<double>(spec, w).poly;
  const auto e0 =
      dysonrg::block_expectation(SiteSet::original({0}), input, BlockKernel::majority());
  CHECK(e0.coefficient(SiteSet::original({}), SiteSet::block({0})) ==
        doctest::Approx(0.77632018).epsilon(1e-7));
  CHECK(e0.coefficient(SiteSet::original({2}), SiteSet::block({})) ==
        doctest::Approx(-0.03496197).epsilon(1e-5));
  CHECK(dysonrg::contraction_diagnostic(input, BlockKernel::majority(), w) ==
        doctest::Approx(0.60487407).epsilon(1e-8));
}

TEST_CASE("block average contracts norms when D(c) < 1 (Lemma 2)") {
  std::mt19937 rng(107);
  int tested = 0;
  int attempts = 0;
  while (tested < 100) {
    REQUIRE(++attempts < 20000);
    const auto c = random_boundary_c(rng, 0.2);
    const BlockKernel kernel =
        tested % 2 ? BlockKernel::majority() : BlockKernel::decimation();
    const NormWeights w(tested % 3 == 0 ? 0.5 : 1.0, tested % 4 == 0 ? 0.1 : 0.0);
    if (dysonrg::contraction_diagnostic(c, kernel, w) >= 1.0) continue;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::bernoulli_distribution pick(0.4);
    std::vector<Poly<double>::Term> gterms;
    for (int t = 0; t < 4; ++t) {
      std::vector<int> x, y;
      for (int s : {0, 1, 2, 3})
        if (pick(rng)) x.push_back(s);
      for (int s : {-2, -1})
        if (pick(rng)) y.push_back(s);
      gterms.push_back(
          {SiteSet(Lattice::original, x), SiteSet(Lattice::block, y), coef(rng)});
    }
    const auto g = Poly<double>::from_terms(gterms);
    const auto avg = dysonrg::block_average(g, c, kernel);
    CHECK(avg.weighted_norm(w) <= g.weighted_norm(w) * (1.0 + 1e-10));
    ++tested;
  }
}

TEST_CASE("finite-difference Jacobian columns are bounded by D(c) (Lemma 1)") {
  std::mt19937 rng(109);
  const NormWeights w(1.0);
  const BlockKernel kernel = BlockKernel::majority();
  int columns_checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto c = random_boundary_c(rng, 0.3, {0, 1, 2}, {-2, -1});
    const double diag = dysonrg::contraction_diagnostic(c, kernel, w);
    if (diag >= 1.0) continue;
    const double step = 1e-6;
    for (const std::vector<int>& x :
         {std::vector<int>{0}, {1}, {0, 1}, {0, 2}, {1, 2}})
      for (const std::vector<int>& y : {std::vector<int>{}, {-1}, {-2}, {-2, -1}}) {
        const SiteSet X(Lattice::original, x);
        const SiteSet Y(Lattice::block, y);
        const auto probe = Poly<double>::from_terms({{X, Y, step}});
        const auto plus = dysonrg::rg_fixed_point_map(c + probe, kernel);
        const auto minus = dysonrg::rg_fixed_point_map(c - probe, kernel);
        double column = 0.0;
        for (const auto& term : (plus - minus).terms())
          column += std::fabs(term.coef) / (2 * step) *
                    std::exp(w.mu * (static_cast<double>(term.X.size()) -
                                     static_cast<double>(X.size())));
        CHECK(column <= diag + 1e-6);
        ++columns_checked;
      }
  }
  CHECK(columns_checked >= 100);
}

TEST_CASE("F is Lipschitz with constant 1 under the lemma hypotheses (Lemma 3)") {
  std::mt19937 rng(113);
  const NormWeights w(1.0);
  std::uniform_real_distribution<double> coef(-0.004, 0.004);
  int tested = 0;
  int attempts = 0;
  while (tested < 100) {
    REQUIRE(++attempts < 20000);
    const auto c1 = random_boundary_c(rng, 0.15);
    std::vector<Poly<double>::Term> delta_terms;
    for (int s : {0, 1})
      for (int y : {-2, -1})
        delta_terms.push_back({SiteSet(Lattice::original, {s}),
                               SiteSet(Lattice::block, {y}), coef(rng)});
    const auto c2 = c1 + Poly<double>::from_terms(delta_terms);
    const BlockKernel kernel =
        tested % 2 ? BlockKernel::majority() : BlockKernel::decimation();
    const double dist = (c1 - c2).weighted_norm(w);
    if (dist >= std::log(2.0) || dist == 0.0) continue;
    const double r = dysonrg::rho(dist);
    if (dysonrg::contraction_diagnostic(c1, kernel, w) + r > 1.0) continue;
    if (dysonrg::contraction_diagnostic(c2, kernel, w) + r > 1.0) continue;
    const double image_dist = (dysonrg::rg_fixed_point_map(c1, kernel) -
                               dysonrg::rg_fixed_point_map(c2, kernel))
                                  .weighted_norm(w);
    CHECK(image_dist <= dist * (1.0 + 1e-9));
    ++tested;
  }
}

// ---------------------------------------------------------------------------
// F and the renormalized Hamiltonian
// ---------------------------------------------------------------------------

TEST_CASE("decimation seed is an exact fixed point") {
  for (double gamma : {0.5, 1.0, 5.0, 40.0}) {
    HamiltonianSpec spec;
    spec.gamma = gamma;
    const NormWeights w(1.0);
    const auto seed = dysonrg::decimation_seed<double>(gamma);
    const auto input = seed.c0 + dysonrg::hamiltonian_hat<double>(spec, w).poly;
    const auto image = dysonrg::rg_fixed_point_map(input, BlockKernel::decimation());
    CHECK((image - seed.c0).weighted_norm(w) < 1e-12);
  }
}

TEST_CASE("majority residual components at the solved seed") {
  const auto seed = dysonrg::majority_seed<double>(40.0);
  HamiltonianSpec spec;
  spec.gamma = 40.0;
  const NormWeights w(1.0);
  const auto input = seed.c0 + dysonrg::hamiltonian_hat<double>(spec, w).poly;
  const auto residual =
      dysonrg::rg_fixed_point_map(input, BlockKernel::majority()) - seed.c0;
  CHECK(residual.coefficient(SiteSet::original({0}), SiteSet::block({-3})) ==
        doctest::Approx(0.00078810).epsilon(2e-5));
  CHECK(residual.coefficient(SiteSet::original({0}), SiteSet::block({-3, -2, -1})) ==
        doctest::Approx(-0.00078810).epsilon(2e-5));
  CHECK(residual.weighted_norm(w) ==
        doctest::Approx(0.00157619 * std::exp(1.0)).epsilon(1e-5));
}

TEST_CASE("F output support stays in the boundary class") {
  std::mt19937 rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_boundary_c(rng, 1.0);
    const auto image = dysonrg::rg_fixed_point_map(
        c, trial % 2 ? BlockKernel::majority() : BlockKernel::decimation());
    for (const auto& term : image.terms()) {
      CHECK(term.X.in_class_x());
      if (!term.Y.empty()) CHECK(term.Y.max_site() <= -1);
    }
  }
}

TEST_CASE("renormalized Hamiltonian of the decimation fixed point") {
  const double gamma = 1.3;
  HamiltonianSpec spec;
  spec.gamma = gamma;
  const auto input = dysonrg::decimation_seed<double>(gamma).c0 +
                     dysonrg::hamiltonian_hat<double>(spec, NormWeights(1.0)).poly;
  const auto h = dysonrg::extract_hamiltonian(
      dysonrg::block_sum_out(input, BlockKernel::decimation()));
  CHECK(h.classes.size() == 1);
  const auto nn = h.classes.find(std::vector<int>{-1, 0});
  REQUIRE(nn != h.classes.end());
  CHECK(nn->second ==
        doctest::Approx(0.5 * std::log(std::cosh(2 * gamma))).epsilon(1e-14));
  CHECK(dysonrg::single_flip_norm(h) ==
        doctest::Approx(std::log(std::cosh(2 * gamma))).epsilon(1e-14));
}

TEST_CASE("empty f-table gives an empty renormalized Hamiltonian") {
  dysonrg::FTable<double> f;
  const auto h = dysonrg::extract_hamiltonian(f);
  CHECK(h.classes.empty());
  CHECK(h.free_energy_per_block == 0.0);
  CHECK(dysonrg::single_flip_norm(h) == 0.0);
}

TEST_CASE("majority h' nearest-neighbor class against a direct enumeration oracle") {
  // Oracle: plain nested loops and std::log, no shifted exponentials and no
  // fast transform, applying the inversion formula to the s0 s_{-1} component
  // of the two-block boundary sum.
  const double gamma = 3.0;  // plain exp stays in range
  const auto seed = dysonrg::majority_seed<double>(gamma);
  HamiltonianSpec spec;
  spec.gamma = gamma;
  const auto input = seed.c0 +
                     dysonrg::hamiltonian_hat<double>(spec, NormWeights(1.0)).poly;

  double oracle = 0.0;
  for (int sig2 : {1, -1})
    for (int s0 : {1, -1})
      for (int sm1 : {1, -1})
        for (int sm2 : {1, -1}) {
          double sum = 0.0;
          for (int sig0 : {1, -1})
            for (int sig1 : {1, -1}) {
              const double k = 0.5 + 0.25 * s0 * (sig0 + sig1);
              sum += k * std::exp(gamma * sig0 * sig1 + gamma * sig1 * sig2 +
                                  (gamma + seed.a) * sig0 * sm1 + seed.b * sig0 * sm2);
            }
          oracle += s0 * sm1 * std::log(sum);
        }
  oracle /= 16.0;

  const auto h = dysonrg::extract_hamiltonian(
      dysonrg::block_sum_out(input, BlockKernel::majority()));
  const auto nn = h.classes.find(std::vector<int>{-1, 0});
  REQUIRE(nn != h.classes.end());
  CHECK(nn->second == doctest::Approx(oracle).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// rho
// ---------------------------------------------------------------------------

TEST_CASE("rho values and domain") {
  CHECK(dysonrg::rho(0.0) == 0.0);
  CHECK(dysonrg::rho(std::log(4.0 / 3.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dysonrg::rho(0.1) ==
        doctest::Approx(2 * (std::exp(0.1) - 1) / (2 - std::exp(0.1))).epsilon(1e-15));
  CHECK(dysonrg::rho(0.1) == doctest::Approx(0.23506).epsilon(1e-4));
  CHECK_THROWS_AS(dysonrg::rho(std::log(2.0)), std::domain_error);
  CHECK_THROWS_AS(dysonrg::rho(-0.1), std::domain_error);
}

// ---------------------------------------------------------------------------
// partition preservation on a toy periodic chain
// ---------------------------------------------------------------------------

TEST_CASE("kernel normalization preserves the 3-block partition function") {
  const int n = 6;
  for (const bool use_majority : {false, true})
    for (const double eps : {0.0, 0.05}) {
      const double gamma = 0.8, alpha = 2.0;
      const BlockKernel kernel =
          use_majority ? BlockKernel::majority() : BlockKernel::decimation();
      auto ring_j = [&](int i, int j) {
        const int d = std::min(std::abs(i - j), n - std::abs(i - j));
        return d >= 2 ? std::pow(d, -alpha) : 0.0;
      };
      auto boltzmann = [&](const std::array<int, 6>& s) {
        double h = 0.0;
        for (int i = 0; i < n; ++i) h -= gamma * s[i] * s[(i + 1) % n];
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) h -= eps * ring_j(i, j) * s[i] * s[j];
        return std::exp(-h);
      };
      double z_sigma = 0.0;
      double z_s = 0.0;
      for (int block_cfg = 0; block_cfg < 8; ++block_cfg) {
        const int bs[3] = {block_cfg & 1 ? -1 : 1, block_cfg & 2 ? -1 : 1,
                           block_cfg & 4 ? -1 : 1};
        double renorm = 0.0;
        for (int cfg = 0; cfg < 64; ++cfg) {
          std::array<int, 6> s;
          for (int i = 0; i < n; ++i) s[i] = cfg >> i & 1 ? -1 : 1;
          double weight = boltzmann(s);
          for (int b = 0; b < 3; ++b) weight *= kernel(s[2 * b], s[2 * b + 1], bs[b]);
          renorm += weight;
        }
        z_s += renorm;
        if (block_cfg == 0)
          for (int cfg = 0; cfg < 64; ++cfg) {
            std::array<int, 6> s;
            for (int i = 0; i < n; ++i) s[i] = cfg >> i & 1 ? -1 : 1;
            z_sigma += boltzmann(s);
          }
      }
      CHECK(z_s == doctest::Approx(z_sigma).epsilon(1e-10));
    }
}
