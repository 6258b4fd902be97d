#include "dysonrg/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "dysonrg/certify.hpp"
#include "dysonrg/fixed_point.hpp"
#include "dysonrg/rg_map.hpp"

namespace dysonrg {

namespace {

class Checker {
 public:
  explicit Checker(std::ostream& out) : out_(out) {}

  void close(const std::string& name, double got, double want, double tol) {
    const bool ok = std::isfinite(got) && std::fabs(got - want) <= tol;
    report(name, ok, got, want);
  }

  void verify(const std::string& name, bool ok) { report(name, ok, 0, 0, false); }

  int failures() const { return failures_; }

 private:
  void report(const std::string& name, bool ok, double got, double want,
              bool numeric = true) {
    if (ok) {
      out_ << "ok   " << name << "\n";
      return;
    }
    ++failures_;
    out_ << "FAIL " << name;
    if (numeric)
      out_ << " (got " << std::setprecision(12) << got << ", want " << want << ")";
    out_ << "\n";
  }

  std::ostream& out_;
  int failures_ = 0;
};

template <class T>
void run_golden(Checker& check, const SelfCheckOptions& options) {
  const NormWeights w(1.0);
  const BlockKernel majority = BlockKernel::majority();
  const BlockKernel decimation = BlockKernel::decimation();

  check.close("kernel decimation k(+,+;+)", decimation(1, 1, 1), 1.0, 0.0);
  check.close("kernel decimation k(+,-;+)", decimation(1, -1, 1), 0.0, 0.0);
  check.close("kernel majority k(+,-;+)", majority(1, -1, 1), 0.5, 0.0);
  check.close("kernel majority k(+,+;+)", majority(1, 1, 1), 1.0, 0.0);

  const MajoritySeedSolution seed_ab = majority_seed_solve();
  check.close("majority seed a0", seed_ab.a, -0.18019161, 1e-8);
  check.close("majority seed b0", seed_ab.b, -0.02254094, 1e-8);

  const double gamma = 40.0;
  const SeedPoint<T> seed = majority_seed<T>(gamma);
  HamiltonianSpec spec;
  spec.gamma = gamma;
  spec.epsilon = 0.0;
  const SpinPolynomial<T> input = seed.c0 + hamiltonian_hat<T>(spec, w).poly;

  const SpinPolynomial<T> residual = rg_fixed_point_map(input, majority) - seed.c0;
  check.close("majority residual e",
              mid(residual.coefficient(SiteSet::original({0}), SiteSet::block({-3}))),
              0.00078810, 1e-8);
  check.close("majority residual f",
              mid(residual.coefficient(SiteSet::original({0}),
                                       SiteSet::block({-3, -2, -1}))),
              -0.00078810, 1e-8);
  check.close("majority residual prefactor",
              mid(residual.weighted_norm(NormWeights(0.0))), 0.00157619, 1e-8);

  const SpinPolynomial<T> exp_s0 = block_expectation(SiteSet::original({0}), input, majority);
  check.close("majority <sigma0> s0 coefficient",
              mid(exp_s0.coefficient(SiteSet::original({}), SiteSet::block({0}))),
              0.77632018, 1e-8);
  const SpinPolynomial<T> exp_s1 = block_expectation(SiteSet::original({1}), input, majority);
  check.close("majority <sigma1> s0 coefficient",
              mid(exp_s1.coefficient(SiteSet::original({}), SiteSet::block({0}))),
              0.69811964, 1e-8);
  const SpinPolynomial<T> exp_s01 =
      block_expectation(SiteSet::original({0, 1}), input, majority);
  check.close("majority <sigma0 sigma1> constant",
              mid(exp_s01.coefficient(SiteSet::original({}), SiteSet::block({}))),
              0.47443982, 1e-8);

  check.close("majority contraction diagnostic",
              mid(contraction_diagnostic(input, majority, w)), 0.60487407, 1e-8);

  const Certificate<T> cert = theorem_certificate(seed, spec, w);
  check.close("majority certificate objective", mid(cert.objective), 0.25088335, 1e-6);
  check.verify("majority certificate verdict", cert.pass);
  if (options.interval_mode) {
    check.verify("interval certificate width",
                 sup(cert.objective) - inf(cert.objective) < 1e-6);
    check.verify("interval contains float objective",
                 inf(cert.objective) <= 0.250883359 && 0.250883349 <= sup(cert.objective));
  }

  const SeedPoint<T> dec_seed = decimation_seed<T>(1.0);
  HamiltonianSpec dec_spec;
  dec_spec.gamma = 1.0;
  dec_spec.epsilon = 0.0;
  const SpinPolynomial<T> dec_input = dec_seed.c0 + hamiltonian_hat<T>(dec_spec, w).poly;
  check.close("decimation residual",
              mid((rg_fixed_point_map(dec_input, decimation) - dec_seed.c0)
                      .weighted_norm(w)),
              0.0, 1e-13);
  check.close("decimation contraction diagnostic",
              mid(contraction_diagnostic(dec_input, decimation, w)), std::exp(-1.0),
              1e-12);
  const FTable<T> dec_f = block_sum_out(dec_input, decimation);
  const RenormalizedHamiltonian<T> hp = extract_hamiltonian(dec_f);
  const auto nn = hp.classes.find(std::vector<int>{-1, 0});
  check.verify("decimation h' nearest-neighbor class present", nn != hp.classes.end());
  if (nn != hp.classes.end())
    check.close("decimation h' coefficient", mid(nn->second),
                0.5 * std::log(std::cosh(2.0)), 1e-12);

  std::function<double(double)> rho_fn = [](double r) { return mid(rho(r)); };
  if (options.mutate == "rho")
    rho_fn = [](double r) { return mid(rho(r)) + 1e-3; };
  check.close("rho(0)", rho_fn(0.0), 0.0, 0.0);
  check.close("rho(ln 4/3)", rho_fn(std::log(4.0 / 3.0)), 1.0, 1e-14);
}

}  // namespace

int run_selfcheck(const SelfCheckOptions& options, std::ostream& out) {
  Checker check(out);
  if (!options.mutate.empty() && options.mutate != "rho") {
    out << "FAIL unknown mutation '" << options.mutate << "'\n";
    return 1;
  }
  if (options.interval_mode)
    run_golden<Interval>(check, options);
  else
    run_golden<double>(check, options);
  out << (check.failures() == 0 ? "selfcheck: all checks passed"
                                : "selfcheck: " + std::to_string(check.failures()) +
                                      " check(s) failed")
      << "\n";
  return check.failures() == 0 ? 0 : 1;
}

}  // namespace dysonrg
