// Command-line front end: certificates, fixed-point iteration, and the
// torus (infrared / Gaussian domination) checks, in float or interval mode.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dysonrg/certify.hpp"
#include "dysonrg/fixed_point.hpp"
#include "dysonrg/lro.hpp"
#include "dysonrg/selfcheck.hpp"
#include "dysonrg/serialize.hpp"

namespace {

using dysonrg::Interval;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitComputeError = 3;

json scalar_json(double x) { return json(x); }
json scalar_json(const Interval& x) { return json::array({x.lower(), x.upper()}); }

struct CommonOptions {
  std::string kernel = "majority";
  double gamma = 40.0;
  double eps = 0.0;
  double alpha = 2.0;
  double mu = 1.0;
  double nu = 0.0;
  std::string mode = "float";
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--kernel", opt.kernel, "RG kernel")
      ->check(CLI::IsMember({"decimation", "majority"}));
  cmd->add_option("--gamma", opt.gamma, "nearest-neighbor coupling")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--eps", opt.eps, "long-range amplitude")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--alpha", opt.alpha, "decay power (> 1)");
  cmd->add_option("--mu", opt.mu, "norm weight on original sites")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--nu", opt.nu, "norm weight on block sites")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", opt.mode, "scalar mode")
      ->check(CLI::IsMember({"float", "interval"}));
  cmd->add_option("--out", opt.out_dir, "directory for report files");
}

void emit(const CommonOptions& opt, const std::string& name, const std::string& content) {
  if (opt.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream file(std::filesystem::path(opt.out_dir) / name, std::ios::binary);
  file << content;
  if (!file) throw std::runtime_error("could not write " + name);
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

template <class T>
json certificate_json(const dysonrg::Certificate<T>& cert, const std::string& mode) {
  json j;
  j["kernel"] = to_string(cert.kernel);
  j["mode"] = mode;
  j["gamma"] = cert.gamma;
  j["epsilon"] = cert.epsilon;
  j["alpha"] = cert.alpha;
  j["mu"] = cert.weights.mu;
  j["nu"] = cert.weights.nu;
  j["seed"] = {{"a", cert.seed_a}, {"b", cert.seed_b}};
  j["D0"] = scalar_json(cert.d0);
  j["residual"] = scalar_json(cert.residual);
  j["h_weighted"] = scalar_json(cert.h_weighted);
  j["h_plain"] = scalar_json(cert.h_plain);
  j["r_max"] = cert.r_max;
  j["r_star"] = cert.r_star;
  j["objective"] = scalar_json(cert.objective);
  j["verdict"] = cert.pass ? "pass" : "fail";
  if (!cert.note.empty()) j["note"] = cert.note;
  return j;
}

template <class T>
int run_certify(const CommonOptions& opt, bool find_threshold) {
  const dysonrg::KernelKind kind = dysonrg::kernel_kind_from_string(opt.kernel);
  const dysonrg::NormWeights w(opt.mu, opt.nu);
  dysonrg::HamiltonianSpec spec;
  spec.gamma = opt.gamma;
  spec.epsilon = opt.eps;
  spec.alpha = opt.alpha;
  const auto seed = dysonrg::make_seed<T>(kind, opt.gamma);
  const auto cert = dysonrg::theorem_certificate(seed, spec, w);
  json report = certificate_json(cert, opt.mode);
  if (find_threshold) {
    const auto threshold = dysonrg::epsilon_threshold<T>(kind, opt.alpha, opt.gamma, w);
    report["epsilon_threshold"] = {
        {"epsilon_pass", threshold.epsilon_pass},
        {"epsilon_fail", threshold.epsilon_fail},
        {"label", "sufficient bound at these mu, nu, gamma, alpha"}};
  }
  emit(opt, "certificate.json", report.dump(2) + "\n");
  return cert.pass ? 0 : kExitFail;
}

// ---------------------------------------------------------------------------
// iterate
// ---------------------------------------------------------------------------

template <class T>
int run_iterate(const CommonOptions& opt, const dysonrg::TruncationPolicy& policy,
                double tol, int max_iter) {
  const dysonrg::KernelKind kind = dysonrg::kernel_kind_from_string(opt.kernel);
  const dysonrg::NormWeights w(opt.mu, opt.nu);
  dysonrg::HamiltonianSpec spec;
  spec.gamma = opt.gamma;
  spec.epsilon = opt.eps;
  spec.alpha = opt.alpha;
  spec.r_max = policy.window_sigma;
  const auto seed = dysonrg::make_seed<T>(kind, opt.gamma);

  bool certified = true;
  if (opt.eps > 0.0) {
    certified = dysonrg::theorem_certificate(seed, spec, w).pass;
    if (!certified)
      std::cerr << "warning: certificate fails at eps=" << opt.eps
                << "; iterating anyway\n";
  }

  dysonrg::FixedPointResult<T> result;
  try {
    result = dysonrg::iterate_rg(seed, spec, dysonrg::make_kernel(kind), policy, w, tol,
                                 max_iter);
  } catch (const dysonrg::divergence_error& err) {
    std::cerr << "divergence: " << err.what() << "\n";
    return kExitFail;
  }

  std::string csv = "iteration,residual,rate\n";
  for (std::size_t i = 0; i < result.residual_history.size(); ++i) {
    csv += std::to_string(i + 1) + "," + dysonrg::format_double(result.residual_history[i]) +
           ",";
    if (i > 0) csv += dysonrg::format_double(result.rate_history[i - 1]);
    csv += "\n";
  }
  emit(opt, "convergence.csv", csv);

  std::string hprime;
  for (const auto& [sites, coef] : result.hamiltonian.classes)
    hprime += "X={} Y=" + to_string(dysonrg::SiteSet(dysonrg::Lattice::block, sites)) +
              " coef=" + dysonrg::format_scalar(coef) + "\n";
  hprime += "const=" + dysonrg::format_scalar(result.hamiltonian.free_energy_per_block) +
            "\n";
  emit(opt, "hprime.txt", hprime);
  emit(opt, "c_star.txt", dysonrg::to_text(result.c_star));

  json summary;
  summary["converged"] = result.converged;
  summary["iterations"] = result.iterations;
  summary["residual"] = scalar_json(result.residual);
  summary["flip_norm"] = scalar_json(result.flip_norm);
  summary["free_energy_per_block"] =
      scalar_json(result.hamiltonian.free_energy_per_block);
  summary["truncation_loss"] = result.truncation_loss;
  summary["empty_y_mass"] = result.empty_y_mass;
  summary["certified"] = certified;
  emit(opt, "iterate.json", summary.dump(2) + "\n");

  if (!result.converged) {
    std::cerr << "iterate: residual " << dysonrg::sup(result.residual)
              << " did not reach tol " << tol << "\n";
    return kExitFail;
  }
  return certified ? 0 : kExitFail;
}

// ---------------------------------------------------------------------------
// lro
// ---------------------------------------------------------------------------

int run_lro(const CommonOptions& opt, int m, int m_max, const std::string& check,
            bool regularizer, bool table, bool threshold) {
  int exit_code = 0;
  const bool default_table = check.empty() && !regularizer && !threshold && !table;

  if (!check.empty() || table || default_table) {
    dysonrg::TorusModel model(m, opt.gamma, opt.eps, opt.alpha);
    if (table || default_table || check == "ir") {
      const auto rows = dysonrg::spectrum_table(model);
      std::string csv = "p,R,E,inv2E,g\n";
      bool all_below = true;
      for (const auto& row : rows) {
        csv += dysonrg::format_double(row.p) + "," + dysonrg::format_double(row.R) + "," +
               dysonrg::format_double(row.E) + "," + dysonrg::format_double(row.inv_two_E) +
               "," + dysonrg::format_double(row.g) + "\n";
        if (row.g > row.inv_two_E * (1.0 + 1e-12)) all_below = false;
      }
      emit(opt, "spectrum.csv", csv);
      if (check == "ir") {
        std::cout << (all_below ? "infrared bound: all modes pass\n"
                                : "infrared bound: VIOLATION\n");
        if (!all_below) exit_code = kExitFail;
      }
    }
    if (check == "gd") {
      std::mt19937 rng(12345);
      std::uniform_real_distribution<double> dist(-2.0, 2.0);
      bool all_ok = true;
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> h(model.n_sites());
        for (double& x : h) x = dist(rng);
        if (!dysonrg::gaussian_domination_check(model, h)) all_ok = false;
      }
      std::cout << (all_ok ? "gaussian domination: 200 random h pass\n"
                           : "gaussian domination: VIOLATION\n");
      if (!all_ok) exit_code = kExitFail;
    }
    if (check == "intrep") {
      double worst = 0.0;
      for (int j = 1; j <= m; ++j)
        for (int k = 1; k <= m; ++k) {
          const auto [direct, quad] = dysonrg::integral_rep_check(j, k, m, opt.alpha);
          worst = std::max(worst, std::fabs(direct - quad));
        }
      std::cout << "integral representation: max deviation "
                << dysonrg::format_double(worst) << "\n";
      if (!(worst < 1e-8)) exit_code = kExitFail;
    }
  }

  if (regularizer) {
    std::string csv = "m,sum,diff\n";
    double prev = 0.0;
    for (int mm = 16; mm <= m_max; mm *= 2) {
      const double s = dysonrg::regularizer_sum(mm, opt.alpha);
      csv += std::to_string(mm) + "," + dysonrg::format_double(s) + ",";
      if (mm > 16) csv += dysonrg::format_double(s - prev);
      csv += "\n";
      prev = s;
    }
    emit(opt, "regularizer.csv", csv);
  }

  if (threshold) {
    const double gamma0 = dysonrg::lro_gamma_threshold(opt.eps, opt.alpha, m);
    json j;
    j["m"] = m;
    j["epsilon"] = opt.eps;
    j["alpha"] = opt.alpha;
    j["gamma_threshold"] = gamma0;
    j["infrared_sum_at_threshold"] =
        dysonrg::infrared_sum(dysonrg::TorusModel(m, gamma0, opt.eps, opt.alpha));
    j["label"] = "sufficient bound (infrared_sum < 1), not the sharp gamma_0";
    emit(opt, "threshold.json", j.dump(2) + "\n");
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First RG step for 1D Ising chains with strong nearest-neighbor "
               "and weak long-range couplings"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  CommonOptions opt;

  auto* certify = app.add_subcommand("certify", "evaluate the contraction certificate");
  add_common(certify, opt);
  bool find_threshold = false;
  certify->add_flag("--threshold", find_threshold,
                    "also bisect for the largest certified epsilon");

  auto* iterate = app.add_subcommand("iterate", "iterate c -> F(c + hatH) to a fixed point");
  add_common(iterate, opt);
  dysonrg::TruncationPolicy policy;
  double tol = 1e-10;
  int max_iter = 100;
  iterate->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
  iterate->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
  iterate->add_option("--window-sigma", policy.window_sigma, "largest original site kept");
  iterate->add_option("--window-s", policy.window_s, "most negative block site kept");
  iterate->add_option("--max-x", policy.max_x_size, "largest |X| kept");
  iterate->add_option("--max-y", policy.max_y_size, "largest |Y| kept");
  iterate->add_option("--drop-tol", policy.drop_tol, "weighted coefficient drop threshold");

  auto* lro = app.add_subcommand("lro", "periodic-chain infrared and domination checks");
  add_common(lro, opt);
  int m = 3;
  int m_max = 4096;
  std::string check;
  bool regularizer = false, table = false, threshold = false;
  lro->add_option("--m", m, "half chain length")->check(CLI::PositiveNumber);
  lro->add_option("--m-max", m_max, "largest m for the regularizer table");
  lro->add_option("--check", check, "which bound to verify")
      ->check(CLI::IsMember({"ir", "gd", "intrep"}));
  lro->add_flag("--regularizer", regularizer, "tabulate (1/2m) sum 1/R(p)");
  lro->add_flag("--table", table, "emit the (p, R, E, 1/2E, g) table");
  lro->add_flag("--threshold", threshold, "bisect for infrared_sum < 1");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the golden regression suite");
  std::string sc_mode = "float";
  std::string mutate;
  selfcheck->add_option("--mode", sc_mode, "scalar mode")
      ->check(CLI::IsMember({"float", "interval"}));
  selfcheck->add_option("--mutate", mutate, "fault injection (testing the harness)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadConfig;
  }

  const bool interval_mode = opt.mode == "interval";
  try {
    if (certify->parsed())
      return interval_mode ? run_certify<Interval>(opt, find_threshold)
                           : run_certify<double>(opt, find_threshold);
    if (iterate->parsed())
      return interval_mode ? run_iterate<Interval>(opt, policy, tol, max_iter)
                           : run_iterate<double>(opt, policy, tol, max_iter);
    if (lro->parsed())
      return run_lro(opt, m, m_max, check, regularizer, table, threshold);
    if (selfcheck->parsed()) {
      dysonrg::SelfCheckOptions options;
      options.interval_mode = sc_mode == "interval";
      options.mutate = mutate;
      return dysonrg::run_selfcheck(options, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitComputeError;
  }
  return kExitBadConfig;
}
