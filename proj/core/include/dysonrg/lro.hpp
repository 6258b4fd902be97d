#pragma once

#include <utility>
#include <vector>

#include "dysonrg/interval.hpp"

namespace dysonrg {

// Periodic chain Lambda = {1-m, ..., m} with couplings
// B_{jk} = (gamma - eps) N_{jk} + eps J_{jk} per unordered pair, where N is
// the nearest-neighbor indicator on the ring and J the periodized power law.
// H(sigma) = (1/2) sum_{j<k} B_{jk} (sigma_j - sigma_k)^2, Gibbs weight e^{-H}.
struct TorusModel {
  TorusModel(int m, double gamma, double epsilon, double alpha);

  int m;
  double gamma;
  double epsilon;
  double alpha;

  int n_sites() const { return 2 * m; }
  std::vector<int> sites() const;                 // 1-m .. m
  double coupling(int distance) const;            // periodized J at ring distance
  double pair_weight(int site_a, int site_b) const;  // B for an unordered pair

 private:
  std::vector<double> periodic_j_;  // index by distance 1 .. 2m-1
};

// J_{0,d} = sum_n |d + 2mn|^-alpha as a rigorous bracket (partial sum plus
// integral-comparison tails). d must not be divisible by 2m.
Interval periodic_coupling(int d, int m, double alpha);

// Midpoint-corrected point value of the same series; its error is far below
// the bracket width.
double periodic_coupling_value(int d, int m, double alpha);

// R(p) = sum_{n in Lambda, n != 0} J_{0,n} (1 - cos pn) and the dispersion
// E(p) = (gamma - eps)(1 - cos p) + (eps/2) R(p).
double spectral_R(double p, const TorusModel& model);
double dispersion_E(double p, const TorusModel& model);

// (1/2m) sum_{p in dual lattice, p != 0} 1 / R(p); bounded in m for
// 1 < alpha < 2, which is what makes the 1D infrared integral finite.
double regularizer_sum(int m, double alpha);

// (1/2m) sum_{p != 0} 1 / (2 E(p)); below 1 it forces an atom at p = 0 since
// <sigma_0^2> = 1.
double infrared_sum(const TorusModel& model);

// Smallest gamma (to relative 1e-9, by bisection) with infrared_sum < 1.
// A sufficient bound for long-range order on the torus, not a sharp value.
double lro_gamma_threshold(double epsilon, double alpha, int m);

// Exact enumeration (2m <= 20). corr[j][k] = <sigma_j sigma_k>.
std::vector<std::vector<double>> pair_correlations(const TorusModel& model);

// g_m(p) = <sigma_hat_p sigma_hat_{-p}> from the enumerated correlations.
double fourier_two_point(const TorusModel& model, double p);

// Z(h) = < exp(-(1/2) sum_{j<k} B_jk |sigma_j - sigma_k - h_j + h_k|^2) >_0
// with <.>_0 the plain spin average. Gaussian domination: Z(h) <= Z(0).
double gaussian_partition(const TorusModel& model, const std::vector<double>& h);
bool gaussian_domination_check(const TorusModel& model, const std::vector<double>& h);

// n^-alpha against the moment integral int_0^1 lambda^n mu(dlambda) with
// mu(dlambda) = (-ln lambda)^{alpha-1} / (Gamma(alpha) lambda) dlambda.
std::pair<double, double> moment_measure_check(int n, double alpha);

// Periodized J_{j,1-k} against its reflection-positive integral
// representation, both to quadrature accuracy.
std::pair<double, double> integral_rep_check(int j, int k, int m, double alpha);

struct SpectrumRow {
  double p;
  double R;
  double E;
  double inv_two_E;  // 1/(2E), the infrared bound
  double g;          // enumerated g_m(p)
};

// One row per nonzero dual-lattice momentum; requires 2m <= 20.
std::vector<SpectrumRow> spectrum_table(const TorusModel& model);

}  // namespace dysonrg
