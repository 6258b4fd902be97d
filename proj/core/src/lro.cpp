#include "dysonrg/lro.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "dysonrg/parallel.hpp"

namespace dysonrg {

namespace {

constexpr int kEnumerationCap = 20;  // sites; 2^20 configurations

// One-sided power series sum_{n>=0} (c + 2mn)^-alpha: explicit terms, then a
// midpoint-rule integral with its first Euler-Maclaurin correction. The
// bracket [partial + int_N, partial + int_{N-1}] encloses the true value.
struct PowerSeries {
  double value;
  double lo;
  double hi;
};

PowerSeries one_sided_series(double c, double two_m, double alpha) {
  constexpr int kTerms = 256;
  double partial = 0.0;
  for (int n = 0; n < kTerms; ++n) partial += std::pow(c + two_m * n, -alpha);
  auto integral_from = [&](double a) {
    return std::pow(c + two_m * a, 1.0 - alpha) / ((alpha - 1.0) * two_m);
  };
  const double mid = c + two_m * (kTerms - 0.5);
  const double correction = -two_m * alpha * std::pow(mid, -alpha - 1.0) / 24.0;
  PowerSeries out;
  out.value = partial + integral_from(kTerms - 0.5) + correction;
  out.lo = partial + integral_from(kTerms);
  out.hi = partial + integral_from(kTerms - 1);
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("alpha must exceed 1");
}

int reduced_distance(int d, int m) {
  const int period = 2 * m;
  int r = d % period;
  if (r < 0) r += period;
  if (r == 0) throw std::domain_error("periodic coupling undefined at d = 0 mod 2m");
  return r;
}

struct GslWorkspace {
  GslWorkspace() : w(gsl_integration_workspace_alloc(4096)) {
    if (!w) throw std::bad_alloc();
  }
  ~GslWorkspace() { gsl_integration_workspace_free(w); }
  gsl_integration_workspace* w;
};

double gsl_call(double (*f)(double, void*), void* params, double a, double b,
                bool to_infinity) {
  GslWorkspace ws;
  gsl_function fn{f, params};
  double result = 0.0, abserr = 0.0;
  gsl_set_error_handler_off();
  const int status =
      to_infinity
          ? gsl_integration_qagiu(&fn, a, 1e-13, 1e-12, 4096, ws.w, &result, &abserr)
          : gsl_integration_qags(&fn, a, b, 1e-13, 1e-12, 4096, ws.w, &result, &abserr);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw std::runtime_error("quadrature did not converge (gsl status " +
                             std::to_string(status) + ")");
  return result;
}

struct MomentParams {
  double n;
  double alpha;
};

double moment_integrand(double x, void* params) {
  const auto* p = static_cast<const MomentParams*>(params);
  return std::exp(-p->n * x) * std::pow(x, p->alpha - 1.0);
}

struct IntRepParams {
  double a1;
  double a2;
  double two_m;
  double alpha;
};

double intrep_integrand(double x, void* params) {
  const auto* p = static_cast<const IntRepParams*>(params);
  const double denom = -std::expm1(-p->two_m * x);
  return (std::exp(-p->a1 * x) + std::exp(-p->a2 * x)) / denom *
         std::pow(x, p->alpha - 1.0);
}

struct EnumerationPartial {
  double z = 0.0;
  std::vector<double> corr;  // flattened 2m x 2m upper triangle incl. diagonal
};

}  // namespace

TorusModel::TorusModel(int m_, double gamma_, double epsilon_, double alpha_)
    : m(m_), gamma(gamma_), epsilon(epsilon_), alpha(alpha_) {
  if (m < 1) throw std::invalid_argument("TorusModel: m must be positive");
  check_alpha(alpha);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("TorusModel: epsilon must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("TorusModel: gamma must be positive");
  periodic_j_.resize(2 * m);
  for (int d = 1; d < 2 * m; ++d) periodic_j_[d] = periodic_coupling_value(d, m, alpha);
}

std::vector<int> TorusModel::sites() const {
  std::vector<int> out;
  out.reserve(2 * m);
  for (int i = 1 - m; i <= m; ++i) out.push_back(i);
  return out;
}

double TorusModel::coupling(int distance) const {
  return periodic_j_[reduced_distance(distance, m)];
}

double TorusModel::pair_weight(int site_a, int site_b) const {
  const int d = reduced_distance(site_a - site_b, m);
  const bool nearest = d == 1 || d == 2 * m - 1;
  return (nearest ? gamma - epsilon : 0.0) + epsilon * periodic_j_[d];
}

Interval periodic_coupling(int d, int m, double alpha) {
  check_alpha(alpha);
  const int r = reduced_distance(d, m);
  const double two_m = 2.0 * m;
  const PowerSeries up = one_sided_series(r, two_m, alpha);
  const PowerSeries down = one_sided_series(two_m - r, two_m, alpha);
  // Slack covers the rounding of the explicit partial sums.
  const double lo = (up.lo + down.lo) * (1.0 - 1e-12);
  const double hi = (up.hi + down.hi) * (1.0 + 1e-12);
  return Interval(lo, hi);
}

double periodic_coupling_value(int d, int m, double alpha) {
  check_alpha(alpha);
  const int r = reduced_distance(d, m);
  const double two_m = 2.0 * m;
  return one_sided_series(r, two_m, alpha).value +
         one_sided_series(two_m - r, two_m, alpha).value;
}

double spectral_R(double p, const TorusModel& model) {
  double sum = 0.0;
  for (int n = 1 - model.m; n <= model.m; ++n) {
    if (n == 0) continue;
    sum += model.coupling(n) * (1.0 - std::cos(p * n));
  }
  return sum;
}

double dispersion_E(double p, const TorusModel& model) {
  return (model.gamma - model.epsilon) * (1.0 - std::cos(p)) +
         0.5 * model.epsilon * spectral_R(p, model);
}

double regularizer_sum(int m, double alpha) {
  if (m < 2) throw std::invalid_argument("regularizer_sum: m must be >= 2");
  check_alpha(alpha);
  const int period = 2 * m;
  std::vector<double> j(period);
  for (int d = 1; d < period; ++d) j[d] = periodic_coupling_value(d, m, alpha);
  // cos(pi k n / m) depends only on (k n) mod 2m; the table keeps the inner
  // loop in integer arithmetic.
  std::vector<double> cos_table(period);
  for (int t = 0; t < period; ++t)
    cos_table[t] = std::cos(std::numbers::pi * t / m);
  double total = 0.0;
  for (int k = 1; k < period; ++k) {
    double r = 0.0;
    std::int64_t t = 0;
    for (int n = 1; n < period; ++n) {
      t += k;
      if (t >= period) t -= period;
      // n runs over 1..2m-1 which is Lambda \ {0} up to periodicity
      r += j[n] * (1.0 - cos_table[t]);
    }
    total += 1.0 / r;
  }
  return total / period;
}

double infrared_sum(const TorusModel& model) {
  const int period = model.n_sites();
  double total = 0.0;
  for (int k = 1; k < period; ++k) {
    const double p = std::numbers::pi * k / model.m;
    total += 1.0 / (2.0 * dispersion_E(p, model));
  }
  return total / period;
}

double lro_gamma_threshold(double epsilon, double alpha, int m) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("threshold: epsilon must be positive");
  check_alpha(alpha);
  auto sum_at = [&](double gamma) {
    return infrared_sum(TorusModel(m, gamma, epsilon, alpha));
  };
  double hi = std::max(1.0, 2.0 * epsilon);
  int guard = 0;
  while (sum_at(hi) >= 1.0) {
    hi *= 2.0;
    if (++guard > 80) throw std::runtime_error("threshold: no passing gamma found");
  }
  double lo = epsilon;
  if (sum_at(lo * (1.0 + 1e-12)) < 1.0) return lo;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) < 1.0 ? hi : lo) = mid;
  }
  return hi;
}

namespace {

EnumerationPartial enumerate_range(const TorusModel& model, std::uint64_t begin,
                                   std::uint64_t end) {
  const int n = model.n_sites();
  std::vector<double> b(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) b[i * n + k] = model.pair_weight(i, k);
  EnumerationPartial part;
  part.corr.assign(n * n, 0.0);
  std::vector<int> spin(n);
  for (std::uint64_t cfg = begin; cfg < end; ++cfg) {
    for (int i = 0; i < n; ++i) spin[i] = (cfg >> i) & 1 ? -1 : 1;
    double energy = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k)
        if (spin[i] != spin[k]) energy += 2.0 * b[i * n + k];
    const double weight = std::exp(-energy);
    part.z += weight;
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        part.corr[i * n + k] += weight * spin[i] * spin[k];
  }
  return part;
}

void check_enumeration_cap(const TorusModel& model) {
  if (model.n_sites() > kEnumerationCap)
    throw std::length_error("exact enumeration capped at 2m <= " +
                            std::to_string(kEnumerationCap));
}

}  // namespace

std::vector<std::vector<double>> pair_correlations(const TorusModel& model) {
  check_enumeration_cap(model);
  const int n = model.n_sites();
  const std::uint64_t configs = std::uint64_t(1) << n;
  EnumerationPartial init;
  init.corr.assign(n * n, 0.0);
  EnumerationPartial total = parallel_chunk_reduce<EnumerationPartial>(
      configs,
      [&](std::uint64_t b, std::uint64_t e) { return enumerate_range(model, b, e); },
      init, [n](EnumerationPartial acc, const EnumerationPartial& p) {
        acc.z += p.z;
        for (int i = 0; i < n * n; ++i) acc.corr[i] += p.corr[i];
        return acc;
      });
  std::vector<std::vector<double>> corr(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      corr[i][k] = total.corr[i * n + k] / total.z;
      corr[k][i] = corr[i][k];
    }
  return corr;
}

double fourier_two_point(const TorusModel& model, double p) {
  const auto corr = pair_correlations(model);
  const auto sites = model.sites();
  const int n = model.n_sites();
  double g = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) g += std::cos(p * (sites[i] - sites[k])) * corr[i][k];
  return g / n;
}

double gaussian_partition(const TorusModel& model, const std::vector<double>& h) {
  check_enumeration_cap(model);
  const int n = model.n_sites();
  if (static_cast<int>(h.size()) != n)
    throw std::invalid_argument("gaussian_partition: h must have one entry per site");
  std::vector<double> b(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) b[i * n + k] = model.pair_weight(i, k);
  const std::uint64_t configs = std::uint64_t(1) << n;
  const double z = parallel_chunk_reduce<double>(
      configs,
      [&](std::uint64_t begin, std::uint64_t end) {
        double acc = 0.0;
        std::vector<int> spin(n);
        for (std::uint64_t cfg = begin; cfg < end; ++cfg) {
          for (int i = 0; i < n; ++i) spin[i] = (cfg >> i) & 1 ? -1 : 1;
          double expo = 0.0;
          for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k) {
              const double d = spin[i] - spin[k] - h[i] + h[k];
              expo += b[i * n + k] * d * d;
            }
          acc += std::exp(-0.5 * expo);
        }
        return acc;
      },
      0.0, std::plus<double>());
  return z / static_cast<double>(configs);
}

bool gaussian_domination_check(const TorusModel& model, const std::vector<double>& h) {
  const double zh = gaussian_partition(model, h);
  const double z0 = gaussian_partition(model, std::vector<double>(model.n_sites(), 0.0));
  return zh <= z0 * (1.0 + 1e-12);
}

std::pair<double, double> moment_measure_check(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("moment_measure_check: n must be >= 1");
  check_alpha(alpha);
  MomentParams params{static_cast<double>(n), alpha};
  const double inner = gsl_call(moment_integrand, &params, 0.0, 1.0, false);
  const double outer = gsl_call(moment_integrand, &params, 1.0, 0.0, true);
  return {std::pow(n, -alpha), (inner + outer) / gsl_sf_gamma(alpha)};
}

std::pair<double, double> integral_rep_check(int j, int k, int m, double alpha) {
  if (j < 1 || j > m || k < 1 || k > m)
    throw std::invalid_argument("integral_rep_check: need 1 <= j,k <= m");
  check_alpha(alpha);
  IntRepParams params{static_cast<double>(j + k - 1),
                      static_cast<double>(2 * m - j - k + 1), 2.0 * m, alpha};
  const double inner = gsl_call(intrep_integrand, &params, 0.0, 1.0, false);
  const double outer = gsl_call(intrep_integrand, &params, 1.0, 0.0, true);
  const double direct = periodic_coupling_value(j - (1 - k), m, alpha);
  return {direct, (inner + outer) / gsl_sf_gamma(alpha)};
}

std::vector<SpectrumRow> spectrum_table(const TorusModel& model) {
  check_enumeration_cap(model);
  const auto corr = pair_correlations(model);
  const auto sites = model.sites();
  const int n = model.n_sites();
  std::vector<SpectrumRow> rows;
  rows.reserve(n - 1);
  for (int idx = 1; idx < n; ++idx) {
    SpectrumRow row;
    row.p = std::numbers::pi * idx / model.m;
    row.R = spectral_R(row.p, model);
    row.E = dispersion_E(row.p, model);
    row.inv_two_E = 1.0 / (2.0 * row.E);
    double g = 0.0;
    for (int i = 0; i < n; ++i)
      for (int kk = 0; kk < n; ++kk)
        g += std::cos(row.p * (sites[i] - sites[kk])) * corr[i][kk];
    row.g = g / n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dysonrg
