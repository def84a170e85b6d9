#pragma once

#include <accdngd/algorithms.hpp>
#include <accdngd/objectives.hpp>
#include <accdngd/types.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace accdngd {

struct TraceRecord {
  long t = 0;
  double avg_obj_err = 0.0;
  double max_individual_err = 0.0;
  double consensus_y = 0.0;
  double consensus_s = 0.0;  // NaN for methods without a tracking variable
  double grad_norm = 0.0;
  double eta_t = 0.0;
  double alpha_t = 0.0;      // NaN for methods without momentum weight
  long comm_count = 0;
};

/// Pure function of its arguments.
TraceRecord record(const AlgoState& st, const ObjectiveSuite& suite, double fstar);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(avg_obj_err) against log(t) over t_min <= t <= t_max.
double loglog_slope(const std::vector<TraceRecord>& trace, long t_min, long t_max);
double loglog_slope(const std::vector<double>& t, const std::vector<double>& err, double t_min, double t_max);

struct RateFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

/// Fit of log(avg_obj_err) against t; rate = exp(slope).
RateFit linear_rate(const std::vector<TraceRecord>& trace, long t_min, long t_max);
RateFit linear_rate(const std::vector<double>& t, const std::vector<double>& err, double t_min, double t_max);

/// Same fit restricted to records whose error lies in [lo, hi].
RateFit linear_rate_in_band(const std::vector<TraceRecord>& trace, double lo, double hi);

struct GainMatrixSC {
  double eta = 0, sigma = 0, L = 0, mu = 0, alpha = 0;
  Eigen::Matrix3d g;
  double rho = 0;            // Perron root
  double second_modulus = 0; // largest modulus among the other two eigenvalues
  double poly_residual = 0;  // |p(rho)| for the closed-form characteristic polynomial
};

struct GainMatrixNSC {
  double eta = 0, sigma = 0, L = 0;
  Eigen::Matrix3d g;
  double theta = 0;          // Perron root
  Eigen::Vector3d chi;       // Perron vector with chi(2) = 1
  double eig_residual = 0;   // ||G chi - theta chi||
  double poly_residual = 0;
};

GainMatrixSC gain_matrix_sc(double eta, double sigma, double L, double mu);
GainMatrixNSC gain_matrix_nsc(double eta, double sigma, double L);

/// Closed-form characteristic polynomials, used as an independent check on
/// the dense eigen-solver.
double charpoly_sc(double zeta, double eta, double sigma, double L, double alpha);
double charpoly_nsc(double zeta, double eta, double sigma, double L);

struct CertRow {
  std::string lemma;
  std::string check;
  double sigma = 0, L = 0, mu = 0, eta = 0, eta2 = 0;
  double beta = 0, t0 = 0;
  double value = 0;  // computed quantity
  double bound = 0;  // the lemma's bound
  double margin = 0; // signed slack, positive when the inequality holds
  bool ok = true;
};

struct CertReport {
  std::vector<CertRow> rows;
  int violations = 0;
  double max_eig_residual = 0.0;
  double max_poly_residual = 0.0;
  double lambda_slope = 0.0;  // only filled by the alpha/lambda certificate

  void add(CertRow row);
  void merge(const CertReport& other);
};

/// Relative tolerance used to decide a violation: margin < -kCertTol * max(1, |bound|).
inline constexpr double kCertTol = 1e-9;

CertReport certify_lemma5(double sigma, double L, double mu, int samples, Rng& rng);
CertReport certify_lemmas8_10(double sigma, double L, int samples, Rng& rng);
/// beta = 0 runs the fixed-step sequence and checks only alpha_t <= 2/(t+1).
CertReport certify_lemma12(double eta, double t0, double beta, double L, long horizon);

/// Full parameter grids used for release certification.
CertReport certify_lemma5_grid(int samples, std::uint64_t seed);
CertReport certify_lemmas8_10_grid(int samples, std::uint64_t seed);
CertReport certify_lemma12_grid(long horizon);

void write_report_csv(std::ostream& os, const CertReport& report);

struct InexactGradientReport {
  int samples = 0;
  int violations = 0;
  double max_lower_violation = 0.0;  // max of (lower bound - f(omega)), scaled
  double max_upper_violation = 0.0;  // max of (f(omega) - upper bound), scaled
};

/// Samples omega around the current average query point and evaluates the
/// two-sided inexact-gradient sandwich with tolerance kCertTol * max(1, |f(omega)|).
InexactGradientReport check_inexact_gradient(const AlgoState& st, const ObjectiveSuite& suite, int samples,
                                             Rng& rng);

/// ||s_bar - g_bar|| / max(||g_bar||, rms_i ||grad_i||) for tracking methods.
double tracking_residual(const AlgoState& st);

/// Largest residual of the average-sequence identities between two
/// consecutive states of Acc-DNGD-SC or Acc-DNGD-NSC, scaled by max(1, |terms|).
double average_identity_residual(const AlgoState& before, const AlgoState& after);

}  // namespace accdngd
