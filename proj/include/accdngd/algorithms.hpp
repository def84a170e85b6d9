#pragma once

#include <accdngd/graphs.hpp>
#include <accdngd/objectives.hpp>
#include <accdngd/types.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace accdngd {

enum class AlgoKind {
  AccDngdSC,
  AccDngdNSC,
  CGD,
  CNGDSC,
  CNGDNSC,
  DGD,
  DNG,
  DNC,
  EXTRA,
  AccDGD,
};

std::string_view to_string(AlgoKind kind);
AlgoKind algo_kind_from_string(std::string_view name);

/// Centralized methods run on a single 1 x N row and query global gradients.
bool is_centralized(AlgoKind kind);
/// Methods that carry a gradient-tracking variable s.
bool is_tracking(AlgoKind kind);

struct StepSchedule {
  enum class Kind { Fixed, Vanishing, Harmonic, InvSqrt };
  Kind kind = Kind::Fixed;
  double eta = 0.0;  // Fixed / Vanishing
  double t0 = 1.0;   // Vanishing
  double beta = 0.0; // Vanishing
  double c = 0.0;    // Harmonic / InvSqrt

  static StepSchedule fixed(double eta);
  static StepSchedule vanishing(double eta, double t0, double beta);
  static StepSchedule harmonic(double c);
  static StepSchedule inv_sqrt(double c);

  /// Throws InvalidParam when the parameters violate the schedule's domain.
  void validate() const;
};

std::string_view to_string(StepSchedule::Kind kind);

double schedule_eta(const StepSchedule& s, long t);

/// Unique root in (0,1) of a^2 = (eta_next/eta_t)(1 - a) alpha_t^2.
double next_alpha(double alpha_t, double eta_t, double eta_next);

enum class InitMode { Exact, Relaxed };

/// Inner consensus rounds for D-NC: ceil(log2(t+2)) by default, or a constant.
struct TauRule {
  bool logarithmic = true;
  int constant = 0;
  int operator()(long t) const;
};

struct AlgoState {
  AlgoKind kind = AlgoKind::AccDngdSC;
  long t = 0;
  Matrix x, v, y, s;
  // gradients at the current query point (y for momentum methods, x otherwise)
  Matrix grad;
  // previous iterate and its gradient, kept by EXTRA and the momentum lines
  Matrix x_prev, grad_prev;
  double alpha = 0.0;
  double eta = 0.0;
  long comm_count = 0;

  StepSchedule schedule;
  TauRule tau;
  bool started = false;  // EXTRA: first step done
};

/// Weights used at iteration t. Fixed topologies return the same matrix;
/// time-varying ones resample from a ground graph with a per-t stream.
class WeightProvider {
 public:
  virtual ~WeightProvider() = default;
  virtual const Matrix& at(long t) = 0;
  virtual int n() const = 0;
};

class FixedWeights final : public WeightProvider {
 public:
  explicit FixedWeights(Matrix w) : w_(std::move(w)) {}
  const Matrix& at(long) override { return w_; }
  int n() const override { return static_cast<int>(w_.rows()); }

 private:
  Matrix w_;
};

class TimeVaryingWeights final : public WeightProvider {
 public:
  TimeVaryingWeights(Graph ground, double remove_fraction, std::uint64_t seed);
  const Matrix& at(long t) override;
  int n() const override { return ground_.n(); }

 private:
  Graph ground_;
  double remove_fraction_;
  std::uint64_t seed_;
  long cached_t_ = -1;
  Matrix w_;
};

AlgoState init_acc_dngd_sc(const ObjectiveSuite& suite, double eta, const Matrix& x0,
                           std::optional<double> alpha = std::nullopt);
AlgoState init_acc_dngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, InitMode mode,
                            const Matrix& x0, std::optional<double> alpha0 = std::nullopt);
/// Zero start, as in the algorithm's original statement.
AlgoState init_acc_dngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, InitMode mode);

AlgoState init_cgd(const ObjectiveSuite& suite, double eta, const RowVector& x0);
AlgoState init_cngd_sc(const ObjectiveSuite& suite, double eta, const RowVector& x0,
                       std::optional<double> alpha = std::nullopt);
AlgoState init_cngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, const RowVector& x0,
                        std::optional<double> alpha0 = std::nullopt);
AlgoState init_dgd(const ObjectiveSuite& suite, const StepSchedule& schedule, const Matrix& x0);
AlgoState init_dng(const ObjectiveSuite& suite, double c, const Matrix& x0);
AlgoState init_dnc(const ObjectiveSuite& suite, double eta, const Matrix& x0, TauRule tau = {});
AlgoState init_extra(const ObjectiveSuite& suite, double eta, const Matrix& x0);
AlgoState init_acc_dgd(const ObjectiveSuite& suite, const StepSchedule& schedule, const Matrix& x0);

void step_acc_dngd_sc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_acc_dngd_nsc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_cgd(AlgoState& st, const ObjectiveSuite& suite);
void step_cngd_sc(AlgoState& st, const ObjectiveSuite& suite);
void step_cngd_nsc(AlgoState& st, const ObjectiveSuite& suite);
void step_dgd(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_dng(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_dnc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_extra(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);
void step_acc_dgd(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);

/// Dispatches on st.kind; centralized kinds ignore w. Throws NonFinite if
/// the new iterate has a non-finite entry, leaving st at the last finite state.
void step(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w);

/// Step-size bound for the strongly convex method.
double bound_thm3(double sigma, double L, double mu);
/// Step-size bound for the strongly convex method on composite h_i(x A_i).
double bound_thm5(double sigma, double L, double mu);

struct Thm4Check {
  bool cond_i = false, cond_ii = false, cond_iii = false;
  double t0_min = 0.0;       // (i): t0 must exceed this
  double eta_max_ii = 0.0;   // (ii): eta must be below this
  double eta_max_iii = 0.0;  // (iii): eta must be below this
  double D = 0.0;
  bool ok() const { return cond_i && cond_ii && cond_iii; }
};

/// Evaluates the three vanishing-step conditions. R is the level-set diameter
/// and v0_dist = ||v_bar(0) - x*||; both are caller supplied.
Thm4Check check_thm4_conditions(double sigma, double L, double beta, double t0, double eta, double R,
                                double v0_dist);

/// Condition (ii) of the vanishing-step theorem: eta must stay below this.
double bound_thm4_ii(double sigma, double L);

/// D(beta, t0) = 1 / ((t0 + 3)^2 e^{16 + 6/(2 - beta)}).
double thm4_D(double beta, double t0);

}  // namespace accdngd
