#include <accdngd/algorithms.hpp>
#include <accdngd/error.hpp>

#include <cmath>
#include <limits>

namespace accdngd {

namespace {

constexpr struct {
  AlgoKind kind;
  std::string_view name;
} kAlgoNames[] = {
    {AlgoKind::AccDngdSC, "acc_dngd_sc"}, {AlgoKind::AccDngdNSC, "acc_dngd_nsc"}, {AlgoKind::CGD, "cgd"},
    {AlgoKind::CNGDSC, "cngd_sc"},        {AlgoKind::CNGDNSC, "cngd_nsc"},        {AlgoKind::DGD, "dgd"},
    {AlgoKind::DNG, "dng"},               {AlgoKind::DNC, "dnc"},                 {AlgoKind::EXTRA, "extra"},
    {AlgoKind::AccDGD, "acc_dgd"},
};

void require_weights(const AlgoState& st, const Matrix& w) {
  require(w.rows() == st.x.rows() && w.cols() == st.x.rows(), ErrorKind::InvalidParam,
          "weight matrix does not match the agent count");
}

void require_stacked(const ObjectiveSuite& suite, const Matrix& x0) {
  require(x0.rows() == suite.n && x0.cols() == suite.dim, ErrorKind::InvalidParam, "initial point has wrong shape");
  require(x0.allFinite(), ErrorKind::InvalidParam, "initial point is not finite");
}

Matrix global_grad_row(const ObjectiveSuite& suite, const Matrix& x) { return global_grad(suite, x.row(0)); }

AlgoState base_state(AlgoKind kind, const Matrix& x0) {
  AlgoState st;
  st.kind = kind;
  st.x = x0;
  st.v = x0;
  st.y = x0;
  return st;
}

double sc_alpha(const ObjectiveSuite& suite, double eta, std::optional<double> alpha) {
  require(eta > 0.0 && std::isfinite(eta), ErrorKind::InvalidParam, "step size must be positive");
  if (alpha) {
    require(*alpha > 0.0 && *alpha < 1.0, ErrorKind::InvalidParam, "alpha must lie in (0, 1)");
    return *alpha;
  }
  if (!suite.strongly_convex()) throw Error(ErrorKind::NotStronglyConvex, "suite has mu = 0");
  const double a = std::sqrt(suite.mu * eta);
  require(a <= 1.0, ErrorKind::StepTooLarge, "sqrt(mu * eta) must not exceed 1");
  return a;
}

double nsc_alpha0(const ObjectiveSuite& suite, double eta0, std::optional<double> alpha0) {
  if (alpha0) {
    require(*alpha0 > 0.0 && *alpha0 < 1.0, ErrorKind::InvalidParam, "alpha0 must lie in (0, 1)");
    return *alpha0;
  }
  if (!(eta0 * suite.L < 1.0))
    throw Error(ErrorKind::StepTooLarge, "eta0 * L must be below 1 for alpha0 = sqrt(eta0 * L)");
  return std::sqrt(eta0 * suite.L);
}

long dgd_index(const StepSchedule& s, long t) { return s.kind == StepSchedule::Kind::InvSqrt ? t + 1 : t; }

}  // namespace

std::string_view to_string(AlgoKind kind) {
  for (const auto& e : kAlgoNames)
    if (e.kind == kind) return e.name;
  return "unknown";
}

AlgoKind algo_kind_from_string(std::string_view name) {
  for (const auto& e : kAlgoNames)
    if (e.name == name) return e.kind;
  throw Error(ErrorKind::InvalidParam, "unknown algorithm `" + std::string(name) + "`");
}

bool is_centralized(AlgoKind kind) {
  return kind == AlgoKind::CGD || kind == AlgoKind::CNGDSC || kind == AlgoKind::CNGDNSC;
}

bool is_tracking(AlgoKind kind) {
  return kind == AlgoKind::AccDngdSC || kind == AlgoKind::AccDngdNSC || kind == AlgoKind::AccDGD;
}

std::string_view to_string(StepSchedule::Kind kind) {
  switch (kind) {
    case StepSchedule::Kind::Fixed: return "fixed";
    case StepSchedule::Kind::Vanishing: return "vanishing";
    case StepSchedule::Kind::Harmonic: return "harmonic";
    case StepSchedule::Kind::InvSqrt: return "invsqrt";
  }
  return "unknown";
}

StepSchedule StepSchedule::fixed(double eta) {
  StepSchedule s;
  s.kind = Kind::Fixed;
  s.eta = eta;
  s.validate();
  return s;
}

StepSchedule StepSchedule::vanishing(double eta, double t0, double beta) {
  StepSchedule s;
  s.kind = Kind::Vanishing;
  s.eta = eta;
  s.t0 = t0;
  s.beta = beta;
  s.validate();
  return s;
}

StepSchedule StepSchedule::harmonic(double c) {
  StepSchedule s;
  s.kind = Kind::Harmonic;
  s.c = c;
  s.validate();
  return s;
}

StepSchedule StepSchedule::inv_sqrt(double c) {
  StepSchedule s;
  s.kind = Kind::InvSqrt;
  s.c = c;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  switch (kind) {
    case Kind::Fixed:
      require(eta > 0.0 && std::isfinite(eta), ErrorKind::InvalidParam, "eta must be positive");
      break;
    case Kind::Vanishing:
      require(eta > 0.0 && std::isfinite(eta), ErrorKind::InvalidParam, "eta must be positive");
      require(t0 >= 1.0, ErrorKind::InvalidParam, "t0 must be at least 1");
      require(beta > 0.0 && beta < 2.0, ErrorKind::InvalidParam, "beta must lie in (0, 2)");
      break;
    case Kind::Harmonic:
    case Kind::InvSqrt:
      require(c > 0.0 && std::isfinite(c), ErrorKind::InvalidParam, "c must be positive");
      break;
  }
}

double schedule_eta(const StepSchedule& s, long t) {
  s.validate();
  require(t >= 0, ErrorKind::InvalidParam, "negative iteration index");
  switch (s.kind) {
    case StepSchedule::Kind::Fixed: return s.eta;
    case StepSchedule::Kind::Vanishing: return s.eta / std::pow(static_cast<double>(t) + s.t0, s.beta);
    case StepSchedule::Kind::Harmonic: return s.c / static_cast<double>(t + 1);
    case StepSchedule::Kind::InvSqrt:
      require(t >= 1, ErrorKind::InvalidParam, "c/sqrt(t) needs t >= 1");
      return s.c / std::sqrt(static_cast<double>(t));
  }
  return 0.0;
}

double next_alpha(double alpha_t, double eta_t, double eta_next) {
  require(alpha_t > 0.0 && alpha_t < 1.0, ErrorKind::InvalidParam, "alpha_t must lie in (0, 1)");
  require(eta_t > 0.0 && eta_next > 0.0, ErrorKind::InvalidParam, "step sizes must be positive");
  require(eta_next <= eta_t, ErrorKind::InvalidParam, "step sizes must be non-increasing");
  return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * eta_t / (eta_next * alpha_t * alpha_t)));
}

int TauRule::operator()(long t) const {
  if (!logarithmic) return constant;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(t) + 2.0)));
}

TimeVaryingWeights::TimeVaryingWeights(Graph ground, double remove_fraction, std::uint64_t seed)
    : ground_(std::move(ground)), remove_fraction_(remove_fraction), seed_(seed) {
  require(remove_fraction >= 0.0 && remove_fraction <= 1.0, ErrorKind::InvalidParam, "remove_fraction outside [0, 1]");
}

const Matrix& TimeVaryingWeights::at(long t) {
  if (t != cached_t_) {
    Rng rng = derive_rng(seed_, {static_cast<std::uint64_t>(t)});
    w_ = metropolis_weights(sample_time_varying(ground_, remove_fraction_, rng)).w();
    cached_t_ = t;
  }
  return w_;
}

// ---- initialisation ----------------------------------------------------------

AlgoState init_acc_dngd_sc(const ObjectiveSuite& suite, double eta, const Matrix& x0, std::optional<double> alpha) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::AccDngdSC, x0);
  st.alpha = sc_alpha(suite, eta, alpha);
  st.eta = eta;
  st.schedule = StepSchedule::fixed(eta);
  st.grad = stacked_local_grads(suite, st.y);
  st.s = st.grad;
  return st;
}

AlgoState init_acc_dngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, InitMode mode,
                            const Matrix& x0, std::optional<double> alpha0) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::AccDngdNSC, x0);
  st.schedule = schedule;
  st.eta = schedule_eta(schedule, 0);
  st.alpha = nsc_alpha0(suite, st.eta, alpha0);
  st.grad = stacked_local_grads(suite, st.y);
  if (mode == InitMode::Relaxed) {
    st.s = st.grad;
  } else {
    st.s = row_mean(st.grad).replicate(suite.n, 1);
  }
  return st;
}

AlgoState init_acc_dngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, InitMode mode) {
  return init_acc_dngd_nsc(suite, schedule, mode, Matrix::Zero(suite.n, suite.dim));
}

AlgoState init_cgd(const ObjectiveSuite& suite, double eta, const RowVector& x0) {
  require(eta > 0.0, ErrorKind::InvalidParam, "step size must be positive");
  require(x0.size() == suite.dim, ErrorKind::InvalidParam, "initial point has wrong dimension");
  AlgoState st = base_state(AlgoKind::CGD, x0);
  st.eta = eta;
  st.schedule = StepSchedule::fixed(eta);
  st.grad = global_grad_row(suite, st.x);
  return st;
}

AlgoState init_cngd_sc(const ObjectiveSuite& suite, double eta, const RowVector& x0, std::optional<double> alpha) {
  require(x0.size() == suite.dim, ErrorKind::InvalidParam, "initial point has wrong dimension");
  AlgoState st = base_state(AlgoKind::CNGDSC, x0);
  st.alpha = sc_alpha(suite, eta, alpha);
  st.eta = eta;
  st.schedule = StepSchedule::fixed(eta);
  st.grad = global_grad_row(suite, st.y);
  return st;
}

AlgoState init_cngd_nsc(const ObjectiveSuite& suite, const StepSchedule& schedule, const RowVector& x0,
                        std::optional<double> alpha0) {
  require(x0.size() == suite.dim, ErrorKind::InvalidParam, "initial point has wrong dimension");
  AlgoState st = base_state(AlgoKind::CNGDNSC, x0);
  st.schedule = schedule;
  st.eta = schedule_eta(schedule, 0);
  st.alpha = nsc_alpha0(suite, st.eta, alpha0);
  st.grad = global_grad_row(suite, st.y);
  return st;
}

AlgoState init_dgd(const ObjectiveSuite& suite, const StepSchedule& schedule, const Matrix& x0) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::DGD, x0);
  st.schedule = schedule;
  st.eta = schedule_eta(schedule, dgd_index(schedule, 0));
  st.grad = stacked_local_grads(suite, st.x);
  return st;
}

AlgoState init_dng(const ObjectiveSuite& suite, double c, const Matrix& x0) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::DNG, x0);
  st.schedule = StepSchedule::harmonic(c);
  st.eta = schedule_eta(st.schedule, 0);
  st.grad = stacked_local_grads(suite, st.y);
  return st;
}

AlgoState init_dnc(const ObjectiveSuite& suite, double eta, const Matrix& x0, TauRule tau) {
  require_stacked(suite, x0);
  require(tau.logarithmic || tau.constant >= 0, ErrorKind::InvalidParam, "tau must be non-negative");
  AlgoState st = base_state(AlgoKind::DNC, x0);
  st.schedule = StepSchedule::fixed(eta);
  st.eta = eta;
  st.tau = tau;
  st.grad = stacked_local_grads(suite, st.y);
  return st;
}

AlgoState init_extra(const ObjectiveSuite& suite, double eta, const Matrix& x0) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::EXTRA, x0);
  st.schedule = StepSchedule::fixed(eta);
  st.eta = eta;
  st.grad = stacked_local_grads(suite, st.x);
  return st;
}

AlgoState init_acc_dgd(const ObjectiveSuite& suite, const StepSchedule& schedule, const Matrix& x0) {
  require_stacked(suite, x0);
  AlgoState st = base_state(AlgoKind::AccDGD, x0);
  st.schedule = schedule;
  st.eta = schedule_eta(schedule, 0);
  st.grad = stacked_local_grads(suite, st.x);
  st.s = st.grad;
  return st;
}

// ---- steps -------------------------------------------------------------------

void step_acc_dngd_sc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  const double a = st.alpha, eta = st.eta;
  const Matrix wy = w * st.y;
  Matrix x1 = wy - eta * st.s;
  Matrix v1 = (1.0 - a) * (w * st.v) + a * wy - (eta / a) * st.s;
  Matrix y1 = (x1 + a * v1) / (1.0 + a);
  Matrix g1 = stacked_local_grads(suite, y1);
  st.s = w * st.s + g1 - st.grad;
  st.x = std::move(x1);
  st.v = std::move(v1);
  st.y = std::move(y1);
  st.grad = std::move(g1);
  ++st.t;
  ++st.comm_count;
}

void step_acc_dngd_nsc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  const double a = st.alpha, eta = st.eta;
  const double eta1 = schedule_eta(st.schedule, st.t + 1);
  const double a1 = next_alpha(a, eta, eta1);
  Matrix x1 = w * st.y - eta * st.s;
  Matrix v1 = w * st.v - (eta / a) * st.s;
  Matrix y1 = (1.0 - a1) * x1 + a1 * v1;
  Matrix g1 = stacked_local_grads(suite, y1);
  st.s = w * st.s + g1 - st.grad;
  st.x = std::move(x1);
  st.v = std::move(v1);
  st.y = std::move(y1);
  st.grad = std::move(g1);
  st.alpha = a1;
  st.eta = eta1;
  ++st.t;
  ++st.comm_count;
}

void step_cgd(AlgoState& st, const ObjectiveSuite& suite) {
  st.x = st.x - st.eta * st.grad;
  st.y = st.x;
  st.v = st.x;
  st.grad = global_grad_row(suite, st.x);
  ++st.t;
}

void step_cngd_sc(AlgoState& st, const ObjectiveSuite& suite) {
  const double a = st.alpha, eta = st.eta;
  Matrix x1 = st.y - eta * st.grad;
  Matrix v1 = (1.0 - a) * st.v + a * st.y - (eta / a) * st.grad;
  st.y = (x1 + a * v1) / (1.0 + a);
  st.x = std::move(x1);
  st.v = std::move(v1);
  st.grad = global_grad_row(suite, st.y);
  ++st.t;
}

void step_cngd_nsc(AlgoState& st, const ObjectiveSuite& suite) {
  const double a = st.alpha, eta = st.eta;
  const double eta1 = schedule_eta(st.schedule, st.t + 1);
  const double a1 = next_alpha(a, eta, eta1);
  Matrix x1 = st.y - eta * st.grad;
  Matrix v1 = st.v - (eta / a) * st.grad;
  st.y = (1.0 - a1) * x1 + a1 * v1;
  st.x = std::move(x1);
  st.v = std::move(v1);
  st.grad = global_grad_row(suite, st.y);
  st.alpha = a1;
  st.eta = eta1;
  ++st.t;
}

void step_dgd(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  st.x = w * st.x - st.eta * st.grad;
  st.y = st.x;
  st.grad = stacked_local_grads(suite, st.x);
  ++st.t;
  st.eta = schedule_eta(st.schedule, dgd_index(st.schedule, st.t));
  ++st.comm_count;
}

void step_dng(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  const double tt = static_cast<double>(st.t);
  Matrix x1 = w * st.y - st.eta * st.grad;
  st.y = x1 + (tt / (tt + 3.0)) * (x1 - st.x);
  st.x_prev = std::move(st.x);
  st.x = std::move(x1);
  st.grad = stacked_local_grads(suite, st.y);
  ++st.t;
  st.eta = schedule_eta(st.schedule, st.t);
  ++st.comm_count;
}

void step_dnc(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  const int rounds = st.tau(st.t);
  const double tt = static_cast<double>(st.t);
  Matrix x1 = st.y - st.eta * st.grad;
  for (int k = 0; k < rounds; ++k) x1 = w * x1;
  Matrix y1 = x1 + (tt / (tt + 3.0)) * (x1 - st.x);
  for (int k = 0; k < rounds; ++k) y1 = w * y1;
  st.x_prev = std::move(st.x);
  st.x = std::move(x1);
  st.y = std::move(y1);
  st.grad = stacked_local_grads(suite, st.y);
  ++st.t;
  st.comm_count += 2L * rounds;
}

void step_extra(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  Matrix x1;
  if (!st.started) {
    x1 = w * st.x - st.eta * st.grad;
    st.started = true;
  } else {
    const Matrix wx = w * st.x;
    x1 = st.x + wx - 0.5 * (w * st.x_prev + st.x_prev) - st.eta * (st.grad - st.grad_prev);
  }
  st.x_prev = std::move(st.x);
  st.grad_prev = std::move(st.grad);
  st.x = std::move(x1);
  st.y = st.x;
  st.grad = stacked_local_grads(suite, st.x);
  ++st.t;
  ++st.comm_count;
}

void step_acc_dgd(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  require_weights(st, w);
  Matrix x1 = w * st.x - st.eta * st.s;
  Matrix g1 = stacked_local_grads(suite, x1);
  st.s = w * st.s + g1 - st.grad;
  st.x = std::move(x1);
  st.y = st.x;
  st.grad = std::move(g1);
  ++st.t;
  st.eta = schedule_eta(st.schedule, st.t);
  ++st.comm_count;
}

void step(AlgoState& st, const ObjectiveSuite& suite, const Matrix& w) {
  AlgoState next = st;
  switch (st.kind) {
    case AlgoKind::AccDngdSC: step_acc_dngd_sc(next, suite, w); break;
    case AlgoKind::AccDngdNSC: step_acc_dngd_nsc(next, suite, w); break;
    case AlgoKind::CGD: step_cgd(next, suite); break;
    case AlgoKind::CNGDSC: step_cngd_sc(next, suite); break;
    case AlgoKind::CNGDNSC: step_cngd_nsc(next, suite); break;
    case AlgoKind::DGD: step_dgd(next, suite, w); break;
    case AlgoKind::DNG: step_dng(next, suite, w); break;
    case AlgoKind::DNC: step_dnc(next, suite, w); break;
    case AlgoKind::EXTRA: step_extra(next, suite, w); break;
    case AlgoKind::AccDGD: step_acc_dgd(next, suite, w); break;
  }
  const bool finite = next.x.allFinite() && next.y.allFinite() && next.v.allFinite() && next.grad.allFinite() &&
                      (next.s.size() == 0 || next.s.allFinite());
  if (!finite)
    throw Error(ErrorKind::NonFinite, std::string(to_string(st.kind)) + " diverged at t = " + std::to_string(next.t));
  st = std::move(next);
}

// ---- theoretical bounds ------------------------------------------------------

namespace {

void require_bound_params(double sigma, double L, double mu) {
  require(sigma > 0.0 && sigma < 1.0, ErrorKind::InvalidParam, "sigma must lie in (0, 1)");
  require(L > 0.0, ErrorKind::InvalidParam, "L must be positive");
  require(mu > 0.0 && mu <= L, ErrorKind::InvalidParam, "mu must lie in (0, L]");
}

}  // namespace

double bound_thm3(double sigma, double L, double mu) {
  require_bound_params(sigma, L, mu);
  const double s3 = sigma * sigma * sigma;
  const double c3 = std::pow(1.0 - sigma, 3);
  return s3 * c3 / (250.0 * 250.0 * L) * std::pow(mu / L, 3.0 / 7.0);
}

double bound_thm5(double sigma, double L, double mu) {
  require_bound_params(sigma, L, mu);
  const double a = sigma * sigma / (729.0 * L);
  const double b = std::pow(mu, 1.5) * std::pow(1.0 - sigma, 3) / (std::pow(L, 2.5) * std::pow(6912.0, 1.5));
  return std::min(a, b);
}

double bound_thm4_ii(double sigma, double L) {
  require(sigma > 0.0 && sigma < 1.0 && L > 0.0, ErrorKind::InvalidParam, "sigma in (0,1), L > 0");
  return std::min(sigma * sigma / (729.0 * L), std::pow(1.0 - sigma, 3) / (6144.0 * L));
}

double thm4_D(double beta, double t0) {
  require(beta < 2.0, ErrorKind::InvalidParam, "beta must be below 2");
  return 1.0 / ((t0 + 3.0) * (t0 + 3.0) * std::exp(16.0 + 6.0 / (2.0 - beta)));
}

Thm4Check check_thm4_conditions(double sigma, double L, double beta, double t0, double eta, double R,
                                double v0_dist) {
  require(beta > 0.6 && beta < 2.0, ErrorKind::InvalidParam, "beta must lie in (0.6, 2)");
  require(sigma > 0.0 && sigma < 1.0, ErrorKind::InvalidParam, "sigma must lie in (0, 1)");
  require(L > 0.0 && eta > 0.0 && t0 >= 1.0, ErrorKind::InvalidParam, "L, eta must be positive and t0 >= 1");
  require(R >= 0.0 && v0_dist > 0.0, ErrorKind::InvalidParam, "R must be non-negative and v0_dist positive");
  Thm4Check out;
  const double m1 = std::pow((sigma + 3.0) / (sigma + 2.0) * 0.75, sigma / (28.0 * beta));
  const double m2 = std::pow(16.0 / (15.0 + sigma), 1.0 / beta);
  const double m = std::min(m1, m2);
  out.t0_min = m > 1.0 ? 1.0 / (m - 1.0) : std::numeric_limits<double>::infinity();
  out.cond_i = t0 > out.t0_min;
  out.eta_max_ii = bound_thm4_ii(sigma, L);
  out.cond_ii = eta < out.eta_max_ii;
  out.D = thm4_D(beta, t0);
  const double denom = 9216.0 * std::pow(t0 + 1.0, 2.0 - beta) * std::pow(L, 2.0 / 3.0) *
                       (4.0 + R * R / (v0_dist * v0_dist));
  out.eta_max_iii = std::pow(out.D * (beta - 0.6) * (1.0 - sigma) * (1.0 - sigma) / denom, 1.5);
  out.cond_iii = eta < out.eta_max_iii;
  return out;
}

}  // namespace accdngd
