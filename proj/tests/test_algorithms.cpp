#include <doctest.h>

#include <accdngd/algorithms.hpp>
#include <accdngd/analysis.hpp>
#include <accdngd/error.hpp>

#include <cmath>

using namespace accdngd;

namespace {

Matrix gaussian_start(int n, int dim, double sd, Rng& rng) {
  std::normal_distribution<double> g(0.0, sd);
  Matrix x(n, dim);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < dim; ++c) x(i, c) = g(rng);
  return x;
}

const ObjectiveSuite& case1_n20() {
  static const ObjectiveSuite s = [] {
    Rng rng(11);
    return gen_case1(20, 50, 3, rng);
  }();
  return s;
}

const ObjectiveSuite& case3_n20() {
  static const ObjectiveSuite s = [] {
    Rng rng(12);
    return gen_case3(20, 4, rng);
  }();
  return s;
}

const Matrix& er_weights() {
  static const Matrix w = [] {
    Rng rng(13);
    return laplacian_weights(gen_erdos_renyi(20, 0.3, rng)).w();
  }();
  return w;
}

// every agent holds the same data
ObjectiveSuite identical_agents(int n) {
  Rng rng(14);
  auto base = gen_case1(1, 30, 3, rng);
  std::vector<Matrix> u(n, base.features[0]);
  std::vector<Vector> v(n, base.targets[0]);
  return make_least_squares(u, v);
}

AlgoState init_any(AlgoKind k, const ObjectiveSuite& s, const Matrix& x0) {
  const double L = s.L;
  switch (k) {
    case AlgoKind::AccDngdSC: return init_acc_dngd_sc(s, 0.02 / L, x0);
    case AlgoKind::AccDngdNSC: return init_acc_dngd_nsc(s, StepSchedule::fixed(0.02 / L), InitMode::Relaxed, x0);
    case AlgoKind::DGD: return init_dgd(s, StepSchedule::inv_sqrt(1.0 / L), x0);
    case AlgoKind::DNG: return init_dng(s, 0.5 / L, x0);
    case AlgoKind::DNC: return init_dnc(s, 0.5 / L, x0);
    case AlgoKind::EXTRA: return init_extra(s, 0.2 / L, x0);
    case AlgoKind::AccDGD: return init_acc_dgd(s, StepSchedule::fixed(0.05 / L), x0);
    default: break;
  }
  throw Error(ErrorKind::InvalidParam, "not distributed");
}

constexpr AlgoKind kDistributed[] = {AlgoKind::AccDngdSC, AlgoKind::AccDngdNSC, AlgoKind::DGD, AlgoKind::DNG,
                                     AlgoKind::DNC,       AlgoKind::EXTRA,      AlgoKind::AccDGD};

double rows_spread(const Matrix& m) { return (m.rowwise() - m.row(0)).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("schedule values") {
  CHECK(schedule_eta(StepSchedule::vanishing(0.5, 1.0, 0.61), 0) == 0.5);
  CHECK(schedule_eta(StepSchedule::fixed(0.003), 0) == 0.003);
  CHECK(schedule_eta(StepSchedule::fixed(0.003), 12345) == 0.003);
  CHECK(schedule_eta(StepSchedule::harmonic(0.1), 9) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(schedule_eta(StepSchedule::inv_sqrt(2.0), 4) == 1.0);
  CHECK_THROWS_AS(schedule_eta(StepSchedule::inv_sqrt(2.0), 0), Error);
  CHECK_THROWS_AS(StepSchedule::vanishing(0.5, 1.0, 2.5), Error);
  CHECK_THROWS_AS(StepSchedule::vanishing(0.5, 0.5, 1.0), Error);
  CHECK_THROWS_AS(StepSchedule::fixed(0.0), Error);
  const auto v = StepSchedule::vanishing(0.3, 2.0, 1.3);
  for (long t = 0; t < 1000; ++t) CHECK(schedule_eta(v, t + 1) <= schedule_eta(v, t));
}

TEST_CASE("next alpha") {
  CHECK(next_alpha(0.5, 1.0, 1.0) == doctest::Approx(2.0 / (1.0 + std::sqrt(17.0))).epsilon(1e-15));
  CHECK(next_alpha(0.5, 1.0, 1.0) == doctest::Approx(0.390388).epsilon(1e-6));
  Rng rng(1);
  std::uniform_real_distribution<double> u(1e-4, 0.9999);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng);
    const double e0 = u(rng);
    const double e1 = e0 * u(rng);
    const double a1 = next_alpha(a, e0, e1);
    CHECK(a1 > 0.0);
    CHECK(a1 < a);
    CHECK(std::abs(a1 * a1 - (e1 / e0) * (1.0 - a1) * a * a) <= 1e-12);
  }
  CHECK_THROWS_AS(next_alpha(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(next_alpha(0.5, 1.0, 2.0), Error);
}

TEST_CASE("acc-dngd-sc initialisation") {
  const auto& s = case1_n20();
  const Matrix x0 = Matrix::Zero(20, 3);
  auto st = init_acc_dngd_sc(s, 1.0 / (4.0 * s.mu), x0);
  CHECK(st.alpha == doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i < 20; ++i) CHECK(st.s.row(i) == local_grad(s, i, RowVector::Zero(3)));
  CHECK(tracking_residual(st) == 0.0);
  try {
    init_acc_dngd_sc(case3_n20(), 0.01, Matrix::Zero(20, 4));
    FAIL("expected NotStronglyConvex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStronglyConvex);
  }
}

TEST_CASE("acc-dngd-nsc initialisation") {
  const auto& s = case3_n20();
  auto st = init_acc_dngd_nsc(s, StepSchedule::fixed(1.0 / (2.0 * s.L)), InitMode::Exact);
  CHECK(st.alpha == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(st.alpha == doctest::Approx(0.70711).epsilon(1e-5));
  const RowVector g0 = global_grad(s, RowVector::Zero(4));
  for (int i = 0; i < 20; ++i) CHECK((st.s.row(i) - g0).norm() <= 1e-15);
  CHECK(st.x.isZero(0.0));
  try {
    init_acc_dngd_nsc(s, StepSchedule::fixed(1.0 / s.L), InitMode::Exact);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepTooLarge);
  }
  // single agent: relaxed and exact coincide
  Rng rng(3);
  auto one = gen_case3(1, 4, rng);
  auto ex = init_acc_dngd_nsc(one, StepSchedule::fixed(0.1 / one.L), InitMode::Exact);
  auto rl = init_acc_dngd_nsc(one, StepSchedule::fixed(0.1 / one.L), InitMode::Relaxed);
  CHECK(ex.s == rl.s);
}

TEST_CASE("single agent degenerates to the centralized method") {
  Rng rng(21);
  auto s1 = gen_case1(1, 50, 3, rng);
  const RowVector x0 = gaussian_start(1, 3, 5.0, rng);
  const Matrix w = Matrix::Ones(1, 1);
  {
    const double eta = 0.3 / s1.L;
    auto d = init_acc_dngd_sc(s1, eta, x0);
    auto c = init_cngd_sc(s1, eta, x0);
    for (int t = 0; t < 200; ++t) {
      step(d, s1, w);
      step(c, s1, w);
      const double scale = std::max(1.0, c.x.norm());
      REQUIRE((d.x - c.x).norm() <= 1e-12 * scale);
      REQUIRE((d.y - c.y).norm() <= 1e-12 * scale);
      REQUIRE((d.v - c.v).norm() <= 1e-12 * std::max(1.0, c.v.norm()));
    }
  }
  auto s3 = gen_case3(1, 4, rng);
  const RowVector z0 = gaussian_start(1, 4, 0.5, rng);
  for (const ObjectiveSuite* s : {&s1, &s3}) {
    const RowVector start = s == &s1 ? x0 : z0;
    const auto sched = StepSchedule::fixed(0.4 / s->L);
    auto d = init_acc_dngd_nsc(*s, sched, InitMode::Relaxed, start);
    auto c = init_cngd_nsc(*s, sched, start);
    for (int t = 0; t < 200; ++t) {
      step(d, *s, w);
      step(c, *s, w);
      REQUIRE((d.x - c.x).norm() <= 1e-12 * std::max(1.0, c.x.norm()));
      REQUIRE((d.y - c.y).norm() <= 1e-12 * std::max(1.0, c.y.norm()));
      REQUIRE(d.alpha == c.alpha);
    }
  }
}

TEST_CASE("gradient tracking identity") {
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const auto& s = trial % 2 == 0 ? case1_n20() : case3_n20();
    const Matrix w = metropolis_weights(gen_erdos_renyi(20, 0.2 + 0.1 * trial, rng)).w();
    const Matrix x0 = gaussian_start(20, s.dim, trial % 2 == 0 ? 5.0 : 0.5, rng);
    std::vector<AlgoState> states;
    if (s.strongly_convex()) states.push_back(init_acc_dngd_sc(s, 0.02 / s.L, x0));
    states.push_back(init_acc_dngd_nsc(s, StepSchedule::vanishing(0.2 / s.L, 1.0, 0.61), InitMode::Relaxed, x0));
    states.push_back(init_acc_dgd(s, StepSchedule::fixed(0.05 / s.L), x0));
    for (auto& st : states) {
      for (int t = 0; t < 500; ++t) {
        step(st, s, w);
        REQUIRE(tracking_residual(st) <= 1e-10);
      }
    }
  }
}

TEST_CASE("average sequence identities hold every step") {
  Rng rng(41);
  const Matrix x0 = gaussian_start(20, 3, 5.0, rng);
  auto sc = init_acc_dngd_sc(case1_n20(), 0.02 / case1_n20().L, x0);
  for (int t = 0; t < 300; ++t) {
    const AlgoState before = sc;
    step(sc, case1_n20(), er_weights());
    REQUIRE(average_identity_residual(before, sc) <= 1e-12);
  }
  auto nsc = init_acc_dngd_nsc(case3_n20(), StepSchedule::vanishing(0.5 / case3_n20().L, 1.0, 0.61),
                               InitMode::Relaxed, gaussian_start(20, 4, 0.5, rng));
  for (int t = 0; t < 300; ++t) {
    const AlgoState before = nsc;
    step(nsc, case3_n20(), er_weights());
    REQUIRE(average_identity_residual(before, nsc) <= 1e-12);
  }
}

TEST_CASE("consensus symmetry") {
  const auto s = identical_agents(10);
  Rng rng(51);
  const Matrix w = metropolis_weights(gen_erdos_renyi(10, 0.4, rng)).w();
  const RowVector row = gaussian_start(1, 3, 5.0, rng);
  const Matrix x0 = row.replicate(10, 1);
  for (AlgoKind k : kDistributed) {
    auto st = init_any(k, s, x0);
    for (int t = 0; t < 100; ++t) {
      step(st, s, w);
      const double scale = std::max(1.0, st.x.cwiseAbs().maxCoeff());
      REQUIRE(rows_spread(st.x) <= 1e-12 * scale);
      REQUIRE(rows_spread(st.y) <= 1e-12 * std::max(1.0, st.y.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("cngd-sc solves a scalar quadratic in one step") {
  std::vector<Matrix> u{Matrix::Ones(1, 1)};
  std::vector<Vector> v{Vector::Zero(1)};
  auto s = make_least_squares(u, v);  // f(x) = x^2
  CHECK(s.L == doctest::Approx(2.0));
  for (double x : {-3.0, 0.7, 41.0}) {
    RowVector x0(1);
    x0 << x;
    auto st = init_cngd_sc(s, 1.0 / s.L, x0);
    step(st, s, Matrix::Ones(1, 1));
    CHECK(std::abs(st.x(0, 0)) <= 1e-15);
  }
}

TEST_CASE("cgd is monotone on least squares") {
  const auto& s = case1_n20();
  Rng rng(61);
  auto st = init_cgd(s, 1.0 / s.L, gaussian_start(1, 3, 5.0, rng));
  double prev = excess(s, st.x.row(0), s.fstar);
  for (int t = 0; t < 2000; ++t) {
    step(st, s, Matrix::Ones(1, 1));
    const double e = excess(s, st.x.row(0), s.fstar);
    REQUIRE(e <= prev * (1.0 + 1e-12) + 1e-300);
    prev = e;
  }
}

TEST_CASE("centralized nsc alpha sequence matches the distributed one") {
  const auto& s = case3_n20();
  const auto sched = StepSchedule::fixed(0.3 / s.L);
  auto d = init_acc_dngd_nsc(s, sched, InitMode::Relaxed);
  auto c = init_cngd_nsc(s, sched, RowVector::Zero(4));
  for (int t = 0; t < 100; ++t) {
    step(d, s, er_weights());
    step(c, s, er_weights());
    CHECK(d.alpha == c.alpha);
  }
}

TEST_CASE("dgd special cases") {
  Rng rng(71);
  auto s = gen_case1(1, 50, 3, rng);
  const RowVector x0 = gaussian_start(1, 3, 5.0, rng);
  const auto sched = StepSchedule::inv_sqrt(1.0 / s.L);
  auto st = init_dgd(s, sched, x0);
  RowVector x = x0;
  for (int t = 0; t < 50; ++t) {
    x = x - schedule_eta(sched, t + 1) * global_grad(s, x);
    step(st, s, Matrix::Identity(1, 1));
    CHECK((st.x.row(0) - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("fixed-step dgd stalls where extra keeps converging") {
  const auto& s = case1_n20();
  Rng rng(72);
  const Matrix x0 = gaussian_start(20, 3, 5.0, rng);
  const double eta = 0.5 / s.L;
  auto d = init_dgd(s, StepSchedule::fixed(eta), x0);
  auto e = init_extra(s, eta, x0);
  for (int t = 0; t < 20000; ++t) {
    step(d, s, er_weights());
    step(e, s, er_weights());
  }
  CHECK(record(d, s, s.fstar).avg_obj_err > 1e-4);
  CHECK(record(e, s, s.fstar).avg_obj_err < 1e-4);
}

TEST_CASE("d-ng momentum starts at zero") {
  const auto& s = case1_n20();
  Rng rng(81);
  auto st = init_dng(s, 0.5 / s.L, gaussian_start(20, 3, 5.0, rng));
  step(st, s, er_weights());
  CHECK(st.y == st.x);
  CHECK(st.eta == doctest::Approx(0.25 / s.L));
}

TEST_CASE("d-nc special cases and communication count") {
  Rng rng(91);
  auto s = gen_case1(1, 50, 3, rng);
  const RowVector x0 = gaussian_start(1, 3, 5.0, rng);
  const double eta = 0.5 / s.L;
  auto st = init_dnc(s, eta, x0, TauRule{false, 0});
  RowVector x = x0, y = x0;
  for (int t = 0; t < 30; ++t) {
    const RowVector x1 = y - eta * global_grad(s, y);
    y = x1 + (static_cast<double>(t) / (t + 3.0)) * (x1 - x);
    x = x1;
    step(st, s, Matrix::Ones(1, 1));
    CHECK((st.x.row(0) - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
  CHECK(st.comm_count == 0);

  const auto& s20 = case1_n20();
  const Matrix avg = Matrix::Constant(20, 20, 1.0 / 20.0);
  auto c = init_dnc(s20, 0.5 / s20.L, gaussian_start(20, 3, 5.0, rng), TauRule{false, 2});
  step(c, s20, avg);
  CHECK(consensus_distance(c.x) <= 1e-12 * c.x.norm());
  CHECK(consensus_distance(c.y) <= 1e-12 * c.y.norm());

  auto l = init_dnc(s20, 0.5 / s20.L, gaussian_start(20, 3, 5.0, rng));
  long expect = 0;
  for (long t = 0; t < 200; ++t) {
    expect += 2 * static_cast<long>(std::ceil(std::log2(t + 2.0)));
    step(l, s20, er_weights());
  }
  CHECK(l.comm_count == expect);
}

TEST_CASE("extra with identity weights converges to the minimizer") {
  Rng rng(101);
  auto s = gen_case1(1, 50, 3, rng);
  auto st = init_extra(s, 0.5 / s.L, gaussian_start(1, 3, 5.0, rng));
  for (int t = 0; t < 20000; ++t) step(st, s, Matrix::Identity(1, 1));
  CHECK((st.x.row(0) - s.xstar).norm() <= 1e-8);
}

TEST_CASE("acc-dgd on one agent is gradient descent") {
  Rng rng(111);
  auto s = gen_case1(1, 50, 3, rng);
  const RowVector x0 = gaussian_start(1, 3, 5.0, rng);
  const double eta = 0.5 / s.L;
  auto st = init_acc_dgd(s, StepSchedule::fixed(eta), x0);
  RowVector x = x0;
  for (int t = 0; t < 100; ++t) {
    x = x - eta * global_grad(s, x);
    step(st, s, Matrix::Ones(1, 1));
    CHECK((st.x.row(0) - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("acc-dgd tracking over 1000 steps") {
  Rng rng(112);
  const auto& s = case1_n20();
  auto st = init_acc_dgd(s, StepSchedule::fixed(0.05 / s.L), gaussian_start(20, 3, 5.0, rng));
  for (int t = 0; t < 1000; ++t) step(st, s, er_weights());
  CHECK(tracking_residual(st) <= 1e-10);
}

TEST_CASE("divergence guard keeps the last finite state") {
  const auto& s = case1_n20();
  Rng rng(121);
  auto st = init_acc_dgd(s, StepSchedule::fixed(50.0 / s.L), gaussian_start(20, 3, 5.0, rng));
  bool diverged = false;
  for (int t = 0; t < 5000 && !diverged; ++t) {
    try {
      step(st, s, er_weights());
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonFinite);
      diverged = true;
    }
  }
  CHECK(diverged);
  CHECK(st.x.allFinite());
  CHECK(st.s.allFinite());
}

TEST_CASE("same inputs give bit-identical iterates") {
  Rng r1(131), r2(131);
  const auto& s = case1_n20();
  auto a = init_acc_dngd_sc(s, 0.02 / s.L, gaussian_start(20, 3, 5.0, r1));
  auto b = init_acc_dngd_sc(s, 0.02 / s.L, gaussian_start(20, 3, 5.0, r2));
  for (int t = 0; t < 300; ++t) {
    step(a, s, er_weights());
    step(b, s, er_weights());
  }
  CHECK(a.x == b.x);
  CHECK(a.s == b.s);
}

TEST_CASE("time-varying weights are reproducible per iteration") {
  TimeVaryingWeights a(gen_grid2d(5, 5), 0.75, 9), b(gen_grid2d(5, 5), 0.75, 9);
  const Matrix w5 = a.at(5);
  CHECK(b.at(7) != w5);
  CHECK(b.at(5) == w5);
  CHECK(a.at(5) == w5);
  CHECK(((w5.rowwise().sum().array() - 1.0).abs() <= 1e-12).all());
}

TEST_CASE("step-size bounds") {
  CHECK(bound_thm3(0.5, 1.0, 1.0) == doctest::Approx(0.125 * 0.125 / 62500.0).epsilon(1e-14));
  CHECK(bound_thm3(0.5, 1.0, 1.0) == doctest::Approx(2.5e-7).epsilon(1e-2));
  CHECK(bound_thm3(0.5, 1.0, 1e-12) < 1e-11);
  CHECK(bound_thm5(0.5, 1.0, 1.0) ==
        doctest::Approx(std::min(0.25 / 729.0, 0.125 / std::pow(6912.0, 1.5))).epsilon(1e-14));
  double prev3 = 0.0, prev5 = 0.0;
  for (double mu = 1e-4; mu <= 1.0; mu *= 1.5) {
    CHECK(bound_thm3(0.4, 1.0, mu) > prev3);
    CHECK(bound_thm5(0.4, 1.0, mu) >= prev5);
    prev3 = bound_thm3(0.4, 1.0, mu);
    prev5 = bound_thm5(0.4, 1.0, mu);
  }
  for (double L : {1.0, 7.0}) {
    const double b = bound_thm5(0.9, L, L);
    CHECK(b == doctest::Approx(std::min(0.81 / (729.0 * L), std::pow(0.1, 3) / (L * std::pow(6912.0, 1.5)))));
  }
  CHECK_THROWS_AS(bound_thm3(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bound_thm5(0.5, 1.0, 2.0), Error);
}

TEST_CASE("vanishing-step conditions") {
  for (double sigma : {0.2, 0.5, 0.9}) {
    const double L = 3.0;
    const double eta = std::min(sigma * sigma / (729.0 * L), std::pow(1 - sigma, 3) / (6144.0 * L)) * 0.99;
    CHECK(check_thm4_conditions(sigma, L, 0.61, 1.0, eta, 1.0, 1.0).cond_ii);
  }
  const double sigma = 0.9, beta = 0.61;
  const double m1 = std::pow((sigma + 3) / (sigma + 2) * 0.75, sigma / (28 * beta));
  const double m2 = std::pow(16.0 / (15.0 + sigma), 1.0 / beta);
  const double t0min = 1.0 / (std::min(m1, m2) - 1.0);
  const auto c = check_thm4_conditions(sigma, 1.0, beta, 1.0, 1e-30, 1.0, 1.0);
  CHECK(c.t0_min == doctest::Approx(t0min).epsilon(1e-12));
  CHECK(c.cond_i == (1.0 > t0min));
  CHECK(c.D == doctest::Approx(1.0 / (16.0 * std::exp(16.0 + 6.0 / 1.39))).epsilon(1e-12));
  const auto big = check_thm4_conditions(sigma, 1.0, beta, 1e6, 1e-300, 0.0, 1.0);
  CHECK(big.cond_i);
  CHECK(big.cond_iii);
  CHECK_THROWS_AS(check_thm4_conditions(0.5, 1.0, 0.6, 1.0, 1e-3, 1.0, 1.0), Error);
}

TEST_CASE("algorithm names round trip") {
  for (AlgoKind k : {AlgoKind::AccDngdSC, AlgoKind::AccDngdNSC, AlgoKind::CGD, AlgoKind::CNGDSC, AlgoKind::CNGDNSC,
                     AlgoKind::DGD, AlgoKind::DNG, AlgoKind::DNC, AlgoKind::EXTRA, AlgoKind::AccDGD})
    CHECK(algo_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(algo_kind_from_string("adam"), Error);
}
