#include <doctest.h>

#include <accdngd/error.hpp>
#include <accdngd/graphs.hpp>

#include <sstream>

using namespace accdngd;

namespace {

// column/row sums, symmetry, sparsity pattern against the graph
void check_weight_invariants(const Graph& g, const WeightMatrix& w) {
  const Matrix& m = w.w();
  const int n = g.n();
  CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK((m.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < n; ++i) {
    CHECK(m(i, i) > 0.0);
    for (int j = 0; j < n; ++j)
      if (i != j) CHECK((m(i, j) > 0.0) == g.has_edge(i, j));
  }
}

Graph star4() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}}); }

}  // namespace

TEST_CASE("graph rejects self loops and duplicates") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), Error);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), Error);
  Graph g(3, {{2, 0}, {1, 0}});
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(1, 2));
}

TEST_CASE("connectivity") {
  CHECK(Graph(1, {}).connected());
  CHECK_FALSE(Graph(3, {{0, 1}}).connected());
  CHECK(Graph(3, {{0, 1}, {1, 2}}).connected());
}

TEST_CASE("erdos renyi") {
  Rng rng(7);
  auto g = gen_erdos_renyi(100, 0.3, rng);
  CHECK(g.n() == 100);
  CHECK(g.connected());
  // edge density near p
  const double density = static_cast<double>(g.num_edges()) / (100.0 * 99.0 / 2.0);
  CHECK(density == doctest::Approx(0.3).epsilon(0.1));

  Rng r2(1);
  auto k2 = gen_erdos_renyi(2, 1.0, r2);
  CHECK(k2.edges() == std::vector<Edge>{{0, 1}});

  Rng r3(1);
  try {
    gen_erdos_renyi(5, 0.0, r3, 3);
    FAIL("expected NotConnected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotConnected);
  }

  Rng a(42), b(42);
  CHECK(gen_erdos_renyi(30, 0.3, a) == gen_erdos_renyi(30, 0.3, b));
}

TEST_CASE("k cycle") {
  auto g = gen_k_cycle(100, 20);
  for (int i = 0; i < 100; ++i) CHECK(g.degree(i) == 40);
  CHECK(gen_k_cycle(4, 1).num_edges() == 4);
  CHECK(gen_k_cycle(5, 2).num_edges() == 10);
  CHECK(gen_k_cycle(6, 9).num_edges() == 15);
  CHECK_THROWS_AS(gen_k_cycle(2, 1), Error);
  CHECK_THROWS_AS(gen_k_cycle(10, 0), Error);
  CHECK(gen_k_cycle(50, 3) == gen_k_cycle(50, 3));
}

TEST_CASE("grid") {
  CHECK(gen_grid2d(5, 5).num_edges() == 40);
  CHECK(gen_grid2d(5, 5).n() == 25);
  CHECK(gen_grid2d(2, 2).num_edges() == 4);
  auto path = gen_grid2d(1, 3);
  CHECK(path.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK_THROWS_AS(gen_grid2d(1, 1), Error);
  for (int r = 1; r <= 6; ++r)
    for (int c = 1; c <= 6; ++c)
      if (r * c >= 2) CHECK(gen_grid2d(r, c).num_edges() == static_cast<std::size_t>(r * (c - 1) + c * (r - 1)));
}

TEST_CASE("time varying sampling") {
  auto ground = gen_grid2d(5, 5);
  Rng rng(3);
  auto g = sample_time_varying(ground, 0.75, rng);
  CHECK(g.num_edges() == 10);
  for (const auto& [a, b] : g.edges()) CHECK(ground.has_edge(a, b));
  CHECK(sample_time_varying(ground, 0.0, rng) == ground);
  CHECK(sample_time_varying(ground, 1.0, rng).num_edges() == 0);
  CHECK_THROWS_AS(sample_time_varying(Graph(3, {}), 0.5, rng), Error);
}

TEST_CASE("laplacian weights by hand") {
  auto k2 = laplacian_weights(Graph(2, {{0, 1}}));
  CHECK(k2.w().isApprox(Matrix::Constant(2, 2, 0.5)));
  auto c4 = laplacian_weights(gen_k_cycle(4, 1));
  for (int i = 0; i < 4; ++i) {
    CHECK(c4(i, i) == doctest::Approx(1.0 / 3.0));
    CHECK(c4(i, (i + 1) % 4) == doctest::Approx(1.0 / 3.0));
    CHECK(c4(i, (i + 2) % 4) == 0.0);
  }
  CHECK_THROWS_AS(laplacian_weights(Graph(3, {{0, 1}})), Error);
}

TEST_CASE("metropolis weights by hand") {
  auto k2 = metropolis_weights(Graph(2, {{0, 1}}));
  CHECK(k2.w().isApprox(Matrix::Constant(2, 2, 0.5)));
  auto s = metropolis_weights(star4());
  CHECK(s(0, 0) == doctest::Approx(0.25));
  for (int leaf = 1; leaf < 4; ++leaf) {
    CHECK(s(0, leaf) == doctest::Approx(0.25));
    CHECK(s(leaf, leaf) == doctest::Approx(0.75));
  }
  auto iso = metropolis_weights(Graph(3, {{0, 1}}));
  CHECK(iso(2, 2) == 1.0);
  CHECK(iso.sigma() == doctest::Approx(1.0));
}

TEST_CASE("second singular value") {
  CHECK(second_singular(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(second_singular(Matrix::Constant(4, 4, 0.25)) == doctest::Approx(0.0));
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 0) = 0.9;
  try {
    second_singular(bad);
    FAIL("expected NotDoublyStochastic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDoublyStochastic);
  }
}

TEST_CASE("sigma on deterministic topologies") {
  CHECK(std::abs(laplacian_weights(gen_grid2d(5, 5)).sigma() - 0.92361) <= 1e-3);
  CHECK(std::abs(laplacian_weights(gen_k_cycle(100, 20)).sigma() - 0.74566) <= 1e-3);
  for (const auto& g : {gen_grid2d(5, 5), gen_k_cycle(40, 3), gen_grid2d(1, 7)}) {
    const double s = laplacian_weights(g).sigma();
    CHECK(s >= 0.0);
    CHECK(s < 1.0);
  }
}

TEST_CASE("weight invariants across families") {
  Rng rng(11);
  std::vector<Graph> graphs{gen_grid2d(5, 5), gen_k_cycle(20, 4), gen_erdos_renyi(20, 0.3, rng), star4()};
  for (const auto& g : graphs) {
    check_weight_invariants(g, laplacian_weights(g));
    check_weight_invariants(g, metropolis_weights(g));
  }
  auto ground = gen_grid2d(5, 5);
  for (int k = 0; k < 20; ++k) {
    auto g = sample_time_varying(ground, 0.75, rng);
    check_weight_invariants(g, metropolis_weights(g));
  }
}

TEST_CASE("averaging property") {
  Rng rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& g : {gen_grid2d(5, 5), gen_k_cycle(20, 4), gen_erdos_renyi(20, 0.3, rng)}) {
    for (const auto& w : {laplacian_weights(g), metropolis_weights(g)}) {
      for (int k = 0; k < 1000; ++k) {
        Vector om(g.n());
        for (int i = 0; i < g.n(); ++i) om(i) = gauss(rng);
        const Vector dev = om.array() - om.mean();
        const double lhs = (w.w() * om - Vector::Constant(g.n(), om.mean())).norm();
        CHECK(lhs <= w.sigma() * dev.norm() + 1e-10);
      }
    }
  }
}

TEST_CASE("edge list round trip") {
  Rng rng(9);
  auto g = gen_erdos_renyi(15, 0.4, rng);
  std::stringstream ss;
  write_edge_list(ss, g);
  CHECK(read_edge_list(ss) == g);
  std::istringstream bad("x 3\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), Error);
}

TEST_CASE("matrix csv keeps full precision") {
  Matrix m(1, 2);
  m << 1.0 / 3.0, -2.5e-17;
  std::ostringstream os;
  write_matrix_csv(os, m);
  std::istringstream is(os.str());
  double a = 0, b = 0;
  char comma = 0;
  is >> a >> comma >> b;
  CHECK(a == m(0, 0));
  CHECK(b == m(0, 1));
}

TEST_CASE("graph spec strings") {
  Rng rng(1);
  CHECK(graph_from_spec("grid2d:5x5", rng) == gen_grid2d(5, 5));
  CHECK(graph_from_spec("kcycle:100:20", rng) == gen_k_cycle(100, 20));
  CHECK(graph_from_spec("er:20:0.3", rng).n() == 20);
  CHECK_THROWS_AS(graph_from_spec("torus:3", rng), Error);
  CHECK_THROWS_AS(graph_from_spec("grid2d", rng), Error);
}
