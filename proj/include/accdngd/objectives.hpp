#pragma once

#include <accdngd/types.hpp>

#include <iosfwd>
#include <string_view>
#include <vector>

namespace accdngd {

enum class CaseKind { LeastSquares = 1, Logistic = 2, PiecewisePower = 3 };

std::string_view to_string(CaseKind kind);

/// n local cost functions f_i : R^N -> R together with the constants the
/// algorithms and the analysis need. Immutable after generation.
///
/// Case I   f_i(x) = (1/M_i) sum_m (<u_im, x> - v_im)^2
/// Case II  f_i(x) = (1/M_i) sum_m [ln(1 + e^{<u_im, x>}) - v_im <u_im, x>]
/// Case III f_i(x) = (1/m) <a_i, x>^m + <b_i, x>               if |<a_i, x>| <= 1
///                   |<a_i, x>| - (m - 1)/m + <b_i, x>         otherwise
struct ObjectiveSuite {
  CaseKind kind = CaseKind::LeastSquares;
  int n = 0;
  int dim = 0;

  // Case I / II: one M_i x N feature block and M_i targets per agent.
  std::vector<Matrix> features;
  std::vector<Vector> targets;

  // Case III: row i of `a` / `b` holds a_i / b_i.
  Matrix a;
  Matrix b;
  int power = 12;

  double L = 0.0;
  double mu = 0.0;
  double fstar = 0.0;
  RowVector xstar;

  // Case I: (1/n) sum_i (1/M_i) U_i^T U_i, so that f(x) - f* is an exact
  // quadratic form in x - x* and never loses digits to cancellation.
  Matrix gram;
  // Case III: (1/n) sum_i b_i, zero by construction.
  RowVector b_mean;

  bool strongly_convex() const { return mu > 0.0; }
};

ObjectiveSuite gen_case1(int n, int samples_per_agent, int dim, Rng& rng);
ObjectiveSuite gen_case2(int n, int samples_per_agent, int dim, Rng& rng);
ObjectiveSuite gen_case3(int n, int dim, Rng& rng);

/// Builds a suite directly from data; constants and the reference optimum are
/// computed exactly as the generators do. Used by tests and for replay.
ObjectiveSuite make_least_squares(std::vector<Matrix> features, std::vector<Vector> targets);
ObjectiveSuite make_logistic(std::vector<Matrix> features, std::vector<Vector> labels);
ObjectiveSuite make_piecewise_power(Matrix a, Matrix b, int power = 12);

double local_value(const ObjectiveSuite& suite, int i, const RowVector& x);
RowVector local_grad(const ObjectiveSuite& suite, int i, const RowVector& x);
double global_value(const ObjectiveSuite& suite, const RowVector& x);
RowVector global_grad(const ObjectiveSuite& suite, const RowVector& x);

/// Row i of the result is grad f_i(points.row(i)).
Matrix stacked_local_grads(const ObjectiveSuite& suite, const Matrix& points);

/// f(x) - fstar, evaluated in a cancellation-free form where the case allows.
double excess(const ObjectiveSuite& suite, const RowVector& x, double fstar);

struct Reference {
  RowVector xstar;
  double fstar = 0.0;
};

/// Case I: exact solve of the aggregate normal equations. Case II/III:
/// centralized Nesterov descent from the origin until ||grad f|| <= tol.
Reference solve_reference(const ObjectiveSuite& suite, double tol = 1e-12);

/// Versioned flat text layout carrying every array and constant, so an
/// experiment can be replayed from the file alone.
void write_suite(std::ostream& os, const ObjectiveSuite& suite);
ObjectiveSuite read_suite(std::istream& is);

}  // namespace accdngd
