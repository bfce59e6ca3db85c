#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "utm/common.hpp"
#include "utm/dispersion.hpp"

namespace utm {

inline constexpr double INF = std::numeric_limits<double>::infinity();

// One additive term of an analytic piece, in local coordinate u = x - a:
//   (sum_m poly[m] u^m) * e^{-lambda u},  lambda = 0 for plain polynomials.
struct PieceTerm {
  std::vector<cx> poly;
  cx lambda = 0.0;
};

// One smooth piece of a piecewise datum on (a, b).  Analytic pieces are sums
// of polynomial-times-exponential terms (closed under differentiation and
// constant shifts); Numeric pieces integrate by quadrature.
struct Piece {
  enum Kind { Analytic, Numeric } kind = Analytic;
  std::vector<PieceTerm> terms;
  std::function<cx(double)> fn;        // Numeric kind only, argument is x
  std::function<cx(double)> fn_deriv;  // optional, enables depth-1 IBP

  static Piece polynomial(std::vector<cx> coeffs) {
    return {Analytic, {PieceTerm{std::move(coeffs), 0.0}}, {}, {}};
  }
  static Piece polyexp(std::vector<cx> coeffs, cx lambda) {
    return {Analytic, {PieceTerm{std::move(coeffs), lambda}}, {}, {}};
  }
  static Piece zero() { return {Analytic, {}, {}, {}}; }

  cx local_value(double u) const;           // Analytic only
  Piece differentiated() const;             // errors on Numeric without fn_deriv
  Piece shifted(double delta) const;        // re-center local coordinate by +delta
  void add_constant(cx c);
};

struct PiecewiseData {
  std::vector<double> breakpoints;  // interior breakpoints, strictly increasing
  std::vector<Piece> pieces;        // size = breakpoints.size() + 1
  double horizon = INF;             // INF (initial data) or T (boundary data)

  // interval of piece i: [left_edge(i), right_edge(i))
  double left_edge(std::size_t i) const { return i == 0 ? 0.0 : breakpoints[i - 1]; }
  double right_edge(std::size_t i) const {
    return i == breakpoints.size() ? horizon : breakpoints[i];
  }
  std::size_t piece_index(double x) const;
  cx value(double x) const;          // from the piece owning x (right-continuous)
  cx derivative(double x, int order) const;
  bool is_zero() const;

  static PiecewiseData zero(double horizon = INF);
  static PiecewiseData constant(cx c, double horizon);
  static PiecewiseData indicator(double a, double b);  // chi_[a,b) on [0, inf)
};

struct IBVPSpec {
  Dispersion dispersion;
  PiecewiseData initial;               // on [0, inf)
  std::vector<PiecewiseData> boundary; // N(n) entries on [0, T]
  double T = 1.0;

  void validate() const;  // throws domain_error on invariant violation
};

// q_hat_o(k) = int_0^inf e^{-ikx} q_o(x) dx.  Requires Im k <= 0 unless the
// data is compactly supported.
cx half_line_ft(const PiecewiseData& data, cx k);

// g_tilde(k, t) = int_0^t e^{-iks} g(s) ds, 0 <= t <= horizon.
cx time_transform(const PiecewiseData& g, cx k, double t);

// Exact identity
//   q_hat_o(k) = sum_{i<d} (q_o^{(i)}(0) + sum_m e^{-ik x_m} [q_o^{(i)}(x_m)]) / (ik)^{i+1}
//              + F_{d-1}(k) / (ik)^d
// with F_{d-1} the half-line transform of the piecewise d-th derivative.
struct IbpDecomposition {
  int depth = 1;
  std::vector<cx> corner;                       // q_o^{(i)}(0), i < d
  std::vector<double> jump_locations;           // interior breakpoints x_m
  std::vector<std::vector<cx>> jumps;           // jumps[i][m] = [q_o^{(i)}(x_m)]
  PiecewiseData remainder;                      // piecewise d-th derivative
  cx remainder_transform(cx k) const { return half_line_ft(remainder, k); }
  cx reconstruct(cx k) const;                   // re-sums the identity
};
IbpDecomposition ibp_decompose(const PiecewiseData& data, int depth);

// Exact time integration by parts at generic frequency mu:
//   int_0^t e^{i mu s} g(s) ds
//     = sum_{i<=p} (-1)^i (B_i - sum_m e^{i mu t_m} [g^{(i)}(t_m)]) / (i mu)^{i+1}
//       + (-1)^{p+1} G(mu) / (i mu)^{p+1},
// where B_i = g^{(i)}(t) e^{i mu t} - g^{(i)}(0) and
// G(mu) = int_0^t e^{i mu s} g^{(p+1)}(s) ds.  Callers pass mu = omega(k) to
// recover the finite-time boundary transforms.
struct GRemainder {
  int order = 0;                        // p
  std::vector<cx> at0;                  // g^{(i)}(0), i <= p
  std::vector<cx> at_t;                 // g^{(i)}(t), i <= p
  std::vector<double> jump_times;       // interior breakpoints below t
  std::vector<std::vector<cx>> jumps;   // jumps[i][m] = [g^{(i)}(t_m)]
  PiecewiseData derivative;             // piecewise (p+1)-th derivative of g
  double t = 0;
  cx G(cx mu) const { return time_transform(derivative, -mu, t); }
  cx reconstruct(cx mu) const;          // the full right-hand side above
};
GRemainder g_remainders(const PiecewiseData& g, int order, double t);

// Telescoping split at the interior jumps: first element equals g up to t1
// then held constant; each later element is zero before its jump and carries
// the remaining increment.  Pointwise sum reproduces g.
std::vector<PiecewiseData> split_boundary_at_jumps(const PiecewiseData& g);

// Higher-order compatibility report (see dispersion module contract).
struct CompatibilityEntry {
  int j, ell, order;
  cx lhs, rhs;
  bool satisfied;
};
std::vector<CompatibilityEntry> check_compatibility(const IBVPSpec& spec, int max_order);

}  // namespace utm
