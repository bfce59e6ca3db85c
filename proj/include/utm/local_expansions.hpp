#pragma once

#include <string>
#include <vector>

#include "utm/oracles.hpp"
#include "utm/piecewise_data.hpp"
#include "utm/special_functions.hpp"

namespace utm {

// Exact element of Z[i][alpha] / (alpha^2 + alpha + 1), written a + b*alpha
// with Gaussian-integer a and b.  This one ring covers both coefficient
// systems that show up in the corner algebra: Z[i] for quadratic dispersions
// (b = 0) and Z[alpha] for the cubic ones (imaginary parts 0).  Keeping the
// weights here instead of in floating point lets the compatibility
// cancellations be checked as identities, not as small numbers.
struct Sym {
  long long ar = 0, ai = 0;  // a = ar + i*ai
  long long br = 0, bi = 0;  // b = br + i*bi

  bool is_zero() const { return !ar && !ai && !br && !bi; }
  cx numeric() const;

  static Sym integer(long long v) { return {v, 0, 0, 0}; }
  static Sym alpha_pow(long long e);  // alpha^e, e may be negative
  static Sym i_pow(long long e);      // i^e, e may be negative
};
Sym operator+(const Sym& x, const Sym& y);
Sym operator-(const Sym& x, const Sym& y);
Sym operator*(const Sym& x, const Sym& y);
bool operator==(const Sym& x, const Sym& y);

// One kernel term of a local expansion: coeff * I_{omega,m,sel}(x - sx, t - st).
// Terms with st > 0 vanish for t < st (causality of the kernels).
struct ExpansionTerm {
  cx coeff = 0.0;
  SpecialFnKey key;
  double sx = 0.0;
  double st = 0.0;
};

// Local model of the solution near a center (s, tau):
//   q(x,t) ~ sum terms + constant + linear*(x - s),
// with error O(|x - s|^px + |t - tau|^pt).
struct Expansion {
  double s = 0.0, tau = 0.0;
  std::vector<ExpansionTerm> terms;
  cx constant = 0.0;
  cx linear = 0.0;
  double px = 0.5, pt = 0.25;

  cx eval(double x, double t, const QuadratureSettings& qs = {}) const;
};

std::string describe(const Expansion& e);

// The four concrete corner models plotted in the figures.  Airy2First and
// Airy2Second share one formula; they differ only in which compatibility
// condition the data breaks.
enum class QlocExample { LS, Airy1, Airy2First, Airy2Second };

// Fields default to NaN; qloc rejects a request whose required values were
// never filled in.
struct CornerData {
  cx qo0 = cx(std::numeric_limits<double>::quiet_NaN(), 0.0);   // q_o(0)
  cx dqo0 = cx(std::numeric_limits<double>::quiet_NaN(), 0.0);  // q_o'(0)
  cx g00 = cx(std::numeric_limits<double>::quiet_NaN(), 0.0);   // g_0(0)
  cx g10 = cx(std::numeric_limits<double>::quiet_NaN(), 0.0);   // g_1(0)
};

Expansion qloc(QlocExample example, const CornerData& data);

// Expansion of the zero-boundary-data solution about (s, 0): jump terms at
// the interior discontinuities of q_o, a corner term when q_o(0) != 0, and
// the frozen constant lim_{t->0} q(s,t).  depth = 2 is available for the
// k^3 family only and adds the q_o'(0) terms with error class (3/2, 1/2).
Expansion expansion_zero_bc(const IBVPSpec& spec, double s, int depth = 1);

// Expansion of the zero-initial-data solution about (s, tau): corner terms
// weighted by g_j(0) plus the frozen boundary-history integrals (constant
// and, for the k^3 family, a linear-in-(x-s) part).  At s = 0 the evaluated
// expansion reproduces g_0(tau) exactly, up to quadrature.
Expansion expansion_zero_ic(const IBVPSpec& spec, double s, double tau);

// Symbolic corner coefficient of I_{omega,i,comp} in the combined
// (zero-BC + zero-IC) expansion:  qo_w * q_o^{(i)}(0) + g_w * g^{(g_order)}(0)
// where g is boundary datum g_index (g_w = 0 when no boundary term lands on
// this kernel).  Under the compatibility substitution
// g^{(g_order)}(0) = mu * q_o^{(i)}(0) the weight becomes qo_w + g_w * mu;
// "cancels" records that this is the exact ring zero.
struct CornerTermSym {
  int i = 0;
  int comp = 0;
  Sym qo_w, g_w, mu;
  int g_index = -1, g_order = 0;
  bool cancels = false;         // symbolic zero under compatibility
  bool data_compatible = false; // the spec's data actually satisfies it
  cx surviving;                 // numeric coefficient with the spec's data
};

struct CancelResult {
  std::vector<CornerTermSym> table;  // all kernels with i <= order
  Expansion surviving;               // terms whose coefficient did not vanish
  int decay_exponent = 0;            // largest order with full cancellation
  bool all_cancelled = false;
};

CancelResult cancel_compatible(const IBVPSpec& spec, int order);

// Predicted residual class rho^{m + 1/2}, rho = |x - s| + |t - tau|^{1/n}.
double residual_exponent(int m);

// Log-log fit of measured residuals against rho; requires at least 4 samples.
RateFit residual_order_fit(const std::vector<double>& rhos,
                           const std::vector<double>& errs);

}  // namespace utm
