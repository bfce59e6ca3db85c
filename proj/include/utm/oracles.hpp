#pragma once

#include <functional>

#include "utm/piecewise_data.hpp"
#include "utm/special_functions.hpp"

namespace utm {

// Independent re-evaluation of the kernel functions straight from their
// defining contour integrals: own adaptive Simpson rule, fixed arc radius,
// simple outward ray rotation with a peak scan.  Shares no integration or
// descent code with the library evaluator; used to cross-check it.
cx brute_force_special(const SpecialFnKey& key, cx xi, double t,
                       double tol = 1e-12);

// Half-line Schrodinger (omega = k^2) with zero Dirichlet datum, solved by
// odd reflection against the free propagator.  Exact up to quadrature.
cx images_ls(const PiecewiseData& q0, double x, double t, double tol = 1e-10);

// L2 mass int_0^inf |q(x,t)|^2 dx of the images solution (t = 0 uses the
// datum directly).  Conserved in time; used as an internal consistency check.
double images_ls_mass(const PiecewiseData& q0, double t, double tol = 1e-8);

// Smooth compactly supported test function
//   phi(x,t) = (1-u^2)^P (1-v^2)^P,  u = (x-x0)/xw, v = (t-t0)/tw
// on the box [x0-xw, x0+xw] x [t0-tw, t0+tw], zero outside.
struct Bump {
  double x0, xw, t0, tw;
  int P = 4;
  double value(double x, double t) const;
  double dx(double x, double t, int order) const;  // d^order/dx^order
  double dt(double x, double t) const;
};

// Weak-form residual int int q (-i phi_t + sum_n w_n i^n d^n phi/dx^n) dx dt
// over the bump's support box on an nodes x nodes Clenshaw-Curtis grid.
// Vanishes (to quadrature accuracy) when q solves the PDE on the support.
cx weak_residual(const Dispersion& d, const std::function<cx(double, double)>& q,
                 const Bump& bump, int nodes = 64);

struct RateFit {
  double slope = 0;        // least-squares slope of log err vs log t
  double intercept = 0;
  double half_width = 0;   // max |fit residual| in log space
  bool saturated = false;  // some errors at/below machine floor (excluded)
};
RateFit rate_fit(const std::vector<double>& ts, const std::vector<double>& errs);

}  // namespace utm
