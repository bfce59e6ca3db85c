#pragma once

#include "utm/common.hpp"
#include "utm/contours.hpp"
#include "utm/dispersion.hpp"
#include "utm/oscillatory_quadrature.hpp"

namespace utm {

// I_{omega,m,j}(x,t) = (1/2pi) int_{dD_j^+} e^{ikx - i omega(k) t} dk/(ik)^{m+1}
// Component: one sector boundary.  Sum: all sectors.  IVP: the contour C along
// the real axis indented above the origin (equal to Sum for t > 0).
struct SpecialFnKey {
  Dispersion disp;
  int m = 0;            // pole order m >= -1
  enum Selector { Component, Sum, IVP } selector = Component;
  int j = 0;            // sector index when selector == Component
};

struct SpecialValue {
  cx value = 0.0;
  enum Regime { Exact, Quadrature, Asymptotic } regime = Exact;
  double error_estimate = 0.0;
};

// Taylor coefficients a_0..a_{count-1} of e^{ikx - i omega(k) t} at k = 0,
// and the local scale rho = |x| + |t|^{1/n}.
struct TaylorData {
  std::vector<cx> a;
  double rho;
};
TaylorData taylor_coeffs(const Dispersion& d, cx x, double t, int count);

SpecialValue special_eval(const SpecialFnKey& key, double x, double t,
                          const QuadratureSettings& settings = {});

// Same integral with a complex first argument (kernel shifts x - nu*y used by
// the solver).  Real x delegates here.
SpecialValue special_eval_shifted(const SpecialFnKey& key, cx xi, double t,
                                  const QuadratureSettings& settings = {});

// Leading steepest-descent term (plus residue part) only; valid for large
// X = |x| (|x|/t)^{1/(n-1)}.
SpecialValue asymptotic_eval(const SpecialFnKey& key, double x, double t);

// K_t(x) = sum_j I_{omega,-1,j}(x,t), t > 0.
cx kernel_Kt(const Dispersion& d, double x, double t,
             const QuadratureSettings& settings = {});

}  // namespace utm
