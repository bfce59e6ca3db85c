#pragma once

#include <functional>
#include <vector>

#include "utm/common.hpp"
#include "utm/contours.hpp"
#include "utm/dispersion.hpp"

namespace utm {

struct QuadratureSettings {
  double tolerance = 1e-10;
  int base_nodes = 33;     // 2^m + 1, nested under doubling
  int max_doublings = 6;
  double safety = 10.0;    // ray truncation safety factor
};

// Decay bound for an integrand on an infinite ray, measured in arc length s
// from the ray anchor: |f| <= A e^{-c s^n t}  or  |f| <= A s^{-p}, p > 1.
struct DecayCertificate {
  enum Kind { Exponential, Algebraic } kind = Exponential;
  double A = 1.0;
  double c = 1.0;
  int n = 2;
  double t = 1.0;
  double p = 2.0;
  double truncation_length(double tol, double safety) const;
};

struct QuadratureResult {
  cx value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

using Integrand = std::function<cx(cx)>;

// Clenshaw-Curtis weights on [-1, 1] for N nodes (N = 2^m + 1), cached.
const std::vector<double>& clenshaw_curtis_weights(int N);

QuadratureResult integrate_segment(const Integrand& f, cx a, cx b,
                                   const QuadratureSettings& s);

// Path integral; every Ray segment needs the certificate.
QuadratureResult integrate_path(const Integrand& f, const ComplexPath& path,
                                const QuadratureSettings& s,
                                const DecayCertificate* ray_decay);

// Rescaled phase Phi(z) with k = sigma (|x|/t)^{1/(n-1)} z, so that
// i k x - i omega(k) t = X Phi(z), X = |x| (|x|/t)^{1/(n-1)}.
struct PhaseData {
  Dispersion disp;
  double sigma;      // sign of x
  double kscale;     // sigma (|x|/t)^{1/(n-1)}
  double X;
  double t_over_X;
  std::vector<cx> z;       // stationary points, CCW from positive real axis
  std::vector<double> theta;  // descent angles, in (-pi/2, pi/2]

  cx phi(cx zz) const;
  cx dphi(cx zz) const;
  cx ddphi(cx zz) const;
};

PhaseData stationary_points(const Dispersion& d, double x, double t);

// Generic constant-phase descent tracer, shared by the z-plane descent_path
// and the k-plane special-function engine.  theta is the departure angle of
// the forward branch; the backward branch leaves at theta + pi.  Each branch
// is traced until Re(phi - phi(saddle)) <= -drop; a coarse continuation then
// runs out to |z| >= far_radius to record the asymptotic exit angle.
struct DescentTrace {
  std::vector<cx> forward, backward;   // polylines, saddle excluded
  double forward_exit_angle = 0;
  double backward_exit_angle = 0;
};
DescentTrace trace_steepest_descent(const std::function<cx(cx)>& phi,
                                    const std::function<cx(cx)>& dphi,
                                    cx saddle, double theta, double drop,
                                    double far_radius);

// Piecewise affine steepest-descent path through z[j]; traced until
// Re[X (Phi(z) - Phi(z_j))] <= -drop on both branches.  Returned as an
// ordered polyline (finite segments only) oriented in the +theta_j direction.
ComplexPath descent_path(const PhaseData& phase, int j, double drop);

}  // namespace utm
