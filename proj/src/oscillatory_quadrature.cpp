#include "utm/oscillatory_quadrature.hpp"

#include <cmath>
#include <map>

namespace utm {

double DecayCertificate::truncation_length(double tol, double safety) const {
  double target = tol / safety;
  if (kind == Exponential) {
    // A e^{-c s^n t} <= target
    double arg = std::log(std::max(A, 1e-300) / target);
    if (arg <= 0) return 1.0;
    return std::pow(arg / (c * t), 1.0 / n);
  }
  // tail integral A s^{1-p}/(p-1) <= target
  double s = std::pow(A / ((p - 1) * target), 1.0 / (p - 1));
  return std::max(s, 1.0);
}

const std::vector<double>& clenshaw_curtis_weights(int N) {
  static std::map<int, std::vector<double>> cache;
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  // nodes x_j = cos(j pi / (N-1)), j = 0..N-1; standard weight formula
  int n = N - 1;
  std::vector<double> w(N, 0.0);
  for (int j = 0; j <= n; ++j) {
    double s = 1.0;
    for (int m = 1; m <= n / 2; ++m) {
      double b = (2 * m == n) ? 1.0 : 2.0;
      s -= b * std::cos(2.0 * m * j * PI / n) / (4.0 * m * m - 1.0);
    }
    w[j] = 2.0 * s / n;
    if (j == 0 || j == n) w[j] *= 0.5;
  }
  return cache.emplace(N, std::move(w)).first->second;
}

namespace {

cx cc_panel(const Integrand& f, cx a, cx b, int N, std::vector<cx>* fvals_io) {
  const auto& w = clenshaw_curtis_weights(N);
  cx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::vector<cx>& fv = *fvals_io;
  if (fv.empty()) {
    fv.resize(N);
    for (int j = 0; j < N; ++j)
      fv[j] = f(mid + half * std::cos(j * PI / (N - 1)));
  } else {
    // nested refinement: previous values sit at even indices
    std::vector<cx> nf(N);
    for (std::size_t j = 0; j < fv.size(); ++j) nf[2 * j] = fv[j];
    for (int j = 1; j < N; j += 2)
      nf[j] = f(mid + half * std::cos(j * PI / (N - 1)));
    fv = std::move(nf);
  }
  cx sum = 0.0;
  for (int j = 0; j < N; ++j) sum += w[j] * fv[j];
  return sum * half;
}

QuadratureResult panel_adaptive(const Integrand& f, cx a, cx b,
                                const QuadratureSettings& s, int depth) {
  std::vector<cx> fv;
  int N = s.base_nodes;
  cx prev = cc_panel(f, a, b, N, &fv);
  for (int d = 0; d < s.max_doublings; ++d) {
    N = 2 * (N - 1) + 1;
    cx cur = cc_panel(f, a, b, N, &fv);
    double diff = std::abs(cur - prev);
    if (diff < s.tolerance) return {cur, diff, true};
    prev = cur;
  }
  // not converged on one panel: bisect if we still may
  if (depth > 0) {
    cx m = 0.5 * (a + b);
    auto L = panel_adaptive(f, a, m, s, depth - 1);
    auto R = panel_adaptive(f, m, b, s, depth - 1);
    return {L.value + R.value, L.error_estimate + R.error_estimate,
            L.converged && R.converged};
  }
  return {prev, s.tolerance * 10, false};
}

}  // namespace

QuadratureResult integrate_segment(const Integrand& f, cx a, cx b,
                                   const QuadratureSettings& s) {
  return panel_adaptive(f, a, b, s, 10);
}

QuadratureResult integrate_path(const Integrand& f, const ComplexPath& path,
                                const QuadratureSettings& s,
                                const DecayCertificate* ray_decay) {
  QuadratureResult total;
  for (const auto& seg : path.segments) {
    QuadratureResult r;
    if (seg.kind == PathSegment::Finite) {
      r = integrate_segment(f, seg.a, seg.b, s);
    } else {
      if (!ray_decay)
        throw domain_error("integrate_path: infinite ray without decay certificate");
      double L = ray_decay->truncation_length(s.tolerance, s.safety);
      // geometric subpanels away from the anchor
      double lo = 0.0, len = std::min(1.0, L);
      r = {};
      while (lo < L) {
        double hi = std::min(lo + len, L);
        cx pa = seg.a + lo * seg.dir, pb = seg.a + hi * seg.dir;
        auto part = seg.incoming ? integrate_segment(f, pb, pa, s)
                                 : integrate_segment(f, pa, pb, s);
        r.value += part.value;
        r.error_estimate += part.error_estimate;
        r.converged = r.converged && part.converged;
        lo = hi;
        len *= 2;
      }
      if (seg.incoming) {
        // subpanels were each reversed; their sum already carries the
        // incoming orientation since integrate_segment(b,a) = -integrate(a,b)
      }
    }
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.converged = total.converged && r.converged;
  }
  return total;
}

cx PhaseData::phi(cx zz) const {
  return cx(0, 1) * zz - cx(0, 1) * disp.omega(kscale * zz) * t_over_X;
}
cx PhaseData::dphi(cx zz) const {
  return cx(0, 1) - cx(0, 1) * kscale * disp.omega_prime(kscale * zz) * t_over_X;
}
cx PhaseData::ddphi(cx zz) const {
  return -cx(0, 1) * kscale * kscale * disp.omega_second(kscale * zz) * t_over_X;
}

PhaseData stationary_points(const Dispersion& d, double x, double t) {
  if (!(std::abs(x) > 0) || !(t > 0))
    throw domain_error("stationary_points: need |x| > 0 and t > 0");
  int n = d.degree();
  PhaseData ph{d, x > 0 ? 1.0 : -1.0, 0, 0, 0, {}, {}};
  double ratio = std::abs(x) / t;
  ph.kscale = ph.sigma * std::pow(ratio, 1.0 / (n - 1));
  ph.X = std::abs(x) * std::pow(ratio, 1.0 / (n - 1));
  ph.t_over_X = t / ph.X;
  // saddles: omega'(k) = x / t, then z = k / kscale
  const auto& w = d.coeffs();
  std::vector<cx> dp(n);
  for (int j = 1; j <= n; ++j) dp[j - 1] = w[j] * double(j);
  dp[0] -= x / t;
  auto roots = poly_roots(dp);
  for (auto k : roots) ph.z.push_back(k / ph.kscale);
  std::sort(ph.z.begin(), ph.z.end(), [](cx a, cx b) {
    double aa = std::arg(a), ab = std::arg(b);
    if (aa < 0) aa += 2 * PI;
    if (ab < 0) ab += 2 * PI;
    if (aa != ab) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
  for (auto zj : ph.z) {
    cx f2 = ph.ddphi(zj);
    if (std::abs(f2) < 1e-12)
      throw numerical_error("stationary_points: degenerate saddle");
    double th = (PI - std::arg(f2)) / 2;
    while (th > PI / 2) th -= PI;
    while (th <= -PI / 2) th += PI;
    ph.theta.push_back(th);
  }
  return ph;
}

DescentTrace trace_steepest_descent(const std::function<cx(cx)>& phi,
                                    const std::function<cx(cx)>& dphi,
                                    cx saddle, double theta, double drop,
                                    double far_radius) {
  double im0 = phi(saddle).imag();
  double re0 = phi(saddle).real();
  // local curvature sets the step size
  double h;
  {
    double probe = std::max(1e-6, 1e-6 * std::abs(saddle));
    cx f2 = (dphi(saddle + probe) - dphi(saddle - probe)) / (2 * probe);
    if (std::abs(f2) < 1e-12)
      throw numerical_error("trace_steepest_descent: degenerate saddle");
    h = 0.1 / std::sqrt(std::abs(f2));
  }

  auto branch = [&](double dir_angle, std::vector<cx>& pts) {
    cx z = saddle;
    cx dir = std::exp(cx(0, dir_angle));
    bool dropped = false;
    for (int step = 0; step < 200000; ++step) {
      cx zp = z + h * dir;
      for (int it = 0; it < 25; ++it) {
        cx nrm = cx(0, 1) * dir;
        double g = phi(zp).imag() - im0;
        double gp = (nrm * dphi(zp)).imag();
        if (std::abs(gp) < 1e-300) break;
        zp += (-g / gp) * nrm;
        if (std::abs(phi(zp).imag() - im0) < 1e-10 * (1 + std::abs(re0))) break;
      }
      if (std::abs(phi(zp).imag() - im0) > 1e-6 * (1 + std::abs(re0)))
        throw numerical_error("trace_steepest_descent: corrector diverged");
      dir = (zp - z) / std::abs(zp - z);
      z = zp;
      pts.push_back(z);
      if (phi(z).real() - re0 <= -drop) {
        dropped = true;
        break;
      }
    }
    if (!dropped)
      throw numerical_error("trace_steepest_descent: drop target not reached");
    // coarse continuation, predictor only, just to classify the exit valley
    cx zc = z;
    for (int step = 0; step < 4000 && std::abs(zc) < far_radius; ++step) {
      cx g = dphi(zc);
      if (std::abs(g) < 1e-300) break;
      cx tangent = -std::conj(g) / std::abs(g);
      // keep the branch direction (the other sign walks back to the saddle)
      if ((tangent / dir).real() < 0) tangent = -tangent;
      double hc = std::max(4 * h, 0.02 * std::abs(zc));
      zc += hc * tangent;
      dir = tangent;
    }
    return std::arg(zc);
  };

  DescentTrace out;
  out.forward_exit_angle = branch(theta, out.forward);
  out.backward_exit_angle = branch(theta + PI, out.backward);
  return out;
}

ComplexPath descent_path(const PhaseData& phase, int j, double drop) {
  cx zj = phase.z[j];
  auto phi = [&](cx z) { return phase.phi(z); };
  auto dphi = [&](cx z) { return phase.dphi(z); };
  // drop is specified on X*(Phi - Phi_j); the tracer works on Phi itself
  auto tr = trace_steepest_descent(phi, dphi, zj, phase.theta[j],
                                   drop / phase.X, 20.0 * (1 + std::abs(zj)));
  ComplexPath p;
  auto& bwd = tr.backward;
  for (std::size_t i = bwd.size(); i-- > 1;)
    p.segments.push_back(PathSegment::finite(bwd[i], bwd[i - 1]));
  if (!bwd.empty()) p.segments.push_back(PathSegment::finite(bwd[0], zj));
  cx prev = zj;
  for (auto zp : tr.forward) {
    p.segments.push_back(PathSegment::finite(prev, zp));
    prev = zp;
  }
  return p;
}

}  // namespace utm
