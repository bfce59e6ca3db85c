#include "utm/contours.hpp"

#include <cmath>

namespace utm {

SectorDecomposition asymptotic_sectors(const Dispersion& d) {
  // At infinity Im omega ~ |w_n| |k|^n sin(n*theta + arg(w_n)), arg in {0, pi}.
  int n = d.degree();
  double phase = d.leading() > 0 ? 0.0 : PI;
  // sin(n*theta + phase) >= 0 on theta in [(2m*pi - phase)/n, ((2m+1)*pi - phase)/n]
  SectorDecomposition out;
  for (int m = -n; m <= n; ++m) {
    double lo = (2 * m * PI - phase) / n;
    double hi = ((2 * m + 1) * PI - phase) / n;
    if (lo >= 0.0 - 1e-15 && hi <= PI + 1e-15) {
      out.sectors.push_back({std::max(lo, 0.0), std::min(hi, PI)});
    }
  }
  return out;
}

double choose_truncation_radius(const Dispersion& d) {
  if (d.is_monomial()) return 2.0;
  double m = 1.0;
  const auto& w = d.coeffs();
  int n = d.degree();
  // roots of omega'
  std::vector<cx> dp(n);
  for (int j = 1; j <= n; ++j) dp[j - 1] = w[j] * double(j);
  for (auto r : poly_roots(dp)) m = std::max(m, std::abs(r));
  // branch points of the symmetries: omega'(nu) = 0 with omega(nu) = omega(k)
  // has the same critical set, so the omega' roots already cover them.
  return 2.0 * m;
}

ComplexPath boundary_contour(const Dispersion& d, int j, double R, double gamma) {
  auto sect = asymptotic_sectors(d);
  if (j < 0 || j >= static_cast<int>(sect.sectors.size()))
    throw domain_error("boundary_contour: sector index out of range");
  if (!(gamma > 0.0 && gamma <= 0.5))
    throw domain_error("boundary_contour: gamma must lie in (0, 1/2]");
  double lo = sect.sectors[j].theta_lo, hi = sect.sectors[j].theta_hi;
  double w = hi - lo;
  double th_in = hi - gamma * w / 2;   // incoming ray (from infinity)
  double th_out = lo + gamma * w / 2;  // outgoing ray (to infinity)

  ComplexPath p;
  cx a_in = R * std::exp(cx(0, th_in));
  cx a_out = R * std::exp(cx(0, th_out));
  p.segments.push_back(PathSegment::ray_in(a_in, std::exp(cx(0, th_in))));
  // clockwise arc th_in -> th_out at radius R, as affine chords
  int nseg = static_cast<int>(std::ceil(R * (th_in - th_out) / 0.2));
  nseg = std::max(nseg, 2);
  for (int s = 0; s < nseg; ++s) {
    double t0 = th_in + (th_out - th_in) * s / nseg;
    double t1 = th_in + (th_out - th_in) * (s + 1) / nseg;
    p.segments.push_back(
        PathSegment::finite(R * std::exp(cx(0, t0)), R * std::exp(cx(0, t1))));
  }
  p.segments.push_back(PathSegment::ray_out(a_out, std::exp(cx(0, th_out))));
  return p;
}

ComplexPath ivp_contour(double R, double r0) {
  if (!(r0 > 0 && r0 < R)) throw domain_error("ivp_contour: need 0 < r0 < R");
  ComplexPath p;
  p.segments.push_back(PathSegment::ray_in(cx(-R, 0), cx(-1, 0)));
  p.segments.push_back(PathSegment::finite(cx(-R, 0), cx(-r0, 0)));
  int nseg = static_cast<int>(std::ceil(r0 * PI / 0.2));
  nseg = std::max(nseg, 8);
  for (int s = 0; s < nseg; ++s) {
    // upper semicircle traversed from -r0 to +r0 (over the origin)
    double t0 = PI - PI * s / nseg;
    double t1 = PI - PI * (s + 1) / nseg;
    p.segments.push_back(
        PathSegment::finite(r0 * std::exp(cx(0, t0)), r0 * std::exp(cx(0, t1))));
  }
  p.segments.push_back(PathSegment::finite(cx(r0, 0), cx(R, 0)));
  p.segments.push_back(PathSegment::ray_out(cx(R, 0), cx(1, 0)));
  return p;
}

}  // namespace utm
