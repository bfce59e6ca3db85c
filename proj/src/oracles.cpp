#include "utm/oracles.hpp"

#include <cmath>

#include "utm/contours.hpp"
#include "utm/oscillatory_quadrature.hpp"

namespace utm {

namespace {

// ---------- self-contained adaptive Simpson on a real parameter -------------

cx simp_step(const std::function<cx(double)>& f, double a, double b, cx fa,
             cx fm, cx fb, cx whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  cx fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
  cx left = (b - a) / 12.0 * (fa + 4.0 * fl + fm);
  cx right = (b - a) / 12.0 * (fm + 4.0 * fr + fb);
  cx both = left + right;
  if (depth <= 0 || std::abs(both - whole) < 15 * tol) {
    return both + (both - whole) / 15.0;
  }
  return simp_step(f, a, m, fa, fl, fm, left, tol / 2, depth - 1) +
         simp_step(f, m, b, fm, fr, fb, right, tol / 2, depth - 1);
}

cx simpson(const std::function<cx(double)>& f, double a, double b, double tol,
           int depth = 24) {
  if (a == b) return 0.0;
  cx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simp_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// chunked Simpson so strongly oscillatory stretches start from small panels
cx simpson_chunked(const std::function<cx(double)>& f, double a, double b,
                   double chunk, double tol) {
  cx total = 0.0;
  int nch = std::max(1, int(std::ceil((b - a) / chunk)));
  for (int i = 0; i < nch; ++i)
    total += simpson(f, a + (b - a) * i / nch, a + (b - a) * (i + 1) / nch,
                     tol / nch);
  return total;
}

// ---------- brute-force kernel functions ------------------------------------

struct OraclePhase {
  const Dispersion* d;
  cx xi;
  double t;
  cx phi(cx k) const { return cx(0, 1) * (k * xi - d->omega(k) * t); }
};

struct RayScan {
  double peak = -1e300;
  double length = 1.0;
};

RayScan scan_ray(const OraclePhase& ph, double theta, double r,
                 double log_floor) {
  RayScan rs;
  cx e = std::exp(cx(0, theta));
  double u = 0.05;
  for (int s = 0; s < 600; ++s) {
    double re = ph.phi((r + u) * e).real();
    rs.peak = std::max(rs.peak, re);
    if (re < log_floor && re < rs.peak) {
      rs.length = u;
      return rs;
    }
    u *= 1.2;
  }
  rs.length = u;
  return rs;
}

cx brute_component(const Dispersion& d, int m, int j, cx xi, double t,
                   double tol) {
  int n = d.degree();
  auto sect = asymptotic_sectors(d).sectors;
  if (j < 0 || j >= int(sect.size()))
    throw domain_error("brute_force_special: sector index out of range");
  if (t < 0) return 0.0;
  if (t == 0) {
    if (m >= 0 && xi.imag() == 0 && xi.real() >= 0) return 0.0;
    throw domain_error("brute_force_special: undefined at t = 0 here");
  }
  OraclePhase ph{&d, xi, t};
  double log_floor = std::log(tol) - 6 - 2 * std::log1p(std::abs(xi));

  double r = 0.5;
  while (r > 1e-3 &&
         std::abs(ph.phi(r * std::exp(cx(0, sect[j].theta_lo))).real()) > 1.0)
    r /= 2;

  auto pick = [&](double base, double sign) {
    double delta = PI / (4 * n);
    RayScan rs = scan_ray(ph, base + sign * delta, r, log_floor);
    while (rs.peak > 3.0 && delta > 0.01) {
      delta /= 2;
      rs = scan_ray(ph, base + sign * delta, r, log_floor);
    }
    return std::pair{base + sign * delta, rs.length};
  };
  auto [th_in, L_in] = pick(sect[j].theta_hi, +1.0);
  auto [th_out, L_out] = pick(sect[j].theta_lo, -1.0);

  auto f = [&](cx k) { return std::exp(ph.phi(k)) / std::pow(cx(0, 1) * k, m + 1); };

  // oscillation wavelength ~ 2 pi / (|xi| + n |w_n| t R^{n-1}); a fixed unit
  // chunk with deep adaptive bisection inside is enough in practice
  auto ray = [&](double th, double L) {
    cx e = std::exp(cx(0, th));
    return simpson_chunked([&](double u) { return f((r + u) * e) * e; }, 0.0,
                           L, 1.0, tol);
  };
  cx total = -ray(th_in, L_in);
  total += simpson_chunked(
      [&](double th) {
        cx k = r * std::exp(cx(0, th));
        return f(k) * cx(0, 1) * k;
      },
      th_in, th_out, 0.2, tol);
  total += ray(th_out, L_out);
  return total / (2 * PI);
}

}  // namespace

cx brute_force_special(const SpecialFnKey& key, cx xi, double t, double tol) {
  const Dispersion& d = key.disp;
  if (key.selector == SpecialFnKey::Component)
    return brute_component(d, key.m, key.j, xi, t, tol);
  int nj = int(asymptotic_sectors(d).sectors.size());
  cx sum = 0.0;
  for (int j = 0; j < nj; ++j) sum += brute_component(d, key.m, j, xi, t, tol);
  return sum;
}

// ---------- method of images for omega = k^2, zero Dirichlet ----------------

namespace {

cx heat_kernel_ls(double xi, double t) {
  // e^{i xi^2 / (4t)} / sqrt(4 pi i t)
  return std::exp(cx(0, xi * xi / (4 * t) - PI / 4)) / (2 * std::sqrt(PI * t));
}

double data_tail_start(const PiecewiseData& q0) {
  return q0.breakpoints.empty() ? 0.0 : q0.breakpoints.back();
}

cx images_integral(const PiecewiseData& q0, const std::function<cx(double)>& K,
                   double tol) {
  std::vector<double> edges{0.0};
  for (double b : q0.breakpoints) edges.push_back(b);
  cx total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += simpson_chunked([&](double y) { return q0.value(y) * K(y); },
                             edges[i], edges[i + 1], 0.5, tol);
  // marching tail
  double a = data_tail_start(q0), len = 1.0;
  int quiet = 0;
  for (int blk = 0; blk < 64 && quiet < 2; ++blk) {
    double fmax = 0.0;
    for (int s = 0; s <= 8; ++s)
      fmax = std::max(fmax, std::abs(q0.value(a + len * s / 8.0)));
    if (fmax * len < tol / 4) {
      ++quiet;
    } else {
      cx part = simpson_chunked([&](double y) { return q0.value(y) * K(y); },
                                a, a + len, 0.5, tol);
      total += part;
      if (std::abs(part) < tol / 4) ++quiet; else quiet = 0;
    }
    a += len;
    len *= 2;
  }
  return total;
}

}  // namespace

cx images_ls(const PiecewiseData& q0, double x, double t, double tol) {
  if (!(t > 0)) throw domain_error("images_ls: need t > 0");
  auto K = [&](double y) {
    return heat_kernel_ls(x - y, t) - heat_kernel_ls(x + y, t);
  };
  return images_integral(q0, K, tol);
}

double images_ls_mass(const PiecewiseData& q0, double t, double tol) {
  auto density = [&](double x) {
    double a = t > 0 ? std::abs(images_ls(q0, x, t, tol / 10))
                     : std::abs(q0.value(x));
    return cx(a * a, 0.0);
  };
  double total = 0.0, a = 0.0, len = 2.0;
  int quiet = 0;
  for (int blk = 0; blk < 32 && quiet < 2; ++blk) {
    double part = simpson_chunked(density, a, a + len, 1.0, tol).real();
    total += part;
    if (part < tol) ++quiet; else quiet = 0;
    a += len;
    len *= 2;
  }
  return total;
}

// ---------- weak-form residual ----------------------------------------------

namespace {

double pw(double s, int e) { return e < 0 ? 0.0 : std::pow(s, e); }

// d^r/du^r (1 - u^2)^P, |u| <= 1
double bump1d(double u, int P, int r) {
  double s = 1 - u * u;
  double p = P;
  switch (r) {
    case 0: return pw(s, P);
    case 1: return -2 * p * u * pw(s, P - 1);
    case 2: return -2 * p * pw(s, P - 1) + 4 * p * (p - 1) * u * u * pw(s, P - 2);
    case 3:
      return 12 * p * (p - 1) * u * pw(s, P - 2) -
             8 * p * (p - 1) * (p - 2) * u * u * u * pw(s, P - 3);
    case 4:
      return 12 * p * (p - 1) * pw(s, P - 2) -
             48 * p * (p - 1) * (p - 2) * u * u * pw(s, P - 3) +
             16 * p * (p - 1) * (p - 2) * (p - 3) * u * u * u * u * pw(s, P - 4);
    default:
      throw domain_error("weak_residual: derivative order > 4 unsupported");
  }
}

}  // namespace

double Bump::value(double x, double t) const {
  double u = (x - x0) / xw, v = (t - t0) / tw;
  if (std::abs(u) >= 1 || std::abs(v) >= 1) return 0.0;
  return bump1d(u, P, 0) * bump1d(v, P, 0);
}

double Bump::dx(double x, double t, int order) const {
  double u = (x - x0) / xw, v = (t - t0) / tw;
  if (std::abs(u) >= 1 || std::abs(v) >= 1) return 0.0;
  return bump1d(u, P, order) / std::pow(xw, order) * bump1d(v, P, 0);
}

double Bump::dt(double x, double t) const {
  double u = (x - x0) / xw, v = (t - t0) / tw;
  if (std::abs(u) >= 1 || std::abs(v) >= 1) return 0.0;
  return bump1d(u, P, 0) * bump1d(v, P, 1) / tw;
}

cx weak_residual(const Dispersion& d, const std::function<cx(double, double)>& q,
                 const Bump& bump, int nodes) {
  const auto& wq = clenshaw_curtis_weights(nodes);
  const auto& wc = d.coeffs();
  int n = d.degree();
  cx total = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double x = bump.x0 + bump.xw * std::cos(i * PI / (nodes - 1));
    for (int j = 0; j < nodes; ++j) {
      double t = bump.t0 + bump.tw * std::cos(j * PI / (nodes - 1));
      cx test = -bump.dt(x, t);
      for (int r = 1; r <= n; ++r)
        if (wc[r] != 0)
          test += wc[r] * std::pow(cx(0, 1), r + 1) * bump.dx(x, t, r);
      if (test != 0.0) total += wq[i] * wq[j] * q(x, t) * test;
    }
  }
  return total * bump.xw * bump.tw;
}

// ---------- rate fitting -----------------------------------------------------

RateFit rate_fit(const std::vector<double>& ts, const std::vector<double>& errs) {
  if (ts.size() != errs.size() || ts.empty())
    throw domain_error("rate_fit: mismatched or empty samples");
  RateFit out;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (errs[i] <= 1e-300) {
      out.saturated = true;
      continue;
    }
    lx.push_back(std::log(ts[i]));
    ly.push_back(std::log(errs[i]));
  }
  if (lx.size() < 2) {
    out.saturated = true;
    return out;
  }
  double n = double(lx.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw domain_error("rate_fit: degenerate abscissae");
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  for (std::size_t i = 0; i < lx.size(); ++i)
    out.half_width = std::max(
        out.half_width, std::abs(ly[i] - out.slope * lx[i] - out.intercept));
  return out;
}

}  // namespace utm
