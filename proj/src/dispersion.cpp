#include "utm/dispersion.hpp"

#include <algorithm>
#include <cmath>

namespace utm {

std::vector<cx> poly_roots(const std::vector<cx>& coeffs_in) {
  // strip trailing (numerically) zero leading coefficients
  std::vector<cx> c = coeffs_in;
  double scale = 0;
  for (auto& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0) throw domain_error("poly_roots: zero polynomial");
  while (c.size() > 1 && std::abs(c.back()) < 1e-14 * scale) c.pop_back();
  int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};

  // monic normalization
  std::vector<cx> a(n);
  for (int j = 0; j < n; ++j) a[j] = c[j] / c[n];

  auto eval = [&](cx z) {
    cx p = 1.0;
    for (int j = n - 1; j >= 0; --j) p = p * z + a[j];
    return p;
  };
  auto eval_deriv = [&](cx z) {
    cx p = static_cast<double>(n);
    for (int j = n - 1; j >= 1; --j) p = p * z + a[j] * static_cast<double>(j);
    return p;
  };

  // Durand-Kerner with deterministic non-real starting points
  double radius = 1.0;
  for (int j = 0; j < n; ++j)
    radius = std::max(radius, std::pow(std::abs(a[j]), 1.0 / (n - j)));
  radius *= 1.5;
  std::vector<cx> z(n);
  for (int j = 0; j < n; ++j)
    z[j] = radius * std::exp(cx(0, 2 * PI * j / n + 0.4));

  for (int it = 0; it < 500; ++it) {
    double move = 0;
    for (int j = 0; j < n; ++j) {
      cx denom = 1.0;
      for (int m = 0; m < n; ++m)
        if (m != j) denom *= (z[j] - z[m]);
      cx step = eval(z[j]) / denom;
      z[j] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-14 * radius) break;
  }
  // Newton polish (helps simple roots; harmless for clusters)
  for (int j = 0; j < n; ++j) {
    for (int it = 0; it < 8; ++it) {
      cx d = eval_deriv(z[j]);
      if (std::abs(d) < 1e-300) break;
      cx step = eval(z[j]) / d;
      if (std::abs(step) > 0.1 * (1 + std::abs(z[j]))) break;
      z[j] -= step;
      if (std::abs(step) < 1e-16 * (1 + std::abs(z[j]))) break;
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!(std::abs(eval(z[j])) < 1e-8 * (1 + std::pow(std::abs(z[j]), n))))
      throw numerical_error("poly_roots: iteration did not converge");
  }
  return z;
}

Dispersion::Dispersion(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || std::abs(coeffs_[0]) != 0.0)
    throw domain_error("Dispersion: constant term must be zero");
  n_ = static_cast<int>(coeffs_.size()) - 1;
  while (n_ >= 1 && coeffs_[n_] == 0.0) --n_;
  if (n_ < 2) throw domain_error("Dispersion: degree must be >= 2");
  coeffs_.resize(n_ + 1);
}

bool Dispersion::is_monomial() const {
  for (int j = 1; j < n_; ++j)
    if (coeffs_[j] != 0.0) return false;
  return true;
}

cx Dispersion::omega(cx k) const {
  cx p = 0.0;
  for (int j = n_; j >= 1; --j) p = (p + coeffs_[j]) * k;
  return p;
}

cx Dispersion::omega_prime(cx k) const {
  cx p = 0.0;
  for (int j = n_; j >= 2; --j) p = (p + coeffs_[j] * double(j)) * k;
  return p + coeffs_[1];
}

cx Dispersion::omega_second(cx k) const {
  cx p = 0.0;
  for (int j = n_; j >= 3; --j) p = (p + coeffs_[j] * double(j) * double(j - 1)) * k;
  return p + (n_ >= 2 ? coeffs_[2] * 2.0 : 0.0);
}

int num_boundary_conditions(const Dispersion& d) {
  int n = d.degree();
  if (n % 2 == 0) return n / 2;
  return d.leading() > 0 ? (n + 1) / 2 : (n - 1) / 2;
}

std::vector<cx> symmetries(const Dispersion& d, cx k) {
  int n = d.degree();
  std::vector<cx> out;
  out.reserve(n);
  if (d.is_monomial()) {
    cx alpha = std::exp(cx(0, 2 * PI / n));
    cx rot = 1.0;
    for (int j = 0; j < n; ++j) {
      out.push_back(rot * k);
      rot *= alpha;
    }
    out[0] = k;  // exact identity entry
    return out;
  }
  // general polynomial: roots of omega(nu) - omega(k) = 0
  std::vector<cx> poly(n + 1);
  const auto& w = d.coeffs();
  for (int j = 1; j <= n; ++j) poly[j] = w[j];
  poly[0] = -d.omega(k);
  auto roots = poly_roots(poly);
  // identity root first, remaining by argument (deterministic labeling)
  auto it = std::min_element(roots.begin(), roots.end(), [&](cx a, cx b) {
    return std::abs(a - k) < std::abs(b - k);
  });
  std::iter_swap(roots.begin(), it);
  roots[0] = k;
  std::sort(roots.begin() + 1, roots.end(), [](cx a, cx b) {
    double ar = std::arg(a), br = std::arg(b);
    if (ar != br) return ar < br;
    return std::abs(a) < std::abs(b);
  });
  return roots;
}

std::vector<cx> bj_coefficients(const Dispersion& d, cx k) {
  // i(omega(k)-omega(l))/(k-l) = i * sum_{j>=1} w_j (k^j - l^j)/(k - l)
  //                            = i * sum_j w_j sum_{p=0}^{j-1} k^{j-1-p} l^p
  int n = d.degree();
  const auto& w = d.coeffs();
  std::vector<cx> b(n, 0.0);
  for (int j = 1; j <= n; ++j) {
    if (w[j] == 0.0) continue;
    cx kp = 1.0;  // k^{j-1-p}, built downward
    std::vector<cx> kpow(j);
    kpow[j - 1] = 1.0;
    for (int p = j - 2; p >= 0; --p) kpow[p] = kpow[p + 1] * k;
    for (int p = 0; p < j; ++p) b[p] += cx(0, w[j]) * kpow[p];
    (void)kp;
  }
  return b;
}

std::vector<cx> cj_coefficients(const Dispersion& d, cx k) {
  auto b = bj_coefficients(d, k);
  cx twist = 1.0;
  for (auto& v : b) {
    v *= twist;
    twist *= cx(0, -1);
  }
  return b;
}

}  // namespace utm
