#pragma once

#include <vector>

#include "utm/common.hpp"

namespace utm {

// Polynomial dispersion relation omega(k) = sum_{j=1}^{n} w_j k^j with real
// coefficients, n >= 2, w_n != 0.  Constant term is identically zero.
class Dispersion {
 public:
  // coeffs[j] is the coefficient of k^j; coeffs[0] must be zero.
  explicit Dispersion(std::vector<double> coeffs);

  int degree() const { return n_; }
  double leading() const { return coeffs_[n_]; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  bool is_monomial() const;

  cx omega(cx k) const;
  cx omega_prime(cx k) const;
  cx omega_second(cx k) const;

 private:
  std::vector<double> coeffs_;
  int n_;
};

// Number of boundary conditions N(n) for the canonical half-line problem.
int num_boundary_conditions(const Dispersion& d);

// The n solutions nu of omega(nu) = omega(k), first entry equal to k.
// Monomial dispersions use the closed form alpha^j k, alpha = e^{2 pi i/n}.
std::vector<cx> symmetries(const Dispersion& d, cx k);

// Coefficients c_j(k), j = 0..n-1, defined through
//   i (omega(k) - omega(l)) / (k - l) = sum_j b_j(k) l^j,  c_j = (-i)^j b_j.
std::vector<cx> cj_coefficients(const Dispersion& d, cx k);

// Helper shared with contours: the b_j(k) before the (-i)^j twist.
std::vector<cx> bj_coefficients(const Dispersion& d, cx k);

}  // namespace utm
