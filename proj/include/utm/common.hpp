#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace utm {

using cx = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double PI = 3.141592653589793238462643383279502884;

// Error raised when an operation is called outside its stated domain
// (bad arguments, unsupported data kinds, etc.).
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error raised when a numerical routine fails to converge or produces an
// internally inconsistent result.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Roots of a complex-coefficient polynomial c[0] + c[1] z + ... + c[n] z^n,
// Durand-Kerner iteration with Newton polish.  Deterministic.
std::vector<cx> poly_roots(const std::vector<cx>& coeffs);

}  // namespace utm
