#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/special_functions.hpp"

using namespace utm;

namespace {
SpecialFnKey comp(const Dispersion& d, int m, int j) {
  return {d, m, SpecialFnKey::Component, j};
}
SpecialFnKey sel(const Dispersion& d, int m, SpecialFnKey::Selector s) {
  return {d, m, s, 0};
}
}  // namespace

TEST_CASE("wall anchors") {
  Dispersion ls({0, 0, 1}), a2({0, 0, 0, 1});
  for (double t : {0.1, 1.0, 10.0})
    CHECK(std::abs(special_eval(comp(ls, 0, 0), 0.0, t).value + 0.5) < 1e-8);
  for (double t : {0.1, 1.0}) {
    CHECK(std::abs(special_eval(comp(a2, 0, 0), 0.0, t).value + 1.0 / 3) < 1e-8);
    CHECK(std::abs(special_eval(comp(a2, 0, 1), 0.0, t).value + 1.0 / 3) < 1e-8);
  }
}

TEST_CASE("zero for negative time and for positive x at t = 0") {
  Dispersion d({0, 0, 0, 1});
  auto v = special_eval(comp(d, 0, 0), 1.0, -0.3);
  CHECK(v.value == cx(0.0));
  CHECK(v.regime == SpecialValue::Exact);
  CHECK(special_eval(comp(d, 1, 1), 2.0, 0.0).value == cx(0.0));
}

TEST_CASE("monomial scaling in time at the wall") {
  Dispersion d({0, 0, 0, 1});
  for (int m : {1, 2}) {
    cx base = special_eval(comp(d, m, 0), 0.0, 1.0).value;
    for (double t : {0.2, 2.5}) {
      cx v = special_eval(comp(d, m, 0), 0.0, t).value;
      CHECK(std::abs(v - std::pow(t, m / 3.0) * base) < 1e-9);
    }
  }
}

TEST_CASE("sum selector equals the component sum") {
  Dispersion d({0, 0, 0, 1});
  double x = 0.7, t = 0.4;
  cx total = special_eval(comp(d, 0, 0), x, t).value +
             special_eval(comp(d, 0, 1), x, t).value;
  cx s = special_eval(sel(d, 0, SpecialFnKey::Sum), x, t).value;
  CHECK(std::abs(s - total) < 1e-9);
  cx ivp = special_eval(sel(d, 0, SpecialFnKey::IVP), x, t).value;
  CHECK(std::abs(ivp - total) < 1e-9);
}

TEST_CASE("ivp selector at negative arguments approaches the step limit") {
  // I with the indented real-axis contour tends to -xi^m/m! for xi < 0
  Dispersion d({0, 0, 0, 1});
  for (int m : {0, 1}) {
    cx v = special_eval(sel(d, m, SpecialFnKey::IVP), -1.5, 1e-9).value;
    double want = -(m == 0 ? 1.0 : -1.5);
    CHECK(std::abs(v - want) < 1e-3);
  }
  cx pos = special_eval(sel(d, 0, SpecialFnKey::IVP), 1.5, 1e-12).value;
  CHECK(std::abs(pos) < 1e-3);
}

TEST_CASE("asymptotic regime matches quadrature in the overlap") {
  for (auto coeffs :
       {std::vector<double>{0, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, -1}}) {
    Dispersion d(coeffs);
    int n = d.degree();
    double x = 2.0;
    double t = x * std::pow(x / 45.0, n - 1);  // X = 45
    for (int m : {0, 1}) {
      SpecialValue q = special_eval(comp(d, m, 0), x, t);
      SpecialValue a = asymptotic_eval(comp(d, m, 0), x, t);
      CHECK(std::abs(q.value - a.value) <=
            q.error_estimate + a.error_estimate + 1e-12);
    }
  }
}

TEST_CASE("free space kernel equals the m = -1 component sum") {
  Dispersion d({0, 0, 1});
  double x = 0.8, t = 0.3;
  cx k = kernel_Kt(d, x, t);
  cx s = special_eval(sel(d, -1, SpecialFnKey::Sum), x, t).value;
  CHECK(std::abs(k - s) < 1e-9);
  // Schrodinger kernel in closed form: e^{i x^2/(4t)} / sqrt(4 pi i t)
  cx want = std::exp(cx(0, 1) * x * x / (4 * t)) /
            std::sqrt(4 * PI * t * cx(0, 1));
  CHECK(std::abs(k - want) < 1e-8);
}

TEST_CASE("taylor coefficients reproduce the exponential near k = 0") {
  Dispersion d({0, 0, 0, 1});
  cx x(0.4, 0.1);
  double t = 0.7;
  TaylorData td = taylor_coeffs(d, x, t, 12);
  CHECK(td.rho > 0);
  for (cx k : {cx(0.05, 0.0), cx(0.02, 0.03)}) {
    cx sum = 0.0, kp = 1.0;
    for (const cx& a : td.a) {
      sum += a * kp;
      kp *= k;
    }
    cx want = std::exp(cx(0, 1) * k * x - cx(0, 1) * d.omega(k) * t);
    CHECK(std::abs(sum - want) < 1e-10);
  }
}

TEST_CASE("shifted arguments stay consistent with the real axis case") {
  Dispersion d({0, 0, 0, 1});
  SpecialFnKey key = comp(d, 0, 0);
  cx xi(1.1, 0.0);
  cx a = special_eval_shifted(key, xi, 0.5).value;
  cx b = special_eval(key, 1.1, 0.5).value;
  CHECK(std::abs(a - b) < 1e-10);
  // a genuinely complex shift still evaluates finitely
  cx v = special_eval_shifted(key, cx(1.0, 0.4), 0.5).value;
  CHECK(std::isfinite(v.real()));
  CHECK(std::isfinite(v.imag()));
}
