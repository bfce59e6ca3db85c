#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/dispersion.hpp"

using namespace utm;

TEST_CASE("omega evaluation") {
  Dispersion d({0, 2, 0, 1});  // 2k + k^3
  cx k(0.5, -0.25);
  CHECK(std::abs(d.omega(k) - (2.0 * k + k * k * k)) < 1e-14);
  CHECK(std::abs(d.omega_prime(k) - (2.0 + 3.0 * k * k)) < 1e-14);
  CHECK(std::abs(d.omega_second(k) - 6.0 * k) < 1e-14);
  CHECK(d.degree() == 3);
  CHECK(d.leading() == 1.0);
  CHECK_FALSE(d.is_monomial());
  CHECK(Dispersion({0, 0, 1}).is_monomial());
}

TEST_CASE("constructor rejects malformed coefficients") {
  CHECK_THROWS_AS(Dispersion({1, 0, 1}), domain_error);   // constant term
  CHECK_THROWS_AS(Dispersion({0, 1}), domain_error);      // degree < 2
  CHECK_THROWS_AS(Dispersion({0, 1, 0}), domain_error);   // leading zero
}

TEST_CASE("boundary condition counts") {
  CHECK(num_boundary_conditions(Dispersion({0, 0, 1})) == 1);
  CHECK(num_boundary_conditions(Dispersion({0, 0, -1})) == 1);
  CHECK(num_boundary_conditions(Dispersion({0, 0, 0, 1})) == 2);
  CHECK(num_boundary_conditions(Dispersion({0, 0, 0, -1})) == 1);
  CHECK(num_boundary_conditions(Dispersion({0, 0, 0, 0, 1})) == 2);
}

TEST_CASE("symmetries of a monomial") {
  Dispersion d({0, 0, 0, 1});
  cx k(1.2, -0.3);
  auto nu = symmetries(d, k);
  REQUIRE(nu.size() == 3);
  CHECK(std::abs(nu[0] - k) < 1e-12);
  cx a = std::polar(1.0, 2 * PI / 3);
  // the set {k, a k, a^2 k} in some order
  for (const cx& v : nu) {
    double best = std::min({std::abs(v - k), std::abs(v - a * k),
                            std::abs(v - a * a * k)});
    CHECK(best < 1e-12);
  }
}

TEST_CASE("symmetries of a general polynomial solve omega(nu) = omega(k)") {
  Dispersion d({0, 1, 0, 1});
  cx k(0.8, -0.6);
  auto nu = symmetries(d, k);
  REQUIRE(nu.size() == 3);
  CHECK(std::abs(nu[0] - k) < 1e-10);
  for (const cx& v : nu) CHECK(std::abs(d.omega(v) - d.omega(k)) < 1e-9);
}

TEST_CASE("bj coefficients interpolate the divided difference") {
  Dispersion d({0, 1, 0, 1});
  cx k(0.4, 0.7), l(-0.3, -0.2);
  auto b = bj_coefficients(d, k);
  REQUIRE(b.size() == 3);
  cx sum = 0.0, lp = 1.0;
  for (const cx& bj : b) {
    sum += bj * lp;
    lp *= l;
  }
  cx target = cx(0, 1) * (d.omega(k) - d.omega(l)) / (k - l);
  CHECK(std::abs(sum - target) < 1e-12);
}

TEST_CASE("cj coefficients carry the (-i)^j twist") {
  Dispersion d({0, 0, 1});
  cx k(0.9, 0.1);
  auto b = bj_coefficients(d, k);
  auto c = cj_coefficients(d, k);
  REQUIRE(b.size() == c.size());
  cx tw = 1.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    CHECK(std::abs(c[j] - tw * b[j]) < 1e-14);
    tw *= cx(0, -1);
  }
}

TEST_CASE("poly_roots finds all roots of a cubic") {
  // (z - 1)(z - 2i)(z + 3) = z^3 + (2 - 2i) z^2 + (-3 - 4i) z + 6i... use
  // coefficient form built from the factors instead
  std::vector<cx> r{1.0, cx(0, 2), -3.0};
  std::vector<cx> c{-r[0] * r[1] * r[2],
                    r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
                    -(r[0] + r[1] + r[2]), 1.0};
  auto roots = poly_roots(c);
  REQUIRE(roots.size() == 3);
  for (const cx& want : r) {
    double best = 1e9;
    for (const cx& got : roots) best = std::min(best, std::abs(got - want));
    CHECK(best < 1e-10);
  }
  // deterministic across calls
  auto again = poly_roots(c);
  for (std::size_t i = 0; i < roots.size(); ++i)
    CHECK(roots[i] == again[i]);
}
