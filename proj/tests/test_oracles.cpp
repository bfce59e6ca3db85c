#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/oracles.hpp"

using namespace utm;

TEST_CASE("brute force contour oracle agrees with the library evaluator") {
  Dispersion a2({0, 0, 0, 1});
  for (int m : {0, 1})
    for (int j : {0, 1}) {
      SpecialFnKey key{a2, m, SpecialFnKey::Component, j};
      for (double x : {0.0, 0.9}) {
        cx lib = special_eval(key, x, 0.6).value;
        cx ref = brute_force_special(key, x, 0.6, 1e-11);
        CHECK(std::abs(lib - ref) < 1e-9);
      }
    }
  Dispersion ls({0, 0, 1});
  SpecialFnKey key{ls, 0, SpecialFnKey::Component, 0};
  CHECK(std::abs(special_eval(key, 1.3, 0.5).value -
                 brute_force_special(key, 1.3, 0.5, 1e-11)) < 1e-9);
}

TEST_CASE("images solution obeys the zero boundary condition") {
  PiecewiseData q0 = PiecewiseData::indicator(1, 2);
  for (double t : {0.1, 0.5}) CHECK(std::abs(images_ls(q0, 0.0, t)) < 1e-10);
}

TEST_CASE("images solution conserves mass") {
  PiecewiseData q0 = PiecewiseData::indicator(1, 2);
  CHECK(images_ls_mass(q0, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  // conservation in time: the indicator's slow spatial decay makes the t > 0
  // integral expensive, so use a smooth rapidly decaying datum instead
  Piece p;
  p.kind = Piece::Numeric;
  p.fn = [](double x) { return cx(x * std::exp(-x * x), 0.0); };
  p.fn_deriv = [](double x) {
    return cx((1 - 2 * x * x) * std::exp(-x * x), 0.0);
  };
  PiecewiseData qg{{}, {p}, INF};
  double m0 = images_ls_mass(qg, 0.0, 1e-6);
  CHECK(m0 == doctest::Approx(std::sqrt(2 * PI) / 16).epsilon(1e-6));
  CHECK(images_ls_mass(qg, 0.1, 1e-3) == doctest::Approx(m0).epsilon(5e-3));
}

TEST_CASE("bump support and derivatives") {
  Bump b{1.0, 0.5, 0.5, 0.25, 4};
  CHECK(b.value(0.4, 0.5) == 0.0);
  CHECK(b.value(1.0, 0.8) == 0.0);
  CHECK(b.value(1.0, 0.5) == doctest::Approx(1.0));
  double h = 1e-6;
  double fd = (b.value(1.2 + h, 0.55) - b.value(1.2 - h, 0.55)) / (2 * h);
  CHECK(b.dx(1.2, 0.55, 1) == doctest::Approx(fd).epsilon(1e-6));
  double fdt = (b.value(1.2, 0.55 + h) - b.value(1.2, 0.55 - h)) / (2 * h);
  CHECK(b.dt(1.2, 0.55) == doctest::Approx(fdt).epsilon(1e-6));
}

TEST_CASE("weak residual vanishes on a genuine solution") {
  PiecewiseData q0 = PiecewiseData::indicator(1, 2);
  Dispersion d({0, 0, 1});
  auto q = [&](double x, double t) { return images_ls(q0, x, t, 1e-8); };
  Bump b{1.2, 0.6, 0.4, 0.2, 4};
  cx r = weak_residual(d, q, b, 33);
  CHECK(std::abs(r) < 1e-5);
}

TEST_CASE("weak residual detects a non-solution") {
  Dispersion d({0, 0, 1});
  auto fake = [](double x, double t) { return cx(x * t, 0.0); };
  Bump b{1.2, 0.6, 0.4, 0.2, 4};
  CHECK(std::abs(weak_residual(d, fake, b, 33)) > 1e-3);
}

TEST_CASE("rate fit recovers a power law") {
  std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4}, errs;
  for (double t : ts) errs.push_back(0.7 * std::pow(t, 0.25));
  RateFit f = rate_fit(ts, errs);
  CHECK(f.slope == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(f.half_width < 1e-10);
  CHECK_FALSE(f.saturated);
}

TEST_CASE("rate fit flags samples at the machine floor") {
  std::vector<double> ts{1e-1, 1e-2, 1e-3};
  std::vector<double> errs{1e-8, 1e-12, 0.0};
  RateFit f = rate_fit(ts, errs);
  CHECK(f.saturated);
}

TEST_CASE("rate fit rejects malformed input") {
  CHECK_THROWS_AS(rate_fit({}, {}), domain_error);
  CHECK_THROWS_AS(rate_fit({1.0}, {1.0, 2.0}), domain_error);
}
