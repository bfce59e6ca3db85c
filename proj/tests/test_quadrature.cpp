#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/oscillatory_quadrature.hpp"

using namespace utm;

TEST_CASE("clenshaw curtis weights integrate polynomials") {
  for (int N : {17, 33, 65}) {
    const auto& w = clenshaw_curtis_weights(N);
    REQUIRE(int(w.size()) == N);
    double total = 0, x4 = 0;
    for (int i = 0; i < N; ++i) {
      double x = std::cos(i * PI / (N - 1));
      total += w[i];
      x4 += w[i] * x * x * x * x;
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(x4 == doctest::Approx(2.0 / 5).epsilon(1e-12));
  }
}

TEST_CASE("segment integration of an analytic function") {
  QuadratureSettings s;
  auto r = integrate_segment([](cx z) { return std::exp(cx(0, 1) * z); },
                             0.0, cx(1.0, 0.5), s);
  cx want = (std::exp(cx(0, 1) * cx(1.0, 0.5)) - 1.0) / cx(0, 1);
  CHECK(r.converged);
  CHECK(std::abs(r.value - want) < 1e-12);
  CHECK(std::abs(r.value - want) <= r.error_estimate + 1e-12);
}

TEST_CASE("ray integration with an exponential certificate") {
  QuadratureSettings s;
  DecayCertificate cert;
  cert.kind = DecayCertificate::Exponential;
  cert.A = 1.0;
  cert.c = 1.0;
  cert.n = 1;
  cert.t = 1.0;
  ComplexPath p;
  p.segments.push_back(PathSegment::ray_out(0.0, 1.0));
  auto r = integrate_path([](cx z) { return std::exp(-z); }, p, s, &cert);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-10);

  // incoming ray reverses the orientation
  ComplexPath pin;
  pin.segments.push_back(PathSegment::ray_in(0.0, 1.0));
  auto rin = integrate_path([](cx z) { return std::exp(-z); }, pin, s, &cert);
  CHECK(std::abs(rin.value + 1.0) < 1e-10);
}

TEST_CASE("truncation length grows as the tolerance shrinks") {
  DecayCertificate cert;
  cert.kind = DecayCertificate::Exponential;
  cert.n = 2;
  cert.t = 0.5;
  double l6 = cert.truncation_length(1e-6, 10.0);
  double l12 = cert.truncation_length(1e-12, 10.0);
  CHECK(l12 > l6);
  CHECK(l6 > 0);
}

TEST_CASE("stationary points of the rescaled phase") {
  Dispersion d({0, 0, 0, 1});
  double x = 2.0, t = 0.125;
  PhaseData ph = stationary_points(d, x, t);
  CHECK(ph.X == doctest::Approx(std::abs(x) * std::sqrt(std::abs(x) / t)));
  REQUIRE(!ph.z.empty());
  for (const cx& z : ph.z) CHECK(std::abs(ph.dphi(z)) < 1e-10);
  REQUIRE(ph.theta.size() == ph.z.size());
  for (double th : ph.theta) {
    CHECK(th > -PI / 2 - 1e-12);
    CHECK(th <= PI / 2 + 1e-12);
  }
}

TEST_CASE("descent tracer follows a quadratic phase") {
  // phi = -z^2: saddle at 0, descent along the real axis
  auto phi = [](cx z) { return -z * z; };
  auto dphi = [](cx z) { return -2.0 * z; };
  DescentTrace tr = trace_steepest_descent(phi, dphi, 0.0, 0.0, 30.0, 50.0);
  REQUIRE(!tr.forward.empty());
  REQUIRE(!tr.backward.empty());
  for (const cx& z : tr.forward) CHECK(std::abs(z.imag()) < 1e-8);
  CHECK(tr.forward.back().real() > 5.0);
  CHECK(tr.backward.back().real() < -5.0);
  CHECK(std::abs(tr.forward_exit_angle) < 1e-6);
  CHECK(std::abs(std::abs(tr.backward_exit_angle) - PI) < 1e-6);
}

TEST_CASE("descent path achieves the requested drop") {
  Dispersion d({0, 0, 1});
  PhaseData ph = stationary_points(d, 1.0, 0.01);
  double drop = 25.0;
  ComplexPath p = descent_path(ph, 0, drop);
  REQUIRE(!p.segments.empty());
  cx zj = ph.z[0];
  cx first = p.segments.front().a;
  cx last = p.segments.back().b;
  for (cx endpoint : {first, last}) {
    double re = (ph.X * (ph.phi(endpoint) - ph.phi(zj))).real();
    CHECK(re <= -drop + 1e-6);
  }
}
