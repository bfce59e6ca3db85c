#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/contours.hpp"

using namespace utm;

TEST_CASE("sector counts match boundary condition counts") {
  for (auto coeffs : {std::vector<double>{0, 0, 1}, {0, 0, -1},
                      {0, 0, 0, 1}, {0, 0, 0, -1}, {0, 0, 0, 0, 1}}) {
    Dispersion d(coeffs);
    auto dec = asymptotic_sectors(d);
    CHECK(int(dec.sectors.size()) == num_boundary_conditions(d));
    for (const auto& s : dec.sectors) {
      CHECK(s.theta_lo >= -1e-12);
      CHECK(s.theta_hi <= PI + 1e-12);
      CHECK(s.theta_lo < s.theta_hi);
    }
  }
}

TEST_CASE("sector walls for the example dispersions") {
  auto ls = asymptotic_sectors(Dispersion({0, 0, 1}));
  REQUIRE(ls.sectors.size() == 1);
  CHECK(ls.sectors[0].theta_lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ls.sectors[0].theta_hi == doctest::Approx(PI / 2));

  auto a2 = asymptotic_sectors(Dispersion({0, 0, 0, 1}));
  REQUIRE(a2.sectors.size() == 2);
  CHECK(a2.sectors[0].theta_lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a2.sectors[0].theta_hi == doctest::Approx(PI / 3));
  CHECK(a2.sectors[1].theta_lo == doctest::Approx(2 * PI / 3));
  CHECK(a2.sectors[1].theta_hi == doctest::Approx(PI));

  auto a1 = asymptotic_sectors(Dispersion({0, 0, 0, -1}));
  REQUIRE(a1.sectors.size() == 1);
  CHECK(a1.sectors[0].theta_lo == doctest::Approx(PI / 3));
  CHECK(a1.sectors[0].theta_hi == doctest::Approx(2 * PI / 3));
}

TEST_CASE("truncation radius clears the finite structure") {
  CHECK(choose_truncation_radius(Dispersion({0, 0, 1})) >= 2.0);
  // omega = k + k^3: omega' roots at +-i/sqrt(3), radius at least 2*max(1,.)
  CHECK(choose_truncation_radius(Dispersion({0, 1, 0, 1})) >= 2.0);
}

TEST_CASE("boundary contour ray angles at gamma = 1/2") {
  Dispersion d({0, 0, 1});
  double R = choose_truncation_radius(d);
  ComplexPath p = boundary_contour(d, 0, R, 0.5);
  REQUIRE(p.segments.size() >= 3);
  const PathSegment& in = p.segments.front();
  const PathSegment& out = p.segments.back();
  REQUIRE(in.kind == PathSegment::Ray);
  REQUIRE(out.kind == PathSegment::Ray);
  CHECK(in.incoming);
  CHECK_FALSE(out.incoming);
  // sector (0, pi/2): each ray bisects its half-sector, traversed from
  // the upper ray to the lower one
  CHECK(std::arg(in.dir) == doctest::Approx(3 * PI / 8));
  CHECK(std::arg(out.dir) == doctest::Approx(PI / 8));
  // ray anchors sit at |k| = R
  CHECK(std::abs(in.a) == doctest::Approx(R));
  CHECK(std::abs(out.a) == doctest::Approx(R));
  // interior finite segments stay at radius R (arc bridge)
  for (std::size_t i = 1; i + 1 < p.segments.size(); ++i) {
    CHECK(p.segments[i].kind == PathSegment::Finite);
    CHECK(std::abs(p.segments[i].a) == doctest::Approx(R).epsilon(1e-6));
    CHECK(std::abs(p.segments[i].b) == doctest::Approx(R).epsilon(1e-6));
  }
}

TEST_CASE("boundary contour for the second cubic sector") {
  Dispersion d({0, 0, 0, 1});
  double R = choose_truncation_radius(d);
  ComplexPath p = boundary_contour(d, 1, R, 0.5);
  const PathSegment& in = p.segments.front();
  const PathSegment& out = p.segments.back();
  // sector (2pi/3, pi), half-sector bisectors at 3pi/4 and 11pi/12;
  // this sector is traversed from the upper ray to the lower one
  CHECK(std::arg(in.dir) == doctest::Approx(11 * PI / 12));
  CHECK(std::arg(out.dir) == doctest::Approx(3 * PI / 4));
}

TEST_CASE("ivp contour indents above the origin") {
  ComplexPath p = ivp_contour(8.0, 0.25);
  REQUIRE(!p.segments.empty());
  bool has_indent = false;
  for (const auto& s : p.segments) {
    if (s.kind != PathSegment::Finite) continue;
    CHECK(s.a.imag() >= -1e-12);
    CHECK(s.b.imag() >= -1e-12);
    if (s.a.imag() > 1e-9 || s.b.imag() > 1e-9) has_indent = true;
    CHECK(std::abs(s.a) > 0.2);  // never touches the pole at the origin
  }
  CHECK(has_indent);
  CHECK(std::abs(p.segments.front().a - cx(-8.0, 0.0)) < 1e-9);
  CHECK(std::abs(p.segments.back().b - cx(8.0, 0.0)) < 1e-9);
}
