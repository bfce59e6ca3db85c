#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/local_expansions.hpp"
#include "utm/utm_solver.hpp"

using namespace utm;

TEST_CASE("symbolic ring arithmetic") {
  Sym one = Sym::integer(1);
  Sym al = Sym::alpha_pow(1);
  // alpha^2 + alpha + 1 = 0
  Sym zero = Sym::alpha_pow(2) + al + one;
  CHECK(zero.is_zero());
  CHECK(Sym::alpha_pow(3) == one);
  CHECK(Sym::i_pow(4) == one);
  CHECK((Sym::i_pow(1) * Sym::i_pow(1)) == Sym::integer(-1));
  cx a = std::polar(1.0, 2 * PI / 3);
  CHECK(std::abs((al * al).numeric() - a * a) < 1e-14);
}

TEST_CASE("local corner solution satisfies the wall identity") {
  Expansion e = qloc(QlocExample::LS, CornerData{1.0, {}, -1.0, {}});
  for (double t : {0.05, 0.008})
    CHECK(std::abs(e.eval(1e-8, t) + 1.0) < 1e-6);
  // far from the corner the kernels die out (algebraically, like
  // sqrt(t)/x for this equation) and q_o(0) remains
  CHECK(std::abs(e.eval(100.0, 1e-5) - 1.0) < 2e-4);
}

TEST_CASE("airy corner solutions satisfy the wall identities") {
  Expansion e1 = qloc(QlocExample::Airy1, CornerData{1.0, {}, -1.0, {}});
  CHECK(std::abs(e1.eval(1e-8, 0.05) + 1.0) < 1e-6);
  Expansion e2 = qloc(QlocExample::Airy2First, CornerData{1.0, -1.0, -1.0, 0.0});
  CHECK(std::abs(e2.eval(1e-8, 0.01) + 1.0) < 1e-5);
}

TEST_CASE("missing corner data is rejected") {
  CHECK_THROWS_AS(qloc(QlocExample::LS, CornerData{}), domain_error);
  // Airy 2 needs the first-order corner values too
  CornerData partial;
  partial.qo0 = 1.0;
  partial.g00 = -1.0;
  CHECK_THROWS_AS(qloc(QlocExample::Airy2First, partial), domain_error);
}

TEST_CASE("interior jump expansion matches the solver near the jump") {
  IBVPSpec spec{Dispersion({0, 0, 1}), PiecewiseData::indicator(1, 2),
                {PiecewiseData::zero(1.0)}, 1.0};
  Expansion e = expansion_zero_bc(spec, 1.5, 1);
  // the neglected pieces shrink slowly (the jumps half a unit away radiate
  // oscillatory tails), so check a loose bound that tightens with t
  CHECK(std::abs(solve_ls(spec, 1.5, 1e-4) - e.eval(1.5, 1e-4)) < 5e-3);
  CHECK(std::abs(solve_ls(spec, 1.5, 1e-5) - e.eval(1.5, 1e-5)) < 2e-3);
  // the expansion freezes the t -> 0 limit of the datum at its center
  CHECK(std::abs(e.eval(1.5, 1e-12) - 1.0) < 1e-6);
}

TEST_CASE("pure boundary expansion reproduces the datum at the wall") {
  PiecewiseData g0{{}, {Piece::polyexp({1.0}, 1.0)}, 1.0};
  {
    IBVPSpec spec{Dispersion({0, 0, 1}), PiecewiseData::zero(), {g0}, 1.0};
    Expansion e = expansion_zero_ic(spec, 0.0, 0.5);
    CHECK(std::abs(e.eval(0.0, 0.5) - std::exp(-0.5)) < 1e-6);
  }
  {
    IBVPSpec spec{Dispersion({0, 0, 0, 1}), PiecewiseData::zero(),
                  {g0, PiecewiseData::zero(1.0)}, 1.0};
    Expansion e = expansion_zero_ic(spec, 0.0, 0.5);
    CHECK(std::abs(e.eval(0.0, 0.5) - std::exp(-0.5)) < 1e-6);
  }
}

TEST_CASE("compatible corner data cancels every kernel coefficient") {
  PiecewiseData q0{{}, {Piece::polyexp({1.0}, 1.0)}, INF};
  PiecewiseData g0{{}, {Piece::polyexp({1.0}, 1.0)}, 1.0};
  PiecewiseData g1{{}, {Piece::polyexp({-1.0}, 1.0)}, 1.0};
  IBVPSpec spec{Dispersion({0, 0, 0, 1}), q0, {g0, g1}, 1.0};
  CancelResult r = cancel_compatible(spec, 1);
  CHECK(r.all_cancelled);
  CHECK(r.surviving.terms.empty());
  for (const auto& term : r.table) CHECK(term.cancels);
}

TEST_CASE("incompatible corner data leaves surviving terms") {
  PiecewiseData q0{{}, {Piece::polyexp({1.0}, 1.0)}, INF};
  PiecewiseData gbad = PiecewiseData::constant(-1.0, 1.0);
  IBVPSpec spec{Dispersion({0, 0, 1}), q0, {gbad}, 1.0};
  CancelResult r = cancel_compatible(spec, 0);
  CHECK_FALSE(r.all_cancelled);
  CHECK(!r.surviving.terms.empty());
}

TEST_CASE("residual fit helpers") {
  CHECK(residual_exponent(0) == doctest::Approx(0.5));
  CHECK(residual_exponent(1) == doctest::Approx(1.5));
  // synthetic data err = 2 t^{0.4}
  std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4}, errs;
  for (double t : ts) errs.push_back(2.0 * std::pow(t, 0.4));
  RateFit f = residual_order_fit(ts, errs);
  CHECK(f.slope == doctest::Approx(0.4).epsilon(1e-6));
  CHECK_FALSE(f.saturated);
}
