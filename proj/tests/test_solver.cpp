#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/oracles.hpp"
#include "utm/utm_solver.hpp"

using namespace utm;

namespace {
PiecewiseData expdecay(double horizon) {
  return PiecewiseData{{}, {Piece::polyexp({1.0}, 1.0)}, horizon};
}
}  // namespace

TEST_CASE("zero data gives the zero solution") {
  IBVPSpec spec{Dispersion({0, 0, 1}), PiecewiseData::zero(),
                {PiecewiseData::zero(1.0)}, 1.0};
  CHECK(std::abs(solve_ls(spec, 0.7, 0.3)) < 1e-12);
  IBVPSpec spec3{Dispersion({0, 0, 0, 1}), PiecewiseData::zero(),
                 {PiecewiseData::zero(1.0), PiecewiseData::zero(1.0)}, 1.0};
  CHECK(std::abs(solve_general_monomial(spec3, 0.7, 0.3)) < 1e-12);
}

TEST_CASE("schrodinger solution matches the method of images") {
  PiecewiseData q0 = PiecewiseData::indicator(1, 2);
  IBVPSpec spec{Dispersion({0, 0, 1}), q0, {PiecewiseData::zero(1.0)}, 1.0};
  for (double t : {0.15, 0.6})
    for (double x : {0.4, 1.3, 2.6})
      CHECK(std::abs(solve_ls(spec, x, t) - images_ls(q0, x, t)) < 1e-8);
}

TEST_CASE("general solver agrees with the closed forms") {
  {
    IBVPSpec spec{Dispersion({0, 0, 1}), expdecay(INF), {expdecay(1.0)}, 1.0};
    for (double x : {0.3, 1.7})
      CHECK(std::abs(solve_ls(spec, x, 0.4) -
                     solve_general_monomial(spec, x, 0.4)) < 1e-9);
  }
  {
    IBVPSpec spec{Dispersion({0, 0, 0, -1}), expdecay(INF), {expdecay(1.0)},
                  1.0};
    for (double x : {0.3, 1.7})
      CHECK(std::abs(solve_airy1(spec, x, 0.4) -
                     solve_general_monomial(spec, x, 0.4)) < 1e-9);
  }
  {
    IBVPSpec spec{Dispersion({0, 0, 0, 1}), expdecay(INF),
                  {expdecay(1.0), PiecewiseData::zero(1.0)}, 1.0};
    for (double x : {0.3, 1.7})
      CHECK(std::abs(solve_airy2(spec, x, 0.4) -
                     solve_general_monomial(spec, x, 0.4)) < 1e-9);
  }
}

TEST_CASE("boundary datum is recovered near the wall") {
  IBVPSpec spec{Dispersion({0, 0, 1}), PiecewiseData::zero(), {expdecay(1.0)},
                1.0};
  double t = 0.5;
  CHECK(std::abs(solve_ls(spec, 1e-3, t) - std::exp(-t)) < 1e-2);
}

TEST_CASE("disc data closed form matches the general solver") {
  PiecewiseData g0{{0.25}, {Piece::polynomial({1.0}), Piece::zero()}, 1.0};
  PiecewiseData g1 = PiecewiseData::constant(-1.0, 1.0);
  IBVPSpec spec{Dispersion({0, 0, 0, 1}), PiecewiseData::indicator(1, 2),
                {g0, g1}, 1.0};
  for (double t : {0.1, 0.35})
    for (double x : {0.4, 1.2, 2.5})
      CHECK(std::abs(disc_data_airy2(x, t, 1.0, 2.0, 0.25, 1.0, -1.0) -
                     solve_general_monomial(spec, x, t)) < 1e-10);
}

TEST_CASE("disc data profile survives very small times") {
  // tends to the initial indicator pointwise as t -> 0
  CHECK(std::abs(disc_data_airy2(1.5, 1e-6, 1, 2, 0.25, 1.0, -1.0) - 1.0) < 0.05);
  CHECK(std::abs(disc_data_airy2(4.0, 1e-6, 1, 2, 0.25, 1.0, -1.0)) < 0.05);
}

TEST_CASE("grid evaluation records failures instead of throwing") {
  SolutionEvaluator ev{IBVPSpec{Dispersion({0, 0, 1}), PiecewiseData::zero(),
                                {PiecewiseData::zero(1.0)}, 1.0},
                       SolutionEvaluator::DirectOracle,
                       {},
                       [](double x, double) -> cx {
                         if (x > 1.0) throw numerical_error("boom");
                         return cx(x, 0.0);
                       }};
  auto samples = evaluate_grid(ev, {0.5, 1.5}, {0.1});
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].ok);
  CHECK(samples[0].value == cx(0.5, 0.0));
  CHECK_FALSE(samples[1].ok);
  CHECK(samples[1].error == "boom");
}

TEST_CASE("evaluator without an oracle throws") {
  SolutionEvaluator ev{IBVPSpec{Dispersion({0, 0, 1}), PiecewiseData::zero(),
                                {PiecewiseData::zero(1.0)}, 1.0},
                       SolutionEvaluator::DirectOracle,
                       {},
                       {}};
  CHECK_THROWS_AS(ev.eval(0.5, 0.5), domain_error);
}

TEST_CASE("dense solve on a known system") {
  std::vector<std::vector<cx>> A{{cx(2, 0), cx(0, 1)}, {cx(1, 0), cx(1, 0)}};
  std::vector<cx> b{cx(3, 1), cx(2, 0)};
  auto x = solve_dense(A, b);
  REQUIRE(x.size() == 2);
  CHECK(std::abs(2.0 * x[0] + cx(0, 1) * x[1] - cx(3, 1)) < 1e-12);
  CHECK(std::abs(x[0] + x[1] - cx(2, 0)) < 1e-12);
}
