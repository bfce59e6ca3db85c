#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "utm/piecewise_data.hpp"

using namespace utm;

TEST_CASE("indicator data and piece lookup") {
  PiecewiseData q = PiecewiseData::indicator(1, 2);
  CHECK(q.value(0.5) == cx(0.0));
  CHECK(q.value(1.0) == cx(1.0));  // right continuous
  CHECK(q.value(1.9) == cx(1.0));
  CHECK(q.value(2.0) == cx(0.0));
  CHECK(q.piece_index(0.0) == 0);
  CHECK(q.piece_index(1.5) == 1);
  CHECK(q.piece_index(3.0) == 2);
  CHECK_FALSE(q.is_zero());
  CHECK(PiecewiseData::zero().is_zero());
}

TEST_CASE("piece differentiation and shifting") {
  // (1 + x) e^{-2x}
  Piece p = Piece::polyexp({1.0, 1.0}, 2.0);
  Piece dp = p.differentiated();
  for (double u : {0.0, 0.3, 1.1}) {
    cx want = (1.0 - 2.0 * (1.0 + u)) * std::exp(-2.0 * u);
    CHECK(std::abs(dp.local_value(u) - want) < 1e-14);
  }
  Piece sh = p.shifted(0.5);
  CHECK(std::abs(sh.local_value(0.0) - p.local_value(0.5)) < 1e-14);
}

TEST_CASE("half line transform of an exponential") {
  PiecewiseData q{{}, {Piece::polyexp({1.0}, 1.0)}, INF};
  for (cx k : {cx(0.7, 0.0), cx(1.0, -0.5), cx(-2.0, -1.0)}) {
    // int_0^inf e^{-ikx} e^{-x} dx = 1/(1 + ik)
    cx want = 1.0 / (1.0 + cx(0, 1) * k);
    CHECK(std::abs(half_line_ft(q, k) - want) < 1e-12);
  }
}

TEST_CASE("time transform of a constant") {
  PiecewiseData g = PiecewiseData::constant(1.0, 1.0);
  cx k(1.3, 0.4);
  double t = 0.8;
  cx want = (1.0 - std::exp(-cx(0, 1) * k * t)) / (cx(0, 1) * k);
  CHECK(std::abs(time_transform(g, k, t) - want) < 1e-12);
}

TEST_CASE("spatial integration by parts reconstructs the transform") {
  PiecewiseData q{{1.5},
                  {Piece::polynomial({1.0, -0.5}), Piece::polyexp({2.0}, 1.0)},
                  INF};
  for (int depth : {1, 2}) {
    IbpDecomposition dec = ibp_decompose(q, depth);
    CHECK(dec.depth == depth);
    REQUIRE(dec.jump_locations.size() == 1);
    CHECK(dec.jump_locations[0] == 1.5);
    for (cx k : {cx(1.0, -0.4), cx(-0.6, -1.2)})
      CHECK(std::abs(dec.reconstruct(k) - half_line_ft(q, k)) < 1e-10);
  }
}

TEST_CASE("time integration by parts reconstructs the transform") {
  // jump at t = 0.4: e^{-t} then 0
  PiecewiseData g{{0.4}, {Piece::polyexp({1.0}, 1.0), Piece::zero()}, 1.0};
  double t = 0.9;
  for (int order : {0, 1}) {
    GRemainder r = g_remainders(g, order, t);
    CHECK(r.order == order);
    REQUIRE(r.jump_times.size() == 1);
    for (cx mu : {cx(2.0, 0.3), cx(-1.0, 1.5)}) {
      cx direct = time_transform(g, -mu, t);  // int e^{i mu s} g(s) ds
      CHECK(std::abs(r.reconstruct(mu) - direct) < 1e-10);
    }
  }
}

TEST_CASE("boundary split telescopes back to the datum") {
  PiecewiseData g{{0.25, 0.6},
                  {Piece::polynomial({1.0}), Piece::polynomial({-0.5}),
                   Piece::polyexp({2.0}, 1.0)},
                  1.0};
  auto parts = split_boundary_at_jumps(g);
  REQUIRE(parts.size() == 3);
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.95}) {
    cx sum = 0.0;
    for (const auto& part : parts) sum += part.value(t);
    CHECK(std::abs(sum - g.value(t)) < 1e-13);
  }
  // each later element vanishes before its jump
  CHECK(std::abs(parts[1].value(0.1)) < 1e-14);
  CHECK(std::abs(parts[2].value(0.5)) < 1e-14);
}

TEST_CASE("spec validation") {
  Dispersion d({0, 0, 0, 1});
  PiecewiseData q0 = PiecewiseData::indicator(1, 2);
  IBVPSpec ok{d, q0, {PiecewiseData::zero(1.0), PiecewiseData::zero(1.0)}, 1.0};
  CHECK_NOTHROW(ok.validate());
  IBVPSpec wrong_count{d, q0, {PiecewiseData::zero(1.0)}, 1.0};
  CHECK_THROWS_AS(wrong_count.validate(), domain_error);
}

TEST_CASE("compatibility report flags the corner mismatch") {
  Dispersion d({0, 0, 1});
  // q_o(0) = 1 vs g_0(0) = 1: order zero satisfied
  PiecewiseData q0{{}, {Piece::polyexp({1.0}, 1.0)}, INF};
  PiecewiseData g0{{}, {Piece::polyexp({1.0}, 1.0)}, 1.0};
  auto rep = check_compatibility(IBVPSpec{d, q0, {g0}, 1.0}, 0);
  REQUIRE(!rep.empty());
  CHECK(rep[0].satisfied);

  PiecewiseData gbad = PiecewiseData::constant(-1.0, 1.0);
  auto rep2 = check_compatibility(IBVPSpec{d, q0, {gbad}, 1.0}, 0);
  CHECK_FALSE(rep2[0].satisfied);
}
