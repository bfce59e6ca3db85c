#pragma once

#include <vector>

#include "utm/common.hpp"
#include "utm/dispersion.hpp"

namespace utm {

struct PathSegment {
  enum Kind { Finite, Ray } kind;
  // Finite: a -> b.  Ray: the half line a + s*dir, s >= 0, |dir| = 1;
  // incoming = true means it is traversed from infinity toward a.
  cx a, b;
  cx dir;
  bool incoming = false;

  static PathSegment finite(cx from, cx to) { return {Finite, from, to, 0.0, false}; }
  static PathSegment ray_in(cx anchor, cx direction) {
    return {Ray, anchor, anchor, direction, true};
  }
  static PathSegment ray_out(cx anchor, cx direction) {
    return {Ray, anchor, anchor, direction, false};
  }
};

struct ComplexPath {
  std::vector<PathSegment> segments;
};

struct Sector {
  double theta_lo, theta_hi;
};

struct SectorDecomposition {
  std::vector<Sector> sectors;  // ordered by theta_lo, all within (0, pi)
};

// Upper-half-plane sectors where sin(n*theta + arg w_n) >= 0; count = N(n).
SectorDecomposition asymptotic_sectors(const Dispersion& d);

// R = 2 * max(1, moduli of omega' roots and symmetry branch points).
double choose_truncation_radius(const Dispersion& d);

// Oriented path homotopic to the boundary of D_j^+ (sector kept on the left):
// incoming ray at theta_lo + gamma*w/2, arc bridge at |k| = R, outgoing ray at
// theta_hi - gamma*w/2, where w is the sector width.  gamma in (0, 1/2].
ComplexPath boundary_contour(const Dispersion& d, int j, double R, double gamma = 0.5);

// Real axis left to right, semicircular indentation of radius r0 above the
// origin, so the pole at k = 0 lies below the path.
ComplexPath ivp_contour(double R, double r0);

}  // namespace utm
