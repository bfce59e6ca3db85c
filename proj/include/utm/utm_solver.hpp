#pragma once

#include <functional>
#include <string>

#include "utm/piecewise_data.hpp"
#include "utm/special_functions.hpp"

namespace utm {

struct SolverOptions {
  QuadratureSettings quad;
  int ibp_depth = 1;   // spatial integration-by-parts depth d >= 1
  int time_order = 0;  // boundary-transform integration-by-parts order p >= 0
};

// Closed-form solvers for the three example problems.  All of them require
// x > 0 and 0 < t <= T: boundary and corner values are interior limits only.
cx solve_ls(const IBVPSpec& spec, double x, double t,
            const SolverOptions& opt = {});
cx solve_airy1(const IBVPSpec& spec, double x, double t,
               const SolverOptions& opt = {});
cx solve_airy2(const IBVPSpec& spec, double x, double t,
               const SolverOptions& opt = {});

// Canonical monomial problem omega(k) = w_n k^n with N(n) boundary data.
// Unknown boundary transforms are eliminated node-by-node on the contour
// using the symmetries nu(k) with Im nu < 0.
cx solve_general_monomial(const IBVPSpec& spec, double x, double t,
                          const SolverOptions& opt = {});

// Explicit special-function solution for omega = k^3 with the indicator
// initial datum chi_(x1,x2), step Dirichlet datum C1*chi_[0,t1) and constant
// Neumann datum C2.
cx disc_data_airy2(double x, double t, double x1, double x2, double t1,
                   cx C1, cx C2, const QuadratureSettings& settings = {});

struct FieldSample {
  double x = 0, t = 0;
  cx value = 0.0;
  double error_estimate = 0.0;
  bool ok = true;
  std::string error;
};

struct SolutionEvaluator {
  enum Method {
    ClosedFormLS,
    ClosedFormAiry1,
    ClosedFormAiry2,
    GeneralMonomial,
    DirectOracle,  // external evaluator supplied in `custom`
  };
  IBVPSpec spec;
  Method method = GeneralMonomial;
  SolverOptions options;
  std::function<cx(double, double)> custom;

  cx eval(double x, double t) const;  // throws on incompatible method/spec
};

// Deterministic, order-independent batch evaluation; per-sample failures are
// recorded in the sample, not thrown.
std::vector<FieldSample> evaluate_grid(const SolutionEvaluator& ev,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ts);

// Solve an s x s complex linear system in place (partial pivoting).
// Shared by the general solver and the verification harness.
std::vector<cx> solve_dense(std::vector<std::vector<cx>> A, std::vector<cx> b);

}  // namespace utm
