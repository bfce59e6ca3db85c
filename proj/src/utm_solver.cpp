#include "utm/utm_solver.hpp"

#include <algorithm>
#include <cmath>

#include "utm/contours.hpp"

namespace utm {

namespace {

// i^r
cx ipow(int r) {
  static const cx tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return tab[((r % 4) + 4) % 4];
}

struct Acc {
  cx v = 0.0;
  double err = 0.0;
  void add(cx c, const SpecialValue& s) {
    v += c * s.value;
    err += std::abs(c) * s.error_estimate;
  }
};

SpecialValue sfc(const Dispersion& d, int m, int comp, cx xi, double t,
                 const QuadratureSettings& qs) {
  return special_eval_shifted({d, m, SpecialFnKey::Component, comp}, xi, t, qs);
}

SpecialValue sfi(const Dispersion& d, int m, cx xi, double t,
                 const QuadratureSettings& qs) {
  return special_eval_shifted({d, m, SpecialFnKey::IVP, 0}, xi, t, qs);
}

// int f(y) K(y) dy over [lo, hi] (hi may be INF), split at the breakpoints of
// f; the unbounded tail is block-marched until its contributions drop below
// the tolerance.
cx integrate_weighted(const PiecewiseData& f, double lo, double hi,
                      const std::function<cx(double)>& K,
                      const QuadratureSettings& qs, double* err_out) {
  QuadratureSettings s = qs;
  s.base_nodes = 17;
  s.max_doublings = 4;
  Integrand g = [&](cx z) {
    double y = z.real();
    return f.value(y) * K(y);
  };
  std::vector<double> edges{lo};
  for (double b : f.breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  double last = std::isinf(hi) ? edges.back() : hi;
  if (!std::isinf(hi)) edges.push_back(hi);

  cx total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto r = integrate_segment(g, edges[i], edges[i + 1], s);
    total += r.value;
    err += r.error_estimate;
  }
  if (std::isinf(hi)) {
    double a = last, len = 1.0;
    int quiet = 0;
    for (int blk = 0; blk < 64 && quiet < 2; ++blk) {
      // cheap data-only bound first: once f itself is negligible there is no
      // point sampling the (possibly expensive) kernel far out
      double fmax = 0.0;
      for (int j = 0; j <= 8; ++j)
        fmax = std::max(fmax, std::abs(f.value(a + len * j / 8.0)));
      if (fmax * len < qs.tolerance / 8) {
        ++quiet;
      } else {
        auto r = integrate_segment(g, a, a + len, s);
        total += r.value;
        err += r.error_estimate;
        if (std::abs(r.value) < qs.tolerance / 8) ++quiet; else quiet = 0;
      }
      a += len;
      len *= 2;
    }
    err += qs.tolerance / 8;
  }
  if (err_out) *err_out += err;
  return total;
}

// One additive piece of a boundary-integral formula on component `comp`:
// gamma * qhat_o(nu k) terms and beta * k^e * g~_j(-omega(k), t) terms.
struct QhatTerm { cx gamma; cx nu; };
struct GTerm { cx beta; int e; int datum; };
struct CompFormula {
  int comp;
  std::vector<QhatTerm> qhat;
  std::vector<GTerm> g;
};

// The Ehrenpreis real-line integral of qhat_o, routed through the C contour
// after integration by parts at depth d.
void real_line_part(const IBVPSpec& spec, double x, double t,
                    const SolverOptions& opt, Acc& acc) {
  if (spec.initial.is_zero()) return;
  const Dispersion& d = spec.dispersion;
  auto ibp = ibp_decompose(spec.initial, opt.ibp_depth);
  for (int i = 0; i < ibp.depth; ++i) {
    if (ibp.corner[i] != 0.0)
      acc.add(ibp.corner[i], sfi(d, i, x, t, opt.quad));
    for (std::size_t m = 0; m < ibp.jump_locations.size(); ++m)
      if (ibp.jumps[i][m] != 0.0)
        acc.add(ibp.jumps[i][m],
                sfi(d, i, x - ibp.jump_locations[m], t, opt.quad));
  }
  if (!ibp.remainder.is_zero()) {
    int mker = ibp.depth - 1;
    auto K = [&](double y) { return sfi(d, mker, x - y, t, opt.quad).value; };
    acc.v += integrate_weighted(ibp.remainder, 0.0, INF, K, opt.quad, &acc.err);
  }
}

// Boundary-contour part: for each formula, qhat_o(nu k) is expanded with the
// same spatial integration by parts (the k -> nu k substitution pulls out
// powers of nu), and each g~ term is expanded in time.  Terms carrying
// e^{i omega t} integrate to zero over the component contour (the contour
// closes in the upper half plane for x > 0) and are dropped analytically.
void contour_part(const IBVPSpec& spec, double x, double t,
                  const std::vector<CompFormula>& formulas,
                  const SolverOptions& opt, Acc& acc) {
  const Dispersion& disp = spec.dispersion;
  int n = disp.degree();
  double w = disp.leading();

  IbpDecomposition ibp;
  bool have_ibp = false;
  if (!spec.initial.is_zero()) {
    ibp = ibp_decompose(spec.initial, opt.ibp_depth);
    have_ibp = true;
  }

  for (const auto& f : formulas) {
    if (have_ibp) {
      for (const auto& qt : f.qhat) {
        for (int i = 0; i < ibp.depth; ++i) {
          cx c = qt.gamma * std::pow(qt.nu, -(i + 1));
          if (ibp.corner[i] != 0.0)
            acc.add(c * ibp.corner[i], sfc(disp, i, f.comp, x, t, opt.quad));
          for (std::size_t m = 0; m < ibp.jump_locations.size(); ++m)
            if (ibp.jumps[i][m] != 0.0)
              acc.add(c * ibp.jumps[i][m],
                      sfc(disp, i, f.comp, x - qt.nu * ibp.jump_locations[m],
                          t, opt.quad));
        }
        if (!ibp.remainder.is_zero()) {
          cx c = qt.gamma * std::pow(qt.nu, -ibp.depth);
          int mker = ibp.depth - 1;
          auto K = [&](double y) {
            return sfc(disp, mker, f.comp, x - qt.nu * y, t, opt.quad).value;
          };
          acc.v += c * integrate_weighted(ibp.remainder, 0.0, INF, K,
                                          opt.quad, &acc.err);
        }
      }
    }
    for (const auto& gt : f.g) {
      const PiecewiseData& g = spec.boundary.at(gt.datum);
      if (g.is_zero()) continue;
      auto gr = g_remainders(g, opt.time_order, t);
      for (int i = 0; i <= gr.order; ++i) {
        int mi = n * (i + 1) - gt.e - 1;
        cx c = gt.beta * ipow(mi + 1) / std::pow(cx(0, w), i + 1);
        double sgn = (i % 2 == 0) ? -1.0 : 1.0;  // -(-1)^i
        if (gr.at0[i] != 0.0)
          acc.add(sgn * c * gr.at0[i], sfc(disp, mi, f.comp, x, t, opt.quad));
        for (std::size_t m = 0; m < gr.jump_times.size(); ++m)
          if (gr.jumps[i][m] != 0.0)
            acc.add(sgn * c * gr.jumps[i][m],
                    sfc(disp, mi, f.comp, x, t - gr.jump_times[m], opt.quad));
      }
      if (!gr.derivative.is_zero()) {
        int p = gr.order;
        int mp = n * (p + 1) - gt.e - 1;
        cx c = gt.beta * ipow(mp + 1) / std::pow(cx(0, w), p + 1);
        double sgn = (p % 2 == 0) ? -1.0 : 1.0;  // (-1)^{p+1}
        auto K = [&](double s) {
          return sfc(disp, mp, f.comp, x, t - s, opt.quad).value;
        };
        acc.v += sgn * c *
                 integrate_weighted(gr.derivative, 0.0, t, K, opt.quad,
                                    &acc.err);
      }
    }
  }
}

cx assemble(const IBVPSpec& spec, double x, double t,
            const std::vector<CompFormula>& formulas, const SolverOptions& opt,
            double* err_out = nullptr) {
  spec.validate();
  if (!(x > 0))
    throw domain_error("solver: x = 0 is only defined as an interior limit");
  if (!(t > 0) || t > spec.T)
    throw domain_error("solver: need 0 < t <= T");
  Acc acc;
  real_line_part(spec, x, t, opt, acc);
  contour_part(spec, x, t, formulas, opt, acc);
  if (err_out) *err_out = acc.err;
  return acc.v;
}

void require_dispersion(const IBVPSpec& spec, std::vector<double> coeffs,
                        const char* who) {
  if (spec.dispersion.coeffs() != coeffs)
    throw domain_error(std::string(who) + ": dispersion mismatch");
}

}  // namespace

cx solve_ls(const IBVPSpec& spec, double x, double t,
            const SolverOptions& opt) {
  require_dispersion(spec, {0, 0, 1}, "solve_ls");
  std::vector<CompFormula> f{{0, {{-1.0, -1.0}}, {{2.0, 1, 0}}}};
  return assemble(spec, x, t, f, opt);
}

cx solve_airy1(const IBVPSpec& spec, double x, double t,
               const SolverOptions& opt) {
  require_dispersion(spec, {0, 0, 0, -1}, "solve_airy1");
  cx a = std::polar(1.0, 2 * PI / 3);
  std::vector<CompFormula> f{{0, {{a, a}, {a * a, a * a}}, {{-3.0, 2, 0}}}};
  return assemble(spec, x, t, f, opt);
}

cx solve_airy2(const IBVPSpec& spec, double x, double t,
               const SolverOptions& opt) {
  require_dispersion(spec, {0, 0, 0, 1}, "solve_airy2");
  cx a = std::polar(1.0, 2 * PI / 3);
  cx i{0, 1};
  // component 0 borders the positive real axis and pairs with alpha^2 k;
  // component 1 pairs with alpha k.
  std::vector<CompFormula> f{
      {0, {{-1.0, a * a}}, {{1.0 - a, 2, 0}, {i * (a * a - 1.0), 1, 1}}},
      {1, {{-1.0, a}}, {{1.0 - a * a, 2, 0}, {i * (a - 1.0), 1, 1}}},
  };
  return assemble(spec, x, t, f, opt);
}

std::vector<cx> solve_dense(std::vector<std::vector<cx>> A, std::vector<cx> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-300)
      throw numerical_error("solve_dense: singular system");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      cx m = A[r][c] / A[c][c];
      for (std::size_t cc = c; cc < n; ++cc) A[r][cc] -= m * A[c][cc];
      b[r] -= m * b[c];
    }
  }
  std::vector<cx> x(n);
  for (std::size_t r = n; r-- > 0;) {
    cx s = b[r];
    for (std::size_t cc = r + 1; cc < n; ++cc) s -= A[r][cc] * x[cc];
    x[r] = s / A[r][r];
  }
  return x;
}

cx solve_general_monomial(const IBVPSpec& spec, double x, double t,
                          const SolverOptions& opt) {
  const Dispersion& d = spec.dispersion;
  if (!d.is_monomial())
    throw domain_error("solve_general_monomial: monomial dispersion required");
  int n = d.degree();
  double w = d.leading();
  int N = num_boundary_conditions(d);
  if ((int)spec.boundary.size() != N)
    throw domain_error("solve_general_monomial: boundary data count != N(n)");
  cx alpha = std::polar(1.0, 2 * PI / n);
  auto sectors = asymptotic_sectors(d).sectors;

  // Per component, eliminate the unspecified transforms with the symmetries
  // nu = alpha^m k that map the sector into the lower half plane.  With the
  // scaling X_u = k^{n-1-u} g~_u the elimination matrix is constant along the
  // contour, so the eliminated integrand collapses to constant-coefficient
  // combinations of qhat_o(alpha^m k) and k^{n-1-j} g~_j: the same shape as
  // the closed-form representations, which the shared assembler evaluates.
  std::vector<CompFormula> formulas;
  for (int comp = 0; comp < N; ++comp) {
    std::vector<int> ms;
    for (int m = 1; m < n; ++m) {
      bool in = true;
      for (double frac : {0.5, 0.125, 0.875}) {
        double th = sectors[comp].theta_lo +
                    frac * (sectors[comp].theta_hi - sectors[comp].theta_lo);
        cx nu = std::pow(alpha, m) * std::polar(1.0, th);
        if (!(nu.imag() < -1e-12)) in = false;
      }
      if (in) ms.push_back(m);
    }
    if ((int)ms.size() != n - N)
      throw numerical_error(
          "solve_general_monomial: symmetry count mismatch on component " +
          std::to_string(comp));

    std::size_t u0 = N, nu = n - N;
    std::vector<std::vector<cx>> B(nu, std::vector<cx>(nu));
    for (std::size_t s = 0; s < nu; ++s)
      for (std::size_t u = 0; u < nu; ++u) {
        int j = int(u0 + u);
        B[s][u] = w * ipow(-j) * std::pow(alpha, ms[s] * (n - 1 - j));
      }
    // h_s = sum_u w (-i)^u (B^{-1})_{u,s}: solve B^T h = (w(-i)^{u})_u
    std::vector<std::vector<cx>> BT(nu, std::vector<cx>(nu));
    for (std::size_t s = 0; s < nu; ++s)
      for (std::size_t u = 0; u < nu; ++u) BT[u][s] = B[s][u];
    std::vector<cx> rhs(nu);
    for (std::size_t u = 0; u < nu; ++u) rhs[u] = w * ipow(-int(u0 + u));
    std::vector<cx> h = solve_dense(BT, rhs);

    CompFormula f;
    f.comp = comp;
    for (std::size_t s = 0; s < nu; ++s)
      f.qhat.push_back({-h[s], std::pow(alpha, ms[s])});
    for (int j = 0; j < N; ++j) {
      cx beta = w * ipow(-j);
      cx corr = 0.0;
      for (std::size_t s = 0; s < nu; ++s)
        corr += h[s] * std::pow(alpha, ms[s] * (n - 1 - j));
      beta *= (1.0 - corr);
      f.g.push_back({beta, n - 1 - j, j});
    }
    formulas.push_back(std::move(f));
  }
  return assemble(spec, x, t, formulas, opt);
}

cx disc_data_airy2(double x, double t, double x1, double x2, double t1,
                   cx C1, cx C2, const QuadratureSettings& settings) {
  if (!(0 < x1 && x1 < x2) || !(t1 > 0))
    throw domain_error("disc_data_airy2: need 0 < x1 < x2 and t1 > 0");
  Dispersion d({0, 0, 0, 1});
  cx a = std::polar(1.0, 2 * PI / 3);
  auto I = [&](int m, int comp, cx xi, double tt) {
    return special_eval_shifted({d, m, SpecialFnKey::Component, comp}, xi, tt,
                                settings).value;
  };
  // the two components at the real shifted argument x - xj are combined into
  // one IVP-contour evaluation: for x < xj each component alone is
  // exponentially large (Bi-like) and only the sum stays bounded
  auto Iivp = [&](int m, cx xi, double tt) {
    return special_eval_shifted({d, m, SpecialFnKey::IVP, 0}, xi, tt,
                                settings).value;
  };
  cx q = 0.0;
  for (auto [xj, sgn] : {std::pair{x1, 1.0}, std::pair{x2, -1.0}}) {
    q += sgn * (Iivp(0, x - xj, t)
                - a * a * I(0, 1, x - xj * a, t)
                - a * I(0, 0, x - xj * a * a, t));
  }
  q += C1 * ((a * a - 1.0) * I(0, 1, x, t) + (a - 1.0) * I(0, 0, x, t));
  q -= C1 * ((a * a - 1.0) * I(0, 1, x, t - t1) + (a - 1.0) * I(0, 0, x, t - t1));
  q += C2 * ((a * a - 1.0) * I(1, 0, x, t) + (a - 1.0) * I(1, 1, x, t));
  return q;
}

cx SolutionEvaluator::eval(double x, double t) const {
  switch (method) {
    case ClosedFormLS:    return solve_ls(spec, x, t, options);
    case ClosedFormAiry1: return solve_airy1(spec, x, t, options);
    case ClosedFormAiry2: return solve_airy2(spec, x, t, options);
    case GeneralMonomial: return solve_general_monomial(spec, x, t, options);
    case DirectOracle:
      if (!custom) throw domain_error("evaluator: no oracle attached");
      return custom(x, t);
  }
  throw domain_error("evaluator: unknown method");
}

std::vector<FieldSample> evaluate_grid(const SolutionEvaluator& ev,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ts) {
  std::vector<FieldSample> out;
  out.reserve(xs.size() * ts.size());
  for (double t : ts)
    for (double x : xs) {
      FieldSample s;
      s.x = x;
      s.t = t;
      try {
        s.value = ev.eval(x, t);
      } catch (const std::exception& e) {
        s.ok = false;
        s.error = e.what();
      }
      out.push_back(std::move(s));
    }
  return out;
}

}  // namespace utm
