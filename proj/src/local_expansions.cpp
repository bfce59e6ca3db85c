#include "utm/local_expansions.hpp"

#include <cmath>
#include <sstream>

namespace utm {

namespace {

const cx ALPHA = std::exp(cx(0.0, 2.0 * PI / 3.0));

long long mod_ll(long long e, long long m) {
  long long r = e % m;
  return r < 0 ? r + m : r;
}

enum class Family { LS, Airy1, Airy2 };

Family classify(const Dispersion& d) {
  const auto& c = d.coeffs();
  if (c == std::vector<double>{0, 0, 1}) return Family::LS;
  if (c == std::vector<double>{0, 0, 0, -1}) return Family::Airy1;
  if (c == std::vector<double>{0, 0, 0, 1}) return Family::Airy2;
  throw domain_error("local expansions cover only the three canonical dispersions");
}

double factorial(int m) {
  double f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// I_{omega,m,IVP}(xi, 0) = -xi^m/m! for xi < 0, zero for xi > 0.
cx ivp_at_time_zero(int m, double xi) {
  if (xi >= 0) return 0.0;
  return -std::pow(xi, m) / factorial(m);
}

SpecialFnKey comp_key(const Dispersion& d, int m, int j) {
  return SpecialFnKey{d, m, SpecialFnKey::Component, j};
}

SpecialFnKey ivp_key(const Dispersion& d, int m) {
  return SpecialFnKey{d, m, SpecialFnKey::IVP, 0};
}

// Adaptive Simpson for a smooth complex integrand on [a, b].
cx simp_rec(const std::function<cx(double)>& f, double a, double b, cx fa,
            cx fm, cx fb, cx whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  cx fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
  cx left = (b - a) / 12.0 * (fa + 4.0 * fl + fm);
  cx right = (b - a) / 12.0 * (fm + 4.0 * fr + fb);
  cx sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) < 15.0 * tol) {
    return sum + (sum - whole) / 15.0;
  }
  return simp_rec(f, a, m, fa, fl, fm, left, tol / 2, depth - 1) +
         simp_rec(f, m, b, fm, fr, fb, right, tol / 2, depth - 1);
}

cx simpson(const std::function<cx(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  cx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simp_rec(f, a, b, fa, fm, fb, whole, tol, 18);
}

// Convolution of a boundary-derivative history against a kernel trace:
//   int_0^tau f(sigma) I_{omega,m,comp}(s, tau - sigma) dsigma.
// At s = 0 the kernel trace has the closed scaling t^{m/n} I(0,1), which
// avoids evaluating the contour integral at vanishing time.
cx history_integral(const Dispersion& d, int m, int comp, double s, double tau,
                    const PiecewiseData& f, double tol) {
  if (tau <= 0 || f.is_zero()) return 0.0;
  SpecialFnKey key = comp_key(d, m, comp);
  QuadratureSettings qs;
  qs.tolerance = tol * 1e-2;
  int n = d.degree();
  cx base = 0.0;
  bool at_wall = (s == 0.0);
  if (at_wall) base = special_eval(key, 0.0, 1.0, qs).value;
  auto kernel = [&](double tp) -> cx {
    if (tp <= 0) return 0.0;
    if (at_wall) return base * std::pow(tp, double(m) / n);
    if (tp < 1e-13) return 0.0;
    return special_eval(key, s, tp, qs).value;
  };
  auto integrand = [&](double sigma) { return f.value(sigma) * kernel(tau - sigma); };
  // split at the data's breakpoints below tau
  std::vector<double> edges{0.0};
  for (double b : f.breakpoints)
    if (b > 0 && b < tau) edges.push_back(b);
  edges.push_back(tau);
  cx total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += simpson(integrand, edges[i], edges[i + 1], tol);
  return total;
}

void require_zero_boundary(const IBVPSpec& spec) {
  for (const auto& g : spec.boundary)
    if (!g.is_zero())
      throw domain_error("expansion requires zero boundary data");
}

void require_zero_initial(const IBVPSpec& spec) {
  if (!spec.initial.is_zero())
    throw domain_error("expansion requires zero initial data");
}

bool has_nan(cx v) { return std::isnan(v.real()) || std::isnan(v.imag()); }

// Per-family weight tables for the corner algebra.  For each kernel
// I_{omega,i,comp} the combined corner expansion carries
//   qo_w * q_o^{(i)}(0) + g_w * g_{g_index}^{(g_order)}(0),
// and compatibility reads g^{(g_order)}(0) = mu * q_o^{(i)}(0).
CornerTermSym corner_sym(Family fam, int i, int comp) {
  CornerTermSym c;
  c.i = i;
  c.comp = comp;
  switch (fam) {
    case Family::LS:
      // even orders pair with g_0^{(i/2)}; odd orders cancel unconditionally
      c.qo_w = Sym::integer(1) + Sym::i_pow(2 * i);
      if (i % 2 == 0) {
        int j = i / 2;
        c.g_w = Sym::integer(-2) * Sym::i_pow(3 * j);
        c.g_index = 0;
        c.g_order = j;
        c.mu = Sym::i_pow(j);
      }
      break;
    case Family::Airy1:
      c.qo_w = Sym::integer(1) + Sym::alpha_pow(-i) + Sym::alpha_pow(-2 * i);
      if (i % 3 == 0) {
        int j = i / 3;
        c.g_w = Sym::integer(-3) * Sym::i_pow(2 * j);
        c.g_index = 0;
        c.g_order = j;
        c.mu = Sym::i_pow(2 * j);
      }
      break;
    case Family::Airy2:
      if (comp == 0) {
        c.qo_w = Sym::integer(1) - Sym::alpha_pow(-2 - 2 * i);
      } else {
        c.qo_w = Sym::integer(1) - Sym::alpha_pow(-1 - i);
      }
      if (i % 3 != 2) {
        c.g_index = i % 3;  // 0 -> g_0, 1 -> g_1
        c.g_order = i / 3;
        c.mu = Sym::integer(1);
        bool flip = (c.g_index == 1) ^ (comp == 1);
        c.g_w = Sym::alpha_pow(flip ? -1 : -2) - Sym::integer(1);
      }
      break;
  }
  Sym under = (c.g_index >= 0) ? c.qo_w + c.g_w * c.mu : c.qo_w;
  c.cancels = under.is_zero();
  return c;
}

}  // namespace

cx Sym::numeric() const {
  return cx(double(ar), double(ai)) + cx(double(br), double(bi)) * ALPHA;
}

Sym Sym::alpha_pow(long long e) {
  switch (mod_ll(e, 3)) {
    case 0: return {1, 0, 0, 0};
    case 1: return {0, 0, 1, 0};
    default: return {-1, 0, -1, 0};  // alpha^2 = -1 - alpha
  }
}

Sym Sym::i_pow(long long e) {
  switch (mod_ll(e, 4)) {
    case 0: return {1, 0, 0, 0};
    case 1: return {0, 1, 0, 0};
    case 2: return {-1, 0, 0, 0};
    default: return {0, -1, 0, 0};
  }
}

Sym operator+(const Sym& x, const Sym& y) {
  return {x.ar + y.ar, x.ai + y.ai, x.br + y.br, x.bi + y.bi};
}

Sym operator-(const Sym& x, const Sym& y) {
  return {x.ar - y.ar, x.ai - y.ai, x.br - y.br, x.bi - y.bi};
}

Sym operator*(const Sym& x, const Sym& y) {
  // (a1 + b1 A)(a2 + b2 A) with A^2 = -1 - A, Gaussian-integer a, b
  auto mulg = [](long long xr, long long xi, long long yr, long long yi) {
    return std::pair<long long, long long>{xr * yr - xi * yi, xr * yi + xi * yr};
  };
  auto [aar, aai] = mulg(x.ar, x.ai, y.ar, y.ai);
  auto [bbr, bbi] = mulg(x.br, x.bi, y.br, y.bi);
  auto [abr, abi] = mulg(x.ar, x.ai, y.br, y.bi);
  auto [bar, bai] = mulg(x.br, x.bi, y.ar, y.ai);
  return {aar - bbr, aai - bbi, abr + bar - bbr, abi + bai - bbi};
}

bool operator==(const Sym& x, const Sym& y) { return (x - y).is_zero(); }

cx Expansion::eval(double x, double t, const QuadratureSettings& qs) const {
  cx total = constant + linear * (x - s);
  for (const auto& term : terms) {
    if (std::abs(term.coeff) == 0.0) continue;
    double xi = x - term.sx;
    double dt = t - term.st;
    if (dt < 0) continue;
    if (dt == 0) {
      if (term.key.selector == SpecialFnKey::IVP)
        total += term.coeff * ivp_at_time_zero(term.key.m, xi);
      continue;  // components vanish as t -> 0+ for xi > 0
    }
    total += term.coeff * special_eval(term.key, xi, dt, qs).value;
  }
  return total;
}

std::string describe(const Expansion& e) {
  std::ostringstream os;
  os << "center (" << e.s << ", " << e.tau << "), error O(dx^" << e.px
     << " + dt^" << e.pt << ")\n";
  for (const auto& t : e.terms) {
    os << "  + (" << t.coeff.real() << (t.coeff.imag() < 0 ? " - " : " + ")
       << std::abs(t.coeff.imag()) << "i) * I[m=" << t.key.m << ",";
    if (t.key.selector == SpecialFnKey::IVP)
      os << "ivp";
    else
      os << "comp " << t.key.j;
    os << "](x - " << t.sx << ", t - " << t.st << ")\n";
  }
  os << "  + const (" << e.constant.real() << ", " << e.constant.imag() << ")";
  if (e.linear != 0.0)
    os << " + (" << e.linear.real() << ", " << e.linear.imag() << ")*(x - s)";
  os << "\n";
  return os.str();
}

Expansion qloc(QlocExample example, const CornerData& data) {
  if (has_nan(data.qo0) || has_nan(data.g00))
    throw domain_error("qloc: q_o(0) and g_0(0) are required");
  Expansion e;
  switch (example) {
    case QlocExample::LS: {
      Dispersion d({0, 0, 1});
      e.terms.push_back({2.0 * (data.qo0 - data.g00), comp_key(d, 0, 0), 0, 0});
      e.constant = data.qo0;
      e.px = 0.5;
      e.pt = 0.25;
      break;
    }
    case QlocExample::Airy1: {
      Dispersion d({0, 0, 0, -1});
      e.terms.push_back({3.0 * (data.qo0 - data.g00), comp_key(d, 0, 0), 0, 0});
      e.constant = data.qo0;
      e.px = 0.5;
      e.pt = 1.0 / 6.0;
      break;
    }
    case QlocExample::Airy2First:
    case QlocExample::Airy2Second: {
      if (has_nan(data.dqo0) || has_nan(data.g10))
        throw domain_error("qloc: q_o'(0) and g_1(0) are required");
      Dispersion d({0, 0, 0, 1});
      cx a = ALPHA;
      cx c0 = data.qo0 - data.g00;
      cx c1 = data.dqo0 - data.g10;
      e.terms.push_back({(1.0 - a) * c0, comp_key(d, 0, 0), 0, 0});
      e.terms.push_back({(1.0 - a * a) * c0, comp_key(d, 0, 1), 0, 0});
      e.terms.push_back({(1.0 - a * a) * c1, comp_key(d, 1, 0), 0, 0});
      e.terms.push_back({(1.0 - a) * c1, comp_key(d, 1, 1), 0, 0});
      e.constant = data.qo0;
      e.linear = data.dqo0;
      e.px = 1.5;
      e.pt = 0.5;
      break;
    }
  }
  return e;
}

Expansion expansion_zero_bc(const IBVPSpec& spec, double s, int depth) {
  spec.validate();
  require_zero_boundary(spec);
  if (s < 0) throw domain_error("expansion center must satisfy s >= 0");
  Family fam = classify(spec.dispersion);
  if (depth != 1 && depth != 2)
    throw domain_error("expansion depth must be 1 or 2");
  if (depth == 2 && fam != Family::Airy2)
    throw domain_error("depth-2 expansion is available for the k^3 family only");
  const Dispersion& d = spec.dispersion;
  auto dec = ibp_decompose(spec.initial, depth);
  if (depth == 2) {
    if (s != 0.0)
      throw domain_error("depth-2 expansion is centered at the corner");
    for (const auto& j : dec.jumps[1])
      if (std::abs(j) > 1e-14)
        throw domain_error("depth-2 expansion requires continuous q_o'");
  }

  Expansion e;
  e.s = s;
  e.tau = 0.0;
  cx qo0 = dec.corner[0];
  cx a = ALPHA;
  switch (fam) {
    case Family::LS:
      e.terms.push_back({2.0 * qo0, comp_key(d, 0, 0), 0, 0});
      e.px = 0.5;
      e.pt = 0.25;
      break;
    case Family::Airy1:
      e.terms.push_back({3.0 * qo0, comp_key(d, 0, 0), 0, 0});
      e.px = 0.5;
      e.pt = 1.0 / 6.0;
      break;
    case Family::Airy2:
      e.terms.push_back({(1.0 - a) * qo0, comp_key(d, 0, 0), 0, 0});
      e.terms.push_back({(1.0 - a * a) * qo0, comp_key(d, 0, 1), 0, 0});
      e.px = 0.5;
      e.pt = 1.0 / 6.0;
      if (depth == 2) {
        cx dqo0 = dec.corner[1];
        e.terms.push_back({(1.0 - a * a) * dqo0, comp_key(d, 1, 0), 0, 0});
        e.terms.push_back({(1.0 - a) * dqo0, comp_key(d, 1, 1), 0, 0});
        e.linear = dqo0;
        e.px = 1.5;
        e.pt = 0.5;
      }
      break;
  }
  // jump terms ride on the whole-line kernel; rotated images are lower order
  cx tail = 0.0;
  for (std::size_t m = 0; m < dec.jump_locations.size(); ++m) {
    double xm = dec.jump_locations[m];
    cx jump = dec.jumps[0][m];
    e.terms.push_back({jump, ivp_key(d, 0), xm, 0});
    if (xm > s) tail += jump;
  }
  e.constant = spec.initial.value(s) + tail;
  return e;
}

Expansion expansion_zero_ic(const IBVPSpec& spec, double s, double tau) {
  spec.validate();
  require_zero_initial(spec);
  if (s < 0 || tau < 0 || tau > spec.T)
    throw domain_error("expansion center outside the quarter-plane");
  Family fam = classify(spec.dispersion);
  const Dispersion& d = spec.dispersion;

  Expansion e;
  e.s = s;
  e.tau = tau;
  double tol = 1e-9;

  bool trivial = true;
  for (const auto& g : spec.boundary) trivial = trivial && g.is_zero();

  switch (fam) {
    case Family::LS:
    case Family::Airy1: {
      e.px = 0.5;
      e.pt = fam == Family::LS ? 0.25 : 1.0 / 6.0;
      if (trivial) return e;
      auto gr = g_remainders(spec.boundary[0], 0, tau > 0 ? tau : spec.T);
      if (!gr.jump_times.empty())
        throw domain_error("zero-IC expansion requires a continuous boundary datum");
      double beta = fam == Family::LS ? 2.0 : 3.0;
      e.terms.push_back({-beta * gr.at0[0], comp_key(d, 0, 0), 0, 0});
      e.constant = -beta * history_integral(d, 0, 0, s, tau, gr.derivative, tol);
      break;
    }
    case Family::Airy2: {
      e.px = 1.5;
      e.pt = 0.5;
      if (trivial) return e;
      double horizon = tau > 0 ? tau : spec.T;
      auto gr0 = g_remainders(spec.boundary[0], 1, horizon);
      auto gr1 = g_remainders(spec.boundary[1], 0, horizon);
      if (!gr0.jump_times.empty() || !gr1.jump_times.empty())
        throw domain_error("zero-IC expansion requires continuous boundary data");
      cx a = ALPHA;
      cx g00 = gr0.at0[0], dg00 = gr0.at0[1], g10 = gr1.at0[0];
      e.terms.push_back({(a - 1.0) * g00, comp_key(d, 0, 0), 0, 0});
      e.terms.push_back({(a * a - 1.0) * g00, comp_key(d, 0, 1), 0, 0});
      e.terms.push_back({-(1.0 - a * a) * g10, comp_key(d, 1, 0), 0, 0});
      e.terms.push_back({-(1.0 - a) * g10, comp_key(d, 1, 1), 0, 0});
      // frozen boundary-history parts, constant and linear in (x - s)
      QuadratureSettings qs;
      qs.tolerance = tol * 1e-2;
      cx A[2] = {-(1.0 - a), -(1.0 - a * a)};       // on g_0 history, comps 0/1
      cx B[2] = {a * a - 1.0, a - 1.0};             // on g_1 history, comps 0/1
      for (int c = 0; c < 2; ++c) {
        cx i3 = 0.0, i2 = 0.0;
        if (tau > 0 && s >= 0) {
          i3 = special_eval(comp_key(d, 3, c), s, tau, qs).value;
          i2 = special_eval(comp_key(d, 2, c), s, tau, qs).value;
        }
        cx f_const = dg00 * i3 +
                     history_integral(d, 3, c, s, tau, gr0.derivative, tol);
        cx f_lin = dg00 * i2 +
                   history_integral(d, 2, c, s, tau, gr0.derivative, tol);
        cx g_const = history_integral(d, 1, c, s, tau, gr1.derivative, tol);
        cx g_lin = history_integral(d, 0, c, s, tau, gr1.derivative, tol);
        e.constant += A[c] * f_const + B[c] * g_const;
        e.linear += A[c] * f_lin + B[c] * g_lin;
      }
      break;
    }
  }
  return e;
}

CancelResult cancel_compatible(const IBVPSpec& spec, int order) {
  spec.validate();
  Family fam = classify(spec.dispersion);
  const Dispersion& d = spec.dispersion;
  int ncomp = fam == Family::Airy2 ? 2 : 1;

  CancelResult res;
  res.surviving.s = 0;
  res.surviving.tau = 0;
  res.decay_exponent = -1;
  bool chain_intact = true;
  for (int i = 0; i <= order; ++i) {
    bool order_ok = true;
    for (int c = 0; c < ncomp; ++c) {
      CornerTermSym ct = corner_sym(fam, i, c);
      cx qo_val = spec.initial.derivative(0.0, i);
      cx g_val = 0.0;
      if (ct.g_index >= 0)
        g_val = spec.boundary[ct.g_index].derivative(0.0, ct.g_order);
      if (ct.g_index >= 0) {
        cx want = ct.mu.numeric() * qo_val;
        double scale = 1.0 + std::abs(qo_val) + std::abs(g_val);
        ct.data_compatible = std::abs(g_val - want) <= 1e-12 * scale;
      } else {
        ct.data_compatible = true;  // nothing to match
      }
      ct.surviving = ct.qo_w.numeric() * qo_val + ct.g_w.numeric() * g_val;
      if (!(ct.cancels && ct.data_compatible)) order_ok = false;
      if (std::abs(ct.surviving) > 1e-12 * (1.0 + std::abs(qo_val) + std::abs(g_val)))
        res.surviving.terms.push_back({ct.surviving, comp_key(d, i, c), 0, 0});
      res.table.push_back(ct);
    }
    if (chain_intact && order_ok)
      res.decay_exponent = i;
    else
      chain_intact = false;
  }
  res.all_cancelled = res.surviving.terms.empty();
  int m = res.decay_exponent < 0 ? 0 : res.decay_exponent;
  res.surviving.px = m + 0.5;
  res.surviving.pt = (m + 0.5) / d.degree();
  return res;
}

double residual_exponent(int m) {
  if (m < 0) throw domain_error("residual_exponent: order must be >= 0");
  return m + 0.5;
}

RateFit residual_order_fit(const std::vector<double>& rhos,
                           const std::vector<double>& errs) {
  if (rhos.size() < 4)
    throw domain_error("residual_order_fit: need at least 4 samples");
  return rate_fit(rhos, errs);
}

}  // namespace utm
