#include "utm/piecewise_data.hpp"

#include <algorithm>
#include <cmath>

namespace utm {

namespace {

// moments E_m(mu, L) = int_0^L u^m e^{-mu u} du, m = 0..maxm
std::vector<cx> moments(cx mu, double L, int maxm) {
  std::vector<cx> E(maxm + 1);
  if (std::isinf(L)) {
    if (!(mu.real() > 0))
      throw domain_error("half_line_ft: non-decaying tail on unbounded piece");
    cx p = mu;
    double fact = 1.0;
    for (int m = 0; m <= maxm; ++m) {
      E[m] = fact / p;
      p *= mu;
      fact *= (m + 1);
    }
    return E;
  }
  if (std::abs(mu) * L < 1e-3) {
    // series: E_m = sum_j (-mu)^j L^{m+j+1} / (j! (m+j+1))
    for (int m = 0; m <= maxm; ++m) {
      cx term = std::pow(L, m + 1);
      cx sum = term / double(m + 1);
      cx mj = 1.0;
      double fact = 1.0;
      for (int j = 1; j < 30; ++j) {
        mj *= -mu;
        fact *= j;
        term *= L;
        cx add = mj * term / (fact * (m + j + 1));
        sum += add;
        if (std::abs(add) < 1e-17 * (1 + std::abs(sum))) break;
      }
      E[m] = sum;
    }
    return E;
  }
  cx eL = std::exp(-mu * L);
  E[0] = (1.0 - eL) / mu;
  double Lp = 1.0;
  for (int m = 1; m <= maxm; ++m) {
    Lp *= L;
    E[m] = (double(m) * E[m - 1] - Lp * eL) / mu;
  }
  return E;
}

cx adaptive_simpson(const std::function<cx(double)>& f, double a, double b,
                    double tol, int depth, cx fa, cx fm, cx fb, cx whole) {
  double m = 0.5 * (a + b);
  cx flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  cx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, tol / 2, depth - 1, fa, flm, fm, left) +
         adaptive_simpson(f, m, b, tol / 2, depth - 1, fm, frm, fb, right);
}

cx integrate_numeric(const std::function<cx(double)>& f, double a, double b,
                     double tol = 1e-12) {
  if (b <= a) return 0.0;
  cx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, tol, 48, fa, fm, fb, whole);
}

// int_a^b e^{-ikx} f(x) dx for one piece with left edge a
cx piece_transform(const Piece& p, double a, double b, cx k) {
  if (p.kind == Piece::Numeric) {
    auto f = [&](double x) { return p.fn(x) * std::exp(cx(0, -1) * k * x); };
    if (std::isinf(b)) {
      // march in blocks until contributions are negligible
      cx total = 0.0;
      double lo = a, len = 1.0;
      for (int blk = 0; blk < 200; ++blk) {
        cx part = integrate_numeric(f, lo, lo + len);
        total += part;
        lo += len;
        len = std::min(2 * len, 16.0);
        if (std::abs(part) < 1e-15 * (1 + std::abs(total)) &&
            std::abs(p.fn(lo)) < 1e-15)
          return total;
      }
      throw numerical_error("piece_transform: unbounded numeric tail did not settle");
    }
    return integrate_numeric(f, a, b);
  }
  cx phase = std::exp(cx(0, -1) * k * a);
  double L = std::isinf(b) ? INF : b - a;
  cx total = 0.0;
  for (const auto& term : p.terms) {
    if (term.poly.empty()) continue;
    auto E = moments(cx(0, 1) * k + term.lambda, L, int(term.poly.size()) - 1);
    for (std::size_t m = 0; m < term.poly.size(); ++m) total += term.poly[m] * E[m];
  }
  return phase * total;
}

}  // namespace

cx Piece::local_value(double u) const {
  if (kind == Numeric) throw domain_error("local_value on numeric piece");
  cx v = 0.0;
  for (const auto& term : terms) {
    cx p = 0.0;
    for (auto it = term.poly.rbegin(); it != term.poly.rend(); ++it) p = p * u + *it;
    v += p * std::exp(-term.lambda * u);
  }
  return v;
}

Piece Piece::differentiated() const {
  if (kind == Numeric) {
    if (!fn_deriv)
      throw domain_error("cannot differentiate numeric piece without derivative");
    Piece d;
    d.kind = Numeric;
    d.fn = fn_deriv;
    return d;
  }
  Piece d;
  d.kind = Analytic;
  for (const auto& term : terms) {
    PieceTerm dt;
    dt.lambda = term.lambda;
    std::size_t n = term.poly.size();
    if (n == 0) continue;
    dt.poly.assign(n, 0.0);
    for (std::size_t m = 0; m + 1 < n; ++m) dt.poly[m] = term.poly[m + 1] * double(m + 1);
    for (std::size_t m = 0; m < n; ++m) dt.poly[m] -= term.lambda * term.poly[m];
    d.terms.push_back(std::move(dt));
  }
  return d;
}

Piece Piece::shifted(double delta) const {
  if (kind == Numeric) {
    Piece s;
    s.kind = Numeric;
    auto f = fn;
    s.fn = [f, delta](double x) { return f(x + delta); };
    if (fn_deriv) {
      auto fd = fn_deriv;
      s.fn_deriv = [fd, delta](double x) { return fd(x + delta); };
    }
    return s;
  }
  Piece s;
  s.kind = Analytic;
  for (const auto& term : terms) {
    // p(u + delta) e^{-lambda (u + delta)} via binomial expansion
    PieceTerm st;
    st.lambda = term.lambda;
    st.poly.assign(term.poly.size(), 0.0);
    for (std::size_t m = 0; m < term.poly.size(); ++m) {
      double binom = 1.0;
      double dpow = 1.0;
      for (std::size_t r = 0; r <= m; ++r) {
        st.poly[m - r] += term.poly[m] * binom * dpow;
        binom = binom * double(m - r) / double(r + 1);
        dpow *= delta;
      }
    }
    cx damp = std::exp(-term.lambda * delta);
    for (auto& c : st.poly) c *= damp;
    s.terms.push_back(std::move(st));
  }
  return s;
}

void Piece::add_constant(cx c) {
  if (kind == Numeric) {
    auto f = fn;
    fn = [f, c](double x) { return f(x) + c; };
    return;
  }
  for (auto& term : terms) {
    if (term.lambda == 0.0) {
      if (term.poly.empty()) term.poly.push_back(0.0);
      term.poly[0] += c;
      return;
    }
  }
  terms.push_back(PieceTerm{{c}, 0.0});
}

std::size_t PiecewiseData::piece_index(double x) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  std::size_t i = std::size_t(it - breakpoints.begin());
  if (i == pieces.size()) --i;  // x == horizon: use the last piece
  return i;
}

cx PiecewiseData::value(double x) const {
  std::size_t i = piece_index(x);
  const Piece& p = pieces[i];
  if (p.kind == Piece::Numeric) return p.fn(x);
  return p.local_value(x - left_edge(i));
}

cx PiecewiseData::derivative(double x, int order) const {
  std::size_t i = piece_index(x);
  Piece p = pieces[i];
  for (int r = 0; r < order; ++r) p = p.differentiated();
  if (p.kind == Piece::Numeric) return p.fn(x);
  return p.local_value(x - left_edge(i));
}

bool PiecewiseData::is_zero() const {
  for (const auto& p : pieces) {
    if (p.kind == Piece::Numeric) return false;
    for (const auto& term : p.terms)
      for (auto c : term.poly)
        if (c != 0.0) return false;
  }
  return true;
}

PiecewiseData PiecewiseData::zero(double horizon) {
  PiecewiseData d;
  d.horizon = horizon;
  d.pieces.push_back(Piece::zero());
  return d;
}

PiecewiseData PiecewiseData::constant(cx c, double horizon) {
  PiecewiseData d;
  d.horizon = horizon;
  d.pieces.push_back(Piece::polynomial({c}));
  return d;
}

PiecewiseData PiecewiseData::indicator(double a, double b) {
  PiecewiseData d;
  d.horizon = INF;
  if (a > 0) {
    d.breakpoints.push_back(a);
    d.pieces.push_back(Piece::zero());
  }
  d.breakpoints.push_back(b);
  d.pieces.push_back(Piece::polynomial({1.0}));
  d.pieces.push_back(Piece::zero());
  return d;
}

void IBVPSpec::validate() const {
  if (!(T > 0)) throw domain_error("IBVPSpec: horizon T must be positive");
  int N = num_boundary_conditions(dispersion);
  if (int(boundary.size()) != N)
    throw domain_error("IBVPSpec: expected " + std::to_string(N) +
                       " boundary data, got " + std::to_string(boundary.size()));
  auto check = [](const PiecewiseData& d, bool initial) {
    if (d.pieces.size() != d.breakpoints.size() + 1)
      throw domain_error("PiecewiseData: piece count must be breakpoints + 1");
    for (std::size_t i = 0; i + 1 < d.breakpoints.size(); ++i)
      if (!(d.breakpoints[i] < d.breakpoints[i + 1]))
        throw domain_error("PiecewiseData: breakpoints must increase strictly");
    if (!d.breakpoints.empty() && !(d.breakpoints.front() > 0))
      throw domain_error("PiecewiseData: breakpoints must be positive");
    if (initial && std::isinf(d.horizon)) {
      const Piece& last = d.pieces.back();
      if (last.kind == Piece::Analytic) {
        for (const auto& term : last.terms) {
          bool nonzero = false;
          for (auto c : term.poly)
            if (c != 0.0) nonzero = true;
          if (nonzero && !(term.lambda.real() > 0))
            throw domain_error("PiecewiseData: unbounded piece must decay");
        }
      }
    }
  };
  check(initial, true);
  for (const auto& g : boundary) {
    check(g, false);
    if (std::isinf(g.horizon) || g.horizon < T)
      throw domain_error("IBVPSpec: boundary data horizon shorter than T");
    if (!g.breakpoints.empty() && g.breakpoints.back() >= g.horizon)
      throw domain_error("PiecewiseData: breakpoint beyond horizon");
  }
}

cx half_line_ft(const PiecewiseData& data, cx k) {
  cx total = 0.0;
  for (std::size_t i = 0; i < data.pieces.size(); ++i)
    total += piece_transform(data.pieces[i], data.left_edge(i), data.right_edge(i), k);
  return total;
}

cx time_transform(const PiecewiseData& g, cx k, double t) {
  if (t < 0 || t > g.horizon + 1e-12)
    throw domain_error("time_transform: t outside [0, horizon]");
  cx total = 0.0;
  for (std::size_t i = 0; i < g.pieces.size(); ++i) {
    double a = g.left_edge(i);
    if (a >= t) break;
    double b = std::min(g.right_edge(i), t);
    total += piece_transform(g.pieces[i], a, b, k);
  }
  return total;
}

static PiecewiseData differentiate_all(const PiecewiseData& d) {
  PiecewiseData out = d;
  for (auto& p : out.pieces) p = p.differentiated();
  return out;
}

IbpDecomposition ibp_decompose(const PiecewiseData& data, int depth) {
  if (depth < 1) throw domain_error("ibp_decompose: depth must be >= 1");
  IbpDecomposition out;
  out.depth = depth;
  out.jump_locations = data.breakpoints;
  PiecewiseData cur = data;
  for (int i = 0; i < depth; ++i) {
    out.corner.push_back(cur.value(0.0));
    std::vector<cx> row;
    for (std::size_t m = 0; m < data.breakpoints.size(); ++m) {
      double xm = data.breakpoints[m];
      const Piece& left = cur.pieces[m];
      cx lv = left.kind == Piece::Numeric ? left.fn(xm)
                                          : left.local_value(xm - cur.left_edge(m));
      cx rv = cur.pieces[m + 1].kind == Piece::Numeric
                  ? cur.pieces[m + 1].fn(xm)
                  : cur.pieces[m + 1].local_value(0.0);
      row.push_back(rv - lv);
    }
    out.jumps.push_back(std::move(row));
    cur = differentiate_all(cur);
  }
  out.remainder = cur;
  return out;
}

cx IbpDecomposition::reconstruct(cx k) const {
  cx ik = cx(0, 1) * k;
  cx total = 0.0, pw = ik;
  for (int i = 0; i < depth; ++i) {
    cx num = corner[i];
    for (std::size_t m = 0; m < jump_locations.size(); ++m)
      num += std::exp(-ik * jump_locations[m]) * jumps[i][m];
    total += num / pw;
    pw *= ik;
  }
  // pw is now (ik)^{depth+1}; remainder divides by (ik)^depth
  return total + remainder_transform(k) / (pw / ik);
}

GRemainder g_remainders(const PiecewiseData& g, int order, double t) {
  if (t < 0 || t > g.horizon + 1e-12)
    throw domain_error("g_remainders: t outside [0, horizon]");
  GRemainder out;
  out.order = order;
  out.t = t;
  for (double tm : g.breakpoints)
    if (tm < t) out.jump_times.push_back(tm);
  PiecewiseData cur = g;
  for (int i = 0; i <= order; ++i) {
    out.at0.push_back(cur.value(0.0));
    // left limit at t when t sits on a breakpoint
    std::size_t pl = cur.piece_index(t);
    if (pl > 0 && cur.breakpoints[pl - 1] == t) --pl;
    const Piece& plp = cur.pieces[pl];
    out.at_t.push_back(plp.kind == Piece::Numeric
                           ? plp.fn(t)
                           : plp.local_value(t - cur.left_edge(pl)));
    std::vector<cx> row;
    for (double tm : out.jump_times) {
      std::size_t m = std::size_t(std::lower_bound(cur.breakpoints.begin(),
                                                   cur.breakpoints.end(), tm) -
                                  cur.breakpoints.begin());
      const Piece& lp = cur.pieces[m];
      cx lv = lp.kind == Piece::Numeric ? lp.fn(tm)
                                        : lp.local_value(tm - cur.left_edge(m));
      cx rv = cur.pieces[m + 1].kind == Piece::Numeric
                  ? cur.pieces[m + 1].fn(tm)
                  : cur.pieces[m + 1].local_value(0.0);
      row.push_back(rv - lv);
    }
    out.jumps.push_back(std::move(row));
    cur = differentiate_all(cur);
  }
  out.derivative = cur;
  return out;
}

cx GRemainder::reconstruct(cx mu) const {
  cx imu = cx(0, 1) * mu;
  cx et = std::exp(imu * t);
  cx total = 0.0, pw = imu;
  double sgn = 1.0;
  for (int i = 0; i <= order; ++i) {
    cx num = at_t[i] * et - at0[i];
    for (std::size_t m = 0; m < jump_times.size(); ++m)
      num -= std::exp(imu * jump_times[m]) * jumps[i][m];
    total += sgn * num / pw;
    pw *= imu;
    sgn = -sgn;
  }
  return total + sgn * G(mu) / (pw / imu);
}

std::vector<PiecewiseData> split_boundary_at_jumps(const PiecewiseData& g) {
  if (g.breakpoints.empty()) return {g};
  std::size_t K = g.breakpoints.size();
  std::vector<PiecewiseData> out;

  auto left_limit = [&](std::size_t piece, double at) {
    const Piece& p = g.pieces[piece];
    return p.kind == Piece::Numeric ? p.fn(at)
                                    : p.local_value(at - g.left_edge(piece));
  };

  // first element: g up to t_1, then held at g(t_1^-)
  {
    PiecewiseData d;
    d.horizon = g.horizon;
    d.breakpoints = {g.breakpoints[0]};
    d.pieces = {g.pieces[0], Piece::polynomial({left_limit(0, g.breakpoints[0])})};
    out.push_back(std::move(d));
  }
  for (std::size_t i = 1; i <= K; ++i) {
    double ta = g.breakpoints[i - 1];
    cx base = left_limit(i - 1, ta);
    PiecewiseData d;
    d.horizon = g.horizon;
    Piece mid = g.pieces[i];
    mid.add_constant(-base);
    if (i < K) {
      double tb = g.breakpoints[i];
      d.breakpoints = {ta, tb};
      d.pieces = {Piece::zero(), mid,
                  Piece::polynomial({left_limit(i, tb) - base})};
    } else {
      d.breakpoints = {ta};
      d.pieces = {Piece::zero(), mid};
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<CompatibilityEntry> check_compatibility(const IBVPSpec& spec,
                                                    int max_order) {
  spec.validate();
  int n = spec.dispersion.degree();
  int N = num_boundary_conditions(spec.dispersion);
  const auto& w = spec.dispersion.coeffs();

  // q_o^{(r)}(0) for r = 0..max_order
  std::vector<cx> d0(max_order + 1);
  {
    Piece p = spec.initial.pieces[0];
    for (int r = 0; r <= max_order; ++r) {
      if (p.kind == Piece::Numeric && !p.fn)
        throw domain_error("check_compatibility: initial datum not differentiable"
                           " to order " + std::to_string(r));
      d0[r] = p.kind == Piece::Numeric ? p.fn(0.0) : p.local_value(0.0);
      if (r < max_order) p = p.differentiated();
    }
  }

  std::vector<CompatibilityEntry> entries;
  for (int j = 0; j < N; ++j) {
    Piece gp = spec.boundary[j].pieces[0];
    for (int ell = 0; j + n * ell <= max_order; ++ell) {
      // lhs: g_j^{(ell)}(0)
      Piece cur = gp;
      for (int r = 0; r < ell; ++r) cur = cur.differentiated();
      cx lhs = cur.kind == Piece::Numeric ? cur.fn(0.0) : cur.local_value(0.0);
      // rhs: [(i omega(-i d/dx))^ell q_o]^{(j)}(0)
      std::vector<cx> arr = d0;
      for (int r = 0; r < ell; ++r) {
        std::vector<cx> next(arr.size() >= std::size_t(n) ? arr.size() - n : 0);
        for (std::size_t s = 0; s < next.size(); ++s) {
          cx v = 0.0;
          cx mi = cx(0, -1);
          cx mij = 1.0;
          for (int q = 1; q <= n; ++q) {
            mij *= mi;
            v += cx(0, 1) * w[q] * mij * arr[s + q];
          }
          next[s] = v;
        }
        arr = std::move(next);
      }
      cx rhs = arr[j];
      bool ok = std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(lhs) + std::abs(rhs));
      entries.push_back({j, ell, j + n * ell, lhs, rhs, ok});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.order != b.order) return a.order < b.order;
    return a.j < b.j;
  });
  return entries;
}

}  // namespace utm
