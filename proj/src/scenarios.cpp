#include "utm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace utm {

namespace {

using njson = nlohmann::ordered_json;

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "line " << line << ", column " << col;
  return os.str();
}

void check_keys(const njson& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok)
      throw domain_error("config: unknown key \"" + it.key() + "\" in " + where);
  }
}

cx parse_cx(const njson& j, const std::string& where) {
  if (j.is_number()) return cx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cx(j[0].get<double>(), j[1].get<double>());
  throw domain_error("config: " + where + " must be a number or [re, im] pair");
}

std::vector<cx> parse_cx_list(const njson& j, const std::string& where) {
  if (!j.is_array()) throw domain_error("config: " + where + " must be an array");
  std::vector<cx> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_cx(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Piece parse_piece(const njson& j, const std::string& where) {
  if (!j.is_object()) throw domain_error("config: " + where + " must be an object");
  check_keys(j, {"type", "coeffs", "lambda"}, where);
  std::string type = j.value("type", "");
  if (type == "zero") return Piece::zero();
  if (type == "polynomial") {
    if (!j.contains("coeffs"))
      throw domain_error("config: " + where + " needs \"coeffs\"");
    return Piece::polynomial(parse_cx_list(j["coeffs"], where + ".coeffs"));
  }
  if (type == "polyexp") {
    if (!j.contains("coeffs") || !j.contains("lambda"))
      throw domain_error("config: " + where + " needs \"coeffs\" and \"lambda\"");
    return Piece::polyexp(parse_cx_list(j["coeffs"], where + ".coeffs"),
                          parse_cx(j["lambda"], where + ".lambda"));
  }
  throw domain_error("config: " + where +
                     ".type must be \"zero\", \"polynomial\" or \"polyexp\"");
}

PiecewiseData parse_piecewise(const njson& j, double horizon,
                              const std::string& where) {
  if (!j.is_object()) throw domain_error("config: " + where + " must be an object");
  check_keys(j, {"breakpoints", "pieces"}, where);
  PiecewiseData pd;
  pd.horizon = horizon;
  if (j.contains("breakpoints"))
    for (const auto& b : j["breakpoints"]) {
      if (!b.is_number())
        throw domain_error("config: " + where + ".breakpoints must be numbers");
      pd.breakpoints.push_back(b.get<double>());
    }
  if (!j.contains("pieces") || !j["pieces"].is_array())
    throw domain_error("config: " + where + " needs a \"pieces\" array");
  std::size_t i = 0;
  for (const auto& p : j["pieces"])
    pd.pieces.push_back(parse_piece(p, where + ".pieces[" + std::to_string(i++) + "]"));
  if (pd.pieces.size() != pd.breakpoints.size() + 1)
    throw domain_error("config: " + where +
                       " needs breakpoints.size() + 1 pieces");
  return pd;
}

AxisSpec parse_axis(const njson& j, const std::string& where) {
  if (!j.is_object()) throw domain_error("config: " + where + " must be an object");
  check_keys(j, {"min", "max", "count", "spacing", "values"}, where);
  AxisSpec a;
  if (j.contains("values")) {
    for (const auto& v : j["values"]) {
      if (!v.is_number())
        throw domain_error("config: " + where + ".values must be numbers");
      a.values.push_back(v.get<double>());
    }
    if (a.values.empty())
      throw domain_error("config: " + where + ".values must be non-empty");
    return a;
  }
  if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
    throw domain_error("config: " + where + " needs min, max, count (or values)");
  a.min = j["min"].get<double>();
  a.max = j["max"].get<double>();
  a.count = j["count"].get<int>();
  if (j.contains("spacing")) {
    std::string s = j["spacing"].get<std::string>();
    if (s == "log")
      a.log_spacing = true;
    else if (s != "linear")
      throw domain_error("config: " + where + ".spacing must be linear or log");
  }
  if (a.count < 1 || a.max < a.min)
    throw domain_error("config: " + where + " range is empty");
  return a;
}

njson cx_json(cx v) {
  if (v.imag() == 0.0) return njson(v.real());
  return njson::array({v.real(), v.imag()});
}

njson piece_json(const Piece& p) {
  njson j;
  if (p.terms.empty()) {
    j["type"] = "zero";
    return j;
  }
  const PieceTerm& t = p.terms.front();
  j["type"] = (t.lambda == 0.0) ? "polynomial" : "polyexp";
  njson coeffs = njson::array();
  for (cx c : t.poly) coeffs.push_back(cx_json(c));
  j["coeffs"] = coeffs;
  if (t.lambda != 0.0) j["lambda"] = cx_json(t.lambda);
  return j;
}

njson piecewise_json(const PiecewiseData& pd) {
  njson j;
  j["breakpoints"] = pd.breakpoints;
  njson pieces = njson::array();
  for (const auto& p : pd.pieces) pieces.push_back(piece_json(p));
  j["pieces"] = pieces;
  return j;
}

njson axis_json(const AxisSpec& a) {
  njson j;
  if (!a.values.empty()) {
    j["values"] = a.values;
    return j;
  }
  j["min"] = a.min;
  j["max"] = a.max;
  j["count"] = a.count;
  j["spacing"] = a.log_spacing ? "log" : "linear";
  return j;
}

bool is_qloc(const std::string& m) {
  return m == "qloc-ls" || m == "qloc-airy1" || m == "qloc-airy2";
}

bool is_solver(const std::string& m) {
  return m == "ls" || m == "airy1" || m == "airy2" || m == "general";
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> AxisSpec::points() const {
  if (!values.empty()) return values;
  std::vector<double> out;
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    double f = double(i) / (count - 1);
    if (log_spacing)
      out.push_back(min * std::pow(max / min, f));
    else
      out.push_back(min + (max - min) * f);
  }
  return out;
}

void ScenarioConfig::validate() const {
  Dispersion d(dispersion);  // throws on malformed coefficients
  if (!(is_qloc(method) || is_solver(method) || method == "discdata"))
    throw domain_error("config: unknown method \"" + method + "\"");
  if (quad.tolerance <= 0) throw domain_error("config: tolerance must be > 0");
  if (x.values.empty() && x.min < 0)
    throw domain_error("config: x range must satisfy x >= 0");
  for (double xv : x.points())
    if (xv < 0) throw domain_error("config: x values must be >= 0");
  for (double tv : t.points())
    if (tv <= 0) throw domain_error("config: t values must be > 0");

  if (is_solver(method)) {
    if (T <= 0) throw domain_error("config: T must be > 0");
    int need = num_boundary_conditions(d);
    if (int(boundary.size()) != need)
      throw domain_error("config: dispersion needs " + std::to_string(need) +
                         " boundary data, got " + std::to_string(boundary.size()));
    for (double tv : t.points())
      if (tv > T) throw domain_error("config: t values must be <= T");
    // data on the unbounded interval must decay
    if (initial.pieces.empty())
      throw domain_error("config: initial datum has no pieces");
    const Piece& tail = initial.pieces.back();
    for (const auto& term : tail.terms) {
      bool nonzero = false;
      for (cx c : term.poly) nonzero = nonzero || c != 0.0;
      if (nonzero && term.lambda.real() <= 0)
        throw domain_error(
            "config: initial datum must decay on its unbounded interval "
            "(Re lambda > 0)");
    }
    IBVPSpec spec{d, initial, boundary, T};
    spec.validate();
  }
  if (method == "discdata") {
    if (!(0 < x1 && x1 < x2)) throw domain_error("config: need 0 < x1 < x2");
    if (t1 <= 0) throw domain_error("config: t1 must be > 0");
    if (dispersion != std::vector<double>{0, 0, 0, 1})
      throw domain_error("config: discdata requires dispersion k^3");
  }
}



ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw domain_error("config: JSON parse error at " + line_of(text, e.byte) +
                       ": " + e.what());
  }
  if (!j.is_object()) throw domain_error("config: top level must be an object");
  check_keys(j,
             {"name", "dispersion", "method", "T", "initial", "boundary",
              "corner", "discdata", "grid", "quadrature", "output"},
             "top level");
  ScenarioConfig c;
  if (j.contains("name")) c.name = j["name"].get<std::string>();
  if (j.contains("method")) c.method = j["method"].get<std::string>();
  if (j.contains("dispersion")) {
    c.dispersion.clear();
    for (const auto& w : j["dispersion"]) {
      if (!w.is_number())
        throw domain_error("config: dispersion coefficients must be numbers");
      c.dispersion.push_back(w.get<double>());
    }
  }
  if (j.contains("T")) c.T = j["T"].get<double>();
  if (j.contains("initial"))
    c.initial = parse_piecewise(j["initial"], INF, "initial");
  if (j.contains("boundary")) {
    if (!j["boundary"].is_array())
      throw domain_error("config: boundary must be an array");
    std::size_t i = 0;
    for (const auto& b : j["boundary"])
      c.boundary.push_back(
          parse_piecewise(b, c.T, "boundary[" + std::to_string(i++) + "]"));
  }
  if (j.contains("corner")) {
    const auto& k = j["corner"];
    check_keys(k, {"qo0", "dqo0", "g00", "g10"}, "corner");
    if (k.contains("qo0")) c.corner.qo0 = parse_cx(k["qo0"], "corner.qo0");
    if (k.contains("dqo0")) c.corner.dqo0 = parse_cx(k["dqo0"], "corner.dqo0");
    if (k.contains("g00")) c.corner.g00 = parse_cx(k["g00"], "corner.g00");
    if (k.contains("g10")) c.corner.g10 = parse_cx(k["g10"], "corner.g10");
  }
  if (j.contains("discdata")) {
    const auto& k = j["discdata"];
    check_keys(k, {"x1", "x2", "t1", "C1", "C2"}, "discdata");
    if (k.contains("x1")) c.x1 = k["x1"].get<double>();
    if (k.contains("x2")) c.x2 = k["x2"].get<double>();
    if (k.contains("t1")) c.t1 = k["t1"].get<double>();
    if (k.contains("C1")) c.C1 = parse_cx(k["C1"], "discdata.C1");
    if (k.contains("C2")) c.C2 = parse_cx(k["C2"], "discdata.C2");
  }
  if (!j.contains("grid"))
    throw domain_error("config: missing \"grid\"");
  check_keys(j["grid"], {"x", "t"}, "grid");
  if (!j["grid"].contains("x") || !j["grid"].contains("t"))
    throw domain_error("config: grid needs \"x\" and \"t\"");
  c.x = parse_axis(j["grid"]["x"], "grid.x");
  c.t = parse_axis(j["grid"]["t"], "grid.t");
  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    check_keys(q, {"tolerance", "base_nodes", "max_doublings"}, "quadrature");
    if (q.contains("tolerance")) c.quad.tolerance = q["tolerance"].get<double>();
    if (q.contains("base_nodes")) c.quad.base_nodes = q["base_nodes"].get<int>();
    if (q.contains("max_doublings"))
      c.quad.max_doublings = q["max_doublings"].get<int>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, {"csv", "report"}, "output");
    if (o.contains("csv")) c.csv_path = o["csv"].get<std::string>();
    if (o.contains("report")) c.report_path = o["report"].get<std::string>();
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("config: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json_text(os.str());
}

std::string ScenarioConfig::resolved_json() const {
  njson j;
  j["name"] = name;
  j["dispersion"] = dispersion;
  j["method"] = method;
  if (is_solver(method)) {
    j["T"] = T;
    j["initial"] = piecewise_json(initial);
    njson b = njson::array();
    for (const auto& g : boundary) b.push_back(piecewise_json(g));
    j["boundary"] = b;
  }
  if (is_qloc(method)) {
    njson k;
    k["qo0"] = cx_json(corner.qo0);
    k["g00"] = cx_json(corner.g00);
    if (method == "qloc-airy2") {
      k["dqo0"] = cx_json(corner.dqo0);
      k["g10"] = cx_json(corner.g10);
    }
    j["corner"] = k;
  }
  if (method == "discdata") {
    njson k;
    k["x1"] = x1;
    k["x2"] = x2;
    k["t1"] = t1;
    k["C1"] = cx_json(C1);
    k["C2"] = cx_json(C2);
    j["discdata"] = k;
  }
  j["grid"]["x"] = axis_json(x);
  j["grid"]["t"] = axis_json(t);
  j["quadrature"]["tolerance"] = quad.tolerance;
  if (!csv_path.empty()) j["output"]["csv"] = csv_path;
  if (!report_path.empty()) j["output"]["report"] = report_path;
  return j.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
  return {"ls-corner", "airy1-corner", "airy2-corner1", "airy2-corner2",
          "airy2-discdata"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  auto geometric = [](double first, double ratio, std::vector<int> js) {
    std::vector<double> out;
    for (int j : js) out.push_back(first * std::pow(ratio, j));
    std::sort(out.begin(), out.end());
    return out;
  };
  if (name == "ls-corner") {
    c.method = "qloc-ls";
    c.dispersion = {0, 0, 1};
    c.corner.qo0 = 1.0;
    c.corner.g00 = -1.0;
    c.x = {0.0, 15.0, 151, false, {}};
    c.t.values = geometric(1.0 / 20, 1.0 / 6, {0, 1, 2, 3});
  } else if (name == "airy1-corner") {
    c.method = "qloc-airy1";
    c.dispersion = {0, 0, 0, -1};
    c.corner.qo0 = 1.0;
    c.corner.g00 = -1.0;
    c.x = {0.0, 15.0, 151, false, {}};
    c.t.values = geometric(1.0 / 20, 1.0 / 6, {0, 1, 2, 5});
  } else if (name == "airy2-corner1") {
    c.method = "qloc-airy2";
    c.dispersion = {0, 0, 0, 1};
    c.corner.qo0 = 1.0;
    c.corner.dqo0 = -1.0;
    c.corner.g00 = -1.0;
    c.corner.g10 = 0.0;
    c.x = {0.0, 0.5, 101, false, {}};
    c.t.values = geometric(1.0 / 300, 1.0 / 8, {0, 1, 2, 3, 4, 5});
  } else if (name == "airy2-corner2") {
    c.method = "qloc-airy2";
    c.dispersion = {0, 0, 0, 1};
    c.corner.qo0 = 1.0;
    c.corner.dqo0 = 0.0;
    c.corner.g00 = 1.0;
    c.corner.g10 = -1.0;
    c.x = {0.0, 15.0, 151, false, {}};
    c.t.values = geometric(1.0 / 10, 1.0 / 8, {0, 1, 2, 3, 4});
  } else if (name == "airy2-discdata") {
    c.method = "discdata";
    c.dispersion = {0, 0, 0, 1};
    c.x1 = 1.0;
    c.x2 = 2.0;
    c.t1 = 0.25;
    c.C1 = 1.0;
    c.C2 = -1.0;
    c.T = 1.0;
    c.x = {0.0, 15.0, 151, false, {}};
    c.t.values = geometric(1.0 / 10, 1.0 / 19, {1, 2, 3, 5});
  } else {
    std::string names;
    for (const auto& n : builtin_scenario_names()) names += " " + n;
    throw domain_error("unknown scenario \"" + name + "\"; valid names:" + names);
  }
  c.validate();
  return c;
}

std::vector<FieldSample> run_scenario(const ScenarioConfig& config) {
  config.validate();
  Dispersion d(config.dispersion);
  SolutionEvaluator ev{IBVPSpec{d, config.initial, config.boundary, config.T},
                       SolutionEvaluator::GeneralMonomial,
                       SolverOptions{config.quad, 1, 0},
                       {}};
  if (config.method == "ls") {
    ev.method = SolutionEvaluator::ClosedFormLS;
  } else if (config.method == "airy1") {
    ev.method = SolutionEvaluator::ClosedFormAiry1;
  } else if (config.method == "airy2") {
    ev.method = SolutionEvaluator::ClosedFormAiry2;
  } else if (config.method == "general") {
    ev.method = SolutionEvaluator::GeneralMonomial;
  } else if (is_qloc(config.method)) {
    QlocExample ex = config.method == "qloc-ls"      ? QlocExample::LS
                     : config.method == "qloc-airy1" ? QlocExample::Airy1
                                                     : QlocExample::Airy2First;
    Expansion e = qloc(ex, config.corner);
    QuadratureSettings qs = config.quad;
    ev.method = SolutionEvaluator::DirectOracle;
    ev.spec.boundary.assign(num_boundary_conditions(d),
                            PiecewiseData::zero(config.T));
    ev.custom = [e, qs](double xv, double tv) { return e.eval(xv, tv, qs); };
  } else {  // discdata
    double x1 = config.x1, x2 = config.x2, t1 = config.t1;
    cx C1 = config.C1, C2 = config.C2;
    QuadratureSettings qs = config.quad;
    ev.method = SolutionEvaluator::DirectOracle;
    ev.spec.boundary.assign(2, PiecewiseData::zero(config.T));
    ev.custom = [=](double xv, double tv) {
      return disc_data_airy2(xv, tv, x1, x2, t1, C1, C2, qs);
    };
  }
  return evaluate_grid(ev, config.x.points(), config.t.points());
}

std::string render_csv(const ScenarioConfig& config,
                       const std::vector<FieldSample>& samples) {
  std::vector<FieldSample> rows = samples;
  std::sort(rows.begin(), rows.end(), [](const FieldSample& a, const FieldSample& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.x < b.x;
  });
  int n = int(config.dispersion.size()) - 1;
  std::ostringstream os;
  os << "x,t,re_q,im_q,err_est,regime\n";
  int failures = 0;
  for (const auto& r : rows) {
    os << fmt17(r.x) << "," << fmt17(r.t) << ",";
    if (r.ok) {
      double X = r.t > 0 ? std::abs(r.x) * std::pow(std::abs(r.x) / r.t, 1.0 / (n - 1))
                         : 0.0;
      os << fmt17(r.value.real()) << "," << fmt17(r.value.imag()) << ","
         << fmt17(r.error_estimate) << ","
         << (X > 50.0 ? "asymptotic" : "quadrature") << "\n";
    } else {
      ++failures;
      os << "nan,nan,nan,failed\n";
    }
  }
  if (failures > 0)
    os << "# incomplete: " << failures << " sample(s) failed\n";
  return os.str();
}

}  // namespace utm
