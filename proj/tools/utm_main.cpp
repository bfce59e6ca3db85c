// utm: batch evaluator and verification driver for the half-line solver.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 numerical failure (partial output flagged in a trailing CSV comment).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "utm/acceptance.hpp"
#include "utm/scenarios.hpp"
#include "utm/special_functions.hpp"

namespace {

using namespace utm;

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

// shared by eval and scenario: run the grid, emit the CSV, map failures to
// exit code 3
int run_and_emit(const ScenarioConfig& cfg, const std::string& csv_override) {
  std::vector<FieldSample> samples = run_scenario(cfg);
  std::string csv = render_csv(cfg, samples);
  std::string path = csv_override.empty() ? cfg.csv_path : csv_override;
  int rc = write_text(path, csv);
  if (rc != 0) return rc;
  if (!cfg.report_path.empty()) {
    std::ofstream rep(cfg.report_path);
    if (!rep) {
      std::cerr << "error: cannot open " << cfg.report_path << "\n";
      return 3;
    }
    rep << cfg.resolved_json();
  }
  for (const auto& s : samples)
    if (!s.ok) {
      std::cerr << "error: " << s.error << " (at x=" << s.x << ", t=" << s.t
                << ")\n";
      return 3;
    }
  return 0;
}

int cmd_eval(const std::string& config_path) {
  ScenarioConfig cfg = ScenarioConfig::from_json_file(config_path);
  return run_and_emit(cfg, "");
}

int cmd_scenario(const std::string& name, const std::string& out_dir,
                 bool dry_run) {
  ScenarioConfig cfg = builtin_scenario(name);
  if (dry_run) {
    std::cout << cfg.resolved_json();
    return 0;
  }
  std::string path;
  if (!out_dir.empty()) path = out_dir + "/" + name + ".csv";
  return run_and_emit(cfg, path);
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace((unsigned char)item[used]))
        ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw domain_error(what + ": cannot parse \"" + item + "\" as a number");
    }
  }
  if (out.empty()) throw domain_error(what + ": empty list");
  return out;
}

int cmd_special(const std::string& omega, int m, const std::string& component,
                const std::string& points_path) {
  // omega: comma-separated coefficients of k^0, k^1, ..., k^n
  Dispersion d(parse_number_list(omega, "--omega"));
  SpecialFnKey key{d, m, SpecialFnKey::Component, 0};
  if (component == "sum") {
    key.selector = SpecialFnKey::Sum;
  } else if (component == "C") {
    key.selector = SpecialFnKey::IVP;
  } else {
    try {
      key.j = std::stoi(component);
    } catch (const std::exception&) {
      throw domain_error("--component must be a sector index, \"sum\" or \"C\"");
    }
  }
  std::ifstream in(points_path);
  if (!in) throw domain_error("cannot open points file " + points_path);

  std::ostringstream os;
  os << "x,t,re_I,im_I,err_est,regime\n";
  bool failed = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    if (auto p = trimmed.find('#'); p != std::string::npos) trimmed.erase(p);
    if (trimmed.find_first_not_of(" \t\r,") == std::string::npos) continue;
    for (char& ch : trimmed)
      if (ch == ',') ch = ' ';
    std::istringstream ls(trimmed);
    double x, t;
    if (!(ls >> x >> t))
      throw domain_error("points file line " + std::to_string(lineno) +
                         ": expected \"x t\" or \"x,t\"");
    char buf[256];
    try {
      SpecialValue v = special_eval(key, x, t);
      const char* regime = v.regime == SpecialValue::Exact ? "exact"
                           : v.regime == SpecialValue::Quadrature
                               ? "quadrature"
                               : "asymptotic";
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", x, t,
                    v.value.real(), v.value.imag(), v.error_estimate, regime);
    } catch (const numerical_error& e) {
      failed = true;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,nan,nan,nan,failed\n", x, t);
    }
    os << buf;
  }
  if (failed) os << "# incomplete: some point(s) failed\n";
  std::cout << os.str();
  return failed ? 3 : 0;
}

int cmd_verify(const std::string& suite) {
  AcceptanceReport rep = run_acceptance(suite, &std::cerr);
  std::cout << rep.csv();
  return rep.all_pass() ? 0 : 1;
}

int cmd_converge(const std::string& config_path) {
  // tolerance-refinement study: each grid point is evaluated over a
  // decreasing tolerance ladder; successive differences estimate the
  // self-convergence of the evaluation
  ScenarioConfig cfg = ScenarioConfig::from_json_file(config_path);
  double base = cfg.quad.tolerance;
  std::vector<double> ladder{base * 1e4, base * 1e2, base};
  std::cout << "x,t,tolerance,re_q,im_q,delta\n";
  std::vector<std::vector<FieldSample>> runs;
  for (double tol : ladder) {
    ScenarioConfig c = cfg;
    c.quad.tolerance = tol;
    runs.push_back(run_scenario(c));
  }
  bool failed = false;
  char buf[256];
  for (std::size_t i = 0; i < runs.back().size(); ++i) {
    for (std::size_t l = 0; l < ladder.size(); ++l) {
      const FieldSample& s = runs[l][i];
      if (!s.ok) {
        failed = true;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,nan,nan,nan\n", s.x,
                      s.t, ladder[l]);
        std::cout << buf;
        continue;
      }
      double delta =
          l == 0 || !runs[l - 1][i].ok
              ? std::numeric_limits<double>::quiet_NaN()
              : std::abs(s.value - runs[l - 1][i].value);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    s.x, s.t, ladder[l], s.value.real(), s.value.imag(), delta);
      std::cout << buf;
    }
  }
  if (failed) {
    std::cout << "# incomplete: some sample(s) failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-line dispersive IBVP evaluator"};
  app.require_subcommand(1);

  std::string config_path, scenario_name, out_dir, omega, component = "sum",
                                                          points_path, suite;
  int m = 0;
  bool dry_run = false;

  auto* eval = app.add_subcommand("eval", "evaluate a JSON config on its grid");
  eval->add_option("--config", config_path, "JSON config file")->required();

  auto* scen = app.add_subcommand("scenario", "run a named built-in scenario");
  scen->add_option("name", scenario_name, "scenario name")->required();
  scen->add_option("--out", out_dir, "directory for <name>.csv");
  scen->add_flag("--dry-run", dry_run, "print the resolved config and stop");

  auto* special = app.add_subcommand("special", "evaluate a kernel function");
  special->add_option("--omega", omega, "coefficients of k^0,k^1,...,k^n")
      ->required();
  special->add_option("--m", m, "pole order (>= -1)");
  special->add_option("--component", component, "sector index, sum, or C");
  special->add_option("--points", points_path, "file of x t pairs")->required();

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "anchors | oracles | rates | weakform | all")
      ->required();

  auto* converge = app.add_subcommand("converge", "tolerance refinement study");
  converge->add_option("--config", config_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits 0, any parse problem is usage error
  }

  try {
    if (*eval) return cmd_eval(config_path);
    if (*scen) return cmd_scenario(scenario_name, out_dir, dry_run);
    if (*special) return cmd_special(omega, m, component, points_path);
    if (*verify) return cmd_verify(suite);
    if (*converge) return cmd_converge(config_path);
  } catch (const utm::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const utm::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
