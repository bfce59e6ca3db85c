#pragma once

#include <string>
#include <vector>

#include "utm/local_expansions.hpp"
#include "utm/utm_solver.hpp"

namespace utm {

// One output axis: either an explicit list of sample values or a
// min/max/count range with linear or logarithmic spacing.
struct AxisSpec {
  double min = 0, max = 1;
  int count = 2;
  bool log_spacing = false;
  std::vector<double> values;  // when non-empty, overrides the range

  std::vector<double> points() const;
};

// Fully resolved batch-evaluation request.  Built from JSON (strict: unknown
// keys are errors) or from one of the named built-in figure scenarios.
struct ScenarioConfig {
  std::string name = "custom";
  std::vector<double> dispersion{0, 0, 1};
  // ls | airy1 | airy2 | general | qloc-ls | qloc-airy1 | qloc-airy2 | discdata
  std::string method = "general";

  // IBVP data, used by the solver methods
  PiecewiseData initial = PiecewiseData::zero();
  std::vector<PiecewiseData> boundary;
  double T = 1.0;

  // corner constants, used by the qloc methods
  CornerData corner;

  // disc-data constants, used by method "discdata"
  double x1 = 1.0, x2 = 2.0, t1 = 0.25;
  cx C1 = 1.0, C2 = -1.0;

  AxisSpec x, t;
  QuadratureSettings quad;
  std::string csv_path, report_path;

  void validate() const;  // throws domain_error with a descriptive message

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
  std::string resolved_json() const;  // canonical round-trip form (--dry-run)
};

// The named figure scenarios with the pinned constants and snapshot times.
// Throws domain_error listing the valid names.
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

std::vector<FieldSample> run_scenario(const ScenarioConfig& config);

// CSV with header x,t,re_q,im_q,err_est,regime; rows sorted by (t, x);
// round-trip decimal floats.  Failed samples render as nan with regime
// "failed" and a trailing comment line flags the partial output.
std::string render_csv(const ScenarioConfig& config,
                       const std::vector<FieldSample>& samples);

}  // namespace utm
