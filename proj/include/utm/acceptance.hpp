#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace utm {

// One line of the verification report.
struct CheckRow {
  std::string check;
  double expected = 0, actual = 0, tol = 0;
  bool pass = false;
};

struct AcceptanceReport {
  std::vector<CheckRow> rows;
  bool all_pass() const;
  std::string csv() const;  // header check,expected,actual,tol,pass
};

// Suites: anchors, oracles, rates, weakform, all.  Unknown or empty suite
// names throw domain_error.  When `progress` is non-null each row is echoed
// there as it completes.
AcceptanceReport run_acceptance(const std::string& suite,
                                std::ostream* progress = nullptr);

std::vector<std::string> acceptance_suites();

}  // namespace utm
