// Runs every verification suite and prints the full report.  Exit status 0
// iff every row passes.

#include <iostream>

#include "utm/acceptance.hpp"

int main() {
  utm::AcceptanceReport rep = utm::run_acceptance("all", &std::cerr);
  std::cout << rep.csv();
  int failures = 0;
  for (const auto& r : rep.rows)
    if (!r.pass) ++failures;
  if (failures) {
    std::cerr << failures << " check(s) failed\n";
    return 1;
  }
  std::cerr << "all " << rep.rows.size() << " checks passed\n";
  return 0;
}
