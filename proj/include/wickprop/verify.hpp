#pragma once

#include <string>
#include <vector>

namespace wickprop {

struct VerifyRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Self-contained invariant suites: Wick algebra laws, decomposition counts
// against a literal recursive enumeration, the combinatorial bound, series
// split vs direct summation, the linear cross-check, and norm nesting.
// quick runs at K=3, N=3; full at K=4, N=5.
std::vector<VerifyRow> run_verification(bool full);

bool all_passed(const std::vector<VerifyRow>& rows);

}  // namespace wickprop
