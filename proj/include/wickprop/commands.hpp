#pragma once

#include <cstdint>
#include <string>

namespace wickprop {

// Exit codes: 0 success, 1 config or input error, 2 blow-up (partial
// outputs written and flagged), 3 verification failure.

int cmd_solve(const std::string& config_path, const std::string& out_override);
int cmd_verify(const std::string& level);  // "quick" or "full"
// pairs_spec: "r:p[,r:p...]"; report printed to standard output.
int cmd_norms(const std::string& bundle_dir, const std::string& pairs_spec);
int cmd_sample(const std::string& bundle_dir, int n_samples, std::uint64_t seed);

}  // namespace wickprop
