#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace beamspec::cli {

enum class CheckStatus { Pass, Fail, Info };

struct CheckRow {
  std::string name;
  CheckStatus status = CheckStatus::Info;
  std::string measured;
  std::string threshold;
};

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 42;
};

/// Runs every module invariant. Rows come back in a fixed order; `Info` rows are
/// reported but do not affect the verdict.
std::vector<CheckRow> run_verify_suite(const VerifyOptions& options);

bool all_passed(const std::vector<CheckRow>& rows);

void print_table(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace beamspec::cli
