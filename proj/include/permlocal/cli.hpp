#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "permlocal/experiments.hpp"

namespace permlocal::cli {

// Exit codes: 0 all good, 1 check or runtime failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string suite = "all";
  uint64_t seed = 1;
  int workers = 2;
  std::string out_path;
  std::string format = "csv";
};

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOutcome {
  bool ok = true;
  std::vector<CheckLine> checks;
  std::vector<experiments::Row> rows;
};

// Runs one named verification suite (or "all") at its documented desk-scale
// parameters.  Progress lines go to `progress` as they complete.
VerifyOutcome run_verify(const VerifyOptions& options, std::ostream& progress);

std::vector<std::string> verify_suite_names();

}  // namespace permlocal::cli
