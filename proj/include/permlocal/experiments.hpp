#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "permlocal/sampler.hpp"

namespace permlocal::experiments {

enum class Kind {
  pattern_census,
  gap_sweep,
  tail_weakcomp,
  tail_density,
  exact_vs_asym,
  eq1_equivalence,
};

Kind kind_from_string(const std::string& s);
const char* kind_to_string(Kind k);

// Declarative sweep description.  Field use depends on kind; see README for
// the config-file keys (same names).
struct Spec {
  Kind kind = Kind::pattern_census;
  long long n = 0;
  long long m = -1;                      // explicit; < 0 means use the schedule
  double m_coeff = -1.0, m_power = 1.0;  // m = ceil(coeff * n^power), clamped
  std::vector<long long> n_grid;
  long long k = 0;
  std::vector<long long> k_grid;
  double rho = -1.0;
  double beta = -1.0;
  double theta = 0.0;
  double eps = 0.0;
  long long t = 0;
  long long s = 0;
  long long ell = -1;
  long long position = 1;
  bool random_position = false;
  std::string tau;  // single-pattern census mode
  long long samples = 0;
  uint64_t seed = 1;
  int workers = 2;
  sampler::PermSampler::Kind sampler_kind = sampler::PermSampler::Kind::dp;
  bool exact_mode = false;
  double tol_se = 3.0;
  double tol_rel = 0.05;

  long long resolved_m(long long for_n) const;

  static Spec from_kv(const std::vector<std::pair<std::string, std::string>>& kv);
  static Spec from_file(const std::string& path);
};

// key=value lines; '#' comments and blank lines are skipped.
std::vector<std::pair<std::string, std::string>> read_kv_file(const std::string& path);

struct Row {
  std::string kind;
  std::string label;
  long long n = 0, m = 0, k = 0, ell = -1;
  double rho = nan_value();
  double alpha = nan_value();
  long long samples = 0;
  long long successes = 0;
  double estimate = nan_value();
  double se = nan_value();
  double ci_low = nan_value();
  double ci_high = nan_value();
  std::string exact_num;  // decimal strings; empty when not computed
  std::string exact_den;
  double exact_approx = nan_value();
  double prediction = nan_value();
  double deviation = nan_value();
  int pass = -1;  // -1 informational, 0 fail, 1 pass
  std::string note;

  static double nan_value();
};

struct Report {
  Spec spec;
  std::string sampler_label;
  bool approximate_sampler = false;
  std::vector<Row> rows;

  bool all_pass() const;
  void write_csv(std::ostream& os) const;
  void write_jsonl(std::ostream& os) const;
};

// Shared writers so multi-suite reports use the same schema.  The metadata
// string is free-form key=value text; it must not contain newlines.
void write_rows_csv(std::ostream& os, const std::string& meta,
                    const std::vector<Row>& rows);
void write_rows_jsonl(std::ostream& os, const std::string& meta_fields,
                      const std::vector<Row>& rows);

Report run_pattern_census(const Spec& spec);
Report run_gap_sweep(const Spec& spec);
Report run_tail_checks(const Spec& spec);
Report run_exact_vs_asym(const Spec& spec);
Report run_eq1_equivalence(const Spec& spec);
Report run_experiment(const Spec& spec);

// Lehmer rank over S_k, used to index census cells.
long long pattern_rank(const Permutation& p);
Permutation pattern_unrank(long long rank, long long k);

}  // namespace permlocal::experiments
