#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ctoda/json_io.hpp"

namespace ctoda {

/// Batch-verification configuration; serializable as JSON.
struct SuiteConfig {
  int order = 32;
  int grid = 256;
  double fd_eps = 1e-4;
  std::map<std::string, double> tolerances;  // overrides of the defaults
  std::vector<Json> corpus;
  std::vector<std::string> checks;  // empty = all
  std::string format = "json";

  double tol(const std::string& check) const;
  static const std::map<std::string, double>& default_tolerances();
  static const std::vector<std::string>& all_checks();
};

SuiteConfig suite_config_from_json(const Json& j);
Json suite_config_to_json(const SuiteConfig& c);

struct CheckRecord {
  std::string check;
  std::string identity;  // the verified identity, human-readable
  std::string target;    // corpus entry label
  std::vector<int> indices;
  double eps = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<CheckRecord> records;
  std::vector<std::pair<std::string, std::string>> skipped;  // entry, reason
  std::string config_echo;
  std::string timestamp;

  int failures() const;
  void sort_records();
};

/// Executes the selected checks over the corpus (entries run concurrently);
/// the report is assembled order-stable.  Malformed corpus entries are
/// skipped with a recorded reason.
Report run_suite(const SuiteConfig& config);

void emit_json(const Report& r, std::ostream& os);
void emit_csv(const Report& r, std::ostream& os);

/// Two-column CSV (eps, residual), e.g. for order-of-accuracy plots.
void emit_sweep_csv(const std::vector<std::pair<double, double>>& pts,
                    std::ostream& os);

}  // namespace ctoda
