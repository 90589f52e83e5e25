#ifndef DIRWALK_ACCEPTANCE_HPP
#define DIRWALK_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dirwalk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  int threads = 1;
  // empty: use $DIRWALK_CACHE_DIR, else a fresh temp dir removed afterwards
  std::string cache_dir;
};

// Runs the full desk-level check battery, printing one pass/fail line per
// criterion to `out`. A thrown error inside a criterion marks it failed.
std::vector<CriterionResult> run_desk_acceptance(const AcceptanceOptions& opts,
                                                 std::ostream& out);

// number of failed criteria (the intended process exit code)
int count_failures(const std::vector<CriterionResult>& results);

}  // namespace dirwalk

#endif
