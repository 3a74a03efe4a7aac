#pragma once

#include <string>
#include <vector>

namespace cfw {

enum class Verdict { Pass, Fail, Flag, Unsat, Sat };

std::string to_string(Verdict v);

/// One report entry. Machine rendering is one line per check:
///   VERDICT <check-id> <PASS|FAIL|FLAG|UNSAT|SAT> [detail]
/// FLAG entries and `exempt` FAILs never fail the exit code; they are the
/// honesty channel for injected assumptions and contested steps.
struct Check {
  std::string id;
  Verdict verdict;
  std::string detail;
  bool exempt = false;
};

class Report {
public:
  void add(const std::string& id, Verdict v, const std::string& detail = "",
           bool exempt = false);
  /// Free-form human output (suppressed by --machine).
  void note(const std::string& line);
  void append(const Report& other);

  const std::vector<Check>& checks() const { return checks_; }

  std::string render_machine() const;
  std::string render_human() const;

  /// 0 when no effective failure; 1 otherwise. (Config errors exit 2 and
  /// capacity errors exit 3 before a report exists.)
  int exit_code() const;

private:
  std::vector<Check> checks_;
  std::vector<std::string> human_;
};

}  // namespace cfw
