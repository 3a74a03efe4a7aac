#include "cfw/report.hpp"

namespace cfw {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Flag: return "FLAG";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Sat: return "SAT";
  }
  return "?";
}

void Report::add(const std::string& id, Verdict v, const std::string& detail,
                 bool exempt) {
  checks_.push_back({id, v, detail, exempt});
}

void Report::note(const std::string& line) { human_.push_back(line); }

void Report::append(const Report& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  human_.insert(human_.end(), other.human_.begin(), other.human_.end());
}

std::string Report::render_machine() const {
  std::string out;
  for (const auto& c : checks_) {
    out += "VERDICT " + c.id + " " + to_string(c.verdict);
    if (!c.detail.empty()) out += " " + c.detail;
    out += "\n";
  }
  return out;
}

std::string Report::render_human() const {
  std::string out;
  for (const auto& line : human_) out += line + "\n";
  if (!human_.empty()) out += "\n";
  out += render_machine();
  return out;
}

int Report::exit_code() const {
  for (const auto& c : checks_)
    if (c.verdict == Verdict::Fail && !c.exempt) return 1;
  return 0;
}

}  // namespace cfw
