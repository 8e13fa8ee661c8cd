#pragma once

#include <map>
#include <string>
#include <string_view>

namespace becomp {

enum class Verdict { Pass, Fail, Vacuous, Info };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

// Outcome of one numerical check. worst_slack follows the convention
// "positive means the inequality holds with margin"; a report is FAIL exactly
// when worst_slack < -tolerance.
struct VerificationReport {
  std::string check_name;
  std::string label;
  std::string digest;
  Verdict verdict = Verdict::Pass;
  double worst_slack = 0.0;
  double tolerance = 0.0;
  std::map<std::string, double> constants;
  std::string notes;
  double runtime_ms = 0.0;

  bool passed() const { return verdict != Verdict::Fail; }
};

// PASS/FAIL from a slack and a tolerance.
VerificationReport make_report(std::string check_name, double worst_slack, double tolerance);

}  // namespace becomp
