#include "becomp/report.hpp"

#include <cmath>

#include "becomp/errors.hpp"

namespace becomp {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Vacuous:
      return "VACUOUS";
    case Verdict::Info:
      return "INFO";
  }
  return "FAIL";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "PASS") return Verdict::Pass;
  if (s == "FAIL") return Verdict::Fail;
  if (s == "VACUOUS") return Verdict::Vacuous;
  if (s == "INFO") return Verdict::Info;
  throw InputError("unknown verdict '" + std::string(s) + "'");
}

VerificationReport make_report(std::string check_name, double worst_slack, double tolerance) {
  VerificationReport r;
  r.check_name = std::move(check_name);
  r.worst_slack = worst_slack;
  r.tolerance = tolerance;
  // NaN slack means the check could not be evaluated; count it as a failure.
  r.verdict = (std::isnan(worst_slack) || worst_slack < -tolerance) ? Verdict::Fail : Verdict::Pass;
  return r;
}

}  // namespace becomp
