#include "qric/report.h"

#include <cmath>
#include <iomanip>

namespace qric {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::AtLeast: return "at_least";
    case Relation::AtMost: return "at_most";
    case Relation::Below: return "below";
    case Relation::Above: return "above";
  }
  return "equal";
}

bool evaluate(double measured, double expected, double tol, Relation relation) {
  if (!std::isfinite(measured)) return false;
  switch (relation) {
    case Relation::Equal: return std::abs(measured - expected) <= tol;
    case Relation::AtLeast: return measured >= expected - tol;
    case Relation::AtMost: return measured <= expected + tol;
    case Relation::Below: return measured < expected;
    case Relation::Above: return measured > expected;
  }
  return false;
}

Report::Report(Json config, std::optional<double> tol_override)
    : config_(std::move(config)), tol_override_(tol_override) {}

const Check& Report::check(std::string name, double measured, double expected, double tol, Relation relation) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.expected = expected;
  c.tolerance = tol_override_.value_or(tol);
  c.relation = relation;
  c.pass = evaluate(measured, expected, c.tolerance, relation);
  checks_.push_back(std::move(c));
  return checks_.back();
}

bool Report::all_pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json(bool include_timings) const {
  Json j;
  j["config"] = config_;
  std::size_t passed = 0;
  Json rows = Json::array();
  for (const auto& c : checks_) {
    passed += c.pass ? 1 : 0;
    rows.push_back(Json{{"name", c.name},
                        {"status", c.pass ? "pass" : "fail"},
                        {"measured", c.measured},
                        {"expected", c.expected},
                        {"tolerance", c.tolerance},
                        {"relation", to_string(c.relation)}});
  }
  j["summary"] = Json{{"checks", checks_.size()}, {"passed", passed}, {"all_pass", all_pass()}};
  j["checks"] = rows;
  if (!warnings_.empty()) j["warnings"] = warnings_;
  j["details"] = details_;
  if (include_timings) j["timings_s"] = timings_;
  return j;
}

void Report::print_summary(std::ostream& os, const std::string& title) const {
  std::size_t passed = 0;
  for (const auto& c : checks_) passed += c.pass ? 1 : 0;
  os << title << ": " << passed << "/" << checks_.size() << " checks passed\n";
  for (const auto& w : warnings_) os << "  warning: " << w << "\n";
  for (const auto& c : checks_) {
    if (c.pass) continue;
    os << "  FAIL " << c.name << ": measured " << std::setprecision(17) << c.measured << ", expected "
       << to_string(c.relation) << " " << c.expected << " (tol " << c.tolerance << ")\n";
  }
}

}  // namespace qric
