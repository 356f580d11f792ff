#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qric/json_io.h"

namespace qric {

enum class Relation { Equal, AtLeast, AtMost, Below, Above };

std::string to_string(Relation r);

struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::Equal;
  bool pass = false;
};

/// Equal: |measured - expected| <= tol. AtLeast / AtMost allow `tol` of slack.
/// Below / Above are strict comparisons against `expected`.
bool evaluate(double measured, double expected, double tol, Relation relation);

class Report {
 public:
  explicit Report(Json config, std::optional<double> tol_override = std::nullopt);

  /// `tol` is replaced by the override when one is set.
  const Check& check(std::string name, double measured, double expected, double tol,
                     Relation relation = Relation::Equal);
  void detail(const std::string& key, Json value) { details_[key] = std::move(value); }
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  void time(const std::string& key, double seconds) { timings_[key] = seconds; }

  bool all_pass() const;
  const std::vector<Check>& checks() const { return checks_; }

  /// Timings are left out unless asked for, so a fixed seed gives identical bytes.
  Json to_json(bool include_timings) const;
  void print_summary(std::ostream& os, const std::string& title) const;

 private:
  Json config_;
  std::optional<double> tol_override_;
  std::vector<Check> checks_;
  Json details_ = Json::object();
  Json timings_ = Json::object();
  std::vector<std::string> warnings_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qric
