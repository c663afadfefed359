#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace dirac8 {

/// One verified relation. `measured` is compared against `tolerance` with <=.
struct Check {
  std::string name;
  std::string relation;  // the identity or property being checked, in formula form
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string notes;
};

class VerificationReport {
 public:
  /// Records a check that passes iff measured <= tolerance (NaN fails).
  Check& add(std::string name, std::string relation, double measured, double tolerance,
             std::string notes = {});
  /// Records a boolean check.
  Check& add_flag(std::string name, std::string relation, bool passed, std::string notes = {});
  void append(const VerificationReport& other);
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] const std::vector<Check>& checks() const { return checks_; }
  [[nodiscard]] const std::vector<std::string>& notes() const { return notes_; }
  [[nodiscard]] std::vector<Check> failures() const;
  [[nodiscard]] const Check* find(const std::string& name) const;

  [[nodiscard]] nlohmann::json to_json() const;
  void write_text(std::ostream& out) const;
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

}  // namespace dirac8
