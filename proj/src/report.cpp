#include "dirac8/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "dirac8/csv.hpp"

namespace dirac8 {

Check& VerificationReport::add(std::string name, std::string relation, double measured,
                               double tolerance, std::string notes) {
  Check c{std::move(name), std::move(relation), measured <= tolerance, measured, tolerance,
          std::move(notes)};
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& VerificationReport::add_flag(std::string name, std::string relation, bool passed,
                                    std::string notes) {
  Check c{std::move(name), std::move(relation), passed, passed ? 0.0 : 1.0, 0.0,
          std::move(notes)};
  checks_.push_back(std::move(c));
  return checks_.back();
}

void VerificationReport::append(const VerificationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks_) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<Check> VerificationReport::failures() const {
  std::vector<Check> out;
  for (const auto& c : checks_) {
    if (!c.passed) out.push_back(c);
  }
  return out;
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["all_passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json e;
    e["name"] = c.name;
    e["relation"] = c.relation;
    e["status"] = c.passed ? "pass" : "fail";
    // NaN is not representable in JSON.
    if (std::isfinite(c.measured)) {
      e["measured"] = c.measured;
    } else {
      e["measured"] = nullptr;
    }
    e["tolerance"] = c.tolerance;
    e["notes"] = c.notes;
    j["checks"].push_back(std::move(e));
  }
  j["notes"] = notes_;
  return j;
}

void VerificationReport::write_text(std::ostream& out) const {
  for (const auto& c : checks_) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(34) << c.name << ' '
        << c.relation << "  measured=" << csv::format_double(c.measured)
        << " tol=" << csv::format_double(c.tolerance);
    if (!c.notes.empty()) out << "  (" << c.notes << ')';
    out << '\n';
  }
  for (const auto& n : notes_) out << "note: " << n << '\n';
}

void VerificationReport::write_csv(std::ostream& out) const {
  out << "name,relation,status,measured,tolerance,notes\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + '"';
  };
  for (const auto& c : checks_) {
    out << c.name << ',' << quote(c.relation) << ',' << (c.passed ? "pass" : "fail") << ','
        << csv::format_double(c.measured) << ',' << csv::format_double(c.tolerance) << ','
        << quote(c.notes) << '\n';
  }
}

}  // namespace dirac8
