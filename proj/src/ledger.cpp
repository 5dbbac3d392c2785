#include "qanc/ledger.hpp"

#include <algorithm>
#include <limits>

#include "qanc/errors.hpp"
#include "qanc/json_util.hpp"

namespace qanc {

nlohmann::json LedgerEntry::to_json() const {
  nlohmann::json j{{"name", name},
                   {"relation", relation},
                   {"required", xreal_to_json(required)},
                   {"achieved", xreal_to_json(achieved)},
                   {"margin", xreal_to_json(margin)},
                   {"pass", pass}};
  if (marginal) j["marginal"] = true;
  if (!note.empty()) j["note"] = note;
  return j;
}

LedgerEntry& ConstraintLedger::add(std::string name, const XReal& achieved,
                                   const std::string& relation, const XReal& required,
                                   std::string note) {
  LedgerEntry e;
  e.name = std::move(name);
  e.relation = relation;
  e.required = required;
  e.achieved = achieved;
  if (relation == ">" || relation == ">=") {
    e.margin = achieved - required;
  } else if (relation == "<" || relation == "<=") {
    e.margin = required - achieved;
  } else {
    throw UnsupportedError("ledger relation '" + relation + "'");
  }
  const bool strict = relation.size() == 1;
  e.pass = strict ? e.margin.sign() > 0 : e.margin.sign() >= 0;
  const XReal scale = max(max(abs(required), abs(achieved)), XReal(1e-300));
  e.marginal = e.pass && abs(e.margin) < scale * XReal(1e-10);
  e.note = std::move(note);
  entries_.push_back(std::move(e));
  return entries_.back();
}

LedgerEntry& ConstraintLedger::add_failure(std::string name, std::string note) {
  LedgerEntry e;
  e.name = std::move(name);
  e.relation = "error";
  e.margin = XReal(-1.0);
  e.pass = false;
  e.note = std::move(note);
  entries_.push_back(std::move(e));
  return entries_.back();
}

void ConstraintLedger::append(const ConstraintLedger& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

const LedgerEntry* ConstraintLedger::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

bool ConstraintLedger::pass() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const LedgerEntry& e) { return e.pass; });
}

std::optional<LedgerEntry> ConstraintLedger::first_failure() const {
  for (const auto& e : entries_) {
    if (!e.pass) return e;
  }
  return std::nullopt;
}

double ConstraintLedger::min_relative_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) {
    XReal scale = max(abs(e.required), abs(e.achieved));
    if (scale.is_zero()) scale = XReal(1.0);
    m = std::min(m, (e.margin / scale).to_double());
  }
  return m;
}

nlohmann::json ConstraintLedger::to_json() const {
  auto a = nlohmann::json::array();
  for (const auto& e : entries_) a.push_back(e.to_json());
  return a;
}

}  // namespace qanc
