#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qanc/xreal.hpp"

namespace qanc {

/// One named inequality: `achieved` compared against `required`.
/// margin = achieved - required for lower bounds, required - achieved for
/// upper bounds; pass iff margin > 0 (or >= 0 when the relation is non-strict).
struct LedgerEntry {
  std::string name;
  std::string relation;  // ">", ">=", "<", "<="
  XReal required;
  XReal achieved;
  XReal margin;
  bool pass = false;
  bool marginal = false;  // passing with margin below 1e-10 of the entry scale
  std::string note;

  nlohmann::json to_json() const;
};

class ConstraintLedger {
 public:
  /// Records achieved `relation` required.
  LedgerEntry& add(std::string name, const XReal& achieved, const std::string& relation,
                   const XReal& required, std::string note = {});
  /// Records an entry whose evaluation itself failed (e.g. a construction
  /// error); it fails with an undefined margin.
  LedgerEntry& add_failure(std::string name, std::string note);
  void append(const ConstraintLedger& other);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const LedgerEntry* find(const std::string& name) const;
  bool pass() const;
  std::optional<LedgerEntry> first_failure() const;
  /// Smallest margin relative to max(|required|, |achieved|).
  double min_relative_margin() const;

  nlohmann::json to_json() const;

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace qanc
