#pragma once

// Run reports: one entry per check, rendered as aligned text or as a
// structured document with schema tag "curv4-report v1".

#include "curv4/catalog.hpp"
#include "curv4/pinching.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curv4 {

struct ReportEntry {
  std::string id;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  double tolerance = 0;
  bool pass = false;
  /// Exact renderings, present in rational mode.
  std::optional<std::string> lhs_exact, rhs_exact, margin_exact;
  /// Extra named values in insertion order ("equality", "ratio", ...).
  std::vector<std::pair<std::string, std::string>> details;
};

ReportEntry to_entry(const PinchReport& r);
ReportEntry to_entry(const IdentityReport& r);

class Report {
 public:
  Report(std::string command, std::string subject) : command_(std::move(command)), subject_(std::move(subject)) {}

  void set(const std::string& key, const std::string& value);
  void add(ReportEntry e) { entries_.push_back(std::move(e)); }

  const std::vector<ReportEntry>& entries() const { return entries_; }
  bool all_pass() const;

  std::string text() const;
  std::string structured() const;

 private:
  std::string command_;
  std::string subject_;
  std::vector<std::pair<std::string, std::string>> info_;
  std::vector<ReportEntry> entries_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace curv4
