#include "curv4/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace curv4 {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("?");
}

ReportEntry to_entry(const PinchReport& r) {
  ReportEntry e;
  e.id = std::string(to_string(r.id));
  e.lhs = r.lhs;
  e.rhs = r.rhs;
  e.margin = r.margin;
  e.tolerance = r.tolerance;
  e.pass = r.satisfied;
  if (r.exact) {
    e.lhs_exact = r.lhs_exact;
    e.rhs_exact = r.rhs_exact;
    e.margin_exact = r.margin_exact;
  }
  e.details.emplace_back("equality", r.equality_flag ? "true" : "false");
  if (!r.equality_diagnosis.empty()) e.details.emplace_back("diagnosis", r.equality_diagnosis);
  if (r.rhs_outer) e.details.emplace_back("rhs_outer", format_double(*r.rhs_outer));
  if (r.ratio) e.details.emplace_back("ratio", format_double(*r.ratio));
  if (!r.note.empty()) e.details.emplace_back("note", r.note);
  return e;
}

ReportEntry to_entry(const IdentityReport& r) {
  ReportEntry e;
  e.id = r.id;
  e.lhs = r.max_residual;
  e.rhs = 0;
  e.margin = r.tolerance - r.max_residual;
  e.tolerance = r.tolerance;
  e.pass = r.within_tolerance;
  if (r.exact) {
    e.lhs_exact = r.max_residual_exact;
    e.rhs_exact = "0";
    e.margin_exact = r.max_residual_exact == "0" ? "0" : "-" + r.max_residual_exact;
  }
  e.details.emplace_back("points", std::to_string(r.points_checked));
  if (!r.note.empty()) e.details.emplace_back("note", r.note);
  return e;
}

void Report::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : info_)
    if (k == key) {
      v = value;
      return;
    }
  info_.emplace_back(key, value);
}

bool Report::all_pass() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const ReportEntry& e) { return e.pass; });
}

std::string Report::text() const {
  std::ostringstream os;
  os << "curv4 " << command_;
  if (!subject_.empty()) os << ' ' << subject_;
  os << '\n';
  for (const auto& [k, v] : info_) os << "  " << k << ": " << v << '\n';
  std::size_t width = 0;
  for (const auto& e : entries_) width = std::max(width, e.id.size());
  for (const auto& e : entries_) {
    os << "  " << e.id << std::string(width - e.id.size() + 2, ' ') << (e.pass ? "pass" : "FAIL")
       << "  lhs=" << e.lhs_exact.value_or(format_double(e.lhs))
       << "  rhs=" << e.rhs_exact.value_or(format_double(e.rhs))
       << "  margin=" << e.margin_exact.value_or(format_double(e.margin));
    for (const auto& [k, v] : e.details) os << "  " << k << '=' << v;
    os << '\n';
  }
  os << "result: " << (all_pass() ? "pass" : "FAIL") << '\n';
  return os.str();
}

std::string Report::structured() const {
  nlohmann::ordered_json doc;
  doc["schema"] = "curv4-report v1";
  doc["command"] = command_;
  doc["subject"] = subject_;
  nlohmann::ordered_json info = nlohmann::ordered_json::object();
  for (const auto& [k, v] : info_) info[k] = v;
  doc["info"] = info;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json c;
    c["id"] = e.id;
    c["lhs"] = e.lhs;
    c["rhs"] = e.rhs;
    c["margin"] = e.margin;
    c["tolerance"] = e.tolerance;
    c["pass"] = e.pass;
    if (e.lhs_exact) {
      c["lhs_exact"] = *e.lhs_exact;
      c["rhs_exact"] = *e.rhs_exact;
      c["margin_exact"] = *e.margin_exact;
    }
    for (const auto& [k, v] : e.details) c[k] = v;
    checks.push_back(c);
  }
  doc["checks"] = checks;
  doc["pass"] = all_pass();
  return doc.dump(2) + "\n";
}

}  // namespace curv4
