#include "tbt/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tbt/errors.hpp"

namespace tbt {

namespace {

using ojson = nlohmann::ordered_json;

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool operator==(const CheckResult& a, const CheckResult& b) {
  return a.name == b.name && same_double(a.residual, b.residual) && same_double(a.tol, b.tol) &&
         a.pass == b.pass;
}

bool operator==(const VerificationReport& a, const VerificationReport& b) {
  return a.spec_ == b.spec_ && a.checks_ == b.checks_;
}

const CheckResult& VerificationReport::add(std::string name, double residual, double tol) {
  checks_.push_back({std::move(name), residual, tol, std::isfinite(residual) && residual <= tol});
  return checks_.back();
}

bool VerificationReport::pass() const {
  if (checks_.empty()) return false;
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

std::string report_to_json(const VerificationReport& report) {
  ojson doc;
  const SpecSummary& s = report.spec();
  doc["spec"]["dims"] = {s.dims.m1, s.dims.m2, s.dims.m3};
  doc["spec"]["class"] = std::string(to_string(s.cls));
  doc["spec"]["seed"] = s.seed ? ojson(*s.seed) : ojson(nullptr);
  doc["checks"] = ojson::array();
  for (const auto& c : report.checks()) {
    ojson row;
    row["name"] = c.name;
    row["residual"] = std::isfinite(c.residual) ? ojson(c.residual) : ojson(nullptr);
    row["tol"] = c.tol;
    row["pass"] = c.pass;
    doc["checks"].push_back(std::move(row));
  }
  doc["pass"] = report.pass();
  return doc.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  try {
    const auto& spec = doc.at("spec");
    const auto dims = spec.at("dims").get<std::vector<int>>();
    if (dims.size() != 3) throw SchemaError("/spec/dims", "expected three entries");
    SpecSummary s;
    s.dims = DimTriple::make(dims[0], dims[1], dims[2]);
    s.cls = parse_structure_class(spec.at("class").get<std::string>());
    if (!spec.at("seed").is_null()) s.seed = spec.at("seed").get<std::uint64_t>();
    VerificationReport report(s);
    for (const auto& row : doc.at("checks")) {
      const auto& r = row.at("residual");
      report.add_row({row.at("name").get<std::string>(),
                      r.is_null() ? std::nan("") : r.get<double>(), row.at("tol").get<double>(),
                      row.at("pass").get<bool>()});
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("", std::string("malformed report: ") + e.what());
  }
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream out;
  const SpecSummary& s = report.spec();
  out << "spec: dims " << s.dims.m1 << "," << s.dims.m2 << "," << s.dims.m3 << "  class "
      << to_string(s.cls);
  if (s.seed) out << "  seed " << *s.seed;
  out << "\n";
  std::size_t width = 0;
  for (const auto& c : report.checks()) width = std::max(width, c.name.size());
  char line[64];
  for (const auto& c : report.checks()) {
    out << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ');
    std::snprintf(line, sizeof line, "residual %.3e  tol %.1e", c.residual, c.tol);
    out << line << "\n";
  }
  out << "verdict: " << (report.pass() ? "pass" : "fail") << "\n";
  return out.str();
}

double RunConfig::tol(const std::string& name, double fallback) const {
  const auto it = tol_overrides.find(name);
  return it == tol_overrides.end() ? fallback : it->second;
}

void RunConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  for (const auto& [name, value] : tol_overrides)
    if (!(value > 0) || !std::isfinite(value))
      throw std::invalid_argument("tolerance '" + name + "' must be positive");
}

std::pair<std::string, double> parse_tol_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw std::invalid_argument("expected name=value, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) throw std::invalid_argument("bad tolerance value '" + value + "'");
  return {name, v};
}

}  // namespace tbt
