#ifndef TBT_REPORT_HPP
#define TBT_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tbt/structured.hpp"

namespace tbt {

struct CheckResult {
  std::string name;
  double residual = 0;
  double tol = 0;
  bool pass = false;

  friend bool operator==(const CheckResult& a, const CheckResult& b);
};

struct SpecSummary {
  DimTriple dims;
  StructureClass cls = StructureClass::general;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const SpecSummary&, const SpecSummary&) = default;
};

/// Named residuals against tolerances. A NaN residual never passes.
class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(SpecSummary spec) : spec_(std::move(spec)) {}

  const SpecSummary& spec() const { return spec_; }
  const std::vector<CheckResult>& checks() const { return checks_; }

  const CheckResult& add(std::string name, double residual, double tol);
  /// Appends a row read back from a serialized report.
  void add_row(CheckResult row) { checks_.push_back(std::move(row)); }

  /// True iff every check passes (and there is at least one).
  bool pass() const;
  const CheckResult* find(const std::string& name) const;

  friend bool operator==(const VerificationReport& a, const VerificationReport& b);

 private:
  SpecSummary spec_;
  std::vector<CheckResult> checks_;
};

/// `{"spec": {"dims", "class", "seed"}, "checks": [{"name", "residual", "tol",
/// "pass"}], "pass"}`. Non-finite residuals are written as null.
std::string report_to_json(const VerificationReport& report);
/// Throws SchemaError.
VerificationReport report_from_json(const std::string& text);
std::string report_to_text(const VerificationReport& report);

enum class OutputFormat { text, json };

struct RunConfig {
  std::map<std::string, double> tol_overrides;
  std::uint64_t sample_seed = 1;
  int samples = 5;
  OutputFormat format = OutputFormat::text;

  /// The override for `name` when present, otherwise `fallback`.
  double tol(const std::string& name, double fallback) const;
  /// Throws std::invalid_argument unless every tolerance is positive and
  /// samples >= 1.
  void validate() const;
};

/// Parses "name=value". Throws std::invalid_argument.
std::pair<std::string, double> parse_tol_override(const std::string& text);

}  // namespace tbt

#endif  // TBT_REPORT_HPP
