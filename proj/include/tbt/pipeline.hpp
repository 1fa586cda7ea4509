#ifndef TBT_PIPELINE_HPP
#define TBT_PIPELINE_HPP

// The verify and recover runs behind the command-line tool.

#include <string>
#include <vector>

#include "tbt/report.hpp"
#include "tbt/spec_io.hpp"

namespace tbt {

struct DefaultTolerance {
  const char* name;
  double tol;
};

/// Every check name with its default tolerance, verify rows first.
const std::vector<DefaultTolerance>& default_tolerances();
double default_tolerance(const std::string& name);

/// Attempts per sample before GSingular / ESingular propagates.
inline constexpr int kMaxSampleAttempts = 8;

/// Structure class, displacement identities, inverse identities and the
/// exchange law applicable to the spec's class.
VerificationReport run_verify(const SpecFile& file, const RunConfig& config);

/// Inversion, kernel agreement, recovery of u and uhat, annihilators, the
/// reflection coefficient route and the class shortcuts, each the worst
/// case over `config.samples` sample pairs. Throws TNotInvertible, and
/// GSingular / ESingular once a sample exhausts its attempts.
VerificationReport run_recover(const SpecFile& file, const RunConfig& config);

}  // namespace tbt

#endif  // TBT_PIPELINE_HPP
