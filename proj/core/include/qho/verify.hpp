#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qho/coefficients.hpp"

namespace qho {

// One line of the verification report.  pass reflects `measured <= threshold`
// or `measured >= threshold` depending on comparison.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparison = "<=";
  bool pass = false;
  std::string note;
};

// CSV tables produced alongside the report; byte-identical across runs and
// thread counts.
struct VerifyArtifacts {
  std::string fundamental_csv;
  std::string states_csv;
  std::string trajectory_csv;
};

// Runs the full invariant suite against one coefficient set: transport and
// superposition residuals, Pinney consistency, small-time continuity, norm
// law, PDE residuals in both frames, propagator round trip, Gauss transform,
// kernel asymptotics, Ehrenfest and normal-form residuals, determinism.
// Checks never throw; a check that cannot run records a failure with a note.
std::vector<CheckResult> verify_coefficients(const CoefficientSet& coeffs,
                                             std::uint64_t seed,
                                             VerifyArtifacts* artifacts = nullptr);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qho
