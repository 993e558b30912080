#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "contactlab/report.hpp"

namespace contactlab {

struct RunConfig {
  int points = 100;
  std::uint64_t seed = 42;
  double tol_first = 1e-6;      // algebraic axioms
  double tol_derived = 1e-4;    // nabla xi, H_SQUARED, DER_PHI_SQ
  double tol_curvature = 1e-3;  // Ricci-level identities, fits, soliton residuals
  std::optional<double> tol_third;  // NABLA_H, Q_SKEW; default 1e-3 with Richardson, else 1e-2
  bool richardson = true;
  std::string output;  // empty: standard output
  ReportFormat format = ReportFormat::json;
  bool timing = false;  // real runtime_ms instead of 0, which keeps reports byte-stable

  double third() const { return tol_third.value_or(richardson ? 1e-3 : 1e-2); }
};

/// Entry point of the contactlab tool. Returns 0 when every check passes, 2 when a check
/// fails and 1 on usage or input errors (message on `err`).
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contactlab
