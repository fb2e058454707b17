#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace dinglab {

struct CheckResult {
  std::string name;
  double value = 0.0;  // the measured quantity (error, count, slope, ...)
  double tol = 0.0;    // its bound; direction encoded by the check itself
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  std::string notes;  // informational, never affects pass/fail

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct AcceptanceOptions {
  int grid_nx = 64;
  int grid_nt = 128;
  unsigned long long seed = 0;
};

/// The full acceptance suite, criteria 1-10. Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

nlohmann::json acceptance_to_json(const std::vector<CriterionResult>& results);

/// Seeded dense random Hermitian matrix with independent unit-variance
/// entries (real diagonal, complex off-diagonal).
Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n);

/// Seeded random complex vector with independent standard normal parts.
Eigen::VectorXcd random_vector(std::mt19937_64& rng, int n);

}  // namespace dinglab
