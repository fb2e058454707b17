#pragma once

#include <optional>
#include <vector>

#include "dinglab/functionals.hpp"
#include "dinglab/grid.hpp"
#include "dinglab/potential.hpp"
#include "dinglab/quantization.hpp"

namespace dinglab {

struct BalanceStep {
  int step = 0;
  double residual = 0.0;      // Frobenius distance of the center of mass from Id/N
  double q_ding_value = 0.0;  // D^(k) relative to the starting form
};

struct BalanceTrace {
  std::vector<BalanceStep> steps;
  bool converged = false;
  std::optional<HermitianForm> final;
};

/// Fixed-point iteration for the anticanonically balanced form at level k:
/// re-Hilbert against the canonical measure of the current FS potential,
/// then normalize to unit determinant. Records the residual and the value
/// of D^(k) before each step; stops when the residual drops below tol.
BalanceTrace balance(const HermitianForm& h_init, int k, const QuadratureGrid& grid,
                     int max_iter, double tol);

/// Sup distance (modulo constants) between FS_k of the balanced form started
/// from phi and the round potential, per level.
struct BalancedVsKeRow {
  int k = 0;
  int steps = 0;
  double sup_distance = 0.0;
};

std::vector<BalancedVsKeRow> balanced_vs_ke(const Potential& phi_start,
                                            const std::vector<int>& ks,
                                            const QuadratureGrid& grid, int max_iter,
                                            double tol);

}  // namespace dinglab
