#pragma once

#include <Eigen/Dense>

#include "netpress/curvature.hpp"
#include "netpress/model.hpp"

namespace netpress {

inline constexpr double kValidateTol = 1e-4;
inline constexpr int kValidateMaxIter = 200000;

/// Outcome of the deterministic stabilizability check. slack is the smallest
/// flow-conservation slack at the final rates; the problem is feasible iff it
/// is nonnegative within solver tolerance.
struct FeasibilityReport {
  bool feasible = false;
  bool conclusive = false;
  double slack = 0.0;
  NcField optimal_duals;
  int iterations = 0;
  double grad_norm = 0.0;  // projected gradient norm at exit
};

/// Projected gradient descent on the deterministic dual (mean arrivals, no
/// noise) until the projected gradient norm drops below tol or the iteration
/// cap is reached. A persistently negative, stagnant slack is reported as a
/// conclusive infeasibility; hitting the cap otherwise is inconclusive.
FeasibilityReport solve_centralized(const Model& m, const NcField& mean_arrivals,
                                    double tol, int max_iter = kValidateMaxIter);

/// Central-difference Jacobian of the deterministic gradient, step h.
/// Independent of the analytic Hessian assembly.
Eigen::MatrixXd fd_hessian(const NcField& duals, const Model& m, double h);

/// Dense evaluation of sum_{tau<=N} (Dbar^-1 Bbar)^tau Dbar^-1.
Eigen::MatrixXd dense_neumann(const HessianBlocks& h, int order, const Model& m);

}  // namespace netpress
