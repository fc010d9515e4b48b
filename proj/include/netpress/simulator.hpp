#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "netpress/config.hpp"
#include "netpress/model.hpp"
#include "netpress/policies.hpp"

namespace netpress {

/// Trips when the dual total passes kDivergenceGuard, separating genuine
/// instability from numerical error.
struct DivergenceError : std::runtime_error {
  int slot;
  double total_dual;
  DivergenceError(int slot_, double total_)
      : std::runtime_error("total dual exceeded divergence guard at slot " +
                           std::to_string(slot_)),
        slot(slot_),
        total_dual(total_) {}
};

inline constexpr double kDivergenceGuard = 1e9;

/// Stabilization detector defaults (least-squares slope over a sliding
/// window, compared against the window's mean level).
inline constexpr int kStabilizationWindow = 20;
inline constexpr double kStabilizationSlopeTol = 1e-3;

struct TraceRecord {
  int t = 0;
  double total_queue = 0.0;
  double total_dual = 0.0;
  double grad_norm = 0.0;
  double max_link_util = 0.0;
};

/// Queue recursion q' = [q + a + inflow - outflow]^+, evaluated through the
/// same gradient arithmetic the dual update uses so that the two trajectories
/// coincide bitwise under unit stepsize.
NcField evolve_queues(const NcField& queues, const RateAllocation& rates,
                      const NcField& arrivals, const Model& m);

struct StepView {
  int t;
  const NcField& duals;   // state after the update
  const NcField& queues;  // state after the update
  const PolicyStep& step;
  const NcField& arrivals;
};

using StepObserver = std::function<void(const StepView&)>;

/// Synchronous-round simulation over scenario.run.horizon slots. Duals start
/// at the initial queues. Throws DivergenceError when the guard trips.
std::vector<TraceRecord> run(const Scenario& scenario,
                             const StepObserver& observer = nullptr);

/// First window start whose least-squares slope magnitude is at most
/// slope_tol times the window's mean level; nullopt if never.
std::optional<int> stabilization_slot(const std::vector<double>& total_queue,
                                      int window, double slope_tol);
std::optional<int> stabilization_slot(const std::vector<TraceRecord>& trace,
                                      int window, double slope_tol);

/// Mean of total_queue over the trailing quarter of the trace (after warmup).
double final_quarter_mean_queue(const std::vector<TraceRecord>& trace,
                                int warmup = 0);

}  // namespace netpress
