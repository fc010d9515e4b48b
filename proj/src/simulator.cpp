#include "netpress/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace netpress {

NcField evolve_queues(const NcField& queues, const RateAllocation& rates,
                      const NcField& arrivals, const Model& m) {
  NcField g = gradient(rates, arrivals, m);
  NcField next(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i)
    for (int k : m.node_comms[i])
      next.at(i, k) = std::max(0.0, queues.at(i, k) - g.at(i, k));
  return next;
}

namespace {

double max_link_utilization(const RateAllocation& rates, const Model& m) {
  double util = 0.0;
  for (int e = 0; e < m.L(); ++e)
    util = std::max(util, rates.link_sum(e) / m.topo.links[e].capacity);
  return util;
}

// Arrival stream seed is decoupled from the topology stream so that a run's
// draws do not depend on how the model was constructed.
constexpr std::uint64_t kArrivalStreamSalt = 0x517cc1b727220a95ULL;

}  // namespace

std::vector<TraceRecord> run(const Scenario& scenario,
                             const StepObserver& observer) {
  const Model& m = scenario.model;
  NcField queues = scenario.initial_queues.empty()
                       ? NcField(m.n(), m.K())
                       : scenario.initial_queues;
  NcField duals = queues;  // lambda(0) = q(0)

  std::mt19937_64 arrival_rng(scenario.run.seed ^ kArrivalStreamSalt);
  std::vector<TraceRecord> trace;
  trace.reserve(scenario.run.horizon);

  for (int t = 0; t < scenario.run.horizon; ++t) {
    NcField arrivals = sample_arrivals(m.arrivals, t, arrival_rng);
    PolicyStep step = policy_step(scenario.policy, duals, arrivals, m);
    queues = evolve_queues(queues, step.rates, arrivals, m);
    duals = step.next_duals;

    TraceRecord rec;
    rec.t = t;
    rec.total_queue = queues.total();
    rec.total_dual = duals.total();
    rec.grad_norm = step.grad_norm;
    rec.max_link_util = max_link_utilization(step.rates, m);
    trace.push_back(rec);

    if (observer) observer({t, duals, queues, step, arrivals});
    if (rec.total_dual > kDivergenceGuard)
      throw DivergenceError(t, rec.total_dual);
  }
  return trace;
}

std::optional<int> stabilization_slot(const std::vector<double>& total_queue,
                                      int window, double slope_tol) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  const int len = static_cast<int>(total_queue.size());
  const double xbar = (window - 1) / 2.0;
  double sxx = 0.0;
  for (int x = 0; x < window; ++x) sxx += (x - xbar) * (x - xbar);

  for (int t = 0; t + window <= len; ++t) {
    double ybar = 0.0;
    for (int x = 0; x < window; ++x) ybar += total_queue[t + x];
    ybar /= window;
    double sxy = 0.0;
    for (int x = 0; x < window; ++x)
      sxy += (x - xbar) * (total_queue[t + x] - ybar);
    double slope = sxy / sxx;
    if (std::abs(slope) <= slope_tol * ybar) return t;
  }
  return std::nullopt;
}

std::optional<int> stabilization_slot(const std::vector<TraceRecord>& trace,
                                      int window, double slope_tol) {
  std::vector<double> totals(trace.size());
  for (size_t i = 0; i < trace.size(); ++i) totals[i] = trace[i].total_queue;
  return stabilization_slot(totals, window, slope_tol);
}

double final_quarter_mean_queue(const std::vector<TraceRecord>& trace,
                                int warmup) {
  if (trace.empty()) return 0.0;
  int start = std::max<int>(warmup, static_cast<int>(trace.size()) * 3 / 4);
  start = std::min<int>(start, static_cast<int>(trace.size()) - 1);
  double sum = 0.0;
  int count = 0;
  for (size_t i = start; i < trace.size(); ++i, ++count)
    sum += trace[i].total_queue;
  return sum / count;
}

}  // namespace netpress
