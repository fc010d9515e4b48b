#include "netpress/policies.hpp"

#include <algorithm>

namespace netpress {

namespace {

// lambda <- [lambda - eps g]^+ over the variable coordinates. With eps = 1
// this reproduces the queue recursion arithmetic exactly.
NcField descend(const NcField& duals, const NcField& g, double eps,
                const Model& m) {
  NcField next(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i)
    for (int k : m.node_comms[i])
      next.at(i, k) = std::max(0.0, duals.at(i, k) - eps * g.at(i, k));
  return next;
}

NcField ascend(const NcField& duals, const NcField& d, double eps,
               const Model& m) {
  NcField next(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i)
    for (int k : m.node_comms[i])
      next.at(i, k) = std::max(0.0, duals.at(i, k) + eps * d.at(i, k));
  return next;
}

}  // namespace

PolicyStep step_bp(const NcField& duals, const NcField& arrivals,
                   const Model& m, double epsilon) {
  PolicyStep step;
  step.rates = allocate_network(m, duals, /*soft=*/false);
  NcField g = gradient(step.rates, arrivals, m);
  step.grad_norm = g.norm2();
  step.next_duals = descend(duals, g, epsilon, m);
  return step;
}

PolicyStep step_sbp(const NcField& duals, const NcField& arrivals,
                    const Model& m, double epsilon) {
  PolicyStep step;
  step.rates = allocate_network(m, duals, /*soft=*/true);
  NcField g = gradient(step.rates, arrivals, m);
  step.grad_norm = g.norm2();
  step.next_duals = descend(duals, g, epsilon, m);
  return step;
}

PolicyStep step_newton(const NcField& duals, const NcField& arrivals,
                       const Model& m, double epsilon, double ridge) {
  PolicyStep step;
  step.rates = allocate_network(m, duals, /*soft=*/true);
  NcField g = gradient(step.rates, arrivals, m);
  step.grad_norm = g.norm2();
  HessianBlocks h = hessian(step.rates, m);
  step.direction = newton_direction_dense(h, g, ridge, m);
  step.next_duals = ascend(duals, step.direction, epsilon, m);
  return step;
}

PolicyStep step_abp(const NcField& duals, const NcField& arrivals,
                    const Model& m, double epsilon, int order) {
  PolicyStep step;
  step.rates = allocate_network(m, duals, /*soft=*/true);
  NcField g = gradient(step.rates, arrivals, m);
  step.grad_norm = g.norm2();
  HessianBlocks h = hessian(step.rates, m);
  Splitting s = split(h, m);
  step.direction = add_direction(s, g, order, m);
  step.next_duals = ascend(duals, step.direction, epsilon, m);
  return step;
}

PolicyStep policy_step(const PolicyConfig& cfg, const NcField& duals,
                       const NcField& arrivals, const Model& m) {
  switch (cfg.kind) {
    case PolicyKind::Backpressure:
      return step_bp(duals, arrivals, m, cfg.epsilon);
    case PolicyKind::SoftBackpressure:
      return step_sbp(duals, arrivals, m, cfg.epsilon);
    case PolicyKind::Newton:
      return step_newton(duals, arrivals, m, cfg.epsilon, cfg.ridge);
    case PolicyKind::Accelerated:
      return step_abp(duals, arrivals, m, cfg.epsilon, cfg.add_order);
  }
  throw std::logic_error("unreachable policy kind");
}

}  // namespace netpress
