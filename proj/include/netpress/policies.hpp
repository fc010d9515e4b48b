#pragma once

#include "netpress/config.hpp"
#include "netpress/curvature.hpp"
#include "netpress/model.hpp"
#include "netpress/rate_alloc.hpp"

namespace netpress {

/// One synchronous round of a routing policy: rates for the slot, the updated
/// dual state, and (for Newton-type policies) the update direction.
struct PolicyStep {
  RateAllocation rates;
  NcField next_duals;
  NcField direction;  // empty for bp/sbp
  double grad_norm = 0.0;
};

PolicyStep step_bp(const NcField& duals, const NcField& arrivals,
                   const Model& m, double epsilon);

PolicyStep step_sbp(const NcField& duals, const NcField& arrivals,
                    const Model& m, double epsilon);

PolicyStep step_newton(const NcField& duals, const NcField& arrivals,
                       const Model& m, double epsilon, double ridge);

PolicyStep step_abp(const NcField& duals, const NcField& arrivals,
                    const Model& m, double epsilon, int order);

PolicyStep policy_step(const PolicyConfig& cfg, const NcField& duals,
                       const NcField& arrivals, const Model& m);

}  // namespace netpress
