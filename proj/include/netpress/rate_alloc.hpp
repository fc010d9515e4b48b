#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "netpress/model.hpp"

namespace netpress {

/// Strict-positivity threshold for active-set membership.
inline constexpr double kActivationEps = 1e-12;

/// Waterfilling root-finder tolerance, scaled by link capacity.
inline double mu_tolerance(double capacity) {
  return 1e-9 * std::max(1.0, capacity);
}

/// Dual differentials across one directed link. delta[k] = lambda_i^k -
/// lambda_j^k with lambda taken as zero at commodity destinations; eligible[k]
/// is false when the link's tail is commodity k's destination (such flows do
/// not exist).
struct LinkPrices {
  int link = -1;
  std::vector<double> delta;
  std::vector<std::uint8_t> eligible;
};

LinkPrices link_prices(const Model& m, int link, const NcField& duals);

/// Per-link transmission rates plus the waterfilling level of each link.
struct RateAllocation {
  std::vector<std::vector<double>> rates;  // [link][k]
  std::vector<double> mu;                  // [link]

  double link_sum(int e) const {
    double s = 0.0;
    for (double r : rates[e]) s += r;
    return s;
  }
};

/// Inverse of the quadratic marginal f'(r) = -r + beta, clamped to r >= 0.
double f_inv_deriv(double beta, double x);

/// Quadratic link objective value f(r) = -r^2/2 + beta r.
double f_value(double beta, double r);

/// Hard max-pressure rule: full capacity to the commodity with the largest
/// positive differential (lowest index wins ties); idle if none is positive.
std::vector<double> allocate_bp(const LinkPrices& prices, double capacity);

/// Waterfilling level: zero if the unconstrained rates fit, otherwise the
/// root of sum_k F(-(delta_k - mu)) = capacity found by bisection on
/// [0, max delta + max beta].
double solve_mu(const LinkPrices& prices, const std::vector<double>& beta,
                double capacity, double tol);

/// Reverse-waterfilling rates r_k = F(-(delta_k - mu)); writes the level to
/// mu_out. Capacity-feasible and complementary-slack by construction.
std::vector<double> allocate_soft(const LinkPrices& prices,
                                  const std::vector<double>& beta,
                                  double capacity, double tol, double& mu_out);

/// Commodities with rate strictly above kActivationEps, ascending.
std::vector<int> active_set(const std::vector<double>& rates);

/// Runs the per-link rule over every link of the network.
RateAllocation allocate_network(const Model& m, const NcField& duals, bool soft);

}  // namespace netpress
