#include "netpress/rate_alloc.hpp"

#include <cmath>
#include <limits>

namespace netpress {

LinkPrices link_prices(const Model& m, int link, const NcField& duals) {
  const Link& l = m.topo.links[link];
  LinkPrices p;
  p.link = link;
  p.delta.assign(m.K(), 0.0);
  p.eligible.assign(m.K(), 0);
  for (int k = 0; k < m.K(); ++k) {
    if (!m.eligible(link, k)) continue;
    p.eligible[k] = 1;
    double tail = duals.at(l.from, k);
    double head = (l.to == m.dest(k)) ? 0.0 : duals.at(l.to, k);
    p.delta[k] = tail - head;
  }
  return p;
}

double f_inv_deriv(double beta, double x) { return std::max(0.0, beta - x); }

double f_value(double beta, double r) { return -0.5 * r * r + beta * r; }

std::vector<double> allocate_bp(const LinkPrices& prices, double capacity) {
  std::vector<double> rates(prices.delta.size(), 0.0);
  int best = -1;
  double best_delta = 0.0;  // strict > 0 required; ties keep the lowest index
  for (size_t k = 0; k < prices.delta.size(); ++k) {
    if (prices.eligible[k] && prices.delta[k] > best_delta) {
      best = static_cast<int>(k);
      best_delta = prices.delta[k];
    }
  }
  if (best >= 0) rates[best] = capacity;
  return rates;
}

namespace {

double waterfill_sum(const LinkPrices& prices, const std::vector<double>& beta,
                     double mu) {
  double s = 0.0;
  for (size_t k = 0; k < prices.delta.size(); ++k)
    if (prices.eligible[k]) s += f_inv_deriv(beta[k], mu - prices.delta[k]);
  return s;
}

}  // namespace

double solve_mu(const LinkPrices& prices, const std::vector<double>& beta,
                double capacity, double tol) {
  if (waterfill_sum(prices, beta, 0.0) <= capacity) return 0.0;

  double hi = 0.0;
  double max_delta = 0.0, max_beta = 0.0;
  for (size_t k = 0; k < prices.delta.size(); ++k) {
    if (!prices.eligible[k]) continue;
    max_delta = std::max(max_delta, prices.delta[k]);
    max_beta = std::max(max_beta, beta[k]);
  }
  hi = max_delta + max_beta;  // all rates vanish here, so the sum is 0 <= C

  // The sum is continuous and nonincreasing in mu. Bisect until the bracket
  // collapses; the waterfilling level then feeds exact derivatives downstream.
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double s = waterfill_sum(prices, beta, mid);
    if (s > capacity)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, hi))
      break;
  }
  double mu = 0.5 * (lo + hi);
  (void)tol;  // the collapsed bracket is far tighter than any sensible tol
  return mu;
}

std::vector<double> allocate_soft(const LinkPrices& prices,
                                  const std::vector<double>& beta,
                                  double capacity, double tol, double& mu_out) {
  mu_out = solve_mu(prices, beta, capacity, tol);
  std::vector<double> rates(prices.delta.size(), 0.0);
  for (size_t k = 0; k < prices.delta.size(); ++k)
    if (prices.eligible[k])
      rates[k] = f_inv_deriv(beta[k], mu_out - prices.delta[k]);
  return rates;
}

std::vector<int> active_set(const std::vector<double>& rates) {
  std::vector<int> out;
  for (size_t k = 0; k < rates.size(); ++k)
    if (rates[k] > kActivationEps) out.push_back(static_cast<int>(k));
  return out;
}

RateAllocation allocate_network(const Model& m, const NcField& duals,
                                bool soft) {
  RateAllocation alloc;
  alloc.rates.assign(m.L(), std::vector<double>(m.K(), 0.0));
  alloc.mu.assign(m.L(), 0.0);
  std::vector<double> beta_row(m.K());
  for (int e = 0; e < m.L(); ++e) {
    LinkPrices prices = link_prices(m, e, duals);
    double cap = m.topo.links[e].capacity;
    if (soft) {
      for (int k = 0; k < m.K(); ++k) beta_row[k] = m.beta[k][e];
      alloc.rates[e] =
          allocate_soft(prices, beta_row, cap, mu_tolerance(cap), alloc.mu[e]);
    } else {
      alloc.rates[e] = allocate_bp(prices, cap);
    }
  }
  return alloc;
}

}  // namespace netpress
