#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "netpress/config.hpp"
#include "netpress/model.hpp"
#include "netpress/rate_alloc.hpp"

namespace netpress::testing {

/// Three-node line 0 -> 1 -> 2, one commodity with destination 2.
inline Model line_model(double c01 = 10.0, double c12 = 10.0,
                        double beta_to_dest = 0.0) {
  Model m;
  m.topo.n = 3;
  m.topo.links = {{0, 1, c01}, {1, 2, c12}};
  m.commodities = {{0, 2}};
  m.beta = {{0.0, beta_to_dest}};
  m.arrivals.kind = ArrivalKind::Constant;
  m.arrivals.n = 3;
  m.arrivals.K = 1;
  m.arrivals.mean.assign(3, 0.0);
  m.finalize();
  return m;
}

inline NcField line_duals(const Model& m, double l0, double l1) {
  NcField f(m.n(), m.K());
  f.at(0, 0) = l0;
  f.at(1, 0) = l1;
  return f;
}

/// The 10-node experiment scenario: seeded random connected topology, five
/// commodities with distinct random destinations, reward 10 on links into
/// each destination, mean-5 arrivals (Poisson, or period-10 switching over a
/// random half/half node split).
inline Scenario fig_scenario(std::uint64_t seed, bool switching, int horizon,
                             PolicyKind kind) {
  std::mt19937_64 rng(seed);
  Scenario sc;
  Model& m = sc.model;
  m.topo = random_topology(10, 3.0, 0.0, 100.0, rng);

  std::vector<int> order(10);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < 5; ++k) m.commodities.push_back({k, order[k]});

  m.beta.assign(5, std::vector<double>(m.topo.links.size(), 0.0));
  for (int k = 0; k < 5; ++k)
    for (size_t e = 0; e < m.topo.links.size(); ++e)
      if (m.topo.links[e].to == m.commodities[k].dest) m.beta[k][e] = 10.0;

  ArrivalProcess p;
  p.kind = switching ? ArrivalKind::Switching : ArrivalKind::Poisson;
  p.n = 10;
  p.K = 5;
  p.mean.assign(50, 0.0);
  for (int i = 0; i < 10; ++i)
    for (int k = 0; k < 5; ++k)
      if (i != m.commodities[k].dest)
        p.mean[static_cast<size_t>(i) * 5 + k] = 5.0;
  if (switching) {
    p.period = 10;
    std::vector<int> gorder(10);
    std::iota(gorder.begin(), gorder.end(), 0);
    std::shuffle(gorder.begin(), gorder.end(), rng);
    p.groups[0].assign(gorder.begin(), gorder.begin() + 5);
    p.groups[1].assign(gorder.begin() + 5, gorder.end());
  }
  m.arrivals = std::move(p);
  m.finalize();

  sc.policy.kind = kind;
  sc.run.horizon = horizon;
  sc.run.seed = seed;
  return sc;
}

/// Small random instance for curvature and oracle checks. Arrivals are zero;
/// they do not enter the Hessian.
inline Model random_instance(std::mt19937_64& rng, int max_n = 6,
                             int max_k = 3) {
  std::uniform_int_distribution<int> nd(2, max_n);
  std::uniform_int_distribution<int> kd(1, max_k);
  int n = nd(rng), K = kd(rng);

  Model m;
  m.topo = random_topology(n, 2.5, 1.0, 15.0, rng);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::bernoulli_distribution with_reward(0.5);
  for (int k = 0; k < K; ++k) m.commodities.push_back({k, node(rng)});
  m.beta.assign(K, std::vector<double>(m.topo.links.size(), 0.0));
  for (int k = 0; k < K; ++k) {
    if (!with_reward(rng)) continue;
    for (size_t e = 0; e < m.topo.links.size(); ++e)
      if (m.topo.links[e].to == m.commodities[k].dest) m.beta[k][e] = 10.0;
  }
  m.arrivals.kind = ArrivalKind::Constant;
  m.arrivals.n = n;
  m.arrivals.K = K;
  m.arrivals.mean.assign(static_cast<size_t>(n) * K, 0.0);
  m.finalize();
  return m;
}

/// Dual draw with entries U[lo, hi], resampled until every link sits at least
/// `margin` away from the waterfilling kinks: rate sign changes, the
/// saturation boundary, and the mu > 0 switch.
inline NcField sample_offkink_duals(const Model& m, std::mt19937_64& rng,
                                    double margin = 1e-3, double lo = 0.5,
                                    double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    NcField duals(m.n(), m.K());
    for (int i = 0; i < m.n(); ++i)
      for (int k : m.node_comms[i]) duals.at(i, k) = u(rng);

    RateAllocation alloc = allocate_network(m, duals, /*soft=*/true);
    bool ok = true;
    for (int e = 0; e < m.L() && ok; ++e) {
      LinkPrices p = link_prices(m, e, duals);
      double mu = alloc.mu[e];
      double cap = m.topo.links[e].capacity;
      if (mu > 0.0 && mu < margin) ok = false;
      if (mu == 0.0 && cap - alloc.link_sum(e) < margin) ok = false;
      for (int k = 0; k < m.K() && ok; ++k) {
        if (!p.eligible[k]) continue;
        if (std::abs(m.beta[k][e] + p.delta[k] - mu) < margin) ok = false;
      }
    }
    if (ok) return duals;
  }
  throw std::runtime_error("could not sample duals away from kinks");
}

/// Hop distances from node src over the undirected skeleton.
inline std::vector<int> hop_distances(const Model& m, int src) {
  std::vector<int> dist(m.n(), -1);
  std::vector<int> queue{src};
  dist[src] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int w : m.neighbors[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

}  // namespace netpress::testing
