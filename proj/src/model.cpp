#include "netpress/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace netpress {

double NcField::total() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double NcField::norm2() const {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool is_connected(const NetworkTopology& topo) {
  if (topo.n <= 0) return false;
  std::vector<std::vector<int>> adj(topo.n);
  for (const Link& l : topo.links) {
    adj[l.from].push_back(l.to);
    adj[l.to].push_back(l.from);
  }
  std::vector<char> seen(topo.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == topo.n;
}

NetworkTopology random_topology(int n, double avg_degree, double cap_lo,
                                double cap_hi, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("random_topology: need n >= 2");
  if (cap_lo < 0.0 || cap_hi <= cap_lo)
    throw std::invalid_argument("random_topology: need 0 <= cap_lo < cap_hi");

  // Uniform random recursive tree gives connectivity; extra edges bring the
  // average degree up to the requested value.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::pair<int, int>> edges;  // undirected, (min,max)
  auto has_edge = [&edges](int a, int b) {
    if (a > b) std::swap(a, b);
    return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) !=
           edges.end();
  };
  auto add_edge = [&edges](int a, int b) {
    if (a > b) std::swap(a, b);
    edges.emplace_back(a, b);
  };

  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    add_edge(order[i], order[pick(rng)]);
  }

  long max_edges = static_cast<long>(n) * (n - 1) / 2;
  long target = std::lround(n * avg_degree / 2.0);
  target = std::clamp(target, static_cast<long>(n - 1), max_edges);

  std::uniform_int_distribution<int> node(0, n - 1);
  long attempts = 0;
  const long attempt_cap = 200L * std::max(target, 1L) + 1000;
  while (static_cast<long>(edges.size()) < target) {
    if (++attempts > attempt_cap)
      throw std::runtime_error("random_topology: could not place extra edges");
    int a = node(rng);
    int b = node(rng);
    if (a == b || has_edge(a, b)) continue;
    add_edge(a, b);
  }

  NetworkTopology topo;
  topo.n = n;
  std::uniform_real_distribution<double> cap(cap_lo, cap_hi);
  auto draw_cap = [&]() {
    double c = cap(rng);
    while (c <= 0.0) c = cap(rng);  // capacities must be strictly positive
    return c;
  };
  for (auto [a, b] : edges) {
    topo.links.push_back({a, b, draw_cap()});
    topo.links.push_back({b, a, draw_cap()});
  }
  return topo;
}

namespace {

bool active_group_is_first(const ArrivalProcess& proc, int t) {
  return (t / proc.period) % 2 == 0;
}

}  // namespace

NcField sample_arrivals(const ArrivalProcess& proc, int t, std::mt19937_64& rng) {
  NcField a(proc.n, proc.K);
  switch (proc.kind) {
    case ArrivalKind::Constant:
      for (int i = 0; i < proc.n; ++i)
        for (int k = 0; k < proc.K; ++k) a.at(i, k) = proc.mean_at(i, k);
      break;
    case ArrivalKind::Poisson:
      for (int i = 0; i < proc.n; ++i)
        for (int k = 0; k < proc.K; ++k) {
          double m = proc.mean_at(i, k);
          if (m > 0.0) {
            std::poisson_distribution<long> d(m);
            a.at(i, k) = static_cast<double>(d(rng));
          }
        }
      break;
    case ArrivalKind::Switching: {
      const auto& active =
          proc.groups[active_group_is_first(proc, t) ? 0 : 1];
      for (int i : active)
        for (int k = 0; k < proc.K; ++k) {
          double m = proc.mean_at(i, k);
          if (m > 0.0) {
            std::poisson_distribution<long> d(m);
            a.at(i, k) = static_cast<double>(d(rng));
          }
        }
      break;
    }
  }
  return a;
}

NcField mean_arrival_rates(const ArrivalProcess& proc) {
  NcField a(proc.n, proc.K);
  for (int i = 0; i < proc.n; ++i)
    for (int k = 0; k < proc.K; ++k) a.at(i, k) = proc.mean_at(i, k);
  if (proc.kind == ArrivalKind::Switching) {
    // Each group is active half the time.
    for (double& x : a.v) x *= 0.5;
  }
  return a;
}

int Model::link_index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n() || j >= n()) return -1;
  return link_lookup_[static_cast<size_t>(i) * n() + j];
}

void Model::finalize() {
  const int nn = topo.n;
  if (nn <= 0) throw ValidationError("model: node count must be positive");

  link_lookup_.assign(static_cast<size_t>(nn) * nn, -1);
  out_links.assign(nn, {});
  in_links.assign(nn, {});
  for (int e = 0; e < L(); ++e) {
    const Link& l = topo.links[e];
    if (l.from < 0 || l.from >= nn || l.to < 0 || l.to >= nn)
      throw ValidationError("link references unknown node id");
    if (l.from == l.to) throw ValidationError("self-loop link not allowed");
    if (!(l.capacity > 0.0))
      throw ValidationError("link capacity must be positive");
    int& slot = link_lookup_[static_cast<size_t>(l.from) * nn + l.to];
    if (slot != -1) throw ValidationError("duplicate directed link");
    slot = e;
    out_links[l.from].push_back(e);
    in_links[l.to].push_back(e);
  }

  neighbors.assign(nn, {});
  for (int i = 0; i < nn; ++i) {
    std::vector<int> nb;
    for (int e : out_links[i]) nb.push_back(topo.links[e].to);
    for (int e : in_links[i]) nb.push_back(topo.links[e].from);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    neighbors[i] = std::move(nb);
  }

  const int kk = K();
  if (kk <= 0) throw ValidationError("model: need at least one commodity");
  for (int k = 0; k < kk; ++k) {
    if (commodities[k].id != k)
      throw ValidationError("commodity ids must be dense 0..K-1");
    if (commodities[k].dest < 0 || commodities[k].dest >= nn)
      throw ValidationError("commodity destination is not a valid node");
  }
  if (beta.size() != static_cast<size_t>(kk))
    throw ValidationError("beta table must have one row per commodity");
  for (int k = 0; k < kk; ++k) {
    if (beta[k].size() != static_cast<size_t>(L()))
      throw ValidationError("beta row must have one entry per link");
    for (double b : beta[k])
      if (b < 0.0) throw ValidationError("beta coefficients must be >= 0");
  }

  node_comms.assign(nn, {});
  comm_pos.assign(nn, std::vector<int>(kk, -1));
  for (int i = 0; i < nn; ++i)
    for (int k = 0; k < kk; ++k)
      if (commodities[k].dest != i) {
        comm_pos[i][k] = static_cast<int>(node_comms[i].size());
        node_comms[i].push_back(k);
      }

  // Arrival process checks.
  ArrivalProcess& p = arrivals;
  if (p.n != nn || p.K != kk || p.mean.size() != static_cast<size_t>(nn) * kk)
    throw ValidationError("arrival process dimensions do not match the model");
  for (int i = 0; i < nn; ++i)
    for (int k = 0; k < kk; ++k) {
      double m = p.mean_at(i, k);
      if (m < 0.0) throw ValidationError("arrival mean must be >= 0");
      if (i == commodities[k].dest && m > 0.0)
        throw ValidationError(
            "destination node has positive arrival rate for its own commodity");
    }
  if (p.kind == ArrivalKind::Switching) {
    if (p.period < 1) throw ValidationError("switching period must be >= 1");
    std::vector<char> in_group(nn, 0);
    for (int g = 0; g < 2; ++g)
      for (int i : p.groups[g]) {
        if (i < 0 || i >= nn)
          throw ValidationError("switching group references unknown node");
        if (in_group[i]) throw ValidationError("switching groups must be disjoint");
        in_group[i] = 1;
      }
    for (int i = 0; i < nn; ++i)
      for (int k = 0; k < kk; ++k)
        if (p.mean_at(i, k) > 0.0 && !in_group[i])
          throw ValidationError("every source node must belong to a group");
  }
}

}  // namespace netpress
