#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace netpress {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Directed link with a fixed transmission capacity in packets per slot.
struct Link {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
};

struct NetworkTopology {
  int n = 0;
  std::vector<Link> links;
};

/// True if the undirected skeleton (union of both directions) is connected.
bool is_connected(const NetworkTopology& topo);

/// Connected undirected skeleton realized as directed link pairs, with
/// capacities drawn i.i.d. uniform on [cap_lo, cap_hi] independently per
/// direction. Deterministic for a given rng state.
NetworkTopology random_topology(int n, double avg_degree, double cap_lo,
                                double cap_hi, std::mt19937_64& rng);

struct Commodity {
  int id = 0;
  int dest = 0;
};

enum class ArrivalKind { Constant, Poisson, Switching };

struct ArrivalProcess {
  ArrivalKind kind = ArrivalKind::Constant;
  int n = 0;
  int K = 0;
  std::vector<double> mean;  // mean[i*K + k]; zero at (dest_k, k)
  int period = 1;            // switching only
  std::array<std::vector<int>, 2> groups;  // switching only

  double mean_at(int i, int k) const {
    return mean[static_cast<size_t>(i) * K + k];
  }
};

/// Scalar per (node, commodity) pair. Entries at a commodity's own
/// destination are not decision variables and stay pinned at zero.
struct NcField {
  int n = 0;
  int K = 0;
  std::vector<double> v;

  NcField() = default;
  NcField(int n_, int K_) : n(n_), K(K_), v(static_cast<size_t>(n_) * K_, 0.0) {}

  bool empty() const { return v.empty(); }
  double& at(int i, int k) { return v[static_cast<size_t>(i) * K + k]; }
  double at(int i, int k) const { return v[static_cast<size_t>(i) * K + k]; }

  double total() const;
  double norm2() const;
};

/// One slot of arrivals. Constant processes return the mean exactly; poisson
/// draws Poisson(mean) per source; switching draws only for the group active
/// at slot t (the active group flips every `period` slots).
NcField sample_arrivals(const ArrivalProcess& proc, int t, std::mt19937_64& rng);

/// Long-run average arrival rates: the mean map, halved per source for
/// switching processes.
NcField mean_arrival_rates(const ArrivalProcess& proc);

/// Immutable after finalize(); safe to share read-only across runs.
struct Model {
  NetworkTopology topo;
  std::vector<Commodity> commodities;
  std::vector<std::vector<double>> beta;  // beta[k][link], >= 0
  ArrivalProcess arrivals;

  // Derived adjacency, built by finalize().
  std::vector<std::vector<int>> out_links;   // per node: link indices
  std::vector<std::vector<int>> in_links;
  std::vector<std::vector<int>> neighbors;   // union of both directions, ascending
  std::vector<std::vector<int>> node_comms;  // commodities k with dest(k) != i
  std::vector<std::vector<int>> comm_pos;    // comm_pos[i][k] = row of k at node i, or -1

  int n() const { return topo.n; }
  int K() const { return static_cast<int>(commodities.size()); }
  int L() const { return static_cast<int>(topo.links.size()); }
  int dest(int k) const { return commodities[k].dest; }

  int link_index(int i, int j) const;
  bool eligible(int link, int k) const {
    return topo.links[link].from != commodities[k].dest;
  }

  /// Validates all structural invariants and builds the derived adjacency.
  /// Throws ValidationError on any violation.
  void finalize();

 private:
  std::vector<int> link_lookup_;  // n*n entries, -1 where absent
};

}  // namespace netpress
