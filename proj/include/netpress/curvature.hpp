#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "netpress/model.hpp"
#include "netpress/rate_alloc.hpp"

namespace netpress {

struct SingularHessianError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Block-sparse symmetric dual Hessian. Blocks are indexed over each node's
/// non-destination commodity list (model.node_comms); rows and columns for a
/// commodity's destination are removed, not zeroed.
struct HessianBlocks {
  std::vector<Eigen::MatrixXd> diag;  // diag[i]: |node_comms[i]| square
  // off[i][p] pairs (j, H_ij) following model.neighbors[i] order
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> off;

  const Eigen::MatrixXd* block(int i, int j) const;
};

/// H = Dbar - Bbar with Dbar_ii = H_ii + I, Bbar_ii = I, Bbar_ij = -H_ij.
struct Splitting {
  std::vector<Eigen::MatrixXd> dbar;
  std::vector<Eigen::MatrixXd> dbar_inv;
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> bbar_off;
};

/// Constraint-slack gradient g_i^k = sum_j (r_ij^k - r_ji^k) - a_i^k.
NcField gradient(const RateAllocation& alloc, const NcField& arrivals,
                 const Model& m);

/// Assembles the dual Hessian from the allocation's active sets and
/// waterfilling levels. Each link contributes M = I_A - 1(sat)/|A| * 11^T over
/// its active commodities, scattered with +M into both endpoint diagonal
/// blocks and -M into both cross blocks, so the result is symmetric and its
/// diagonal blocks are positive semidefinite by construction.
HessianBlocks hessian(const RateAllocation& alloc, const Model& m);

Splitting split(const HessianBlocks& h, const Model& m);

/// ADD-N direction d = -sum_{tau<=N} (Dbar^-1 Bbar)^tau Dbar^-1 g, computed by
/// N+1 block-sparse sweeps. Node i's result depends only on data within N
/// hops.
NcField add_direction(const Splitting& s, const NcField& g, int order,
                      const Model& m);

/// Centralized oracle path: solves (H + ridge I) d = -g densely. Throws
/// SingularHessianError when the matrix is not invertible.
NcField newton_direction_dense(const HessianBlocks& h, const NcField& g,
                               double ridge, const Model& m);

/// Dense index over the (node, commodity) pairs that carry variables.
struct VarIndex {
  std::vector<int> offset;  // per node
  int size = 0;

  int pos(int i, int k, const Model& m) const {
    int p = m.comm_pos[i][k];
    return p < 0 ? -1 : offset[i] + p;
  }
};

VarIndex var_index(const Model& m);
Eigen::VectorXd pack(const NcField& f, const Model& m);
NcField unpack(const Eigen::VectorXd& x, const Model& m);
Eigen::MatrixXd to_dense(const HessianBlocks& h, const Model& m);

/// Sparse triplet dumps (node_i node_j k s value) for offline inspection.
void dump_triplets(std::ostream& out, const HessianBlocks& h, const Model& m);
void dump_triplets(std::ostream& out, const Splitting& s, const Model& m);

}  // namespace netpress
