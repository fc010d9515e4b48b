#include "netpress/curvature.hpp"

#include <ostream>

namespace netpress {

namespace {

int neighbor_slot(const Model& m, int i, int j) {
  const auto& nb = m.neighbors[i];
  for (size_t p = 0; p < nb.size(); ++p)
    if (nb[p] == j) return static_cast<int>(p);
  return -1;
}

}  // namespace

const Eigen::MatrixXd* HessianBlocks::block(int i, int j) const {
  if (i == j) return &diag[i];
  for (const auto& [nb, mat] : off[i])
    if (nb == j) return &mat;
  return nullptr;
}

NcField gradient(const RateAllocation& alloc, const NcField& arrivals,
                 const Model& m) {
  NcField g(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i) {
    for (int k : m.node_comms[i]) {
      double out = 0.0;
      for (int e : m.out_links[i]) out += alloc.rates[e][k];
      double in = 0.0;
      for (int e : m.in_links[i]) in += alloc.rates[e][k];
      g.at(i, k) = out - in - arrivals.at(i, k);
    }
  }
  return g;
}

HessianBlocks hessian(const RateAllocation& alloc, const Model& m) {
  HessianBlocks h;
  h.diag.resize(m.n());
  h.off.resize(m.n());
  for (int i = 0; i < m.n(); ++i) {
    int sz = static_cast<int>(m.node_comms[i].size());
    h.diag[i] = Eigen::MatrixXd::Zero(sz, sz);
    for (int j : m.neighbors[i]) {
      int szj = static_cast<int>(m.node_comms[j].size());
      h.off[i].emplace_back(j, Eigen::MatrixXd::Zero(sz, szj));
    }
  }

  for (int e = 0; e < m.L(); ++e) {
    const std::vector<int> act = active_set(alloc.rates[e]);
    if (act.empty()) continue;
    const int i = m.topo.links[e].from;
    const int j = m.topo.links[e].to;
    const double t = alloc.mu[e] > 0.0 ? 1.0 / act.size() : 0.0;
    Eigen::MatrixXd& hii = h.diag[i];
    Eigen::MatrixXd& hij = h.off[i][neighbor_slot(m, i, j)].second;
    Eigen::MatrixXd& hji = h.off[j][neighbor_slot(m, j, i)].second;
    Eigen::MatrixXd& hjj = h.diag[j];

    for (int ka : act) {
      const int ria = m.comm_pos[i][ka];
      const int rja = m.comm_pos[j][ka];  // -1 when j is ka's destination
      for (int kb : act) {
        const double mval = (ka == kb ? 1.0 : 0.0) - t;
        if (mval == 0.0) continue;
        const int rib = m.comm_pos[i][kb];
        const int rjb = m.comm_pos[j][kb];
        hii(ria, rib) += mval;
        if (rjb >= 0) hij(ria, rjb) -= mval;
        if (rja >= 0) {
          hji(rja, rib) -= mval;
          if (rjb >= 0) hjj(rja, rjb) += mval;
        }
      }
    }
  }
  return h;
}

Splitting split(const HessianBlocks& h, const Model& m) {
  Splitting s;
  s.dbar.resize(m.n());
  s.dbar_inv.resize(m.n());
  s.bbar_off.resize(m.n());
  for (int i = 0; i < m.n(); ++i) {
    int sz = static_cast<int>(h.diag[i].rows());
    s.dbar[i] = h.diag[i] + Eigen::MatrixXd::Identity(sz, sz);
    s.dbar_inv[i] = s.dbar[i].inverse();
    for (const auto& [j, mat] : h.off[i]) s.bbar_off[i].emplace_back(j, -mat);
  }
  return s;
}

namespace {

using NodeVecs = std::vector<Eigen::VectorXd>;

NodeVecs per_node(const NcField& f, const Model& m) {
  NodeVecs out(m.n());
  for (int i = 0; i < m.n(); ++i) {
    out[i].resize(m.node_comms[i].size());
    for (size_t p = 0; p < m.node_comms[i].size(); ++p)
      out[i][static_cast<int>(p)] = f.at(i, m.node_comms[i][p]);
  }
  return out;
}

// One multiply by Bbar: (Bbar v)_i = v_i + sum_j Bbar_ij v_j.
NodeVecs bbar_apply(const Splitting& s, const NodeVecs& v, const Model& m) {
  NodeVecs out(m.n());
  for (int i = 0; i < m.n(); ++i) {
    out[i] = v[i];
    for (const auto& [j, mat] : s.bbar_off[i]) out[i] += mat * v[j];
  }
  return out;
}

}  // namespace

NcField add_direction(const Splitting& s, const NcField& g, int order,
                      const Model& m) {
  if (order < 0) throw std::invalid_argument("add_direction: order must be >= 0");
  for (int i = 0; i < m.n(); ++i)
    if (!s.dbar_inv[i].allFinite())
      throw SingularHessianError("add_direction: singular Dbar block");

  NodeVecs gv = per_node(g, m);
  NodeVecs v(m.n()), acc(m.n());
  for (int i = 0; i < m.n(); ++i) {
    v[i] = s.dbar_inv[i] * gv[i];
    acc[i] = v[i];
  }
  for (int tau = 1; tau <= order; ++tau) {
    NodeVecs w = bbar_apply(s, v, m);
    for (int i = 0; i < m.n(); ++i) {
      v[i] = s.dbar_inv[i] * w[i];
      acc[i] += v[i];
    }
  }

  NcField d(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i)
    for (size_t p = 0; p < m.node_comms[i].size(); ++p)
      d.at(i, m.node_comms[i][p]) = -acc[i][static_cast<int>(p)];
  return d;
}

VarIndex var_index(const Model& m) {
  VarIndex idx;
  idx.offset.resize(m.n());
  int off = 0;
  for (int i = 0; i < m.n(); ++i) {
    idx.offset[i] = off;
    off += static_cast<int>(m.node_comms[i].size());
  }
  idx.size = off;
  return idx;
}

Eigen::VectorXd pack(const NcField& f, const Model& m) {
  VarIndex idx = var_index(m);
  Eigen::VectorXd x(idx.size);
  for (int i = 0; i < m.n(); ++i)
    for (size_t p = 0; p < m.node_comms[i].size(); ++p)
      x[idx.offset[i] + static_cast<int>(p)] = f.at(i, m.node_comms[i][p]);
  return x;
}

NcField unpack(const Eigen::VectorXd& x, const Model& m) {
  VarIndex idx = var_index(m);
  NcField f(m.n(), m.K());
  for (int i = 0; i < m.n(); ++i)
    for (size_t p = 0; p < m.node_comms[i].size(); ++p)
      f.at(i, m.node_comms[i][p]) = x[idx.offset[i] + static_cast<int>(p)];
  return f;
}

Eigen::MatrixXd to_dense(const HessianBlocks& h, const Model& m) {
  VarIndex idx = var_index(m);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(idx.size, idx.size);
  for (int i = 0; i < m.n(); ++i) {
    int sz = static_cast<int>(h.diag[i].rows());
    dense.block(idx.offset[i], idx.offset[i], sz, sz) = h.diag[i];
    for (const auto& [j, mat] : h.off[i])
      dense.block(idx.offset[i], idx.offset[j], mat.rows(), mat.cols()) = mat;
  }
  return dense;
}

NcField newton_direction_dense(const HessianBlocks& h, const NcField& g,
                               double ridge, const Model& m) {
  if (ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
  Eigen::MatrixXd dense = to_dense(h, m);
  dense.diagonal().array() += ridge;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
  if (!lu.isInvertible())
    throw SingularHessianError("newton_direction_dense: singular dual Hessian");
  Eigen::VectorXd d = lu.solve(-pack(g, m));
  return unpack(d, m);
}

namespace {

void dump_block(std::ostream& out, const Eigen::MatrixXd& mat, int i, int j,
                const Model& m) {
  for (int r = 0; r < mat.rows(); ++r)
    for (int c = 0; c < mat.cols(); ++c) {
      if (mat(r, c) == 0.0) continue;
      out << i << ' ' << j << ' ' << m.node_comms[i][r] << ' '
          << m.node_comms[j][c] << ' ' << mat(r, c) << '\n';
    }
}

}  // namespace

void dump_triplets(std::ostream& out, const HessianBlocks& h, const Model& m) {
  for (int i = 0; i < m.n(); ++i) {
    dump_block(out, h.diag[i], i, i, m);
    for (const auto& [j, mat] : h.off[i]) dump_block(out, mat, i, j, m);
  }
}

void dump_triplets(std::ostream& out, const Splitting& s, const Model& m) {
  out << "# dbar\n";
  for (int i = 0; i < m.n(); ++i) dump_block(out, s.dbar[i], i, i, m);
  out << "# bbar\n";
  for (int i = 0; i < m.n(); ++i) {
    int sz = static_cast<int>(s.dbar[i].rows());
    dump_block(out, Eigen::MatrixXd::Identity(sz, sz), i, i, m);
    for (const auto& [j, mat] : s.bbar_off[i]) dump_block(out, mat, i, j, m);
  }
}

}  // namespace netpress
