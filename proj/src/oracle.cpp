#include "netpress/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "netpress/rate_alloc.hpp"

namespace netpress {

namespace {

double min_slack(const NcField& g, const Model& m) {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.n(); ++i)
    for (int k : m.node_comms[i]) s = std::min(s, g.at(i, k));
  return s;
}

double projected_grad_norm(const NcField& duals, const NcField& g,
                           const Model& m) {
  double s = 0.0;
  for (int i = 0; i < m.n(); ++i)
    for (int k : m.node_comms[i]) {
      double gi = g.at(i, k);
      double pg = duals.at(i, k) > 0.0 ? gi : std::min(gi, 0.0);
      s += pg * pg;
    }
  return std::sqrt(s);
}

}  // namespace

FeasibilityReport solve_centralized(const Model& m, const NcField& mean_arrivals,
                                    double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("solve_centralized: tol > 0");

  int max_incident = 1;
  for (int i = 0; i < m.n(); ++i)
    max_incident = std::max(
        max_incident,
        static_cast<int>(m.out_links[i].size() + m.in_links[i].size()));
  const double step = 1.0 / (2.0 * max_incident + 1.0);  // 1/L bound

  FeasibilityReport rep;
  NcField duals(m.n(), m.K());
  const double feas_tol = 10.0 * tol;
  std::deque<double> slack_history;

  for (int it = 0; it < max_iter; ++it) {
    RateAllocation alloc = allocate_network(m, duals, /*soft=*/true);
    NcField g = gradient(alloc, mean_arrivals, m);
    rep.slack = min_slack(g, m);
    rep.grad_norm = projected_grad_norm(duals, g, m);
    rep.iterations = it;

    if (rep.grad_norm <= tol) {
      rep.conclusive = true;
      rep.feasible = rep.slack >= -feas_tol;
      rep.optimal_duals = duals;
      return rep;
    }

    // A persistently negative slack that has stopped moving is a capacity
    // deficit; the dual iterates diverge and the gradient never vanishes.
    if (it % 1000 == 0) {
      slack_history.push_back(rep.slack);
      if (slack_history.size() > 8) slack_history.pop_front();
      if (slack_history.size() == 8 && rep.slack < -feas_tol) {
        double lo = *std::min_element(slack_history.begin(), slack_history.end());
        double hi = *std::max_element(slack_history.begin(), slack_history.end());
        if (hi - lo <= 1e-9 * std::max(1.0, std::abs(rep.slack))) {
          rep.conclusive = true;
          rep.feasible = false;
          rep.optimal_duals = duals;
          return rep;
        }
      }
    }

    for (int i = 0; i < m.n(); ++i)
      for (int k : m.node_comms[i])
        duals.at(i, k) = std::max(0.0, duals.at(i, k) - step * g.at(i, k));
  }

  rep.conclusive = false;
  rep.feasible = false;
  rep.optimal_duals = duals;
  return rep;
}

Eigen::MatrixXd fd_hessian(const NcField& duals, const Model& m, double h) {
  const NcField mean = mean_arrival_rates(m.arrivals);
  const VarIndex idx = var_index(m);

  auto grad_at = [&](const NcField& lam) {
    RateAllocation alloc = allocate_network(m, lam, /*soft=*/true);
    return pack(gradient(alloc, mean, m), m);
  };

  Eigen::MatrixXd fd(idx.size, idx.size);
  int col = 0;
  for (int j = 0; j < m.n(); ++j)
    for (int s : m.node_comms[j]) {
      NcField up = duals, down = duals;
      up.at(j, s) += h;
      down.at(j, s) -= h;
      fd.col(col++) = (grad_at(up) - grad_at(down)) / (2.0 * h);
    }
  return fd;
}

Eigen::MatrixXd dense_neumann(const HessianBlocks& h, int order,
                              const Model& m) {
  const VarIndex idx = var_index(m);
  Eigen::MatrixXd dbar = Eigen::MatrixXd::Zero(idx.size, idx.size);
  Eigen::MatrixXd bbar = Eigen::MatrixXd::Zero(idx.size, idx.size);
  for (int i = 0; i < m.n(); ++i) {
    int sz = static_cast<int>(h.diag[i].rows());
    dbar.block(idx.offset[i], idx.offset[i], sz, sz) =
        h.diag[i] + Eigen::MatrixXd::Identity(sz, sz);
    bbar.block(idx.offset[i], idx.offset[i], sz, sz) =
        Eigen::MatrixXd::Identity(sz, sz);
    for (const auto& [j, mat] : h.off[i])
      bbar.block(idx.offset[i], idx.offset[j], mat.rows(), mat.cols()) = -mat;
  }

  Eigen::MatrixXd dinv = dbar.inverse();
  Eigen::MatrixXd cur = dinv;
  Eigen::MatrixXd acc = dinv;
  for (int tau = 1; tau <= order; ++tau) {
    cur = dinv * bbar * cur;
    acc += cur;
  }
  return acc;
}

}  // namespace netpress
