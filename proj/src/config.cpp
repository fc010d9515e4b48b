#include "netpress/config.hpp"

#include <fstream>
#include <json.hpp>

namespace netpress {

using nlohmann::json;

std::optional<PolicyKind> parse_policy_name(const std::string& name) {
  if (name == "bp") return PolicyKind::Backpressure;
  if (name == "sbp") return PolicyKind::SoftBackpressure;
  if (name == "newton") return PolicyKind::Newton;
  if (name == "abp") return PolicyKind::Accelerated;
  return std::nullopt;
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Backpressure: return "bp";
    case PolicyKind::SoftBackpressure: return "sbp";
    case PolicyKind::Newton: return "newton";
    case PolicyKind::Accelerated: return "abp";
  }
  return "?";
}

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string("missing config key: ") + key);
  return *it;
}

NetworkTopology parse_topology(const json& j, std::uint64_t seed) {
  NetworkTopology topo;
  if (j.contains("random")) {
    const json& r = j.at("random");
    std::mt19937_64 rng(seed);
    return random_topology(require(r, "n").get<int>(),
                           require(r, "avg_degree").get<double>(),
                           require(r, "cap_lo").get<double>(),
                           require(r, "cap_hi").get<double>(), rng);
  }
  topo.n = require(j, "nodes").get<int>();
  for (const json& l : require(j, "links")) {
    topo.links.push_back({require(l, "from").get<int>(),
                          require(l, "to").get<int>(),
                          require(l, "capacity").get<double>()});
  }
  return topo;
}

void parse_commodities(const json& arr, Model& m) {
  int k = 0;
  for (const json& c : arr) {
    Commodity comm;
    comm.id = k++;
    comm.dest = require(c, "dest").get<int>();
    m.commodities.push_back(comm);

    std::vector<double> row(m.topo.links.size(),
                            c.value("beta_default", 0.0));
    double to_dest = c.value("beta_to_dest", 0.0);
    for (size_t e = 0; e < m.topo.links.size(); ++e)
      if (m.topo.links[e].to == comm.dest && to_dest != 0.0) row[e] = to_dest;
    if (c.contains("beta_overrides")) {
      for (const json& o : c.at("beta_overrides")) {
        int from = require(o, "from").get<int>();
        int to = require(o, "to").get<int>();
        double value = require(o, "value").get<double>();
        bool found = false;
        for (size_t e = 0; e < m.topo.links.size(); ++e)
          if (m.topo.links[e].from == from && m.topo.links[e].to == to) {
            row[e] = value;
            found = true;
          }
        if (!found)
          throw ValidationError("beta override references a missing link");
      }
    }
    m.beta.push_back(std::move(row));
  }
}

ArrivalProcess parse_arrivals(const json& j, const Model& m) {
  ArrivalProcess p;
  p.n = m.n();
  p.K = m.K();
  std::string kind = require(j, "kind").get<std::string>();
  if (kind == "constant")
    p.kind = ArrivalKind::Constant;
  else if (kind == "poisson")
    p.kind = ArrivalKind::Poisson;
  else if (kind == "switching")
    p.kind = ArrivalKind::Switching;
  else
    throw ConfigError("unknown arrival kind: " + kind);

  const json& mean = require(j, "mean");
  p.mean.assign(static_cast<size_t>(p.n) * p.K, 0.0);
  if (mean.is_number()) {
    double v = mean.get<double>();
    for (int i = 0; i < p.n; ++i)
      for (int k = 0; k < p.K; ++k)
        if (i != m.commodities[k].dest)
          p.mean[static_cast<size_t>(i) * p.K + k] = v;
  } else if (mean.is_array()) {
    // Explicit per-node, per-commodity table: mean[i][k].
    if (static_cast<int>(mean.size()) != p.n)
      throw ConfigError("arrival mean table must have one row per node");
    for (int i = 0; i < p.n; ++i) {
      const json& row = mean.at(i);
      if (static_cast<int>(row.size()) != p.K)
        throw ConfigError("arrival mean row must have one entry per commodity");
      for (int k = 0; k < p.K; ++k)
        p.mean[static_cast<size_t>(i) * p.K + k] = row.at(k).get<double>();
    }
  } else {
    throw ConfigError("arrival mean must be a number or a table");
  }

  if (p.kind == ArrivalKind::Switching) {
    p.period = require(j, "period").get<int>();
    const json& groups = require(j, "groups");
    if (groups.size() != 2) throw ConfigError("need exactly two groups");
    for (int g = 0; g < 2; ++g)
      for (const json& node : groups.at(g))
        p.groups[g].push_back(node.get<int>());
  }
  return p;
}

Scenario parse_document(const json& doc) {
  Scenario sc;
  sc.run.seed = 0;
  if (doc.contains("run")) {
    const json& r = doc.at("run");
    sc.run.horizon = require(r, "horizon").get<int>();
    sc.run.seed = require(r, "seed").get<std::uint64_t>();
    sc.run.warmup = r.value("warmup", 0);
    if (sc.run.horizon < 0) throw ValidationError("run.horizon must be >= 0");
    if (sc.run.warmup < 0) throw ValidationError("run.warmup must be >= 0");
  } else {
    throw ConfigError("missing config key: run");
  }

  sc.model.topo = parse_topology(require(doc, "topology"), sc.run.seed);
  parse_commodities(require(doc, "commodities"), sc.model);
  sc.model.arrivals = parse_arrivals(require(doc, "arrivals"), sc.model);
  sc.model.finalize();

  const json& pol = require(doc, "policy");
  std::string name = require(pol, "name").get<std::string>();
  auto kind = parse_policy_name(name);
  if (!kind) throw ConfigError("unknown policy: " + name);
  sc.policy.kind = *kind;
  sc.policy.epsilon = pol.value("epsilon", 1.0);
  sc.policy.add_order = pol.value("add_order", 1);
  sc.policy.ridge = pol.value("ridge", 1.0);
  if (sc.policy.epsilon <= 0.0)
    throw ValidationError("policy.epsilon must be > 0");
  if (sc.policy.add_order < 0 || sc.policy.add_order > 3)
    throw ValidationError("policy.add_order must be in 0..3");
  if (sc.policy.ridge < 0.0) throw ValidationError("policy.ridge must be >= 0");

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    sc.output.csv_path = out.value("csv_path", "");
    sc.output.svg_path = out.value("svg_path", "");
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_scenario(text);
}

}  // namespace netpress
