#include <doctest.h>

#include <cmath>
#include <set>

#include "netpress/config.hpp"
#include "netpress/model.hpp"
#include "scenarios.hpp"

using namespace netpress;

namespace {

const char* kMinimalConfig = R"({
  "topology": {"nodes": 2, "links": [{"from": 0, "to": 1, "capacity": 10.0}]},
  "commodities": [{"dest": 1}],
  "arrivals": {"kind": "constant", "mean": 1.0},
  "policy": {"name": "sbp"},
  "run": {"horizon": 10, "seed": 1}
})";

std::string with_capacity(double c) {
  std::string s = kMinimalConfig;
  auto pos = s.find("10.0");
  s.replace(pos, 4, std::to_string(c));
  return s;
}

}  // namespace

TEST_CASE("minimal config loads") {
  Scenario sc = parse_scenario(kMinimalConfig);
  CHECK(sc.model.n() == 2);
  CHECK(sc.model.K() == 1);
  CHECK(sc.model.L() == 1);
  CHECK(sc.model.beta[0][0] == 0.0);
  CHECK(sc.model.arrivals.mean_at(0, 0) == 1.0);
  // scalar means are zeroed at the commodity's own destination
  CHECK(sc.model.arrivals.mean_at(1, 0) == 0.0);
  CHECK(sc.policy.kind == PolicyKind::SoftBackpressure);
  CHECK(sc.policy.epsilon == 1.0);
}

TEST_CASE("config validation failures") {
  CHECK_THROWS_AS(parse_scenario(with_capacity(-1.0)), ValidationError);
  CHECK_THROWS_AS(parse_scenario("not json at all {"), ConfigError);

  SUBCASE("dangling node id") {
    std::string s = kMinimalConfig;
    s.replace(s.find("\"to\": 1"), 7, "\"to\": 5");
    CHECK_THROWS_AS(parse_scenario(s), ValidationError);
  }
  SUBCASE("self loop") {
    std::string s = kMinimalConfig;
    s.replace(s.find("\"to\": 1"), 7, "\"to\": 0");
    CHECK_THROWS_AS(parse_scenario(s), ValidationError);
  }
  SUBCASE("destination with positive own arrival") {
    std::string s = kMinimalConfig;
    s.replace(s.find("\"mean\": 1.0"), 11, "\"mean\": [[0.0],[2.0]]");
    CHECK_THROWS_AS(parse_scenario(s), ValidationError);
  }
  SUBCASE("unknown policy") {
    std::string s = kMinimalConfig;
    s.replace(s.find("\"sbp\""), 5, "\"nosuch\"");
    CHECK_THROWS_AS(parse_scenario(s), ConfigError);
  }
  SUBCASE("missing run section") {
    std::string s = kMinimalConfig;
    s.replace(s.find("\"run\""), 5, "\"ran\"");
    CHECK_THROWS_AS(parse_scenario(s), ConfigError);
  }
}

TEST_CASE("duplicate directed link rejected") {
  Model m = testing::line_model();
  m.topo.links.push_back({0, 1, 5.0});
  for (auto& row : m.beta) row.push_back(0.0);
  CHECK_THROWS_AS(m.finalize(), ValidationError);
}

TEST_CASE("random-topology config is deterministic per seed") {
  const char* cfg = R"({
    "topology": {"random": {"n": 10, "avg_degree": 3.0, "cap_lo": 0.0, "cap_hi": 100.0}},
    "commodities": [{"dest": 0, "beta_to_dest": 10.0}],
    "arrivals": {"kind": "poisson", "mean": 5.0},
    "policy": {"name": "abp"},
    "run": {"horizon": 10, "seed": 42}
  })";
  Scenario a = parse_scenario(cfg);
  Scenario b = parse_scenario(cfg);
  REQUIRE(a.model.L() == b.model.L());
  for (int e = 0; e < a.model.L(); ++e) {
    CHECK(a.model.topo.links[e].from == b.model.topo.links[e].from);
    CHECK(a.model.topo.links[e].to == b.model.topo.links[e].to);
    CHECK(a.model.topo.links[e].capacity == b.model.topo.links[e].capacity);
  }
  CHECK(a.model.n() == 10);
  CHECK(is_connected(a.model.topo));
}

TEST_CASE("random_topology basics") {
  std::mt19937_64 rng(7);
  NetworkTopology t = random_topology(10, 3.0, 0.0, 100.0, rng);
  CHECK(t.n == 10);
  CHECK(is_connected(t));
  for (const Link& l : t.links) {
    CHECK(l.capacity > 0.0);
    CHECK(l.capacity <= 100.0);
  }

  SUBCASE("two nodes give one bidirectional pair") {
    std::mt19937_64 r2(1);
    NetworkTopology small = random_topology(2, 1.0, 1.0, 2.0, r2);
    REQUIRE(small.links.size() == 2);
    CHECK(small.links[0].from == small.links[1].to);
    CHECK(small.links[0].to == small.links[1].from);
  }
  SUBCASE("replay determinism") {
    std::mt19937_64 r1(99), r2(99);
    NetworkTopology a = random_topology(8, 2.5, 0.0, 50.0, r1);
    NetworkTopology b = random_topology(8, 2.5, 0.0, 50.0, r2);
    REQUIRE(a.links.size() == b.links.size());
    for (size_t e = 0; e < a.links.size(); ++e) {
      CHECK(a.links[e].from == b.links[e].from);
      CHECK(a.links[e].to == b.links[e].to);
      CHECK(a.links[e].capacity == b.links[e].capacity);
    }
  }
  SUBCASE("degenerate parameters rejected") {
    std::mt19937_64 r3(1);
    CHECK_THROWS(random_topology(1, 1.0, 0.0, 1.0, r3));
    CHECK_THROWS(random_topology(4, 2.0, 5.0, 5.0, r3));
  }
}

TEST_CASE("neighborhood is the union of both directions") {
  Model m;
  m.topo.n = 2;
  m.topo.links = {{0, 1, 3.0}};  // one direction only
  m.commodities = {{0, 1}};
  m.beta = {{0.0}};
  m.arrivals = {ArrivalKind::Constant, 2, 1, {0.0, 0.0}, 1, {}};
  m.finalize();
  CHECK(m.neighbors[0] == std::vector<int>{1});
  CHECK(m.neighbors[1] == std::vector<int>{0});
}

TEST_CASE("constant arrivals return the mean exactly") {
  Model m = testing::line_model();
  m.arrivals.mean[0] = 5.0;  // node 0, commodity 0
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    NcField a = sample_arrivals(m.arrivals, t, rng);
    CHECK(a.at(0, 0) == 5.0);
    CHECK(a.at(1, 0) == 0.0);
    CHECK(a.at(2, 0) == 0.0);
  }
}

TEST_CASE("poisson arrivals have the right empirical mean") {
  ArrivalProcess p;
  p.kind = ArrivalKind::Poisson;
  p.n = 1;
  p.K = 1;
  p.mean = {5.0};
  std::mt19937_64 rng(12345);
  double sum = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) sum += sample_arrivals(p, t, rng).at(0, 0);
  double mean = sum / draws;
  CHECK(mean >= 4.93);  // 3-sigma band around 5
  CHECK(mean <= 5.07);
}

TEST_CASE("switching arrivals alternate groups") {
  ArrivalProcess p;
  p.kind = ArrivalKind::Switching;
  p.n = 2;
  p.K = 1;
  p.mean = {5.0, 5.0};
  p.period = 10;
  p.groups[0] = {0};
  p.groups[1] = {1};

  std::mt19937_64 rng(7);
  double active_sum = 0.0;
  int active_draws = 0;
  double node0_total = 0.0;
  const int horizon = 40000;
  for (int t = 0; t < horizon; ++t) {
    NcField a = sample_arrivals(p, t, rng);
    bool first_active = (t / 10) % 2 == 0;
    if (first_active) {
      CHECK(a.at(1, 0) == 0.0);
      active_sum += a.at(0, 0);
      ++active_draws;
    } else {
      CHECK(a.at(0, 0) == 0.0);
    }
    node0_total += a.at(0, 0);
  }
  CHECK(active_draws == horizon / 2);
  // active slots look like plain Poisson(5)
  CHECK(std::abs(active_sum / active_draws - 5.0) < 3.0 * std::sqrt(5.0 / active_draws));
  // long-run average per source is half the configured mean
  double longrun = node0_total / horizon;
  CHECK(std::abs(longrun - 2.5) < 3.0 * std::sqrt(2.5 / horizon));

  SUBCASE("mean_arrival_rates halves switching sources") {
    NcField mean = mean_arrival_rates(p);
    CHECK(mean.at(0, 0) == 2.5);
    CHECK(mean.at(1, 0) == 2.5);
  }
}

TEST_CASE("arrival sampling replays identically per seed") {
  Scenario sc = testing::fig_scenario(11, false, 0, PolicyKind::Backpressure);
  std::mt19937_64 r1(123), r2(123);
  for (int t = 0; t < 20; ++t) {
    NcField a = sample_arrivals(sc.model.arrivals, t, r1);
    NcField b = sample_arrivals(sc.model.arrivals, t, r2);
    CHECK(a.v == b.v);
  }
}

TEST_CASE("switching groups must cover all sources") {
  Scenario sc = testing::fig_scenario(5, true, 0, PolicyKind::Accelerated);
  Model broken = sc.model;
  broken.arrivals.groups[1].pop_back();
  CHECK_THROWS_AS(broken.finalize(), ValidationError);
}
