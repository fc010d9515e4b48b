#include "netpress/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>

#include "netpress/config.hpp"
#include "netpress/oracle.hpp"
#include "netpress/simulator.hpp"
#include "netpress/svg.hpp"
#include "netpress/trace_io.hpp"

namespace netpress {

namespace {

namespace fs = std::filesystem;

/// Relative output paths resolve against $NETPRESS_OUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  const char* dir = std::getenv("NETPRESS_OUT_DIR");
  if (!dir || !*dir) return path;
  return (fs::path(dir) / path).string();
}

struct Overrides {
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<int> add_order;
  std::optional<int> horizon;
  std::string csv;
  std::string svg;
};

int apply_overrides(Scenario& sc, const Overrides& ov) {
  if (!ov.policy.empty()) {
    auto kind = parse_policy_name(ov.policy);
    if (!kind) {
      std::cerr << "unknown policy '" << ov.policy << "'\n";
      return kExitUsage;
    }
    sc.policy.kind = *kind;
  }
  if (ov.seed) sc.run.seed = *ov.seed;
  if (ov.epsilon) sc.policy.epsilon = *ov.epsilon;
  if (ov.add_order) sc.policy.add_order = *ov.add_order;
  if (ov.horizon) sc.run.horizon = *ov.horizon;
  if (!ov.csv.empty()) sc.output.csv_path = ov.csv;
  if (!ov.svg.empty()) sc.output.svg_path = ov.svg;
  if (sc.output.csv_path.empty()) sc.output.csv_path = "trace.csv";
  return kExitOk;
}

std::string summary_line(const Scenario& sc,
                         const std::vector<TraceRecord>& trace,
                         const std::string& csv_path) {
  auto slot = stabilization_slot(trace, kStabilizationWindow,
                                 kStabilizationSlopeTol);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "policy=%s seed=%llu horizon=%d stabilization_slot=%s "
                "mean_total_queue_last_quarter=%.9g csv=%s",
                policy_name(sc.policy.kind),
                static_cast<unsigned long long>(sc.run.seed), sc.run.horizon,
                slot ? std::to_string(*slot).c_str() : "none",
                final_quarter_mean_queue(trace, sc.run.warmup),
                csv_path.c_str());
  return buf;
}

int run_one(Scenario sc, std::string* summary_out) {
  std::string csv = resolve_output(sc.output.csv_path);
  std::vector<TraceRecord> trace;
  try {
    trace = run(sc);
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  }
  write_trace_csv(csv, trace);
  if (!sc.output.svg_path.empty()) {
    Series s;
    s.label = policy_name(sc.policy.kind);
    for (const TraceRecord& r : trace) {
      s.x.push_back(r.t);
      s.y.push_back(r.total_queue);
    }
    write_line_chart(resolve_output(sc.output.svg_path), {s}, "t",
                     "total_queue", "");
  }
  std::string summary = summary_line(sc, trace, csv);
  if (summary_out)
    *summary_out = summary;
  else
    std::cout << summary << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config, const Overrides& ov) {
  Scenario sc = load_config(config);
  if (int rc = apply_overrides(sc, ov); rc != kExitOk) return rc;
  return run_one(std::move(sc), nullptr);
}

int cmd_validate(const std::string& config, double tol) {
  Scenario sc = load_config(config);
  NcField mean = mean_arrival_rates(sc.model.arrivals);
  FeasibilityReport rep = solve_centralized(sc.model, mean, tol);
  if (!rep.conclusive) {
    std::printf("inconclusive slack=%.9g iterations=%d grad_norm=%.9g\n",
                rep.slack, rep.iterations, rep.grad_norm);
    return kExitInconclusive;
  }
  std::printf("%s slack=%.9g iterations=%d\n",
              rep.feasible ? "feasible" : "infeasible", rep.slack,
              rep.iterations);
  return rep.feasible ? kExitOk : kExitInfeasible;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out,
             const std::string& metric) {
  std::vector<Series> series;
  for (const std::string& path : csvs) {
    std::vector<TraceRecord> trace = read_trace_csv(path);
    if (trace.empty()) {
      std::cerr << "no data rows in " << path << "\n";
      return kExitUsage;
    }
    Series s;
    s.label = fs::path(path).stem().string();
    for (const TraceRecord& r : trace) {
      s.x.push_back(r.t);
      double y = r.total_queue;
      if (metric == "total_dual") y = r.total_dual;
      else if (metric == "grad_norm") y = r.grad_norm;
      else if (metric == "max_link_util") y = r.max_link_util;
      s.y.push_back(y);
    }
    series.push_back(std::move(s));
  }
  write_line_chart(resolve_output(out), series, "t", metric, "");
  return kExitOk;
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& policies,
              const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
              const Overrides& base_ov) {
  Scenario base = load_config(config);
  if (int rc = apply_overrides(base, base_ov); rc != kExitOk) return rc;

  std::vector<PolicyKind> kinds;
  for (const std::string& name : policies) {
    auto kind = parse_policy_name(name);
    if (!kind) {
      std::cerr << "unknown policy '" << name << "'\n";
      return kExitUsage;
    }
    kinds.push_back(*kind);
  }

  std::string dir = resolve_output(out_dir.empty() ? "." : out_dir);
  fs::create_directories(dir);
  std::string stem = fs::path(config).stem().string();

  struct Job {
    Scenario sc;
    std::string summary;
    int rc = kExitOk;
  };
  std::vector<Job> jobs;
  for (PolicyKind kind : kinds)
    for (std::uint64_t seed : seeds) {
      Job job;
      job.sc = base;
      job.sc.policy.kind = kind;
      job.sc.run.seed = seed;
      job.sc.output.csv_path =
          (fs::path(dir) / (stem + "_" + policy_name(kind) + "_s" +
                            std::to_string(seed) + ".csv"))
              .string();
      job.sc.output.svg_path.clear();
      jobs.push_back(std::move(job));
    }

  // Output files are keyed by (policy, seed), so jobs can run concurrently.
  std::vector<std::future<void>> futures;
  futures.reserve(jobs.size());
  for (Job& job : jobs)
    futures.push_back(std::async(std::launch::async, [&job] {
      job.rc = run_one(job.sc, &job.summary);
    }));
  for (auto& f : futures) f.get();

  int rc = kExitOk;
  for (const Job& job : jobs) {
    if (job.rc != kExitOk) {
      rc = job.rc;
      std::cout << "policy=" << policy_name(job.sc.policy.kind)
                << " seed=" << job.sc.run.seed << " FAILED rc=" << job.rc
                << "\n";
    } else {
      std::cout << job.summary << "\n";
    }
  }
  return rc;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t dots = item.find("..");
    if (dots != std::string::npos) {
      std::uint64_t lo = std::stoull(item.substr(0, dots));
      std::uint64_t hi = std::stoull(item.substr(dots + 2));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (!item.empty()) {
      seeds.push_back(std::stoull(item));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{
      "netpress: multi-commodity queueing-network simulator and "
      "routing-policy comparison harness.\nCommand-line flags take precedence "
      "over values from the config file.\nRelative output paths resolve "
      "against $NETPRESS_OUT_DIR when it is set."};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario, emit CSV");
  std::string run_config;
  Overrides ov;
  std::uint64_t seed_val = 0;
  double eps_val = 0.0;
  int order_val = 0, horizon_val = 0;
  run_cmd->add_option("--config", run_config, "scenario config file")
      ->required();
  run_cmd->add_option("--policy", ov.policy, "bp|sbp|newton|abp (overrides file)");
  auto* seed_opt = run_cmd->add_option("--seed", seed_val, "run seed");
  auto* eps_opt = run_cmd->add_option("--epsilon", eps_val, "dual stepsize");
  auto* order_opt =
      run_cmd->add_option("--add-order", order_val, "ADD-N order (0..3)");
  auto* horizon_opt = run_cmd->add_option("--horizon", horizon_val, "slots");
  run_cmd->add_option("--csv", ov.csv, "trace output path");
  run_cmd->add_option("--svg", ov.svg, "also emit a total_queue chart");

  // validate
  auto* val_cmd =
      app.add_subcommand("validate", "stabilizability check (exit 0/1/3)");
  std::string val_config;
  double val_tol = kValidateTol;
  val_cmd->add_option("--config", val_config, "scenario config file")
      ->required();
  val_cmd->add_option("--tol", val_tol, "solver tolerance");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render CSV traces as an SVG chart");
  std::vector<std::string> plot_csvs;
  std::string plot_out = "plot.svg";
  std::string plot_metric = "total_queue";
  plot_cmd->add_option("csvs", plot_csvs, "trace CSV files")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG path");
  plot_cmd
      ->add_option("--metric", plot_metric, "column to plot")
      ->check(CLI::IsMember(
          {"total_queue", "total_dual", "grad_norm", "max_link_util"}));

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a (policy, seed) grid concurrently");
  std::string sweep_config, sweep_policies = "bp,sbp,abp", sweep_seeds = "0";
  std::string sweep_dir;
  sweep_cmd->add_option("--config", sweep_config, "scenario config file")
      ->required();
  sweep_cmd->add_option("--policies", sweep_policies, "comma list");
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma list, ranges as lo..hi");
  sweep_cmd->add_option("--out-dir", sweep_dir, "output directory");
  auto* sweep_horizon = sweep_cmd->add_option("--horizon", horizon_val, "slots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*seed_opt) ov.seed = seed_val;
  if (*eps_opt) ov.epsilon = eps_val;
  if (*order_opt) ov.add_order = order_val;
  if (*horizon_opt || *sweep_horizon) ov.horizon = horizon_val;

  try {
    if (run_cmd->parsed()) return cmd_run(run_config, ov);
    if (val_cmd->parsed()) return cmd_validate(val_config, val_tol);
    if (plot_cmd->parsed()) return cmd_plot(plot_csvs, plot_out, plot_metric);
    if (sweep_cmd->parsed()) {
      std::vector<std::string> policies;
      size_t pos = 0;
      while (pos <= sweep_policies.size()) {
        size_t comma = sweep_policies.find(',', pos);
        policies.push_back(sweep_policies.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      return cmd_sweep(sweep_config, policies, parse_seed_list(sweep_seeds),
                       sweep_dir, ov);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const TraceFormatError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace netpress
