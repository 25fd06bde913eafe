// amisim — AMI communication network simulator.
//
//   amisim run       simulate a scenario ensemble and write reports
//   amisim calc      evaluate the closed-form channel/latency formulas
//   amisim validate  audit a configuration, topology and scenario
//
// Exit codes: 0 success / all requirements met, 1 requirement failure,
// 2 configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ami/config.hpp"
#include "ami/engine.hpp"
#include "ami/metrics.hpp"

namespace {

struct RunArgs {
  ami::CliOverrides overrides;
  std::string config_path;
  bool dump_topology = false;
};

ami::RunSetup make_setup(const RunArgs& args) {
  ami::Config cfg;
  if (!args.config_path.empty())
    cfg = ami::Config::parse_file(args.config_path);
  return ami::assemble_setup(std::move(cfg), args.overrides);
}

int cmd_run(const RunArgs& args) {
  ami::RunSetup setup = make_setup(args);

  ami::Topology topo = ami::build_topology(setup.spec, setup.backbone,
                                           setup.base_seed, setup.profiles);
  for (const std::string& v : ami::validate_topology(topo))
    throw ami::ConfigError("topology: " + v);
  for (const std::string& v : ami::scenario_violations(setup.scenario))
    throw ami::ConfigError("scenario: " + v);

  std::printf("topology: %zu nodes, %zu links, backbone %s\n",
              topo.nodes.size(), topo.links.size(),
              ami::to_string(topo.backbone));
  std::printf("scenario %s, %d run(s), base seed %llu, %d worker(s)\n",
              ami::to_string(setup.scenario.label), setup.runs,
              static_cast<unsigned long long>(setup.base_seed),
              setup.parallel);

  auto t0 = std::chrono::steady_clock::now();
  ami::DemandBuilder builder = [&](std::uint64_t seed) {
    return ami::expand_demands(setup.scenario, topo, seed);
  };
  ami::EnsembleResult ensemble = ami::run_ensemble(
      topo, builder, setup.base_seed, setup.runs, setup.parallel);
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

  std::uint64_t packets = 0;
  for (const ami::AppStats& a : ensemble.apps) packets += a.packets;
  std::printf("simulated %llu packets in %.1f s\n",
              static_cast<unsigned long long>(packets), elapsed);

  ami::RequirementReport requirements = ami::check_requirements(
      ensemble.max_latency_by_app(), setup.scenario.profiles);
  std::vector<ami::ComparisonRow> table = ami::partial_comparison_table(
      ensemble, setup.scenario.label, topo.channels.rf);

  std::filesystem::create_directories(setup.out_dir);
  auto path = [&](const char* name) {
    return (std::filesystem::path(setup.out_dir) / name).string();
  };
  ami::write_latency_curve_csv(ensemble, path("latency.csv"));
  ami::write_throughput_csv(ensemble.throughput, path("throughput.csv"));
  ami::write_report_txt(table, requirements, ensemble, setup.scenario.label,
                        topo, path("report.txt"));
  ami::write_report_csv(table, requirements, setup.scenario.label,
                        path("report.csv"));
  if (args.dump_topology)
    ami::write_topology_csv(topo, path("topology.csv"));

  std::printf("max latency %.6f s; reports written to %s\n",
              ensemble.network_max_latency_s, setup.out_dir.c_str());
  for (const ami::RequirementCheck& c : requirements.checks)
    if (!c.pass)
      std::printf("requirement FAILED: %s reached %.6f s (requirement %g s)\n",
                  ami::to_string(c.application), c.max_latency_s,
                  c.requirement_s);
  std::printf("overall: %s\n", requirements.all_pass ? "PASS" : "FAIL");
  return requirements.all_pass ? 0 : 1;
}

int cmd_validate(const RunArgs& args) {
  ami::RunSetup setup = make_setup(args);
  ami::Topology topo = ami::build_topology(setup.spec, setup.backbone,
                                           setup.base_seed, setup.profiles);
  std::vector<std::string> violations = ami::validate_topology(topo);
  for (const std::string& v : ami::scenario_violations(setup.scenario))
    violations.push_back("scenario: " + v);

  if (violations.empty()) {
    std::printf("configuration, topology and scenario are well-formed "
                "(%zu nodes)\n",
                topo.nodes.size());
    return 0;
  }
  for (const std::string& v : violations)
    std::printf("violation: %s\n", v.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMI communication network simulator"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------
  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "simulate a scenario ensemble and write reports");
  std::string scenario_opt, backbone_opt, out_opt;
  std::uint64_t seed_opt = 0;
  int runs_opt = 0, parallel_opt = 0;
  run->add_option("--scenario", scenario_opt,
                  "'one', 'two' or a scenario file path");
  run->add_option("--backbone", backbone_opt, "'wimax' or 'lte'");
  run->add_option("--seed", seed_opt, "base seed (default 20)");
  run->add_option("--runs", runs_opt, "ensemble size (default 20)");
  run->add_option("--parallel", parallel_opt, "worker threads (default 1)");
  run->add_option("--out", out_opt, "output directory (default 'out')");
  run->add_option("--config", run_args.config_path, "configuration file");
  run->add_flag("--dump-topology", run_args.dump_topology,
                "also write topology.csv");

  // --- validate ----------------------------------------------------
  RunArgs val_args;
  std::string val_scenario, val_backbone;
  CLI::App* validate = app.add_subcommand(
      "validate", "audit configuration, topology and scenario");
  validate->add_option("--scenario", val_scenario,
                       "'one', 'two' or a scenario file path");
  validate->add_option("--backbone", val_backbone, "'wimax' or 'lte'");
  validate->add_option("--config", val_args.config_path, "configuration file");

  // --- calc --------------------------------------------------------
  CLI::App* calc =
      app.add_subcommand("calc", "evaluate the closed-form formulas");
  calc->require_subcommand(1);

  double area = 40.0;
  CLI::App* hex = calc->add_subcommand("hex-radius",
                                       "hexagon radius from cell area");
  hex->add_option("--area", area, "cell area in square miles")
      ->check(CLI::PositiveNumber);

  std::string dir = "dl";
  CLI::App* wrate =
      calc->add_subcommand("wimax-rate", "OFDMA peak PHY rate");
  wrate->add_option("--dir", dir, "'ul' or 'dl'");

  std::string ldir = "dl";
  CLI::App* lrate = calc->add_subcommand("lte-rate", "LTE peak rate");
  lrate->add_option("--dir", ldir, "'ul' or 'dl'");

  int overlap = 1;
  double rf_cell_area = 40.0;
  CLI::App* rflat = calc->add_subcommand(
      "rf-latency", "meter-segment latency under concurrent applications");
  rflat->add_option("--overlap", overlap, "concurrent applications (>= 1)");
  rflat->add_option("--cell-area", rf_cell_area,
                    "cell area in square miles (sets the distance mean)");

  int hops = 1;
  double prop_s = 1e-5, proc_s = 1e-4, rate_bps = 10e6;
  int bits = 800;
  CLI::App* hop = calc->add_subcommand("hop-delay",
                                       "latency of an n-hop mesh path");
  hop->add_option("--hops", hops, "hop count (>= 1)");
  hop->add_option("--prop-s", prop_s, "per-hop propagation delay, s");
  hop->add_option("--bits", bits, "packet size, bits");
  hop->add_option("--rate-bps", rate_bps, "link rate, bit/s");
  hop->add_option("--proc-s", proc_s, "per-node processing delay, s");

  try {
    app.parse(argc, argv);

    if (run->parsed()) {
      if (!scenario_opt.empty()) run_args.overrides.scenario = scenario_opt;
      if (!backbone_opt.empty()) run_args.overrides.backbone = backbone_opt;
      if (run->count("--seed")) run_args.overrides.base_seed = seed_opt;
      if (run->count("--runs")) run_args.overrides.runs = runs_opt;
      if (run->count("--parallel")) run_args.overrides.parallel = parallel_opt;
      if (!out_opt.empty()) run_args.overrides.out_dir = out_opt;
      return cmd_run(run_args);
    }
    if (validate->parsed()) {
      if (!val_scenario.empty()) val_args.overrides.scenario = val_scenario;
      if (!val_backbone.empty()) val_args.overrides.backbone = val_backbone;
      return cmd_validate(val_args);
    }

    // calc
    if (hex->parsed()) {
      std::printf("%.3f miles\n", ami::hex_radius(area));
      return 0;
    }
    ami::ChannelProfiles defaults =
        ami::ChannelProfiles::defaults(ami::hex_radius(40.0));
    if (wrate->parsed() || lrate->parsed()) {
      const std::string& d = wrate->parsed() ? dir : ldir;
      if (d != "ul" && d != "dl")
        throw ami::ConfigError("--dir must be 'ul' or 'dl', got '" + d + "'");
      ami::Direction direction =
          d == "ul" ? ami::Direction::Uplink : ami::Direction::Downlink;
      double rate = wrate->parsed()
                        ? ami::wimax_phy_rate(defaults.wimax, direction)
                        : ami::lte_peak_rate(defaults.lte, direction);
      std::printf("%.0f bit/s\n", rate);
      return 0;
    }
    if (rflat->parsed()) {
      ami::RfMeshProfile rf =
          ami::default_rf_profile(ami::hex_radius(rf_cell_area));
      double v = ami::rf_segment_latency(rf, overlap);
      if (overlap == 1 || overlap == 2)
        std::printf("%.6f s (bound %g s)\n", v, overlap == 1 ? 0.2 : 0.4);
      else
        std::printf("%.6f s\n", v);
      return 0;
    }
    if (hop->parsed()) {
      std::printf("%.6g s\n",
                  ami::rf_hop_path_delay(hops, prop_s, bits, rate_bps, proc_s));
      return 0;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const ami::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
