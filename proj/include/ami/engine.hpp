#ifndef AMI_ENGINE_HPP
#define AMI_ENGINE_HPP

// Discrete-event simulation of the backbone. Packets queue through two
// FIFO resources per cell and direction — the control-center fiber
// link and the shared WiMAX/LTE air interface — with store-and-forward
// serialization and free-space/fiber propagation delays. The RF-mesh
// leg between a meter and its concentrator is carried analytically as
// a per-packet delay share rather than simulated hop by hop.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ami/topology.hpp"
#include "ami/workload.hpp"

namespace ami {

// Event ordering contract: simultaneous events execute arrivals first,
// then departures, then releases, with packet id as the final tie
// breaker. The engine honours this ordering; it is part of the
// determinism guarantee.
enum class EventKind : std::uint8_t { Arrival = 0, Departure = 1, Release = 2 };

struct LatencyRecord {
  AppName application;
  double created_at_s = 0.0;
  double latency_s = 0.0;
};

struct ThroughputBin {
  double start_s = 0.0;
  double ul_bps = 0.0;
  double dl_bps = 0.0;
};

// Contiguous fixed-width bins starting at t = 0.
struct ThroughputSeries {
  double bin_width_s = 1.0;
  std::vector<ThroughputBin> bins;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<LatencyRecord> records;  // one per demand, in demand order
  ThroughputSeries throughput;

  std::map<AppName, double> max_latency_by_app() const;
  double max_latency() const;
};

// Single deterministic run. `demands` must be sorted by release time
// (as produced by expand_demands); endpoints must exist in `t` and each
// demand must start or end at the control center.
// Throws std::invalid_argument on contract violations.
RunResult run(const Topology& t, const std::vector<TrafficDemand>& demands,
              std::uint64_t seed);

struct AppStats {
  std::uint64_t packets = 0;
  double latency_sum_s = 0.0;
  double latency_max_s = 0.0;
};

// Per-creation-second latency aggregate, for plot-ready curves.
struct LatencyCurveCell {
  std::uint64_t packets = 0;
  double latency_sum_s = 0.0;
  double latency_max_s = 0.0;
};

struct EnsembleResult {
  Backbone backbone = Backbone::Wimax;
  std::size_t node_count = 0;
  std::uint64_t base_seed = 0;
  int run_count = 0;

  ThroughputSeries throughput;  // per-bin mean over runs
  std::array<AppStats, kAppCount> apps{};  // aggregated over all runs
  double network_max_latency_s = 0.0;      // max over packets and runs
  std::vector<std::array<LatencyCurveCell, kAppCount>> latency_curve;

  std::map<AppName, double> max_latency_by_app() const;
  std::map<AppName, double> mean_latency_by_app() const;
};

using DemandBuilder =
    std::function<std::vector<TrafficDemand>(std::uint64_t seed)>;

// Runs seeds base_seed .. base_seed+n_runs-1, re-expanding demands per
// seed via `builder`, and aggregates. `max_workers` > 1 distributes
// runs across threads; results are reduced in seed order and identical
// to the sequential ones.
EnsembleResult run_ensemble(const Topology& t, const DemandBuilder& builder,
                            std::uint64_t base_seed, int n_runs,
                            int max_workers = 1);

// (application, t_created_s, latency_s) rows, demand order.
void write_latency_records_csv(const RunResult& r, const std::string& path);
// (bin_start_s, ul_bps, dl_bps) rows.
void write_throughput_csv(const ThroughputSeries& s, const std::string& path);
// (bin_start_s, application, packets, mean_latency_s, max_latency_s) rows,
// empty cells skipped.
void write_latency_curve_csv(const EnsembleResult& e, const std::string& path);

}  // namespace ami

#endif
