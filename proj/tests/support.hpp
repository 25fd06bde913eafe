#ifndef AMI_TESTS_SUPPORT_HPP
#define AMI_TESTS_SUPPORT_HPP

// Shared fixtures for the unit and acceptance suites: controlled micro
// topologies and a brute-force FIFO replay that serves as an
// independent oracle for the event-driven engine.

#include <algorithm>
#include <map>
#include <vector>

#include "ami/engine.hpp"
#include "ami/rng.hpp"
#include "ami/topology.hpp"
#include "ami/workload.hpp"

namespace amitest {

// A real generated topology shrunk to hand-computable geometry: every
// node sits at its cell center and all link distances are zero, so
// latencies are pure serialization + queueing (+ the analytic mesh
// share for meters).
inline ami::Topology micro_topology(int cells, int dcs_per_cell,
                                    int meters_per_dc, int fds_per_cell,
                                    ami::Backbone backbone = ami::Backbone::Wimax,
                                    std::uint64_t seed = 1) {
  ami::ServiceAreaSpec spec;
  spec.area_sq_miles = 40.0 * cells;
  spec.cell_count = cells;
  spec.concentrators_per_cell = dcs_per_cell;
  spec.meters_per_concentrator = meters_per_dc;
  spec.field_devices_per_cell = fds_per_cell;
  ami::Topology t = ami::build_topology(spec, backbone, seed);
  for (ami::Link& l : t.links) l.distance_m = 0.0;
  for (ami::Node& n : t.nodes) {
    n.x_miles = 0.0;
    n.y_miles = 0.0;
  }
  return t;
}

// Overrides every link rate, for queueing tests with easy numbers.
inline void set_rates(ami::Topology& t, double fiber_bps, double bb_ul_bps,
                      double bb_dl_bps, double rf_bps) {
  for (ami::Link& l : t.links) {
    switch (l.technology) {
      case ami::LinkTechnology::Fiber:
        l.ul_rate_bps = l.dl_rate_bps = fiber_bps;
        break;
      case ami::LinkTechnology::Wimax:
      case ami::LinkTechnology::Lte:
        l.ul_rate_bps = bb_ul_bps;
        l.dl_rate_bps = bb_dl_bps;
        break;
      case ami::LinkTechnology::Rf900:
        l.ul_rate_bps = l.dl_rate_bps = rf_bps;
        break;
    }
  }
}

inline std::vector<ami::NodeId> nodes_of_kind(const ami::Topology& t,
                                              ami::NodeKind k) {
  std::vector<ami::NodeId> out;
  for (const ami::Node& n : t.nodes)
    if (n.kind == k) out.push_back(n.id);
  return out;
}

// ------------------------------------------------------------------
// Brute-force oracle. Walks each packet's two backbone stages and
// serves every (stage, server) group in FIFO order sorted by
// (arrival time, demand index). Valid whenever all endpoints hang off
// a data concentrator or base station cell pipe (meters, concentrators,
// field devices) — i.e. every packet crosses the same two stages.
// ------------------------------------------------------------------

struct OracleStage {
  int server_key = 0;  // distinguishes (cell, resource, direction)
  double rate_bps = 0.0;
  double prop_s = 0.0;
};

inline std::vector<double> oracle_latencies(
    const ami::Topology& t, const std::vector<ami::TrafficDemand>& demands) {
  const ami::NodeId cc = t.control_center().id;
  struct P {
    double entry = 0.0;           // after any meter-mesh entry share
    double exit_extra = 0.0;      // downlink meter-mesh share
    OracleStage stages[2];
  };
  std::vector<P> ps(demands.size());

  for (std::size_t i = 0; i < demands.size(); ++i) {
    const ami::TrafficDemand& d = demands[i];
    bool is_dl = d.source == cc;
    ami::NodeId ep = is_dl ? d.destination : d.source;

    // Collect the chain endpoint -> control center from the topology.
    double rf_share = 0.0;
    OracleStage pipe, fiber;
    ami::NodeId cur = ep;
    while (t.nodes[cur].parent) {
      const ami::Link& l = t.links[t.parent_link(cur)];
      int cell = t.nodes[l.b].cell;
      if (l.technology == ami::LinkTechnology::Rf900) {
        rf_share = 2.0 * d.size_bits / l.ul_rate_bps +
                   l.distance_m / t.channels.rf.propagation_speed_mps;
      } else if (l.technology == ami::LinkTechnology::Fiber) {
        fiber = {cell * 4 + 0 + (is_dl ? 0 : 1),
                 is_dl ? l.dl_rate_bps : l.ul_rate_bps,
                 l.distance_m / t.channels.fiber.propagation_speed_mps};
      } else {
        pipe = {cell * 4 + 2 + (is_dl ? 0 : 1),
                is_dl ? l.dl_rate_bps : l.ul_rate_bps, l.distance_m / 3e8};
      }
      cur = *t.nodes[cur].parent;
    }
    P& p = ps[i];
    p.entry = d.release_time_s + (is_dl ? 0.0 : rf_share);
    p.exit_extra = is_dl ? rf_share : 0.0;
    if (is_dl) {
      p.stages[0] = fiber;
      p.stages[1] = pipe;
    } else {
      p.stages[0] = pipe;
      p.stages[1] = fiber;
    }
  }

  // Serve stage by stage; within a stage each server is an independent
  // FIFO queue ordered by (arrival, demand index).
  std::vector<double> at(demands.size());
  for (std::size_t i = 0; i < ps.size(); ++i) at[i] = ps[i].entry;
  for (int stage = 0; stage < 2; ++stage) {
    std::vector<std::size_t> order(ps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (at[a] != at[b]) return at[a] < at[b];
      return a < b;
    });
    std::map<int, double> busy_until;
    for (std::size_t i : order) {
      const OracleStage& st = ps[i].stages[stage];
      double& busy = busy_until[st.server_key];
      double start = std::max(busy, at[i]);
      double dep = start + demands[i].size_bits / st.rate_bps;
      busy = dep;
      at[i] = dep + st.prop_s;
    }
  }
  std::vector<double> latencies(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    latencies[i] = at[i] + ps[i].exit_extra - demands[i].release_time_s;
  return latencies;
}

// Random small instance against a micro topology: endpoints among
// meters/concentrators/field devices, mixed directions, releases
// spaced so no two coincide.
inline std::vector<ami::TrafficDemand> random_small_demands(
    const ami::Topology& t, ami::Rng& rng, int max_packets) {
  std::vector<ami::NodeId> endpoints;
  for (const ami::Node& n : t.nodes)
    if (n.kind == ami::NodeKind::SmartMeter ||
        n.kind == ami::NodeKind::DataConcentrator ||
        n.kind == ami::NodeKind::FieldDevice)
      endpoints.push_back(n.id);

  int count = 1 + static_cast<int>(rng.uniform_int(0, max_packets - 1));
  std::vector<ami::TrafficDemand> demands;
  const ami::NodeId cc = t.control_center().id;
  for (int i = 0; i < count; ++i) {
    ami::TrafficDemand d;
    d.application = ami::AppName::Pricing;
    ami::NodeId ep = endpoints[rng.uniform_int(
        0, static_cast<std::uint32_t>(endpoints.size()) - 1)];
    bool dl = rng.bernoulli(0.5);
    d.source = dl ? cc : ep;
    d.destination = dl ? ep : cc;
    d.release_time_s = i * 1.7e-5 + rng.uniform(0.0, 1e-5);
    d.size_bits = rng.bernoulli(0.5) ? 800 : 1600;
    demands.push_back(d);
  }
  std::stable_sort(demands.begin(), demands.end(),
                   [](const ami::TrafficDemand& a, const ami::TrafficDemand& b) {
                     return a.release_time_s < b.release_time_s;
                   });
  return demands;
}

}  // namespace amitest

#endif
