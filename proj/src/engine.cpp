#include "ami/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "ami/csv.hpp"

namespace ami {

namespace {

constexpr double kFreeSpaceSpeed = 3e8;  // radio links

// One FIFO serialization resource (a fiber link or a cell's shared air
// interface) in one direction. The front of `q` is the packet in
// service.
struct Server {
  double rate_bps = 0.0;
  bool busy = false;
  std::deque<std::uint32_t> q;
};

struct Hop {
  std::uint32_t server = 0;  // base server slot: cell*2 + {0 fiber, 1 pipe}
  double prop_s = 0.0;
  std::uint32_t link = 0;  // topology link index, for path reporting
};

// Per-endpoint path up the tree, shared by every packet to/from the
// endpoint. The RF-mesh leg is analytic: per packet it contributes a
// forwarding share (transmit + process) plus its hop propagation.
struct Route {
  std::array<Hop, 2> up{};  // ordered endpoint -> control center
  int n_hops = 0;
  bool has_rf = false;
  double rf_rate_bps = 0.0;
  double rf_prop_s = 0.0;
};

struct Pkt {
  const Route* route = nullptr;
  double created_s = 0.0;
  std::uint32_t size_bits = 0;
  AppName app = AppName::ScheduledMetering;
  bool is_dl = false;
  std::uint8_t hop = 0;
};

struct Ev {
  double t = 0.0;
  EventKind kind = EventKind::Arrival;
  std::uint32_t packet = 0;
  std::uint32_t server = 0;
};

// Min-heap on (time, kind, packet id); a packet has at most one pending
// event, so the order is total and the simulation is deterministic.
struct EvAfter {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.t != b.t) return a.t > b.t;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.packet > b.packet;
  }
};

class Simulation {
 public:
  Simulation(const Topology& t, const std::vector<TrafficDemand>& demands)
      : topo_(t), demands_(demands) {
    build_servers();
  }

  RunResult execute(std::uint64_t seed);

 private:
  void build_servers();
  const Route& route_for(NodeId endpoint);
  std::uint32_t server_slot(const Hop& h, bool is_dl) const {
    // Separate uplink and downlink server tables, interleaved.
    return h.server * 2 + (is_dl ? 0 : 1);
  }
  const Hop& hop_at(const Pkt& p, int i) const {
    const Route& r = *p.route;
    return p.is_dl ? r.up[r.n_hops - 1 - i] : r.up[i];
  }

  void arrive(std::uint32_t pi, double now);
  void start_service(std::uint32_t slot, double now);
  void depart(std::uint32_t pi, std::uint32_t slot, double now);
  void deliver(std::uint32_t pi, double at);

  const Topology& topo_;
  const std::vector<TrafficDemand>& demands_;
  std::vector<Server> servers_;  // slot = (cell*2 + resource)*2 + direction
  std::unordered_map<NodeId, std::uint32_t> route_index_;
  std::deque<Route> routes_;
  std::vector<Pkt> pkts_;
  std::priority_queue<Ev, std::vector<Ev>, EvAfter> events_;

  std::vector<LatencyRecord> records_;
  std::vector<double> ul_bits_, dl_bits_;
  double max_latency_ = 0.0;
  std::uint64_t delivered_ = 0;
};

void Simulation::build_servers() {
  int cells = topo_.spec.cell_count;
  servers_.assign(static_cast<std::size_t>(cells) * 4, Server{});
  // Rates come from the topology's links: the cell's fiber uplink to
  // the control center and the shared air interface. Every backbone
  // link in a cell must agree on the rate, since they share one pipe.
  for (const Link& l : topo_.links) {
    if (l.technology == LinkTechnology::Rf900) continue;
    const Node& down = topo_.nodes[l.b];
    int resource = l.technology == LinkTechnology::Fiber ? 0 : 1;
    std::uint32_t base = (static_cast<std::uint32_t>(down.cell) * 2 +
                          resource) * 2;
    Server& dl = servers_[base];
    Server& ul = servers_[base + 1];
    if (dl.rate_bps == 0.0) {
      dl.rate_bps = l.dl_rate_bps;
      ul.rate_bps = l.ul_rate_bps;
    } else if (dl.rate_bps != l.dl_rate_bps || ul.rate_bps != l.ul_rate_bps) {
      throw std::invalid_argument(
          "backbone link rates differ within one cell");
    }
  }
}

const Route& Simulation::route_for(NodeId endpoint) {
  auto it = route_index_.find(endpoint);
  if (it != route_index_.end()) return routes_[it->second];

  if (endpoint >= topo_.nodes.size())
    throw std::invalid_argument("demand endpoint is not in the topology");
  Route r;
  NodeId cur = endpoint;
  while (topo_.nodes[cur].parent) {
    std::uint32_t li = static_cast<std::uint32_t>(topo_.parent_link(cur));
    const Link& l = topo_.links[li];
    const Node& down = topo_.nodes[l.b];
    switch (l.technology) {
      case LinkTechnology::Rf900:
        r.has_rf = true;
        r.rf_rate_bps = l.ul_rate_bps;
        r.rf_prop_s = l.distance_m / topo_.channels.rf.propagation_speed_mps;
        break;
      case LinkTechnology::Wimax:
      case LinkTechnology::Lte: {
        if (r.n_hops >= 2) throw std::invalid_argument("path too deep");
        r.up[r.n_hops++] = Hop{static_cast<std::uint32_t>(down.cell) * 2 + 1,
                               l.distance_m / kFreeSpaceSpeed, li};
        break;
      }
      case LinkTechnology::Fiber: {
        if (r.n_hops >= 2) throw std::invalid_argument("path too deep");
        r.up[r.n_hops++] =
            Hop{static_cast<std::uint32_t>(down.cell) * 2 + 0,
                l.distance_m / topo_.channels.fiber.propagation_speed_mps, li};
        break;
      }
    }
    cur = *topo_.nodes[cur].parent;
  }
  if (topo_.nodes[cur].kind != NodeKind::ControlCenter || r.n_hops == 0)
    throw std::invalid_argument("demand endpoint has no path to the control center");
  route_index_.emplace(endpoint, static_cast<std::uint32_t>(routes_.size()));
  routes_.push_back(r);
  return routes_.back();
}

void Simulation::arrive(std::uint32_t pi, double now) {
  Pkt& p = pkts_[pi];
  std::uint32_t slot = server_slot(hop_at(p, p.hop), p.is_dl);
  Server& s = servers_[slot];
  s.q.push_back(pi);
  if (!s.busy) start_service(slot, now);
}

void Simulation::start_service(std::uint32_t slot, double now) {
  Server& s = servers_[slot];
  s.busy = true;
  std::uint32_t head = s.q.front();
  events_.push(Ev{now + pkts_[head].size_bits / s.rate_bps,
                  EventKind::Departure, head, slot});
}

void Simulation::depart(std::uint32_t pi, std::uint32_t slot, double now) {
  Server& s = servers_[slot];
  s.q.pop_front();
  s.busy = false;

  Pkt& p = pkts_[pi];
  double prop = hop_at(p, p.hop).prop_s;
  ++p.hop;
  if (p.hop == p.route->n_hops) {
    double at = now + prop;
    if (p.is_dl && p.route->has_rf)
      at += 2.0 * p.size_bits / p.route->rf_rate_bps + p.route->rf_prop_s;
    deliver(pi, at);
  } else {
    events_.push(Ev{now + prop, EventKind::Arrival, pi, 0});
  }
  if (!s.q.empty()) start_service(slot, now);
}

void Simulation::deliver(std::uint32_t pi, double at) {
  const Pkt& p = pkts_[pi];
  double latency = at - p.created_s;
  records_[pi] = LatencyRecord{p.app, p.created_s, latency};
  max_latency_ = std::max(max_latency_, latency);
  ++delivered_;

  std::vector<double>& bits = p.is_dl ? dl_bits_ : ul_bits_;
  std::size_t bin = static_cast<std::size_t>(at);  // 1 s bins
  if (bits.size() <= bin) bits.resize(bin + 1, 0.0);
  bits[bin] += p.size_bits;
}

RunResult Simulation::execute(std::uint64_t seed) {
  const std::size_t n = demands_.size();
  pkts_.resize(n);
  records_.assign(n, LatencyRecord{});
  const NodeId cc = topo_.control_center().id;

  std::size_t cursor = 0;
  double last_release = -std::numeric_limits<double>::infinity();
  while (cursor < n || !events_.empty()) {
    // Releases are merged from the sorted demand list instead of being
    // queued; pending events of equal time always execute first, which
    // matches the arrival < departure < release ordering.
    bool take_release =
        cursor < n &&
        (events_.empty() || demands_[cursor].release_time_s < events_.top().t);
    if (take_release) {
      const TrafficDemand& d = demands_[cursor];
      if (d.release_time_s < last_release)
        throw std::invalid_argument("demands must be sorted by release time");
      last_release = d.release_time_s;

      std::uint32_t pi = static_cast<std::uint32_t>(cursor);
      Pkt& p = pkts_[pi];
      bool is_dl = d.source == cc;
      if (!is_dl && d.destination != cc)
        throw std::invalid_argument(
            "demand must start or end at the control center");
      if (is_dl && d.destination == cc)
        throw std::invalid_argument("demand endpoints are both the control center");
      p.route = &route_for(is_dl ? d.destination : d.source);
      p.created_s = d.release_time_s;
      p.size_bits = d.size_bits;
      p.app = d.application;
      p.is_dl = is_dl;

      // Uplink packets from meters cross the RF mesh before reaching
      // the backbone: forwarding share plus hop propagation up front.
      double entry = d.release_time_s;
      if (!is_dl && p.route->has_rf)
        entry += 2.0 * p.size_bits / p.route->rf_rate_bps + p.route->rf_prop_s;
      events_.push(Ev{entry, EventKind::Arrival, pi, 0});
      ++cursor;
      continue;
    }
    Ev e = events_.top();
    events_.pop();
    if (e.kind == EventKind::Arrival)
      arrive(e.packet, e.t);
    else
      depart(e.packet, e.server, e.t);
  }

  if (delivered_ != n)
    throw std::logic_error("internal error: not every packet was delivered");

  RunResult result;
  result.seed = seed;
  result.records = std::move(records_);
  std::size_t n_bins = std::max(ul_bits_.size(), dl_bits_.size());
  result.throughput.bins.reserve(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    ThroughputBin b;
    b.start_s = static_cast<double>(i);
    b.ul_bps = i < ul_bits_.size() ? ul_bits_[i] : 0.0;  // bits per 1 s bin
    b.dl_bps = i < dl_bits_.size() ? dl_bits_[i] : 0.0;
    result.throughput.bins.push_back(b);
  }
  return result;
}

}  // namespace

std::map<AppName, double> RunResult::max_latency_by_app() const {
  std::map<AppName, double> out;
  for (const LatencyRecord& r : records) {
    auto [it, fresh] = out.emplace(r.application, r.latency_s);
    if (!fresh) it->second = std::max(it->second, r.latency_s);
  }
  return out;
}

double RunResult::max_latency() const {
  double m = 0.0;
  for (const LatencyRecord& r : records) m = std::max(m, r.latency_s);
  return m;
}

RunResult run(const Topology& t, const std::vector<TrafficDemand>& demands,
              std::uint64_t seed) {
  Simulation sim(t, demands);
  return sim.execute(seed);
}

std::map<AppName, double> EnsembleResult::max_latency_by_app() const {
  std::map<AppName, double> out;
  for (int i = 0; i < kAppCount; ++i)
    if (apps[i].packets > 0)
      out[static_cast<AppName>(i)] = apps[i].latency_max_s;
  return out;
}

std::map<AppName, double> EnsembleResult::mean_latency_by_app() const {
  std::map<AppName, double> out;
  for (int i = 0; i < kAppCount; ++i)
    if (apps[i].packets > 0)
      out[static_cast<AppName>(i)] =
          apps[i].latency_sum_s / static_cast<double>(apps[i].packets);
  return out;
}

namespace {

// Everything the ensemble needs from one run; raw records stay local.
struct RunSummary {
  std::array<AppStats, kAppCount> apps{};
  double max_latency = 0.0;
  std::vector<double> ul_bits, dl_bits;
  std::vector<std::array<LatencyCurveCell, kAppCount>> curve;
};

RunSummary summarize(const RunResult& r) {
  RunSummary s;
  for (const LatencyRecord& rec : r.records) {
    AppStats& a = s.apps[static_cast<int>(rec.application)];
    ++a.packets;
    a.latency_sum_s += rec.latency_s;
    a.latency_max_s = std::max(a.latency_max_s, rec.latency_s);
    s.max_latency = std::max(s.max_latency, rec.latency_s);

    std::size_t bin = static_cast<std::size_t>(rec.created_at_s);
    if (s.curve.size() <= bin) s.curve.resize(bin + 1);
    LatencyCurveCell& c = s.curve[bin][static_cast<int>(rec.application)];
    ++c.packets;
    c.latency_sum_s += rec.latency_s;
    c.latency_max_s = std::max(c.latency_max_s, rec.latency_s);
  }
  s.ul_bits.reserve(r.throughput.bins.size());
  s.dl_bits.reserve(r.throughput.bins.size());
  for (const ThroughputBin& b : r.throughput.bins) {
    s.ul_bits.push_back(b.ul_bps);
    s.dl_bits.push_back(b.dl_bps);
  }
  return s;
}

}  // namespace

EnsembleResult run_ensemble(const Topology& t, const DemandBuilder& builder,
                            std::uint64_t base_seed, int n_runs,
                            int max_workers) {
  if (n_runs < 1) throw std::invalid_argument("ensemble needs at least one run");

  std::vector<RunSummary> summaries(n_runs);
  auto one_run = [&](int i) {
    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    std::vector<TrafficDemand> demands = builder(seed);
    summaries[i] = summarize(run(t, demands, seed));
  };

  int workers = std::max(1, std::min(max_workers, n_runs));
  if (workers == 1) {
    for (int i = 0; i < n_runs; ++i) one_run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1))
          one_run(i);
      });
    for (std::thread& th : pool) th.join();
  }

  // Deterministic reduction in seed order.
  EnsembleResult e;
  e.backbone = t.backbone;
  e.node_count = t.nodes.size();
  e.base_seed = base_seed;
  e.run_count = n_runs;

  std::vector<double> ul_sum, dl_sum;
  for (const RunSummary& s : summaries) {
    for (int a = 0; a < kAppCount; ++a) {
      e.apps[a].packets += s.apps[a].packets;
      e.apps[a].latency_sum_s += s.apps[a].latency_sum_s;
      e.apps[a].latency_max_s =
          std::max(e.apps[a].latency_max_s, s.apps[a].latency_max_s);
    }
    e.network_max_latency_s = std::max(e.network_max_latency_s, s.max_latency);

    if (ul_sum.size() < s.ul_bits.size()) ul_sum.resize(s.ul_bits.size(), 0.0);
    if (dl_sum.size() < s.dl_bits.size()) dl_sum.resize(s.dl_bits.size(), 0.0);
    for (std::size_t i = 0; i < s.ul_bits.size(); ++i)
      ul_sum[i] += s.ul_bits[i];
    for (std::size_t i = 0; i < s.dl_bits.size(); ++i)
      dl_sum[i] += s.dl_bits[i];

    if (e.latency_curve.size() < s.curve.size())
      e.latency_curve.resize(s.curve.size());
    for (std::size_t b = 0; b < s.curve.size(); ++b)
      for (int a = 0; a < kAppCount; ++a) {
        LatencyCurveCell& dst = e.latency_curve[b][a];
        const LatencyCurveCell& src = s.curve[b][a];
        dst.packets += src.packets;
        dst.latency_sum_s += src.latency_sum_s;
        dst.latency_max_s = std::max(dst.latency_max_s, src.latency_max_s);
      }
  }
  std::size_t n_bins = std::max(ul_sum.size(), dl_sum.size());
  e.throughput.bins.reserve(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    ThroughputBin b;
    b.start_s = static_cast<double>(i);
    b.ul_bps = (i < ul_sum.size() ? ul_sum[i] : 0.0) / n_runs;
    b.dl_bps = (i < dl_sum.size() ? dl_sum[i] : 0.0) / n_runs;
    e.throughput.bins.push_back(b);
  }
  return e;
}

void write_latency_records_csv(const RunResult& r, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "application,t_created_s,latency_s\n";
  for (const LatencyRecord& rec : r.records)
    out << to_string(rec.application) << ',' << fmt_g(rec.created_at_s) << ','
        << fmt_g(rec.latency_s) << '\n';
}

void write_throughput_csv(const ThroughputSeries& s, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "bin_start_s,ul_bps,dl_bps\n";
  for (const ThroughputBin& b : s.bins)
    out << fmt_g(b.start_s) << ',' << fmt_g(b.ul_bps) << ',' << fmt_g(b.dl_bps)
        << '\n';
}

void write_latency_curve_csv(const EnsembleResult& e, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "bin_start_s,application,packets,mean_latency_s,max_latency_s\n";
  for (std::size_t b = 0; b < e.latency_curve.size(); ++b)
    for (int a = 0; a < kAppCount; ++a) {
      const LatencyCurveCell& c = e.latency_curve[b][a];
      if (c.packets == 0) continue;
      out << b << ',' << to_string(static_cast<AppName>(a)) << ',' << c.packets
          << ',' << fmt_g(c.latency_sum_s / static_cast<double>(c.packets))
          << ',' << fmt_g(c.latency_max_s) << '\n';
    }
}

}  // namespace ami
