#include "ami/workload.hpp"

#include <algorithm>
#include <stdexcept>

#include "ami/csv.hpp"
#include "ami/rng.hpp"

namespace ami {

const char* to_string(AppName a) {
  switch (a) {
    case AppName::OnDemandDR: return "on_demand_dr";
    case AppName::RealTimeDR: return "real_time_dr";
    case AppName::Pricing: return "pricing";
    case AppName::OnDemandMetering: return "on_demand_metering";
    case AppName::ScheduledMetering: return "scheduled_metering";
    case AppName::Ev: return "ev";
    case AppName::Da: return "da";
  }
  return "?";
}

AppName app_from_string(const std::string& s) {
  for (int i = 0; i < kAppCount; ++i) {
    AppName a = static_cast<AppName>(i);
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown application: " + s);
}

const char* to_string(ScenarioLabel l) {
  return l == ScenarioLabel::One ? "one" : "two";
}

ApplicationProfile reference_profile(AppName name) {
  ApplicationProfile p;
  p.name = name;
  switch (name) {
    case AppName::OnDemandDR:
      p.latency_requirement_s = 60.0;
      p.direction = AppDirection::Downlink;
      break;
    case AppName::RealTimeDR:
      p.latency_requirement_s = 5.0;
      p.direction = AppDirection::Downlink;
      break;
    case AppName::Pricing:
      p.latency_requirement_s = 60.0;
      p.direction = AppDirection::Downlink;
      break;
    case AppName::OnDemandMetering:
      p.latency_requirement_s = 15.0;
      p.direction = AppDirection::Uplink;
      break;
    case AppName::ScheduledMetering:
      // Full interval reads; the only application with a larger payload.
      p.packet_bytes_min = 1600;
      p.packet_bytes_max = 2400;
      p.latency_requirement_s = 4.0 * 3600.0;
      p.direction = AppDirection::Uplink;
      break;
    case AppName::Ev:
      p.latency_requirement_s = 15.0;
      p.direction = AppDirection::Downlink;
      p.participation = FractionOfMeters{0.5};
      break;
    case AppName::Da:
      p.latency_requirement_s = 5.0;
      p.direction = AppDirection::Both;
      p.participation = DevicesPerCell{5};
      break;
  }
  return p;
}

std::map<AppName, ApplicationProfile> case_study_profiles() {
  std::map<AppName, ApplicationProfile> out;
  for (int i = 0; i < kAppCount; ++i) {
    AppName a = static_cast<AppName>(i);
    ApplicationProfile p = reference_profile(a);
    if (a == AppName::ScheduledMetering) {
      // In the hourly case studies every sender, meters included,
      // reports with the common 100-byte packet.
      p.packet_bytes_min = 100;
      p.packet_bytes_max = 100;
    }
    out.emplace(a, p);
  }
  return out;
}

Scenario builtin_scenario(ScenarioLabel label) {
  Scenario s;
  s.label = label;
  s.simulation_length_s = 3600.0;
  double dr_start = label == ScenarioLabel::One ? 50.0 : 20.8;
  s.entries = {
      {AppName::RealTimeDR, {dr_start}, 180.0},
      {AppName::ScheduledMetering, {1.0, 16.0, 31.0, 46.0}, 5.0},
      {AppName::Pricing, {21.6}, 5.0},
      {AppName::Ev, {55.0}, 5.0},
      {AppName::Da, {45.0}, 5.0},
  };
  return s;
}

namespace {

struct Window {
  AppName app;
  double begin_s;
  double end_s;
};

std::vector<Window> active_windows(const Scenario& s) {
  std::vector<Window> w;
  for (const ScheduleEntry& e : s.entries)
    for (double start : e.start_minutes)
      w.push_back({e.application, start * 60.0, start * 60.0 + e.duration_s});
  return w;
}

bool intersects(const Window& a, const Window& b) {
  return a.begin_s < b.end_s && b.begin_s < a.end_s;
}

}  // namespace

std::vector<std::pair<AppName, AppName>> overlapping_windows(
    const Scenario& s) {
  std::vector<Window> w = active_windows(s);
  std::vector<std::pair<AppName, AppName>> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (!intersects(w[i], w[j])) continue;
      auto pair = std::minmax(w[i].app, w[j].app);
      if (std::find(out.begin(), out.end(),
                    std::make_pair(pair.first, pair.second)) == out.end())
        out.emplace_back(pair.first, pair.second);
    }
  }
  return out;
}

std::vector<std::string> scenario_violations(const Scenario& s) {
  std::vector<std::string> v;
  if (!(s.simulation_length_s > 0.0))
    v.push_back("simulation length must be positive");
  for (const ScheduleEntry& e : s.entries) {
    std::string app = to_string(e.application);
    if (!s.profiles.count(e.application))
      v.push_back("no application profile for " + app);
    if (e.start_minutes.empty())
      v.push_back(app + " has no start times");
    if (!(e.duration_s > 0.0))
      v.push_back(app + " has non-positive duration");
    for (double m : e.start_minutes) {
      if (m < 0.0) v.push_back(app + " starts before the hour");
      if (m * 60.0 + e.duration_s > s.simulation_length_s)
        v.push_back(app + " window at minute " + fmt_g(m) +
                    " runs past the simulation end");
    }
  }
  for (const auto& [app, p] : s.profiles) {
    if (p.packet_bytes_min <= 0 || p.packet_bytes_max < p.packet_bytes_min)
      v.push_back(std::string(to_string(app)) + " has an invalid packet size");
    if (const auto* f = std::get_if<FractionOfMeters>(&p.participation)) {
      if (f->value < 0.0 || f->value > 1.0)
        v.push_back(std::string(to_string(app)) +
                    " participation outside [0, 1]");
    } else if (std::get<DevicesPerCell>(p.participation).value < 0) {
      v.push_back(std::string(to_string(app)) + " has a negative device count");
    }
  }

  auto overlaps = overlapping_windows(s);
  if (s.label == ScenarioLabel::One) {
    for (auto [a, b] : overlaps)
      v.push_back(std::string("unexpected overlap between ") + to_string(a) +
                  " and " + to_string(b));
  } else {
    auto want = std::make_pair(AppName::RealTimeDR, AppName::Pricing);
    bool found = false;
    for (auto [a, b] : overlaps) {
      if (std::make_pair(a, b) == want)
        found = true;
      else
        v.push_back(std::string("unexpected overlap between ") + to_string(a) +
                    " and " + to_string(b));
    }
    if (!found)
      v.push_back(
          "scenario two should overlap real_time_dr with pricing, but the "
          "windows are disjoint");
  }
  return v;
}

namespace {

// Stable substream per (entry, window) so that scenarios sharing an
// entry draw identical demands for it regardless of the other entries.
std::uint64_t window_stream(std::size_t entry_idx, std::size_t window_idx) {
  return entry_idx * 64 + window_idx + 1;
}

}  // namespace

std::vector<TrafficDemand> expand_demands(const Scenario& s, const Topology& t,
                                          std::uint64_t seed) {
  std::vector<TrafficDemand> demands;
  const NodeId cc = t.control_center().id;

  std::vector<NodeId> meters;
  std::vector<std::vector<NodeId>> fds_by_cell(t.spec.cell_count);
  for (const Node& n : t.nodes) {
    if (n.kind == NodeKind::SmartMeter) meters.push_back(n.id);
    if (n.kind == NodeKind::FieldDevice) fds_by_cell[n.cell].push_back(n.id);
  }

  for (std::size_t ei = 0; ei < s.entries.size(); ++ei) {
    const ScheduleEntry& e = s.entries[ei];
    auto it = s.profiles.find(e.application);
    if (it == s.profiles.end())
      throw std::invalid_argument(std::string("no profile for application ") +
                                  to_string(e.application));
    const ApplicationProfile& prof = it->second;

    for (std::size_t wi = 0; wi < e.start_minutes.size(); ++wi) {
      double begin = e.start_minutes[wi] * 60.0;
      double end = begin + e.duration_s;
      Rng rng(seed, window_stream(ei, wi));

      auto emit = [&](NodeId endpoint) {
        double release = rng.uniform(begin, end);
        std::uint32_t bits;
        if (prof.packet_bytes_min == prof.packet_bytes_max)
          bits = static_cast<std::uint32_t>(prof.packet_bytes_min) * 8;
        else
          bits = rng.uniform_int(prof.packet_bytes_min,
                                 prof.packet_bytes_max) * 8;
        if (prof.direction != AppDirection::Uplink)
          demands.push_back({e.application, cc, endpoint, release, bits});
        if (prof.direction != AppDirection::Downlink)
          demands.push_back({e.application, endpoint, cc, release, bits});
      };

      if (const auto* f = std::get_if<FractionOfMeters>(&prof.participation)) {
        for (NodeId m : meters) {
          if (f->value >= 1.0 || rng.bernoulli(f->value)) emit(m);
        }
      } else {
        int per_cell = std::get<DevicesPerCell>(prof.participation).value;
        for (const std::vector<NodeId>& cell_fds : fds_by_cell) {
          if (per_cell >= static_cast<int>(cell_fds.size())) {
            for (NodeId fd : cell_fds) emit(fd);
          } else {
            // Partial Fisher-Yates draw of `per_cell` devices.
            std::vector<NodeId> pool = cell_fds;
            for (int k = 0; k < per_cell; ++k) {
              std::uint32_t j = rng.uniform_int(
                  k, static_cast<std::uint32_t>(pool.size()) - 1);
              std::swap(pool[k], pool[j]);
              emit(pool[k]);
            }
          }
        }
      }
    }
  }

  std::stable_sort(demands.begin(), demands.end(),
                   [](const TrafficDemand& a, const TrafficDemand& b) {
                     return a.release_time_s < b.release_time_s;
                   });
  return demands;
}

RequirementReport check_requirements(
    const std::map<AppName, double>& max_latency_s,
    const std::map<AppName, ApplicationProfile>& profiles) {
  RequirementReport report;
  for (const auto& [app, latency] : max_latency_s) {
    auto it = profiles.find(app);
    if (it == profiles.end())
      throw std::invalid_argument(std::string("no profile for application ") +
                                  to_string(app));
    RequirementCheck c;
    c.application = app;
    c.max_latency_s = latency;
    c.requirement_s = it->second.latency_requirement_s;
    c.pass = latency < c.requirement_s;
    c.margin_s = c.requirement_s - latency;
    report.checks.push_back(c);
    report.all_pass = report.all_pass && c.pass;
  }
  return report;
}

void write_demands_csv(const std::vector<TrafficDemand>& demands,
                       const std::string& path) {
  std::ofstream out = open_output(path);
  out << "application,src,dst,release_s,bits\n";
  for (const TrafficDemand& d : demands)
    out << to_string(d.application) << ',' << d.source << ',' << d.destination
        << ',' << fmt_g(d.release_time_s) << ',' << d.size_bits << '\n';
}

}  // namespace ami
