#ifndef AMI_WORKLOAD_HPP
#define AMI_WORKLOAD_HPP

// Application profiles and hourly operation schedules, expanded into
// per-packet traffic demands against a concrete topology.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ami/topology.hpp"

namespace ami {

enum class AppName : std::uint8_t {
  OnDemandDR,
  RealTimeDR,
  Pricing,
  OnDemandMetering,
  ScheduledMetering,
  Ev,
  Da,
};
constexpr int kAppCount = 7;

const char* to_string(AppName a);
// Throws std::invalid_argument for unknown names.
AppName app_from_string(const std::string& s);

enum class AppDirection : std::uint8_t { Downlink, Uplink, Both };

// Either a fraction of all meters or an explicit per-cell device count
// (the latter selects field devices rather than meters).
struct FractionOfMeters {
  double value = 1.0;
};
struct DevicesPerCell {
  int value = 0;
};
using Participation = std::variant<FractionOfMeters, DevicesPerCell>;

struct ApplicationProfile {
  AppName name = AppName::ScheduledMetering;
  int packet_bytes_min = 100;  // size drawn uniformly when min < max
  int packet_bytes_max = 100;
  double latency_requirement_s = 0.0;
  AppDirection direction = AppDirection::Uplink;
  Participation participation = FractionOfMeters{1.0};
};

// Reference requirements table (scheduled metering reads 1600-2400 bytes).
ApplicationProfile reference_profile(AppName name);

// Profiles used by the built-in hourly scenarios: identical to the
// reference set except that scheduled metering sends the same 100-byte
// report packet as the other applications.
std::map<AppName, ApplicationProfile> case_study_profiles();

struct ScheduleEntry {
  AppName application = AppName::ScheduledMetering;
  std::vector<double> start_minutes;  // operation start times within the hour
  double duration_s = 5.0;            // width of each active window
};

enum class ScenarioLabel : std::uint8_t { One, Two };

const char* to_string(ScenarioLabel l);

struct Scenario {
  ScenarioLabel label = ScenarioLabel::One;
  double simulation_length_s = 3600.0;
  std::vector<ScheduleEntry> entries;
  std::map<AppName, ApplicationProfile> profiles = case_study_profiles();
};

// The two hourly case-study schedules. They differ only in the
// real-time DR start time: minute 50 keeps every window disjoint,
// minute 20.8 makes DR overlap the pricing update at minute 21.6.
Scenario builtin_scenario(ScenarioLabel label);

// Structural problems with a scenario: windows past the simulation end,
// overlaps that contradict the label, unknown applications. Empty when
// sound.
std::vector<std::string> scenario_violations(const Scenario& s);

// Pairs of entries whose active windows intersect (by open-interval
// arithmetic; windows that merely touch do not overlap).
std::vector<std::pair<AppName, AppName>> overlapping_windows(const Scenario& s);

// One application packet to be injected into the simulation.
struct TrafficDemand {
  AppName application = AppName::ScheduledMetering;
  NodeId source = 0;
  NodeId destination = 0;
  double release_time_s = 0.0;
  std::uint32_t size_bits = 800;
};

// Expands every schedule entry against the topology: selects
// participating endpoints, draws a release time uniformly inside each
// active window, and emits downlink demands control-center->endpoint /
// uplink demands endpoint->control-center (direction Both emits one of
// each). Every (entry, window) pair draws from its own substream of
// `seed`, so scenarios sharing entries produce identical demands for
// them. The result is sorted by release time.
std::vector<TrafficDemand> expand_demands(const Scenario& s,
                                          const Topology& t,
                                          std::uint64_t seed);

struct RequirementCheck {
  AppName application;
  double max_latency_s = 0.0;
  double requirement_s = 0.0;
  bool pass = false;
  double margin_s = 0.0;  // requirement - max (negative when failed)
};

struct RequirementReport {
  std::vector<RequirementCheck> checks;
  bool all_pass = true;
};

// Strict comparison of observed per-application maxima against the
// profile requirements.
RequirementReport check_requirements(
    const std::map<AppName, double>& max_latency_s,
    const std::map<AppName, ApplicationProfile>& profiles);

// (application, src, dst, release_s, bits) rows.
void write_demands_csv(const std::vector<TrafficDemand>& demands,
                       const std::string& path);

}  // namespace ami

#endif
