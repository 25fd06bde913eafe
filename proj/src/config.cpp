#include "ami/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ami/csv.hpp"

namespace ami {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
      return false;
  return true;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": malformed key '" + key + "'");
    if (value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key '" + key + "' has no value");
    if (!cfg.entries_.emplace(key, Entry{value, lineno, false}).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
  }
  return cfg;
}

void Config::fail(const std::string& key, const Entry& e,
                  const std::string& why) const {
  throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                    "': " + why + " (value '" + e.value + "')");
}

Config::Entry* Config::find(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.consumed = true;
  return &it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& def) {
  Entry* e = find(key);
  return e ? e->value : def;
}

double Config::get_double(const std::string& key, double def) {
  Entry* e = find(key);
  if (!e) return def;
  char* end = nullptr;
  double v = std::strtod(e->value.c_str(), &end);
  if (end == e->value.c_str() || *end != '\0')
    fail(key, *e, "expected a number");
  return v;
}

int Config::get_int(const std::string& key, int def) {
  Entry* e = find(key);
  if (!e) return def;
  char* end = nullptr;
  long v = std::strtol(e->value.c_str(), &end, 10);
  if (end == e->value.c_str() || *end != '\0')
    fail(key, *e, "expected an integer");
  return static_cast<int>(v);
}

std::uint64_t Config::get_uint64(const std::string& key, std::uint64_t def) {
  Entry* e = find(key);
  if (!e) return def;
  char* end = nullptr;
  unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
  if (end == e->value.c_str() || *end != '\0')
    fail(key, *e, "expected a nonnegative integer");
  return v;
}

std::vector<double> Config::get_double_list(const std::string& key) {
  Entry* e = find(key);
  std::vector<double> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0')
      fail(key, *e, "expected a comma-separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, *e, "list is empty");
  return out;
}

std::vector<std::string> Config::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  std::string p = prefix + ".";
  for (const auto& [key, e] : entries_)
    if (key.rfind(p, 0) == 0) out.push_back(key);
  return out;
}

void Config::require_all_consumed() const {
  for (const auto& [key, e] : entries_)
    if (!e.consumed)
      throw ConfigError(origin_ + ":" + std::to_string(e.line) +
                        ": unknown key '" + key + "'");
}

namespace {

Backbone backbone_from_string(const std::string& s) {
  if (s == "wimax") return Backbone::Wimax;
  if (s == "lte") return Backbone::Lte;
  throw ConfigError("backbone must be 'wimax' or 'lte', got '" + s + "'");
}

Modulation modulation_from_string(const std::string& s) {
  if (s == "qpsk") return Modulation::Qpsk;
  if (s == "qam16") return Modulation::Qam16;
  if (s == "qam64") return Modulation::Qam64;
  throw ConfigError("modulation must be qpsk/qam16/qam64, got '" + s + "'");
}

AppDirection direction_from_string(const std::string& s) {
  if (s == "dl") return AppDirection::Downlink;
  if (s == "ul") return AppDirection::Uplink;
  if (s == "both") return AppDirection::Both;
  throw ConfigError("direction must be dl/ul/both, got '" + s + "'");
}

const char* to_string(AppDirection d) {
  switch (d) {
    case AppDirection::Downlink: return "dl";
    case AppDirection::Uplink: return "ul";
    case AppDirection::Both: return "both";
  }
  return "?";
}

void apply_subcarrier_overrides(Config& cfg, const std::string& prefix,
                                SubcarrierPlan& plan) {
  plan.guard_left = cfg.get_int(prefix + ".guard_left", plan.guard_left);
  plan.guard_right = cfg.get_int(prefix + ".guard_right", plan.guard_right);
  plan.data = cfg.get_int(prefix + ".data", plan.data);
  plan.pilot = cfg.get_int(prefix + ".pilot", plan.pilot);
  plan.dc = cfg.get_int(prefix + ".dc", plan.dc);
}

// channel.* overrides on top of the defaults for this cell size.
ChannelProfiles apply_channel_overrides(Config& cfg, double cell_radius_miles,
                                        bool* any) {
  ChannelProfiles p = ChannelProfiles::defaults(cell_radius_miles);
  *any = !cfg.keys_with_prefix("channel").empty();

  p.fiber.rate_bps = cfg.get_double("channel.fiber.rate_bps", p.fiber.rate_bps);
  p.fiber.propagation_speed_mps = cfg.get_double(
      "channel.fiber.propagation_speed_mps", p.fiber.propagation_speed_mps);

  p.wimax.fft_size = cfg.get_int("channel.wimax.fft_size", p.wimax.fft_size);
  p.wimax.modulation = modulation_from_string(cfg.get_string(
      "channel.wimax.modulation",
      p.wimax.modulation == Modulation::Qam64
          ? "qam64"
          : p.wimax.modulation == Modulation::Qam16 ? "qam16" : "qpsk"));
  p.wimax.coding_rate =
      cfg.get_double("channel.wimax.coding_rate", p.wimax.coding_rate);
  p.wimax.symbol_time_s =
      cfg.get_double("channel.wimax.symbol_time_s", p.wimax.symbol_time_s);
  apply_subcarrier_overrides(cfg, "channel.wimax.ul", p.wimax.uplink);
  apply_subcarrier_overrides(cfg, "channel.wimax.dl", p.wimax.downlink);

  p.lte.streams = cfg.get_int("channel.lte.streams", p.lte.streams);
  p.lte.dl_symbols_per_subframe = cfg.get_int(
      "channel.lte.dl_symbols_per_subframe", p.lte.dl_symbols_per_subframe);
  p.lte.ul_symbols_per_subframe = cfg.get_int(
      "channel.lte.ul_symbols_per_subframe", p.lte.ul_symbols_per_subframe);
  p.lte.bits_per_symbol_block = cfg.get_int("channel.lte.bits_per_symbol",
                                            p.lte.bits_per_symbol_block);
  p.lte.subframe_time_s =
      cfg.get_double("channel.lte.subframe_time_s", p.lte.subframe_time_s);
  p.lte.ul_band_mhz = cfg.get_double("channel.lte.ul_band_mhz", p.lte.ul_band_mhz);
  p.lte.dl_band_mhz = cfg.get_double("channel.lte.dl_band_mhz", p.lte.dl_band_mhz);
  p.lte.bandwidth_mhz =
      cfg.get_double("channel.lte.bandwidth_mhz", p.lte.bandwidth_mhz);

  p.rf.data_rate_bps = cfg.get_double("channel.rf.data_rate_bps", p.rf.data_rate_bps);
  p.rf.packet_size_bits =
      cfg.get_int("channel.rf.packet_size_bits", p.rf.packet_size_bits);
  p.rf.n_customers = cfg.get_int("channel.rf.customers", p.rf.n_customers);
  p.rf.propagation_speed_mps = cfg.get_double(
      "channel.rf.propagation_speed_mps", p.rf.propagation_speed_mps);
  p.rf.distance.mean_m =
      cfg.get_double("channel.rf.distance_mean_m", p.rf.distance.mean_m);
  p.rf.distance.sigma_m =
      cfg.get_double("channel.rf.distance_sigma_m", p.rf.distance.sigma_m);
  p.rf.distance.min_m =
      cfg.get_double("channel.rf.distance_min_m", p.rf.distance.min_m);
  p.rf.distance.max_m =
      cfg.get_double("channel.rf.distance_max_m", p.rf.distance.max_m);

  for (const std::string& problem : p.wimax.validate())
    throw ConfigError("channel.wimax: " + problem);
  for (const std::string& problem : p.lte.validate())
    throw ConfigError("channel.lte: " + problem);
  for (const std::string& problem : p.rf.validate())
    throw ConfigError("channel.rf: " + problem);
  return p;
}

// application.<name>.* profile overrides (main config or scenario file).
void apply_profile_overrides(Config& cfg,
                             std::map<AppName, ApplicationProfile>& profiles) {
  for (auto& [app, prof] : profiles) {
    std::string base = std::string("application.") + to_string(app);
    if (cfg.has(base + ".packet_bytes")) {
      int b = cfg.get_int(base + ".packet_bytes", 0);
      prof.packet_bytes_min = prof.packet_bytes_max = b;
    }
    prof.packet_bytes_min =
        cfg.get_int(base + ".packet_bytes_min", prof.packet_bytes_min);
    prof.packet_bytes_max =
        cfg.get_int(base + ".packet_bytes_max", prof.packet_bytes_max);
    prof.latency_requirement_s = cfg.get_double(base + ".latency_requirement_s",
                                                prof.latency_requirement_s);
    if (cfg.has(base + ".direction"))
      prof.direction =
          direction_from_string(cfg.get_string(base + ".direction", ""));
    if (cfg.has(base + ".participation"))
      prof.participation =
          FractionOfMeters{cfg.get_double(base + ".participation", 1.0)};
    if (cfg.has(base + ".devices_per_cell"))
      prof.participation =
          DevicesPerCell{cfg.get_int(base + ".devices_per_cell", 0)};
  }
}

Scenario scenario_from_config(Config& cfg) {
  Scenario s;
  std::string label = cfg.get_string("scenario.label", "one");
  if (label == "one")
    s.label = ScenarioLabel::One;
  else if (label == "two")
    s.label = ScenarioLabel::Two;
  else
    throw ConfigError("scenario.label must be 'one' or 'two', got '" + label +
                      "'");
  s.simulation_length_s =
      cfg.get_double("scenario.simulation_length_s", s.simulation_length_s);

  s.entries.clear();
  for (int i = 0;; ++i) {
    std::string base = "scenario.entry." + std::to_string(i);
    if (!cfg.has(base + ".application")) {
      // Contiguous indices required; a later index means a gap.
      if (!cfg.keys_with_prefix(base).empty())
        throw ConfigError("scenario entry " + std::to_string(i) +
                          " is missing its application key");
      break;
    }
    ScheduleEntry e;
    std::string app = cfg.get_string(base + ".application", "");
    try {
      e.application = app_from_string(app);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("scenario entry ") + std::to_string(i) +
                        ": " + err.what());
    }
    e.start_minutes = cfg.get_double_list(base + ".start_minutes");
    if (e.start_minutes.empty())
      throw ConfigError("scenario entry " + std::to_string(i) +
                        " needs start_minutes");
    e.duration_s = cfg.get_double(base + ".duration_s", 5.0);
    s.entries.push_back(e);
  }
  if (s.entries.empty())
    throw ConfigError("scenario file defines no entries");

  apply_profile_overrides(cfg, s.profiles);
  return s;
}

}  // namespace

Scenario load_scenario_file(const std::string& path) {
  Config cfg = Config::parse_file(path);
  Scenario s = scenario_from_config(cfg);
  cfg.require_all_consumed();
  return s;
}

void write_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "scenario.label = " << to_string(s.label) << "\n";
  out << "scenario.simulation_length_s = " << fmt_g(s.simulation_length_s)
      << "\n";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const ScheduleEntry& e = s.entries[i];
    std::string base = "scenario.entry." + std::to_string(i);
    out << base << ".application = " << to_string(e.application) << "\n";
    out << base << ".start_minutes = ";
    for (std::size_t k = 0; k < e.start_minutes.size(); ++k)
      out << (k ? ", " : "") << fmt_g(e.start_minutes[k]);
    out << "\n";
    out << base << ".duration_s = " << fmt_g(e.duration_s) << "\n";
  }
  for (const auto& [app, p] : s.profiles) {
    std::string base = std::string("application.") + to_string(app);
    out << base << ".packet_bytes_min = " << p.packet_bytes_min << "\n";
    out << base << ".packet_bytes_max = " << p.packet_bytes_max << "\n";
    out << base << ".latency_requirement_s = " << fmt_g(p.latency_requirement_s)
        << "\n";
    out << base << ".direction = " << to_string(p.direction) << "\n";
    if (const auto* f = std::get_if<FractionOfMeters>(&p.participation))
      out << base << ".participation = " << fmt_g(f->value) << "\n";
    else
      out << base << ".devices_per_cell = "
          << std::get<DevicesPerCell>(p.participation).value << "\n";
  }
}

RunSetup assemble_setup(Config cfg, const CliOverrides& overrides) {
  RunSetup setup;

  setup.spec.area_sq_miles =
      cfg.get_double("topology.area_sq_miles", setup.spec.area_sq_miles);
  setup.spec.cell_count =
      cfg.get_int("topology.cell_count", setup.spec.cell_count);
  setup.spec.concentrators_per_cell = cfg.get_int(
      "topology.concentrators_per_cell", setup.spec.concentrators_per_cell);
  setup.spec.meters_per_concentrator = cfg.get_int(
      "topology.meters_per_concentrator", setup.spec.meters_per_concentrator);
  setup.spec.field_devices_per_cell = cfg.get_int(
      "topology.field_devices_per_cell", setup.spec.field_devices_per_cell);
  if (setup.spec.cell_count < 1 || setup.spec.concentrators_per_cell < 1 ||
      setup.spec.meters_per_concentrator < 1 ||
      setup.spec.field_devices_per_cell < 0 ||
      !(setup.spec.area_sq_miles > 0.0))
    throw ConfigError("topology.*: counts must be positive (field devices "
                      "may be zero)");

  setup.backbone = backbone_from_string(overrides.backbone.value_or(
      cfg.get_string("run.backbone", "wimax")));
  setup.base_seed = overrides.base_seed.value_or(
      cfg.get_uint64("run.base_seed", setup.base_seed));
  setup.runs = overrides.runs.value_or(cfg.get_int("run.runs", setup.runs));
  setup.parallel =
      overrides.parallel.value_or(cfg.get_int("run.parallel", setup.parallel));
  setup.out_dir =
      overrides.out_dir.value_or(cfg.get_string("run.out_dir", setup.out_dir));
  if (setup.runs < 1) throw ConfigError("run.runs must be >= 1");
  if (setup.parallel < 1) throw ConfigError("run.parallel must be >= 1");

  double cell_radius = hex_radius(setup.spec.cell_area());
  bool channel_overridden = false;
  ChannelProfiles profiles =
      apply_channel_overrides(cfg, cell_radius, &channel_overridden);
  if (channel_overridden) setup.profiles = profiles;

  std::string scen =
      overrides.scenario.value_or(cfg.get_string("run.scenario", "one"));
  if (scen == "one" || scen == "two") {
    setup.scenario = builtin_scenario(scen == "one" ? ScenarioLabel::One
                                                    : ScenarioLabel::Two);
    apply_profile_overrides(cfg, setup.scenario.profiles);
  } else {
    setup.scenario = load_scenario_file(scen);
    apply_profile_overrides(cfg, setup.scenario.profiles);
  }

  cfg.require_all_consumed();
  return setup;
}

}  // namespace ami
