#ifndef AMI_CONFIG_HPP
#define AMI_CONFIG_HPP

// Flat configuration files: one `dotted.key = value` pair per line,
// `#` comment lines, no sections. The same format carries scenario
// files. See the README for the full key reference.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ami/topology.hpp"
#include "ami/workload.hpp"

namespace ami {

// Any configuration problem: syntax, unknown key, type mismatch,
// missing file. The message carries file/line/key context.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  Config() = default;

  // Throws ConfigError on unreadable files or malformed lines.
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  bool empty() const { return entries_.empty(); }

  // Typed getters consume the key; a type mismatch raises ConfigError
  // naming the key and line. The optional-default forms return the
  // default when the key is absent.
  std::string get_string(const std::string& key, const std::string& def);
  double get_double(const std::string& key, double def);
  int get_int(const std::string& key, int def);
  std::uint64_t get_uint64(const std::string& key, std::uint64_t def);
  std::vector<double> get_double_list(const std::string& key);

  // All keys below `prefix.` (consumed or not).
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  // Raises ConfigError on the first never-consumed key (typo guard).
  void require_all_consumed() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };
  [[noreturn]] void fail(const std::string& key, const Entry& e,
                         const std::string& why) const;
  Entry* find(const std::string& key);

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

// Everything `run`/`validate` need, assembled from an optional config
// file plus command-line overrides.
struct RunSetup {
  ServiceAreaSpec spec;
  Backbone backbone = Backbone::Wimax;
  Scenario scenario;
  std::uint64_t base_seed = 20;
  int runs = 20;
  int parallel = 1;
  std::string out_dir = "out";
  std::optional<ChannelProfiles> profiles;  // set when overridden
};

struct CliOverrides {
  std::optional<std::string> scenario;  // "one", "two" or a file path
  std::optional<std::string> backbone;  // "wimax" or "lte"
  std::optional<std::uint64_t> base_seed;
  std::optional<int> runs;
  std::optional<int> parallel;
  std::optional<std::string> out_dir;
};

// Applies config-file values, then CLI overrides. Scenario names map
// to the built-in schedules; anything else is read as a scenario file.
// Throws ConfigError on any inconsistency.
RunSetup assemble_setup(Config cfg, const CliOverrides& overrides);

// Scenario serialization in the same flat format.
Scenario load_scenario_file(const std::string& path);
void write_scenario_file(const Scenario& s, const std::string& path);

}  // namespace ami

#endif
