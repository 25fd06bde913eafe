#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "ami/config.hpp"

using namespace ami;

namespace {

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing") {
  Config cfg = Config::parse_string(
      "# comment\n"
      "\n"
      "  run.runs = 7  \n"
      "run.out_dir = results/a\n"
      "topology.area_sq_miles = 80.5\n"
      "list.values = 1, 2.5 ,3\n",
      "test.cfg");

  CHECK(cfg.has("run.runs"));
  CHECK_FALSE(cfg.has("run.seed"));
  CHECK(cfg.get_int("run.runs", 0) == 7);
  CHECK(cfg.get_string("run.out_dir", "") == "results/a");
  CHECK(cfg.get_double("topology.area_sq_miles", 0.0) == 80.5);
  CHECK(cfg.get_double_list("list.values") ==
        std::vector<double>{1.0, 2.5, 3.0});
  CHECK_NOTHROW(cfg.require_all_consumed());

  SUBCASE("defaults when absent") {
    Config c = Config::parse_string("");
    CHECK(c.empty());
    CHECK(c.get_int("nope", 42) == 42);
    CHECK(c.get_double("nope", 1.5) == 1.5);
    CHECK(c.get_string("nope", "x") == "x");
    CHECK(c.get_uint64("nope", 9) == 9);
    CHECK(c.get_double_list("nope").empty());
  }
}

TEST_CASE("config syntax errors") {
  CHECK_THROWS_AS(Config::parse_string("run.runs 7\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("bad key! = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("run.runs =\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("a.b = 1\na.b = 2\n"), ConfigError);

  SUBCASE("messages carry origin, line and key") {
    try {
      Config::parse_string("\nrun.runs = x\n", "my.cfg").get_int("run.runs", 0);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      CHECK(msg.find("my.cfg:2") != std::string::npos);
      CHECK(msg.find("run.runs") != std::string::npos);
      CHECK(msg.find("'x'") != std::string::npos);
    }
  }
}

TEST_CASE("type mismatches") {
  Config cfg = Config::parse_string(
      "a = text\nb = 1.5\nc = 1,2,x\n");
  CHECK_THROWS_AS(cfg.get_int("a", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("b", 0), ConfigError);  // trailing ".5"
  CHECK_THROWS_AS(cfg.get_double_list("c"), ConfigError);
}

TEST_CASE("unconsumed keys are reported") {
  Config cfg = Config::parse_string("run.runs = 3\nrun.rnus = 4\n");
  cfg.get_int("run.runs", 0);
  try {
    cfg.require_all_consumed();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.rnus") != std::string::npos);
  }
}

TEST_CASE("keys_with_prefix") {
  Config cfg = Config::parse_string(
      "channel.rf.customers = 10\nchannel.fiber.rate_bps = 1e9\nrun.runs = 1\n");
  auto keys = cfg.keys_with_prefix("channel");
  CHECK(keys.size() == 2);
  CHECK(cfg.keys_with_prefix("chan").empty());  // component-wise prefix
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(Config::parse_file("does_not_exist.cfg"), ConfigError);
}

TEST_CASE("assemble_setup defaults") {
  RunSetup s = assemble_setup(Config{}, CliOverrides{});
  CHECK(s.spec.area_sq_miles == 600.0);
  CHECK(s.spec.cell_count == 15);
  CHECK(s.spec.concentrators_per_cell == 46);
  CHECK(s.spec.meters_per_concentrator == 423);
  CHECK(s.spec.field_devices_per_cell == 5);
  CHECK(s.backbone == Backbone::Wimax);
  CHECK(s.base_seed == 20);
  CHECK(s.runs == 20);
  CHECK(s.parallel == 1);
  CHECK(s.out_dir == "out");
  CHECK_FALSE(s.profiles.has_value());
  CHECK(s.scenario.label == ScenarioLabel::One);
  CHECK(s.scenario.entries.size() == 5);
}

TEST_CASE("assemble_setup from config and overrides") {
  Config cfg = Config::parse_string(
      "topology.cell_count = 3\n"
      "topology.area_sq_miles = 120\n"
      "run.backbone = lte\n"
      "run.runs = 5\n"
      "run.base_seed = 77\n"
      "run.scenario = two\n");

  SUBCASE("config values are applied") {
    RunSetup s = assemble_setup(cfg, CliOverrides{});
    CHECK(s.spec.cell_count == 3);
    CHECK(s.spec.cell_area() == doctest::Approx(40.0));
    CHECK(s.backbone == Backbone::Lte);
    CHECK(s.runs == 5);
    CHECK(s.base_seed == 77);
    CHECK(s.scenario.label == ScenarioLabel::Two);
  }

  SUBCASE("cli overrides beat the file") {
    CliOverrides o;
    o.backbone = "wimax";
    o.runs = 2;
    o.scenario = "one";
    o.out_dir = "elsewhere";
    RunSetup s = assemble_setup(cfg, o);
    CHECK(s.backbone == Backbone::Wimax);
    CHECK(s.runs == 2);
    CHECK(s.scenario.label == ScenarioLabel::One);
    CHECK(s.out_dir == "elsewhere");
  }
}

TEST_CASE("assemble_setup validation") {
  CHECK_THROWS_AS(
      assemble_setup(Config::parse_string("topology.cell_count = 0\n"),
                     CliOverrides{}),
      ConfigError);
  CHECK_THROWS_AS(
      assemble_setup(Config::parse_string("run.runs = 0\n"), CliOverrides{}),
      ConfigError);
  CHECK_THROWS_AS(
      assemble_setup(Config::parse_string("run.parallel = 0\n"),
                     CliOverrides{}),
      ConfigError);
  CHECK_THROWS_AS(
      assemble_setup(Config::parse_string("run.backbone = wifi\n"),
                     CliOverrides{}),
      ConfigError);
  CHECK_THROWS_AS(
      assemble_setup(Config::parse_string("run.tpyo = 1\n"), CliOverrides{}),
      ConfigError);
}

TEST_CASE("channel overrides") {
  SUBCASE("no channel keys leaves profiles unset") {
    RunSetup s = assemble_setup(Config::parse_string("run.runs = 1\n"),
                                CliOverrides{});
    CHECK_FALSE(s.profiles.has_value());
  }
  SUBCASE("a channel key pins the whole bundle") {
    RunSetup s = assemble_setup(
        Config::parse_string("channel.fiber.rate_bps = 2e9\n"),
        CliOverrides{});
    REQUIRE(s.profiles.has_value());
    CHECK(s.profiles->fiber.rate_bps == 2e9);
    // the rest keeps its defaults
    CHECK(s.profiles->rf.n_customers == 423);
  }
  SUBCASE("rf customers and rate are adjustable") {
    RunSetup s = assemble_setup(
        Config::parse_string(
            "channel.rf.customers = 100\nchannel.rf.data_rate_bps = 5e6\n"),
        CliOverrides{});
    REQUIRE(s.profiles.has_value());
    CHECK(s.profiles->rf.n_customers == 100);
    CHECK(s.profiles->rf.data_rate_bps == 5e6);
  }
  SUBCASE("invalid override bundles are rejected") {
    CHECK_THROWS_AS(
        assemble_setup(Config::parse_string("channel.wimax.ul.data = 1121\n"),
                       CliOverrides{}),
        ConfigError);  // subcarriers no longer sum to the FFT size
    CHECK_THROWS_AS(
        assemble_setup(Config::parse_string("channel.rf.customers = -1\n"),
                       CliOverrides{}),
        ConfigError);
  }
}

TEST_CASE("application profile overrides") {
  Config cfg = Config::parse_string(
      "application.ev.participation = 0.25\n"
      "application.pricing.packet_bytes = 200\n"
      "application.da.devices_per_cell = 3\n"
      "application.real_time_dr.latency_requirement_s = 2\n"
      "application.on_demand_metering.direction = dl\n");
  RunSetup s = assemble_setup(cfg, CliOverrides{});
  const auto& profs = s.scenario.profiles;
  CHECK(std::get<FractionOfMeters>(profs.at(AppName::Ev).participation).value ==
        0.25);
  CHECK(profs.at(AppName::Pricing).packet_bytes_min == 200);
  CHECK(profs.at(AppName::Pricing).packet_bytes_max == 200);
  CHECK(std::get<DevicesPerCell>(profs.at(AppName::Da).participation).value ==
        3);
  CHECK(profs.at(AppName::RealTimeDR).latency_requirement_s == 2.0);
  CHECK(profs.at(AppName::OnDemandMetering).direction ==
        AppDirection::Downlink);
}

TEST_CASE("scenario files") {
  SUBCASE("round trip") {
    Scenario two = builtin_scenario(ScenarioLabel::Two);
    const char* path = "scenario_rt.cfg";
    write_scenario_file(two, path);
    Scenario back = load_scenario_file(path);
    std::remove(path);

    CHECK(back.label == two.label);
    CHECK(back.simulation_length_s == two.simulation_length_s);
    REQUIRE(back.entries.size() == two.entries.size());
    for (std::size_t i = 0; i < two.entries.size(); ++i) {
      CHECK(back.entries[i].application == two.entries[i].application);
      CHECK(back.entries[i].start_minutes == two.entries[i].start_minutes);
      CHECK(back.entries[i].duration_s == two.entries[i].duration_s);
    }
    REQUIRE(back.profiles.size() == two.profiles.size());
    for (const auto& [app, p] : two.profiles) {
      const ApplicationProfile& q = back.profiles.at(app);
      CHECK(q.packet_bytes_min == p.packet_bytes_min);
      CHECK(q.packet_bytes_max == p.packet_bytes_max);
      CHECK(q.latency_requirement_s == p.latency_requirement_s);
      CHECK(q.direction == p.direction);
      CHECK(q.participation.index() == p.participation.index());
    }
  }

  SUBCASE("assemble_setup accepts a scenario path") {
    Scenario one = builtin_scenario(ScenarioLabel::One);
    one.entries[0].start_minutes = {12.0};
    const char* path = "scenario_custom.cfg";
    write_scenario_file(one, path);
    CliOverrides o;
    o.scenario = path;
    RunSetup s = assemble_setup(Config{}, o);
    std::remove(path);
    CHECK(s.scenario.entries[0].start_minutes == std::vector<double>{12.0});
  }

  SUBCASE("entry index gaps are rejected") {
    TempFile f("scenario_gap.cfg",
               "scenario.entry.0.application = pricing\n"
               "scenario.entry.0.start_minutes = 1\n"
               "scenario.entry.2.application = ev\n"
               "scenario.entry.2.start_minutes = 2\n");
    CHECK_THROWS_AS(load_scenario_file(f.path), ConfigError);
  }

  SUBCASE("unknown application is rejected") {
    TempFile f("scenario_app.cfg",
               "scenario.entry.0.application = telepathy\n"
               "scenario.entry.0.start_minutes = 1\n");
    CHECK_THROWS_AS(load_scenario_file(f.path), ConfigError);
  }

  SUBCASE("empty scenario is rejected") {
    TempFile f("scenario_none.cfg", "scenario.label = one\n");
    CHECK_THROWS_AS(load_scenario_file(f.path), ConfigError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_scenario_file("missing_scenario.cfg"), ConfigError);
  }
}
