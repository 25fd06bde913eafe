#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// AMISIM_PATH is injected by the build: the amisim binary under test.

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;  // stdout + stderr
};

CliResult amisim(const std::string& args) {
  std::string cmd = std::string(AMISIM_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small enough to simulate in well under a second.
const char* kTinyConfig =
    "topology.area_sq_miles = 4\n"
    "topology.cell_count = 2\n"
    "topology.concentrators_per_cell = 2\n"
    "topology.meters_per_concentrator = 3\n"
    "topology.field_devices_per_cell = 1\n"
    "run.runs = 2\n";

struct TempConfig {
  std::string path;
  explicit TempConfig(const std::string& extra = "",
                      const std::string& name = "cli_tiny.cfg")
      : path(name) {
    std::ofstream out(path, std::ios::binary);
    out << kTinyConfig << extra;
  }
  ~TempConfig() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("calc closed forms") {
  CliResult r = amisim("calc hex-radius --area 40");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "3.924 miles\n");

  r = amisim("calc wimax-rate --dir ul");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "50000000 bit/s\n");
  r = amisim("calc wimax-rate --dir dl");
  CHECK(r.out == "64285714 bit/s\n");

  r = amisim("calc lte-rate --dir dl");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "179271709 bit/s\n");
  r = amisim("calc lte-rate --dir ul");
  CHECK(r.out == "89635854 bit/s\n");

  r = amisim("calc rf-latency --overlap 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.0676") != std::string::npos);
  CHECK(r.out.find("(bound 0.2 s)") != std::string::npos);
  r = amisim("calc rf-latency --overlap 2");
  CHECK(r.out.find("0.1353") != std::string::npos);
  CHECK(r.out.find("(bound 0.4 s)") != std::string::npos);
  r = amisim("calc rf-latency --overlap 3");
  CHECK(r.out.find("bound") == std::string::npos);

  r = amisim("calc hop-delay --hops 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.00047 s\n");
}

TEST_CASE("calc rejects bad arguments") {
  CHECK(amisim("calc rf-latency --overlap 0").exit_code == 2);
  CHECK(amisim("calc hex-radius --area -2").exit_code == 2);
  CHECK(amisim("calc wimax-rate --dir sideways").exit_code == 2);
}

TEST_CASE("usage errors") {
  CHECK(amisim("").exit_code == 2);           // missing subcommand
  CHECK(amisim("frobnicate").exit_code == 2); // unknown subcommand
  CHECK(amisim("run --no-such-flag").exit_code == 2);
  CHECK(amisim("--help").exit_code == 0);
  CHECK(amisim("run --help").exit_code == 0);
}

TEST_CASE("validate subcommand") {
  TempConfig cfg;
  CliResult r = amisim("validate --config " + cfg.path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("well-formed") != std::string::npos);

  r = amisim("validate --config " + cfg.path + " --scenario two");
  CHECK(r.exit_code == 0);
}

TEST_CASE("run writes the report set and respects exit codes") {
  TempConfig cfg;
  namespace fs = std::filesystem;
  fs::remove_all("cli_out");

  CliResult r = amisim("run --config " + cfg.path + " --out cli_out");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("scenario one, 2 run(s)") != std::string::npos);
  CHECK(r.out.find("overall: PASS") != std::string::npos);
  CHECK(fs::exists("cli_out/latency.csv"));
  CHECK(fs::exists("cli_out/throughput.csv"));
  CHECK(fs::exists("cli_out/report.txt"));
  CHECK(fs::exists("cli_out/report.csv"));
  CHECK_FALSE(fs::exists("cli_out/topology.csv"));

  SUBCASE("reruns are byte-identical") {
    std::string report = slurp("cli_out/report.csv");
    std::string latency = slurp("cli_out/latency.csv");
    std::string throughput = slurp("cli_out/throughput.csv");
    CliResult again = amisim("run --config " + cfg.path + " --out cli_out");
    CHECK(again.exit_code == 0);
    CHECK(slurp("cli_out/report.csv") == report);
    CHECK(slurp("cli_out/latency.csv") == latency);
    CHECK(slurp("cli_out/throughput.csv") == throughput);
  }

  SUBCASE("seed changes the samples") {
    std::string latency = slurp("cli_out/latency.csv");
    CliResult other = amisim("run --config " + cfg.path +
                             " --out cli_out_b --seed 99");
    CHECK(other.exit_code == 0);
    CHECK(slurp("cli_out_b/latency.csv") != latency);
    fs::remove_all("cli_out_b");
  }

  SUBCASE("--dump-topology adds the topology table") {
    CliResult dump = amisim("run --config " + cfg.path +
                            " --out cli_out --dump-topology");
    CHECK(dump.exit_code == 0);
    CHECK(fs::exists("cli_out/topology.csv"));
  }

  SUBCASE("parallel workers match the sequential output") {
    std::string latency = slurp("cli_out/latency.csv");
    CliResult par = amisim("run --config " + cfg.path +
                           " --out cli_out_p --runs 4 --parallel 2");
    CHECK(par.exit_code == 0);
    CliResult seq = amisim("run --config " + cfg.path +
                           " --out cli_out_s --runs 4 --parallel 1");
    CHECK(seq.exit_code == 0);
    CHECK(slurp("cli_out_p/latency.csv") == slurp("cli_out_s/latency.csv"));
    CHECK(slurp("cli_out_p/report.csv") == slurp("cli_out_s/report.csv"));
    (void)latency;
    fs::remove_all("cli_out_p");
    fs::remove_all("cli_out_s");
  }

  fs::remove_all("cli_out");
}

TEST_CASE("run configuration failures exit with 2") {
  CHECK(amisim("run --scenario no_such_scenario.cfg").exit_code == 2);
  CHECK(amisim("run --config no_such_config.cfg").exit_code == 2);
  TempConfig bad("run.parallel = 0\n", "cli_bad.cfg");
  CHECK(amisim("run --config " + bad.path).exit_code == 2);
  TempConfig typo("run.tpyo = 1\n", "cli_typo.cfg");
  CliResult r = amisim("run --config " + typo.path);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("run.tpyo") != std::string::npos);
}

TEST_CASE("run with a requirement failure exits with 1") {
  // Impossible requirement: even an unloaded packet takes ~0.1 ms.
  TempConfig cfg("application.pricing.latency_requirement_s = 1e-7\n");
  CliResult r = amisim("run --config " + cfg.path + " --out cli_out_f");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("requirement FAILED: pricing") != std::string::npos);
  CHECK(r.out.find("overall: FAIL") != std::string::npos);
  std::filesystem::remove_all("cli_out_f");
}
