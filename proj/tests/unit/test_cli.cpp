#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cavitytrap/cli.hpp"
#include "cavitytrap/error.hpp"

using namespace cavitytrap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cavitytrap_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

RunConfig small_simulation(const fs::path& out) {
  auto c = parse_config_text(
      "preset = paper-10MHz\nnz = 21\nnrho = 7\nn = 6\ntmax_ms = 3\nseries = 0,4\nstride = 100\n");
  c.out = out.string();
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("wells emits the full atlas") {
    auto c = parse_config_text("preset = paper-50MHz\n");
    c.out = scratch_dir("wells").string();
    std::ostringstream log;
    dispatch("wells", c, log);
    const auto rows = lines(slurp(fs::path(c.out) / "wells.csv"));
    CHECK(rows.size() == 31);
    CHECK(rows[0] == "n,z_um,z_lo_um,z_hi_um,g_over_g0,sf_over_s0");
    CHECK(fs::exists(fs::path(c.out) / "manifest.json"));
  }

  TEST_CASE("dressed sweep has a monotone z column") {
    auto c = parse_config_text("preset = paper-50MHz\nzmin = 2.0\nzmax = 2.5\nnz = 51\n");
    c.out = scratch_dir("dressed").string();
    std::ostringstream log;
    dispatch("dressed", c, log);
    const auto rows = lines(slurp(fs::path(c.out) / "dressed.csv"));
    REQUIRE(rows.size() == 52);
    double prev = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double z = std::stod(rows[i].substr(0, rows[i].find(',')));
      CHECK(z > prev);
      prev = z;
    }
    CHECK(std::stod(rows[1]) == doctest::Approx(2.0));
    CHECK(prev == doctest::Approx(2.5));
  }

  TEST_CASE("seeded simulations are byte-identical and reproducible from the manifest") {
    const auto a = scratch_dir("sim_a"), b = scratch_dir("sim_b"), m = scratch_dir("sim_m");
    std::ostringstream log;
    dispatch("simulate", small_simulation(a), log);
    dispatch("simulate", small_simulation(b), log);
    for (const char* f : {"trajectories.csv", "survival.csv", "series_0.csv", "series_4.csv"}) {
      INFO(f);
      CHECK(slurp(a / f) == slurp(b / f));
      CHECK(!slurp(a / f).empty());
    }
    auto replay = parse_config(a / "manifest.json");
    replay.out = m.string();
    dispatch("simulate", replay, log);
    CHECK(slurp(a / "trajectories.csv") == slurp(m / "trajectories.csv"));
    CHECK(slurp(a / "series_0.csv") == slurp(m / "series_0.csv"));
    const auto rows = lines(slurp(a / "trajectories.csv"));
    CHECK(rows.size() == 7);
  }

  TEST_CASE("manifest is written when a run fails") {
    const auto dir = scratch_dir("fail");
    fs::create_directories(dir / "wells.csv");  // a directory where the table should go
    auto c = parse_config_text("preset = paper-50MHz\n");
    c.out = dir.string();
    std::ostringstream log;
    CHECK_THROWS(dispatch("wells", c, log));
    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("\"status\": \"error\"") != std::string::npos);
  }

  TEST_CASE("command line") {
    const auto dir = scratch_dir("argv");
    const std::string out = dir.string();
    std::vector<std::string> args{"cavitytrap", "wells", "--preset", "paper-10MHz", "--out", out};
    std::vector<char*> argv;
    for (auto& s : args) argv.push_back(s.data());
    CHECK(run_cli(static_cast<int>(argv.size()), argv.data()) == 0);
    CHECK(fs::exists(dir / "wells.csv"));

    std::vector<std::string> bad{"cavitytrap", "wells", "--set", "colour=blue", "--out", out};
    argv.clear();
    for (auto& s : bad) argv.push_back(s.data());
    CHECK(run_cli(static_cast<int>(argv.size()), argv.data()) == 2);
    CHECK_FALSE(is_subcommand("plot"));
  }
}
