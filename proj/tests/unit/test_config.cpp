#include <doctest.h>

#include <fstream>

#include "cavitytrap/config.hpp"
#include "cavitytrap/error.hpp"

using namespace cavitytrap;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("paper-50MHz preset") {
    const auto c = parse_config_text("preset = paper-50MHz\n");
    const auto p = c.params();
    CHECK(angular_to_mhz(p.S0) == doctest::Approx(50));
    CHECK(p.drive_photons == 0.01);
    CHECK(angular_to_mhz(p.probe_detuning()) == doctest::Approx(-10));
    CHECK(angular_to_mhz(p.g0) == doctest::Approx(30));
    CHECK(angular_to_mhz(p.kappa) == doctest::Approx(4));
    CHECK(angular_to_mhz(p.gamma) == doctest::Approx(5.2));
    CHECK(p.w0 == doctest::Approx(20e-6));
    CHECK(p.lambda0 == doctest::Approx(852.4e-9));
  }

  TEST_CASE("defaults: caesium mass and cavity tuned to the atom") {
    const auto c = parse_config_text("probe_detuning_mhz = -28\n");
    const auto p = c.params();
    CHECK(p.mass == doctest::Approx(2.2069e-25).epsilon(1e-4));
    CHECK(p.delta_c == p.delta_a);
    CHECK(angular_to_mhz(p.delta_a) == doctest::Approx(28));
    const auto q = parse_config_text("delta_c_mhz = 12\n").params();
    CHECK(angular_to_mhz(q.delta_c) == doctest::Approx(12));
    CHECK(angular_to_mhz(q.delta_a) == doctest::Approx(12));
    const auto r = parse_config_text("delta_c_mhz = 12\nprobe_detuning_mhz = -5\n").params();
    CHECK(angular_to_mhz(r.delta_c) == doctest::Approx(12));
    CHECK(angular_to_mhz(r.delta_a) == doctest::Approx(5));
  }

  TEST_CASE("preset applies first, other keys override") {
    const auto c = parse_config_text("well = 3  # adverse well\ns0_mhz = 20\npreset = paper-10MHz\n");
    CHECK(c.well == 3);
    CHECK(c.s0_mhz == 20);
    CHECK(c.probe_detuning_mhz == -28);
    CHECK(c.drive_photons == 0.001);
  }

  TEST_CASE("malformed and unknown input") {
    CHECK(kind_of("s0_mhz = fifty\n") == ErrorKind::ParseError);
    CHECK(kind_of("no equals sign\n") == ErrorKind::ParseError);
    CHECK(kind_of("colour = blue\n") == ErrorKind::ValidationError);
    CHECK(kind_of("preset = paper-1MHz\n") == ErrorKind::ValidationError);
    CHECK(kind_of("lambdaF_nm = 852.4\n") == ErrorKind::ValidationError);
    CHECK(kind_of("kappa_mhz = -1\n") == ErrorKind::ValidationError);
    CHECK(kind_of("well = 31\n") == ErrorKind::ValidationError);
    CHECK(kind_of("saturation_ne = 0.1, 0.01\n") == ErrorKind::ValidationError);
    CHECK(kind_of("trap_variant = sideways\n") == ErrorKind::ParseError);
  }

  TEST_CASE("commensurate FORT wavelength is accepted") {
    CHECK_NOTHROW(parse_config_text("lambdaF_nm = 909.2266666666667\n"));
  }

  TEST_CASE("formatted config parses back to itself") {
    for (const auto& name : preset_names()) {
      auto c = parse_config_text("preset = " + name + "\n");
      c.seed = 18446744073709551557ull;
      c.vx_cm_s = 0.1 + 0.2;
      const auto again = parse_config_text(format_config(c));
      CHECK(again.entries() == c.entries());
      CHECK(again.vx_cm_s == c.vx_cm_s);
    }
  }

  TEST_CASE("manifest files are accepted as configs") {
    const auto path = std::filesystem::temp_directory_path() / "cavitytrap_manifest_test.json";
    {
      std::ofstream f(path);
      f << R"({"tool": "cavitytrap", "config": {"preset": "paper-adverse", "n": "12", "seed": 5}})";
    }
    const auto c = parse_config(path);
    CHECK(c.preset == "paper-adverse");
    CHECK(c.n == 12);
    CHECK(c.seed == 5);
    CHECK(c.well == 3);
    std::filesystem::remove(path);
  }

  TEST_CASE("shortest round-trip number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-28.0) == "-28");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }
}
