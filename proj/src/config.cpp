#include "cavitytrap/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cavitytrap/error.hpp"
#include "cavitytrap/geometry.hpp"

namespace cavitytrap {

namespace {

[[noreturn]] void parse_fail(std::string_view key, std::string_view value, std::string_view what) {
  throw Error(ErrorKind::ParseError,
              std::string(key) + " = '" + std::string(value) + "': " + std::string(what));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    parse_fail(key, v, "expected a number");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) parse_fail(key, v, "expected an integer");
  return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> items;
  v = trim(v);
  if (v.empty()) return items;
  std::size_t start = 0;
  for (;;) {
    const auto comma = v.find(',', start);
    items.push_back(trim(v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct KeySpec {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <typename T>
KeySpec number(T RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              c.*field = to_double("", v);
            } else {
              c.*field = to_int<T>("", v);
            }
          },
          [field](const RunConfig& c) -> std::optional<std::string> {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*field);
            } else {
              return std::to_string(c.*field);
            }
          }};
}

template <typename T>
KeySpec optional_number(std::optional<T> RunConfig::*field) {
  return {[field](RunConfig& c, std::string_view v) {
            if (trim(v).empty()) {
              c.*field = std::nullopt;
            } else if constexpr (std::is_floating_point_v<T>) {
              c.*field = to_double("", v);
            } else {
              c.*field = to_int<T>("", v);
            }
          },
          [field](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*field)) return std::nullopt;
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(*(c.*field));
            } else {
              return std::to_string(*(c.*field));
            }
          }};
}

const std::vector<std::pair<std::string, KeySpec>>& key_table() {
  static const std::vector<std::pair<std::string, KeySpec>> table = {
      {"g0_mhz", number(&RunConfig::g0_mhz)},
      {"s0_mhz", number(&RunConfig::s0_mhz)},
      {"kappa_mhz", number(&RunConfig::kappa_mhz)},
      {"gamma_mhz", number(&RunConfig::gamma_mhz)},
      {"probe_detuning_mhz", optional_number(&RunConfig::probe_detuning_mhz)},
      {"delta_c_mhz", optional_number(&RunConfig::delta_c_mhz)},
      {"drive_photons", number(&RunConfig::drive_photons)},
      {"lambda0_nm", number(&RunConfig::lambda0_nm)},
      {"lambdaF_nm", optional_number(&RunConfig::lambdaF_nm)},
      {"n0", number(&RunConfig::n0)},
      {"nf", number(&RunConfig::nf)},
      {"w0_um", number(&RunConfig::w0_um)},
      {"mass_kg", number(&RunConfig::mass_kg)},
      {"n_max", number(&RunConfig::n_max)},
      {"trap_variant",
       {[](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "opposite") {
            c.trap_variant = TrapVariant::OppositeShift;
          } else if (v == "equal") {
            c.trap_variant = TrapVariant::EqualShift;
          } else {
            parse_fail("trap_variant", v, "expected 'opposite' or 'equal'");
          }
        },
        [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.trap_variant); }}},
      {"polarization",
       {[](RunConfig& c, std::string_view v) {
          std::vector<double> xs;
          for (auto item : split_list(v)) xs.push_back(to_double("polarization", item));
          if (xs.size() != 3) parse_fail("polarization", v, "expected three numbers");
          c.polarization = xs;
        },
        [](const RunConfig& c) -> std::optional<std::string> { return join(c.polarization); }}},
      {"well", number(&RunConfig::well)},
      {"zmin", optional_number(&RunConfig::zmin)},
      {"zmax", optional_number(&RunConfig::zmax)},
      {"nz", optional_number(&RunConfig::nz)},
      {"nrho", optional_number(&RunConfig::nrho)},
      {"rho_max_w0", number(&RunConfig::rho_max_w0)},
      {"window",
       {[](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "full") {
            c.window = AveragingWindow::FullWell;
          } else if (v == "tenth") {
            c.window = AveragingWindow::TenthAroundEquilibrium;
          } else {
            parse_fail("window", v, "expected 'full' or 'tenth'");
          }
        },
        [](const RunConfig& c) -> std::optional<std::string> {
          return c.window == AveragingWindow::FullWell ? "full" : "tenth";
        }}},
      {"saturation_ne",
       {[](RunConfig& c, std::string_view v) {
          std::vector<double> xs;
          for (auto item : split_list(v)) xs.push_back(to_double("saturation_ne", item));
          c.saturation_ne = xs;
        },
        [](const RunConfig& c) -> std::optional<std::string> { return join(c.saturation_ne); }}},
      {"n", number(&RunConfig::n)},
      {"seed", number(&RunConfig::seed)},
      {"dt_ns", number(&RunConfig::dt_ns)},
      {"tmax_ms", number(&RunConfig::tmax_ms)},
      {"z0_offset_lambdaF", number(&RunConfig::z0_offset_lambdaF)},
      {"x0_w0", number(&RunConfig::x0_w0)},
      {"y0_w0", number(&RunConfig::y0_w0)},
      {"vx_cm_s", number(&RunConfig::vx_cm_s)},
      {"vy_cm_s", number(&RunConfig::vy_cm_s)},
      {"vz_cm_s", number(&RunConfig::vz_cm_s)},
      {"series",
       {[](RunConfig& c, std::string_view v) {
          std::vector<int> xs;
          for (auto item : split_list(v)) xs.push_back(to_int<int>("series", item));
          c.series = xs;
        },
        [](const RunConfig& c) -> std::optional<std::string> { return join(c.series); }}},
      {"stride", number(&RunConfig::stride)},
      {"out",
       {[](RunConfig& c, std::string_view v) { c.out = std::string(trim(v)); },
        [](const RunConfig& c) -> std::optional<std::string> { return c.out; }}},
  };
  return table;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& [name, spec] : key_table())
    if (name == key) return &spec;
  return nullptr;
}

using PresetFn = std::function<void(RunConfig&)>;

const std::map<std::string, PresetFn>& presets() {
  static const std::map<std::string, PresetFn> table = [] {
    std::map<std::string, PresetFn> t;
    auto paper50 = [](RunConfig& c) {
      c.s0_mhz = 50;
      c.probe_detuning_mhz = -10;
      c.drive_photons = 0.01;
      c.well = 5;
      c.window = AveragingWindow::TenthAroundEquilibrium;
      c.tmax_ms = 1000;
    };
    t["paper-10MHz"] = [](RunConfig& c) {
      c.s0_mhz = 10;
      c.probe_detuning_mhz = -28;
      c.drive_photons = 0.001;
      c.well = 5;
      c.window = AveragingWindow::FullWell;
      c.tmax_ms = 200;
    };
    t["paper-50MHz"] = paper50;
    t["paper-50MHz-equalshift"] = [](RunConfig& c) {
      c.s0_mhz = 50;
      c.probe_detuning_mhz = -35;
      c.drive_photons = 0.01;
      c.trap_variant = TrapVariant::EqualShift;
      c.well = 1;
      c.window = AveragingWindow::FullWell;
      c.tmax_ms = 200;
    };
    t["paper-adverse"] = [](RunConfig& c) {
      c.s0_mhz = 50;
      c.probe_detuning_mhz = -5;
      c.drive_photons = 0.01;
      c.well = 3;
      c.window = AveragingWindow::FullWell;
      c.tmax_ms = 50;
    };
    t["paper-sisyphus"] = [](RunConfig& c) {
      c.s0_mhz = 50;
      c.probe_detuning_mhz = -10;
      c.drive_photons = 0.001;
      c.well = 5;
      c.zmin = 2.0;
      c.zmax = 2.5;
    };
    for (const char* y : {"0.2", "0.5", "1.0"}) {
      const double y0 = std::stod(y);
      t[std::string("paper-50MHz-y0-") + y] = [paper50, y0](RunConfig& c) {
        paper50(c);
        c.y0_w0 = y0;
      };
    }
    return t;
  }();
  return table;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, p);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : presets()) names.push_back(name);
  return names;
}

void set_key(RunConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "preset") {
    const auto it = presets().find(std::string(trim(value)));
    if (it == presets().end())
      throw Error(ErrorKind::ValidationError, "unknown preset '" + std::string(trim(value)) + "'");
    RunConfig fresh;
    fresh.out = config.out;
    it->second(fresh);
    fresh.preset = it->first;
    config = fresh;
    return;
  }
  const KeySpec* spec = find_key(key);
  if (!spec) throw Error(ErrorKind::ValidationError, "unknown key '" + std::string(key) + "'");
  try {
    spec->set(config, value);
  } catch (const Error& e) {
    parse_fail(key, value, e.kind() == ErrorKind::ParseError ? "malformed value" : e.detail());
  }
}

RunConfig parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    kv.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  RunConfig config;
  for (const auto& [k, v] : kv)
    if (k == "preset") set_key(config, k, v);
  for (const auto& [k, v] : kv)
    if (k != "preset") set_key(config, k, v);
  config.params();
  return config;
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return parse_config_text(text);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, file.string() + ": " + e.what());
  }
  if (!doc.contains("config") || !doc["config"].is_object())
    throw Error(ErrorKind::ParseError, file.string() + ": manifest has no config object");
  std::string kv;
  for (const auto& [k, v] : doc["config"].items())
    kv += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return parse_config_text(kv);
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (!preset.empty()) out.emplace_back("preset", preset);
  for (const auto& [name, spec] : key_table())
    if (auto v = spec.get(*this)) out.emplace_back(name, *v);
  return out;
}

std::string format_config(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : config.entries()) out += k + " = " + v + "\n";
  return out;
}

SystemParams RunConfig::params() const {
  SystemParams p;
  p.g0 = mhz_to_angular(g0_mhz);
  p.S0 = mhz_to_angular(s0_mhz);
  p.kappa = mhz_to_angular(kappa_mhz);
  p.gamma = mhz_to_angular(gamma_mhz);
  if (probe_detuning_mhz) {
    p.delta_a = -mhz_to_angular(*probe_detuning_mhz);
  } else if (delta_c_mhz) {
    p.delta_a = mhz_to_angular(*delta_c_mhz);
  }
  p.delta_c = delta_c_mhz ? mhz_to_angular(*delta_c_mhz) : p.delta_a;
  p.drive_photons = drive_photons;
  p.lambda0 = lambda0_nm * 1e-9;
  p.n0 = n0;
  p.nF = nf;
  p.w0 = w0_um * 1e-6;
  p.mass = mass_kg;
  p.photon_cutoff = n_max;
  p.trap_variant = trap_variant;
  p.polarization_factors = {polarization[0], polarization[1], polarization[2]};
  p.validate();

  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  if (lambdaF_nm && std::abs(*lambdaF_nm * 1e-9 - p.lambdaF()) > 1e-6 * p.lambdaF())
    fail("lambdaF_nm is not commensurate with n0 lambda0 / nf = " +
         format_double(p.lambdaF() * 1e9) + " nm");
  if (well < 1 || well > nf) fail("well must lie in 1.." + std::to_string(nf));
  if (zmin && zmax && !(*zmax > *zmin)) fail("zmax must exceed zmin");
  if (nz && *nz < 2) fail("nz must be >= 2");
  if (nrho && *nrho < 1) fail("nrho must be >= 1");
  if (rho_max_w0 <= 0) fail("rho_max_w0 must be positive");
  if (n < 1) fail("n must be >= 1");
  if (dt_ns <= 0 || tmax_ms <= 0) fail("dt_ns and tmax_ms must be positive");
  if (stride < 1) fail("stride must be >= 1");
  for (std::size_t i = 1; i < saturation_ne.size(); ++i)
    if (!(saturation_ne[i] > saturation_ne[i - 1])) fail("saturation_ne must be ascending");
  return p;
}

TrajectoryConfig RunConfig::trajectory(const SystemParams& p) const {
  const WellDescriptor w = cavitytrap::well(p, well);
  TrajectoryConfig c = default_trajectory_config(p, w);
  c.position = {x0_w0 * p.w0, y0_w0 * p.w0, w.z_center + z0_offset_lambdaF * p.lambdaF()};
  c.velocity = {vx_cm_s * 1e-2, vy_cm_s * 1e-2, vz_cm_s * 1e-2};
  c.dt = dt_ns * 1e-9;
  c.t_max = tmax_ms * 1e-3;
  c.rho_max = rho_max_w0 * p.w0;
  c.sample_stride = stride;
  c.seed = seed;
  return c;
}

}  // namespace cavitytrap
