#include "cavitytrap/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavitytrap/averages.hpp"
#include "cavitytrap/coefficients.hpp"
#include "cavitytrap/dressed.hpp"
#include "cavitytrap/error.hpp"
#include "cavitytrap/geometry.hpp"
#include "cavitytrap/grid.hpp"
#include "cavitytrap/langevin.hpp"
#include "cavitytrap/statistics.hpp"

namespace cavitytrap {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<const char*, const char*> kSubcommands[] = {
    {"wells", "Anti-node atlas of the cavity"},
    {"coefficients", "Force, friction and diffusion over a (z, rho) sweep"},
    {"dressed", "Dressed-state frequencies, rates and Sisyphus rate on axis"},
    {"saturation", "Well-averaged coefficients versus drive strength"},
    {"simulate", "Langevin trajectory ensemble and trapping-time fit"},
};

/// Minimal CSV builder; numbers use the shortest round-trip form.
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }
  Csv& operator<<(double x) { return cell(format_double(x == 0.0 ? 0.0 : x)); }
  Csv& operator<<(int x) { return cell(std::to_string(x)); }
  Csv& operator<<(std::uint64_t x) { return cell(std::to_string(x)); }
  Csv& operator<<(const std::string& s) { return cell(s); }
  Csv& operator<<(const char* s) { return cell(s); }
  void end_row() {
    text_ += '\n';
    fresh_ = true;
  }
  const std::string& text() const { return text_; }

 private:
  Csv& cell(const std::string& s) {
    if (!fresh_) text_ += ',';
    text_ += s;
    fresh_ = false;
    return *this;
  }
  std::string text_;
  bool fresh_ = true;
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

ordered_json params_json(const SystemParams& p) {
  return {{"g0_rad_s", p.g0},
          {"S0_rad_s", p.S0},
          {"kappa_rad_s", p.kappa},
          {"gamma_rad_s", p.gamma},
          {"delta_c_rad_s", p.delta_c},
          {"delta_a_rad_s", p.delta_a},
          {"drive_photons", p.drive_photons},
          {"drive_amplitude_rad_s", drive_amplitude(p)},
          {"lambda0_m", p.lambda0},
          {"lambdaF_m", p.lambdaF()},
          {"n0", p.n0},
          {"nF", p.nF},
          {"w0_m", p.w0},
          {"mass_kg", p.mass},
          {"photon_cutoff", p.photon_cutoff},
          {"trap_variant", to_string(p.trap_variant)},
          {"polarization_factors",
           {p.polarization_factors.x(), p.polarization_factors.y(), p.polarization_factors.z()}}};
}

ordered_json grid_json(const CoefficientGrid& g) {
  return {{"well", g.well_index()}, {"z_lo_m", g.z_lo()},       {"z_hi_m", g.z_hi()},
          {"rho_max_m", g.rho_max()}, {"nz", g.nz()},           {"nrho", g.nrho()},
          {"built_at", g.build_timestamp}, {"build_seconds", g.build_seconds}};
}

struct Span {
  double lo, hi;
};

Span z_span(const RunConfig& c, const SystemParams& p, const WellDescriptor& w) {
  const double lf = p.lambdaF();
  return {c.zmin ? *c.zmin * lf : w.z_lo, c.zmax ? *c.zmax * lf : w.z_hi};
}

double node(Span s, int i, int n) { return n > 1 ? s.lo + (s.hi - s.lo) * i / (n - 1) : s.lo; }

struct Context {
  const RunConfig& config;
  SystemParams params;
  fs::path out;
  ordered_json& manifest;
  std::ostream& log;

  void emit(const std::string& name, const std::string& content) {
    write_atomic(out / name, content);
    manifest["outputs"].push_back(name);
    log << "wrote " << (out / name).string() << '\n';
  }
};

void run_wells(Context& ctx) {
  Csv csv({"n", "z_um", "z_lo_um", "z_hi_um", "g_over_g0", "sf_over_s0"});
  const auto& p = ctx.params;
  for (const auto& w : well_atlas(p)) {
    csv << w.index << w.z_center * 1e6 << w.z_lo * 1e6 << w.z_hi * 1e6
        << (p.g0 > 0 ? w.g_at_antinode / p.g0 : 0.0) << (p.S0 > 0 ? w.S_at_antinode / p.S0 : 0.0);
    csv.end_row();
  }
  ctx.emit("wells.csv", csv.text());
}

void run_coefficients(Context& ctx) {
  const auto& p = ctx.params;
  const auto w = well(p, ctx.config.well);
  const Span zs = z_span(ctx.config, p, w);
  const int nz = ctx.config.nz.value_or(41);
  const int nrho = ctx.config.nrho.value_or(1);
  const Span rs{0.0, ctx.config.rho_max_w0 * p.w0};
  const CoefficientModel model(p);
  Csv csv({"z_lambdaF", "z_um", "rho_um", "photons", "excitation", "F0_z_N", "F0_rho_N",
           "beta_zz_per_s", "D_zz_m2_s3", "D_xx_m2_s3", "D_zx_m2_s3", "D_se_x_m2_s3",
           "D_se_z_m2_s3", "d_ratio", "diffusion_asymmetry"});
  for (int i = 0; i < nz; ++i) {
    for (int j = 0; j < nrho; ++j) {
      const double z = node(zs, i, nz);
      const double rho = nrho > 1 ? node(rs, j, nrho) : 0.0;
      const auto s = model.sample({rho, 0.0, z});
      csv << z / p.lambdaF() << z * 1e6 << rho * 1e6 << s.steady.mean_photons
          << s.steady.mean_excitation << s.steady.mean_force.z() << s.steady.mean_force.x()
          << s.beta(2, 2) << s.D(2, 2) << s.D(0, 0) << s.D(2, 0) << s.D_se(0) << s.D_se(2)
          << s.d_ratio << s.diffusion_asymmetry;
      csv.end_row();
    }
  }
  ctx.manifest["sweep"] = {{"z_lo_m", zs.lo}, {"z_hi_m", zs.hi}, {"nz", nz}, {"nrho", nrho},
                           {"rho_max_m", rs.hi}};
  ctx.emit("coefficients.csv", csv.text());
}

void run_dressed(Context& ctx) {
  const auto& p = ctx.params;
  const auto w = well(p, ctx.config.well);
  const Span zs = z_span(ctx.config, p, w);
  const int nz = ctx.config.nz.value_or(201);
  Csv csv({"z_lambdaF", "z_um", "Delta_plus_MHz", "Delta_minus_MHz", "gamma_minus_MHz",
           "Omega_minus_MHz", "n_minus", "R_per_s"});
  for (int i = 0; i < nz; ++i) {
    const double z = node(zs, i, nz);
    const auto d = dressed_point({0.0, 0.0, z}, p);
    csv << z / p.lambdaF() << z * 1e6 << angular_to_mhz(d.Delta_plus)
        << angular_to_mhz(d.Delta_minus) << angular_to_mhz(d.gamma_minus)
        << angular_to_mhz(d.Omega_minus) << d.n_minus << d.R;
    csv.end_row();
  }
  ctx.manifest["sweep"] = {{"z_lo_m", zs.lo}, {"z_hi_m", zs.hi}, {"nz", nz}};
  ctx.emit("dressed.csv", csv.text());
}

void run_saturation(Context& ctx) {
  const auto& p = ctx.params;
  const auto w = well(p, ctx.config.well);
  const auto rows = saturation_scan(ctx.config.saturation_ne, w, p, ctx.config.window,
                                    ctx.config.nz.value_or(41));
  Csv csv({"drive_photons", "beta_bar_per_s", "D_bar_m2_s3", "v_rms_cm_s"});
  for (const auto& r : rows) {
    csv << r.drive_photons << r.beta_bar << r.D_bar << (r.v_rms ? format_double(*r.v_rms * 100) : "");
    csv.end_row();
  }
  ctx.emit("saturation.csv", csv.text());
}

void run_simulate(Context& ctx) {
  const auto& c = ctx.config;
  const auto& p = ctx.params;
  const auto w = well(p, c.well);
  GridOptions gopt;
  gopt.rho_max_w0 = c.rho_max_w0;
  ctx.log << "building " << c.nz.value_or(201) << "x" << c.nrho.value_or(61) << " grid for well "
          << w.index << '\n';
  const auto grid = build_grid(p, w, c.nz.value_or(201), c.nrho.value_or(61), gopt);
  ctx.manifest["grid"] = grid_json(grid);

  const TrajectoryConfig tmpl = c.trajectory(p);
  EnsembleOptions eopt;
  eopt.keep_series = c.series;
  ctx.log << "running " << c.n << " trajectories\n";
  const auto stats = run_ensemble(c.n, tmpl, grid, c.seed, eopt);

  Csv traj({"index", "seed", "trapping_time_s", "v_rms_z_m_s", "v_rms_z_after_1ms_m_s",
            "exit_reason"});
  ordered_json seeds = ordered_json::array();
  for (std::size_t k = 0; k < stats.trajectories.size(); ++k) {
    const auto& t = stats.trajectories[k];
    traj << static_cast<int>(k) << t.seed << t.trapping_time << t.v_rms_z
         << (t.v_rms_z_after_1ms ? format_double(*t.v_rms_z_after_1ms) : "")
         << to_string(t.exit_reason);
    traj.end_row();
    seeds.push_back(t.seed);
  }
  ctx.emit("trajectories.csv", traj.text());

  std::vector<double> times;
  for (const auto& t : stats.trajectories) times.push_back(t.trapping_time);
  Csv surv({"T_s", "P"});
  for (const auto& s : survival_histogram(times, tmpl.t_max, 200)) {
    surv << s.T << s.P;
    surv.end_row();
  }
  ctx.emit("survival.csv", surv.text());

  for (int k : c.series) {
    if (k < 0 || k >= c.n) continue;
    Csv ser({"t_s", "z_m", "rho_m", "v_z_m_s", "photons"});
    for (const auto& s : stats.trajectories[k].series) {
      ser << s.t << s.z << s.rho << s.v_z << s.photons;
      ser.end_row();
    }
    ctx.emit("series_" + std::to_string(k) + ".csv", ser.text());
  }

  ctx.manifest["seeds"] = {{"seed_base", c.seed}, {"trajectories", seeds}};
  ordered_json result = {{"fraction_untrapped_1ms", stats.fraction_untrapped}};
  if (stats.fit) {
    result["tau_s"] = stats.fit->tau;
    result["tau_stderr_s"] = stats.fit->stderr_tau;
    result["t_tail_s"] = stats.fit->t_tail;
    result["n_tail"] = stats.fit->n_tail;
    ctx.log << "tau = " << stats.fit->tau * 1e3 << " +- " << stats.fit->stderr_tau * 1e3 << " ms\n";
  } else {
    result["tau_s"] = nullptr;
  }
  ctx.manifest["result"] = result;
}

}  // namespace

bool is_subcommand(const std::string& name) {
  for (const auto& [s, help] : kSubcommands)
    if (name == s) return true;
  return false;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
  if (!is_subcommand(subcommand))
    throw Error(ErrorKind::ValidationError, "unknown subcommand '" + subcommand + "'");
  const SystemParams params = config.params();
  const fs::path out = config.out;
  fs::create_directories(out);

  ordered_json manifest;
  manifest["tool"] = "cavitytrap";
  manifest["version"] = CAVITYTRAP_VERSION;
  manifest["command"] = subcommand;
  manifest["preset"] = config.preset;
  manifest["started_at"] = utc_timestamp();
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config.entries()) cfg[k] = v;
  manifest["config"] = cfg;
  manifest["params"] = params_json(params);
  manifest["workers"] = default_worker_count();
  manifest["outputs"] = ordered_json::array();

  Context ctx{config, params, out, manifest, log};
  const auto t0 = std::chrono::steady_clock::now();
  std::exception_ptr failure;
  try {
    if (subcommand == "wells") {
      run_wells(ctx);
    } else if (subcommand == "coefficients") {
      run_coefficients(ctx);
    } else if (subcommand == "dressed") {
      run_dressed(ctx);
    } else if (subcommand == "saturation") {
      run_saturation(ctx);
    } else {
      run_simulate(ctx);
    }
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    manifest["error"] = e.what();
    failure = std::current_exception();
  }
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  if (failure) std::rethrow_exception(failure);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Cavity-QED trapping and cooling of a single atom in a FORT"};
  app.set_version_flag("--version", CAVITYTRAP_VERSION);
  app.require_subcommand(0, 1);

  std::string preset, config_file, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> n, nz, nrho, well_index;
  std::optional<double> dt, tmax, zmin, zmax;
  std::vector<std::string> overrides;
  bool print_config = false;

  auto* preset_opt = app.add_option("--preset", preset, "Named parameter set")
                         ->check(CLI::IsMember(preset_names()));
  app.add_option("--config", config_file, "Key/value config file or a run manifest")
      ->check(CLI::ExistingFile)
      ->excludes(preset_opt);
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed, "Ensemble seed base");
  app.add_option("--n", n, "Number of trajectories");
  app.add_option("--nz", nz, "Axial nodes");
  app.add_option("--nrho", nrho, "Radial nodes");
  app.add_option("--dt", dt, "Time step in ns");
  app.add_option("--tmax", tmax, "Trajectory time limit in ms");
  app.add_option("--zmin", zmin, "Sweep start in units of lambdaF");
  app.add_option("--zmax", zmax, "Sweep end in units of lambdaF");
  app.add_option("--well", well_index, "Well index (1-based)");
  app.add_option("--set", overrides, "Override a config key: KEY=VALUE")->take_all();
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  app.fallthrough();
  for (const auto& [s, help] : kSubcommands) app.add_subcommand(s, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config;
    if (!config_file.empty()) config = parse_config(config_file);
    if (!preset.empty()) set_key(config, "preset", preset);
    auto put = [&](const char* key, const std::string& value) { set_key(config, key, value); };
    if (!out.empty()) put("out", out);
    if (seed) put("seed", std::to_string(*seed));
    if (n) put("n", std::to_string(*n));
    if (nz) put("nz", std::to_string(*nz));
    if (nrho) put("nrho", std::to_string(*nrho));
    if (dt) put("dt_ns", format_double(*dt));
    if (tmax) put("tmax_ms", format_double(*tmax));
    if (zmin) put("zmin", format_double(*zmin));
    if (zmax) put("zmax", format_double(*zmax));
    if (well_index) put("well", std::to_string(*well_index));
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorKind::ParseError, "--set expects KEY=VALUE, got '" + kv + "'");
      put(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
    }
    config.params();
    if (print_config) {
      std::cout << format_config(config);
      return 0;
    }
    if (app.get_subcommands().empty()) throw Error(ErrorKind::ParseError, "a subcommand is required");
    dispatch(app.get_subcommands().front()->get_name(), config, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ValidationError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cavitytrap
