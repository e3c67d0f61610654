#include "cavitytrap/grid.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "cavitytrap/error.hpp"

namespace cavitytrap {

CoefficientGrid::CoefficientGrid(SystemParams params, int well_index, double z_lo, double z_hi,
                                 double rho_max, int nz, int nrho)
    : params_(std::move(params)),
      well_index_(well_index),
      z_lo_(z_lo),
      z_hi_(z_hi),
      rho_max_(rho_max),
      nz_(nz),
      nrho_(nrho),
      dz_((z_hi - z_lo) / (nz - 1)),
      drho_(rho_max / (nrho - 1)),
      nodes_(static_cast<std::size_t>(nz) * nrho) {}

LocalCoefficients reduce_sample(const CoefficientSample& s) {
  LocalCoefficients c;
  c.F0_z = s.steady.mean_force.z();
  c.F0_rho = s.steady.mean_force.x();  // samples are taken at (rho, 0, z)
  c.beta_zz = s.beta(2, 2);
  c.D_zz = s.D(2, 2);
  c.D_se_x = s.D_se.x();
  c.D_se_z = s.D_se.z();
  c.photons = s.steady.mean_photons;
  c.excitation = s.steady.mean_excitation;
  return c;
}

int default_worker_count() {
  if (const char* env = std::getenv("CAVITYTRAP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

CoefficientGrid build_grid(const SystemParams& params, const WellDescriptor& well, int nz, int nrho,
                           GridOptions options) {
  if (nz < 2 || nrho < 2) throw Error(ErrorKind::ValidationError, "grid needs nz, nrho >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  const CoefficientModel model(params);
  CoefficientGrid grid(params, well.index, well.z_lo, well.z_hi, options.rho_max_w0 * params.w0, nz,
                       nrho);

  const int total = nz * nrho;
  const int workers = std::max(1, std::min(options.workers > 0 ? options.workers
                                                                : default_worker_count(),
                                           total));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (int k = next++; k < total; k = next++) {
      const int i = k / nrho, j = k % nrho;
      const double z = grid.z_node(i), rho = grid.rho_node(j);
      try {
        grid.node(i, j) = reduce_sample(model.sample({rho, 0.0, z}));
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << e.detail() << " at node (z = " << z << " m, rho = " << rho << " m)";
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::make_exception_ptr(Error(e.kind(), msg.str()));
        next = total;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  grid.build_timestamp = utc_timestamp();
  grid.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return grid;
}

}  // namespace cavitytrap
