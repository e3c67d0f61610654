#include "cavitytrap/geometry.hpp"

namespace cavitytrap {

WellDescriptor well(const SystemParams& params, int index) {
  const double lf = params.lambdaF();
  WellDescriptor w;
  w.index = index;
  w.z_center = (0.5 * index - 0.25) * lf;
  w.z_lo = w.z_center - 0.25 * lf;
  w.z_hi = w.z_center + 0.25 * lf;
  const Position<double> p{0.0, 0.0, w.z_center};
  w.g_at_antinode = coupling(p, params).value;
  w.S_at_antinode = fort_shift(p, params).value;
  return w;
}

std::vector<WellDescriptor> well_atlas(const SystemParams& params) {
  std::vector<WellDescriptor> atlas;
  atlas.reserve(params.nF);
  for (int n = 1; n <= params.nF; ++n) atlas.push_back(well(params, n));
  return atlas;
}

}  // namespace cavitytrap
