#include "meram/array_estimator.hpp"

#include <cmath>
#include <cstdio>

#include "meram/error.hpp"

namespace meram::estimator {
namespace {
constexpr double kNm2PerMm2 = 1e12;
}

void LayoutModel::validate() const {
  if (!(lambda > 0.0)) throw ValidationError("layout: lambda must be positive");
  if (!(cell_area_lambda2 > 0.0)) throw ValidationError("layout: cell area must be positive");
  if (!(peripheral_overhead > -1.0) || !std::isfinite(peripheral_overhead))
    throw ValidationError("layout: peripheral overhead must be greater than -1");
}

LayoutModel meram_layout() { return LayoutModel{22.5, 640.0, 0.0}; }
LayoutModel sram_layout() { return LayoutModel{22.5, 2000.0, 0.0}; }

double cell_area_nm2(const LayoutModel& model) {
  model.validate();
  return model.cell_area_lambda2 * model.lambda * model.lambda;
}

double macro_area_mm2(std::uint64_t capacity_bits, const LayoutModel& model) {
  if (capacity_bits == 0) throw ValidationError("macro_area: capacity must be positive");
  return static_cast<double>(capacity_bits) * cell_area_nm2(model) *
         (1.0 + model.peripheral_overhead) / kNm2PerMm2;
}

Calibration calibrate_overhead(std::uint64_t capacity_bits, double target_area_mm2,
                               const LayoutModel& model) {
  if (!(target_area_mm2 > 0.0)) throw ValidationError("calibrate_overhead: target area must be positive");
  LayoutModel bare = model;
  bare.peripheral_overhead = 0.0;
  const double cells_only = macro_area_mm2(capacity_bits, bare);

  Calibration c;
  c.overhead = target_area_mm2 / cells_only - 1.0;
  if (c.overhead < 0.0) {
    c.inconsistent = true;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "cell array alone is %.4g mm^2, above the %.4g mm^2 target (overhead %.4f)",
                  cells_only, target_area_mm2, c.overhead);
    c.warning = buf;
  }
  return c;
}

}  // namespace meram::estimator
