#pragma once

// First-order macro area from lambda-rule cell layouts.

#include <cstdint>
#include <string>

namespace meram::estimator {

struct LayoutModel {
  double lambda = 22.5;               // nm, half the minimum feature size
  double cell_area_lambda2 = 640.0;   // 40 lambda x 16 lambda
  double peripheral_overhead = 0.0;   // fraction of the cell array added for periphery

  // Overhead may be negative after calibration but must keep the area positive.
  void validate() const;
};

LayoutModel meram_layout();
LayoutModel sram_layout();  // 6T baseline, 2000 lambda^2

double cell_area_nm2(const LayoutModel& model);
double macro_area_mm2(std::uint64_t capacity_bits, const LayoutModel& model);

struct Calibration {
  double overhead = 0.0;
  bool inconsistent = false;  // negative overhead: cells alone exceed the target
  std::string warning;
};

// Overhead that makes macro_area_mm2 equal target_area_mm2.
Calibration calibrate_overhead(std::uint64_t capacity_bits, double target_area_mm2,
                               const LayoutModel& model);

}  // namespace meram::estimator
