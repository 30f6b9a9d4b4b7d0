#pragma once

// Randomized batteries over the pointwise kernels.

#include <cstdint>
#include <string>
#include <vector>

#include "moist/thermo.hpp"

namespace moist {

struct PropertyResult {
  std::string name;
  bool pass = false;
  long samples = 0;
  std::string detail;  // worst case found
};

struct SelftestOptions {
  std::uint64_t seed = 12345;
  long samples = 10000;
  /// Swap the assembly for a mutant whose vapor tendency uses -s_ev.
  bool inject_fault = false;
};

std::vector<PropertyResult> run_kernel_selftest(const PhysicalParams& params, const SelftestOptions& opts);

}  // namespace moist
