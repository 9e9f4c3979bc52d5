#pragma once

namespace fsmf::parallel {

/// Worker count used by the OpenMP kernels and the per-class/per-cell
/// parallel loops. Defaults to FSMF_JOBS if set, else the hardware count.
int max_threads();
void set_max_threads(int n);

/// Kernels fall back to the serial path below this many output cells.
inline constexpr long kSerialCutoff = 4096;

}  // namespace fsmf::parallel
