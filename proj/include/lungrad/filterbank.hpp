#pragma once

#include <array>
#include <string>
#include <vector>

#include "lungrad/kernels.hpp"
#include "lungrad/volume.hpp"

namespace lungrad {

enum class FilterKind { Original, Square, Sqrt, Logarithm, Exponential, Wavelet, LoG };

/// One image-filter variant. Wavelet sub-bands are 3-letter codes over {L,H};
/// letter i applies the low/high-pass along axis i in (x, y, z) order.
struct FilterSpec {
  FilterKind kind = FilterKind::Original;
  std::string subband;    // Wavelet only, e.g. "HHL"
  double sigma_mm = 0.0;  // LoG only

  std::string canonical_name() const;

  static FilterSpec original() { return {FilterKind::Original, {}, 0.0}; }
  static FilterSpec wavelet(std::string code) { return {FilterKind::Wavelet, std::move(code), 0.0}; }
  static FilterSpec log_sigma(double sigma_mm) { return {FilterKind::LoG, {}, sigma_mm}; }
};

/// The 18-variant bank in canonical order: Original, Square, Sqrt,
/// Logarithm, Exponential, 8 wavelet sub-bands (HHH, HHL, HLH, LHH, HLL,
/// LHL, LLH, LLL), LoG sigma in {0.5, 1.5, 2.5, 3.5, 4.5} mm ascending.
/// This order is the feature-naming contract.
std::vector<FilterSpec> enumerate_filter_bank();

/// Applies one filter; output keeps dims/spacing/frame_id.
VoxelVolume apply_filter(const VoxelVolume& volume, const FilterSpec& spec, Exec exec = Exec::Parallel);

/// Coiflet-1 analysis taps (6 each), exposed for test oracles.
std::array<double, 6> coif1_dec_lo();
std::array<double, 6> coif1_dec_hi();

/// Tap anchor used by the undecimated wavelet transform (offsets run over
/// [-anchor, taps-1-anchor]).
inline constexpr int kWaveletAnchor = 2;

/// Gaussian taps for one axis of the LoG filter: physical sigma_mm over the
/// axis spacing, radius ceil(4*sigma/spacing), normalized to unit sum.
std::vector<double> gaussian_taps(double sigma_mm, double spacing_mm);

}  // namespace lungrad
