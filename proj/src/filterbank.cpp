#include "lungrad/filterbank.hpp"

#include <cmath>
#include <cstdio>

namespace lungrad {

std::string FilterSpec::canonical_name() const {
  switch (kind) {
    case FilterKind::Original: return "Original";
    case FilterKind::Square: return "Square";
    case FilterKind::Sqrt: return "Sqrt";
    case FilterKind::Logarithm: return "Logarithm";
    case FilterKind::Exponential: return "Exponential";
    case FilterKind::Wavelet: return subband;
    case FilterKind::LoG: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.1f", sigma_mm);
      return std::string("LoG(σ=") + buf + ")";
    }
  }
  return "Original";
}

std::vector<FilterSpec> enumerate_filter_bank() {
  std::vector<FilterSpec> bank;
  bank.reserve(18);
  bank.push_back(FilterSpec::original());
  bank.push_back({FilterKind::Square, {}, 0.0});
  bank.push_back({FilterKind::Sqrt, {}, 0.0});
  bank.push_back({FilterKind::Logarithm, {}, 0.0});
  bank.push_back({FilterKind::Exponential, {}, 0.0});
  for (const char* code : {"HHH", "HHL", "HLH", "LHH", "HLL", "LHL", "LLH", "LLL"}) {
    bank.push_back(FilterSpec::wavelet(code));
  }
  for (double sigma : {0.5, 1.5, 2.5, 3.5, 4.5}) {
    bank.push_back(FilterSpec::log_sigma(sigma));
  }
  return bank;
}

std::array<double, 6> coif1_dec_lo() {
  // sqrt(2)/32 * {sqrt(7)-3, 1-sqrt(7), 14-2*sqrt(7), 14+2*sqrt(7), 5+sqrt(7), 1-sqrt(7)}
  const double s7 = std::sqrt(7.0);
  const double c = std::sqrt(2.0) / 32.0;
  return {c * (s7 - 3.0),        c * (1.0 - s7), c * (14.0 - 2.0 * s7),
          c * (14.0 + 2.0 * s7), c * (5.0 + s7), c * (1.0 - s7)};
}

std::array<double, 6> coif1_dec_hi() {
  auto lo = coif1_dec_lo();
  std::array<double, 6> hi;
  for (int k = 0; k < 6; ++k) {
    hi[static_cast<std::size_t>(k)] = (k % 2 == 0 ? -1.0 : 1.0) * lo[static_cast<std::size_t>(5 - k)];
  }
  return hi;
}

std::vector<double> gaussian_taps(double sigma_mm, double spacing_mm) {
  const double sigma_vox = sigma_mm / spacing_mm;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma_vox));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int r = -radius; r <= radius; ++r) {
    double t = std::exp(-0.5 * (r / sigma_vox) * (r / sigma_vox));
    taps[static_cast<std::size_t>(r + radius)] = t;
    sum += t;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

VoxelVolume with_values(const VoxelVolume& like, std::vector<double> values) {
  return VoxelVolume(like.dims(), like.spacing(), std::move(values), like.frame_id());
}

template <typename F>
VoxelVolume pointwise(const VoxelVolume& volume, F f, Exec exec) {
  std::vector<double> out(volume.values().size());
  transform_pointwise(std::span<const double>(volume.values()), std::span<double>(out), f, exec);
  return with_values(volume, std::move(out));
}

VoxelVolume apply_log_of_gaussian(const VoxelVolume& volume, double sigma_mm, Exec exec) {
  if (!(sigma_mm > 0.0)) throw Error(ErrorCode::InvalidSigma, "LoG sigma must be > 0");
  const Dims& d = volume.dims();
  const Spacing& sp = volume.spacing();
  std::vector<double> a(volume.values());
  std::vector<double> b(a.size());
  const double spacings[3] = {sp.sx, sp.sy, sp.sz};
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> taps = gaussian_taps(sigma_mm, spacings[axis]);
    int anchor = static_cast<int>(taps.size() / 2);
    convolve_axis(d, a, b, axis, taps, anchor, exec);
    std::swap(a, b);
  }
  laplacian6(d, sp, a, b, exec);
  return with_values(volume, std::move(b));
}

VoxelVolume apply_wavelet(const VoxelVolume& volume, const std::string& subband, Exec exec) {
  if (subband.size() != 3 || subband.find_first_not_of("LH") != std::string::npos) {
    throw Error(ErrorCode::InvalidSpec, "wavelet sub-band must be 3 letters over {L,H}, got '" + subband + "'");
  }
  auto lo = coif1_dec_lo();
  auto hi = coif1_dec_hi();
  std::vector<double> a(volume.values());
  std::vector<double> b(a.size());
  for (int axis = 0; axis < 3; ++axis) {
    const auto& taps = subband[static_cast<std::size_t>(axis)] == 'L' ? lo : hi;
    convolve_axis(volume.dims(), a, b, axis, taps, kWaveletAnchor, exec);
    std::swap(a, b);
  }
  return with_values(volume, std::move(a));
}

}  // namespace

VoxelVolume apply_filter(const VoxelVolume& volume, const FilterSpec& spec, Exec exec) {
  switch (spec.kind) {
    case FilterKind::Original:
      return volume;
    case FilterKind::Square: {
      double m = max_abs(volume.values(), exec);
      if (m == 0.0) return volume;
      return pointwise(volume, [m](double x) { return x * x / m; }, exec);
    }
    case FilterKind::Sqrt: {
      double m = max_abs(volume.values(), exec);
      if (m == 0.0) return volume;
      return pointwise(volume, [m](double x) { return x < 0.0 ? -std::sqrt(-m * x) : std::sqrt(m * x); }, exec);
    }
    case FilterKind::Logarithm: {
      double m = max_abs(volume.values(), exec);
      if (m == 0.0) return volume;
      const double scale = m / std::log1p(m);
      return pointwise(
          volume, [scale](double x) { return x < 0.0 ? -scale * std::log1p(-x) : scale * std::log1p(x); }, exec);
    }
    case FilterKind::Exponential: {
      double m = max_abs(volume.values(), exec);
      if (m == 0.0) return volume;
      const double c = std::log(m) / m;
      return pointwise(volume, [c](double x) { return std::exp(c * x); }, exec);
    }
    case FilterKind::Wavelet:
      return apply_wavelet(volume, spec.subband, exec);
    case FilterKind::LoG:
      return apply_log_of_gaussian(volume, spec.sigma_mm, exec);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown filter kind");
}

}  // namespace lungrad
