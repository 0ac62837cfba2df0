#include "lungrad/io.hpp"

#include <zlib.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

namespace lungrad {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// NIfTI-1 datatype codes.
constexpr std::int16_t kDtUInt8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtInt32 = 8;
constexpr std::int16_t kDtFloat32 = 16;
constexpr std::int16_t kDtFloat64 = 64;

#pragma pack(push, 1)
struct NiftiHeader {
  std::int32_t sizeof_hdr;
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(NiftiHeader) == 348, "NIfTI-1 header must be 348 bytes");

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<unsigned char> read_file_maybe_gz(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  probe.close();

  std::vector<unsigned char> bytes;
  if (magic[0] == 0x1f && magic[1] == 0x8b) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw Error(ErrorCode::IoFailure, "cannot open gzip stream " + path);
    std::array<unsigned char, 1 << 16> buf;
    int n;
    while ((n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
      bytes.insert(bytes.end(), buf.begin(), buf.begin() + n);
    }
    bool ok = n == 0;
    gzclose(gz);
    if (!ok) throw Error(ErrorCode::IoFailure, "gzip read failed for " + path);
  } else {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return bytes;
}

void write_file_maybe_gz(const std::string& path, const std::vector<unsigned char>& bytes) {
  if (has_suffix(path, ".gz")) {
    gzFile gz = gzopen(path.c_str(), "wb");
    if (!gz) throw Error(ErrorCode::IoFailure, "cannot create " + path);
    std::size_t off = 0;
    while (off < bytes.size()) {
      unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(bytes.size() - off, 1u << 20));
      if (gzwrite(gz, bytes.data() + off, chunk) != static_cast<int>(chunk)) {
        gzclose(gz);
        throw Error(ErrorCode::IoFailure, "gzip write failed for " + path);
      }
      off += chunk;
    }
    gzclose(gz);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
  }
}

template <typename T>
void byteswap_inplace(T& value) {
  auto* p = reinterpret_cast<unsigned char*>(&value);
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(p[i], p[sizeof(T) - 1 - i]);
}

void byteswap_header(NiftiHeader& h) {
  byteswap_inplace(h.sizeof_hdr);
  for (auto& d : h.dim) byteswap_inplace(d);
  byteswap_inplace(h.datatype);
  byteswap_inplace(h.bitpix);
  for (auto& p : h.pixdim) byteswap_inplace(p);
  byteswap_inplace(h.vox_offset);
  byteswap_inplace(h.scl_slope);
  byteswap_inplace(h.scl_inter);
  byteswap_inplace(h.qform_code);
  byteswap_inplace(h.sform_code);
}

struct DecodedGrid {
  Dims dims;
  Spacing spacing;
  std::vector<double> values;
  std::string frame_id;
  ScalarType stored;
};

template <typename T>
std::vector<double> decode_values(const unsigned char* data, std::size_t n, bool swap) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    T v;
    std::memcpy(&v, data + i * sizeof(T), sizeof(T));
    if (swap) byteswap_inplace(v);
    out[i] = static_cast<double>(v);
  }
  return out;
}

DecodedGrid load_nifti(const std::string& path) {
  std::vector<unsigned char> bytes = read_file_maybe_gz(path);
  if (bytes.size() < sizeof(NiftiHeader)) {
    throw Error(ErrorCode::UnsupportedFormat, path + " is too small for a NIfTI-1 header");
  }
  NiftiHeader h;
  std::memcpy(&h, bytes.data(), sizeof(h));
  bool swap = false;
  if (h.sizeof_hdr != 348) {
    byteswap_header(h);
    swap = true;
    if (h.sizeof_hdr != 348) throw Error(ErrorCode::UnsupportedFormat, path + " is not a NIfTI-1 file");
  }
  if (std::strncmp(h.magic, "n+1", 3) != 0 && std::strncmp(h.magic, "ni1", 3) != 0) {
    throw Error(ErrorCode::UnsupportedFormat, path + " lacks a NIfTI-1 magic string");
  }
  if (h.dim[0] < 3) {
    // 2D data is padded to one slice by the standard; require explicit 3D.
    throw Error(ErrorCode::CorruptHeader, path + ": dim[0] < 3");
  }
  for (int d = 4; d <= h.dim[0] && d < 8; ++d) {
    if (h.dim[d] > 1) throw Error(ErrorCode::UnsupportedFormat, path + ": >3D data is not supported");
  }
  DecodedGrid grid;
  grid.dims = Dims{h.dim[1], h.dim[2], h.dim[3]};
  grid.spacing = Spacing{h.pixdim[1], h.pixdim[2], h.pixdim[3]};
  if (grid.dims.nx < 1 || grid.dims.ny < 1 || grid.dims.nz < 1) {
    throw Error(ErrorCode::CorruptHeader, path + ": nonpositive dims");
  }
  if (!(grid.spacing.sx > 0) || !(grid.spacing.sy > 0) || !(grid.spacing.sz > 0)) {
    throw Error(ErrorCode::CorruptHeader, path + ": nonpositive spacing");
  }
  if (h.qform_code > 0 || h.sform_code > 0) {
    // Only axis-aligned grids are modeled; any rotation/offset is dropped.
    bool trivial = true;
    const float eye[3][4] = {{h.pixdim[1], 0, 0, 0}, {0, h.pixdim[2], 0, 0}, {0, 0, h.pixdim[3], 0}};
    const float* rows[3] = {h.srow_x, h.srow_y, h.srow_z};
    if (h.sform_code > 0) {
      for (int r = 0; r < 3 && trivial; ++r) {
        for (int c = 0; c < 4; ++c) {
          if (std::abs(rows[r][c] - eye[r][c]) > 1e-5f * std::max(1.0f, std::abs(eye[r][c]))) trivial = false;
        }
      }
    }
    if (!trivial) {
      std::cerr << "warning: " << path << ": orientation/affine ignored, only spacing is used\n";
    }
  }

  std::size_t n = grid.dims.voxel_count();
  std::size_t offset = static_cast<std::size_t>(h.vox_offset);
  if (offset < 348) offset = 352;

  std::size_t elem = static_cast<std::size_t>(h.bitpix) / 8;
  if (bytes.size() < offset + n * elem) throw Error(ErrorCode::CorruptHeader, path + ": truncated voxel data");
  const unsigned char* data = bytes.data() + offset;

  switch (h.datatype) {
    case kDtUInt8:
      grid.values = decode_values<std::uint8_t>(data, n, swap);
      grid.stored = ScalarType::UInt8;
      break;
    case kDtInt16:
      grid.values = decode_values<std::int16_t>(data, n, swap);
      grid.stored = ScalarType::Int16;
      break;
    case kDtInt32:
      grid.values = decode_values<std::int32_t>(data, n, swap);
      grid.stored = ScalarType::Int32;
      break;
    case kDtFloat32:
      grid.values = decode_values<float>(data, n, swap);
      grid.stored = ScalarType::Float32;
      break;
    case kDtFloat64:
      grid.values = decode_values<double>(data, n, swap);
      grid.stored = ScalarType::Float64;
      break;
    default:
      throw Error(ErrorCode::UnsupportedFormat, path + ": unsupported NIfTI datatype " + std::to_string(h.datatype));
  }

  double slope = h.scl_slope;
  double inter = h.scl_inter;
  if (slope != 0.0 && (slope != 1.0 || inter != 0.0)) {
    for (double& v : grid.values) v = v * slope + inter;
  }
  grid.frame_id.assign(h.descrip, strnlen(h.descrip, sizeof(h.descrip)));
  return grid;
}

ScalarType parse_dtype(const std::string& s) {
  if (s == "uint8") return ScalarType::UInt8;
  if (s == "int16") return ScalarType::Int16;
  if (s == "int32") return ScalarType::Int32;
  if (s == "float32") return ScalarType::Float32;
  if (s == "float64") return ScalarType::Float64;
  throw Error(ErrorCode::UnsupportedFormat, "unknown dtype '" + s + "'");
}

const char* dtype_name(ScalarType t) {
  switch (t) {
    case ScalarType::UInt8: return "uint8";
    case ScalarType::Int16: return "int16";
    case ScalarType::Int32: return "int32";
    case ScalarType::Float32: return "float32";
    case ScalarType::Float64: return "float64";
  }
  return "float64";
}

std::size_t dtype_size(ScalarType t) {
  switch (t) {
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16: return 2;
    case ScalarType::Int32: return 4;
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 8;
}

std::pair<std::string, std::string> raw_paths(const std::string& path) {
  std::string stem = path;
  if (has_suffix(stem, ".bin") || has_suffix(stem, ".json")) {
    stem = stem.substr(0, stem.rfind('.'));
  }
  return {stem + ".bin", stem + ".json"};
}

DecodedGrid load_raw(const std::string& path) {
  auto [bin_path, json_path] = raw_paths(path);
  std::ifstream jf(json_path);
  if (!jf) throw Error(ErrorCode::IoFailure, "cannot open sidecar " + json_path);
  json sidecar;
  try {
    jf >> sidecar;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptHeader, json_path + ": " + e.what());
  }

  DecodedGrid grid;
  try {
    auto dims = sidecar.at("dims");
    auto spacing = sidecar.at("spacing");
    grid.dims = Dims{dims.at(0).get<int>(), dims.at(1).get<int>(), dims.at(2).get<int>()};
    grid.spacing = Spacing{spacing.at(0).get<double>(), spacing.at(1).get<double>(), spacing.at(2).get<double>()};
    grid.stored = parse_dtype(sidecar.at("dtype").get<std::string>());
    grid.frame_id = sidecar.value("frame_id", std::string{});
    if (sidecar.value("byte_order", std::string{"little"}) != "little") {
      throw Error(ErrorCode::UnsupportedFormat, json_path + ": only little-endian raw data is supported");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptHeader, json_path + ": " + e.what());
  }
  if (grid.dims.nx < 1 || grid.dims.ny < 1 || grid.dims.nz < 1) {
    throw Error(ErrorCode::CorruptHeader, json_path + ": nonpositive dims");
  }
  if (!(grid.spacing.sx > 0) || !(grid.spacing.sy > 0) || !(grid.spacing.sz > 0)) {
    throw Error(ErrorCode::CorruptHeader, json_path + ": nonpositive spacing");
  }

  std::ifstream bf(bin_path, std::ios::binary);
  if (!bf) throw Error(ErrorCode::IoFailure, "cannot open " + bin_path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bf)), std::istreambuf_iterator<char>());
  std::size_t n = grid.dims.voxel_count();
  if (bytes.size() != n * dtype_size(grid.stored)) {
    throw Error(ErrorCode::CorruptHeader, bin_path + ": size does not match dims*dtype");
  }
  switch (grid.stored) {
    case ScalarType::UInt8: grid.values = decode_values<std::uint8_t>(bytes.data(), n, false); break;
    case ScalarType::Int16: grid.values = decode_values<std::int16_t>(bytes.data(), n, false); break;
    case ScalarType::Int32: grid.values = decode_values<std::int32_t>(bytes.data(), n, false); break;
    case ScalarType::Float32: grid.values = decode_values<float>(bytes.data(), n, false); break;
    case ScalarType::Float64: grid.values = decode_values<double>(bytes.data(), n, false); break;
  }
  return grid;
}

DecodedGrid load_any(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::IoFailure, path + " does not exist");
  if (has_suffix(path, ".bin") || has_suffix(path, ".json")) return load_raw(path);
  if (has_suffix(path, ".nii") || has_suffix(path, ".nii.gz")) return load_nifti(path);
  throw Error(ErrorCode::UnsupportedFormat, path + ": expected .nii, .nii.gz, .bin or .json");
}

template <typename T>
void encode_values(const std::vector<double>& in, std::vector<unsigned char>& out) {
  std::size_t start = out.size();
  out.resize(start + in.size() * sizeof(T));
  for (std::size_t i = 0; i < in.size(); ++i) {
    T v = static_cast<T>(in[i]);
    std::memcpy(out.data() + start + i * sizeof(T), &v, sizeof(T));
  }
}

void encode_by_type(const std::vector<double>& in, ScalarType dtype, std::vector<unsigned char>& out) {
  switch (dtype) {
    case ScalarType::UInt8: encode_values<std::uint8_t>(in, out); break;
    case ScalarType::Int16: encode_values<std::int16_t>(in, out); break;
    case ScalarType::Int32: encode_values<std::int32_t>(in, out); break;
    case ScalarType::Float32: encode_values<float>(in, out); break;
    case ScalarType::Float64: encode_values<double>(in, out); break;
  }
}

std::int16_t dtype_code(ScalarType t) {
  switch (t) {
    case ScalarType::UInt8: return kDtUInt8;
    case ScalarType::Int16: return kDtInt16;
    case ScalarType::Int32: return kDtInt32;
    case ScalarType::Float32: return kDtFloat32;
    case ScalarType::Float64: return kDtFloat64;
  }
  return kDtFloat64;
}

void save_nifti_impl(const Dims& dims, const Spacing& spacing, const std::vector<double>& values,
                     const std::string& frame_id, ScalarType dtype, const std::string& path) {
  NiftiHeader h;
  std::memset(&h, 0, sizeof(h));
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = 3;
  h.dim[1] = static_cast<std::int16_t>(dims.nx);
  h.dim[2] = static_cast<std::int16_t>(dims.ny);
  h.dim[3] = static_cast<std::int16_t>(dims.nz);
  for (int d = 4; d < 8; ++d) h.dim[d] = 1;
  h.datatype = dtype_code(dtype);
  h.bitpix = static_cast<std::int16_t>(dtype_size(dtype) * 8);
  h.pixdim[0] = 1.0f;
  h.pixdim[1] = static_cast<float>(spacing.sx);
  h.pixdim[2] = static_cast<float>(spacing.sy);
  h.pixdim[3] = static_cast<float>(spacing.sz);
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 2;  // NIFTI_UNITS_MM
  std::strncpy(h.descrip, frame_id.c_str(), sizeof(h.descrip) - 1);
  std::memcpy(h.magic, "n+1", 4);

  std::vector<unsigned char> bytes(sizeof(h) + 4, 0);
  std::memcpy(bytes.data(), &h, sizeof(h));
  encode_by_type(values, dtype, bytes);
  write_file_maybe_gz(path, bytes);
}

void save_raw_impl(const Dims& dims, const Spacing& spacing, const std::vector<double>& values,
                   const std::string& frame_id, ScalarType dtype, const std::string& path) {
  auto [bin_path, json_path] = raw_paths(path);
  json sidecar;
  sidecar["dims"] = {dims.nx, dims.ny, dims.nz};
  sidecar["spacing"] = {spacing.sx, spacing.sy, spacing.sz};
  sidecar["dtype"] = dtype_name(dtype);
  sidecar["byte_order"] = "little";
  if (!frame_id.empty()) sidecar["frame_id"] = frame_id;
  std::ofstream jf(json_path);
  if (!jf) throw Error(ErrorCode::IoFailure, "cannot create " + json_path);
  jf << sidecar.dump(2) << "\n";

  std::vector<unsigned char> bytes;
  encode_by_type(values, dtype, bytes);
  std::ofstream bf(bin_path, std::ios::binary);
  if (!bf) throw Error(ErrorCode::IoFailure, "cannot create " + bin_path);
  bf.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!bf) throw Error(ErrorCode::IoFailure, "write failed for " + bin_path);
}

}  // namespace

VoxelVolume load_volume(const std::string& path) {
  DecodedGrid grid = load_any(path);
  for (double v : grid.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteData, path + " contains NaN/Inf");
  }
  return VoxelVolume(grid.dims, grid.spacing, std::move(grid.values), std::move(grid.frame_id));
}

LabelMask load_mask(const std::string& path, MaskSemantics semantics) {
  DecodedGrid grid = load_any(path);
  std::vector<std::int32_t> labels(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    double v = grid.values[i];
    if (!std::isfinite(v) || v != std::floor(v)) {
      throw Error(ErrorCode::NonIntegralData, path + ": mask values must be integral");
    }
    labels[i] = static_cast<std::int32_t>(v);
  }
  return LabelMask(grid.dims, grid.spacing, std::move(labels), semantics, std::move(grid.frame_id));
}

void save_volume_nifti(const VoxelVolume& volume, const std::string& path, ScalarType dtype) {
  save_nifti_impl(volume.dims(), volume.spacing(), volume.values(), volume.frame_id(), dtype, path);
}

void save_mask_nifti(const LabelMask& mask, const std::string& path) {
  std::vector<double> values(mask.labels().begin(), mask.labels().end());
  save_nifti_impl(mask.dims(), mask.spacing(), values, mask.frame_id(), ScalarType::UInt8, path);
}

void save_volume_raw(const VoxelVolume& volume, const std::string& path, ScalarType dtype) {
  save_raw_impl(volume.dims(), volume.spacing(), volume.values(), volume.frame_id(), dtype, path);
}

void save_mask_raw(const LabelMask& mask, const std::string& path) {
  std::vector<double> values(mask.labels().begin(), mask.labels().end());
  save_raw_impl(mask.dims(), mask.spacing(), values, mask.frame_id(), ScalarType::Int32, path);
}

}  // namespace lungrad
