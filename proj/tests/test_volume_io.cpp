#include <doctest.h>

#include <cstring>
#include <fstream>

#include "helpers.hpp"
#include "lungrad/io.hpp"
#include "lungrad/volume.hpp"

using namespace lungrad;
using namespace lungrad::test;

TEST_CASE("raw round-trip: 2x2x2 file with values 0..7 in x-fastest order") {
  std::string dir = scratch_dir("raw");
  std::vector<double> values = {0, 1, 2, 3, 4, 5, 6, 7};
  VoxelVolume v(Dims{2, 2, 2}, Spacing{1, 1, 1}, values, "frame0");
  save_volume_raw(v, dir + "/tiny.bin");
  VoxelVolume r = load_volume(dir + "/tiny.bin");
  CHECK(r.dims() == Dims{2, 2, 2});
  CHECK(r.values() == values);
  CHECK(r.at(1, 0, 0) == 1.0);
  CHECK(r.at(0, 1, 0) == 2.0);
  CHECK(r.at(0, 0, 1) == 4.0);
  CHECK(r.frame_id() == "frame0");
}

TEST_CASE("raw round-trip is bit-exact on random volumes") {
  std::string dir = scratch_dir("raw_rand");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    VoxelVolume v = random_volume(Dims{5, 4, 3}, Spacing{0.7, 0.7, 1.5}, seed);
    save_volume_raw(v, dir + "/v.bin");
    VoxelVolume r = load_volume(dir + "/v.json");
    CHECK(r.values() == v.values());
    CHECK(r.spacing() == v.spacing());
  }
}

TEST_CASE("corrupt header: nonpositive spacing") {
  std::string dir = scratch_dir("corrupt");
  std::ofstream(dir + "/bad.json") << R"({"dims":[2,2,2],"spacing":[0,1,1],"dtype":"float64"})";
  std::ofstream(dir + "/bad.bin", std::ios::binary) << std::string(64, '\0');
  CHECK_THROWS_WITH_AS(load_volume(dir + "/bad.bin"), doctest::Contains("CorruptHeader"), Error);
}

TEST_CASE("NaN payload is rejected") {
  std::string dir = scratch_dir("nan");
  std::ofstream(dir + "/bad.json") << R"({"dims":[1,1,1],"spacing":[1,1,1],"dtype":"float64"})";
  double nan = std::nan("");
  std::ofstream(dir + "/bad.bin", std::ios::binary).write(reinterpret_cast<const char*>(&nan), sizeof(nan));
  CHECK_THROWS_AS(load_volume(dir + "/bad.bin"), Error);
}

TEST_CASE("NIfTI write-then-read on randomized volumes") {
  std::string dir = scratch_dir("nifti");
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    VoxelVolume v = random_volume(Dims{7, 5, 6}, Spacing{0.9, 1.1, 2.0}, seed);
    SUBCASE("") {}
    save_volume_nifti(v, dir + "/v.nii", ScalarType::Float64);
    VoxelVolume r = load_volume(dir + "/v.nii");
    CHECK(r.dims() == v.dims());
    CHECK(r.values() == v.values());  // float64 storage is exact
    // pixdim is float32 on disk
    CHECK(close_rel(r.spacing().sx, v.spacing().sx, 1e-6));
    CHECK(close_rel(r.spacing().sz, v.spacing().sz, 1e-6));
    CHECK(r.frame_id() == v.frame_id());

    save_volume_nifti(v, dir + "/v.nii.gz", ScalarType::Float64);
    VoxelVolume rz = load_volume(dir + "/v.nii.gz");
    CHECK(rz.values() == v.values());
  }
}

TEST_CASE("NIfTI integer datatypes widen and honor scl_slope") {
  std::string dir = scratch_dir("nifti_int");
  std::vector<double> values = {-1000, -500, 0, 250, 400, 1200};
  VoxelVolume v(Dims{3, 2, 1}, Spacing{1, 1, 1}, values, "f");
  save_volume_nifti(v, dir + "/i16.nii", ScalarType::Int16);
  VoxelVolume r = load_volume(dir + "/i16.nii");
  CHECK(r.values() == values);  // integral HU fits int16 exactly
}

TEST_CASE("mask loading validates semantics") {
  std::string dir = scratch_dir("mask");
  std::vector<std::int32_t> lobes = {0, 1, 2, 3, 4, 5, 0, 1};
  LabelMask m(Dims{2, 2, 2}, Spacing{1, 1, 1}, lobes, MaskSemantics::LobeMap, "f");
  save_mask_raw(m, dir + "/lobes.bin");
  LabelMask r = load_mask(dir + "/lobes.bin", MaskSemantics::LobeMap);
  CHECK(r.labels() == lobes);

  SUBCASE("label out of range") {
    std::ofstream(dir + "/bad.json") << R"({"dims":[1,1,1],"spacing":[1,1,1],"dtype":"int32"})";
    std::int32_t seven = 7;
    std::ofstream(dir + "/bad.bin", std::ios::binary).write(reinterpret_cast<const char*>(&seven), 4);
    CHECK_THROWS_WITH_AS(load_mask(dir + "/bad.bin", MaskSemantics::LobeMap), doctest::Contains("LabelOutOfRange"),
                         Error);
  }
  SUBCASE("non-integral mask data") {
    std::ofstream(dir + "/frac.json") << R"({"dims":[1,1,1],"spacing":[1,1,1],"dtype":"float64"})";
    double half = 0.5;
    std::ofstream(dir + "/frac.bin", std::ios::binary).write(reinterpret_cast<const char*>(&half), 8);
    CHECK_THROWS_WITH_AS(load_mask(dir + "/frac.bin", MaskSemantics::BinaryOpacity),
                         doctest::Contains("NonIntegralData"), Error);
  }
}

TEST_CASE("binary opacity round-trip over a random pattern") {
  std::string dir = scratch_dir("mask_rand");
  LabelMask m = random_binary_mask(Dims{6, 5, 4}, Spacing{1, 1, 1}, 42);
  save_mask_nifti(m, dir + "/op.nii.gz");
  LabelMask r = load_mask(dir + "/op.nii.gz", MaskSemantics::BinaryOpacity);
  CHECK(r.labels() == m.labels());
}

TEST_CASE("validate_alignment") {
  VoxelVolume v = random_volume(Dims{4, 4, 4}, Spacing{1, 1, 1}, 1);
  LabelMask m = random_binary_mask(Dims{4, 4, 4}, Spacing{1, 1, 1}, 2);
  SUBCASE("identical metadata -> token") {
    AlignmentToken token = validate_alignment(v, m);
    CHECK(token.dims == v.dims());
  }
  SUBCASE("dims mismatch") {
    LabelMask bad = random_binary_mask(Dims{4, 4, 5}, Spacing{1, 1, 1}, 2);
    CHECK_THROWS_WITH_AS(validate_alignment(v, bad), doctest::Contains("DimsMismatch"), Error);
  }
  SUBCASE("spacing within 1e-6 relative passes, larger fails") {
    LabelMask near(Dims{4, 4, 4}, Spacing{1.0 + 1e-9, 1, 1}, std::vector<std::int32_t>(64, 1),
                   MaskSemantics::BinaryOpacity, "test");
    CHECK_NOTHROW(validate_alignment(v, near));
    LabelMask far(Dims{4, 4, 4}, Spacing{1.001, 1, 1}, std::vector<std::int32_t>(64, 1),
                  MaskSemantics::BinaryOpacity, "test");
    CHECK_THROWS_WITH_AS(validate_alignment(v, far), doctest::Contains("SpacingMismatch"), Error);
  }
  SUBCASE("frame mismatch") {
    LabelMask other(Dims{4, 4, 4}, Spacing{1, 1, 1}, std::vector<std::int32_t>(64, 1), MaskSemantics::BinaryOpacity,
                    "other");
    CHECK_THROWS_WITH_AS(validate_alignment(v, other), doctest::Contains("FrameMismatch"), Error);
  }
}

TEST_CASE("crop_to_mask_bbox") {
  SUBCASE("single voxel, margin 0") {
    std::vector<std::int32_t> labels(6 * 7 * 8, 0);
    Dims dims{6, 7, 8};
    LabelMask m(dims, Spacing{1, 1, 1}, labels, MaskSemantics::BinaryOpacity, "test");
    std::vector<std::int32_t> one(labels);
    one[3 + 6 * (4 + 7 * 5)] = 1;
    LabelMask m1(dims, Spacing{1, 1, 1}, one, MaskSemantics::BinaryOpacity, "test");
    VoxelVolume v = random_volume(dims, Spacing{1, 1, 1}, 3);
    auto [cv, cm] = crop_to_mask_bbox(v, m1, 0);
    CHECK(cv.dims() == Dims{1, 1, 1});
    CHECK(cv.values()[0] == v.at(3, 4, 5));
    CHECK(cm.labels()[0] == 1);
    CHECK_THROWS_WITH_AS(crop_to_mask_bbox(v, m, 0), doctest::Contains("EmptyMask"), Error);
  }
  SUBCASE("full-volume mask is an identity crop") {
    Dims dims{5, 6, 7};
    VoxelVolume v = random_volume(dims, Spacing{1, 1, 1}, 4);
    LabelMask m = full_mask(dims, Spacing{1, 1, 1});
    auto [cv, cm] = crop_to_mask_bbox(v, m, 3);
    CHECK(cv.dims() == dims);
    CHECK(cv.values() == v.values());
  }
  SUBCASE("random sparse mask vs brute-force index scan, margin 2") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Dims dims{9, 8, 7};
      VoxelVolume v = random_volume(dims, Spacing{1, 1, 1}, seed);
      LabelMask m = random_binary_mask(dims, Spacing{1, 1, 1}, seed + 100, 0.05);
      // oracle: exhaustive min/max over nonzero indices
      int x0 = dims.nx, x1 = -1, y0 = dims.ny, y1 = -1, z0 = dims.nz, z1 = -1;
      for (int z = 0; z < dims.nz; ++z) {
        for (int y = 0; y < dims.ny; ++y) {
          for (int x = 0; x < dims.nx; ++x) {
            if (m.at(x, y, z) == 0) continue;
            x0 = std::min(x0, x); x1 = std::max(x1, x);
            y0 = std::min(y0, y); y1 = std::max(y1, y);
            z0 = std::min(z0, z); z1 = std::max(z1, z);
          }
        }
      }
      const int margin = 2;
      x0 = std::max(0, x0 - margin); x1 = std::min(dims.nx - 1, x1 + margin);
      y0 = std::max(0, y0 - margin); y1 = std::min(dims.ny - 1, y1 + margin);
      z0 = std::max(0, z0 - margin); z1 = std::min(dims.nz - 1, z1 + margin);
      auto [cv, cm] = crop_to_mask_bbox(v, m, margin);
      CHECK(cv.dims() == Dims{x1 - x0 + 1, y1 - y0 + 1, z1 - z0 + 1});
      CHECK(cv.at(0, 0, 0) == v.at(x0, y0, z0));
      // no nonzero voxel dropped
      std::size_t before = m.nonzero_count();
      CHECK(cm.nonzero_count() == before);
    }
  }
}
