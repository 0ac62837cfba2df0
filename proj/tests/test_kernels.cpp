#include <doctest.h>

#include <omp.h>

#include "helpers.hpp"
#include "lungrad/kernels.hpp"

using namespace lungrad;
using namespace lungrad::test;

TEST_CASE("reflect_index: half-sample symmetry") {
  CHECK(reflect_index(-1, 5) == 0);
  CHECK(reflect_index(-2, 5) == 1);
  CHECK(reflect_index(5, 5) == 4);
  CHECK(reflect_index(6, 5) == 3);
  CHECK(reflect_index(0, 1) == 0);
  CHECK(reflect_index(-3, 1) == 0);
}

TEST_CASE("serial and OpenMP kernels are bit-identical") {
  Dims dims{17, 13, 11};
  VoxelVolume v = random_volume(dims, Spacing{1, 1, 1}, 7);
  std::vector<double> taps = {0.1, 0.2, 0.4, 0.2, 0.1};

  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<double> serial(v.values().size()), parallel(v.values().size());
      convolve_axis(dims, v.values(), serial, axis, taps, 2, Exec::Serial);
      convolve_axis(dims, v.values(), parallel, axis, taps, 2, Exec::Parallel);
      CHECK(serial == parallel);
    }
    std::vector<double> ls(v.values().size()), lp(v.values().size());
    laplacian6(dims, Spacing{0.7, 0.7, 1.5}, v.values(), ls, Exec::Serial);
    laplacian6(dims, Spacing{0.7, 0.7, 1.5}, v.values(), lp, Exec::Parallel);
    CHECK(ls == lp);

    CHECK(max_abs(v.values(), Exec::Serial) == max_abs(v.values(), Exec::Parallel));

    std::vector<double> ts(v.values().size()), tp(v.values().size());
    auto f = [](double x) { return x * x + 1.0; };
    transform_pointwise(std::span<const double>(v.values()), std::span<double>(ts), f, Exec::Serial);
    transform_pointwise(std::span<const double>(v.values()), std::span<double>(tp), f, Exec::Parallel);
    CHECK(ts == tp);
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("convolve_axis matches a naive per-voxel oracle") {
  Dims dims{6, 5, 4};
  VoxelVolume v = random_volume(dims, Spacing{1, 1, 1}, 9);
  std::vector<double> taps = {0.25, 0.5, 0.25};
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> out(v.values().size());
    convolve_axis(dims, v.values(), out, axis, taps, 1, Exec::Serial);
    for (int z = 0; z < dims.nz; ++z) {
      for (int y = 0; y < dims.ny; ++y) {
        for (int x = 0; x < dims.nx; ++x) {
          double expected = 0.0;
          for (int t = 0; t < 3; ++t) {
            int xi = x, yi = y, zi = z;
            if (axis == 0) xi = reflect_index(x + t - 1, dims.nx);
            if (axis == 1) yi = reflect_index(y + t - 1, dims.ny);
            if (axis == 2) zi = reflect_index(z + t - 1, dims.nz);
            expected += taps[static_cast<std::size_t>(t)] * v.at(xi, yi, zi);
          }
          CHECK(close_rel(out[v.index(x, y, z)], expected, 1e-14));
        }
      }
    }
  }
}
