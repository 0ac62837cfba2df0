#include "lungrad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "lungrad/io.hpp"
#include "lungrad/rng.hpp"

namespace lungrad {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Ellipsoid {
  double cx, cy, cz;
  double ax, ay, az;

  bool contains(int x, int y, int z) const {
    double u = (x - cx) / ax, v = (y - cy) / ay, w = (z - cz) / az;
    return u * u + v * v + w * w <= 1.0;
  }
};

int hu_band(double hu) {
  // Duplicated on purpose: the cohort's ground truth must not come from the
  // hlq module it is used to check.
  if (hu < -750.0) return 1;
  if (hu < -300.0) return 2;
  if (hu < 50.0) return 3;
  return 4;
}

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

PhantomCohort synth_cohort(const PhantomSpec& spec) {
  if (spec.n_subjects < 1 || spec.dims.nx < 8 || spec.dims.ny < 8 || spec.dims.nz < 8) {
    throw Error(ErrorCode::InvalidSpec, "phantom needs n_subjects >= 1 and dims >= 8^3");
  }
  if (!(spec.blob_fraction_min >= 0.0 && spec.blob_fraction_max <= 1.0 &&
        spec.blob_fraction_min <= spec.blob_fraction_max)) {
    throw Error(ErrorCode::InvalidSpec, "blob fractions must satisfy 0 <= min <= max <= 1");
  }

  PhantomCohort cohort;
  cohort.clinical.columns = dvb_canonical_columns();

  const Dims& d = spec.dims;
  for (int subject = 0; subject < spec.n_subjects; ++subject) {
    SplitMix64 rng = derive_stream(spec.seed, static_cast<std::uint64_t>(subject));
    PhantomSubject ps;
    char id[16];
    std::snprintf(id, sizeof(id), "S%03d", subject);
    ps.id = id;

    auto jitter = [&](double scale) { return (rng.next_double() * 2.0 - 1.0) * scale; };
    Ellipsoid right{0.30 * d.nx + jitter(0.02 * d.nx), 0.50 * d.ny + jitter(0.02 * d.ny),
                    0.50 * d.nz + jitter(0.02 * d.nz), 0.17 * d.nx * (1.0 + jitter(0.1)),
                    0.30 * d.ny * (1.0 + jitter(0.1)), 0.40 * d.nz * (1.0 + jitter(0.1))};
    Ellipsoid left{0.70 * d.nx + jitter(0.02 * d.nx),  0.50 * d.ny + jitter(0.02 * d.ny),
                   0.50 * d.nz + jitter(0.02 * d.nz),  0.15 * d.nx * (1.0 + jitter(0.1)),
                   0.28 * d.ny * (1.0 + jitter(0.1)),  0.38 * d.nz * (1.0 + jitter(0.1))};

    std::vector<std::int32_t> lobes(d.voxel_count(), 0);
    std::vector<double> values(d.voxel_count());
    std::vector<std::size_t> lung_voxels;
    std::size_t idx = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x, ++idx) {
          std::int32_t label = 0;
          if (right.contains(x, y, z)) {
            double zeta = (z - right.cz) / right.az;
            label = zeta > 0.33 ? 1 : (zeta > -0.2 ? 2 : 3);
          } else if (left.contains(x, y, z)) {
            label = (z - left.cz) / left.az > 0.0 ? 4 : 5;
          }
          lobes[idx] = label;
          if (label != 0) {
            values[idx] = -880.0 + jitter(40.0);  // parenchyma, HU1 band
            lung_voxels.push_back(idx);
          } else {
            values[idx] = -50.0;  // soft tissue
          }
        }
      }
    }
    if (lung_voxels.empty()) throw Error(ErrorCode::InvalidSpec, "phantom lungs are empty; enlarge dims");

    ps.severity = rng.next_double();
    std::vector<std::int32_t> opacity(d.voxel_count(), 0);

    auto paint_blob = [&](std::int64_t target_voxels, double hu_center, double hu_jitter) {
      if (target_voxels <= 0) return;
      // Grow from a random lung voxel outward (nearest lung voxels first,
      // ties by index) to exactly the requested count.
      std::size_t seed_idx = lung_voxels[static_cast<std::size_t>(rng.next_below(lung_voxels.size()))];
      int sx = static_cast<int>(seed_idx % static_cast<std::size_t>(d.nx));
      int sy = static_cast<int>((seed_idx / static_cast<std::size_t>(d.nx)) % static_cast<std::size_t>(d.ny));
      int sz = static_cast<int>(seed_idx / (static_cast<std::size_t>(d.nx) * d.ny));
      std::vector<std::pair<std::int64_t, std::size_t>> dist;
      dist.reserve(lung_voxels.size());
      for (std::size_t vi : lung_voxels) {
        int x = static_cast<int>(vi % static_cast<std::size_t>(d.nx));
        int y = static_cast<int>((vi / static_cast<std::size_t>(d.nx)) % static_cast<std::size_t>(d.ny));
        int z = static_cast<int>(vi / (static_cast<std::size_t>(d.nx) * d.ny));
        std::int64_t dx = x - sx, dy = y - sy, dz = z - sz;
        dist.emplace_back(dx * dx + dy * dy + dz * dz, vi);
      }
      std::sort(dist.begin(), dist.end());
      std::int64_t painted = 0;
      for (const auto& [d2, vi] : dist) {
        if (painted >= target_voxels) break;
        if (opacity[vi]) continue;
        opacity[vi] = 1;
        values[vi] = hu_center + jitter(hu_jitter);
        ++painted;
      }
    };

    const double lung_count = static_cast<double>(lung_voxels.size());
    double fraction = spec.blob_fraction_min + ps.severity * (spec.blob_fraction_max - spec.blob_fraction_min);
    std::int64_t ggo_target = spec.exact_blob_voxels > 0
                                  ? spec.exact_blob_voxels
                                  : static_cast<std::int64_t>(std::llround(fraction * lung_count));
    paint_blob(ggo_target, -520.0, 80.0);  // GGO band [-750, -300)
    if (spec.plant_consolidation && ps.severity > 0.6 && spec.exact_blob_voxels == 0) {
      paint_blob(static_cast<std::int64_t>(std::llround(0.3 * fraction * lung_count)), -150.0, 50.0);
    }

    // Exhaustive ground-truth tally.
    idx = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x, ++idx) {
          std::int32_t lobe = lobes[idx];
          if (lobe == 0) continue;
          int band = hu_band(values[idx]) - 1;
          int rois[3] = {0, lobe >= 4 ? 1 : 2, 2 + lobe};
          for (int roi : rois) {
            ++ps.component_counts[static_cast<std::size_t>(roi)][static_cast<std::size_t>(band)];
            if (opacity[idx]) ++ps.opacity_counts[static_cast<std::size_t>(roi)][static_cast<std::size_t>(band)];
          }
        }
      }
    }

    // Clinical row; spo2 tracks severity so DVB carries signal too.
    double age = clip(60.0 + 14.0 * rng.next_gaussian(), 25.0, 95.0);
    double sex = rng.next_double() < 0.5 ? 0.0 : 1.0;
    double wbc = clip(6500.0 + 1800.0 * rng.next_gaussian(), 1500.0, 25000.0);
    double lym = clip(1250.0 + 400.0 * rng.next_gaussian(), 100.0, 5000.0);
    double temperature = clip(37.2 + 0.5 * rng.next_gaussian(), 30.5, 44.5);
    double spo2 = clip(94.0 - 7.0 * ps.severity + 2.0 * rng.next_gaussian(), 55.0, 100.0);

    double z_age = (age - 60.0) / 15.0;
    double z_spo2 = (spo2 - 90.0) / 5.0;
    double logit = spec.bias + spec.severity_effect * (2.0 * ps.severity - 1.0) + spec.age_effect * z_age +
                   spec.spo2_effect * z_spo2;
    ps.label = rng.next_double() < 1.0 / (1.0 + std::exp(-logit)) ? 1 : 0;

    std::vector<std::optional<double>> row = {age, sex, wbc, lym, 100.0 * lym / wbc, temperature, spo2};
    if (rng.next_double() < spec.missing_rate) row[4].reset();  // lym_ratio (derivable)
    if (rng.next_double() < spec.missing_rate) row[5].reset();  // temperature
    if (rng.next_double() < spec.missing_rate) row[6].reset();  // spo2
    cohort.clinical.subject_ids.push_back(ps.id);
    cohort.clinical.cells.push_back(std::move(row));
    cohort.clinical.labels.push_back(ps.label);

    std::string frame = "phantom-" + ps.id;
    ps.volume = VoxelVolume(d, spec.spacing, std::move(values), frame);
    ps.lobes = LabelMask(d, spec.spacing, std::move(lobes), MaskSemantics::LobeMap, frame);
    ps.opacity = LabelMask(d, spec.spacing, std::move(opacity), MaskSemantics::BinaryOpacity, frame);
    cohort.subjects.push_back(std::move(ps));
  }
  return cohort;
}

std::string write_cohort(const PhantomCohort& cohort, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "lungrad-manifest";
  manifest["version"] = 1;
  manifest["clinical_csv"] = "clinical.csv";
  json subjects = json::array();
  json truth = json::array();

  for (const auto& ps : cohort.subjects) {
    std::string vol = ps.id + "_ct.nii.gz";
    std::string lobes = ps.id + "_lobes.nii.gz";
    std::string opacity = ps.id + "_opacity.nii.gz";
    save_volume_nifti(ps.volume, dir + "/" + vol, ScalarType::Float64);
    save_mask_nifti(ps.lobes, dir + "/" + lobes);
    save_mask_nifti(ps.opacity, dir + "/" + opacity);
    subjects.push_back({{"id", ps.id},
                        {"volume", vol},
                        {"lobe_mask", lobes},
                        {"opacity_mask", opacity},
                        {"clinical_row", ps.id}});
    json t;
    t["id"] = ps.id;
    t["severity"] = ps.severity;
    t["label"] = ps.label;
    t["component_counts"] = ps.component_counts;
    t["opacity_counts"] = ps.opacity_counts;
    truth.push_back(std::move(t));
  }
  manifest["subjects"] = std::move(subjects);

  // clinical.csv with canonical headers
  {
    std::ofstream out(dir + "/clinical.csv");
    if (!out) throw Error(ErrorCode::IoFailure, "cannot create clinical.csv in " + dir);
    out << "subject_id";
    for (const auto& c : cohort.clinical.columns) out << "," << c;
    out << ",icu\n";
    for (std::size_t r = 0; r < cohort.clinical.n_rows(); ++r) {
      out << cohort.clinical.subject_ids[r];
      for (std::size_t c = 0; c < cohort.clinical.columns.size(); ++c) {
        out << ",";
        if (cohort.clinical.cells[r][c]) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", *cohort.clinical.cells[r][c]);
          out << buf;
        }
      }
      out << "," << cohort.clinical.labels[r] << "\n";
    }
  }
  {
    std::ofstream out(dir + "/ground_truth.json");
    out << truth.dump(2) << "\n";
  }
  std::string manifest_path = dir + "/manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + manifest_path);
  out << manifest.dump(2) << "\n";
  return manifest_path;
}

TabularCohort make_tabular_cohort(std::size_t n, std::size_t d, const std::vector<std::size_t>& informative,
                                  double effect, std::uint64_t seed) {
  for (std::size_t f : informative) {
    if (f >= d) throw Error(ErrorCode::InvalidSpec, "informative index out of range");
  }
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t f = 0; f < d; ++f) names.push_back("f" + std::to_string(f));
  TabularCohort cohort;
  cohort.features = FeatureTable(names);

  std::vector<char> is_informative(d, 0);
  for (std::size_t f : informative) is_informative[f] = 1;

  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng = derive_stream(seed, i);
    int y = rng.next_double() < 0.5 ? 0 : 1;
    std::vector<double> row(d);
    for (std::size_t f = 0; f < d; ++f) {
      row[f] = rng.next_gaussian() + (is_informative[f] && y ? effect : 0.0);
    }
    cohort.features.add_row("S" + std::to_string(i), row, y);
    cohort.labels.push_back(y);
  }
  return cohort;
}

}  // namespace lungrad
