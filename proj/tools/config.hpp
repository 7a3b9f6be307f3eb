#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ringscan/aimsim.hpp"
#include "ringscan/dataset.hpp"
#include "ringscan/dynarray.hpp"
#include "ringscan/evaluate.hpp"
#include "ringscan/scene.hpp"

namespace ringscan::cli {

struct SceneSection {
  int rows = 256;
  int cols = 256;
  double half_extent = 0.25;
  std::vector<ShapeSpec> shapes;  // "gun" entries already expanded to polygons
};

struct MeasureSection {
  std::string path = "analytic";  // "analytic" | "oracle"
  std::vector<Scatterer> scatterers;
  NoiseVisConfig noise;  // oracle path; rx separation defaults to the ring baseline
};

struct DatasetImportEntry {
  std::filesystem::path ringcsv;
  bool positive = false;
  std::string source_id;
};

struct DatasetSection {
  std::optional<PhantomDatasetConfig> synthetic;
  std::vector<DatasetImportEntry> imports;
};

struct SvmSection {
  bool grid_search = true;
  double c = 1.0;
  double gamma = 1.0;
  int folds = 3;
  std::string objective = "cross_validation";  // | "train_accuracy"
};

struct TrainSection {
  std::string classifier = "svm";  // "threshold" | "knn" | "svm"
  int knn_k = 9;
  SvmSection svm;
  std::optional<std::filesystem::path> dataset_path;  // default: <out>/dataset.featcsv
};

struct EvalSection {
  std::size_t iterations = 500;
  double train_fraction = 0.7;
  bool keep_points = false;
  std::vector<ClassifierSpec> classifiers;  // default: threshold, knn(9), svm(grid)
  std::optional<std::filesystem::path> dataset_path;
};

struct ReconstructSection {
  std::optional<std::filesystem::path> input;  // default: <out>/ring.ringcsv
  int rows = 256;
  int cols = 256;
  std::optional<double> u_half_extent;  // default: cols (spacing 2 per cell)
  std::optional<double> v_half_extent;  // default: rows
  bool hermitian = true;
};

struct SsimSection {
  std::optional<std::filesystem::path> reference;
  std::optional<std::filesystem::path> candidate;
};

struct ReportSection {
  int repeats = 20;  // timing repetitions per stage (median reported)
  std::optional<std::filesystem::path> dataset_path;
};

struct RunConfig {
  std::uint64_t seed = 7;
  std::filesystem::path out_dir = "out";
  GeometryContext geometry;
  SceneSection scene;
  RingConfig ring;
  MeasureSection measure;
  DatasetSection dataset;
  TrainSection train;
  EvalSection eval;
  ReconstructSection reconstruct;
  SsimSection ssim;
  ReportSection report;
};

/// Parse a JSON config file. Missing file -> MissingInputError; malformed
/// JSON, unknown keys, or invalid values -> ConfigError. Every section is
/// optional and falls back to the documented defaults.
RunConfig load_config(const std::filesystem::path& path);

/// Defaults used when no --config is given.
RunConfig default_config();

}  // namespace ringscan::cli
