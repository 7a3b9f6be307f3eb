#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "ringscan/errors.hpp"

namespace ringscan::cli {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!ok.contains(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

double num_or(const json& obj, const char* key, double def, const std::string& where) {
  if (!obj.contains(key)) return def;
  return as_number(obj[key], where + "." + key);
}

int int_or(const json& obj, const char* key, int def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj[key];
  if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
  return v.get<int>();
}

bool bool_or(const json& obj, const char* key, bool def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj[key];
  if (!v.is_boolean()) fail(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string string_or(const json& obj, const char* key, const std::string& def,
                      const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj[key];
  if (!v.is_string()) fail(where + "." + key + " must be a string");
  return v.get<std::string>();
}

Vec2 as_vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where + " must be a [x, y] pair");
  return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
}

// --------------------------------------------------------------------------
// Sections
// --------------------------------------------------------------------------

GeometryContext parse_geometry(const json& obj) {
  check_keys(obj, "geometry", {"range_m", "frequency_hz"});
  GeometryContext g;
  g.range_m = num_or(obj, "range_m", g.range_m, "geometry");
  g.frequency_hz = num_or(obj, "frequency_hz", g.frequency_hz, "geometry");
  return g;
}

ShapeSpec parse_shape(const json& obj, const GeometryContext& geometry, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  const std::string kind = string_or(obj, "kind", "", where);
  if (kind.empty()) fail(where + " needs a 'kind'");

  if (kind == "gun") {
    check_keys(obj, where + " (gun)", {"kind", "orientation_deg", "center_l", "center_m"});
    return gun_shape(geometry, num_or(obj, "orientation_deg", 0.0, where) * kDegToRad,
                     num_or(obj, "center_l", 0.0, where), num_or(obj, "center_m", 0.0, where));
  }

  ShapeSpec s;
  s.center_l = num_or(obj, "center_l", 0.0, where);
  s.center_m = num_or(obj, "center_m", 0.0, where);
  s.amplitude = num_or(obj, "amplitude", 1.0, where);
  s.rotation_rad = num_or(obj, "rotation_deg", 0.0, where) * kDegToRad;

  if (kind == "point") {
    check_keys(obj, where + " (point)", {"kind", "center_l", "center_m", "amplitude"});
    s.kind = ShapeKind::point;
  } else if (kind == "rectangle") {
    check_keys(obj, where + " (rectangle)",
               {"kind", "center_l", "center_m", "amplitude", "rotation_deg", "width", "height",
                "width_m", "height_m"});
    s.kind = ShapeKind::rectangle;
    const bool dc_w = obj.contains("width"), m_w = obj.contains("width_m");
    const bool dc_h = obj.contains("height"), m_h = obj.contains("height_m");
    if (dc_w == m_w) fail(where + " needs exactly one of width | width_m");
    if (dc_h == m_h) fail(where + " needs exactly one of height | height_m");
    s.width = dc_w ? as_number(obj["width"], where + ".width")
                   : physical_to_direction_cosine(as_number(obj["width_m"], where + ".width_m"),
                                                  geometry);
    s.height = dc_h ? as_number(obj["height"], where + ".height")
                    : physical_to_direction_cosine(as_number(obj["height_m"], where + ".height_m"),
                                                   geometry);
  } else if (kind == "polygon") {
    check_keys(obj, where + " (polygon)",
               {"kind", "center_l", "center_m", "amplitude", "rotation_deg", "vertices"});
    s.kind = ShapeKind::polygon;
    if (!obj.contains("vertices") || !obj["vertices"].is_array())
      fail(where + " needs a 'vertices' array");
    std::size_t i = 0;
    for (const auto& v : obj["vertices"]) {
      Vec2 p = as_vec2(v, where + ".vertices[" + std::to_string(i) + "]");
      p.x += s.center_l;  // vertices are given relative to the shape centre
      p.y += s.center_m;
      s.vertices.push_back(p);
      ++i;
    }
  } else {
    fail(where + ": unknown shape kind '" + kind + "'");
  }
  return s;
}

SceneSection parse_scene(const json& obj, const GeometryContext& geometry) {
  check_keys(obj, "scene", {"rows", "cols", "half_extent", "shapes"});
  SceneSection s;
  s.rows = int_or(obj, "rows", s.rows, "scene");
  s.cols = int_or(obj, "cols", s.cols, "scene");
  s.half_extent = num_or(obj, "half_extent", s.half_extent, "scene");
  if (obj.contains("shapes")) {
    if (!obj["shapes"].is_array()) fail("scene.shapes must be an array");
    std::size_t i = 0;
    for (const auto& shape : obj["shapes"]) {
      s.shapes.push_back(parse_shape(shape, geometry, "scene.shapes[" + std::to_string(i) + "]"));
      ++i;
    }
  }
  return s;
}

RingConfig parse_ring(const json& obj) {
  check_keys(obj, "ring",
             {"baselines_lambda", "start_deg", "step_deg", "span_deg", "dwell_s",
              "rotation_rate_rps"});
  RingConfig r;
  if (obj.contains("baselines_lambda")) {
    if (!obj["baselines_lambda"].is_array() || obj["baselines_lambda"].empty())
      fail("ring.baselines_lambda must be a non-empty array");
    r.baselines_lambda.clear();
    for (const auto& b : obj["baselines_lambda"])
      r.baselines_lambda.push_back(as_number(b, "ring.baselines_lambda[]"));
  }
  r.start_angle_rad = num_or(obj, "start_deg", 0.0, "ring") * kDegToRad;
  r.step_rad = num_or(obj, "step_deg", 0.9, "ring") * kDegToRad;
  r.span_rad = num_or(obj, "span_deg", 180.0, "ring") * kDegToRad;
  r.dwell_s = num_or(obj, "dwell_s", r.dwell_s, "ring");
  r.rotation_rate_rps = num_or(obj, "rotation_rate_rps", r.rotation_rate_rps, "ring");
  return r;
}

NoiseVisConfig parse_noise(const json& obj, const RunConfig& cfg) {
  check_keys(obj, "measure.noise_sim",
             {"tx_positions_m", "rx_separation_m", "rx_centroid_m", "carrier_hz",
              "noise_bandwidth_hz", "sample_rate_hz", "samples_per_dwell", "snr_db"});
  NoiseVisConfig n;
  n.carrier_hz = num_or(obj, "carrier_hz", cfg.geometry.frequency_hz, "measure.noise_sim");
  // Default receiver separation: realize the first configured ring baseline.
  n.rx_separation_m = num_or(obj, "rx_separation_m",
                             cfg.ring.baselines_lambda.front() * (kSpeedOfLight / n.carrier_hz),
                             "measure.noise_sim");
  if (obj.contains("rx_centroid_m"))
    n.rx_centroid_m = as_vec2(obj["rx_centroid_m"], "measure.noise_sim.rx_centroid_m");
  n.noise_bandwidth_hz = num_or(obj, "noise_bandwidth_hz", n.noise_bandwidth_hz,
                                "measure.noise_sim");
  n.sample_rate_hz = num_or(obj, "sample_rate_hz", n.sample_rate_hz, "measure.noise_sim");
  const int samples = int_or(obj, "samples_per_dwell", static_cast<int>(n.samples_per_dwell),
                             "measure.noise_sim");
  if (samples < 2) fail("measure.noise_sim.samples_per_dwell must be >= 2");
  n.samples_per_dwell = static_cast<std::size_t>(samples);
  n.snr_db = num_or(obj, "snr_db", n.snr_db, "measure.noise_sim");
  if (obj.contains("tx_positions_m")) {
    if (!obj["tx_positions_m"].is_array()) fail("measure.noise_sim.tx_positions_m must be an array");
    std::size_t i = 0;
    for (const auto& p : obj["tx_positions_m"]) {
      n.tx_positions_m.push_back(
          as_vec2(p, "measure.noise_sim.tx_positions_m[" + std::to_string(i) + "]"));
      ++i;
    }
  }
  return n;
}

MeasureSection parse_measure(const json& obj, const RunConfig& cfg) {
  check_keys(obj, "measure", {"path", "scatterers", "noise_sim"});
  MeasureSection m;
  m.path = string_or(obj, "path", m.path, "measure");
  if (m.path != "analytic" && m.path != "oracle")
    fail("measure.path must be 'analytic' or 'oracle'");
  if (obj.contains("scatterers")) {
    if (!obj["scatterers"].is_array()) fail("measure.scatterers must be an array");
    std::size_t i = 0;
    for (const auto& s : obj["scatterers"]) {
      const std::string where = "measure.scatterers[" + std::to_string(i) + "]";
      if (!s.is_array() || s.size() != 3) fail(where + " must be [l, m, reflectivity]");
      m.scatterers.push_back({as_number(s[0], where + "[0]"), as_number(s[1], where + "[1]"),
                              as_number(s[2], where + "[2]")});
      ++i;
    }
  }
  m.noise = parse_noise(obj.contains("noise_sim") ? obj["noise_sim"] : json::object(), cfg);
  return m;
}

DatasetSection parse_dataset(const json& obj, const RunConfig& cfg) {
  check_keys(obj, "dataset", {"synthetic", "import"});
  DatasetSection d;
  if (obj.contains("synthetic")) {
    const auto& s = obj["synthetic"];
    check_keys(s, "dataset.synthetic",
               {"per_class", "scene_rows", "scene_cols", "half_extent", "torso_width_m",
                "torso_height_m", "torso_amplitude", "position_jitter", "tilt_sigma_deg",
                "size_jitter_frac", "motion_scale_sigma", "sample_snr_db"});
    PhantomDatasetConfig p;
    p.geometry = cfg.geometry;
    p.ring = cfg.ring;
    p.seed = cfg.seed;
    const int per_class = int_or(s, "per_class", static_cast<int>(p.per_class),
                                 "dataset.synthetic");
    if (per_class < 2) fail("dataset.synthetic.per_class must be >= 2");
    p.per_class = static_cast<std::size_t>(per_class);
    p.scene_rows = int_or(s, "scene_rows", p.scene_rows, "dataset.synthetic");
    p.scene_cols = int_or(s, "scene_cols", p.scene_cols, "dataset.synthetic");
    p.half_extent = num_or(s, "half_extent", p.half_extent, "dataset.synthetic");
    p.torso_width_m = num_or(s, "torso_width_m", p.torso_width_m, "dataset.synthetic");
    p.torso_height_m = num_or(s, "torso_height_m", p.torso_height_m, "dataset.synthetic");
    p.torso_amplitude = num_or(s, "torso_amplitude", p.torso_amplitude, "dataset.synthetic");
    p.position_jitter = num_or(s, "position_jitter", p.position_jitter, "dataset.synthetic");
    p.tilt_sigma_rad = num_or(s, "tilt_sigma_deg", p.tilt_sigma_rad / kDegToRad,
                              "dataset.synthetic") * kDegToRad;
    p.size_jitter_frac = num_or(s, "size_jitter_frac", p.size_jitter_frac, "dataset.synthetic");
    p.motion_scale_sigma = num_or(s, "motion_scale_sigma", p.motion_scale_sigma,
                                  "dataset.synthetic");
    p.sample_snr_db = num_or(s, "sample_snr_db", p.sample_snr_db, "dataset.synthetic");
    d.synthetic = p;
  }
  if (obj.contains("import")) {
    if (!obj["import"].is_array()) fail("dataset.import must be an array");
    std::size_t i = 0;
    for (const auto& e : obj["import"]) {
      const std::string where = "dataset.import[" + std::to_string(i) + "]";
      check_keys(e, where, {"ringcsv", "label", "source_id"});
      DatasetImportEntry entry;
      entry.ringcsv = string_or(e, "ringcsv", "", where);
      if (entry.ringcsv.empty()) fail(where + " needs 'ringcsv'");
      const int label = int_or(e, "label", -1, where);
      if (label != 0 && label != 1) fail(where + ".label must be 0 or 1");
      entry.positive = label == 1;
      entry.source_id = string_or(e, "source_id", "import_" + std::to_string(i), where);
      d.imports.push_back(std::move(entry));
      ++i;
    }
  }
  return d;
}

SvmSection parse_svm(const json& obj, const std::string& where) {
  check_keys(obj, where, {"grid_search", "c", "gamma", "folds", "objective"});
  SvmSection s;
  s.grid_search = bool_or(obj, "grid_search", s.grid_search, where);
  s.c = num_or(obj, "c", s.c, where);
  s.gamma = num_or(obj, "gamma", s.gamma, where);
  s.folds = int_or(obj, "folds", s.folds, where);
  s.objective = string_or(obj, "objective", s.objective, where);
  if (s.objective != "cross_validation" && s.objective != "train_accuracy")
    fail(where + ".objective must be 'cross_validation' or 'train_accuracy'");
  return s;
}

TrainSection parse_train(const json& obj) {
  check_keys(obj, "train", {"classifier", "knn_k", "svm", "dataset_path"});
  TrainSection t;
  t.classifier = string_or(obj, "classifier", t.classifier, "train");
  t.knn_k = int_or(obj, "knn_k", t.knn_k, "train");
  if (obj.contains("svm")) t.svm = parse_svm(obj["svm"], "train.svm");
  if (obj.contains("dataset_path"))
    t.dataset_path = string_or(obj, "dataset_path", "", "train");
  return t;
}

ClassifierSpec parse_classifier_spec(const json& obj, const std::string& where) {
  check_keys(obj, where, {"kind", "votes", "knn_k", "svm"});
  ClassifierSpec spec;
  const std::string kind = string_or(obj, "kind", "", where);
  if (kind == "threshold" || kind == "thr")
    spec.kind = ClassifierKind::threshold;
  else if (kind == "knn")
    spec.kind = ClassifierKind::knn;
  else if (kind == "svm")
    spec.kind = ClassifierKind::svm;
  else
    fail(where + ".kind must be 'threshold', 'knn', or 'svm'");
  spec.votes = int_or(obj, "votes", 1, where);
  spec.knn_k = int_or(obj, "knn_k", spec.knn_k, where);
  if (obj.contains("svm")) {
    const SvmSection s = parse_svm(obj["svm"], where + ".svm");
    spec.svm_grid_search = s.grid_search;
    spec.svm_c = s.c;
    spec.svm_gamma = s.gamma;
    spec.svm_folds = s.folds;
  } else if (spec.kind == ClassifierKind::svm) {
    spec.svm_grid_search = true;
  }
  return spec;
}

EvalSection parse_eval(const json& obj) {
  check_keys(obj, "eval",
             {"iterations", "train_fraction", "keep_points", "classifiers", "dataset_path"});
  EvalSection e;
  const int iters = int_or(obj, "iterations", static_cast<int>(e.iterations), "eval");
  if (iters < 1) fail("eval.iterations must be >= 1");
  e.iterations = static_cast<std::size_t>(iters);
  e.train_fraction = num_or(obj, "train_fraction", e.train_fraction, "eval");
  e.keep_points = bool_or(obj, "keep_points", e.keep_points, "eval");
  if (obj.contains("classifiers")) {
    if (!obj["classifiers"].is_array() || obj["classifiers"].empty())
      fail("eval.classifiers must be a non-empty array");
    std::size_t i = 0;
    for (const auto& c : obj["classifiers"]) {
      e.classifiers.push_back(
          parse_classifier_spec(c, "eval.classifiers[" + std::to_string(i) + "]"));
      ++i;
    }
  }
  if (obj.contains("dataset_path")) e.dataset_path = string_or(obj, "dataset_path", "", "eval");
  return e;
}

ReconstructSection parse_reconstruct(const json& obj) {
  check_keys(obj, "reconstruct",
             {"input", "rows", "cols", "u_half_extent", "v_half_extent", "hermitian"});
  ReconstructSection r;
  if (obj.contains("input")) r.input = string_or(obj, "input", "", "reconstruct");
  r.rows = int_or(obj, "rows", r.rows, "reconstruct");
  r.cols = int_or(obj, "cols", r.cols, "reconstruct");
  if (obj.contains("u_half_extent"))
    r.u_half_extent = num_or(obj, "u_half_extent", 0.0, "reconstruct");
  if (obj.contains("v_half_extent"))
    r.v_half_extent = num_or(obj, "v_half_extent", 0.0, "reconstruct");
  r.hermitian = bool_or(obj, "hermitian", r.hermitian, "reconstruct");
  return r;
}

SsimSection parse_ssim(const json& obj) {
  check_keys(obj, "ssim", {"reference", "candidate"});
  SsimSection s;
  if (obj.contains("reference")) s.reference = string_or(obj, "reference", "", "ssim");
  if (obj.contains("candidate")) s.candidate = string_or(obj, "candidate", "", "ssim");
  return s;
}

ReportSection parse_report(const json& obj) {
  check_keys(obj, "report", {"repeats", "dataset_path"});
  ReportSection r;
  r.repeats = int_or(obj, "repeats", r.repeats, "report");
  if (r.repeats < 1) fail("report.repeats must be >= 1");
  if (obj.contains("dataset_path")) r.dataset_path = string_or(obj, "dataset_path", "", "report");
  return r;
}

const json& section(const json& root, const char* name, const json& empty) {
  if (!root.contains(name)) return empty;
  if (!root[name].is_object()) fail(std::string(name) + " must be an object");
  return root[name];
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw MissingInputError("missing config file: " + path.string());
  std::ifstream f(path);
  if (!f) throw MissingInputError("cannot read config file: " + path.string());

  json root;
  try {
    root = json::parse(f);
  } catch (const json::exception& e) {
    fail("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) fail("top level must be a JSON object");
  check_keys(root, "top level",
             {"seed", "out_dir", "geometry", "scene", "ring", "measure", "dataset", "train",
              "eval", "reconstruct", "ssim", "report"});

  static const json empty = json::object();
  RunConfig cfg;
  if (root.contains("seed")) {
    const auto& s = root["seed"];
    if (!s.is_number_unsigned()) fail("seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.out_dir = string_or(root, "out_dir", cfg.out_dir.string(), "top level");
  cfg.geometry = parse_geometry(section(root, "geometry", empty));
  cfg.scene = parse_scene(section(root, "scene", empty), cfg.geometry);
  cfg.ring = parse_ring(section(root, "ring", empty));
  cfg.measure = parse_measure(section(root, "measure", empty), cfg);
  cfg.dataset = parse_dataset(section(root, "dataset", empty), cfg);
  cfg.train = parse_train(section(root, "train", empty));
  cfg.eval = parse_eval(section(root, "eval", empty));
  cfg.reconstruct = parse_reconstruct(section(root, "reconstruct", empty));
  cfg.ssim = parse_ssim(section(root, "ssim", empty));
  cfg.report = parse_report(section(root, "report", empty));
  return cfg;
}

}  // namespace ringscan::cli
