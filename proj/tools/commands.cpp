#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "ringscan/errors.hpp"
#include "ringscan/features.hpp"
#include "ringscan/io.hpp"
#include "ringscan/rng.hpp"
#include "ringscan/visibility.hpp"

namespace ringscan::cli {

namespace {

namespace fs = std::filesystem;

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

void note_written(const fs::path& path) { std::cout << "wrote " << path.string() << '\n'; }

// JSON number that always reads back as a float (the bare %.17g of 1.0 is "1").
std::string json_float(double v) {
  std::string s = format_g17(v);
  if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("0123456789") != std::string::npos)
    s += ".0";
  return s;
}

void check_feasible_schedule(const RingConfig& ring) {
  const RotationSchedule schedule = rotation_schedule(ring);
  if (!schedule.feasible) {
    std::ostringstream msg;
    msg << "ring.rotation_rate_rps " << ring.rotation_rate_rps
        << " rev/s exceeds the feasible maximum " << schedule.max_feasible_rate_rps
        << " rev/s for " << ring.samples_per_ring() << " dwells of " << ring.dwell_s
        << " s each: certain angles will be skipped";
    throw ConfigError(msg.str());
  }
}

SceneIntensity build_scene(const RunConfig& cfg) {
  cfg.geometry.validate();
  return make_scene(cfg.scene.rows, cfg.scene.cols, cfg.scene.half_extent, cfg.scene.half_extent,
                    cfg.scene.shapes);
}

fs::path dataset_path_for(const RunConfig& cfg, const std::optional<fs::path>& override_path) {
  return override_path.value_or(cfg.out_dir / "dataset.featcsv");
}

LabeledDataset load_dataset(const fs::path& path) {
  LabeledDataset data = read_featcsv(path);
  if (data.rows.empty()) throw SchemaError("FEATCSV: no data rows in " + path.string());
  return data;
}

LabeledDataset normalize_all(const Normalizer& norm, const LabeledDataset& raw) {
  LabeledDataset out;
  out.rows.reserve(raw.rows.size());
  for (const auto& r : raw.rows) out.rows.push_back({apply(norm, r.features), r.positive, r.source_id});
  return out;
}

Normalizer fit_on(const LabeledDataset& data) {
  std::vector<FeatureVector> fv;
  fv.reserve(data.rows.size());
  for (const auto& r : data.rows) fv.push_back(r.features);
  return fit_normalizer(fv);
}

GridObjective objective_from(const std::string& name) {
  return name == "train_accuracy" ? GridObjective::train_accuracy
                                  : GridObjective::cross_validation;
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); }

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

}  // namespace

void cmd_scene(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const SceneIntensity scene = build_scene(cfg);
  const fs::path path = out / "scene.mwgrid";
  write_mwgrid(path, scene);
  note_written(path);
}

void cmd_measure(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  cfg.ring.validate();
  check_feasible_schedule(cfg.ring);

  RingSampleSet samples;
  if (cfg.measure.path == "analytic") {
    const SceneIntensity scene = build_scene(cfg);
    const VisibilityGrid vis = forward_visibility(scene);
    samples = sample_ring_from_visibility(ring_points(cfg.ring), vis);
  } else {
    if (cfg.measure.scatterers.empty())
      throw ConfigError("measure.path 'oracle' needs measure.scatterers");
    if (cfg.measure.noise.tx_positions_m.empty())
      throw ConfigError("measure.path 'oracle' needs measure.noise_sim.tx_positions_m");
    if (cfg.ring.baselines_lambda.size() != 1)
      throw ConfigError("measure.path 'oracle' drives one receiver pair: configure exactly one "
                        "ring baseline");
    samples = measure_ring(cfg.measure.noise, cfg.measure.scatterers, cfg.ring, cfg.seed);
  }

  const fs::path path = out / "ring.ringcsv";
  write_ringcsv(path, samples);
  note_written(path);
}

void cmd_dataset(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  LabeledDataset data;

  if (cfg.dataset.synthetic) {
    PhantomDatasetConfig synth = *cfg.dataset.synthetic;
    synth.seed = cfg.seed;  // honor a --seed override
    data = generate_phantom_dataset(synth);
  }
  for (const auto& entry : cfg.dataset.imports) {
    const RingSampleSet ring = read_ringcsv(entry.ringcsv);
    if (ring.entries.size() < 2)
      throw SchemaError("RINGCSV: need at least 2 rows to extract features from " +
                        entry.ringcsv.string());
    data.rows.push_back({extract(ring), entry.positive, entry.source_id});
  }
  if (data.rows.empty())
    throw ConfigError("dataset: config declares neither dataset.synthetic nor dataset.import");

  // Descriptive magnitude column: whole-file normalizer. Evaluation refits
  // its own normalizer per training split and ignores this column.
  if (data.rows.size() >= 2) {
    const Normalizer norm = fit_on(data);
    for (auto& row : data.rows) row.features.magnitude = apply(norm, row.features).magnitude;
  }

  const fs::path path = out / "dataset.featcsv";
  write_featcsv(path, data);
  note_written(path);
}

void cmd_train(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const LabeledDataset raw = load_dataset(dataset_path_for(cfg, cfg.train.dataset_path));
  raw.require_both_classes();
  const Normalizer norm = fit_on(raw);
  const LabeledDataset data = normalize_all(norm, raw);

  TrainedModel model;
  model.normalizer = norm;
  const std::string& kind = cfg.train.classifier;
  if (kind == "threshold" || kind == "thr") {
    model.kind = "threshold";
    model.threshold = train_threshold(data);
  } else if (kind == "knn") {
    model.kind = "knn";
    model.knn = make_knn(data, cfg.train.knn_k);
  } else if (kind == "svm") {
    model.kind = "svm";
    if (cfg.train.svm.grid_search) {
      const GridSearchResult result =
          grid_search_svm(data, default_c_grid(), default_gamma_grid(), cfg.train.svm.folds,
                          objective_from(cfg.train.svm.objective));
      for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << '\n';
      model.svm = result.model;
    } else {
      model.svm = train_svm_rbf(data, cfg.train.svm.c, cfg.train.svm.gamma);
    }
  } else {
    throw ConfigError("train.classifier must be 'threshold', 'knn', or 'svm', got '" + kind + "'");
  }

  const fs::path path = out / "model.json";
  write_model(path, model);
  note_written(path);
}

void cmd_eval(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const LabeledDataset data = load_dataset(dataset_path_for(cfg, cfg.eval.dataset_path));

  std::vector<ClassifierSpec> specs = cfg.eval.classifiers;
  if (specs.empty()) {
    ClassifierSpec thr;
    thr.kind = ClassifierKind::threshold;
    ClassifierSpec knn;
    knn.kind = ClassifierKind::knn;
    knn.knn_k = 9;
    ClassifierSpec svm;
    svm.kind = ClassifierKind::svm;
    svm.svm_grid_search = true;
    specs = {thr, knn, svm};
  }

  const MonteCarloResult result = monte_carlo(data, specs, cfg.eval.iterations,
                                              cfg.eval.train_fraction, cfg.seed,
                                              cfg.eval.keep_points);

  const fs::path summary_path = out / "mc_summary.csv";
  {
    std::ofstream f(summary_path);
    if (!f) throw ConfigError("cannot open output file: " + summary_path.string());
    f << "classifier,iterations,accuracy_mean,accuracy_sigma,precision_mean,precision_sigma,"
         "recall_mean,recall_sigma,fpr_mean,fpr_sigma,f1_mean,f1_sigma,tp,fp,tn,fn\n";
    for (const auto& o : result.outcomes) {
      const MetricSet& mean = o.moments.mean;
      const MetricSet& sigma = o.moments.sigma;
      f << o.name << ',' << result.iterations << ',' << csv_opt(mean.accuracy) << ','
        << csv_opt(sigma.accuracy) << ',' << csv_opt(mean.precision) << ','
        << csv_opt(sigma.precision) << ',' << csv_opt(mean.recall) << ','
        << csv_opt(sigma.recall) << ',' << csv_opt(mean.fpr) << ',' << csv_opt(sigma.fpr) << ','
        << csv_opt(mean.f1) << ',' << csv_opt(sigma.f1) << ',' << o.pooled.tp << ','
        << o.pooled.fp << ',' << o.pooled.tn << ',' << o.pooled.fn << '\n';
    }
    if (!f) throw ConfigError("failed writing " + summary_path.string());
  }
  note_written(summary_path);

  if (cfg.eval.keep_points) {
    const fs::path points_path = out / "mc_points.csv";
    std::ofstream f(points_path);
    if (!f) throw ConfigError("cannot open output file: " + points_path.string());
    f << "classifier,iteration,fpr,tpr\n";
    for (const auto& o : result.outcomes) {
      for (std::size_t i = 0; i < o.points.size(); ++i)
        f << o.name << ',' << i << ',' << format_g17(o.points[i].fpr) << ','
          << format_g17(o.points[i].tpr) << '\n';
    }
    if (!f) throw ConfigError("failed writing " + points_path.string());
    note_written(points_path);

    const fs::path contours_path = out / "mc_contours.csv";
    std::ofstream g(contours_path);
    if (!g) throw ConfigError("cannot open output file: " + contours_path.string());
    g << "classifier,center_fpr,center_tpr,major_axis,minor_axis,angle_rad,degenerate\n";
    for (const auto& o : result.outcomes) {
      if (o.points.empty()) continue;
      const SigmaContour c = sigma_contour(o.points);
      g << o.name << ',' << format_g17(c.center.fpr) << ',' << format_g17(c.center.tpr) << ','
        << format_g17(c.major_axis) << ',' << format_g17(c.minor_axis) << ','
        << format_g17(c.angle_rad) << ',' << (c.degenerate ? 1 : 0) << '\n';
    }
    if (!g) throw ConfigError("failed writing " + contours_path.string());
    note_written(contours_path);
  }
}

void cmd_reconstruct(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const fs::path input = cfg.reconstruct.input.value_or(cfg.out_dir / "ring.ringcsv");
  RingSampleSet samples = read_ringcsv(input);
  if (samples.entries.empty()) throw SchemaError("RINGCSV: no data rows in " + input.string());
  if (cfg.reconstruct.hermitian) samples = hermitian_complete(samples);

  const int rows = cfg.reconstruct.rows;
  const int cols = cfg.reconstruct.cols;
  // Default spatial-frequency spacing is 2 per cell, i.e. half extents of
  // rows and cols; a 77-radius ring fits a 256-cell grid comfortably.
  const double u_half = cfg.reconstruct.u_half_extent.value_or(static_cast<double>(cols));
  const double v_half = cfg.reconstruct.v_half_extent.value_or(static_cast<double>(rows));
  const SampledVisibility sampled = grid_ring_samples(samples, rows, cols, u_half, v_half);
  const Reconstruction recon = inverse_reconstruct(sampled);

  const fs::path image_path = out / "recon.mwgrid";
  write_mwgrid(image_path, recon.image);
  note_written(image_path);

  const fs::path meta_path = out / "recon_meta.json";
  {
    std::ofstream f(meta_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + meta_path.string());
    f << "{\n  \"imag_peak_ratio\": " << json_float(recon.imag_peak_ratio)
      << ",\n  \"sampled_cells\": " << sampled.mask_count()
      << ",\n  \"grid_cells\": " << static_cast<long long>(rows) * cols << "\n}\n";
    if (!f) throw ConfigError("failed writing " + meta_path.string());
  }
  note_written(meta_path);
}

void cmd_ssim(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  if (!cfg.ssim.reference || !cfg.ssim.candidate)
    throw ConfigError("ssim needs ssim.reference and ssim.candidate paths");

  const auto load_real = [](const fs::path& p) {
    GridFile g = read_mwgrid(p);
    if (g.is_complex)
      throw SchemaError("ssim expects real (dtype=f64) grids, got c128 in " + p.string());
    return std::move(g.real);
  };
  RealGrid a = load_real(*cfg.ssim.reference);
  RealGrid b = load_real(*cfg.ssim.candidate);

  // Compare structure, not absolute scale: clamp to the zero floor and scale
  // by the peak so both images land in [0, 1]. Intensity is non-negative by
  // definition; dips below zero are reconstruction ripple, and anchoring the
  // floor at true zero keeps empty regions aligned between the images. An
  // image with no positive values maps to all zeros.
  const auto to_unit_range = [](RealGrid& g) {
    double hi = 0.0;
    for (double v : g.values) hi = std::max(hi, v);
    for (double& v : g.values) v = hi > 0.0 ? std::max(v, 0.0) / hi : 0.0;
  };
  to_unit_range(a);
  to_unit_range(b);

  const double score = ssim(a, b);
  const std::string body = "{\"ssim\": " + json_float(score) + "}";
  std::cout << body << '\n';

  const fs::path path = out / "ssim.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + path.string());
  f << body << '\n';
  if (!f) throw ConfigError("failed writing " + path.string());
  note_written(path);
}

void cmd_report(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const LabeledDataset raw = load_dataset(dataset_path_for(cfg, cfg.report.dataset_path));
  raw.require_both_classes();

  // ---- ROC on one deterministic split --------------------------------------
  const SplitResult split = stratified_split(raw, cfg.eval.train_fraction, derive_seed(cfg.seed, 0));
  const Normalizer norm = fit_on(split.train);
  const LabeledDataset train = normalize_all(norm, split.train);
  const LabeledDataset test = normalize_all(norm, split.test);

  std::vector<std::uint8_t> labels;
  labels.reserve(test.rows.size());
  for (const auto& r : test.rows) labels.push_back(r.positive ? 1 : 0);

  const ThresholdModel thr = train_threshold(train);
  const KnnModel knn = make_knn(train, cfg.train.knn_k);
  SvmRbfModel svm;
  if (cfg.train.svm.grid_search) {
    const GridSearchResult result =
        grid_search_svm(train, default_c_grid(), default_gamma_grid(), cfg.train.svm.folds,
                        objective_from(cfg.train.svm.objective));
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << '\n';
    svm = result.model;
  } else {
    svm = train_svm_rbf(train, cfg.train.svm.c, cfg.train.svm.gamma);
  }

  const fs::path roc_path = out / "roc.csv";
  {
    std::ofstream f(roc_path);
    if (!f) throw ConfigError("cannot open output file: " + roc_path.string());
    f << "classifier,fpr,tpr,threshold\n";

    // Hard threshold: a single operating point at the trained cut.
    ConfusionCounts counts;
    for (const auto& r : test.rows) {
      const double m = r.features.magnitude;
      const bool alarm = classify_threshold(thr, std::span<const double>(&m, 1));
      if (r.positive)
        alarm ? ++counts.tp : ++counts.fn;
      else
        alarm ? ++counts.fp : ++counts.tn;
    }
    const MetricSet ms = metrics(counts);
    f << "threshold," << csv_opt(ms.fpr) << ',' << csv_opt(ms.recall) << ','
      << format_g17(thr.threshold) << '\n';

    const auto sweep = [&](const char* name, const std::vector<double>& scores) {
      const RocCurve curve = roc_sweep(scores, labels);
      for (const auto& p : curve.points)
        f << name << ',' << format_g17(p.fpr) << ',' << format_g17(p.tpr) << ','
          << format_g17(p.threshold) << '\n';
    };
    std::vector<double> knn_scores, svm_scores;
    for (const auto& r : test.rows) {
      knn_scores.push_back(knn_positive_fraction(knn, r.features.as_array()));
      svm_scores.push_back(svm_decision(svm, r.features.as_array()));
    }
    sweep("knn", knn_scores);
    sweep("svm", svm_scores);
    if (!f) throw ConfigError("failed writing " + roc_path.string());
  }
  note_written(roc_path);

  // ---- timing ---------------------------------------------------------------
  // Simulated acquisition is a schedule ledger (dwell * steps), never measured;
  // the measured block is wall-clock compute on this machine and is the one
  // artifact allowed to differ between reruns.
  cfg.ring.validate();
  const RotationSchedule schedule = rotation_schedule(cfg.ring);
  const SceneIntensity scene =
      cfg.scene.shapes.empty() ? gun_shape_scene(cfg.geometry, 0.0) : build_scene(cfg);

  const int repeats = cfg.report.repeats;
  std::vector<double> vis_ms, feat_ms;
  RingSampleSet ring_for_features;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = clock_type::now();
    const VisibilityGrid vis = forward_visibility(scene);
    ring_for_features = sample_ring_from_visibility(ring_points(cfg.ring), vis);
    vis_ms.push_back(elapsed_ms(t0));
  }
  FeatureVector fv_example;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = clock_type::now();
    fv_example = extract(ring_for_features);
    feat_ms.push_back(elapsed_ms(t0));
  }
  volatile double feature_sink = fv_example.mean;  // keep the extraction observable
  (void)feature_sink;

  const Normalizer full_norm = fit_on(raw);
  const LabeledDataset full = normalize_all(full_norm, raw);
  const ThresholdModel thr_full = train_threshold(full);
  const KnnModel knn_full = make_knn(full, cfg.train.knn_k);
  const SvmRbfModel svm_full = cfg.train.svm.grid_search
                                   ? grid_search_svm(full, default_c_grid(), default_gamma_grid(),
                                                     cfg.train.svm.folds,
                                                     objective_from(cfg.train.svm.objective))
                                         .model
                                   : train_svm_rbf(full, cfg.train.svm.c, cfg.train.svm.gamma);

  volatile bool sink = false;  // keep the classify calls observable
  const auto time_classifier = [&](auto&& classify_row) {
    std::vector<double> per_call_ms;
    for (int i = 0; i < repeats; ++i) {
      const auto t0 = clock_type::now();
      for (const auto& r : full.rows) sink = sink ^ classify_row(r);
      per_call_ms.push_back(elapsed_ms(t0) / static_cast<double>(full.rows.size()));
    }
    return median_of(per_call_ms);
  };
  const double thr_ms = time_classifier([&](const LabeledRow& r) {
    const double m = r.features.magnitude;
    return classify_threshold(thr_full, std::span<const double>(&m, 1));
  });
  const double knn_ms = time_classifier(
      [&](const LabeledRow& r) { return classify_knn(knn_full, r.features.as_array()); });
  const double svm_ms = time_classifier(
      [&](const LabeledRow& r) { return classify_svm(svm_full, r.features.as_array()); });

  const fs::path timing_path = out / "timing.json";
  {
    std::ofstream f(timing_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + timing_path.string());
    f << "{\n";
    f << "  \"format\": \"ringscan-timing-v1\",\n";
    f << "  \"simulated\": {\n";
    f << "    \"dwell_s\": " << json_float(cfg.ring.dwell_s) << ",\n";
    f << "    \"samples_per_ring\": " << cfg.ring.samples_per_ring() << ",\n";
    f << "    \"ring_time_s\": " << json_float(schedule.ring_time_s) << ",\n";
    f << "    \"max_feasible_rate_rps\": " << json_float(schedule.max_feasible_rate_rps) << ",\n";
    f << "    \"commanded_rate_rps\": " << json_float(cfg.ring.rotation_rate_rps) << "\n";
    f << "  },\n";
    f << "  \"measured_ms\": {\n";
    f << "    \"visibility_per_ring\": " << json_float(median_of(vis_ms)) << ",\n";
    f << "    \"features_per_ring\": " << json_float(median_of(feat_ms)) << ",\n";
    f << "    \"inference_threshold\": " << json_float(thr_ms) << ",\n";
    f << "    \"inference_knn\": " << json_float(knn_ms) << ",\n";
    f << "    \"inference_svm\": " << json_float(svm_ms) << "\n";
    f << "  },\n";
    f << "  \"repeats\": " << repeats << "\n";
    f << "}\n";
    if (!f) throw ConfigError("failed writing " + timing_path.string());
  }
  note_written(timing_path);
}

}  // namespace ringscan::cli
