#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ringscan/dataset.hpp"
#include "ringscan/features.hpp"
#include "ringscan/rng.hpp"
#include "ringscan/visibility.hpp"

namespace ringscan {

void PhantomDatasetConfig::validate() const {
  if (per_class < 2) throw std::invalid_argument("dataset: per_class must be >= 2");
  geometry.validate();
  ring.validate();
  if (scene_rows < 2 || scene_cols < 2)
    throw std::invalid_argument("dataset: scene grid must be at least 2x2");
  if (!(half_extent > 0.0) || half_extent > 1.0)
    throw std::invalid_argument("dataset: half_extent must lie in (0, 1]");
  if (!(torso_width_m > 0.0) || !(torso_height_m > 0.0))
    throw std::invalid_argument("dataset: torso dimensions must be > 0");
  if (!(torso_amplitude > 0.0)) throw std::invalid_argument("dataset: torso amplitude must be > 0");
  if (position_jitter < 0.0 || tilt_sigma_rad < 0.0 || size_jitter_frac < 0.0 ||
      motion_scale_sigma < 0.0)
    throw std::invalid_argument("dataset: jitter sigmas must be >= 0");
  if (std::isnan(sample_snr_db)) throw std::invalid_argument("dataset: sample_snr_db is NaN");
}

namespace {

// One measurement: rasterize the posed phantom, transform, walk the ring,
// degrade, and reduce to features. Draw order from the per-measurement engine
// is fixed: body pose (centre, tilt, sizes), per-part slack (rotation and
// reflectivity, four parts), carried-item poses (two items), then target pose
// and reflectivity (positive class only), then motion degradation.
FeatureVector measure_once(const PhantomDatasetConfig& cfg, bool with_target,
                           std::mt19937_64& engine) {
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);

  const double center_l = cfg.position_jitter * unit(engine);
  const double center_m = cfg.position_jitter * unit(engine);
  const double tilt = cfg.tilt_sigma_rad * unit(engine);
  const double w_scale = std::exp(cfg.size_jitter_frac * unit(engine));
  const double h_scale = std::exp(cfg.size_jitter_frac * unit(engine));

  // Multi-part body: torso, head, and two arms, sized relative to the torso.
  // Each part gets its own pose slack and reflectivity spread so the negative
  // class carries edge energy at several orientations, like a real person.
  const double body_w = cfg.torso_width_m * w_scale;
  const double body_h = cfg.torso_height_m * h_scale;
  const double ct = std::cos(tilt), st = std::sin(tilt);

  struct Part {
    double w, h, dx, dy;  // metres, offsets in the body frame
  };
  const Part parts[] = {
      {body_w, body_h, 0.0, 0.0},
      {0.40 * body_w, 0.35 * body_h, 0.0, 0.62 * body_h},
      {0.18 * body_w, 0.85 * body_h, -0.68 * body_w, -0.05 * body_h},
      {0.18 * body_w, 0.85 * body_h, 0.68 * body_w, -0.05 * body_h},
  };

  const auto signed_dc = [&](double metres) {
    const double dc = physical_to_direction_cosine(std::abs(metres), cfg.geometry);
    return metres < 0.0 ? -dc : dc;
  };

  std::vector<ShapeSpec> shapes;
  for (const Part& p : parts) {
    ShapeSpec s;
    s.kind = ShapeKind::rectangle;
    const double dx = ct * p.dx - st * p.dy;
    const double dy = st * p.dx + ct * p.dy;
    s.center_l = center_l + signed_dc(dx);
    s.center_m = center_m + signed_dc(dy);
    s.width = physical_to_direction_cosine(p.w, cfg.geometry);
    s.height = physical_to_direction_cosine(p.h, cfg.geometry);
    s.rotation_rad = tilt + 0.5 * cfg.tilt_sigma_rad * unit(engine);
    s.amplitude = cfg.torso_amplitude * std::exp(0.10 * unit(engine));
    shapes.push_back(s);
  }

  // Everyday carried items, worn by BOTH classes: a phone-sized slab and a
  // buckle-sized strip at random pose and reflectivity. Negatives therefore
  // own bright compact returns of their own; an isolated strong echo does not
  // mark a target, only the long-edge signature below does.
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const auto carry_item = [&](double w_m, double h_m) {
    ShapeSpec s;
    s.kind = ShapeKind::rectangle;
    s.center_l = center_l + signed_dc(0.30 * body_w * sym(engine));
    s.center_m = center_m + signed_dc(0.30 * body_h * sym(engine));
    s.width = physical_to_direction_cosine(w_m, cfg.geometry);
    s.height = physical_to_direction_cosine(h_m, cfg.geometry);
    s.rotation_rad = turn(engine);
    s.amplitude = 1.7 * cfg.torso_amplitude * std::exp(0.10 * unit(engine));
    shapes.push_back(s);
  };
  carry_item(0.14, 0.07);
  carry_item(0.10, 0.025);

  if (with_target) {
    const double dl = cfg.position_jitter * unit(engine);
    const double dm = cfg.position_jitter * unit(engine);
    const double orientation = turn(engine);
    // Concealed hard object: barrel plus grip as two thin specular strips at
    // a random orientation. Thin bright strips maximize edge signature per
    // unit footprint, so the ring's angular structure changes sharply while
    // the total reflected power moves very little relative to the body. The
    // strip reflectivity varies measurement to measurement (aspect angle).
    const double contrast =
        3.0 * shapes.front().amplitude * std::exp(0.10 * unit(engine));
    const double go = orientation;
    const double gl = center_l + dl, gm = center_m + dm;
    const auto strip = [&](double w_m, double h_m, double off_x_m, double off_y_m) {
      ShapeSpec s;
      s.kind = ShapeKind::rectangle;
      const double ox = std::cos(go) * off_x_m - std::sin(go) * off_y_m;
      const double oy = std::sin(go) * off_x_m + std::cos(go) * off_y_m;
      s.center_l = gl + signed_dc(ox);
      s.center_m = gm + signed_dc(oy);
      s.width = physical_to_direction_cosine(w_m, cfg.geometry);
      s.height = physical_to_direction_cosine(h_m, cfg.geometry);
      s.rotation_rad = go;
      s.amplitude = contrast;
      return s;
    };
    shapes.push_back(strip(0.30, 0.030, 0.0, 0.0));
    shapes.push_back(strip(0.030, 0.14, -0.10, -0.07));
  }

  const SceneIntensity scene =
      make_scene(cfg.scene_rows, cfg.scene_cols, cfg.half_extent, cfg.half_extent, shapes);
  const VisibilityGrid vis = forward_visibility(scene);
  RingSampleSet ring = sample_ring_from_visibility(ring_points(cfg.ring), vis);

  // Unresolved subject motion within the acquisition rescales the coherent
  // gain of the whole ring (lognormal: smooth, heavy-ish upper tail, so no
  // deterministic gain ceiling separates the classes).
  if (cfg.motion_scale_sigma > 0.0) {
    const double scale = std::exp(cfg.motion_scale_sigma * unit(engine));
    for (auto& entry : ring.entries) entry.value *= scale;
  }

  if (std::isfinite(cfg.sample_snr_db)) {
    double power = 0.0;
    for (const auto& entry : ring.entries) power += std::norm(entry.value);
    power /= static_cast<double>(ring.entries.size());
    if (power == 0.0) power = 1.0;
    const double sigma_component =
        std::sqrt(power * std::pow(10.0, -cfg.sample_snr_db / 10.0) / 2.0);
    for (auto& entry : ring.entries) {
      const double re = sigma_component * unit(engine);
      const double im = sigma_component * unit(engine);
      entry.value += cplx{re, im};
    }
  }

  return extract(ring);
}

}  // namespace

LabeledDataset generate_phantom_dataset(const PhantomDatasetConfig& config) {
  config.validate();
  LabeledDataset data;
  data.rows.reserve(2 * config.per_class);
  for (int cls = 0; cls < 2; ++cls) {
    const bool positive = cls == 1;
    for (std::size_t i = 0; i < config.per_class; ++i) {
      const std::uint64_t stream = static_cast<std::uint64_t>(cls) * config.per_class + i;
      auto engine = make_engine(config.seed, stream);
      std::ostringstream id;
      id << (positive ? "pos_" : "neg_") << i;
      data.rows.push_back({measure_once(config, positive, engine), positive, id.str()});
    }
  }
  return data;
}

}  // namespace ringscan
