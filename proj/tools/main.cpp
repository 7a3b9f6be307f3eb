#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ringscan/errors.hpp"

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << "{\"error\": {\"kind\": \"" << kind << "\", \"message\": \""
            << json_escape(message) << "\"}}\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Imageless concealed-object screening pipeline: synthetic scenes, rotating-baseline "
      "spatial-frequency sampling, arithmetic features, and classifier evaluation."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string path_mode;
  std::string classifier;
  long long iters = 0;

  app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed override");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory override");
  auto* path_opt =
      app.add_option("--path", path_mode, "Measurement path override: analytic | oracle")
          ->check(CLI::IsMember({"analytic", "oracle"}));
  auto* cls_opt =
      app.add_option("--classifier", classifier, "Classifier override: thr | knn | svm")
          ->check(CLI::IsMember({"thr", "knn", "svm"}));
  auto* iters_opt = app.add_option("--iters", iters, "Monte-Carlo iteration override")
                        ->check(CLI::PositiveNumber);

  app.add_subcommand("scene", "Rasterize the configured scene to scene.mwgrid");
  app.add_subcommand("measure", "Sample one ring of spatial-frequency values to ring.ringcsv");
  app.add_subcommand("dataset",
                     "Generate/import labeled feature rows to dataset.featcsv");
  app.add_subcommand("train", "Train one classifier on dataset.featcsv, write model.json");
  app.add_subcommand("eval", "Monte-Carlo evaluation of classifiers, write mc_summary.csv");
  app.add_subcommand("reconstruct",
                     "Grid ring samples and invert them to recon.mwgrid (privacy audit)");
  app.add_subcommand("ssim", "Structural similarity of two real grids, write ssim.json");
  app.add_subcommand("report", "Timing JSON and ROC CSV for the configured pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  try {
    ringscan::cli::RunConfig cfg =
        config_path.empty() ? ringscan::cli::default_config() : ringscan::cli::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.out_dir = out_dir;
    if (*path_opt) cfg.measure.path = path_mode;
    if (*cls_opt) cfg.train.classifier = classifier;
    if (*iters_opt) cfg.eval.iterations = static_cast<std::size_t>(iters);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "scene")
      ringscan::cli::cmd_scene(cfg);
    else if (name == "measure")
      ringscan::cli::cmd_measure(cfg);
    else if (name == "dataset")
      ringscan::cli::cmd_dataset(cfg);
    else if (name == "train")
      ringscan::cli::cmd_train(cfg);
    else if (name == "eval")
      ringscan::cli::cmd_eval(cfg);
    else if (name == "reconstruct")
      ringscan::cli::cmd_reconstruct(cfg);
    else if (name == "ssim")
      ringscan::cli::cmd_ssim(cfg);
    else if (name == "report")
      ringscan::cli::cmd_report(cfg);
    return 0;
  } catch (const ringscan::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const ringscan::MissingInputError& e) {
    return fail("missing_input", e.what(), 3);
  } catch (const ringscan::SchemaError& e) {
    return fail("schema", e.what(), 4);
  } catch (const ringscan::TrainingError& e) {
    return fail("training", e.what(), 1);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), 2);
  } catch (const std::domain_error& e) {
    return fail("config", e.what(), 2);
  } catch (const std::out_of_range& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
}
