#pragma once

#include <filesystem>
#include <string>

#include "ringscan/classify.hpp"
#include "ringscan/dynarray.hpp"
#include "ringscan/grid.hpp"

namespace ringscan {

// ---------------------------------------------------------------------------
// MWGRID: self-describing binary grid container.
//
//   MWGRID1
//   dtype=f64 | c128
//   rows=<n>
//   cols=<n>
//   axis0=<min> <max>        (row axis)
//   axis1=<min> <max>        (column axis)
//   <blank line>
//   row-major little-endian IEEE-754 payload, 8 (f64) or 16 (c128) bytes/cell
//
// Readers reject unknown magics and dtypes instead of guessing.
// ---------------------------------------------------------------------------

struct GridFile {
  bool is_complex = false;
  RealGrid real;          // filled when !is_complex
  ComplexGrid complex;    // filled when is_complex
};

void write_mwgrid(const std::filesystem::path& path, const RealGrid& grid);
void write_mwgrid(const std::filesystem::path& path, const ComplexGrid& grid);
GridFile read_mwgrid(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// RINGCSV: one ring measurement per row.
// Header: k,gamma_deg,u,v,re,im,baseline_lambda  (floats at 17 sig. digits)
// ---------------------------------------------------------------------------

void write_ringcsv(const std::filesystem::path& path, const RingSampleSet& samples);
RingSampleSet read_ringcsv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// FEATCSV: one labeled feature row per measurement.
// Header: the 11 feature names, then magnitude,label,source_id.
// The magnitude column is descriptive (computed against a normalizer fitted
// to the whole file by the writer of the dataset); evaluation refits its
// normalizer on each training split and ignores this column's provenance.
// Unset magnitudes round-trip as the sentinel -1.
// ---------------------------------------------------------------------------

void write_featcsv(const std::filesystem::path& path, const LabeledDataset& data);
LabeledDataset read_featcsv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Trained-model JSON ("format": "ringscan-model-v1"): one classifier plus the
// feature normalizer it expects, written with 17-significant-digit numbers so
// decisions survive a save/load round trip bit-exactly.
// ---------------------------------------------------------------------------

struct TrainedModel {
  std::string kind;  // "threshold" | "knn" | "svm"
  Normalizer normalizer;
  ThresholdModel threshold;
  KnnModel knn;
  SvmRbfModel svm;
};

void write_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel read_model(const std::filesystem::path& path);

// Formats a double with 17 significant digits (shortest lossless form used
// across every text format in this project).
std::string format_g17(double value);

}  // namespace ringscan
