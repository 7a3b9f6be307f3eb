#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "ringscan/errors.hpp"
#include "ringscan/io.hpp"

static_assert(std::endian::native == std::endian::little,
              "grid payloads are little-endian; big-endian hosts are unsupported");

namespace ringscan {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

constexpr std::string_view kRingHeader = "k,gamma_deg,u,v,re,im,baseline_lambda";
constexpr std::string_view kModelFormat = "ringscan-model-v1";

std::string featcsv_header() {
  std::string h;
  for (const char* name : FeatureVector::names()) {
    h += name;
    h += ',';
  }
  h += "magnitude,label,source_id";
  return h;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw ConfigError("cannot open output file: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  if (!std::filesystem::exists(path))
    throw MissingInputError("missing input file: " + path.string());
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw MissingInputError("cannot read input file: " + path.string());
  return f;
}

double parse_double(std::string_view text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw SchemaError("cannot parse number '" + std::string(text) + "' in " + where);
  return v;
}

long long parse_int(std::string_view text, const std::string& where) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw SchemaError("cannot parse integer '" + std::string(text) + "' in " + where);
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// ---------------------------------------------------------------------------
// MWGRID
// ---------------------------------------------------------------------------

void write_mwgrid_header(std::ofstream& f, const char* dtype, int rows, int cols,
                         const std::vector<double>& axis0, const std::vector<double>& axis1) {
  f << "MWGRID1\n";
  f << "dtype=" << dtype << '\n';
  f << "rows=" << rows << '\n';
  f << "cols=" << cols << '\n';
  f << "axis0=" << format_g17(axis0.front()) << ' ' << format_g17(axis0.back()) << '\n';
  f << "axis1=" << format_g17(axis1.front()) << ' ' << format_g17(axis1.back()) << '\n';
  f << '\n';
}

template <typename Grid>
void check_grid_for_write(const Grid& grid) {
  if (grid.rows < 1 || grid.cols < 1) throw std::invalid_argument("grid write: empty grid");
  const auto cells = static_cast<std::size_t>(grid.rows) * static_cast<std::size_t>(grid.cols);
  if (grid.values.size() != cells || grid.row_axis.size() != static_cast<std::size_t>(grid.rows) ||
      grid.col_axis.size() != static_cast<std::size_t>(grid.cols))
    throw std::invalid_argument("grid write: inconsistent grid dimensions");
}

std::vector<double> reconstruct_axis(double lo, double hi, int n, const std::string& which) {
  if (n == 1) {
    if (lo != hi) throw SchemaError("MWGRID " + which + ": single-sample axis with lo != hi");
    return {lo};
  }
  if (!(hi > lo)) throw SchemaError("MWGRID " + which + ": axis max must exceed min");
  std::vector<double> axis(static_cast<std::size_t>(n));
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = lo + i * step;
  axis.front() = lo;  // keep the written endpoints exact for byte-stable re-saves
  axis.back() = hi;
  return axis;
}

struct MwgridHeader {
  std::string dtype;
  int rows = 0;
  int cols = 0;
  double a0_lo = 0.0, a0_hi = 0.0, a1_lo = 0.0, a1_hi = 0.0;
};

std::string expect_line(std::istream& f, const char* what) {
  std::string line;
  if (!std::getline(f, line)) throw SchemaError(std::string("MWGRID: truncated header at ") + what);
  return strip_cr(std::move(line));
}

std::string expect_field(std::istream& f, const char* key) {
  const std::string line = expect_line(f, key);
  const std::string prefix = std::string(key) + "=";
  if (line.rfind(prefix, 0) != 0)
    throw SchemaError("MWGRID: expected '" + prefix + "...', got '" + line + "'");
  return line.substr(prefix.size());
}

MwgridHeader read_mwgrid_header(std::istream& f) {
  const std::string magic = expect_line(f, "magic");
  if (magic != "MWGRID1") throw SchemaError("unknown grid format tag '" + magic + "'");
  MwgridHeader h;
  h.dtype = expect_field(f, "dtype");
  if (h.dtype != "f64" && h.dtype != "c128")
    throw SchemaError("MWGRID: unknown dtype '" + h.dtype + "'");
  h.rows = static_cast<int>(parse_int(expect_field(f, "rows"), "MWGRID rows"));
  h.cols = static_cast<int>(parse_int(expect_field(f, "cols"), "MWGRID cols"));
  if (h.rows < 1 || h.cols < 1) throw SchemaError("MWGRID: rows and cols must be >= 1");
  for (const char* key : {"axis0", "axis1"}) {
    const std::string text = expect_field(f, key);
    const std::size_t space = text.find(' ');
    if (space == std::string::npos)
      throw SchemaError(std::string("MWGRID: ") + key + " needs '<min> <max>'");
    const double lo = parse_double(std::string_view(text).substr(0, space), key);
    const double hi = parse_double(std::string_view(text).substr(space + 1), key);
    if (std::strcmp(key, "axis0") == 0) {
      h.a0_lo = lo;
      h.a0_hi = hi;
    } else {
      h.a1_lo = lo;
      h.a1_hi = hi;
    }
  }
  const std::string blank = expect_line(f, "separator");
  if (!blank.empty()) throw SchemaError("MWGRID: expected blank line before payload");
  return h;
}

void read_payload(std::istream& f, void* dst, std::size_t bytes) {
  f.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(f.gcount()) != bytes)
    throw SchemaError("MWGRID: payload shorter than rows*cols declares");
  char probe;
  if (f.read(&probe, 1); f.gcount() != 0)
    throw SchemaError("MWGRID: trailing bytes after declared payload");
}

}  // namespace

void write_mwgrid(const std::filesystem::path& path, const RealGrid& grid) {
  check_grid_for_write(grid);
  auto f = open_out(path, true);
  write_mwgrid_header(f, "f64", grid.rows, grid.cols, grid.row_axis, grid.col_axis);
  f.write(reinterpret_cast<const char*>(grid.values.data()),
          static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
  if (!f) throw ConfigError("failed writing " + path.string());
}

void write_mwgrid(const std::filesystem::path& path, const ComplexGrid& grid) {
  check_grid_for_write(grid);
  auto f = open_out(path, true);
  write_mwgrid_header(f, "c128", grid.rows, grid.cols, grid.row_axis, grid.col_axis);
  f.write(reinterpret_cast<const char*>(grid.values.data()),
          static_cast<std::streamsize>(grid.values.size() * sizeof(cplx)));
  if (!f) throw ConfigError("failed writing " + path.string());
}

GridFile read_mwgrid(const std::filesystem::path& path) {
  auto f = open_in(path, true);
  const MwgridHeader h = read_mwgrid_header(f);
  const auto cells = static_cast<std::size_t>(h.rows) * static_cast<std::size_t>(h.cols);

  GridFile out;
  out.is_complex = h.dtype == "c128";
  if (out.is_complex) {
    out.complex.rows = h.rows;
    out.complex.cols = h.cols;
    out.complex.values.resize(cells);
    read_payload(f, out.complex.values.data(), cells * sizeof(cplx));
    out.complex.row_axis = reconstruct_axis(h.a0_lo, h.a0_hi, h.rows, "axis0");
    out.complex.col_axis = reconstruct_axis(h.a1_lo, h.a1_hi, h.cols, "axis1");
  } else {
    out.real.rows = h.rows;
    out.real.cols = h.cols;
    out.real.values.resize(cells);
    read_payload(f, out.real.values.data(), cells * sizeof(double));
    out.real.row_axis = reconstruct_axis(h.a0_lo, h.a0_hi, h.rows, "axis0");
    out.real.col_axis = reconstruct_axis(h.a1_lo, h.a1_hi, h.cols, "axis1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// RINGCSV
// ---------------------------------------------------------------------------

void write_ringcsv(const std::filesystem::path& path, const RingSampleSet& samples) {
  auto f = open_out(path, false);
  f << kRingHeader << '\n';
  for (const auto& s : samples.entries) {
    const double gamma_deg = s.angle_rad * 180.0 / std::numbers::pi;
    f << s.k << ',' << format_g17(gamma_deg) << ',' << format_g17(s.u) << ',' << format_g17(s.v)
      << ',' << format_g17(s.value.real()) << ',' << format_g17(s.value.imag()) << ','
      << format_g17(s.baseline_lambda) << '\n';
  }
  if (!f) throw ConfigError("failed writing " + path.string());
}

RingSampleSet read_ringcsv(const std::filesystem::path& path) {
  auto f = open_in(path, false);
  std::string line;
  if (!std::getline(f, line)) throw SchemaError("RINGCSV: empty file " + path.string());
  line = strip_cr(std::move(line));
  if (line != kRingHeader)
    throw SchemaError("RINGCSV: header mismatch, expected '" + std::string(kRingHeader) +
                      "', got '" + line + "'");
  RingSampleSet set;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = "RINGCSV line " + std::to_string(line_no);
    if (fields.size() != 7)
      throw SchemaError(where + ": expected 7 columns, got " + std::to_string(fields.size()));
    RingSample s;
    s.k = static_cast<int>(parse_int(fields[0], where + " column k"));
    const double gamma_deg = parse_double(fields[1], where + " column gamma_deg");
    s.angle_rad = gamma_deg * std::numbers::pi / 180.0;
    s.u = parse_double(fields[2], where + " column u");
    s.v = parse_double(fields[3], where + " column v");
    const double re = parse_double(fields[4], where + " column re");
    const double im = parse_double(fields[5], where + " column im");
    s.value = cplx{re, im};
    s.baseline_lambda = parse_double(fields[6], where + " column baseline_lambda");
    set.entries.push_back(s);
  }
  return set;
}

// ---------------------------------------------------------------------------
// FEATCSV
// ---------------------------------------------------------------------------

void write_featcsv(const std::filesystem::path& path, const LabeledDataset& data) {
  auto f = open_out(path, false);
  f << featcsv_header() << '\n';
  for (const auto& row : data.rows) {
    if (row.source_id.find_first_of(",\"\r\n") != std::string::npos)
      throw std::invalid_argument("FEATCSV: source_id contains CSV metacharacters: " +
                                  row.source_id);
    for (const double v : row.features.as_array()) f << format_g17(v) << ',';
    f << format_g17(row.features.magnitude) << ',' << (row.positive ? '1' : '0') << ','
      << row.source_id << '\n';
  }
  if (!f) throw ConfigError("failed writing " + path.string());
}

LabeledDataset read_featcsv(const std::filesystem::path& path) {
  auto f = open_in(path, false);
  std::string line;
  if (!std::getline(f, line)) throw SchemaError("FEATCSV: empty file " + path.string());
  line = strip_cr(std::move(line));
  const std::string expected = featcsv_header();
  if (line != expected)
    throw SchemaError("FEATCSV: header mismatch, expected '" + expected + "', got '" + line + "'");

  LabeledDataset data;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = "FEATCSV line " + std::to_string(line_no);
    if (fields.size() != kFeatureCount + 3)
      throw SchemaError(where + ": expected " + std::to_string(kFeatureCount + 3) +
                        " columns, got " + std::to_string(fields.size()));
    std::array<double, kFeatureCount> a{};
    for (int i = 0; i < kFeatureCount; ++i)
      a[static_cast<std::size_t>(i)] =
          parse_double(fields[static_cast<std::size_t>(i)],
                       where + " column " + FeatureVector::names()[static_cast<std::size_t>(i)]);
    LabeledRow row;
    row.features = FeatureVector::from_array(a);
    row.features.magnitude = parse_double(fields[kFeatureCount], where + " column magnitude");
    const std::string_view label = fields[kFeatureCount + 1];
    if (label == "1")
      row.positive = true;
    else if (label == "0")
      row.positive = false;
    else
      throw SchemaError(where + ": column label must be 0 or 1, got '" + std::string(label) + "'");
    row.source_id = std::string(fields[kFeatureCount + 2]);
    data.rows.push_back(std::move(row));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Model JSON
// ---------------------------------------------------------------------------

namespace {

std::string json_number(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("model write: non-finite number");
  return format_g17(v);
}

template <typename Seq, typename Fn>
std::string json_array(const Seq& seq, Fn&& element) {
  std::string out = "[";
  bool first = true;
  for (const auto& v : seq) {
    if (!first) out += ",";
    first = false;
    out += element(v);
  }
  out += "]";
  return out;
}

std::string json_point(const std::array<double, kFeatureCount>& p) {
  return json_array(p, [](double v) { return json_number(v); });
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError("model JSON: " + what);
}

std::array<double, kFeatureCount> point_from_json(const nlohmann::json& j) {
  require(j.is_array() && j.size() == kFeatureCount,
          "feature point must be an array of " + std::to_string(kFeatureCount));
  std::array<double, kFeatureCount> p{};
  for (int i = 0; i < kFeatureCount; ++i) {
    require(j[static_cast<std::size_t>(i)].is_number(), "feature point entries must be numbers");
    p[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return p;
}

}  // namespace

void write_model(const std::filesystem::path& path, const TrainedModel& model) {
  if (model.kind != "threshold" && model.kind != "knn" && model.kind != "svm")
    throw std::invalid_argument("model write: unknown kind '" + model.kind + "'");

  std::string body;
  body += "{\n";
  body += "  \"format\": \"" + std::string(kModelFormat) + "\",\n";
  body += "  \"kind\": \"" + model.kind + "\",\n";
  body += "  \"normalizer\": {\n";
  body += "    \"lo\": " + json_array(model.normalizer.lo, json_number) + ",\n";
  body += "    \"hi\": " + json_array(model.normalizer.hi, json_number) + ",\n";
  body += "    \"degenerate\": " +
          json_array(model.normalizer.degenerate,
                     [](bool b) { return std::string(b ? "true" : "false"); }) +
          "\n  },\n";
  if (model.kind == "threshold") {
    body += "  \"threshold\": {\n";
    body += "    \"threshold\": " + json_number(model.threshold.threshold) + ",\n";
    body += "    \"positive_above\": " +
            std::string(model.threshold.positive_above ? "true" : "false") + ",\n";
    body += "    \"train_balanced_accuracy\": " +
            json_number(model.threshold.train_balanced_accuracy) + "\n  }\n";
  } else if (model.kind == "knn") {
    body += "  \"knn\": {\n";
    body += "    \"k\": " + std::to_string(model.knn.k) + ",\n";
    body += "    \"labels\": " +
            json_array(model.knn.labels,
                       [](std::uint8_t b) { return std::string(b ? "1" : "0"); }) +
            ",\n";
    body += "    \"points\": " + json_array(model.knn.points, json_point) + "\n  }\n";
  } else {
    body += "  \"svm\": {\n";
    body += "    \"c\": " + json_number(model.svm.c) + ",\n";
    body += "    \"gamma\": " + json_number(model.svm.gamma) + ",\n";
    body += "    \"bias\": " + json_number(model.svm.bias) + ",\n";
    body += "    \"smo_steps\": " + std::to_string(model.svm.smo_steps) + ",\n";
    body += "    \"dual_objective\": " + json_number(model.svm.dual_objective) + ",\n";
    body += "    \"alpha_y\": " + json_array(model.svm.alpha_y, json_number) + ",\n";
    body += "    \"support_vectors\": " + json_array(model.svm.support_vectors, json_point) +
            "\n  }\n";
  }
  body += "}\n";

  auto f = open_out(path, true);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw ConfigError("failed writing " + path.string());
}

TrainedModel read_model(const std::filesystem::path& path) {
  auto f = open_in(path, false);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("model JSON: parse failure in " + path.string() + ": " + e.what());
  }
  require(j.is_object(), "top level must be an object");
  require(j.contains("format") && j["format"].is_string(), "missing string field 'format'");
  const std::string format = j["format"].get<std::string>();
  if (format != kModelFormat)
    throw SchemaError("model JSON: unknown format '" + format + "', expected '" +
                      std::string(kModelFormat) + "'");
  require(j.contains("kind") && j["kind"].is_string(), "missing string field 'kind'");

  TrainedModel model;
  model.kind = j["kind"].get<std::string>();
  require(j.contains("normalizer") && j["normalizer"].is_object(), "missing 'normalizer'");
  const auto& norm = j["normalizer"];
  for (const char* key : {"lo", "hi", "degenerate"}) {
    require(norm.contains(key) && norm[key].is_array() && norm[key].size() == kFeatureCount,
            std::string("normalizer.") + key + " must be an array of " +
                std::to_string(kFeatureCount));
  }
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    model.normalizer.lo[idx] = norm["lo"][idx].get<double>();
    model.normalizer.hi[idx] = norm["hi"][idx].get<double>();
    model.normalizer.degenerate[idx] = norm["degenerate"][idx].get<bool>();
  }

  if (model.kind == "threshold") {
    require(j.contains("threshold") && j["threshold"].is_object(), "missing 'threshold' section");
    const auto& t = j["threshold"];
    require(t.contains("threshold") && t["threshold"].is_number(), "threshold.threshold");
    require(t.contains("positive_above") && t["positive_above"].is_boolean(),
            "threshold.positive_above");
    model.threshold.threshold = t["threshold"].get<double>();
    model.threshold.positive_above = t["positive_above"].get<bool>();
    if (t.contains("train_balanced_accuracy"))
      model.threshold.train_balanced_accuracy = t["train_balanced_accuracy"].get<double>();
  } else if (model.kind == "knn") {
    require(j.contains("knn") && j["knn"].is_object(), "missing 'knn' section");
    const auto& k = j["knn"];
    require(k.contains("k") && k["k"].is_number_integer(), "knn.k must be an integer");
    require(k.contains("labels") && k["labels"].is_array(), "knn.labels must be an array");
    require(k.contains("points") && k["points"].is_array(), "knn.points must be an array");
    require(k["labels"].size() == k["points"].size(), "knn.labels and knn.points length mismatch");
    model.knn.k = k["k"].get<int>();
    for (const auto& lab : k["labels"]) {
      require(lab.is_number_integer(), "knn.labels entries must be 0 or 1");
      const int v = lab.get<int>();
      require(v == 0 || v == 1, "knn.labels entries must be 0 or 1");
      model.knn.labels.push_back(static_cast<std::uint8_t>(v));
    }
    for (const auto& pt : k["points"]) model.knn.points.push_back(point_from_json(pt));
    require(model.knn.k >= 1 && static_cast<std::size_t>(model.knn.k) <= model.knn.points.size(),
            "knn.k out of range for the stored points");
  } else if (model.kind == "svm") {
    require(j.contains("svm") && j["svm"].is_object(), "missing 'svm' section");
    const auto& s = j["svm"];
    for (const char* key : {"c", "gamma", "bias"})
      require(s.contains(key) && s[key].is_number(), std::string("svm.") + key);
    require(s.contains("alpha_y") && s["alpha_y"].is_array(), "svm.alpha_y must be an array");
    require(s.contains("support_vectors") && s["support_vectors"].is_array(),
            "svm.support_vectors must be an array");
    require(s["alpha_y"].size() == s["support_vectors"].size(),
            "svm.alpha_y and svm.support_vectors length mismatch");
    require(!s["alpha_y"].empty(), "svm model must keep at least one support vector");
    model.svm.c = s["c"].get<double>();
    model.svm.gamma = s["gamma"].get<double>();
    model.svm.bias = s["bias"].get<double>();
    if (s.contains("smo_steps")) model.svm.smo_steps = s["smo_steps"].get<int>();
    if (s.contains("dual_objective"))
      model.svm.dual_objective = s["dual_objective"].get<double>();
    for (const auto& a : s["alpha_y"]) {
      require(a.is_number(), "svm.alpha_y entries must be numbers");
      model.svm.alpha_y.push_back(a.get<double>());
    }
    for (const auto& pt : s["support_vectors"])
      model.svm.support_vectors.push_back(point_from_json(pt));
  } else {
    throw SchemaError("model JSON: unknown kind '" + model.kind + "'");
  }
  return model;
}

}  // namespace ringscan
