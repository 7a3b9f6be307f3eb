#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ringscan::detail {

namespace {

// One cached FFTW plan with its aligned buffer. Data is copied in and out so a
// plan can serve any caller array.
struct PlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t n = 0;

  PlanSlot() = default;
  PlanSlot(const PlanSlot&) = delete;
  PlanSlot& operator=(const PlanSlot&) = delete;
  ~PlanSlot() {
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

using PlanKey = std::tuple<int, int, int>;  // rows, cols (cols==0 for 1D), sign

std::map<PlanKey, PlanSlot>& plan_cache() {
  static std::map<PlanKey, PlanSlot> cache;
  return cache;
}

PlanSlot& get_plan(int rows, int cols, int sign) {
  auto& cache = plan_cache();
  const PlanKey key{rows, cols, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PlanSlot& slot = cache[key];
  slot.n = static_cast<std::size_t>(rows) * (cols > 0 ? cols : 1);
  slot.buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * slot.n));
  if (!slot.buf) throw std::runtime_error("fftw_malloc failed");
  // FFTW_FORWARD carries exponent sign -1, FFTW_BACKWARD +1; both unnormalized.
  const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
  slot.plan = cols > 0
                  ? fftw_plan_dft_2d(rows, cols, slot.buf, slot.buf, dir, FFTW_ESTIMATE)
                  : fftw_plan_dft_1d(rows, slot.buf, slot.buf, dir, FFTW_ESTIMATE);
  if (!slot.plan) throw std::runtime_error("fftw plan creation failed");
  return slot;
}

void run_plan(PlanSlot& slot, std::vector<std::complex<double>>& data) {
  if (data.size() != slot.n) throw std::invalid_argument("dft: data size mismatch");
  static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));
  // std::complex<double> is array-of-two-doubles compatible ([complex.numbers.general]).
  auto* raw = reinterpret_cast<double*>(data.data());
  std::memcpy(slot.buf, raw, sizeof(fftw_complex) * slot.n);
  fftw_execute(slot.plan);
  std::memcpy(raw, slot.buf, sizeof(fftw_complex) * slot.n);
}

}  // namespace

void dft2d_inplace(std::vector<std::complex<double>>& data, int rows, int cols, int sign) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("dft2d: bad dimensions");
  run_plan(get_plan(rows, cols, sign), data);
}

void dft1d_inplace(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) throw std::invalid_argument("dft1d: empty data");
  run_plan(get_plan(static_cast<int>(data.size()), 0, sign), data);
}

std::vector<std::complex<double>> to_dft_order(const std::vector<std::complex<double>>& in,
                                               int rows, int cols) {
  std::vector<std::complex<double>> out(in.size());
  const int rc = rows / 2, cc = cols / 2;
  for (int r = 0; r < rows; ++r) {
    const int sr = (r + rc) % rows;
    for (int c = 0; c < cols; ++c) {
      const int sc = (c + cc) % cols;
      out[static_cast<std::size_t>(r) * cols + c] = in[static_cast<std::size_t>(sr) * cols + sc];
    }
  }
  return out;
}

std::vector<std::complex<double>> from_dft_order(const std::vector<std::complex<double>>& in,
                                                 int rows, int cols) {
  std::vector<std::complex<double>> out(in.size());
  const int rc = rows / 2, cc = cols / 2;
  for (int r = 0; r < rows; ++r) {
    const int sr = (r + rc) % rows;
    for (int c = 0; c < cols; ++c) {
      const int sc = (c + cc) % cols;
      out[static_cast<std::size_t>(sr) * cols + sc] = in[static_cast<std::size_t>(r) * cols + c];
    }
  }
  return out;
}

}  // namespace ringscan::detail
