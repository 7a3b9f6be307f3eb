#pragma once

#include <complex>
#include <vector>

namespace ringscan {

using cplx = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform axis centred on zero: value(i) = (i - n/2) * step.
/// For even n the axis spans [-n/2*step, (n/2-1)*step]; for odd n it is symmetric.
std::vector<double> centered_axis(int n, double step);

/// Row-major real-valued grid with explicit axes. row_axis has `rows` entries,
/// col_axis has `cols` entries; both uniform and strictly increasing.
struct RealGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  std::vector<double> row_axis;
  std::vector<double> col_axis;

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double row_step() const { return rows > 1 ? row_axis[1] - row_axis[0] : 0.0; }
  double col_step() const { return cols > 1 ? col_axis[1] - col_axis[0] : 0.0; }
};

/// Complex-valued counterpart of RealGrid.
struct ComplexGrid {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> values;
  std::vector<double> row_axis;
  std::vector<double> col_axis;

  cplx& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  cplx at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double row_step() const { return rows > 1 ? row_axis[1] - row_axis[0] : 0.0; }
  double col_step() const { return cols > 1 ? col_axis[1] - col_axis[0] : 0.0; }
};

}  // namespace ringscan
