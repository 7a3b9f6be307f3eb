#include "ringscan/grid.hpp"

#include <stdexcept>

namespace ringscan {

std::vector<double> centered_axis(int n, double step) {
  if (n < 1) throw std::invalid_argument("centered_axis: n must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("centered_axis: step must be > 0");
  std::vector<double> axis(static_cast<std::size_t>(n));
  const int c = n / 2;
  for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = (i - c) * step;
  return axis;
}

}  // namespace ringscan
