#include "beamspec/quadrature.hpp"

namespace beamspec {

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> xs(points());
  for (int j = 0; j <= intervals; ++j) xs[static_cast<std::size_t>(j)] = x(j);
  return xs;
}

}  // namespace beamspec
