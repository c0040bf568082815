#include "blockopt/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blockopt {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double expected_improvement(double mu, double sigma, double best) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("expected_improvement: sigma must be >= 0");
  if (sigma == 0.0) return std::max(best - mu, 0.0);
  const double gamma = (best - mu) / sigma;
  return std::max(0.0, sigma * (gamma * normal_cdf(gamma) + normal_pdf(gamma)));
}

}  // namespace blockopt
