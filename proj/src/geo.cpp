#include "llmob/geo.hpp"

#include <cmath>
#include <numbers>

namespace llmob {

double haversine_km(double lat_a, double lon_a, double lat_b, double lon_b) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi_a = lat_a * deg;
  const double phi_b = lat_b * deg;
  const double dphi = (lat_b - lat_a) * deg;
  const double dlam = (lon_b - lon_a) * deg;
  const double s = std::sin(dphi / 2.0);
  const double t = std::sin(dlam / 2.0);
  const double h = s * s + std::cos(phi_a) * std::cos(phi_b) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace llmob
