#pragma once

namespace llmob {

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance in kilometers between two (lat, lon) points given in
// degrees. Symmetric, zero iff the points coincide.
double haversine_km(double lat_a, double lon_a, double lat_b, double lon_b);

}  // namespace llmob
