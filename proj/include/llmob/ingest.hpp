#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llmob/types.hpp"

namespace llmob {

// Column layout of the check-in file. The header row must contain exactly
// these names (any order); fields are comma-separated with optional quoting.
struct CheckinFormat {
  char delimiter = ',';
  std::vector<std::string> columns = {"UserID",        "Latitude", "Longitude",
                                      "Location Name", "Category", "Time"};
};

std::vector<CheckIn> parse_checkins(std::istream& source,
                                    const CheckinFormat& format = {});

struct BoundingBox {
  double min_lat = 20.0;
  double max_lat = 46.0;
  double min_lon = 122.0;
  double max_lon = 154.0;

  bool contains(double lat, double lon) const {
    return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
  }
};

struct CleaningPolicy {
  BoundingBox bbox;                      // study-region filter
  int min_active_days_per_year = 5;      // completeness rule
  double max_speed_kmh = 300.0;          // sudden-move filter
};

struct CleaningSummary {
  std::size_t input = 0;
  std::size_t outside_bbox = 0;
  std::size_t sudden_move = 0;
  std::size_t incomplete_user_year = 0;
  std::size_t kept = 0;
};

// Applies the bounding-box, sudden-move and completeness rules, in that
// order; completeness runs last so the pass is idempotent. The later record
// of any speed-violating pair is dropped.
std::vector<CheckIn> clean_dataset(const std::vector<CheckIn>& checkins,
                                   const CleaningPolicy& policy,
                                   CleaningSummary* summary = nullptr);

struct LocationInfo {
  LocationId id = 0;
  std::string name;      // canonical name, "#n"-suffixed when ambiguous
  std::string category;
  double lat = 0.0;      // mean of contributing records
  double lon = 0.0;
  int visits = 0;
};

// Catalog of distinct venues. A venue is a distinct (raw name, coordinates
// rounded to `site_decimals`) pair; duplicate names at distinct sites get
// canonical names "Name #1", "Name #2", ... in discovery order.
class LocationCatalog {
 public:
  const std::vector<LocationInfo>& entries() const { return entries_; }
  const LocationInfo& at(LocationId id) const;
  std::optional<LocationId> find_by_name(const std::string& canonical) const;
  std::optional<LocationId> resolve_site(const std::string& raw_name, double lat,
                                         double lon) const;
  const std::string& name(LocationId id) const { return at(id).name; }
  std::vector<std::string> categories() const;  // sorted, distinct
  std::size_t size() const { return entries_.size(); }

  int site_decimals() const { return site_decimals_; }

 private:
  friend LocationCatalog build_location_catalog(const std::vector<CheckIn>&,
                                                std::vector<CheckIn>*, int);
  friend LocationCatalog catalog_from_entries(std::vector<LocationInfo>);

  std::vector<LocationInfo> entries_;
  std::map<std::string, LocationId> by_name_;
  std::map<std::string, LocationId> by_site_;  // "name|rlat|rlon"
  int site_decimals_ = 3;
};

// Builds the catalog from cleaned check-ins. Records with an empty name or
// category are rejected from the catalog and appended to `rejected` when
// given. Throws Error(data) on empty input.
LocationCatalog build_location_catalog(const std::vector<CheckIn>& checkins,
                                       std::vector<CheckIn>* rejected = nullptr,
                                       int site_decimals = 3);

// Rebuilds a catalog from persisted entries (no site index; name lookups only).
LocationCatalog catalog_from_entries(std::vector<LocationInfo> entries);

// Groups check-ins into per-user daily trajectories at the given bin width.
// Within one bin the earliest check-in wins. Throws Error(data) when a
// check-in does not resolve in the catalog.
std::map<UserId, std::vector<DailyTrajectory>> segment_daily(
    const std::vector<CheckIn>& checkins, const LocationCatalog& catalog,
    int interval_minutes = kDefaultIntervalMinutes);

struct SegmentPrior {
  bool present = false;
  double mean_daily_km = 0.0;
  int first_bin = 0;  // modal first-activity bin
  int last_bin = 0;   // modal last-activity bin
  LocationId first_loc = 0;
  LocationId last_loc = 0;
};

struct FrequentLocation {
  LocationId loc = 0;
  int visits = 0;
  int modal_bin = 0;
};

// Habitual-prior features for one person: weekday/weekend typical day shape
// plus the globally most-visited locations with their modal visiting bins.
struct MobilityPrior {
  SegmentPrior weekday;
  SegmentPrior weekend;
  std::vector<FrequentLocation> top_locations;  // sorted by descending visits
};

MobilityPrior extract_prior_info(const std::vector<DailyTrajectory>& trajectories,
                                 const LocationCatalog& catalog, int top_k = 5,
                                 int interval_minutes = kDefaultIntervalMinutes);

}  // namespace llmob
