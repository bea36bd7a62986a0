#include "llmob/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>

#include "llmob/geo.hpp"

namespace llmob {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits one line on the delimiter; a field starting with '"' runs to the
// matching quote, with "" as an escaped quote.
std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool seen_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty() && !seen_quote) {
      quoted = true;
      seen_quote = true;
      field.clear();
    } else if (c == delim) {
      out.push_back(seen_quote ? field : trim(field));
      field.clear();
      seen_quote = false;
    } else {
      field += c;
    }
  }
  out.push_back(seen_quote ? field : trim(field));
  return out;
}

double parse_double_field(const std::string& s, const char* what, std::size_t line_no) {
  char* end = nullptr;
  const std::string t = trim(s);
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    raise(ErrorCode::parse, "line " + std::to_string(line_no) + ": unparseable " + what +
                                " \"" + s + "\"");
  }
  return v;
}

// "YYYY-MM-DD H:MM" with minute precision.
std::pair<Date, int> parse_timestamp(const std::string& s, std::size_t line_no) {
  const std::string t = trim(s);
  auto space = t.find(' ');
  if (space == std::string::npos) {
    raise(ErrorCode::parse,
          "line " + std::to_string(line_no) + ": unparseable timestamp \"" + s + "\"");
  }
  Date d;
  int h = 0, m = 0;
  char tail = 0;
  try {
    d = Date::parse(t.substr(0, space));
  } catch (const Error&) {
    raise(ErrorCode::parse,
          "line " + std::to_string(line_no) + ": unparseable timestamp \"" + s + "\"");
  }
  if (std::sscanf(t.c_str() + space + 1, "%d:%d%c", &h, &m, &tail) != 2 || h < 0 ||
      h > 23 || m < 0 || m > 59) {
    raise(ErrorCode::parse,
          "line " + std::to_string(line_no) + ": unparseable timestamp \"" + s + "\"");
  }
  return {d, h * 60 + m};
}

std::string site_key(const std::string& name, double lat, double lon, int decimals) {
  const double scale = std::pow(10.0, decimals);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "|%lld|%lld", (long long)std::llround(lat * scale),
                (long long)std::llround(lon * scale));
  return name + buf;
}

}  // namespace

std::vector<CheckIn> parse_checkins(std::istream& source, const CheckinFormat& format) {
  std::string line;
  if (!std::getline(source, line)) {
    raise(ErrorCode::parse, "empty input: missing header row");
  }
  const auto header = split_row(line, format.delimiter);
  std::vector<std::size_t> col_index(format.columns.size());
  if (header.size() != format.columns.size()) {
    raise(ErrorCode::parse, "header has " + std::to_string(header.size()) +
                                " columns, expected " +
                                std::to_string(format.columns.size()));
  }
  for (std::size_t c = 0; c < format.columns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), format.columns[c]);
    if (it == header.end()) {
      raise(ErrorCode::parse, "header missing column \"" + format.columns[c] + "\"");
    }
    col_index[c] = std::size_t(it - header.begin());
  }

  std::vector<CheckIn> out;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line, format.delimiter);
    if (fields.size() != format.columns.size()) {
      raise(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(format.columns.size()) +
                                  " fields, got " + std::to_string(fields.size()));
    }
    CheckIn c;
    c.user = fields[col_index[0]];
    c.lat = parse_double_field(fields[col_index[1]], "latitude", line_no);
    c.lon = parse_double_field(fields[col_index[2]], "longitude", line_no);
    c.name = fields[col_index[3]];
    c.category = fields[col_index[4]];
    if (c.lat < -90.0 || c.lat > 90.0 || c.lon < -180.0 || c.lon > 180.0) {
      raise(ErrorCode::parse, "line " + std::to_string(line_no) +
                                  ": coordinates out of range (" +
                                  std::to_string(c.lat) + ", " + std::to_string(c.lon) +
                                  ")");
    }
    auto [date, minute] = parse_timestamp(fields[col_index[5]], line_no);
    c.date = date;
    c.minute = minute;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CheckIn> clean_dataset(const std::vector<CheckIn>& checkins,
                                   const CleaningPolicy& policy,
                                   CleaningSummary* summary) {
  CleaningSummary local;
  local.input = checkins.size();

  // Bounding box.
  std::vector<CheckIn> boxed;
  boxed.reserve(checkins.size());
  for (const auto& c : checkins) {
    if (policy.bbox.contains(c.lat, c.lon)) {
      boxed.push_back(c);
    } else {
      ++local.outside_bbox;
    }
  }

  // Sudden moves: per user in time order, drop the later record of any pair
  // whose implied speed exceeds the threshold. A single forward pass against
  // the last retained record reaches the drop-later fixpoint.
  std::map<UserId, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < boxed.size(); ++i) by_user[boxed[i].user].push_back(i);
  std::vector<bool> keep(boxed.size(), true);
  for (auto& [user, idx] : by_user) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = boxed[a];
      const auto& y = boxed[b];
      if (x.date != y.date) return x.date < y.date;
      return x.minute < y.minute;
    });
    std::size_t last = std::size_t(-1);
    for (std::size_t i : idx) {
      if (last == std::size_t(-1)) {
        last = i;
        continue;
      }
      const auto& prev = boxed[last];
      const auto& cur = boxed[i];
      const double km = haversine_km(prev.lat, prev.lon, cur.lat, cur.lon);
      const double hours =
          double((cur.date.serial() - prev.date.serial()) * kMinutesPerDay +
                 (cur.minute - prev.minute)) /
          60.0;
      const bool violates =
          hours <= 0.0 ? km > 1e-9 : (km / hours) > policy.max_speed_kmh;
      if (violates) {
        keep[i] = false;
        ++local.sudden_move;
      } else {
        last = i;
      }
    }
  }
  std::vector<CheckIn> moved;
  moved.reserve(boxed.size());
  for (std::size_t i = 0; i < boxed.size(); ++i) {
    if (keep[i]) moved.push_back(boxed[i]);
  }

  // Completeness: drop records of (user, year) groups with too few distinct
  // active days. Runs last so a second clean_dataset pass is a no-op.
  std::map<std::pair<UserId, int>, std::set<int>> active_days;
  for (const auto& c : moved) {
    active_days[{c.user, c.date.year()}].insert(c.date.serial());
  }
  std::vector<CheckIn> out;
  out.reserve(moved.size());
  for (const auto& c : moved) {
    if (int(active_days[{c.user, c.date.year()}].size()) >=
        policy.min_active_days_per_year) {
      out.push_back(c);
    } else {
      ++local.incomplete_user_year;
    }
  }

  local.kept = out.size();
  if (summary) *summary = local;
  return out;
}

const LocationInfo& LocationCatalog::at(LocationId id) const {
  if (id >= entries_.size()) {
    raise(ErrorCode::data, "unknown location id " + std::to_string(id));
  }
  return entries_[id];
}

std::optional<LocationId> LocationCatalog::find_by_name(const std::string& canonical) const {
  auto it = by_name_.find(canonical);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<LocationId> LocationCatalog::resolve_site(const std::string& raw_name,
                                                        double lat, double lon) const {
  auto it = by_site_.find(site_key(raw_name, lat, lon, site_decimals_));
  if (it == by_site_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LocationCatalog::categories() const {
  std::set<std::string> cats;
  for (const auto& e : entries_) cats.insert(e.category);
  return {cats.begin(), cats.end()};
}

LocationCatalog build_location_catalog(const std::vector<CheckIn>& checkins,
                                       std::vector<CheckIn>* rejected,
                                       int site_decimals) {
  if (checkins.empty()) {
    raise(ErrorCode::data, "cannot build a location catalog from zero check-ins");
  }
  LocationCatalog cat;
  cat.site_decimals_ = site_decimals;

  struct Acc {
    std::string name, category;
    double lat_sum = 0, lon_sum = 0;
    int visits = 0;
    std::map<std::string, int> category_votes;
  };
  std::vector<Acc> sites;                      // discovery order
  std::map<std::string, std::size_t> by_site;  // site key -> index

  for (const auto& c : checkins) {
    if (c.name.empty() || c.category.empty()) {
      if (rejected) rejected->push_back(c);
      continue;
    }
    const std::string key = site_key(c.name, c.lat, c.lon, site_decimals);
    auto [it, inserted] = by_site.emplace(key, sites.size());
    if (inserted) sites.push_back({c.name, c.category, 0, 0, 0, {}});
    Acc& a = sites[it->second];
    a.lat_sum += c.lat;
    a.lon_sum += c.lon;
    a.visits += 1;
    a.category_votes[c.category] += 1;
  }
  if (sites.empty()) {
    raise(ErrorCode::data, "no catalog entries: every record lacked a name or category");
  }

  // Count name collisions to decide which canonical names need suffixes.
  std::map<std::string, int> name_sites;
  for (const auto& s : sites) name_sites[s.name] += 1;

  std::map<std::string, int> suffix_counter;
  for (const auto& s : sites) {
    LocationInfo info;
    info.id = LocationId(cat.entries_.size());
    if (name_sites[s.name] > 1) {
      info.name = s.name + " #" + std::to_string(++suffix_counter[s.name]);
    } else {
      info.name = s.name;
    }
    // Modal category, ties to the lexicographically smaller.
    int best = -1;
    for (const auto& [c, n] : s.category_votes) {
      if (n > best) {
        best = n;
        info.category = c;
      }
    }
    info.lat = s.lat_sum / s.visits;
    info.lon = s.lon_sum / s.visits;
    info.visits = s.visits;
    cat.by_name_.emplace(info.name, info.id);
    cat.entries_.push_back(std::move(info));
  }
  // Rebuild the site index against assigned ids.
  for (const auto& [key, idx] : by_site) cat.by_site_.emplace(key, LocationId(idx));
  return cat;
}

LocationCatalog catalog_from_entries(std::vector<LocationInfo> entries) {
  LocationCatalog cat;
  cat.entries_ = std::move(entries);
  for (const auto& e : cat.entries_) {
    if (e.id != LocationId(&e - cat.entries_.data())) {
      raise(ErrorCode::data, "catalog entries must be dense and ordered by id");
    }
    cat.by_name_.emplace(e.name, e.id);
  }
  return cat;
}

std::map<UserId, std::vector<DailyTrajectory>> segment_daily(
    const std::vector<CheckIn>& checkins, const LocationCatalog& catalog,
    int interval_minutes) {
  if (interval_minutes <= 0 || kMinutesPerDay % interval_minutes != 0) {
    raise(ErrorCode::config, "interval_minutes must divide 1440, got " +
                                 std::to_string(interval_minutes));
  }
  // (user, date, bin) -> (minute, loc); earliest check-in per bin wins.
  std::map<UserId, std::map<Date, std::map<int, std::pair<int, LocationId>>>> days;
  for (const auto& c : checkins) {
    auto loc = catalog.resolve_site(c.name, c.lat, c.lon);
    if (!loc) {
      raise(ErrorCode::data, "check-in not in catalog: user " + c.user + " \"" + c.name +
                                 "\" at " + c.date.iso());
    }
    const int bin = c.minute / interval_minutes;
    auto& slot = days[c.user][c.date];
    auto it = slot.find(bin);
    if (it == slot.end() || c.minute < it->second.first) {
      slot[bin] = {c.minute, *loc};
    }
  }
  std::map<UserId, std::vector<DailyTrajectory>> out;
  for (auto& [user, per_date] : days) {
    auto& trajs = out[user];
    for (auto& [date, bins] : per_date) {
      DailyTrajectory t;
      t.user = user;
      t.date = date;
      for (const auto& [bin, entry] : bins) t.steps.push_back({entry.second, bin});
      trajs.push_back(std::move(t));
    }
  }
  return out;
}

namespace {

// Mode of a list of (value, tiebreak-key) observations: highest count wins,
// then the smaller key.
template <class V>
V modal_value(const std::map<V, int>& counts) {
  V best{};
  int best_n = -1;
  for (const auto& [v, n] : counts) {
    if (n > best_n) {
      best = v;
      best_n = n;
    }
  }
  return best;
}

LocationId modal_location(const std::map<LocationId, int>& counts,
                          const LocationCatalog& catalog) {
  LocationId best = 0;
  int best_n = -1;
  for (const auto& [loc, n] : counts) {
    if (n > best_n ||
        (n == best_n && catalog.name(loc) < catalog.name(best))) {
      best = loc;
      best_n = n;
    }
  }
  return best;
}

}  // namespace

MobilityPrior extract_prior_info(const std::vector<DailyTrajectory>& trajectories,
                                 const LocationCatalog& catalog, int top_k,
                                 int interval_minutes) {
  if (trajectories.empty()) {
    raise(ErrorCode::data, "prior extraction needs at least one trajectory");
  }
  (void)interval_minutes;

  MobilityPrior prior;
  std::map<LocationId, int> global_visits;
  std::map<LocationId, std::map<int, int>> visit_bins;

  for (int weekend = 0; weekend <= 1; ++weekend) {
    std::vector<const DailyTrajectory*> days;
    for (const auto& t : trajectories) {
      if (t.date.is_weekend() == bool(weekend) && !t.steps.empty()) days.push_back(&t);
    }
    SegmentPrior seg;
    if (!days.empty()) {
      seg.present = true;
      double km_sum = 0.0;
      std::map<int, int> first_bins, last_bins;
      std::map<std::pair<int, int>, int> joint_bins;
      std::map<LocationId, int> first_locs, last_locs;
      for (const auto* t : days) {
        for (std::size_t i = 1; i < t->steps.size(); ++i) {
          const auto& a = catalog.at(t->steps[i - 1].loc);
          const auto& b = catalog.at(t->steps[i].loc);
          km_sum += haversine_km(a.lat, a.lon, b.lat, b.lon);
        }
        first_bins[t->steps.front().bin] += 1;
        last_bins[t->steps.back().bin] += 1;
        joint_bins[{t->steps.front().bin, t->steps.back().bin}] += 1;
        first_locs[t->steps.front().loc] += 1;
        last_locs[t->steps.back().loc] += 1;
      }
      seg.mean_daily_km = km_sum / double(days.size());
      seg.first_bin = modal_value(first_bins);
      seg.last_bin = modal_value(last_bins);
      if (seg.first_bin > seg.last_bin) {
        // Independent modes crossed; fall back to the modal (first, last)
        // day shape, which is ordered by construction.
        auto joint = modal_value(joint_bins);
        seg.first_bin = joint.first;
        seg.last_bin = joint.second;
      }
      seg.first_loc = modal_location(first_locs, catalog);
      seg.last_loc = modal_location(last_locs, catalog);
    }
    (weekend ? prior.weekend : prior.weekday) = seg;
  }

  for (const auto& t : trajectories) {
    for (const auto& s : t.steps) {
      global_visits[s.loc] += 1;
      visit_bins[s.loc][s.bin] += 1;
    }
  }
  std::vector<std::pair<LocationId, int>> ranked(global_visits.begin(),
                                                 global_visits.end());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return catalog.name(a.first) < catalog.name(b.first);
  });
  for (const auto& [loc, visits] : ranked) {
    if (int(prior.top_locations.size()) >= top_k) break;
    prior.top_locations.push_back({loc, visits, modal_value(visit_bins[loc])});
  }
  return prior;
}

}  // namespace llmob
