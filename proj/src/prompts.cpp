#include "llmob/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "llmob/prompt_assets.gen.hpp"

namespace llmob {

namespace {

struct TemplateEntry {
  TemplateId id;
  const char* name;
  const char* body;
};

const TemplateEntry kTemplates[] = {
    {TemplateId::pattern_generation, "pattern_generation", assets::pattern_generation},
    {TemplateId::pattern_evaluation, "pattern_evaluation", assets::pattern_evaluation},
    {TemplateId::evolving_motivation, "evolving_motivation", assets::evolving_motivation},
    {TemplateId::learning_motivation, "learning_motivation", assets::learning_motivation},
    {TemplateId::daily_generation, "daily_generation", assets::daily_generation},
    {TemplateId::context_injection, "context_injection", assets::context_injection},
};

std::string placeholder(int n) { return "<INPUT " + std::to_string(n) + ">"; }

std::set<int> placeholders_in(const std::string& body) {
  std::set<int> found;
  std::size_t pos = 0;
  while ((pos = body.find("<INPUT ", pos)) != std::string::npos) {
    std::size_t num_start = pos + 7;
    std::size_t num_end = num_start;
    while (num_end < body.size() && std::isdigit(static_cast<unsigned char>(body[num_end])))
      ++num_end;
    if (num_end > num_start && num_end < body.size() && body[num_end] == '>') {
      found.insert(std::stoi(body.substr(num_start, num_end - num_start)));
    }
    pos = num_start;
  }
  return found;
}

}  // namespace

const char* template_name(TemplateId id) {
  for (const auto& t : kTemplates) {
    if (t.id == id) return t.name;
  }
  raise(ErrorCode::internal, "unknown template id");
}

TemplateId template_from_name(const std::string& name) {
  for (const auto& t : kTemplates) {
    if (name == t.name) return t.id;
  }
  raise(ErrorCode::config, "unknown template name \"" + name + "\"");
}

const std::string& template_body(TemplateId id) {
  static const std::map<TemplateId, std::string> bodies = [] {
    std::map<TemplateId, std::string> m;
    for (const auto& t : kTemplates) m.emplace(t.id, t.body);
    return m;
  }();
  return bodies.at(id);
}

std::string render(TemplateId id, const std::map<int, std::string>& bindings) {
  const std::string& body = template_body(id);
  const std::set<int> wanted = placeholders_in(body);

  std::string missing, extra;
  for (int n : wanted) {
    if (!bindings.count(n)) missing += (missing.empty() ? "" : ", ") + placeholder(n);
  }
  for (const auto& [n, _] : bindings) {
    if (!wanted.count(n)) extra += (extra.empty() ? "" : ", ") + placeholder(n);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "binding mismatch for template " +
                      std::string(template_name(id));
    if (!missing.empty()) msg += "; missing: " + missing;
    if (!extra.empty()) msg += "; extra: " + extra;
    raise(ErrorCode::config, msg);
  }

  std::string out = body;
  for (const auto& [n, value] : bindings) {
    const std::string marker = placeholder(n);
    std::size_t pos = 0;
    while ((pos = out.find(marker, pos)) != std::string::npos) {
      out.replace(pos, marker.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::string trajectory_plan_text(const DailyTrajectory& traj,
                                 const LocationCatalog& catalog, int interval_minutes) {
  std::string out;
  for (const auto& s : traj.steps) {
    if (!out.empty()) out += ", ";
    out += catalog.name(s.loc) + " at " + minute_to_hmm(s.bin * interval_minutes);
  }
  return out;
}

std::string history_activities_text(const std::vector<DailyTrajectory>& trajs,
                                    const LocationCatalog& catalog,
                                    int interval_minutes) {
  std::string out;
  for (const auto& t : trajs) {
    if (!out.empty()) out += "\n";
    out += "Activities at " + t.date.iso() + ": " +
           trajectory_plan_text(t, catalog, interval_minutes);
  }
  return out;
}

std::string prior_segment_text(const std::string& segment_name, const SegmentPrior& seg,
                               const LocationCatalog& catalog, int interval_minutes) {
  const int km = int(std::floor(seg.mean_daily_km));
  return "During " + segment_name + ", you usually travel over " + std::to_string(km) +
         " kilometers a day, you usually begin your daily trip at " +
         minute_to_hhmm(seg.first_bin * interval_minutes) +
         " and end your daily trip at " +
         minute_to_hhmm(seg.last_bin * interval_minutes) + ". you usually visit " +
         catalog.name(seg.first_loc) + " at the beginning of the day and go to " +
         catalog.name(seg.last_loc) + " before returning home.";
}

std::string prior_text(const MobilityPrior& prior, const LocationCatalog& catalog,
                       int interval_minutes) {
  std::string out;
  if (prior.weekday.present) {
    out += prior_segment_text("weekday", prior.weekday, catalog, interval_minutes);
  }
  if (prior.weekend.present) {
    if (!out.empty()) out += " ";
    out += prior_segment_text("weekend", prior.weekend, catalog, interval_minutes);
  }
  return out;
}

std::string frequent_locations_with_times_text(const MobilityPrior& prior,
                                               const LocationCatalog& catalog,
                                               int interval_minutes) {
  std::string out;
  for (const auto& f : prior.top_locations) {
    if (!out.empty()) out += ", ";
    out += catalog.name(f.loc) + " at " + minute_to_hhmm(f.modal_bin * interval_minutes);
  }
  return out;
}

std::string frequent_locations_text(const MobilityPrior& prior,
                                    const LocationCatalog& catalog) {
  std::string out;
  for (const auto& f : prior.top_locations) {
    if (!out.empty()) out += ", ";
    out += catalog.name(f.loc);
  }
  return out;
}

}  // namespace llmob
