#pragma once

#include <map>
#include <string>
#include <vector>

#include "llmob/ingest.hpp"
#include "llmob/types.hpp"

namespace llmob {

enum class TemplateId {
  pattern_generation,
  pattern_evaluation,
  evolving_motivation,
  learning_motivation,
  daily_generation,
  context_injection,
};

const char* template_name(TemplateId id);
TemplateId template_from_name(const std::string& name);

// Body text of a shipped template, placeholders written as "<INPUT n>".
const std::string& template_body(TemplateId id);

// Substitutes every occurrence of each bound placeholder. Bindings must
// cover exactly the placeholders present in the body; a missing or extra
// binding raises Error(config) listing the mismatch.
std::string render(TemplateId id, const std::map<int, std::string>& bindings);

// --- plain-text formatters feeding the templates ---

// "Name at H:MM, Name at H:MM" over a trajectory's steps; the same syntax
// the generation prompt asks for, so evaluation and generation stay
// mutually consistent.
std::string trajectory_plan_text(const DailyTrajectory& traj,
                                 const LocationCatalog& catalog,
                                 int interval_minutes = kDefaultIntervalMinutes);

// "Activities at YYYY-MM-DD: <plan text>" lines, one per trajectory.
std::string history_activities_text(const std::vector<DailyTrajectory>& trajs,
                                    const LocationCatalog& catalog,
                                    int interval_minutes = kDefaultIntervalMinutes);

// The habitual-day sentence per weekday/weekend segment (INPUT 2 of the
// pattern-generation prompt).
std::string prior_segment_text(const std::string& segment_name, const SegmentPrior& seg,
                               const LocationCatalog& catalog,
                               int interval_minutes = kDefaultIntervalMinutes);
std::string prior_text(const MobilityPrior& prior, const LocationCatalog& catalog,
                       int interval_minutes = kDefaultIntervalMinutes);

// "Name at HH:MM" over the top locations with their modal visiting time
// (INPUT 3 of the pattern-generation prompt).
std::string frequent_locations_with_times_text(const MobilityPrior& prior,
                                               const LocationCatalog& catalog,
                                               int interval_minutes = kDefaultIntervalMinutes);

// Comma-joined top-location names (INPUT 2 of the daily-generation prompt).
std::string frequent_locations_text(const MobilityPrior& prior,
                                    const LocationCatalog& catalog);

}  // namespace llmob
