#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scope/estimator.hpp"
#include "scope/policy.hpp"

namespace scope {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Variant { Full, NoFrontierImage, NoPotentialGraph, NoReconsideration, RandomFrontier };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct PropagationEvent {
    int region_id = 0;
    Vec2 position;
    PotentialVector vector;
    double aggregate = 0.0;
};

struct FrontierScoreEvent {
    int region_id = 0;
    Cell representative;
    double score = 0.0;
};

/// One decision step: the reconsideration record plus everything the step
/// changed — executed path cells, graph propagations, frontier scores.
struct DecisionEvent {
    int step = 0;
    int subtask = 0;
    Vec2 agent_pos;
    double heading = 0.0;
    DecisionRecord record;
    std::vector<Cell> path;
    std::vector<PropagationEvent> propagations;
    std::vector<FrontierScoreEvent> frontier_scores;
    std::optional<bool> truth;  // memory finals: did execution satisfy the goal
    int estimator_fallbacks = 0;
};

struct SubtaskResult {
    int index = 0;
    GoalSpec goal;
    bool success = false;
    double agent_path_length = 0.0;
    double optimal_path_length = 0.0;
    int decisions = 0;
    double confidence = 0.0;
    std::string final_kind;  // memory | frontier_timeout | no_action | estimator_error
    bool forced = false;
    std::optional<bool> truth;
};

struct EpisodeTrace {
    std::uint64_t scene_seed = 0;
    Variant variant = Variant::Full;
    std::uint64_t metric_seed = 0;
    std::vector<DecisionEvent> decisions;
    std::vector<SubtaskResult> subtasks;
    double total_path_length = 0.0;
    bool all_success = false;
};

/// JSON Lines round trip: a meta record, one record per decision step, one
/// per subtask, and a closing episode record. Field names are stable; see
/// README for the schema.
std::string trace_to_jsonl(const EpisodeTrace& trace);
EpisodeTrace trace_from_jsonl(const std::string& text);

}  // namespace scope
