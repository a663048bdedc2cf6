#include "scope/trace.hpp"

#include <sstream>

#include <json.hpp>

#include "scope/errors.hpp"

namespace scope {

using json = nlohmann::json;

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Full: return "full";
        case Variant::NoFrontierImage: return "no_frontier_image";
        case Variant::NoPotentialGraph: return "no_potential_graph";
        case Variant::NoReconsideration: return "no_reconsideration";
        case Variant::RandomFrontier: return "random_frontier";
    }
    return "full";
}

Variant variant_from_name(const std::string& name) {
    if (name == "full") return Variant::Full;
    if (name == "no_frontier_image") return Variant::NoFrontierImage;
    if (name == "no_potential_graph") return Variant::NoPotentialGraph;
    if (name == "no_reconsideration") return Variant::NoReconsideration;
    if (name == "random_frontier") return Variant::RandomFrontier;
    throw ConfigError("unknown variant '" + name + "'");
}

namespace {

json goal_to_json(const GoalSpec& goal) {
    json j;
    switch (goal.kind) {
        case GoalKind::Category:
            j["kind"] = "category";
            j["category"] = goal.category;
            break;
        case GoalKind::Instance:
            j["kind"] = "instance";
            j["object"] = goal.object_id;
            break;
        case GoalKind::Description:
            j["kind"] = "description";
            j["attributes"] = goal.attributes;
            break;
    }
    return j;
}

GoalSpec goal_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "category") return GoalSpec::by_category(j.at("category").get<std::string>());
    if (kind == "instance") return GoalSpec::by_instance(j.at("object").get<int>());
    std::set<std::string> attrs;
    for (const auto& a : j.at("attributes")) attrs.insert(a.get<std::string>());
    return GoalSpec::by_description(std::move(attrs));
}

json action_to_json(const Action& a) {
    json j;
    if (a.kind == Action::Kind::Memory) {
        j["kind"] = "memory";
        j["snapshot"] = a.snapshot_index;
        j["object"] = a.object_id;
    } else {
        j["kind"] = "frontier";
        j["region"] = a.region_id;
    }
    return j;
}

Action action_from_json(const json& j) {
    if (j.at("kind").get<std::string>() == "memory")
        return Action::memory(j.at("snapshot").get<int>(), j.at("object").get<int>());
    return Action::frontier(j.at("region").get<int>());
}

json verdict_to_json(const Verdict& v) {
    json j;
    j["verdict"] = v.kind == VerdictKind::Confirm ? "CONFIRM" : "REJECT";
    j["confidence"] = v.confidence;
    if (!v.rationale.empty()) j["rationale"] = v.rationale;
    return j;
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.kind = j.at("verdict").get<std::string>() == "CONFIRM" ? VerdictKind::Confirm : VerdictKind::Reject;
    v.confidence = j.at("confidence").get<double>();
    if (j.contains("rationale")) v.rationale = j.at("rationale").get<std::string>();
    return v;
}

}  // namespace

std::string trace_to_jsonl(const EpisodeTrace& trace) {
    std::ostringstream out;

    json meta;
    meta["type"] = "meta";
    meta["artifact_version"] = kArtifactVersion;
    meta["scene_seed"] = trace.scene_seed;
    meta["variant"] = variant_name(trace.variant);
    meta["metric_seed"] = trace.metric_seed;
    out << meta.dump() << "\n";

    for (const auto& ev : trace.decisions) {
        json j;
        j["type"] = "decision";
        j["step"] = ev.step;
        j["subtask"] = ev.subtask;
        j["agent"] = {ev.agent_pos.x, ev.agent_pos.y};
        j["heading"] = ev.heading;
        json cands = json::array();
        for (const auto& c : ev.record.candidates) cands.push_back(action_to_json(c));
        j["candidates"] = std::move(cands);
        json verds = json::array();
        for (const auto& v : ev.record.verdicts) verds.push_back(verdict_to_json(v));
        j["verdicts"] = std::move(verds);
        j["final"] = action_to_json(ev.record.final_action);
        j["confidence"] = ev.record.confidence;
        j["forced"] = ev.record.forced;
        if (ev.truth.has_value()) j["truth"] = *ev.truth;
        json path = json::array();
        for (const Cell c : ev.path) path.push_back({c.row, c.col});
        j["path"] = std::move(path);
        json props = json::array();
        for (const auto& p : ev.propagations) {
            json jp;
            jp["region"] = p.region_id;
            jp["pos"] = {p.position.x, p.position.y};
            jp["vector"] = {p.vector.sem, p.vector.explore, p.vector.goal};
            jp["aggregate"] = p.aggregate;
            props.push_back(std::move(jp));
        }
        j["propagations"] = std::move(props);
        json scores = json::array();
        for (const auto& s : ev.frontier_scores) {
            json js;
            js["region"] = s.region_id;
            js["representative"] = {s.representative.row, s.representative.col};
            js["score"] = s.score;
            scores.push_back(std::move(js));
        }
        j["frontiers"] = std::move(scores);
        if (ev.estimator_fallbacks > 0) j["estimator_fallbacks"] = ev.estimator_fallbacks;
        out << j.dump() << "\n";
    }

    for (const auto& st : trace.subtasks) {
        json j;
        j["type"] = "subtask";
        j["index"] = st.index;
        j["goal"] = goal_to_json(st.goal);
        j["success"] = st.success;
        j["agent_path_length"] = st.agent_path_length;
        j["optimal_path_length"] = st.optimal_path_length;
        j["decisions"] = st.decisions;
        j["confidence"] = st.confidence;
        j["final_kind"] = st.final_kind;
        j["forced"] = st.forced;
        if (st.truth.has_value()) j["truth"] = *st.truth;
        out << j.dump() << "\n";
    }

    json tail;
    tail["type"] = "episode";
    tail["subtasks"] = trace.subtasks.size();
    tail["total_path_length"] = trace.total_path_length;
    tail["all_success"] = trace.all_success;
    out << tail.dump() << "\n";

    return out.str();
}

EpisodeTrace trace_from_jsonl(const std::string& text) {
    EpisodeTrace trace;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "meta") {
            trace.scene_seed = j.at("scene_seed").get<std::uint64_t>();
            trace.variant = variant_from_name(j.at("variant").get<std::string>());
            trace.metric_seed = j.at("metric_seed").get<std::uint64_t>();
        } else if (type == "decision") {
            DecisionEvent ev;
            ev.step = j.at("step").get<int>();
            ev.subtask = j.at("subtask").get<int>();
            ev.agent_pos = {j.at("agent")[0].get<double>(), j.at("agent")[1].get<double>()};
            ev.heading = j.at("heading").get<double>();
            ev.record.step = ev.step;
            for (const auto& c : j.at("candidates")) ev.record.candidates.push_back(action_from_json(c));
            for (const auto& v : j.at("verdicts")) ev.record.verdicts.push_back(verdict_from_json(v));
            ev.record.final_action = action_from_json(j.at("final"));
            ev.record.confidence = j.at("confidence").get<double>();
            ev.record.forced = j.at("forced").get<bool>();
            if (j.contains("truth")) ev.truth = j.at("truth").get<bool>();
            for (const auto& c : j.at("path")) ev.path.push_back({c[0].get<int>(), c[1].get<int>()});
            for (const auto& p : j.at("propagations")) {
                PropagationEvent pe;
                pe.region_id = p.at("region").get<int>();
                pe.position = {p.at("pos")[0].get<double>(), p.at("pos")[1].get<double>()};
                pe.vector = {p.at("vector")[0].get<double>(), p.at("vector")[1].get<double>(),
                             p.at("vector")[2].get<double>()};
                pe.aggregate = p.at("aggregate").get<double>();
                ev.propagations.push_back(pe);
            }
            for (const auto& s : j.at("frontiers")) {
                FrontierScoreEvent fe;
                fe.region_id = s.at("region").get<int>();
                fe.representative = {s.at("representative")[0].get<int>(),
                                     s.at("representative")[1].get<int>()};
                fe.score = s.at("score").get<double>();
                ev.frontier_scores.push_back(fe);
            }
            if (j.contains("estimator_fallbacks")) ev.estimator_fallbacks = j.at("estimator_fallbacks").get<int>();
            trace.decisions.push_back(std::move(ev));
        } else if (type == "subtask") {
            SubtaskResult st;
            st.index = j.at("index").get<int>();
            st.goal = goal_from_json(j.at("goal"));
            st.success = j.at("success").get<bool>();
            st.agent_path_length = j.at("agent_path_length").get<double>();
            st.optimal_path_length = j.at("optimal_path_length").get<double>();
            st.decisions = j.at("decisions").get<int>();
            st.confidence = j.at("confidence").get<double>();
            st.final_kind = j.at("final_kind").get<std::string>();
            st.forced = j.at("forced").get<bool>();
            if (j.contains("truth")) st.truth = j.at("truth").get<bool>();
            trace.subtasks.push_back(std::move(st));
        } else if (type == "episode") {
            trace.total_path_length = j.at("total_path_length").get<double>();
            trace.all_success = j.at("all_success").get<bool>();
        } else {
            throw ParseError("trace line " + std::to_string(lineno) + ": unknown record type '" + type + "'");
        }
    }
    return trace;
}

}  // namespace scope
