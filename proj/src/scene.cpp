#include "scope/scene.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "scope/rng.hpp"

namespace scope {

using json = nlohmann::json;

namespace {

constexpr const char* kCategories[] = {"chair", "table", "sofa",  "bed",
                                       "plant", "lamp",  "shelf", "sink"};
constexpr const char* kColors[] = {"red", "blue", "green", "white", "black"};
constexpr const char* kMaterials[] = {"wood", "metal", "fabric"};

constexpr int kPlacementRetryLimit = 1000;
constexpr int kMinRoomExtent = 2;  // interior cells per side of a room

struct Rect {
    int row0, col0, rows, cols;
    int area() const { return rows * cols; }
};

}  // namespace

GoalSpec GoalSpec::by_category(std::string cat) {
    GoalSpec g;
    g.kind = GoalKind::Category;
    g.category = std::move(cat);
    return g;
}

GoalSpec GoalSpec::by_instance(int id) {
    GoalSpec g;
    g.kind = GoalKind::Instance;
    g.object_id = id;
    return g;
}

GoalSpec GoalSpec::by_description(std::set<std::string> attrs) {
    GoalSpec g;
    g.kind = GoalKind::Description;
    g.attributes = std::move(attrs);
    return g;
}

std::string GoalSpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case GoalKind::Category:
            out << "category:" << category;
            break;
        case GoalKind::Instance:
            out << "instance:#" << object_id;
            break;
        case GoalKind::Description: {
            out << "description:[";
            bool first = true;
            for (const auto& a : attributes) {
                if (!first) out << ",";
                out << a;
                first = false;
            }
            out << "]";
            break;
        }
    }
    return out.str();
}

const ObjectInstance* SceneMap::object_by_id(int id) const {
    for (const auto& obj : objects) {
        if (obj.id == id) return &obj;
    }
    return nullptr;
}

bool object_matches_goal(const GoalSpec& goal, const ObjectInstance& obj) {
    switch (goal.kind) {
        case GoalKind::Category:
            return obj.category == goal.category;
        case GoalKind::Instance:
            return obj.id == goal.object_id;
        case GoalKind::Description:
            return std::includes(obj.attributes.begin(), obj.attributes.end(),
                                 goal.attributes.begin(), goal.attributes.end());
    }
    return false;
}

std::set<std::string> goal_target_categories(const SceneMap& map, const GoalSpec& goal) {
    std::set<std::string> cats;
    switch (goal.kind) {
        case GoalKind::Category:
            cats.insert(goal.category);
            break;
        case GoalKind::Instance:
            if (const auto* obj = map.object_by_id(goal.object_id)) cats.insert(obj->category);
            break;
        case GoalKind::Description:
            for (const auto& obj : map.objects) {
                if (object_matches_goal(goal, obj)) cats.insert(obj.category);
            }
            break;
    }
    return cats;
}

bool goal_satisfied(const SceneMap& map, const GoalSpec& goal, const Vec2& agent_pos,
                    double success_distance) {
    for (const auto& obj : map.objects) {
        if (!object_matches_goal(goal, obj)) continue;
        if (distance(agent_pos, map.center(obj.position)) <= success_distance) return true;
    }
    return false;
}

Grid2D<int> bfs_distances(const SceneMap& map, Cell start) {
    Grid2D<int> dist(map.width, map.height, -1);
    if (!map.is_free(start)) return dist;
    std::deque<Cell> queue{start};
    dist.at(start) = 0;
    while (!queue.empty()) {
        const Cell cur = queue.front();
        queue.pop_front();
        for (const Cell d : kNeighbors4) {
            const Cell next = offset(cur, d);
            if (!map.is_free(next) || dist.at(next) != -1) continue;
            dist.at(next) = dist.at(cur) + 1;
            queue.push_back(next);
        }
    }
    return dist;
}

double optimal_path_length(const SceneMap& map, Cell start, const GoalSpec& goal,
                           double success_distance) {
    const Grid2D<int> dist = bfs_distances(map, start);
    int best = -1;
    for (int r = 0; r < map.height; ++r) {
        for (int c = 0; c < map.width; ++c) {
            const Cell cell{r, c};
            if (dist.at(cell) < 0) continue;
            if (!goal_satisfied(map, goal, map.center(cell), success_distance)) continue;
            if (best < 0 || dist.at(cell) < best) best = dist.at(cell);
        }
    }
    return best < 0 ? -1.0 : best * map.cell_size;
}

void validate_scene(const SceneMap& map) {
    if (map.width < 8 || map.height < 8) throw InvariantViolation("grid smaller than 8 cells per side");
    if (map.cell_size <= 0.0) throw InvariantViolation("cell_size must be positive");
    if (map.occupancy.width() != map.width || map.occupancy.height() != map.height)
        throw InvariantViolation("occupancy dimensions mismatch");
    if (!map.is_free(map.spawn)) throw InvariantViolation("spawn on occupied cell");

    std::set<int> ids;
    for (const auto& obj : map.objects) {
        if (!ids.insert(obj.id).second) throw InvariantViolation("duplicate object id");
        if (obj.category.empty()) throw InvariantViolation("empty object category");
        if (!map.is_free(obj.position)) throw InvariantViolation("object on occupied cell");
    }

    const Grid2D<int> dist = bfs_distances(map, map.spawn);
    for (const auto& obj : map.objects) {
        if (dist.at(obj.position) < 0) throw InvariantViolation("object unreachable from spawn");
    }

    for (const auto& goal : map.goals) {
        switch (goal.kind) {
            case GoalKind::Category:
                if (goal.category.empty()) throw InvariantViolation("category goal with empty category");
                break;
            case GoalKind::Instance:
                if (map.object_by_id(goal.object_id) == nullptr)
                    throw InvariantViolation("instance goal references unknown object id");
                break;
            case GoalKind::Description: {
                if (goal.attributes.empty())
                    throw InvariantViolation("description goal with empty attribute set");
                const bool any = std::any_of(map.objects.begin(), map.objects.end(),
                                             [&](const auto& o) { return object_matches_goal(goal, o); });
                if (!any) throw InvariantViolation("description goal matches no object");
                break;
            }
        }
    }
}

// --- generation ---------------------------------------------------------

namespace {

// Splits the largest splittable room until `rooms` rooms exist, drawing a
// wall across it with a 1-2 cell doorway. Every split keeps both halves at
// least kMinRoomExtent cells across, so the partition stays traversable.
std::vector<Rect> partition_rooms(Grid2D<Terrain>& occ, int rooms, Rng& rng) {
    std::vector<Rect> leaves{{1, 1, occ.height() - 2, occ.width() - 2}};
    while (static_cast<int>(leaves.size()) < rooms) {
        int pick = -1;
        for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
            const Rect& r = leaves[i];
            const bool splittable = r.rows >= 2 * kMinRoomExtent + 1 || r.cols >= 2 * kMinRoomExtent + 1;
            if (!splittable) continue;
            if (pick < 0 || r.area() > leaves[pick].area() ||
                (r.area() == leaves[pick].area() &&
                 std::pair{r.row0, r.col0} < std::pair{leaves[pick].row0, leaves[pick].col0}))
                pick = i;
        }
        if (pick < 0) throw GenerationFailed("cannot partition grid into requested rooms");

        const Rect r = leaves[pick];
        const bool can_h = r.rows >= 2 * kMinRoomExtent + 1;
        const bool can_v = r.cols >= 2 * kMinRoomExtent + 1;
        bool horizontal;  // wall along a row
        if (can_h && can_v)
            horizontal = r.rows != r.cols ? r.rows > r.cols : rng.bernoulli(0.5);
        else
            horizontal = can_h;

        if (horizontal) {
            const int off = static_cast<int>(rng.uniform_int(kMinRoomExtent, r.rows - 1 - kMinRoomExtent));
            const int wall_row = r.row0 + off;
            for (int c = r.col0; c < r.col0 + r.cols; ++c) occ.at({wall_row, c}) = Terrain::Wall;
            const int door_w = std::min<int>(1 + static_cast<int>(rng.uniform_int(0, 1)), r.cols);
            const int door_c = r.col0 + static_cast<int>(rng.uniform_int(0, r.cols - door_w));
            for (int c = door_c; c < door_c + door_w; ++c) occ.at({wall_row, c}) = Terrain::Free;
            leaves[pick] = {r.row0, r.col0, off, r.cols};
            leaves.push_back({wall_row + 1, r.col0, r.rows - off - 1, r.cols});
        } else {
            const int off = static_cast<int>(rng.uniform_int(kMinRoomExtent, r.cols - 1 - kMinRoomExtent));
            const int wall_col = r.col0 + off;
            for (int row = r.row0; row < r.row0 + r.rows; ++row) occ.at({row, wall_col}) = Terrain::Wall;
            const int door_w = std::min<int>(1 + static_cast<int>(rng.uniform_int(0, 1)), r.rows);
            const int door_r = r.row0 + static_cast<int>(rng.uniform_int(0, r.rows - door_w));
            for (int row = door_r; row < door_r + door_w; ++row) occ.at({row, wall_col}) = Terrain::Free;
            leaves[pick] = {r.row0, r.col0, r.rows, off};
            leaves.push_back({r.row0, wall_col + 1, r.rows, r.cols - off - 1});
        }
    }
    std::sort(leaves.begin(), leaves.end(),
              [](const Rect& a, const Rect& b) { return std::pair{a.row0, a.col0} < std::pair{b.row0, b.col0}; });
    return leaves;
}

}  // namespace

SceneMap generate_scene(std::uint64_t seed, const GenParams& params) {
    if (params.size < 8) throw GenerationFailed("size below 8 cells per side");
    if (params.rooms < 1) throw GenerationFailed("rooms must be positive");
    if (params.objects_per_room < 1) throw GenerationFailed("objects_per_room must be positive");
    if (params.goals < 1) throw GenerationFailed("at least one goal required");
    if (params.cell_size <= 0.0) throw GenerationFailed("cell_size must be positive");

    Rng rng{seed, 0x5ce9eull};

    SceneMap map;
    map.width = params.size;
    map.height = params.size;
    map.cell_size = params.cell_size;
    map.occupancy = Grid2D<Terrain>(params.size, params.size, Terrain::Free);
    for (int r = 0; r < params.size; ++r) {
        for (int c = 0; c < params.size; ++c) {
            if (r == 0 || c == 0 || r == params.size - 1 || c == params.size - 1)
                map.occupancy.at({r, c}) = Terrain::Wall;
        }
    }

    const std::vector<Rect> roomlist = partition_rooms(map.occupancy, params.rooms, rng);

    // Objects: distinct free cells inside room interiors, palette attributes.
    int retries = 0;
    std::set<Cell> taken;
    int next_id = 0;
    for (const Rect& room : roomlist) {
        for (int k = 0; k < params.objects_per_room; ++k) {
            Cell cell;
            while (true) {
                cell = {room.row0 + static_cast<int>(rng.uniform_int(0, room.rows - 1)),
                        room.col0 + static_cast<int>(rng.uniform_int(0, room.cols - 1))};
                if (map.is_free(cell) && !taken.count(cell)) break;
                if (++retries > kPlacementRetryLimit)
                    throw GenerationFailed("object placement exhausted retries (params too tight)");
            }
            taken.insert(cell);
            ObjectInstance obj;
            obj.id = next_id++;
            obj.category = kCategories[rng.pick_index(static_cast<int>(std::size(kCategories)))];
            obj.attributes.insert(kColors[rng.pick_index(static_cast<int>(std::size(kColors)))]);
            obj.attributes.insert(kMaterials[rng.pick_index(static_cast<int>(std::size(kMaterials)))]);
            obj.position = cell;
            map.objects.push_back(obj);
        }
    }

    // Goals: mix of kinds; instance and description goals admit same-category
    // decoys, which downstream error knobs rely on.
    for (int g = 0; g < params.goals; ++g) {
        const double roll = rng.uniform01();
        const ObjectInstance& target = map.objects[rng.pick_index(static_cast<int>(map.objects.size()))];
        if (roll < 0.4)
            map.goals.push_back(GoalSpec::by_instance(target.id));
        else if (roll < 0.7)
            map.goals.push_back(GoalSpec::by_description(target.attributes));
        else
            map.goals.push_back(GoalSpec::by_category(target.category));
    }

    // Spawn: free, object-free, and farther than the success distance from
    // every goal so episodes never start already finished.
    retries = 0;
    while (true) {
        const Rect& room = roomlist[rng.pick_index(static_cast<int>(roomlist.size()))];
        const Cell cand{room.row0 + static_cast<int>(rng.uniform_int(0, room.rows - 1)),
                        room.col0 + static_cast<int>(rng.uniform_int(0, room.cols - 1))};
        bool ok = map.is_free(cand) && !taken.count(cand);
        if (ok) {
            map.spawn = cand;
            const Grid2D<int> dist = bfs_distances(map, cand);
            for (const auto& obj : map.objects) {
                if (dist.at(obj.position) < 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                for (const auto& goal : map.goals) {
                    const double p = optimal_path_length(map, cand, goal);
                    if (p <= kSuccessDistance) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (ok) break;
        if (++retries > kPlacementRetryLimit)
            throw GenerationFailed("spawn placement exhausted retries (params too tight)");
    }

    validate_scene(map);
    return map;
}

// --- JSON round trip -----------------------------------------------------

namespace {

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw ParseError(where + ": unknown field '" + key + "'");
    }
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing field '" + std::string(key) + "'");
    return *it;
}

Cell parse_cell(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number_integer() || !arr[1].is_number_integer())
        throw ParseError(where + ": expected [row, col]");
    return {arr[0].get<int>(), arr[1].get<int>()};
}

}  // namespace

SceneMap load_scene(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scene file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scene file: top level must be an object");
    reject_unknown_fields(doc, {"version", "cell_size", "grid", "spawn", "objects", "goals"}, "scene");

    if (require_field(doc, "version", "scene").get<int>() != 1)
        throw ParseError("scene: unsupported version");

    SceneMap map;
    map.cell_size = require_field(doc, "cell_size", "scene").get<double>();

    const json& grid = require_field(doc, "grid", "scene");
    if (!grid.is_array() || grid.empty()) throw ParseError("scene: grid must be a non-empty array of strings");
    map.height = static_cast<int>(grid.size());
    map.width = static_cast<int>(grid[0].get<std::string>().size());
    map.occupancy = Grid2D<Terrain>(map.width, map.height, Terrain::Free);
    for (int r = 0; r < map.height; ++r) {
        const std::string row = grid[r].get<std::string>();
        if (static_cast<int>(row.size()) != map.width)
            throw ParseError("scene: grid row " + std::to_string(r) + " has inconsistent length");
        for (int c = 0; c < map.width; ++c) {
            if (row[c] == '#')
                map.occupancy.at({r, c}) = Terrain::Wall;
            else if (row[c] == '.')
                map.occupancy.at({r, c}) = Terrain::Free;
            else
                throw ParseError("scene: grid row " + std::to_string(r) + " has invalid character '" +
                                 std::string(1, row[c]) + "'");
        }
    }

    map.spawn = parse_cell(require_field(doc, "spawn", "scene"), "scene.spawn");

    const json& objects = require_field(doc, "objects", "scene");
    if (!objects.is_array()) throw ParseError("scene: objects must be an array");
    for (size_t i = 0; i < objects.size(); ++i) {
        const std::string where = "objects[" + std::to_string(i) + "]";
        const json& jo = objects[i];
        if (!jo.is_object()) throw ParseError(where + ": expected object");
        reject_unknown_fields(jo, {"id", "category", "attributes", "pos"}, where);
        ObjectInstance obj;
        obj.id = require_field(jo, "id", where).get<int>();
        obj.category = require_field(jo, "category", where).get<std::string>();
        for (const auto& a : require_field(jo, "attributes", where))
            obj.attributes.insert(a.get<std::string>());
        obj.position = parse_cell(require_field(jo, "pos", where), where + ".pos");
        map.objects.push_back(std::move(obj));
    }

    const json& goals = require_field(doc, "goals", "scene");
    if (!goals.is_array()) throw ParseError("scene: goals must be an array");
    for (size_t i = 0; i < goals.size(); ++i) {
        const std::string where = "goals[" + std::to_string(i) + "]";
        const json& jg = goals[i];
        if (!jg.is_object()) throw ParseError(where + ": expected object");
        const std::string kind = require_field(jg, "kind", where).get<std::string>();
        if (kind == "category") {
            reject_unknown_fields(jg, {"kind", "category"}, where);
            map.goals.push_back(GoalSpec::by_category(require_field(jg, "category", where).get<std::string>()));
        } else if (kind == "instance") {
            reject_unknown_fields(jg, {"kind", "object"}, where);
            map.goals.push_back(GoalSpec::by_instance(require_field(jg, "object", where).get<int>()));
        } else if (kind == "description") {
            reject_unknown_fields(jg, {"kind", "attributes"}, where);
            std::set<std::string> attrs;
            for (const auto& a : require_field(jg, "attributes", where)) attrs.insert(a.get<std::string>());
            map.goals.push_back(GoalSpec::by_description(std::move(attrs)));
        } else {
            throw ParseError(where + ": unknown goal kind '" + kind + "'");
        }
    }

    validate_scene(map);
    return map;
}

std::string save_scene(const SceneMap& map) {
    json doc;
    doc["version"] = 1;
    doc["cell_size"] = map.cell_size;

    std::vector<std::string> rows;
    rows.reserve(map.height);
    for (int r = 0; r < map.height; ++r) {
        std::string row(map.width, '.');
        for (int c = 0; c < map.width; ++c) {
            if (map.occupancy.at({r, c}) == Terrain::Wall) row[c] = '#';
        }
        rows.push_back(std::move(row));
    }
    doc["grid"] = rows;
    doc["spawn"] = {map.spawn.row, map.spawn.col};

    json objects = json::array();
    for (const auto& obj : map.objects) {
        json jo;
        jo["id"] = obj.id;
        jo["category"] = obj.category;
        jo["attributes"] = obj.attributes;
        jo["pos"] = {obj.position.row, obj.position.col};
        objects.push_back(std::move(jo));
    }
    doc["objects"] = std::move(objects);

    json goals = json::array();
    for (const auto& goal : map.goals) {
        json jg;
        switch (goal.kind) {
            case GoalKind::Category:
                jg["kind"] = "category";
                jg["category"] = goal.category;
                break;
            case GoalKind::Instance:
                jg["kind"] = "instance";
                jg["object"] = goal.object_id;
                break;
            case GoalKind::Description:
                jg["kind"] = "description";
                jg["attributes"] = goal.attributes;
                break;
        }
        goals.push_back(std::move(jg));
    }
    doc["goals"] = std::move(goals);

    return doc.dump(2) + "\n";
}

}  // namespace scope
