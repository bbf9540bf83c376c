#include "dmcts/envs/ddst.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace dmcts::envs {

namespace {

void parse_cell(const std::string& glyph, DdstMap& map, std::size_t index, bool& start_seen) {
    auto& cell = map.cells[index];
    if (glyph == "." || glyph.empty()) {
        cell = DdstCell::Water;
    } else if (glyph == "S") {
        cell = DdstCell::Water;
        map.start_row = static_cast<int>(index) / map.cols;
        map.start_col = static_cast<int>(index) % map.cols;
        start_seen = true;
    } else if (glyph == "#") {
        cell = DdstCell::Seabed;
    } else if (glyph == "x") {
        cell = DdstCell::TerminalShark;
        map.shark_probs[index] = 1.0;
    } else if (glyph.rfind("t:", 0) == 0) {
        cell = DdstCell::Treasure;
        map.treasure_values[index] = std::stod(glyph.substr(2));
    } else if (glyph == "s") {
        cell = DdstCell::Shark;
        map.shark_probs[index] = map.default_p_shark;
    } else if (glyph.rfind("s:", 0) == 0) {
        cell = DdstCell::Shark;
        map.shark_probs[index] = std::stod(glyph.substr(2));
    } else {
        throw contract_violation("ddst map: unknown cell glyph '" + glyph + "'");
    }
}

}  // namespace

DdstMap DdstMap::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ddst map: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

DdstMap DdstMap::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DdstMap map;
    map.horizon = j.value("horizon", 25);
    map.default_p_shark = j.value("p_shark", 0.5);
    map.shark_damage = j.value("shark_damage", -10.0);
    map.destruction_threshold = j.value("destruction_threshold", -10.0);

    const auto& rows = j.at("rows");
    map.rows = static_cast<int>(rows.size());
    if (map.rows == 0) throw contract_violation("ddst map: empty grid");
    map.cols = static_cast<int>(rows[0].size());
    map.cells.assign(static_cast<std::size_t>(map.rows * map.cols), DdstCell::Water);
    map.treasure_values.assign(map.cells.size(), 0.0);
    map.shark_probs.assign(map.cells.size(), 0.0);

    bool start_seen = false;
    for (int r = 0; r < map.rows; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != map.cols) {
            throw contract_violation("ddst map: ragged grid row " + std::to_string(r));
        }
        for (int c = 0; c < map.cols; ++c) {
            auto glyph = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<std::string>();
            parse_cell(glyph, map, static_cast<std::size_t>(r * map.cols + c), start_seen);
        }
    }
    if (j.contains("start")) {
        map.start_row = j["start"][0].get<int>();
        map.start_col = j["start"][1].get<int>();
        start_seen = true;
    }
    if (!start_seen) throw contract_violation("ddst map: no start cell (use 'S' or \"start\")");
    map.validate();
    return map;
}

void DdstMap::validate() const {
    if (rows < 1 || cols < 1) throw contract_violation("ddst map: empty grid");
    if (!in_bounds(start_row, start_col)) throw contract_violation("ddst map: start out of bounds");
    if (cell(start_row, start_col) != DdstCell::Water) {
        throw contract_violation("ddst map: start must be open water");
    }
    if (horizon < 1) throw contract_violation("ddst map: horizon must be >= 1");
    if (!(shark_damage < 0.0)) throw contract_violation("ddst map: shark damage must be negative");
    if (destruction_threshold > 0.0) {
        throw contract_violation("ddst map: destruction threshold must be <= 0");
    }
    bool any_treasure = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == DdstCell::Treasure) {
            any_treasure = true;
            if (treasure_values[i] <= 0.0) {
                throw contract_violation("ddst map: treasure values must be positive");
            }
        }
        if (shark_probs[i] < 0.0 || shark_probs[i] > 1.0) {
            throw contract_violation("ddst map: shark probability outside [0,1]");
        }
    }
    if (!any_treasure) throw contract_violation("ddst map: no treasure cells");
}

DangerousDstEnv::DangerousDstEnv(DdstMap map) : map_(std::move(map)) {
    map_.validate();
    row_ = map_.start_row;
    col_ = map_.start_col;
}

void DangerousDstEnv::reset(Rng&) {
    row_ = map_.start_row;
    col_ = map_.start_col;
    t_ = 0;
    damage_ = 0.0;
    done_ = false;
}

StepResult DangerousDstEnv::step(int action, Rng& rng) {
    if (done_) throw contract_violation("ddst: step on finished episode");
    if (action < 0 || action >= 4) {
        throw contract_violation("ddst: invalid action index " + std::to_string(action));
    }
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    int nr = row_ + dr[action];
    int nc = col_ + dc[action];
    if (map_.passable(nr, nc)) {
        row_ = nr;
        col_ = nc;
    }
    ++t_;

    StepResult out;
    out.reward = ReturnVector::Zero(3);
    out.reward[2] = -1.0;  // time

    DdstCell here = map_.cell(row_, col_);
    if (here == DdstCell::Treasure) {
        out.reward[0] = map_.treasure(row_, col_);
        done_ = true;
    } else if (here == DdstCell::Shark || here == DdstCell::TerminalShark) {
        if (rng.bernoulli(map_.shark_prob(row_, col_))) {
            out.reward[1] = map_.shark_damage;
            damage_ += map_.shark_damage;
            if (damage_ <= map_.destruction_threshold) done_ = true;
        }
    }
    if (t_ >= map_.horizon) done_ = true;
    out.terminal = done_;
    return out;
}

std::unique_ptr<EnvironmentModel> DangerousDstEnv::clone() const {
    return std::make_unique<DangerousDstEnv>(*this);
}

}  // namespace dmcts::envs
