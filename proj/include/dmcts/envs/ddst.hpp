#pragma once

#include "dmcts/core/environment.hpp"

#include <string>
#include <vector>

namespace dmcts::envs {

enum class DdstCell : std::uint8_t {
    Water,
    Seabed,
    Treasure,
    Shark,          // probabilistic hit
    TerminalShark,  // hit with probability 1
};

struct DdstMap {
    int rows = 0;
    int cols = 0;
    std::vector<DdstCell> cells;          // row-major
    std::vector<double> treasure_values;  // row-major, 0 outside treasure cells
    std::vector<double> shark_probs;      // row-major, per-cell hit probability
    int start_row = 0;
    int start_col = 0;
    int horizon = 25;
    double default_p_shark = 0.5;
    double shark_damage = -10.0;
    // Damage at or below which the submarine is destroyed. One hit reaches it
    // with the default -10 damage, matching one-hit destruction.
    double destruction_threshold = -10.0;

    static DdstMap from_json_file(const std::string& path);
    static DdstMap from_json_text(const std::string& text);
    void validate() const;

    DdstCell cell(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
    double treasure(int r, int c) const { return treasure_values[static_cast<std::size_t>(r * cols + c)]; }
    double shark_prob(int r, int c) const { return shark_probs[static_cast<std::size_t>(r * cols + c)]; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
    bool passable(int r, int c) const { return in_bounds(r, c) && cell(r, c) != DdstCell::Seabed; }
};

/// Grid treasure hunt with three objectives [treasure, damage, time]. Every
/// step costs -1 time; moves into the seabed or off the grid leave the
/// position unchanged. Entering a treasure cell ends the episode with its
/// value; shark cells hit with their per-cell probability for -10 damage,
/// destroying the submarine.
class DangerousDstEnv final : public EnvironmentModel {
public:
    enum Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

    explicit DangerousDstEnv(DdstMap map);

    int objective_count() const override { return 3; }
    int action_count() const override { return 4; }
    int horizon() const override { return map_.horizon; }
    void reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    bool done() const override { return done_; }
    int timestep() const override { return t_; }
    std::uint64_t state_key() const override {
        return static_cast<std::uint64_t>(row_ * map_.cols + col_);
    }
    std::unique_ptr<EnvironmentModel> clone() const override;

    const DdstMap& map() const { return map_; }
    int row() const { return row_; }
    int col() const { return col_; }
    double accumulated_damage() const { return damage_; }

private:
    DdstMap map_;
    int row_ = 0;
    int col_ = 0;
    int t_ = 0;
    double damage_ = 0.0;
    bool done_ = false;
};

}  // namespace dmcts::envs
