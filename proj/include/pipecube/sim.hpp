#pragma once

// Headless bots that play whole sessions, and the step-count reports built
// from their runs.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pipecube/session.hpp"

namespace pipecube::sim {

struct Perfect {};
/// Each cube move is, with probability p_error, replaced by one of the
/// eight other canonical moves chosen uniformly.
struct Noisy {
  double p_error = 0.0;
};
using BotPolicy = std::variant<Perfect, Noisy>;
std::string describe(const BotPolicy& p);
double p_error(const BotPolicy& p);

// Terrain script: fixed actions plus "walk to" steps resolved by BFS at run
// time, played once the cube is solved.
struct GoTo {
  terrain::Coord cell;
};
using ScriptStep = std::variant<session::TerrainAction, GoTo>;
/// Ladder onto the plateau, walk to the shop, buy two wide bundles and a
/// riser, bridge the river, then lay the trunk and three branches.
std::vector<ScriptStep> default_script();

/// Directions leading the character to `goal`; empty when already there,
/// nullopt when unreachable.
std::optional<std::vector<terrain::Direction>> path_to(const terrain::TerrainState& s, terrain::Coord goal);

struct RunRow {
  int run = 0;
  std::uint64_t seed = 0;
  terrain::Outcome outcome = terrain::Outcome::InProgress;
  std::optional<session::LossReason> loss_reason;
  int scan_steps = 0;
  int phase1_steps = 0;  // cube turns submitted while in phase 1
  int phase2_steps = 0;
  int phase1_plan = 0;  // plan length when the phase started
  int phase2_plan = 0;
  int reaching_steps = 0;  // moves and waits to reach portals
  int pipe_steps = 0;      // scripted terrain actions after the solve
  int deviations = 0;
  int portal_entries = 0;
  int cube_steps_at_loss = 0;  // 0 unless lost to cube errors
  int total_actions = 0;
  bool operator==(const RunRow&) const = default;
};

struct Aggregate {
  int runs = 0;
  int wins = 0;
  int losses = 0;
  double loss_rate = 0;
  double mean_scan = 0;
  double mean_phase1 = 0;
  double mean_phase2 = 0;
  double mean_reaching = 0;
  double mean_pipe = 0;
  double mean_deviations = 0;
  double mean_total = 0;
  bool operator==(const Aggregate&) const = default;
};
Aggregate aggregate(std::span<const RunRow> rows);

struct RunReport {
  BotPolicy policy;
  std::uint64_t seed = 0;
  std::vector<RunRow> rows;
  Aggregate summary;
};

struct RunOptions {
  session::SessionOptions session;
  std::vector<ScriptStep> script = default_script();
  int threads = 1;
};

/// One full game from a scrambled, randomly held cube. Deterministic in
/// (policy, options, seed). The finished session is stored in `out` if given.
RunRow play_one(const BotPolicy& policy, const RunOptions& options, std::uint64_t seed,
                session::Session* out = nullptr);

/// Run i uses seed splitmix64(seed + i).
RunReport run(const BotPolicy& policy, const RunOptions& options, std::uint64_t seed, int n_runs);

struct SweepPoint {
  double p_error = 0;
  Aggregate summary;
};
std::vector<SweepPoint> sweep(std::span<const double> grid, int n_runs, const RunOptions& options,
                              std::uint64_t seed);

/// Step counts measured with human players, printed beside the bot numbers.
struct ReferenceRow {
  int reaching_steps = 2;
  int phase1_steps = 21;
  int phase2_steps = 30;
  int pipe_steps = 50;
  int scan_steps = 6;
  int reaching_seconds = 30;
  int phase1_seconds = 250;
  int phase2_seconds = 265;
  int pipe_seconds = 270;
  int scan_seconds = 84;
};
inline constexpr ReferenceRow kReference{};

/// Per-run CSV with a header row, then `#` comment lines holding the
/// aggregate and the reference row.
std::string to_csv(const RunReport& r);
std::string sweep_csv(std::span<const SweepPoint> points);
std::string reference_annotation();

}  // namespace pipecube::sim
