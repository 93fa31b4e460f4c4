#pragma once

// One game: the Terrain <-> Cube mode machine, the event log and its replay.
//
// Inputs are validated against pure engine calls before anything is
// committed, so a rejected request leaves the session exactly as it was.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pipecube/cube.hpp"
#include "pipecube/cue.hpp"
#include "pipecube/solver.hpp"
#include "pipecube/terrain.hpp"

namespace pipecube::session {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct SessionOptions {
  terrain::TerrainConfig terrain = terrain::default_terrain();
  cue::DeviationPolicy policy;
  cube::FaceClassMap face_map;
  /// Replaces the config's portal seed when set.
  std::optional<std::uint64_t> seed;
};

enum class Mode : std::uint8_t { Terrain, Cube };
enum class LossReason : std::uint8_t { Pressure, CubeErrors };

struct GameOutcome {
  terrain::Outcome status = terrain::Outcome::InProgress;
  std::optional<LossReason> reason;  // set when Lost
  bool operator==(const GameOutcome&) const = default;
};

struct CubeProgress {
  std::optional<cube::CubeState> state;  // canonical; empty until scanned
  cube::Rotation pose;                   // how the player holds the cube
  cube::Classification scanned_as = cube::Classification::Unsolved;
  cue::Phase phase = cue::Phase::Phase1;
  solver::Plan plan;  // toward the current phase goal
  std::size_t cursor = 0;
  int deviations = 0;
  std::uint32_t granted_cells = 0;
  bool solved = false;
};

struct Event {
  std::uint64_t seq = 0;
  std::uint64_t t = 0;  // accepted inputs so far
  std::string kind;
  json payload;
  bool operator==(const Event&) const = default;
};
json to_json(const Event& e);
/// Throws SessionError{CorruptLog} on a malformed event.
Event event_from_json(const json& j);
/// Created, Scan, CubeTurn, Move, Placement, Purchase, Boost, PortalEnter, Wait.
bool is_input_kind(std::string_view kind);

// Terrain actions as the wire carries them.
struct MoveAction { terrain::Direction dir; };
struct PlaceAction { cube::AssetClass asset; terrain::Coord at; std::optional<terrain::Direction> dir; };
struct LayAction { std::string pipe; terrain::Coord from; terrain::Direction dir; };
struct BoostAction { terrain::Coord at; };
struct BuyAction { std::string pipe; };
struct EnterPortalAction {};
struct WaitAction {};
using TerrainAction =
    std::variant<MoveAction, PlaceAction, LayAction, BoostAction, BuyAction, EnterPortalAction, WaitAction>;

/// A physical turn token, or a fully observed (not canonicalised) state.
using CubeInput = std::variant<cube::Move, cube::CubeState>;

enum class ErrorCode : std::uint8_t {
  BadRequest,
  WrongMode,
  GameOver,
  AlreadyScanned,
  NotScanned,
  InvalidConfig,
  SchemaVersionMismatch,
  CorruptLog,
  NotFound,
};
std::string_view to_string(ErrorCode c);

class SessionError : public std::runtime_error {
 public:
  SessionError(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class Session {
 public:
  /// Throws SessionError{InvalidConfig}.
  static Session create(const SessionOptions& options, std::string id = "local");

  void submit_scan(const cube::Scan& scan);
  cue::ObservationResult submit_cube(const CubeInput& input);
  void submit_terrain(const TerrainAction& action);

  /// Decodes and dispatches a logged input event; used by replay.
  void apply_input(const Event& e);

  const std::string& id() const { return id_; }
  const SessionOptions& options() const { return options_; }
  Mode mode() const { return mode_; }
  const GameOutcome& outcome() const { return outcome_; }
  const CubeProgress& cube() const { return cube_; }
  const terrain::TerrainState& terrain() const { return terrain_; }
  const terrain::Inventory& inventory() const { return terrain_.inventory; }
  const std::vector<Event>& events() const { return events_; }
  std::uint64_t clock() const { return clock_; }

  /// The cue for the player right now: the next turn in Cube mode,
  /// otherwise NoCue.
  cue::Cue current_cue() const;

  /// Full state view, the `GET /sessions/{id}` body.
  json view() const;

 private:
  Session() = default;
  void log(std::string kind, json payload);
  void log_input(std::string kind, json payload);
  void require_live() const;
  void start_phase(cue::Phase phase);
  void reach_checkpoints();
  void grant(solver::Goal goal);
  void settle_terrain(terrain::TerrainState next);
  void lose(LossReason why);

  std::string id_;
  SessionOptions options_;
  std::shared_ptr<const terrain::TerrainConfig> config_;
  Mode mode_ = Mode::Terrain;
  GameOutcome outcome_;
  CubeProgress cube_;
  terrain::TerrainState terrain_;
  std::vector<Event> events_;
  std::uint64_t clock_ = 0;
};

/// `{"schema_version", "events", "state"}`.
json save(const Session& s);
/// Rebuilds by replay and checks the stored state view. Throws
/// SessionError{SchemaVersionMismatch} or {CorruptLog}.
Session load(const json& document);
/// Re-applies the input events of `log` (the first must be Created) and
/// requires the regenerated log to match it exactly.
Session replay(const std::vector<Event>& log);
/// As above, also requiring the Created event to carry `options`.
Session replay(const std::vector<Event>& log, const SessionOptions& options);

// Wire forms.
std::string_view to_string(Mode m);
std::string_view to_string(LossReason r);
json to_json(const cue::Cue& c);
json to_json(const cube::CubeState& s);
json to_json(terrain::Coord c);
json to_json(const TerrainAction& a);
json to_json(const GameOutcome& o);
json to_json(const SessionOptions& o);
json to_json(const cube::Scan& scan);
/// Each throws SessionError{BadRequest} on malformed input.
TerrainAction terrain_action_from_json(const json& j);
cube::CubeState cube_state_from_json(const json& j);
terrain::Coord coord_from_json(const json& j);
/// Accepts `{"text": "<scan text>"}` or `{"faces": {"U": [...4 codes], ...}}`.
cube::Scan scan_from_json(const json& j);
/// `{"move": "R'"}`, `{"state": {...}}` or a scan object.
CubeInput cube_input_from_json(const json& j, const cube::FaceClassMap& map);
SessionOptions options_from_json(const json& j);

/// `{"error": {"code", "message", "reason"?}}` for any engine exception.
json error_json(const std::exception& e);
/// HTTP status for an engine exception.
int error_status(const std::exception& e);

}  // namespace pipecube::session
