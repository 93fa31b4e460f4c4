#pragma once

// Grid terrain game: character movement, placed assets, a tank-rooted pipe
// tree with pressure accounting, pumps, portals and the win/lose rules.
//
// Every operation is a pure function returning a new TerrainState; rule
// violations throw TerrainError and leave the input untouched.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipecube/cube.hpp"
#include "pipecube/solver.hpp"

namespace pipecube::terrain {

struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

enum class Direction : std::uint8_t { N, S, E, W };  // N is y - 1
Coord step(Coord c, Direction d);
std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

enum class Orientation : std::uint8_t { Horizontal, Vertical };
enum class Diameter : std::uint8_t { Narrow = 0, Wide = 1 };

struct PipeType {
  std::string name;
  Orientation orientation = Orientation::Horizontal;
  Diameter diameter = Diameter::Wide;
  int decrement = 5;  // pressure lost across one segment
  int price = 1;      // money per purchase
  int bundle = 1;     // segments per purchase
  bool operator==(const PipeType&) const = default;
};

struct PressureModel {
  int source_head = 100;
  int min_pressure = 20;
  int boost_amount = 30;
  int boost_uses = 3;
  bool operator==(const PressureModel&) const = default;
};

struct TerrainConfig {
  int width = 0;
  int height = 0;
  std::vector<int> elevation;  // row-major, width * height
  std::vector<Coord> river;
  Coord tank;
  Coord shop;
  std::vector<Coord> houses;
  Coord start;
  std::uint64_t portal_seed = 1;
  int portal_period = 4;
  PressureModel pressure;
  std::vector<PipeType> pipes;
  bool require_fence = false;
  bool portal_requires_key = true;

  bool in_bounds(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  int elevation_at(Coord c) const { return elevation[c.y * width + c.x]; }
  bool is_river(Coord c) const;
  bool is_house(Coord c) const;
  /// Tank, shop or a house.
  bool is_static(Coord c) const;
  const PipeType* pipe(std::string_view name) const;

  /// Throws TerrainError{InvalidConfig}.
  void validate() const;

  bool operator==(const TerrainConfig&) const = default;
};

/// The shipped scenario. Its file form is data/default_terrain.cfg.
TerrainConfig default_terrain();

/// `key = value` lines, one `row = <digits>` line per grid row, `#` comments.
TerrainConfig parse_config(std::string_view text);
std::string format_config(const TerrainConfig& c);

enum class ErrorCode : std::uint8_t {
  Blocked,
  NotInInventory,
  InvalidLocation,
  Occupied,
  Disconnected,
  DiameterMismatch,
  GeometryMismatch,
  NoUsesLeft,
  NotOnNetwork,
  NotAtShop,
  InsufficientFunds,
  NotOnPortal,
  InvalidConfig,
};
std::string_view to_string(ErrorCode c);

enum class BlockReason : std::uint8_t { ElevationStep, River, Occupied, OutOfBounds };
std::string_view to_string(BlockReason r);

class TerrainError : public std::runtime_error {
 public:
  TerrainError(ErrorCode code, const std::string& detail, std::optional<BlockReason> reason = {});
  ErrorCode code() const { return code_; }
  std::optional<BlockReason> reason() const { return reason_; }

 private:
  ErrorCode code_;
  std::optional<BlockReason> reason_;
};

struct Inventory {
  std::array<int, 6> assets{};  // indexed by cube::AssetClass
  std::map<std::string, int> pipes;

  int& operator[](cube::AssetClass a) { return assets[static_cast<int>(a)]; }
  int operator[](cube::AssetClass a) const { return assets[static_cast<int>(a)]; }
  int pipe_count(const std::string& name) const;
  bool operator==(const Inventory&) const = default;
};

enum class SurfaceAsset : std::uint8_t { Bridge, Fence };

/// An undirected cell edge, stored with `a < b`.
struct Edge {
  Coord a;
  Coord b;
  static Edge between(Coord p, Coord q) { return p < q ? Edge{p, q} : Edge{q, p}; }
  auto operator<=>(const Edge&) const = default;
};

struct PipeSegment {
  Coord from;  // upstream node
  Coord to;    // downstream node
  std::string type;
  bool operator==(const PipeSegment&) const = default;
};

struct BoostRecord {
  Coord node;
  int amount = 0;
  bool operator==(const BoostRecord&) const = default;
};

struct TerrainState {
  std::shared_ptr<const TerrainConfig> config;
  Coord character;
  std::map<Coord, SurfaceAsset> surface;
  std::set<Edge> ladders;
  std::vector<PipeSegment> pipes;  // in laying order; each `to` appears once
  std::vector<BoostRecord> boosts;
  Inventory inventory;
  std::optional<Coord> portal;
  int portal_timer = 0;
  int portals_spawned = 0;
  int portals_entered = 0;
  int action_counter = 0;
  bool cube_solved = false;
  bool pressure_failed = false;

  const TerrainConfig& cfg() const { return *config; }
  int character_level() const { return cfg().elevation_at(character); }
  bool is_node(Coord c) const;
  const PipeSegment* segment_into(Coord c) const;

  bool operator==(const TerrainState& o) const;
};

TerrainState initial_state(std::shared_ptr<const TerrainConfig> config);

/// Pressure per network node.
struct PressureLedger {
  std::map<Coord, int> pressure;
  int min_pressure = 0;

  std::optional<int> at(Coord c) const;
  bool any_below_minimum() const;
  bool operator==(const PressureLedger&) const = default;
};

/// Head minus path decrements plus path boosts, walked from the tank.
PressureLedger compute_ledger(const TerrainState& s);

/// Cells the character can stand on (ignores reachability).
bool standable(const TerrainState& s, Coord c);
/// Why stepping from `from` to `to` is not allowed, if it is not.
std::optional<BlockReason> step_blocker(const TerrainState& s, Coord from, Coord to);
/// Cells reachable from the character under current placements.
std::vector<Coord> reachable_cells(const TerrainState& s);

/// In-bounds 8-neighbours of the tank at the tank's elevation that are
/// neither river nor static cells.
std::vector<Coord> fence_ring(const TerrainConfig& c);
bool tank_fenced(const TerrainState& s);

/// `direction` is required for ladders (the edge to climb) and ignored otherwise.
struct Location {
  Coord cell;
  std::optional<Direction> direction;
};

TerrainState move_character(const TerrainState& s, Direction d);
/// Ladder, Bridge or Fence.
TerrainState place_asset(const TerrainState& s, cube::AssetClass asset, const Location& where);

struct LayResult {
  TerrainState state;
  PressureLedger ledger;
};
/// Extends the tree from the node at `from` toward `direction`.
LayResult lay_pipe(const TerrainState& s, const std::string& pipe_type, Coord from, Direction direction);
LayResult apply_boost(const TerrainState& s, Coord node);
int boosts_remaining(const TerrainState& s);

enum class Outcome : std::uint8_t { InProgress, Won, Lost };
std::string_view to_string(Outcome o);
Outcome check_outcome(const TerrainState& s);

/// Advances the portal clock by one action.
TerrainState tick_portal(const TerrainState& s);

/// Uses the portal under the character. Consumes a Key on every entry after
/// the first when the config asks for it.
TerrainState enter_portal(const TerrainState& s);

TerrainState shop_buy(const TerrainState& s, const std::string& pipe_type);

/// One unit per cube cell whose cubie is home and untwisted and whose bit in
/// `granted_cells` (face * 4 + index) is still clear; the bits are set.
struct Grant {
  std::array<int, 6> delta{};
  std::uint32_t granted_cells = 0;
  int total() const;
};
Grant grant_assets(solver::Goal checkpoint, const cube::CubeState& canonical,
                   const cube::FaceClassMap& map, std::uint32_t granted_cells);
void add_grant(Inventory& inv, const Grant& g);

}  // namespace pipecube::terrain
