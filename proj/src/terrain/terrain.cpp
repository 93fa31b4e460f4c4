#include <algorithm>
#include <deque>

#include "pipecube/random.hpp"
#include "pipecube/terrain.hpp"

namespace pipecube::terrain {

using cube::AssetClass;

Coord step(Coord c, Direction d) {
  switch (d) {
    case Direction::N: return {c.x, c.y - 1};
    case Direction::S: return {c.x, c.y + 1};
    case Direction::E: return {c.x + 1, c.y};
    case Direction::W: return {c.x - 1, c.y};
  }
  return c;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::N: return "N";
    case Direction::S: return "S";
    case Direction::E: return "E";
    case Direction::W: return "W";
  }
  return "?";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "N") return Direction::N;
  if (s == "S") return Direction::S;
  if (s == "E") return Direction::E;
  if (s == "W") return Direction::W;
  return std::nullopt;
}

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Blocked: return "Blocked";
    case ErrorCode::NotInInventory: return "NotInInventory";
    case ErrorCode::InvalidLocation: return "InvalidLocation";
    case ErrorCode::Occupied: return "Occupied";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DiameterMismatch: return "DiameterMismatch";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::NoUsesLeft: return "NoUsesLeft";
    case ErrorCode::NotOnNetwork: return "NotOnNetwork";
    case ErrorCode::NotAtShop: return "NotAtShop";
    case ErrorCode::InsufficientFunds: return "InsufficientFunds";
    case ErrorCode::NotOnPortal: return "NotOnPortal";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "?";
}

std::string_view to_string(BlockReason r) {
  switch (r) {
    case BlockReason::ElevationStep: return "ElevationStep";
    case BlockReason::River: return "River";
    case BlockReason::Occupied: return "Occupied";
    case BlockReason::OutOfBounds: return "OutOfBounds";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::InProgress: return "InProgress";
    case Outcome::Won: return "Won";
    case Outcome::Lost: return "Lost";
  }
  return "?";
}

TerrainError::TerrainError(ErrorCode code, const std::string& detail, std::optional<BlockReason> reason)
    : std::runtime_error(std::string(to_string(code)) +
                         (reason ? "{" + std::string(to_string(*reason)) + "}" : std::string()) + ": " + detail),
      code_(code),
      reason_(reason) {}

int Inventory::pipe_count(const std::string& name) const {
  auto it = pipes.find(name);
  return it == pipes.end() ? 0 : it->second;
}

bool TerrainState::is_node(Coord c) const { return c == cfg().tank || segment_into(c) != nullptr; }

const PipeSegment* TerrainState::segment_into(Coord c) const {
  for (const auto& p : pipes)
    if (p.to == c) return &p;
  return nullptr;
}

bool TerrainState::operator==(const TerrainState& o) const {
  return *config == *o.config && character == o.character && surface == o.surface && ladders == o.ladders &&
         pipes == o.pipes && boosts == o.boosts && inventory == o.inventory && portal == o.portal &&
         portal_timer == o.portal_timer && portals_spawned == o.portals_spawned &&
         portals_entered == o.portals_entered && action_counter == o.action_counter &&
         cube_solved == o.cube_solved && pressure_failed == o.pressure_failed;
}

TerrainState initial_state(std::shared_ptr<const TerrainConfig> config) {
  config->validate();
  TerrainState s;
  s.character = config->start;
  s.config = std::move(config);
  return s;
}

// ---------------------------------------------------------------------------
// Pressure

std::optional<int> PressureLedger::at(Coord c) const {
  auto it = pressure.find(c);
  if (it == pressure.end()) return std::nullopt;
  return it->second;
}

bool PressureLedger::any_below_minimum() const {
  return std::any_of(pressure.begin(), pressure.end(), [&](const auto& kv) { return kv.second < min_pressure; });
}

PressureLedger compute_ledger(const TerrainState& s) {
  const TerrainConfig& c = s.cfg();
  auto boost_at = [&](Coord n) {
    int b = 0;
    for (const auto& r : s.boosts)
      if (r.node == n) b += r.amount;
    return b;
  };
  PressureLedger l;
  l.min_pressure = c.pressure.min_pressure;
  l.pressure[c.tank] = c.pressure.source_head + boost_at(c.tank);
  // Parents are always laid before their children.
  for (const auto& seg : s.pipes)
    l.pressure[seg.to] = l.pressure.at(seg.from) - c.pipe(seg.type)->decrement + boost_at(seg.to);
  return l;
}

// ---------------------------------------------------------------------------
// Movement

bool standable(const TerrainState& s, Coord c) {
  const TerrainConfig& cfg = s.cfg();
  if (!cfg.in_bounds(c) || c == cfg.tank || cfg.is_house(c)) return false;
  auto it = s.surface.find(c);
  if (it != s.surface.end() && it->second == SurfaceAsset::Fence) return false;
  if (cfg.is_river(c) && (it == s.surface.end() || it->second != SurfaceAsset::Bridge)) return false;
  return true;
}

std::optional<BlockReason> step_blocker(const TerrainState& s, Coord from, Coord to) {
  const TerrainConfig& cfg = s.cfg();
  if (!cfg.in_bounds(to)) return BlockReason::OutOfBounds;
  if (to == cfg.tank || cfg.is_house(to)) return BlockReason::Occupied;
  auto it = s.surface.find(to);
  if (it != s.surface.end() && it->second == SurfaceAsset::Fence) return BlockReason::Occupied;
  if (cfg.is_river(to) && (it == s.surface.end() || it->second != SurfaceAsset::Bridge)) return BlockReason::River;
  const int rise = std::abs(cfg.elevation_at(to) - cfg.elevation_at(from));
  if (rise > 1 || (rise == 1 && !s.ladders.count(Edge::between(from, to)))) return BlockReason::ElevationStep;
  return std::nullopt;
}

std::vector<Coord> reachable_cells(const TerrainState& s) {
  std::set<Coord> seen{s.character};
  std::deque<Coord> queue{s.character};
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    for (Direction d : {Direction::N, Direction::S, Direction::E, Direction::W}) {
      const Coord n = step(c, d);
      if (!seen.count(n) && !step_blocker(s, c, n)) {
        seen.insert(n);
        queue.push_back(n);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

TerrainState move_character(const TerrainState& s, Direction d) {
  const Coord to = step(s.character, d);
  if (auto why = step_blocker(s, s.character, to))
    throw TerrainError(ErrorCode::Blocked, "cannot step " + std::string(to_string(d)), *why);
  TerrainState out = s;
  out.character = to;
  return out;
}

// ---------------------------------------------------------------------------
// Placement

std::vector<Coord> fence_ring(const TerrainConfig& c) {
  std::vector<Coord> ring;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      const Coord n{c.tank.x + dx, c.tank.y + dy};
      if ((dx == 0 && dy == 0) || !c.in_bounds(n) || c.is_river(n) || c.is_static(n)) continue;
      if (c.elevation_at(n) != c.elevation_at(c.tank)) continue;
      ring.push_back(n);
    }
  std::sort(ring.begin(), ring.end());
  return ring;
}

bool tank_fenced(const TerrainState& s) {
  for (Coord c : fence_ring(s.cfg())) {
    auto it = s.surface.find(c);
    if (it == s.surface.end() || it->second != SurfaceAsset::Fence) return false;
  }
  return true;
}

TerrainState place_asset(const TerrainState& s, AssetClass asset, const Location& where) {
  const TerrainConfig& cfg = s.cfg();
  if (asset != AssetClass::Ladder && asset != AssetClass::Bridge && asset != AssetClass::Fence)
    throw TerrainError(ErrorCode::InvalidLocation, std::string(cube::asset_name(asset)) + " cannot be placed");
  if (s.inventory[asset] < 1)
    throw TerrainError(ErrorCode::NotInInventory, "no " + std::string(cube::asset_name(asset)) + " left");
  const Coord c = where.cell;
  if (!cfg.in_bounds(c)) throw TerrainError(ErrorCode::InvalidLocation, "out of bounds");

  TerrainState out = s;
  switch (asset) {
    case AssetClass::Ladder: {
      if (!where.direction) throw TerrainError(ErrorCode::InvalidLocation, "a ladder needs a direction");
      const Coord n = step(c, *where.direction);
      if (!cfg.in_bounds(n) || std::abs(cfg.elevation_at(n) - cfg.elevation_at(c)) != 1)
        throw TerrainError(ErrorCode::InvalidLocation, "ladders go on a one-level elevation boundary");
      if (cfg.is_river(c) || cfg.is_river(n))
        throw TerrainError(ErrorCode::InvalidLocation, "no ladders on the river");
      if (!out.ladders.insert(Edge::between(c, n)).second)
        throw TerrainError(ErrorCode::Occupied, "ladder already there");
      break;
    }
    case AssetClass::Bridge: {
      if (!cfg.is_river(c)) throw TerrainError(ErrorCode::InvalidLocation, "bridges go on river cells");
      if (s.surface.count(c)) throw TerrainError(ErrorCode::Occupied, "cell already has a placement");
      out.surface[c] = SurfaceAsset::Bridge;
      break;
    }
    default: {  // Fence
      const auto ring = fence_ring(cfg);
      if (std::find(ring.begin(), ring.end(), c) == ring.end())
        throw TerrainError(ErrorCode::InvalidLocation, "fences go around the water tank");
      if (s.surface.count(c) || s.character == c || s.portal == c)
        throw TerrainError(ErrorCode::Occupied, "cell is occupied");
      out.surface[c] = SurfaceAsset::Fence;
      break;
    }
  }
  --out.inventory[asset];
  return out;
}

// ---------------------------------------------------------------------------
// Pipes

LayResult lay_pipe(const TerrainState& s, const std::string& pipe_type, Coord from, Direction direction) {
  const TerrainConfig& cfg = s.cfg();
  const PipeType* type = cfg.pipe(pipe_type);
  if (!type || s.inventory.pipe_count(pipe_type) < 1)
    throw TerrainError(ErrorCode::NotInInventory, "no '" + pipe_type + "' pipe in inventory");
  const Coord to = step(from, direction);
  if (!cfg.in_bounds(from) || !cfg.in_bounds(to)) throw TerrainError(ErrorCode::InvalidLocation, "out of bounds");
  if (!s.is_node(from)) throw TerrainError(ErrorCode::Disconnected, "start cell is not on the network");
  if (cfg.is_house(from)) throw TerrainError(ErrorCode::InvalidLocation, "a house ends its pipe run");
  if (to == cfg.tank || s.is_node(to)) throw TerrainError(ErrorCode::Occupied, "cell already carries a pipe");
  if (to == cfg.shop) throw TerrainError(ErrorCode::InvalidLocation, "no pipes under the shop");
  if (cfg.is_river(to)) {
    auto it = s.surface.find(to);
    if (it == s.surface.end() || it->second != SurfaceAsset::Bridge)
      throw TerrainError(ErrorCode::InvalidLocation, "pipes cross the river on a bridge");
  }
  const int rise = std::abs(cfg.elevation_at(to) - cfg.elevation_at(from));
  if (type->orientation == Orientation::Horizontal && rise != 0)
    throw TerrainError(ErrorCode::GeometryMismatch, "horizontal pipes join cells of equal elevation");
  if (type->orientation == Orientation::Vertical && rise != 1)
    throw TerrainError(ErrorCode::GeometryMismatch, "vertical pipes climb exactly one level");
  if (const PipeSegment* up = s.segment_into(from))
    if (cfg.pipe(up->type)->diameter < type->diameter)
      throw TerrainError(ErrorCode::DiameterMismatch, "cannot widen downstream of a '" + up->type + "' pipe");

  TerrainState out = s;
  out.pipes.push_back({from, to, pipe_type});
  --out.inventory.pipes[pipe_type];
  PressureLedger ledger = compute_ledger(out);
  if (ledger.any_below_minimum()) out.pressure_failed = true;
  return {std::move(out), std::move(ledger)};
}

int boosts_remaining(const TerrainState& s) {
  if (s.inventory[AssetClass::Clock] < 1) return 0;
  return std::max(0, s.cfg().pressure.boost_uses - static_cast<int>(s.boosts.size()));
}

LayResult apply_boost(const TerrainState& s, Coord node) {
  if (boosts_remaining(s) < 1) throw TerrainError(ErrorCode::NoUsesLeft, "no pump uses left");
  if (!s.is_node(node)) throw TerrainError(ErrorCode::NotOnNetwork, "boost must sit on a pipe node");
  TerrainState out = s;
  out.boosts.push_back({node, s.cfg().pressure.boost_amount});
  PressureLedger ledger = compute_ledger(out);
  return {std::move(out), std::move(ledger)};
}

Outcome check_outcome(const TerrainState& s) {
  if (s.pressure_failed) return Outcome::Lost;
  const PressureLedger l = compute_ledger(s);
  for (Coord h : s.cfg().houses) {
    auto p = l.at(h);
    if (!p || *p < l.min_pressure) return Outcome::InProgress;
  }
  if (s.cfg().require_fence && !tank_fenced(s)) return Outcome::InProgress;
  return Outcome::Won;
}

// ---------------------------------------------------------------------------
// Portals, shop

TerrainState tick_portal(const TerrainState& s) {
  TerrainState out = s;
  ++out.action_counter;
  if (out.cube_solved || out.portal) return out;
  if (++out.portal_timer < out.cfg().portal_period) return out;

  std::vector<Coord> candidates;
  for (Coord c : reachable_cells(out))
    if (c != out.character && !out.cfg().is_static(c)) candidates.push_back(c);
  if (candidates.empty()) return out;
  const std::uint64_t h =
      splitmix64(out.cfg().portal_seed ^ splitmix64(static_cast<std::uint64_t>(out.portals_spawned)));
  out.portal = candidates[h % candidates.size()];
  out.portal_timer = 0;
  ++out.portals_spawned;
  return out;
}

TerrainState enter_portal(const TerrainState& s) {
  if (!s.portal || *s.portal != s.character) throw TerrainError(ErrorCode::NotOnPortal, "no portal here");
  TerrainState out = s;
  if (s.cfg().portal_requires_key && s.portals_entered > 0) {
    if (s.inventory[AssetClass::Key] < 1) throw TerrainError(ErrorCode::NotInInventory, "the portal needs a key");
    --out.inventory[AssetClass::Key];
  }
  out.portal.reset();
  ++out.portals_entered;
  return out;
}

TerrainState shop_buy(const TerrainState& s, const std::string& pipe_type) {
  const PipeType* type = s.cfg().pipe(pipe_type);
  if (!type) throw TerrainError(ErrorCode::InvalidLocation, "the shop does not sell '" + pipe_type + "'");
  if (s.character != s.cfg().shop) throw TerrainError(ErrorCode::NotAtShop, "walk to the shop first");
  if (s.inventory[AssetClass::Money] < type->price)
    throw TerrainError(ErrorCode::InsufficientFunds, "not enough money for '" + pipe_type + "'");
  TerrainState out = s;
  out.inventory[AssetClass::Money] -= type->price;
  out.inventory.pipes[pipe_type] += type->bundle;
  return out;
}

// ---------------------------------------------------------------------------
// Cube rewards

int Grant::total() const {
  int t = 0;
  for (int d : delta) t += d;
  return t;
}

Grant grant_assets(solver::Goal /*checkpoint*/, const cube::CubeState& canonical, const cube::FaceClassMap& map,
                   std::uint32_t granted_cells) {
  Grant g;
  g.granted_cells = granted_cells;
  for (std::uint8_t slot = 0; slot < 8; ++slot) {
    if (canonical.perm[slot] != slot || canonical.orient[slot] != 0) continue;
    for (std::uint8_t p = 0; p < 3; ++p) {
      const cube::Cell cell = cube::corner_cell(slot, p);
      const std::uint32_t bit = 1u << (static_cast<int>(cell.face) * 4 + cell.index);
      if (g.granted_cells & bit) continue;
      g.granted_cells |= bit;
      ++g.delta[static_cast<int>(map.class_of(cell.face))];
    }
  }
  return g;
}

void add_grant(Inventory& inv, const Grant& g) {
  for (int i = 0; i < 6; ++i) inv.assets[i] += g.delta[i];
}

}  // namespace pipecube::terrain
