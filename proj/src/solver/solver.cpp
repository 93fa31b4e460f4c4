#include "pipecube/solver.hpp"

#include <algorithm>

namespace pipecube::solver {

using cube::CubeState;
using cube::Face;
using cube::Move;

namespace {

thread_local std::uint64_t g_nodes = 0;

constexpr std::array<std::uint8_t, 7> kFreeSlots{0, 1, 2, 3, 4, 5, 7};
constexpr std::array<std::uint8_t, 3> kTrackedCubies{cube::DFR, cube::DLF, cube::DRB};

std::uint8_t slot_rank(std::uint8_t slot) { return slot == 7 ? 6 : slot; }

std::uint32_t table_size(PruningTable::Abstraction a) {
  switch (a) {
    case PruningTable::Abstraction::DLayer: return 21 * 21 * 21;
    case PruningTable::Abstraction::Permutation: return 5040;
    case PruningTable::Abstraction::Twist: return 729;
  }
  return 0;
}

// Applies a canonical move to a coordinate by rebuilding a representative.
std::uint32_t move_coordinate(PruningTable::Abstraction a, std::uint32_t coord, const Move& m) {
  const CubeState& t = cube::move_transform(m);
  switch (a) {
    case PruningTable::Abstraction::Permutation: {
      const CubeState rep = cube::from_canonical_index(coord * 729);
      return cube::canonical_index(cube::compose(rep, t)) / 729;
    }
    case PruningTable::Abstraction::Twist: {
      const CubeState rep = cube::from_canonical_index(coord);
      return cube::canonical_index(cube::compose(rep, t)) % 729;
    }
    case PruningTable::Abstraction::DLayer: {
      std::uint32_t out = 0;
      std::uint32_t rest = coord;
      std::array<std::uint32_t, 3> digits{};
      for (int k = 2; k >= 0; --k) {
        digits[k] = rest % 21;
        rest /= 21;
      }
      for (int k = 0; k < 3; ++k) {
        const std::uint8_t slot = kFreeSlots[digits[k] / 3];
        const std::uint8_t twist = digits[k] % 3;
        std::uint32_t moved = 0;
        for (std::uint8_t i = 0; i < 8; ++i)
          if (t.perm[i] == slot) moved = slot_rank(i) * 3 + (twist + t.orient[i]) % 3;
        out = out * 21 + moved;
      }
      return out;
    }
  }
  return coord;
}

}  // namespace

std::string_view to_string(Goal g) { return g == Goal::Phase1 ? "phase1" : "solved"; }

std::string to_string(const Plan& plan) {
  std::string out;
  auto put = [&](std::string_view s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  for (std::size_t i = 0; i <= plan.moves.size(); ++i) {
    for (const Checkpoint& c : plan.checkpoints)
      if (c.index == i) put(c.goal == Goal::Phase1 ? "| P1" : "| SOLVED");
    if (i < plan.moves.size()) put(cube::to_string(plan.moves[i]));
  }
  return out;
}

PruningTable::PruningTable(Abstraction a, Goal goal) : abstraction_(a), goal_(goal) {
  const std::uint32_t n = table_size(a);
  entries_.assign(n, 0xFF);

  // Every goal state of either phase projects onto the solved coordinate.
  std::vector<std::uint32_t> frontier{coordinate(CubeState::solved())};
  entries_[frontier[0]] = 0;
  std::uint8_t depth = 0;
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t c : frontier)
      for (const Move& m : cube::kCanonicalMoves) {
        const std::uint32_t d = move_coordinate(a, c, m);
        if (entries_[d] == 0xFF) {
          entries_[d] = static_cast<std::uint8_t>(depth + 1);
          next.push_back(d);
        }
      }
    frontier = std::move(next);
    ++depth;
  }
}

std::uint32_t PruningTable::coordinate(const CubeState& s) const {
  switch (abstraction_) {
    case Abstraction::Permutation: return cube::canonical_index(s) / 729;
    case Abstraction::Twist: return cube::canonical_index(s) % 729;
    case Abstraction::DLayer: {
      std::uint32_t out = 0;
      for (std::uint8_t cubie : kTrackedCubies)
        for (std::uint8_t i = 0; i < 8; ++i)
          if (s.perm[i] == cubie) out = out * 21 + slot_rank(i) * 3 + s.orient[i];
      return out;
    }
  }
  return 0;
}

int PruningTable::max_entry() const {
  int m = 0;
  for (std::uint8_t e : entries_)
    if (e != 0xFF) m = std::max<int>(m, e);
  return m;
}

Solver::Solver()
    : d_layer_(PruningTable::Abstraction::DLayer, Goal::Phase1),
      permutation_(PruningTable::Abstraction::Permutation, Goal::Solved),
      twist_(PruningTable::Abstraction::Twist, Goal::Solved) {}

int Solver::heuristic(const CubeState& s, Goal goal) const {
  // Reaching Solved passes through the phase-1 set, so its bound applies to both.
  const int d = d_layer_.lower_bound(s);
  if (goal == Goal::Phase1) return d;
  return std::max({d, permutation_.lower_bound(s), twist_.lower_bound(s)});
}

std::uint64_t Solver::last_node_count() { return g_nodes; }

std::vector<Move> Solver::search(const CubeState& start, Goal goal) const {
  if (!start.is_canonical())
    throw SolverError(SolverError::Kind::NotCanonical, "solver expects a canonical state");

  auto reached = [goal](const CubeState& s) {
    return goal == Goal::Phase1 ? cube::d_layer_solved(s) : s == CubeState::solved();
  };

  g_nodes = 0;
  std::vector<Move> path;
  // Returns true when a goal is found within `bound`.
  auto dfs = [&](auto&& self, const CubeState& s, int g, int bound, int last_face) -> bool {
    ++g_nodes;
    if (reached(s)) return true;
    if (g + heuristic(s, goal) > bound) return false;
    for (const Move& m : cube::kCanonicalMoves) {
      const int face = static_cast<int>(m.face);
      if (face == last_face) continue;
      path.push_back(m);
      if (self(self, cube::apply_move(s, m), g + 1, bound, face)) return true;
      path.pop_back();
    }
    return false;
  };

  for (int bound = heuristic(start, goal);; ++bound) {
    path.clear();
    if (dfs(dfs, start, 0, bound, -1)) return path;
  }
}

Plan Solver::solve_phase1(const CubeState& s) const {
  Plan p;
  p.moves = search(s, Goal::Phase1);
  p.checkpoints.push_back({p.moves.size(), Goal::Phase1});
  return p;
}

Plan Solver::solve_phase2(const CubeState& s) const {
  if (!s.is_canonical())
    throw SolverError(SolverError::Kind::NotCanonical, "solver expects a canonical state");
  if (!cube::d_layer_solved(s))
    throw SolverError(SolverError::Kind::NotAtCheckpoint, "phase 2 needs a solved D layer");
  return solve_to_solved(s);
}

Plan Solver::solve_to_solved(const CubeState& s) const {
  Plan p;
  p.moves = search(s, Goal::Solved);
  p.checkpoints.push_back({p.moves.size(), Goal::Solved});
  return p;
}

Plan Solver::solve_full(const CubeState& s) const {
  Plan p = solve_phase1(s);
  const Plan rest = solve_phase2(cube::apply_moves(s, p.moves));
  p.moves.insert(p.moves.end(), rest.moves.begin(), rest.moves.end());
  p.checkpoints.push_back({p.moves.size(), Goal::Solved});
  return p;
}

const Solver& default_solver() {
  static const Solver solver;
  return solver;
}

PresentationPlan ergonomize(const Plan& plan, const cube::Rotation& initial_pose, Face comfort) {
  PresentationPlan out;
  cube::Rotation pose = initial_pose;
  auto mark = [&](std::size_t source_index) {
    for (const Checkpoint& c : plan.checkpoints)
      if (c.index == source_index) out.checkpoints.push_back({out.moves.size(), c.goal});
  };
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    mark(i);
    const Move& m = plan.moves[i];
    if (!m.is_layer()) throw std::invalid_argument("ergonomize expects layer turns only");
    const Face physical = pose.image(m.face);
    if (auto rot = cube::rotation_carrying(physical, comfort)) {
      out.moves.push_back(*rot);
      pose = pose.then(cube::Rotation::of(*rot));
    }
    out.moves.push_back(Move::turn(comfort, m.amount));
  }
  mark(plan.moves.size());
  out.final_pose = pose;
  return out;
}

Plan strip_and_rename(const PresentationPlan& plan, const cube::Rotation& initial_pose) {
  Plan out;
  cube::Rotation pose = initial_pose;
  for (std::size_t i = 0; i <= plan.moves.size(); ++i) {
    for (const Checkpoint& c : plan.checkpoints)
      if (c.index == i) out.checkpoints.push_back({out.moves.size(), c.goal});
    if (i == plan.moves.size()) break;
    const Move& m = plan.moves[i];
    if (m.is_rotation()) {
      pose = pose.then(cube::Rotation::of(m));
    } else {
      out.moves.push_back(Move::turn(pose.preimage(m.face), m.amount));
    }
  }
  return out;
}

}  // namespace pipecube::solver
