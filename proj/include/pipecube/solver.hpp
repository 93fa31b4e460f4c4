#pragma once

// Checkpointed optimal solver for canonical pocket-cube states.
//
// Phase 1 reaches any state whose D layer is solved; phase 2 continues to the
// fully solved cube. Both are optimal in the half-turn metric over
// {U, R, F} x {CW, CCW, Half}, with ties broken lexicographically in that
// generator order.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipecube/cube.hpp"

namespace pipecube::solver {

enum class Goal : std::uint8_t { Phase1, Solved };
std::string_view to_string(Goal g);

struct Checkpoint {
  std::size_t index = 0;  // number of moves applied when the goal is reached
  Goal goal = Goal::Phase1;
  bool operator==(const Checkpoint&) const = default;
};

struct Plan {
  std::vector<cube::Move> moves;
  std::vector<Checkpoint> checkpoints;

  std::size_t size() const { return moves.size(); }
  bool empty() const { return moves.empty(); }
  bool operator==(const Plan&) const = default;
};

/// Moves interleaved with `| P1` / `| SOLVED` markers.
std::string to_string(const Plan& plan);

class SolverError : public std::runtime_error {
 public:
  enum class Kind { NotAtCheckpoint, NotCanonical };
  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Lower-bound distance table over an abstraction of the canonical state.
class PruningTable {
 public:
  enum class Abstraction : std::uint8_t {
    DLayer,       // positions and twists of DFR, DLF, DRB; exact for phase 1
    Permutation,  // corner permutation only
    Twist,        // corner twists only
  };

  PruningTable(Abstraction a, Goal goal);

  Abstraction abstraction() const { return abstraction_; }
  Goal goal() const { return goal_; }
  std::size_t size() const { return entries_.size(); }
  std::uint32_t coordinate(const cube::CubeState& canonical) const;
  int lower_bound(const cube::CubeState& canonical) const { return entries_[coordinate(canonical)]; }
  int max_entry() const;

 private:
  Abstraction abstraction_;
  Goal goal_;
  std::vector<std::uint8_t> entries_;
};

class Solver {
 public:
  /// Builds the pruning tables (a few milliseconds).
  Solver();

  Plan solve_phase1(const cube::CubeState& s) const;
  /// Throws SolverError{NotAtCheckpoint} unless the D layer is solved.
  Plan solve_phase2(const cube::CubeState& s) const;
  Plan solve_full(const cube::CubeState& s) const;
  /// Optimal plan straight to Solved from any canonical state.
  Plan solve_to_solved(const cube::CubeState& s) const;

  /// Admissible estimate of the distance to `goal`.
  int heuristic(const cube::CubeState& s, Goal goal) const;

  const PruningTable& d_layer_table() const { return d_layer_; }
  const PruningTable& permutation_table() const { return permutation_; }
  const PruningTable& twist_table() const { return twist_; }

  /// Nodes visited by the most recent search on this thread.
  static std::uint64_t last_node_count();

 private:
  std::vector<cube::Move> search(const cube::CubeState& s, Goal goal) const;

  PruningTable d_layer_;
  PruningTable permutation_;
  PruningTable twist_;
};

/// Process-wide solver, built on first use.
const Solver& default_solver();

/// A plan rewritten so every layer turn is made on one face of the cube as
/// the player holds it, with whole-cube rotations inserted where needed.
struct PresentationPlan {
  std::vector<cube::Move> moves;
  std::vector<Checkpoint> checkpoints;
  cube::Rotation final_pose;
};

/// `initial_pose.image(f)` is where the reference face `f` physically is.
PresentationPlan ergonomize(const Plan& plan, const cube::Rotation& initial_pose,
                            cube::Face comfort_face = cube::Face::U);

/// Drops rotations and renames turns back to reference faces.
Plan strip_and_rename(const PresentationPlan& plan, const cube::Rotation& initial_pose);

}  // namespace pipecube::solver
