#pragma once

// Visual cues for the next planned move, and classification of what the
// player actually did to the cube.

#include <cstdint>
#include <string>
#include <variant>

#include "pipecube/cube.hpp"
#include "pipecube/solver.hpp"

namespace pipecube::cue {

/// Turn a layer: the character stands on `character`, the target asset on
/// `target`; the cued turn carries the character's sticker onto the target.
struct LayerCue {
  cube::Face face = cube::Face::U;
  cube::Amount direction = cube::Amount::CW;
  cube::Cell character;
  cube::Cell target;
  bool operator==(const LayerCue&) const = default;
};

/// Arrow at the centre of the cube: turn the whole cube.
struct WholeCubeCue {
  cube::Axis axis = cube::Axis::X;
  cube::Amount direction = cube::Amount::CW;
  bool operator==(const WholeCubeCue&) const = default;
};

struct CheckpointReached {
  solver::Goal which = solver::Goal::Phase1;
  bool operator==(const CheckpointReached&) const = default;
};

struct NoCue {
  bool operator==(const NoCue&) const = default;
};

using Cue = std::variant<NoCue, LayerCue, WholeCubeCue, CheckpointReached>;

/// Cue for a single move. Layer turns are named in the reference frame and
/// shown on the face `pose` carries them to.
Cue move_cue(const cube::Move& m, const cube::Rotation& pose = cube::Rotation::identity());

/// CheckpointReached when `cursor` sits on a checkpoint, otherwise the cue
/// for plan.moves[cursor]; NoCue past the end.
Cue next_cue(const solver::Plan& plan, std::size_t cursor,
             const cube::Rotation& pose = cube::Rotation::identity());

struct DeviationPolicy {
  int max_incorrect = 3;
  bool reset_at_checkpoint = false;
};

enum class Phase : std::uint8_t { Phase1, Phase2 };
solver::Goal goal_of(Phase p);

struct OnPlan {
  std::size_t advanced_to = 0;
  bool operator==(const OnPlan&) const = default;
};
struct NoChange {
  bool operator==(const NoChange&) const = default;
};
struct SingleDeviation {
  cube::Move detected_move;
  solver::Plan new_plan;
  bool operator==(const SingleDeviation&) const = default;
};
struct MultiDeviation {
  bool operator==(const MultiDeviation&) const = default;
};

using ObservationResult = std::variant<OnPlan, NoChange, SingleDeviation, MultiDeviation>;

/// Compares canonical forms, so a differently named move with the planned
/// effect counts as on plan. A recognised single wrong move that would exceed
/// the policy budget is reported as MultiDeviation.
ObservationResult observe(const cube::CubeState& prev, const cube::CubeState& expected,
                          const cube::CubeState& observed, const DeviationPolicy& policy,
                          int deviations_so_far, std::size_t cursor, Phase phase,
                          const solver::Solver& solver = solver::default_solver());

/// The single canonical move taking `prev` to `observed`, if any.
std::optional<cube::Move> single_move_between(const cube::CubeState& prev,
                                              const cube::CubeState& observed);

/// Fresh optimal plan toward the active phase goal. In phase 2 the search
/// goes straight to Solved even if the D layer has been broken.
solver::Plan replan(const cube::CubeState& observed, Phase phase,
                    const solver::Solver& solver = solver::default_solver());

std::string describe(const Cue& c);

}  // namespace pipecube::cue
