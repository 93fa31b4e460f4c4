#include "pipecube/cue.hpp"

#include <algorithm>

namespace pipecube::cue {

using cube::Amount;
using cube::Cell;
using cube::CubeState;
using cube::Face;
using cube::Move;

namespace {

bool cell_in_layer(Cell c, Face layer) {
  const auto f = cube::cell_facelet(c);
  for (std::uint8_t p = 0; p < 3; ++p)
    if (cube::corner_cell(f.slot, p).face == layer) return true;
  return false;
}

// Cells are shown on the front face, or on U when the B layer turns.
LayerCue layer_cue(Face face, Amount amount) {
  const Move turn = Move::turn(face, amount);
  const Face display = face == Face::B ? Face::U : Face::F;

  std::vector<Cell> candidates;
  for (std::uint8_t i = 0; i < 4; ++i)
    if (cell_in_layer(Cell{display, i}, face)) candidates.push_back(Cell{display, i});

  Cell character = candidates.front();
  if (candidates.size() == 2) {
    // Trailing cell: one quarter step in the turn direction carries its
    // corner into the other candidate's corner.
    const Move quarter = Move::turn(face, amount == Amount::CCW ? Amount::CCW : Amount::CW);
    const auto lead_slot = cube::cell_facelet(candidates[1]).slot;
    if (cube::cell_facelet(cube::cell_after(candidates[0], quarter)).slot != lead_slot)
      character = candidates[1];
  }
  return LayerCue{face, amount, character, cube::cell_after(character, turn)};
}

std::string_view amount_word(Amount a) {
  switch (a) {
    case Amount::CW: return "cw";
    case Amount::CCW: return "ccw";
    case Amount::Half: return "half";
  }
  return "?";
}

}  // namespace

solver::Goal goal_of(Phase p) { return p == Phase::Phase1 ? solver::Goal::Phase1 : solver::Goal::Solved; }

Cue move_cue(const Move& m, const cube::Rotation& pose) {
  if (m.is_rotation()) return WholeCubeCue{m.axis, m.amount};
  return layer_cue(pose.image(m.face), m.amount);
}

Cue next_cue(const solver::Plan& plan, std::size_t cursor, const cube::Rotation& pose) {
  for (const auto& c : plan.checkpoints)
    if (c.index == cursor) return CheckpointReached{c.goal};
  if (cursor >= plan.moves.size()) return NoCue{};
  return move_cue(plan.moves[cursor], pose);
}

std::optional<Move> single_move_between(const CubeState& prev, const CubeState& observed) {
  for (const Move& m : cube::kCanonicalMoves)
    if (cube::apply_move(prev, m) == observed) return m;
  return std::nullopt;
}

solver::Plan replan(const CubeState& observed, Phase phase, const solver::Solver& solver) {
  const CubeState s = cube::canonicalize(observed);
  return phase == Phase::Phase1 ? solver.solve_phase1(s) : solver.solve_to_solved(s);
}

ObservationResult observe(const CubeState& prev_in, const CubeState& expected_in,
                          const CubeState& observed_in, const DeviationPolicy& policy,
                          int deviations_so_far, std::size_t cursor, Phase phase,
                          const solver::Solver& solver) {
  const CubeState prev = cube::canonicalize(prev_in);
  const CubeState expected = cube::canonicalize(expected_in);
  const CubeState observed = cube::canonicalize(observed_in);

  if (observed == expected) return OnPlan{cursor + 1};
  if (observed == prev) return NoChange{};
  const auto wrong = single_move_between(prev, observed);
  if (!wrong || deviations_so_far + 1 > policy.max_incorrect) return MultiDeviation{};
  return SingleDeviation{*wrong, replan(observed, phase, solver)};
}

std::string describe(const Cue& c) {
  struct Visitor {
    std::string operator()(const NoCue&) const { return "none"; }
    std::string operator()(const LayerCue& l) const {
      auto cell = [](Cell x) { return std::string(1, cube::face_char(x.face)) + std::to_string(x.index); };
      return std::string("turn ") + cube::face_char(l.face) + " " + std::string(amount_word(l.direction)) +
             ": character " + cell(l.character) + " -> target " + cell(l.target);
    }
    std::string operator()(const WholeCubeCue& w) const {
      return std::string("rotate cube ") + "xyz"[static_cast<int>(w.axis)] + " " +
             std::string(amount_word(w.direction));
    }
    std::string operator()(const CheckpointReached& r) const {
      return "checkpoint " + std::string(solver::to_string(r.which));
    }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace pipecube::cue
