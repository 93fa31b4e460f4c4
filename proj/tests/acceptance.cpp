// Acceptance run: one PASS/FAIL line per headline property, each checked
// against a test-side oracle at exact tolerance. Exit status is the number
// of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <unordered_set>

#include "bfs_oracle.hpp"
#include "pipecube/random.hpp"
#include "pipecube/sim.hpp"
#include "sticker_model.hpp"

using namespace pipecube;
using namespace pipecube::cube;
using cue::Phase;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(const char* name, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %-22s %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", name, c.detail.c_str(), secs);
  std::fflush(stdout);
  failures += !c.ok;
}

const solver::Solver& S() { return solver::default_solver(); }

template <class Kind>
bool throws_kind(const Scan& scan, Kind want) {
  try {
    decode_scan(scan);
  } catch (const ScanError& e) {
    return e.kind() == want;
  }
  return false;
}

void set_corner(Scan& scan, std::uint8_t slot, const std::array<AssetClass, 3>& classes) {
  for (std::uint8_t p = 0; p < 3; ++p) {
    const Cell c = corner_cell(slot, p);
    scan[static_cast<int>(c.face)].cells[c.index] = classes[p];
  }
}

std::array<AssetClass, 3> corner_of(const Scan& scan, std::uint8_t slot) {
  std::array<AssetClass, 3> out;
  for (std::uint8_t p = 0; p < 3; ++p) {
    const Cell c = corner_cell(slot, p);
    out[p] = scan[static_cast<int>(c.face)].cells[c.index];
  }
  return out;
}

}  // namespace

int main() {
  report("enumeration", [] {
    Check c;
    // Hash-set BFS kept on the test side; the library's indexed BFS must agree.
    const auto& oracle = bfs_oracle::to_solved();
    const std::uint64_t expected = 5040ull * 729ull;  // 7! * 3^6
    c.expect(oracle.size() == expected, "oracle visited " + std::to_string(oracle.size()));
    const Enumeration lib = enumerate_all();
    c.expect(lib.total == expected, "library counted " + std::to_string(lib.total));
    c.expect(lib.depth_histogram == oracle.histogram(), "depth histograms differ");
    c.expect(lib.max_depth == oracle.diameter(), "diameters differ");
    c.detail = "states=" + std::to_string(lib.total) + " max_depth=" + std::to_string(lib.max_depth) +
               (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("solver_optimality", [] {
    Check c;
    const auto& d1 = bfs_oracle::to_phase1();
    const auto& d2 = bfs_oracle::to_solved();
    Rng rng(500);
    int n = 0;
    for (; n < 600; ++n) {
      const CubeState s = random_canonical_state(rng);
      const auto p1 = S().solve_phase1(s);
      c.expect(static_cast<int>(p1.size()) == d1.at(s), "phase1 length off the oracle");
      const CubeState mid = apply_moves(s, p1.moves);
      c.expect(d_layer_solved(mid), "phase1 plan misses the checkpoint");
      const auto p2 = S().solve_phase2(mid);
      c.expect(static_cast<int>(p2.size()) == d2.at(mid), "phase2 length off the oracle");
      c.expect(apply_moves(mid, p2.moves) == CubeState::solved(), "phase2 plan does not solve");
      c.expect(static_cast<int>(S().solve_to_solved(s).size()) == d2.at(s), "direct solve off the oracle");
    }
    // Maxima: every state at the far end of each oracle.
    int max1 = 0, max2 = 0, max_full = 0, far1 = 0, far_full = 0;
    d1.for_each([&](std::uint64_t k, int d) {
      if (d != d1.diameter()) return;
      ++far1;
      max1 = std::max(max1, static_cast<int>(S().solve_phase1(bfs_oracle::unpack(k)).size()));
    });
    for (const CubeState& g : bfs_oracle::phase1_goal_states())
      max2 = std::max(max2, static_cast<int>(S().solve_phase2(g).size()));
    int goal_diameter = 0;
    for (const CubeState& g : bfs_oracle::phase1_goal_states()) goal_diameter = std::max(goal_diameter, d2.at(g));
    d2.for_each([&](std::uint64_t k, int d) {
      if (d != d2.diameter()) return;
      ++far_full;
      max_full = std::max(max_full, static_cast<int>(S().solve_to_solved(bfs_oracle::unpack(k)).size()));
    });
    c.expect(max1 == d1.diameter(), "phase1 maximum " + std::to_string(max1));
    c.expect(max2 == goal_diameter, "phase2 maximum " + std::to_string(max2));
    c.expect(max_full == d2.diameter(), "full maximum " + std::to_string(max_full));
    c.detail = "random=" + std::to_string(n) + " max phase1=" + std::to_string(max1) + "/" +
               std::to_string(d1.diameter()) + " (" + std::to_string(far1) + " states) phase2=" +
               std::to_string(max2) + "/" + std::to_string(goal_diameter) + " full=" + std::to_string(max_full) +
               "/" + std::to_string(d2.diameter()) + " (" + std::to_string(far_full) + " states)" +
               (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("scan_round_trip", [] {
    Check c;
    Rng rng(10000);
    for (int i = 0; i < 10000; ++i) {
      const CubeState s = random_state(rng);
      c.expect(decode_scan(render_stickers(s)) == s, "round trip failed");
    }
    int malformed = 0;
    for (int i = 0; i < 1000; ++i) {
      const CubeState s = random_state(rng);
      const Scan good = render_stickers(s);
      const auto slot = static_cast<std::uint8_t>(uniform_below(rng, 8));
      const auto other = static_cast<std::uint8_t>((slot + 1 + uniform_below(rng, 7)) % 8);
      const auto triple = corner_of(good, slot);

      // Two classes from opposite faces never share a corner.
      Scan unknown = good;
      set_corner(unknown, slot, {AssetClass::Clock, AssetClass::Fence, triple[2]});
      c.expect(throws_kind(unknown, ScanErrorKind::UnknownCubie), "impossible corner not UnknownCubie");

      Scan dup = good;
      set_corner(dup, other, triple);
      c.expect(throws_kind(dup, ScanErrorKind::DuplicateCubie), "copied corner not DuplicateCubie");

      Scan twisted = good;
      set_corner(twisted, slot, {triple[1], triple[2], triple[0]});
      c.expect(throws_kind(twisted, ScanErrorKind::OrientationParityError), "twist not a parity error");

      Scan swapped = good;
      set_corner(swapped, slot, {triple[0], triple[2], triple[1]});
      c.expect(throws_kind(swapped, ScanErrorKind::UnknownCubie) ||
                   throws_kind(swapped, ScanErrorKind::OrientationParityError),
               "swapped stickers accepted");
      malformed += 4;
    }
    c.detail = "states=10000 malformed=" + std::to_string(malformed) + (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("error_recovery", [] {
    Check c;
    const auto& d1 = bfs_oracle::to_phase1();
    const auto& d2 = bfs_oracle::to_solved();
    const cue::DeviationPolicy policy{3, false};
    Rng rng(777);
    int singles = 0, multis = 0;
    while (singles < 10000) {
      const CubeState prev = random_canonical_state(rng);
      const Move planned = kCanonicalMoves[uniform_below(rng, 9)];
      const Move wrong = kCanonicalMoves[uniform_below(rng, 9)];
      if (wrong == planned) continue;
      const Phase phase = uniform_below(rng, 2) ? Phase::Phase2 : Phase::Phase1;
      const CubeState observed = apply_move(prev, wrong);
      const auto r = cue::observe(prev, apply_move(prev, planned), observed, policy, 0, 0, phase);
      ++singles;
      const auto* d = std::get_if<cue::SingleDeviation>(&r);
      c.expect(d != nullptr, "wrong move not a single deviation");
      if (!d) continue;
      c.expect(d->detected_move == wrong, "wrong move misidentified");
      const CubeState end = apply_moves(observed, d->new_plan.moves);
      if (phase == Phase::Phase1) {
        c.expect(d_layer_solved(end), "replan misses phase 1");
        c.expect(static_cast<int>(d->new_plan.size()) == d1.at(observed), "phase 1 replan not optimal");
      } else {
        c.expect(end == CubeState::solved(), "replan misses solved");
        c.expect(static_cast<int>(d->new_plan.size()) == d2.at(observed), "phase 2 replan not optimal");
      }
    }
    while (multis < 1000) {
      const CubeState prev = random_canonical_state(rng);
      const Move planned = kCanonicalMoves[uniform_below(rng, 9)];
      const CubeState far = apply_moves(prev, std::vector<Move>{kCanonicalMoves[uniform_below(rng, 9)],
                                                                 kCanonicalMoves[uniform_below(rng, 9)]});
      // Keep only composites no single move (or none) explains.
      bool near = far == prev;
      for (const Move& m : kCanonicalMoves) near = near || apply_move(prev, m) == far;
      if (near) continue;
      ++multis;
      const auto r = cue::observe(prev, apply_move(prev, planned), far, policy, 0, 0, Phase::Phase1);
      c.expect(std::holds_alternative<cue::MultiDeviation>(r), "two-move composite not a multi deviation");
    }
    c.detail = "single=" + std::to_string(singles) + " multi=" + std::to_string(multis) + (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("cue_faithfulness", [] {
    Check c;
    int cases = 0;
    for (const Rotation& pose : Rotation::all())
      for (const Move& m : kCanonicalMoves) {
        ++cases;
        const cue::Cue shown = cue::move_cue(m, pose);
        const auto* l = std::get_if<cue::LayerCue>(&shown);
        c.expect(l != nullptr, "no layer cue");
        if (!l) continue;
        const Move physical = Move::turn(pose.image(m.face), m.amount);
        c.expect(l->face == physical.face && l->direction == physical.amount, "cue names the wrong turn");
        c.expect(l->character.face == Face::F || l->character.face == Face::U, "character off the front/top");
        c.expect(sticker_model::move_cell(l->character, physical) == l->target, "turn misses the target");
        c.expect(l->character != l->target, "character already on the target");
      }
    c.detail = "moves x poses=" + std::to_string(cases) + (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("terrain_scenarios", [] {
    Check c;
    // Win: the bot plays the default script after a solve.
    session::Session won = session::Session::create({});
    sim::play_one(sim::Perfect{}, {}, 2024, &won);
    c.expect(won.outcome().status == terrain::Outcome::Won, "default scenario not won");
    const auto ledger = terrain::compute_ledger(won.terrain());
    // Count segments along each tank-to-house path: wide loses 5, the riser 10.
    const int plateau = 100 - 3 * 5 - 10, mid = 100 - 8 * 5, far = 100 - 12 * 5;
    c.expect(ledger.at({2, 1}) == plateau && ledger.at({7, 4}) == mid && ledger.at({11, 4}) == far,
             "house pressures off the hand ledger");

    // Loss: a straight run of wide pipe, 5 lost per segment from 100.
    session::SessionOptions o;
    terrain::TerrainConfig& cfg = o.terrain;
    cfg.width = 19;
    cfg.height = 3;
    cfg.elevation.assign(cfg.width * cfg.height, 0);
    cfg.river.clear();
    cfg.tank = {0, 1};
    cfg.shop = {1, 0};
    cfg.houses = {{4, 2}, {5, 2}, {6, 2}};
    cfg.start = {2, 0};
    session::Session lost = session::Session::create(o);
    lost.submit_scan(render_stickers(CubeState::solved()));
    lost.submit_terrain(session::MoveAction{terrain::Direction::W});
    for (int i = 0; i < 3; ++i) lost.submit_terrain(session::BuyAction{"wide"});
    int lost_at = 0;
    for (int k = 1; k <= 18 && lost.outcome().status == terrain::Outcome::InProgress; ++k) {
      lost.submit_terrain(session::LayAction{"wide", {k - 1, 1}, terrain::Direction::E});
      if (lost.outcome().status == terrain::Outcome::Lost) lost_at = k;
    }
    int first_below = 0;
    for (int k = 1; !first_below; ++k)
      if (100 - 5 * k < 20) first_below = k;
    c.expect(lost_at == first_below, "lost on placement " + std::to_string(lost_at));
    c.expect(lost.outcome().reason == session::LossReason::Pressure, "loss not attributed to pressure");

    // Replay must regenerate the log byte for byte.
    int replays = 0;
    for (session::Session* s : {&won, &lost}) {
      c.expect(session::save(session::replay(s->events())).dump() == session::save(*s).dump(), "replay differs");
      ++replays;
    }
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      session::Session s = session::Session::create({});
      sim::play_one(sim::Noisy{0.2}, {}, seed, &s);
      c.expect(session::save(session::load(session::save(s))).dump() == session::save(s).dump(), "reload differs");
      ++replays;
    }
    c.detail = "ledger=" + std::to_string(ledger.at({2, 1}).value_or(-1)) + "/" + std::to_string(ledger.at({7, 4}).value_or(-1)) + "/" +
               std::to_string(ledger.at({11, 4}).value_or(-1)) + " lost_at_segment=" + std::to_string(lost_at) +
               " replays=" + std::to_string(replays) + (c.ok ? "" : " " + c.detail);
    return c;
  });

  report("simulation", [] {
    Check c;
    const auto rep = sim::run(sim::Perfect{}, {}, 42, 100);
    c.expect(rep.summary.wins == 100, "perfect bot won " + std::to_string(rep.summary.wins));
    for (const auto& row : rep.rows) {
      Rng rng(row.seed);
      const CubeState scramble = random_canonical_state(rng);
      const auto p1 = S().solve_phase1(scramble);
      const auto p2 = S().solve_phase2(apply_moves(scramble, p1.moves));
      c.expect(row.phase1_steps == static_cast<int>(p1.size()), "phase 1 steps differ from the solver");
      c.expect(row.phase2_steps == static_cast<int>(p2.size()), "phase 2 steps differ from the solver");
    }
    const std::vector<double> grid{0.0, 0.1, 0.3, 1.0};
    const auto curve = sim::sweep(grid, 50, {}, 7);
    c.expect(curve.front().summary.loss_rate == 0.0, "loss at p=0");
    c.expect(curve.back().summary.loss_rate == 1.0, "no loss at p=1");
    const std::string csv = sim::to_csv(rep);
    const auto& r = sim::kReference;
    c.expect(r.phase1_steps == 21 && r.phase2_steps == 30 && r.pipe_steps == 50 && r.scan_steps == 6,
             "reference row values");
    c.expect(csv.find("phase1=21 phase2=30 pipe=50 scan=6") != std::string::npos, "reference row not printed");
    char buf[160];
    std::snprintf(buf, sizeof buf, "perfect=%d/100 loss@p0=%.2f loss@p1=%.2f reference=21/30/50/6",
                  rep.summary.wins, curve.front().summary.loss_rate, curve.back().summary.loss_rate);
    c.detail = buf + (c.ok ? std::string() : " " + c.detail);
    return c;
  });

  return failures;
}
