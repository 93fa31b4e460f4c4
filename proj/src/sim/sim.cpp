#include "pipecube/sim.hpp"

#include <deque>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pipecube/random.hpp"

namespace pipecube::sim {

using session::Session;
using terrain::Coord;
using terrain::Direction;

std::string describe(const BotPolicy& p) {
  if (std::holds_alternative<Perfect>(p)) return "perfect";
  std::ostringstream out;
  out << "noisy(" << std::get<Noisy>(p).p_error << ")";
  return out.str();
}

double p_error(const BotPolicy& p) { return std::holds_alternative<Noisy>(p) ? std::get<Noisy>(p).p_error : 0.0; }

std::vector<ScriptStep> default_script() {
  using namespace session;
  using D = Direction;
  std::vector<ScriptStep> s;
  s.push_back(PlaceAction{cube::AssetClass::Ladder, {3, 3}, D::N});
  s.push_back(GoTo{{1, 1}});
  s.push_back(BuyAction{"wide"});
  s.push_back(BuyAction{"wide"});
  s.push_back(BuyAction{"riser"});
  s.push_back(PlaceAction{cube::AssetClass::Bridge, {6, 3}, std::nullopt});
  // Tank east, up onto the plateau to the first house.
  s.push_back(LayAction{"wide", {0, 3}, D::E});
  s.push_back(LayAction{"wide", {1, 3}, D::E});
  s.push_back(LayAction{"riser", {2, 3}, D::N});
  s.push_back(LayAction{"wide", {2, 2}, D::N});
  // Trunk across the bridge, one drop to the near house, on to the far one.
  for (int x = 2; x < 7; ++x) s.push_back(LayAction{"wide", {x, 3}, D::E});
  s.push_back(LayAction{"wide", {7, 3}, D::S});
  for (int x = 7; x < 11; ++x) s.push_back(LayAction{"wide", {x, 3}, D::E});
  s.push_back(LayAction{"wide", {11, 3}, D::S});
  return s;
}

std::optional<std::vector<Direction>> path_to(const terrain::TerrainState& s, Coord goal) {
  std::map<Coord, std::pair<Coord, Direction>> came_from;
  std::deque<Coord> queue{s.character};
  came_from[s.character] = {s.character, Direction::N};
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    if (c == goal) {
      std::vector<Direction> path;
      for (Coord at = goal; at != s.character; at = came_from[at].first) path.push_back(came_from[at].second);
      return std::vector<Direction>(path.rbegin(), path.rend());
    }
    for (Direction d : {Direction::N, Direction::S, Direction::E, Direction::W}) {
      const Coord n = terrain::step(c, d);
      if (came_from.count(n) || terrain::step_blocker(s, c, n)) continue;
      came_from[n] = {c, d};
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

namespace {

constexpr int kActionLimit = 100000;

cube::Move choose_turn(const BotPolicy& policy, const Session& s, Rng& rng) {
  const auto& c = s.cube();
  const cube::Move planned = c.plan.moves.at(c.cursor);
  cube::Move reference = planned;
  // Always draw, so the stream does not depend on p.
  const double u = uniform_unit(rng);
  const std::uint64_t pick = uniform_below(rng, 8);
  if (u < p_error(policy)) {
    std::vector<cube::Move> wrong;
    for (const cube::Move& m : cube::kCanonicalMoves)
      if (m != planned) wrong.push_back(m);
    reference = wrong[pick];
  }
  if (reference == planned) {
    // Read the turn off the cue, the way a player would.
    const cue::Cue shown = s.current_cue();
    const auto& l = std::get<cue::LayerCue>(shown);
    return cube::Move::turn(l.face, l.direction);
  }
  return cube::Move::turn(c.pose.image(reference.face), reference.amount);
}

}  // namespace

RunRow play_one(const BotPolicy& policy, const RunOptions& options, std::uint64_t seed, Session* out) {
  Rng rng(seed);
  const cube::CubeState scramble = random_canonical_state(rng);
  const cube::Rotation& held = cube::Rotation::all()[uniform_below(rng, 24)];
  const cube::Scan scan = cube::render_stickers(cube::compose(scramble, held.transform()), options.session.face_map);

  session::SessionOptions so = options.session;
  so.seed = seed;
  Session s = Session::create(so, "sim");

  RunRow row;
  row.seed = seed;
  s.submit_scan(scan);
  row.scan_steps = static_cast<int>(scan.size());
  if (s.cube().state && !s.cube().solved) {
    if (s.cube().phase == cue::Phase::Phase1)
      row.phase1_plan = static_cast<int>(s.cube().plan.size());
    else
      row.phase2_plan = static_cast<int>(s.cube().plan.size());
  }

  std::size_t script_at = 0;
  std::vector<Direction> pending;  // walk in progress
  bool phase2_seen = s.cube().phase == cue::Phase::Phase2;
  int cube_steps = 0;

  while (s.outcome().status == terrain::Outcome::InProgress) {
    if (++row.total_actions > kActionLimit) throw std::runtime_error("bot exceeded the action limit");
    if (s.mode() == session::Mode::Cube) {
      const bool phase1 = s.cube().phase == cue::Phase::Phase1;
      s.submit_cube(choose_turn(policy, s, rng));
      ++cube_steps;
      ++(phase1 ? row.phase1_steps : row.phase2_steps);
      if (!phase2_seen && s.cube().phase == cue::Phase::Phase2 && !s.cube().solved) {
        phase2_seen = true;
        row.phase2_plan = static_cast<int>(s.cube().plan.size());
      }
      continue;
    }
    const terrain::TerrainState& t = s.terrain();
    if (!s.cube().solved) {
      if (!t.portal) {
        s.submit_terrain(session::WaitAction{});
      } else if (t.character == *t.portal) {
        s.submit_terrain(session::EnterPortalAction{});
        ++row.portal_entries;
      } else {
        const auto path = path_to(t, *t.portal);
        if (!path) throw std::runtime_error("portal out of reach");
        s.submit_terrain(session::MoveAction{path->front()});
      }
      ++row.reaching_steps;
      continue;
    }
    if (!pending.empty()) {
      s.submit_terrain(session::MoveAction{pending.front()});
      pending.erase(pending.begin());
      ++row.pipe_steps;
      continue;
    }
    if (script_at >= options.script.size()) throw std::runtime_error("terrain script ended before the game did");
    const ScriptStep& step = options.script[script_at++];
    if (const auto* go = std::get_if<GoTo>(&step)) {
      const auto path = path_to(t, go->cell);
      if (!path) throw std::runtime_error("script target out of reach");
      pending = *path;
      --row.total_actions;
      continue;
    }
    s.submit_terrain(std::get<session::TerrainAction>(step));
    ++row.pipe_steps;
  }

  row.outcome = s.outcome().status;
  row.loss_reason = s.outcome().reason;
  row.deviations = s.cube().deviations;
  if (row.loss_reason == session::LossReason::CubeErrors) row.cube_steps_at_loss = cube_steps;
  if (out) *out = std::move(s);
  return row;
}

Aggregate aggregate(std::span<const RunRow> rows) {
  Aggregate a;
  a.runs = static_cast<int>(rows.size());
  long long scan = 0, p1 = 0, p2 = 0, reach = 0, pipe = 0, dev = 0, total = 0;
  for (const RunRow& r : rows) {
    a.wins += r.outcome == terrain::Outcome::Won;
    a.losses += r.outcome == terrain::Outcome::Lost;
    scan += r.scan_steps;
    p1 += r.phase1_steps;
    p2 += r.phase2_steps;
    reach += r.reaching_steps;
    pipe += r.pipe_steps;
    dev += r.deviations;
    total += r.total_actions;
  }
  if (a.runs == 0) return a;
  const double n = a.runs;
  a.loss_rate = a.losses / n;
  a.mean_scan = scan / n;
  a.mean_phase1 = p1 / n;
  a.mean_phase2 = p2 / n;
  a.mean_reaching = reach / n;
  a.mean_pipe = pipe / n;
  a.mean_deviations = dev / n;
  a.mean_total = total / n;
  return a;
}

RunReport run(const BotPolicy& policy, const RunOptions& options, std::uint64_t seed, int n_runs) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  RunReport report{policy, seed, std::vector<RunRow>(n_runs), {}};
  auto work = [&](int first, int stride) {
    for (int i = first; i < n_runs; i += stride) {
      report.rows[i] = play_one(policy, options, splitmix64(seed + static_cast<std::uint64_t>(i)));
      report.rows[i].run = i;
    }
  };
  const int threads = std::max(1, std::min(options.threads, n_runs));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  report.summary = aggregate(report.rows);
  return report;
}

std::vector<SweepPoint> sweep(std::span<const double> grid, int n_runs, const RunOptions& options,
                              std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepPoint> out;
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_error must be in [0, 1]");
    out.push_back({p, run(Noisy{p}, options, seed, n_runs).summary});
  }
  return out;
}

std::string reference_annotation() {
  const ReferenceRow& r = kReference;
  std::ostringstream out;
  out << "# reference (human players, mean of 5 games): steps reaching=" << r.reaching_steps
      << " phase1=" << r.phase1_steps << " phase2=" << r.phase2_steps << " pipe=" << r.pipe_steps
      << " scan=" << r.scan_steps << "\n"
      << "# reference seconds: reaching=" << r.reaching_seconds << " phase1=" << r.phase1_seconds
      << " phase2=" << r.phase2_seconds << " pipe=" << r.pipe_seconds << " scan=" << r.scan_seconds << "\n"
      << "# the reference phase1 figure includes the " << r.scan_steps
      << " scan steps; the bot phase1 figure does not\n";
  return out.str();
}

std::string to_csv(const RunReport& rep) {
  std::ostringstream out;
  out << "run,seed,policy,p_error,outcome,loss_reason,scan_steps,phase1_steps,phase2_steps,phase1_plan,"
         "phase2_plan,reaching_steps,pipe_steps,deviations,portal_entries,total_actions\n";
  for (const RunRow& r : rep.rows) {
    out << r.run << ',' << r.seed << ',' << (std::holds_alternative<Perfect>(rep.policy) ? "perfect" : "noisy")
        << ',' << p_error(rep.policy) << ',' << (r.outcome == terrain::Outcome::Won ? "won" : "lost") << ','
        << (r.loss_reason ? session::to_string(*r.loss_reason) : "") << ',' << r.scan_steps << ','
        << r.phase1_steps << ',' << r.phase2_steps << ',' << r.phase1_plan << ',' << r.phase2_plan << ','
        << r.reaching_steps << ',' << r.pipe_steps << ',' << r.deviations << ',' << r.portal_entries << ','
        << r.total_actions << '\n';
  }
  const Aggregate& a = rep.summary;
  out << std::fixed << std::setprecision(3);
  out << "# runs=" << a.runs << " wins=" << a.wins << " losses=" << a.losses << " loss_rate=" << a.loss_rate
      << "\n# mean steps: scan=" << a.mean_scan << " phase1=" << a.mean_phase1 << " phase2=" << a.mean_phase2
      << " reaching=" << a.mean_reaching << " pipe=" << a.mean_pipe << " deviations=" << a.mean_deviations
      << " total=" << a.mean_total << "\n";
  out << reference_annotation();
  return out.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  out << "p_error,runs,wins,losses,loss_rate,mean_deviations,mean_phase1,mean_phase2\n";
  out << std::setprecision(6);
  for (const SweepPoint& p : points)
    out << p.p_error << ',' << p.summary.runs << ',' << p.summary.wins << ',' << p.summary.losses << ','
        << p.summary.loss_rate << ',' << p.summary.mean_deviations << ',' << p.summary.mean_phase1 << ','
        << p.summary.mean_phase2 << '\n';
  return out.str();
}

}  // namespace pipecube::sim
