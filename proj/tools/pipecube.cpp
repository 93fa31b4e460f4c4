// pipecube command line: run the server, inspect scans, solve, replay saved
// games and run bot simulations.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pipecube/server.hpp"
#include "pipecube/sim.hpp"

using namespace pipecube;
using session::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

session::SessionOptions options_for(const std::string& config_path, std::optional<std::uint64_t> seed) {
  session::SessionOptions o;
  if (!config_path.empty()) o.terrain = terrain::parse_config(slurp(config_path));
  o.seed = seed;
  return o;
}

server::HttpServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string moves_text(const std::vector<cube::Move>& moves) { return cube::to_string(moves); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pipecube: cube-driven pipe laying game"};
  app.require_subcommand(1);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON service");
  int port = 8080;
  std::string host = "127.0.0.1", config;
  std::optional<std::uint64_t> seed;
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--config", config, "Terrain config file (default: built-in scenario)");
  serve->add_option("--seed", seed, "Portal seed for new sessions");

  // new
  auto* make = app.add_subcommand("new", "Create a session and print its save document");
  std::string out;
  make->add_option("--config", config, "Terrain config file");
  make->add_option("--seed", seed, "Portal seed");
  make->add_option("--out,-o", out, "Output file (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "Decode a six-line scan file");
  std::string scan_path;
  scan->add_option("file", scan_path, "Scan file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Print the two-phase plan for a scanned cube");
  solve->add_option("scanfile", scan_path, "Scan file")->required();

  // replay
  auto* replay = app.add_subcommand("replay", "Verify a saved game or event log and print its final state");
  std::string log_path;
  bool print_save = false;
  replay->add_option("logfile", log_path, "Save document or JSON array of events")->required();
  replay->add_flag("--save", print_save, "Print the re-saved document instead of the state view");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Play games with a bot and write a CSV report");
  std::string policy = "perfect";
  double p = 0.1;
  int runs = 100, threads = 1;
  std::uint64_t sim_seed = 42;
  std::vector<double> grid;
  simulate->add_option("--policy", policy, "perfect or noisy")
      ->check(CLI::IsMember({"perfect", "noisy"}))
      ->capture_default_str();
  simulate->add_option("--p", p, "Per-move error probability for the noisy bot")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--runs", runs, "Games to play")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Base seed")->capture_default_str();
  simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--config", config, "Terrain config file");
  simulate->add_option("--sweep", grid, "Error probabilities; writes a loss-rate curve instead")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--out,-o", out, "Output CSV (default stdout)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Count canonical states by distance from solved");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      server::Service service(options_for(config, seed));
      server::HttpServer http(service);
      g_server = &http;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!http.listen(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }

    if (*make) {
      const auto s = session::Session::create(options_for(config, seed));
      emit(session::save(s).dump(2) + "\n", out);
      return 0;
    }

    if (*scan || *solve) {
      const cube::Scan obs = cube::parse_scan_text(slurp(scan_path));
      const cube::CubeState raw = cube::decode_scan(obs);
      const auto form = cube::canonicalize_with_rotation(raw);
      const cube::Rotation pose = form.rotation.inverse();
      const auto cls = cube::classify(form.state);
      if (*scan) {
        json j{{"classification", cube::to_string(cls)},
               {"state", session::to_json(raw)},
               {"canonical", session::to_json(form.state)},
               {"canonical_index", cube::canonical_index(form.state)}};
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      const solver::Plan plan = solver::default_solver().solve_full(form.state);
      // The same turns named by the faces the player actually sees.
      std::vector<cube::Move> held;
      for (const auto& m : plan.moves) held.push_back(cube::Move::turn(pose.image(m.face), m.amount));
      std::cout << "classification: " << cube::to_string(cls) << "\n"
                << "plan: " << solver::to_string(plan) << "\n"
                << "as held: " << moves_text(held) << "\n"
                << "length: " << plan.size() << "\n";
      return 0;
    }

    if (*replay) {
      const json doc = json::parse(slurp(log_path));
      session::Session s = [&] {
        if (doc.is_array()) {
          std::vector<session::Event> log;
          for (const auto& e : doc) log.push_back(session::event_from_json(e));
          return session::replay(log);
        }
        return session::load(doc);
      }();
      std::cout << (print_save ? session::save(s) : s.view()).dump(2) << "\n";
      return 0;
    }

    if (*simulate) {
      sim::RunOptions o;
      o.session = options_for(config, std::nullopt);
      o.threads = threads;
      if (!grid.empty()) {
        emit(sim::sweep_csv(sim::sweep(grid, runs, o, sim_seed)), out);
        return 0;
      }
      const sim::BotPolicy bot = policy == "perfect" ? sim::BotPolicy{sim::Perfect{}} : sim::Noisy{p};
      const auto report = sim::run(bot, o, sim_seed, runs);
      emit(sim::to_csv(report), out);
      if (!out.empty() && out != "-") {
        const auto& a = report.summary;
        std::cerr << sim::describe(bot) << ": " << a.wins << "/" << a.runs << " won, mean phase1 " << a.mean_phase1
                  << ", phase2 " << a.mean_phase2 << ", pipe " << a.mean_pipe << "\n";
      }
      return 0;
    }

    if (*enumerate) {
      const auto e = cube::enumerate_all();
      std::cout << "states " << e.total << "\nmax_depth " << e.max_depth << "\n";
      for (std::size_t d = 0; d < e.depth_histogram.size(); ++d)
        std::cout << "depth " << d << " " << e.depth_histogram[d] << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << session::error_json(e).dump() << "\n";
    return 2;
  }
  return 0;
}
