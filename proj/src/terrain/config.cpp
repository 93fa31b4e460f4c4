#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "pipecube/terrain.hpp"

namespace pipecube::terrain {
namespace {

[[noreturn]] void bad(const std::string& why) { throw TerrainError(ErrorCode::InvalidConfig, why); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

long long to_int(const std::string& s, const std::string& key) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad("'" + key + "' expects an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true") return true;
  if (s == "false") return false;
  bad("'" + key + "' expects true or false");
}

Coord to_coord(const std::string& s, const std::string& key) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) bad("'" + key + "' expects x,y");
  return {static_cast<int>(to_int(trim(s.substr(0, comma)), key)),
          static_cast<int>(to_int(trim(s.substr(comma + 1)), key))};
}

std::string coord_text(Coord c) { return std::to_string(c.x) + "," + std::to_string(c.y); }

}  // namespace

bool TerrainConfig::is_river(Coord c) const {
  return std::find(river.begin(), river.end(), c) != river.end();
}

bool TerrainConfig::is_house(Coord c) const {
  return std::find(houses.begin(), houses.end(), c) != houses.end();
}

bool TerrainConfig::is_static(Coord c) const { return c == tank || c == shop || is_house(c); }

const PipeType* TerrainConfig::pipe(std::string_view name) const {
  for (const auto& p : pipes)
    if (p.name == name) return &p;
  return nullptr;
}

void TerrainConfig::validate() const {
  if (width <= 0 || height <= 0) bad("grid must be non-empty");
  if (elevation.size() != static_cast<std::size_t>(width * height)) bad("elevation rows do not match the grid size");
  for (int e : elevation)
    if (e < 0) bad("elevation must be >= 0");
  if (houses.size() != 3) bad("exactly 3 houses required, got " + std::to_string(houses.size()));

  std::set<Coord> statics;
  auto add_static = [&](Coord c, const char* what) {
    if (!in_bounds(c)) bad(std::string(what) + " out of bounds");
    if (is_river(c)) bad(std::string(what) + " on a river cell");
    if (!statics.insert(c).second) bad(std::string(what) + " overlaps another static asset");
  };
  add_static(tank, "tank");
  add_static(shop, "shop");
  for (Coord h : houses) add_static(h, "house");
  for (Coord r : river)
    if (!in_bounds(r)) bad("river cell out of bounds");
  if (!in_bounds(start) || is_river(start) || start == tank || is_house(start))
    bad("start cell must be open ground");

  if (portal_period < 1) bad("portal_period must be >= 1");
  if (!(pressure.source_head > pressure.min_pressure && pressure.min_pressure > 0))
    bad("need source_head > min_pressure > 0");
  if (pressure.boost_uses < 0 || pressure.boost_amount < 0) bad("boost settings must be >= 0");
  std::set<std::string> names;
  for (const auto& p : pipes) {
    if (p.decrement <= 0) bad("pipe '" + p.name + "' needs a positive decrement");
    if (p.price < 0 || p.bundle < 1) bad("pipe '" + p.name + "' has a bad price or bundle");
    if (!names.insert(p.name).second) bad("duplicate pipe type '" + p.name + "'");
  }
}

TerrainConfig parse_config(std::string_view text) {
  TerrainConfig c;
  std::vector<std::string> rows;
  bool have_width = false, have_height = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "width") { c.width = static_cast<int>(to_int(value, key)); have_width = true; }
    else if (key == "height") { c.height = static_cast<int>(to_int(value, key)); have_height = true; }
    else if (key == "row") rows.push_back(value);
    else if (key == "river") {
      std::istringstream cells{value};
      std::string cell;
      while (cells >> cell) c.river.push_back(to_coord(cell, key));
    }
    else if (key == "tank") c.tank = to_coord(value, key);
    else if (key == "shop") c.shop = to_coord(value, key);
    else if (key == "house") c.houses.push_back(to_coord(value, key));
    else if (key == "start") c.start = to_coord(value, key);
    else if (key == "portal_seed") c.portal_seed = static_cast<std::uint64_t>(to_int(value, key));
    else if (key == "portal_period") c.portal_period = static_cast<int>(to_int(value, key));
    else if (key == "source_head") c.pressure.source_head = static_cast<int>(to_int(value, key));
    else if (key == "min_pressure") c.pressure.min_pressure = static_cast<int>(to_int(value, key));
    else if (key == "boost_amount") c.pressure.boost_amount = static_cast<int>(to_int(value, key));
    else if (key == "boost_uses") c.pressure.boost_uses = static_cast<int>(to_int(value, key));
    else if (key == "require_fence") c.require_fence = to_bool(value, key);
    else if (key == "portal_requires_key") c.portal_requires_key = to_bool(value, key);
    else if (key == "pipe") {
      // name orientation diameter decrement price bundle
      std::istringstream f{value};
      std::string name, orient, diam, dec, price, bundle;
      if (!(f >> name >> orient >> diam >> dec >> price >> bundle)) bad("pipe expects 6 fields");
      PipeType p;
      p.name = name;
      if (orient == "horizontal") p.orientation = Orientation::Horizontal;
      else if (orient == "vertical") p.orientation = Orientation::Vertical;
      else bad("pipe orientation must be horizontal or vertical");
      if (diam == "wide") p.diameter = Diameter::Wide;
      else if (diam == "narrow") p.diameter = Diameter::Narrow;
      else bad("pipe diameter must be wide or narrow");
      p.decrement = static_cast<int>(to_int(dec, key));
      p.price = static_cast<int>(to_int(price, key));
      p.bundle = static_cast<int>(to_int(bundle, key));
      c.pipes.push_back(p);
    }
    else bad("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!have_width || !have_height) bad("width and height are required");
  if (rows.size() != static_cast<std::size_t>(c.height)) bad("expected one row line per grid row");
  for (const auto& r : rows) {
    if (r.size() != static_cast<std::size_t>(c.width)) bad("row length differs from width");
    for (char ch : r) {
      if (ch < '0' || ch > '9') bad("elevation rows are digit strings");
      c.elevation.push_back(ch - '0');
    }
  }
  c.validate();
  return c;
}

std::string format_config(const TerrainConfig& c) {
  std::ostringstream out;
  out << "width = " << c.width << "\nheight = " << c.height << "\n";
  for (int y = 0; y < c.height; ++y) {
    out << "row = ";
    for (int x = 0; x < c.width; ++x) out << c.elevation_at({x, y});
    out << "\n";
  }
  if (!c.river.empty()) {
    out << "river =";
    for (Coord r : c.river) out << ' ' << coord_text(r);
    out << "\n";
  }
  out << "tank = " << coord_text(c.tank) << "\nshop = " << coord_text(c.shop) << "\n";
  for (Coord h : c.houses) out << "house = " << coord_text(h) << "\n";
  out << "start = " << coord_text(c.start) << "\n";
  out << "portal_seed = " << c.portal_seed << "\nportal_period = " << c.portal_period << "\n";
  out << "source_head = " << c.pressure.source_head << "\nmin_pressure = " << c.pressure.min_pressure
      << "\nboost_amount = " << c.pressure.boost_amount << "\nboost_uses = " << c.pressure.boost_uses << "\n";
  out << "require_fence = " << (c.require_fence ? "true" : "false") << "\n";
  out << "portal_requires_key = " << (c.portal_requires_key ? "true" : "false") << "\n";
  for (const auto& p : c.pipes)
    out << "pipe = " << p.name << ' ' << (p.orientation == Orientation::Horizontal ? "horizontal" : "vertical")
        << ' ' << (p.diameter == Diameter::Wide ? "wide" : "narrow") << ' ' << p.decrement << ' ' << p.price
        << ' ' << p.bundle << "\n";
  return out.str();
}

// Left of a north-south river: a raised block in the north-west corner with
// the shop and one house on it, the tank tucked against the block so three
// fences close it off, and two houses across the river.
TerrainConfig default_terrain() {
  TerrainConfig c;
  c.width = 12;
  c.height = 8;
  const std::array<const char*, 8> rows{"111100000000", "111100000000", "111100000000", "000000000000",
                                        "000000000000", "000000000000", "000000000000", "000000000000"};
  for (const char* r : rows)
    for (const char* p = r; *p; ++p) c.elevation.push_back(*p - '0');
  for (int y = 0; y < c.height; ++y) c.river.push_back({6, y});
  c.tank = {0, 3};
  c.shop = {1, 1};
  c.houses = {{2, 1}, {7, 4}, {11, 4}};
  c.start = {4, 6};
  c.portal_seed = 1;
  c.portal_period = 4;
  c.pipes = {
      {"wide", Orientation::Horizontal, Diameter::Wide, 5, 1, 8},
      {"narrow", Orientation::Horizontal, Diameter::Narrow, 8, 1, 6},
      {"riser", Orientation::Vertical, Diameter::Wide, 10, 1, 2},
  };
  c.validate();
  return c;
}

}  // namespace pipecube::terrain
