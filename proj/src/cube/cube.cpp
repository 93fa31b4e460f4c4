#include "pipecube/cube.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

#include "pipecube/random.hpp"

namespace pipecube::cube {
namespace {

// Clockwise quarter turns as seen facing each face. new.perm[i] = old.perm[cp[i]].
struct TurnTable {
  std::array<std::uint8_t, 8> cp;
  std::array<std::uint8_t, 8> co;
};

// Indexed by Face (U, D, L, R, F, B).
constexpr std::array<TurnTable, 6> kTurns{{
    {{UBR, URF, UFL, ULB, DFR, DLF, DBL, DRB}, {0, 0, 0, 0, 0, 0, 0, 0}},  // U
    {{URF, UFL, ULB, UBR, DLF, DBL, DRB, DFR}, {0, 0, 0, 0, 0, 0, 0, 0}},  // D
    {{URF, ULB, DBL, UBR, DFR, UFL, DLF, DRB}, {0, 1, 2, 0, 0, 2, 1, 0}},  // L
    {{DFR, UFL, ULB, URF, DRB, DLF, DBL, UBR}, {2, 0, 0, 1, 1, 0, 0, 2}},  // R
    {{UFL, DLF, ULB, UBR, URF, DFR, DBL, DRB}, {1, 2, 0, 0, 2, 1, 0, 0}},  // F
    {{URF, UFL, UBR, DRB, DFR, DLF, ULB, DBL}, {0, 0, 1, 2, 0, 0, 2, 1}},  // B
}};

// Facelets of each slot: U/D facelet first, then clockwise around the corner.
constexpr std::array<std::array<Cell, 3>, 8> kCornerCells{{
    {{{Face::U, 3}, {Face::R, 0}, {Face::F, 1}}},  // URF
    {{{Face::U, 2}, {Face::F, 0}, {Face::L, 1}}},  // UFL
    {{{Face::U, 0}, {Face::L, 0}, {Face::B, 1}}},  // ULB
    {{{Face::U, 1}, {Face::B, 0}, {Face::R, 1}}},  // UBR
    {{{Face::D, 1}, {Face::F, 3}, {Face::R, 2}}},  // DFR
    {{{Face::D, 0}, {Face::L, 3}, {Face::F, 2}}},  // DLF
    {{{Face::D, 2}, {Face::B, 3}, {Face::L, 2}}},  // DBL
    {{{Face::D, 3}, {Face::R, 3}, {Face::B, 2}}},  // DRB
}};

constexpr int idx(Face f) { return static_cast<int>(f); }

CubeState from_table(const TurnTable& t) {
  CubeState s;
  s.perm = t.cp;
  s.orient = t.co;
  return s;
}

CubeState power(const CubeState& base, int n) {
  CubeState r;
  for (int i = 0; i < n; ++i) r = compose(r, base);
  return r;
}

int quarter_count(Amount a) {
  switch (a) {
    case Amount::CW: return 1;
    case Amount::Half: return 2;
    case Amount::CCW: return 3;
  }
  return 0;
}

struct MoveTables {
  std::array<std::array<CubeState, 3>, 6> layer;
  std::array<std::array<CubeState, 3>, 3> rotation;

  MoveTables() {
    for (Face f : kAllFaces) {
      const CubeState base = from_table(kTurns[idx(f)]);
      for (Amount a : {Amount::CW, Amount::CCW, Amount::Half})
        layer[idx(f)][static_cast<int>(a)] = power(base, quarter_count(a));
    }
    // On a 2x2 a whole-cube rotation is the two opposite layers turned together.
    const std::array<std::pair<Face, Face>, 3> pairs{
        {{Face::R, Face::L}, {Face::U, Face::D}, {Face::F, Face::B}}};
    for (int ax = 0; ax < 3; ++ax) {
      const CubeState base =
          compose(layer[idx(pairs[ax].first)][static_cast<int>(Amount::CW)],
                  layer[idx(pairs[ax].second)][static_cast<int>(Amount::CCW)]);
      for (Amount a : {Amount::CW, Amount::CCW, Amount::Half})
        rotation[ax][static_cast<int>(a)] = power(base, quarter_count(a));
    }
  }
};

const MoveTables& tables() {
  static const MoveTables t;
  return t;
}

std::array<Face, 6> base_rotation_image(Axis a) {
  using enum Face;
  // image[f] = where content at f goes.
  switch (a) {
    case Axis::X: return {B, F, L, R, U, D};  // U->B, D->F, F->U, B->D
    case Axis::Y: return {U, D, B, F, L, R};  // L->B, R->F, F->L, B->R
    case Axis::Z: return {R, L, U, D, F, B};  // U->R, D->L, L->U, R->D
  }
  return {U, D, L, R, F, B};
}

}  // namespace

bool CubeState::is_valid() const {
  std::array<bool, 8> seen{};
  int twist = 0;
  for (int i = 0; i < 8; ++i) {
    if (perm[i] > 7 || seen[perm[i]] || orient[i] > 2) return false;
    seen[perm[i]] = true;
    twist += orient[i];
  }
  return twist % 3 == 0;
}

CubeState compose(const CubeState& a, const CubeState& b) {
  CubeState r;
  for (int i = 0; i < 8; ++i) {
    r.perm[i] = a.perm[b.perm[i]];
    r.orient[i] = static_cast<std::uint8_t>((a.orient[b.perm[i]] + b.orient[i]) % 3);
  }
  return r;
}

CubeState inverse(const CubeState& s) {
  CubeState r;
  for (std::uint8_t i = 0; i < 8; ++i) {
    r.perm[s.perm[i]] = i;
    r.orient[s.perm[i]] = static_cast<std::uint8_t>((3 - s.orient[i]) % 3);
  }
  return r;
}

const CubeState& move_transform(const Move& m) {
  const auto& t = tables();
  if (m.is_layer()) return t.layer[idx(m.face)][static_cast<int>(m.amount)];
  return t.rotation[static_cast<int>(m.axis)][static_cast<int>(m.amount)];
}

CubeState apply_move(const CubeState& s, const Move& m) { return compose(s, move_transform(m)); }

CubeState apply_moves(CubeState s, std::span<const Move> moves) {
  for (const Move& m : moves) s = apply_move(s, m);
  return s;
}

Move invert(const Move& m) {
  Move r = m;
  if (m.amount == Amount::CW)
    r.amount = Amount::CCW;
  else if (m.amount == Amount::CCW)
    r.amount = Amount::CW;
  return r;
}

std::vector<Move> invert(std::span<const Move> moves) {
  std::vector<Move> r;
  r.reserve(moves.size());
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) r.push_back(invert(*it));
  return r;
}

Face opposite(Face f) {
  switch (f) {
    case Face::U: return Face::D;
    case Face::D: return Face::U;
    case Face::L: return Face::R;
    case Face::R: return Face::L;
    case Face::F: return Face::B;
    case Face::B: return Face::F;
  }
  return f;
}

Face axis_face(Axis a) {
  switch (a) {
    case Axis::X: return Face::R;
    case Axis::Y: return Face::U;
    case Axis::Z: return Face::F;
  }
  return Face::U;
}

Axis face_axis(Face f, bool* positive) {
  Axis a = Axis::Y;
  bool pos = true;
  switch (f) {
    case Face::U: a = Axis::Y; break;
    case Face::D: a = Axis::Y; pos = false; break;
    case Face::R: a = Axis::X; break;
    case Face::L: a = Axis::X; pos = false; break;
    case Face::F: a = Axis::Z; break;
    case Face::B: a = Axis::Z; pos = false; break;
  }
  if (positive) *positive = pos;
  return a;
}

char face_char(Face f) { return "UDLRFB"[idx(f)]; }

std::optional<Face> face_from_char(char c) {
  switch (c) {
    case 'U': return Face::U;
    case 'D': return Face::D;
    case 'L': return Face::L;
    case 'R': return Face::R;
    case 'F': return Face::F;
    case 'B': return Face::B;
    default: return std::nullopt;
  }
}

std::string to_string(const Move& m) {
  std::string s(1, m.is_layer() ? face_char(m.face) : "xyz"[static_cast<int>(m.axis)]);
  if (m.amount == Amount::CCW) s += '\'';
  if (m.amount == Amount::Half) s += '2';
  return s;
}

std::string to_string(std::span<const Move> moves) {
  std::string out;
  for (const Move& m : moves) {
    if (!out.empty()) out += ' ';
    out += to_string(m);
  }
  return out;
}

std::optional<Move> parse_move(std::string_view token) {
  if (token.empty() || token.size() > 2) return std::nullopt;
  Amount amount = Amount::CW;
  if (token.size() == 2) {
    if (token[1] == '\'')
      amount = Amount::CCW;
    else if (token[1] == '2')
      amount = Amount::Half;
    else
      return std::nullopt;
  }
  const char c = token[0];
  if (auto f = face_from_char(c)) return Move::turn(*f, amount);
  if (c == 'x') return Move::rotate(Axis::X, amount);
  if (c == 'y') return Move::rotate(Axis::Y, amount);
  if (c == 'z') return Move::rotate(Axis::Z, amount);
  return std::nullopt;
}

std::vector<Move> parse_moves(std::string_view text) {
  std::vector<Move> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto m = parse_move(tok);
    if (!m) throw std::invalid_argument("bad move token '" + tok + "'");
    out.push_back(*m);
  }
  return out;
}

// ---------------------------------------------------------------------------

const Rotation& Rotation::identity() {
  static const Rotation r;
  return r;
}

Rotation Rotation::of(const Move& m) {
  if (!m.is_rotation()) throw std::invalid_argument("not a rotation move");
  Rotation base;
  base.image_ = base_rotation_image(m.axis);
  base.transform_ = move_transform(Move::rotate(m.axis, Amount::CW));
  Rotation r;
  for (int i = 0; i < quarter_count(m.amount); ++i) r = r.then(base);
  return r;
}

std::span<const Rotation> Rotation::all() {
  static const std::vector<Rotation> rotations = [] {
    std::vector<Rotation> out{Rotation{}};
    for (std::size_t head = 0; head < out.size(); ++head) {
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        Rotation next = out[head].then(Rotation::of(Move::rotate(a, Amount::CW)));
        if (std::find(out.begin(), out.end(), next) == out.end()) out.push_back(next);
      }
    }
    return out;
  }();
  return rotations;
}

Face Rotation::preimage(Face f) const {
  for (Face g : kAllFaces)
    if (image(g) == f) return g;
  return f;
}

Rotation Rotation::then(const Rotation& next) const {
  Rotation r;
  for (Face f : kAllFaces) r.image_[idx(f)] = next.image(image(f));
  r.transform_ = compose(transform_, next.transform_);
  return r;
}

Rotation Rotation::inverse() const {
  Rotation r;
  for (Face f : kAllFaces) r.image_[idx(image(f))] = f;
  r.transform_ = cube::inverse(transform_);
  return r;
}

std::optional<Move> rotation_carrying(Face from, Face to) {
  if (from == to) return std::nullopt;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z})
    for (Amount am : {Amount::CW, Amount::CCW, Amount::Half}) {
      const Move m = Move::rotate(a, am);
      if (Rotation::of(m).image(from) == to) return m;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

CanonicalForm canonicalize_with_rotation(const CubeState& s) {
  for (const Rotation& r : Rotation::all()) {
    CubeState t = compose(s, r.transform());
    if (t.is_canonical()) return {t, r};
  }
  throw std::invalid_argument("canonicalize: invalid cube state");
}

CubeState canonicalize(const CubeState& s) { return canonicalize_with_rotation(s).state; }

bool d_layer_solved(const CubeState& c) {
  for (int i = DFR; i <= DRB; ++i)
    if (c.perm[i] != i || c.orient[i] != 0) return false;
  return true;
}

Classification classify(const CubeState& s) {
  const CubeState c = s.is_canonical() ? s : canonicalize(s);
  if (c == CubeState::solved()) return Classification::Solved;
  if (d_layer_solved(c)) return Classification::Phase1Solved;
  return Classification::Unsolved;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Solved: return "solved";
    case Classification::Phase1Solved: return "phase1";
    case Classification::Unsolved: return "unsolved";
  }
  return "?";
}

namespace {
// Free slots/cubies in canonical form; DBL (6) is pinned.
constexpr std::array<std::uint8_t, 7> kFree{0, 1, 2, 3, 4, 5, 7};
constexpr std::uint8_t free_rank(std::uint8_t cubie) { return cubie == 7 ? 6 : cubie; }
constexpr std::array<std::uint32_t, 8> kFactorial{1, 1, 2, 6, 24, 120, 720, 5040};
}  // namespace

std::uint32_t canonical_index(const CubeState& c) {
  std::uint32_t perm_rank = 0;
  for (int i = 0; i < 7; ++i) {
    const std::uint8_t v = free_rank(c.perm[kFree[i]]);
    int smaller = 0;
    for (int j = i + 1; j < 7; ++j)
      if (free_rank(c.perm[kFree[j]]) < v) ++smaller;
    perm_rank += smaller * kFactorial[6 - i];
  }
  std::uint32_t twist = 0;
  for (int i = 0; i < 6; ++i) twist = twist * 3 + c.orient[i];
  return perm_rank * 729 + twist;
}

CubeState from_canonical_index(std::uint32_t index) {
  CubeState c;
  std::uint32_t twist = index % 729;
  std::uint32_t perm_rank = index / 729;
  int sum = 0;
  for (int i = 5; i >= 0; --i) {
    c.orient[i] = static_cast<std::uint8_t>(twist % 3);
    sum += c.orient[i];
    twist /= 3;
  }
  c.orient[DBL] = 0;
  c.orient[DRB] = static_cast<std::uint8_t>((3 - sum % 3) % 3);

  std::vector<std::uint8_t> pool(kFree.begin(), kFree.end());
  for (int i = 0; i < 7; ++i) {
    const std::uint32_t f = kFactorial[6 - i];
    const std::uint32_t k = perm_rank / f;
    perm_rank %= f;
    c.perm[kFree[i]] = pool[k];
    pool.erase(pool.begin() + k);
  }
  c.perm[DBL] = DBL;
  return c;
}

// ---------------------------------------------------------------------------

Cell corner_cell(std::uint8_t slot, std::uint8_t position) { return kCornerCells[slot][position]; }

CornerFacelet cell_facelet(Cell c) {
  for (std::uint8_t s = 0; s < 8; ++s)
    for (std::uint8_t p = 0; p < 3; ++p)
      if (kCornerCells[s][p] == c) return {s, p};
  throw std::invalid_argument("cell index out of range");
}

Cell cell_after(Cell c, const Move& m) {
  const CornerFacelet f = cell_facelet(c);
  const CubeState& t = move_transform(m);
  for (std::uint8_t i = 0; i < 8; ++i)
    if (t.perm[i] == f.slot)
      return kCornerCells[i][(f.position + t.orient[i]) % 3];
  return c;
}

// ---------------------------------------------------------------------------

Enumeration enumerate_all() {
  Enumeration e;
  e.distance.assign(kCanonicalStateCount, 0xFF);
  std::vector<std::uint32_t> frontier{canonical_index(CubeState::solved())};
  e.distance[frontier[0]] = 0;
  int depth = 0;
  while (!frontier.empty()) {
    e.depth_histogram.push_back(frontier.size());
    e.total += frontier.size();
    e.max_depth = depth;
    std::vector<std::uint32_t> next;
    for (std::uint32_t i : frontier) {
      const CubeState s = from_canonical_index(i);
      for (const Move& m : kCanonicalMoves) {
        const std::uint32_t j = canonical_index(apply_move(s, m));
        if (e.distance[j] == 0xFF) {
          e.distance[j] = static_cast<std::uint8_t>(depth + 1);
          next.push_back(j);
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  return e;
}

}  // namespace pipecube::cube

namespace pipecube {

cube::CubeState random_canonical_state(Rng& rng) {
  std::array<std::uint8_t, 7> cubies{0, 1, 2, 3, 4, 5, 7};
  for (int i = 6; i > 0; --i)
    std::swap(cubies[i], cubies[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  cube::CubeState s;
  constexpr std::array<int, 7> slots{0, 1, 2, 3, 4, 5, 7};
  int sum = 0;
  for (int i = 0; i < 7; ++i) s.perm[slots[i]] = cubies[i];
  for (int i = 0; i < 6; ++i) {
    s.orient[i] = static_cast<std::uint8_t>(uniform_below(rng, 3));
    sum += s.orient[i];
  }
  s.perm[cube::DBL] = cube::DBL;
  s.orient[cube::DBL] = 0;
  s.orient[cube::DRB] = static_cast<std::uint8_t>((3 - sum % 3) % 3);
  return s;
}

cube::CubeState random_state(Rng& rng) {
  cube::CubeState s;
  for (int i = 7; i > 0; --i)
    std::swap(s.perm[i], s.perm[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  int sum = 0;
  for (int i = 0; i < 7; ++i) {
    s.orient[i] = static_cast<std::uint8_t>(uniform_below(rng, 3));
    sum += s.orient[i];
  }
  s.orient[7] = static_cast<std::uint8_t>((3 - sum % 3) % 3);
  return s;
}

}  // namespace pipecube
