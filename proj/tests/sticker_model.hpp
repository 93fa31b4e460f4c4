#pragma once

// Test-only geometric cube: 24 stickers with integer positions and normals,
// turned by rotating vectors. Shares nothing with the cubie tables except the
// Face/Cell vocabulary, so it can check them.

#include <array>
#include <map>

#include "pipecube/cube.hpp"

namespace sticker_model {

using pipecube::cube::Amount;
using pipecube::cube::Axis;
using pipecube::cube::Cell;
using pipecube::cube::Face;
using pipecube::cube::Move;

struct Vec {
  int x = 0, y = 0, z = 0;
  bool operator==(const Vec&) const = default;
};

inline int dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec cross(Vec a, Vec b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Vec normal(Face f) {
  switch (f) {
    case Face::U: return {0, 1, 0};
    case Face::D: return {0, -1, 0};
    case Face::L: return {-1, 0, 0};
    case Face::R: return {1, 0, 0};
    case Face::F: return {0, 0, 1};
    case Face::B: return {0, 0, -1};
  }
  return {};
}

inline Face face_of_normal(Vec n) {
  for (Face f : pipecube::cube::kAllFaces)
    if (normal(f) == n) return f;
  return Face::U;
}

// Clockwise quarter turn seen from outside along axis n.
inline Vec quarter_cw(Vec v, Vec n) {
  const int d = dot(n, v);
  const Vec c = cross(n, v);
  return {d * n.x - c.x, d * n.y - c.y, d * n.z - c.z};
}

struct Sticker {
  Vec pos;  // cubie corner, components in {-1, 1}
  Vec n;
};

// Row-major reading with U up / F front; U seen from above with B on top,
// D from below with F on top.
inline Cell cell_of(const Sticker& s) {
  const Face f = face_of_normal(s.n);
  int row = 0, col = 0;
  switch (f) {
    case Face::U: row = s.pos.z == -1 ? 0 : 1; col = s.pos.x == -1 ? 0 : 1; break;
    case Face::D: row = s.pos.z == 1 ? 0 : 1; col = s.pos.x == -1 ? 0 : 1; break;
    case Face::F: row = s.pos.y == 1 ? 0 : 1; col = s.pos.x == -1 ? 0 : 1; break;
    case Face::B: row = s.pos.y == 1 ? 0 : 1; col = s.pos.x == 1 ? 0 : 1; break;
    case Face::R: row = s.pos.y == 1 ? 0 : 1; col = s.pos.z == 1 ? 0 : 1; break;
    case Face::L: row = s.pos.y == 1 ? 0 : 1; col = s.pos.z == -1 ? 0 : 1; break;
  }
  return {f, static_cast<std::uint8_t>(row * 2 + col)};
}

inline Sticker sticker_at(Cell c) {
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) {
        const Vec p{x, y, z};
        const Vec n = normal(c.face);
        if (dot(p, n) != 1) continue;
        Sticker s{p, n};
        if (cell_of(s) == c) return s;
      }
  return {};
}

inline int quarters(Amount a) { return a == Amount::CW ? 1 : a == Amount::Half ? 2 : 3; }

// Where the sticker on `c` goes under `m`.
inline Cell move_cell(Cell c, const Move& m) {
  Sticker s = sticker_at(c);
  Vec axis;
  bool whole = false;
  if (m.is_layer()) {
    axis = normal(m.face);
  } else {
    whole = true;
    axis = normal(m.axis == Axis::X ? Face::R : m.axis == Axis::Y ? Face::U : Face::F);
  }
  if (!whole && dot(s.pos, axis) <= 0) return c;
  for (int i = 0; i < quarters(m.amount); ++i) {
    s.pos = quarter_cw(s.pos, axis);
    s.n = quarter_cw(s.n, axis);
  }
  return cell_of(s);
}

// Labels per cell, indexed face * 4 + index.
template <class Label>
struct Stickers {
  std::array<Label, 24> at{};

  Label& operator[](Cell c) { return at[static_cast<int>(c.face) * 4 + c.index]; }
  const Label& operator[](Cell c) const { return at[static_cast<int>(c.face) * 4 + c.index]; }

  Stickers apply(const Move& m) const {
    Stickers out;
    for (Face f : pipecube::cube::kAllFaces)
      for (std::uint8_t i = 0; i < 4; ++i) {
        const Cell c{f, i};
        out[move_cell(c, m)] = (*this)[c];
      }
    return out;
  }
};

}  // namespace sticker_model
