#include <algorithm>
#include <sstream>

#include "pipecube/cube.hpp"

namespace pipecube::cube {
namespace {

constexpr std::array<std::string_view, 6> kCodes{"LAD", "BRI", "CLO", "MON", "KEY", "FEN"};
constexpr std::array<std::string_view, 6> kNames{"ladder", "bridge", "clock",
                                                 "money",  "key",    "fence"};

constexpr int idx(Face f) { return static_cast<int>(f); }

bool is_ud(Face f) { return f == Face::U || f == Face::D; }

}  // namespace

std::string_view asset_code(AssetClass a) { return kCodes[static_cast<int>(a)]; }
std::string_view asset_name(AssetClass a) { return kNames[static_cast<int>(a)]; }

std::optional<AssetClass> asset_from_code(std::string_view code) {
  for (int i = 0; i < 6; ++i)
    if (kCodes[i] == code) return static_cast<AssetClass>(i);
  return std::nullopt;
}

std::optional<AssetClass> asset_from_name(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kNames[i] == name) return static_cast<AssetClass>(i);
  return std::nullopt;
}

FaceClassMap::FaceClassMap()
    : FaceClassMap({AssetClass::Clock, AssetClass::Fence, AssetClass::Key, AssetClass::Money,
                    AssetClass::Bridge, AssetClass::Ladder}) {}

FaceClassMap::FaceClassMap(const std::array<AssetClass, 6>& classes_by_face)
    : by_face_(classes_by_face) {
  std::array<bool, 6> seen{};
  for (Face f : kAllFaces) {
    const int c = static_cast<int>(by_face_[idx(f)]);
    if (c < 0 || c > 5 || seen[c]) throw std::invalid_argument("face class map is not a bijection");
    seen[c] = true;
    by_class_[c] = f;
  }
}

ScanError::ScanError(ScanErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

std::string_view to_string(ScanErrorKind k) {
  switch (k) {
    case ScanErrorKind::UnknownCubie: return "UnknownCubie";
    case ScanErrorKind::DuplicateCubie: return "DuplicateCubie";
    case ScanErrorKind::OrientationParityError: return "OrientationParityError";
    case ScanErrorKind::MissingFace: return "MissingFace";
  }
  return "ScanError";
}

Scan render_stickers(const CubeState& s, const FaceClassMap& map) {
  Scan out(6);
  for (Face f : kAllFaces) out[idx(f)].face = f;
  for (std::uint8_t slot = 0; slot < 8; ++slot) {
    for (std::uint8_t j = 0; j < 3; ++j) {
      const Cell target = corner_cell(slot, static_cast<std::uint8_t>((j + s.orient[slot]) % 3));
      const Face home = corner_cell(s.perm[slot], j).face;
      out[idx(target.face)].cells[target.index] = map.class_of(home);
    }
  }
  return out;
}

CubeState decode_scan(std::span<const FaceObservation> obs, const FaceClassMap& map) {
  std::array<const FaceObservation*, 6> by_face{};
  for (const auto& o : obs) {
    if (by_face[idx(o.face)])
      throw ScanError(ScanErrorKind::MissingFace,
                      std::string("face ") + face_char(o.face) + " observed twice");
    by_face[idx(o.face)] = &o;
  }
  for (Face f : kAllFaces)
    if (!by_face[idx(f)])
      throw ScanError(ScanErrorKind::MissingFace, std::string("no observation for face ") + face_char(f));

  auto face_at = [&](Cell c) { return map.face_of(by_face[idx(c.face)]->cells[c.index]); };

  CubeState s;
  std::array<bool, 8> used{};
  int twist_sum = 0;
  for (std::uint8_t slot = 0; slot < 8; ++slot) {
    std::array<Face, 3> seen{};
    for (std::uint8_t p = 0; p < 3; ++p) seen[p] = face_at(corner_cell(slot, p));

    const auto ud_count = std::count_if(seen.begin(), seen.end(), is_ud);
    const std::string where = "slot " + std::to_string(slot);
    if (ud_count != 1) throw ScanError(ScanErrorKind::UnknownCubie, where);
    const std::uint8_t twist =
        static_cast<std::uint8_t>(std::find_if(seen.begin(), seen.end(), is_ud) - seen.begin());

    int cubie = -1;
    for (std::uint8_t c = 0; c < 8 && cubie < 0; ++c) {
      bool match = true;
      for (std::uint8_t j = 0; j < 3; ++j)
        if (corner_cell(c, j).face != seen[(j + twist) % 3]) match = false;
      if (match) cubie = c;
    }
    if (cubie < 0) throw ScanError(ScanErrorKind::UnknownCubie, where);
    if (used[cubie]) throw ScanError(ScanErrorKind::DuplicateCubie, where);
    used[cubie] = true;
    s.perm[slot] = static_cast<std::uint8_t>(cubie);
    s.orient[slot] = twist;
    twist_sum += twist;
  }
  if (twist_sum % 3 != 0)
    throw ScanError(ScanErrorKind::OrientationParityError,
                    "twist sum " + std::to_string(twist_sum));
  return s;
}

Scan parse_scan_text(std::string_view text) {
  Scan out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("scan line " + std::to_string(lineno) + ": " + why);
    };
    if (line.size() < 3 || line[1] != ':' || line[2] != ' ') fail("expected '<FACE>: '");
    auto face = face_from_char(line[0]);
    if (!face) fail("unknown face");
    std::istringstream cells{line.substr(3)};
    FaceObservation obs{*face, {}};
    std::string tok;
    int n = 0;
    while (cells >> tok) {
      if (n == 4) fail("more than four cells");
      auto a = asset_from_code(tok);
      if (!a) fail("unknown asset code '" + tok + "'");
      obs.cells[n++] = *a;
    }
    if (n != 4) fail("expected four cells");
    out.push_back(obs);
  }
  return out;
}

std::string format_scan_text(std::span<const FaceObservation> obs) {
  std::string out;
  for (const auto& o : obs) {
    out += face_char(o.face);
    out += ':';
    for (AssetClass a : o.cells) {
      out += ' ';
      out += asset_code(a);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pipecube::cube
