#pragma once

// Pocket (2x2x2) cube state, move algebra, sticker rendering and scan decoding.
//
// Slots and cubies share the numbering URF=0, UFL=1, ULB=2, UBR=3, DFR=4,
// DLF=5, DBL=6, DRB=7. `perm[slot]` is the cubie sitting in `slot` and
// `orient[slot]` is its clockwise twist, 0 meaning its U/D sticker lies on
// the U/D facelet of the slot.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pipecube::cube {

enum class Face : std::uint8_t { U, D, L, R, F, B };
enum class Amount : std::uint8_t { CW, CCW, Half };
enum class Axis : std::uint8_t { X, Y, Z };

inline constexpr std::array<Face, 6> kAllFaces{Face::U, Face::D, Face::L,
                                               Face::R, Face::F, Face::B};

enum Corner : std::uint8_t { URF, UFL, ULB, UBR, DFR, DLF, DBL, DRB };

/// A cubie id in 0..7.
struct CubieId {
  std::uint8_t value = 0;
  constexpr bool operator==(const CubieId&) const = default;
};

struct Move {
  enum class Kind : std::uint8_t { Layer, Rotation };

  Kind kind = Kind::Layer;
  Face face = Face::U;  // Layer only
  Axis axis = Axis::X;  // Rotation only
  Amount amount = Amount::CW;

  static constexpr Move turn(Face f, Amount a) { return {Kind::Layer, f, Axis::X, a}; }
  static constexpr Move rotate(Axis ax, Amount a) {
    return {Kind::Rotation, Face::U, ax, a};
  }

  constexpr bool is_layer() const { return kind == Kind::Layer; }
  constexpr bool is_rotation() const { return kind == Kind::Rotation; }

  constexpr bool operator==(const Move& o) const {
    if (kind != o.kind || amount != o.amount) return false;
    return kind == Kind::Layer ? face == o.face : axis == o.axis;
  }
};

/// The nine solver generators in tie-break order (U<R<F, CW<CCW<Half).
inline constexpr std::array<Move, 9> kCanonicalMoves{
    Move::turn(Face::U, Amount::CW), Move::turn(Face::U, Amount::CCW),
    Move::turn(Face::U, Amount::Half), Move::turn(Face::R, Amount::CW),
    Move::turn(Face::R, Amount::CCW), Move::turn(Face::R, Amount::Half),
    Move::turn(Face::F, Amount::CW), Move::turn(Face::F, Amount::CCW),
    Move::turn(Face::F, Amount::Half)};

struct CubeState {
  std::array<std::uint8_t, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
  std::array<std::uint8_t, 8> orient{};

  static constexpr CubeState solved() { return {}; }

  /// Permutation and twist-sum invariants.
  bool is_valid() const;
  /// DBL home with zero twist.
  bool is_canonical() const { return perm[DBL] == DBL && orient[DBL] == 0; }

  bool operator==(const CubeState&) const = default;
};

/// `a` followed by `b`, both read as transforms of the solved cube.
CubeState compose(const CubeState& a, const CubeState& b);
CubeState inverse(const CubeState& s);

/// Cubie-level transform for a move (applied to the solved cube).
const CubeState& move_transform(const Move& m);

CubeState apply_move(const CubeState& s, const Move& m);
CubeState apply_moves(CubeState s, std::span<const Move> moves);

Move invert(const Move& m);
std::vector<Move> invert(std::span<const Move> moves);

Face opposite(Face f);
Face axis_face(Axis a);  // the face a rotation about `a` follows: X->R, Y->U, Z->F
/// Rotation axis through a face; `positive` is set when the face is the one
/// the rotation follows (R, U, F).
Axis face_axis(Face f, bool* positive = nullptr);

char face_char(Face f);
std::optional<Face> face_from_char(char c);
std::string to_string(const Move& m);
std::string to_string(std::span<const Move> moves);
/// Parses one token such as "U", "R'", "F2", "x", "y'", "z2".
std::optional<Move> parse_move(std::string_view token);
/// Whitespace separated tokens. Throws std::invalid_argument on a bad token.
std::vector<Move> parse_moves(std::string_view text);

// ---------------------------------------------------------------------------
// Whole-cube rotations

/// One of the 24 proper rotations of the cube.
class Rotation {
 public:
  constexpr Rotation() = default;

  static const Rotation& identity();
  static Rotation of(const Move& rotation_move);
  /// All 24 rotations, identity first, in a fixed breadth-first order.
  static std::span<const Rotation> all();

  /// Where content currently at `f` ends up after this rotation.
  Face image(Face f) const { return image_[static_cast<int>(f)]; }
  /// Which position's content ends up at `f`.
  Face preimage(Face f) const;

  const CubeState& transform() const { return transform_; }

  /// `this` followed by `next`.
  Rotation then(const Rotation& next) const;
  Rotation inverse() const;

  bool operator==(const Rotation& o) const { return image_ == o.image_; }

 private:
  std::array<Face, 6> image_{Face::U, Face::D, Face::L, Face::R, Face::F, Face::B};
  CubeState transform_{};
};

/// Single rotation move (x/y/z with amount) that carries `from` onto `to`,
/// first match in order x, y, z by CW, CCW, Half. Empty when from == to.
std::optional<Move> rotation_carrying(Face from, Face to);

// ---------------------------------------------------------------------------
// Canonical form

CubeState canonicalize(const CubeState& s);

/// The canonical state together with the rotation that produced it:
/// `apply(s, rotation.transform()) == state`.
struct CanonicalForm {
  CubeState state;
  Rotation rotation;
};
CanonicalForm canonicalize_with_rotation(const CubeState& s);

enum class Classification { Solved, Phase1Solved, Unsolved };
Classification classify(const CubeState& s);
std::string_view to_string(Classification c);

/// D layer (slots 4..7) holds cubies 4..7 untwisted.
bool d_layer_solved(const CubeState& canonical);

/// Perfect hash of canonical states into [0, kCanonicalStateCount).
inline constexpr std::uint32_t kCanonicalStateCount = 3674160;  // 7! * 3^6
std::uint32_t canonical_index(const CubeState& canonical);
CubeState from_canonical_index(std::uint32_t index);

// ---------------------------------------------------------------------------
// Stickers

enum class AssetClass : std::uint8_t { Ladder, Bridge, Clock, Money, Key, Fence };
inline constexpr std::array<AssetClass, 6> kAllAssetClasses{
    AssetClass::Ladder, AssetClass::Bridge, AssetClass::Clock,
    AssetClass::Money,  AssetClass::Key,    AssetClass::Fence};

std::string_view asset_code(AssetClass a);  // LAD, BRI, CLO, MON, KEY, FEN
std::string_view asset_name(AssetClass a);  // ladder, bridge, ...
std::optional<AssetClass> asset_from_code(std::string_view code);
std::optional<AssetClass> asset_from_name(std::string_view name);

/// Face <-> asset class bijection for the solved cube.
class FaceClassMap {
 public:
  /// U->Clock, D->Fence, F->Bridge, B->Ladder, R->Money, L->Key.
  FaceClassMap();
  /// Throws std::invalid_argument unless `classes` is a bijection.
  explicit FaceClassMap(const std::array<AssetClass, 6>& classes_by_face);

  AssetClass class_of(Face f) const { return by_face_[static_cast<int>(f)]; }
  Face face_of(AssetClass a) const { return by_class_[static_cast<int>(a)]; }

  bool operator==(const FaceClassMap&) const = default;

 private:
  std::array<AssetClass, 6> by_face_;
  std::array<Face, 6> by_class_;
};

/// A facelet position: face plus row-major index 0..3.
struct Cell {
  Face face = Face::U;
  std::uint8_t index = 0;
  bool operator==(const Cell&) const = default;
};

/// Slot and sticker position (0..2, U/D facelet first, then clockwise).
struct CornerFacelet {
  std::uint8_t slot = 0;
  std::uint8_t position = 0;
};

Cell corner_cell(std::uint8_t slot, std::uint8_t position);
CornerFacelet cell_facelet(Cell c);
/// The cell a sticker on `c` occupies after `m`.
Cell cell_after(Cell c, const Move& m);

struct FaceObservation {
  Face face = Face::U;
  std::array<AssetClass, 4> cells{};
  bool operator==(const FaceObservation&) const = default;
};

using Scan = std::vector<FaceObservation>;

/// Six observations in U, D, L, R, F, B order.
Scan render_stickers(const CubeState& s, const FaceClassMap& map = {});

enum class ScanErrorKind { UnknownCubie, DuplicateCubie, OrientationParityError, MissingFace };
std::string_view to_string(ScanErrorKind k);

class ScanError : public std::runtime_error {
 public:
  ScanError(ScanErrorKind kind, const std::string& detail);
  ScanErrorKind kind() const { return kind_; }

 private:
  ScanErrorKind kind_;
};

/// Inverse of render_stickers; no canonicalisation is applied.
CubeState decode_scan(std::span<const FaceObservation> obs, const FaceClassMap& map = {});

/// `<FACE>: <c> <c> <c> <c>` per line, any line order. Throws
/// std::invalid_argument on syntax errors.
Scan parse_scan_text(std::string_view text);
std::string format_scan_text(std::span<const FaceObservation> obs);

// ---------------------------------------------------------------------------
// Enumeration oracle

struct Enumeration {
  std::uint64_t total = 0;
  int max_depth = 0;
  std::vector<std::uint64_t> depth_histogram;
  /// Distance to solved per canonical_index.
  std::vector<std::uint8_t> distance;
};

/// Breadth-first closure from solved over kCanonicalMoves.
Enumeration enumerate_all();

}  // namespace pipecube::cube
