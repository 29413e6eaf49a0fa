#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cubeflat/cube_complex.hpp"
#include "cubeflat/wallspace.hpp"

namespace cubeflat {

using Rational = boost::rational<std::int64_t>;

// Parses "a/b" or "a"; throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

// Set of translate differences d for which the d-th translate of one wall
// crosses another. Always an interval of Z.
class CrossingInterval {
 public:
  enum class Kind { Empty, Finite, AtLeast, AtMost, All };

  static CrossingInterval empty() { return {Kind::Empty, 0, 0}; }
  static CrossingInterval finite(std::int64_t lo, std::int64_t hi);
  static CrossingInterval at_least(std::int64_t lo) { return {Kind::AtLeast, lo, 0}; }
  static CrossingInterval at_most(std::int64_t hi) { return {Kind::AtMost, 0, hi}; }
  static CrossingInterval all() { return {Kind::All, 0, 0}; }

  Kind kind() const { return kind_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }

  bool contains(std::int64_t d) const;
  bool bounded() const { return kind_ == Kind::Empty || kind_ == Kind::Finite; }
  // Pointwise negation {-d : d in this}.
  CrossingInterval negated() const;

  friend bool operator==(const CrossingInterval&, const CrossingInterval&) = default;

 private:
  CrossingInterval(Kind k, std::int64_t lo, std::int64_t hi) : kind_(k), lo_(lo), hi_(hi) {}
  Kind kind_;
  std::int64_t lo_;
  std::int64_t hi_;
};

std::string to_string(CrossingInterval::Kind k);
std::string to_string(const CrossingInterval& c);

// Orbit representative: parallelism class index and representative index.
struct WallRef {
  std::size_t cls = 0;
  std::size_t rep = 0;
  friend auto operator<=>(const WallRef&, const WallRef&) = default;
};

std::string to_string(const WallRef& w);

// Walls meeting the flat in parallel affine hyperplanes {x : direction.x = c}.
// The orbit of representative j consists of the walls at c = reps[j] + t * period,
// t in Z. crossing[j][j'] is the set of d such that the d-th translate of
// representative j crosses representative j'. On the diagonal, 0 is
// implicitly excluded (a wall does not cross itself).
struct ParallelismClass {
  std::vector<std::int64_t> direction;
  Rational period{1};
  std::vector<Rational> reps;
  std::vector<std::vector<CrossingInterval>> crossing;
};

struct PeriodicWallspace {
  std::size_t rank = 0;
  std::vector<ParallelismClass> classes;

  const CrossingInterval& interval(std::size_t cls, std::size_t j, std::size_t jp) const {
    return classes.at(cls).crossing.at(j).at(jp);
  }
  bool contains(const WallRef& w) const {
    return w.cls < classes.size() && w.rep < classes[w.cls].reps.size();
  }
  std::vector<WallRef> orbits() const;
};

enum class Lemma {
  Structure,
  FiniteDimension,
  CoincidentWalls,
  CrossingAntisymmetry,
  AlignmentEquivalence,
  PartialOrderAntisymmetry,
  PartialOrderTransitivity,
  MaximalClass,
  // Non-crossing walls are nested in the order of their flat positions, so
  // x < y < z with x, y and y, z non-crossing forces x, z non-crossing.
  Nesting,
};

std::string to_string(Lemma l);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(Lemma lemma, std::vector<WallRef> witness, const std::string& what);
  Lemma lemma() const { return lemma_; }
  const std::vector<WallRef>& witness() const { return witness_; }

 private:
  Lemma lemma_;
  std::vector<WallRef> witness_;
};

// Checks the type invariants and the consistency lemmas for orbit
// relations. Throws ValidationError for the first violation found.
void validate(const PeriodicWallspace& pw);

enum class Direction { Up, Down };

struct Crossing {
  friend bool operator==(const Crossing&, const Crossing&) = default;
};
struct Aligned {
  friend bool operator==(const Aligned&, const Aligned&) = default;
};
// Up: translate j of a crosses translate k of b whenever j - k > threshold.
// Down: the same whenever k - j > threshold.
struct SemiCrossing {
  Direction direction;
  std::int64_t threshold;
  friend bool operator==(const SemiCrossing&, const SemiCrossing&) = default;
};
using OrbitPairClass = std::variant<Crossing, SemiCrossing, Aligned>;

std::string to_string(const OrbitPairClass& c);

OrbitPairClass classify_pair(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b);

// Whether orbit a lies above b in the semi-crossing order.
bool above(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b);

using AlignmentClass = std::vector<WallRef>;

// Equivalence closure of the aligned relation; each class sorted, classes
// ordered by first member. Works in the presence of semi-crossing pairs.
std::vector<AlignmentClass> alignment_partition(const PeriodicWallspace& pw);

// As above, but refuses inputs with semi-crossing orbits.
std::vector<AlignmentClass> alignment_classes(const PeriodicWallspace& pw);

std::int64_t disjointness_index(const PeriodicWallspace& pw, std::size_t cls, std::size_t rep);

// ------------------------------------------------------------------ windows

struct WindowWall {
  WallRef orbit;
  std::int64_t translate;
  Rational position;
};

// Finite truncation of the orbit walls: translates t with -N <= t < N of the
// selected orbits, as an abstract pocset, and its dual.
struct WindowComplex {
  std::int64_t radius = 0;
  std::vector<WindowWall> walls;
  DualComplex dual;

  // Index of a wall in `walls`, if it lies in the window.
  std::optional<std::size_t> wall_index(const WallRef& orbit, std::int64_t translate) const;
};

// Walls of `orbits` only (all orbits when empty).
WindowComplex build_window(const PeriodicWallspace& pw, std::int64_t radius,
                           const std::vector<WallRef>& orbits = {});

CubeComplex window_hull(const PeriodicWallspace& pw, std::int64_t radius);

struct QuasilineCertificate {
  std::optional<std::size_t> width;  // empty on failure
  std::size_t width_at_radius = 0;
  std::size_t width_at_double_radius = 0;
  std::int64_t radius = 0;
};

// Orders the window walls of `orbits` by position and measures the largest
// order distance between two crossing walls, at radius N and 2N.
QuasilineCertificate quasiline_certificate(const PeriodicWallspace& pw,
                                           const std::vector<WallRef>& orbits,
                                           std::int64_t radius);

// Order width at a single radius.
std::size_t crossing_width(const PeriodicWallspace& pw, const std::vector<WallRef>& orbits,
                           std::int64_t radius);

class PushoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PushoffAudit {
  bool injective = false;
  bool distance_nonincreasing = false;
  // Canonical vertices and lattice shifts compared, and the smallest
  // displacement d(phi_k(x), b.x) seen. Not asserted when Q is empty.
  std::size_t canonical_pairs_checked = 0;
  std::optional<std::size_t> min_displacement;
  std::size_t vertex_pairs_checked = 0;
};

struct PushoffResult {
  std::int64_t k = 0;
  std::int64_t radius = 0;
  // Domain of the map: window vertices whose Q-walls in the last k translates
  // face the window's far end. image[i] is the image of domain[i].
  std::vector<Vertex> domain;
  std::vector<Vertex> image;
  PushoffAudit audit;
  std::size_t window_vertex_count = 0;
};

// Shifts the orientations of the walls of Q by k translates. Throws
// PushoffError when Q is not a maximal alignment class, when k > N/2, or
// when an audit assertion fails.
PushoffResult pushoff(const PeriodicWallspace& pw, const AlignmentClass& q, std::int64_t k,
                      std::int64_t radius);

// ---------------------------------------------------------------- dichotomy

struct QuasilineFactor {
  AlignmentClass alignment_class;
  std::size_t width = 0;
  std::size_t vertex_count = 0;
};

struct ProductOfQuasilines {
  std::vector<QuasilineFactor> factors;
};

struct ExcessClassesWitness {
  std::size_t class_count = 0;
  std::size_t rank = 0;
  std::vector<AlignmentClass> classes;
};

struct PushoffEvidence {
  std::int64_t k = 0;
  std::size_t min_displacement = 0;
  std::size_t canonical_pairs_checked = 0;
};

struct SemiCrossingWitness {
  WallRef upper;
  WallRef lower;
  std::int64_t threshold = 0;
  AlignmentClass maximal_class;
  std::vector<PushoffEvidence> pushoffs;
};

struct NonCocompact {
  std::variant<SemiCrossingWitness, ExcessClassesWitness> witness;
};

struct DichotomyReport {
  std::variant<ProductOfQuasilines, NonCocompact> verdict;
  std::int64_t radius = 0;
  std::size_t hull_vertex_count = 0;
  // One per alignment class, in alignment-partition order.
  std::vector<std::size_t> factor_vertex_counts;

  bool cocompact() const { return std::holds_alternative<ProductOfQuasilines>(verdict); }
};

class DichotomyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `rank` is the rank of the acting lattice, 1 <= rank <= pw.rank.
DichotomyReport dichotomy(const PeriodicWallspace& pw, std::size_t rank, std::int64_t radius);

// The maximal class used by dichotomy: among maximal alignment classes that
// lie above some other class, the smallest by first member.
std::optional<AlignmentClass> select_maximal_class(const PeriodicWallspace& pw);

}  // namespace cubeflat
