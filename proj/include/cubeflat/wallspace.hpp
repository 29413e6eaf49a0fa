#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cubeflat/bitset.hpp"
#include "cubeflat/cube_complex.hpp"

namespace cubeflat {

class WallspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-wall side choice; bit w set means the Right side of wall w.
using Orientation = DynamicBitset;

// Finite set of points with walls, each wall a bipartition given by its left
// side. Both sides are nonempty and no bipartition occurs twice.
class Wallspace {
 public:
  Wallspace(std::size_t point_count, std::vector<std::vector<std::size_t>> left_sides);

  std::size_t point_count() const { return point_count_; }
  std::size_t wall_count() const { return left_.size(); }
  Side side(std::size_t wall, std::size_t point) const {
    return left_[wall].test(point) ? Side::Left : Side::Right;
  }
  std::vector<std::size_t> left_side(std::size_t wall) const;

 private:
  std::size_t point_count_;
  std::vector<DynamicBitset> left_;
};

// Abstract finite pocset: for every pair of walls, which of the four side
// combinations have nonempty intersection. A wallspace induces one, and so
// does a window of periodic walls.
class Pocset {
 public:
  explicit Pocset(std::size_t wall_count);

  std::size_t wall_count() const { return n_; }
  bool compatible(std::size_t a, Side sa, std::size_t b, Side sb) const {
    return (allowed_[a * n_ + b] >> quadrant(sa, sb)) & 1u;
  }
  // Declares side sa of a disjoint from side sb of b (and symmetrically).
  void forbid(std::size_t a, Side sa, std::size_t b, Side sb);

  bool consistent(const Orientation& o) const;
  // Whether flipping wall w in a consistent orientation stays consistent.
  bool flip_consistent(const Orientation& o, std::size_t w) const;

 private:
  static unsigned quadrant(Side sa, Side sb) {
    return static_cast<unsigned>(sa) * 2 + static_cast<unsigned>(sb);
  }
  std::size_t n_;
  std::vector<std::uint8_t> allowed_;
};

Pocset pocset_of(const Wallspace& w);

Orientation canonical_orientation(const Wallspace& w, std::size_t point);

struct DualComplex {
  CubeComplex complex;
  // orientations[v] is the wall orientation of vertex v. Hyperplane labels of
  // `complex` are wall indices.
  std::vector<Orientation> orientations;
  // Vertex of each seed (canonical orientation of each point, for wallspaces).
  std::vector<Vertex> seed_vertices;
};

// Breadth-first closure of the seeds under consistent single-wall flips.
// Seeds must be consistent. Vertex 0 is the first seed.
DualComplex dual_of_pocset(const Pocset& p, std::span<const Orientation> seeds,
                           ValidationOptions options = {.strict = false});

DualComplex dual_complex(const Wallspace& w, ValidationOptions options = {.strict = false});

CubeComplex dual(const Wallspace& w);

}  // namespace cubeflat
