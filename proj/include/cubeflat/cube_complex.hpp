#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cubeflat/bitset.hpp"

namespace cubeflat {

using Vertex = std::uint32_t;
using HyperplaneId = std::uint32_t;

// Raised when input data cannot be the 1-skeleton of a CAT(0) cube complex.
class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownVertexError : public std::out_of_range {
 public:
  explicit UnknownVertexError(std::size_t v)
      : std::out_of_range("unknown vertex id " + std::to_string(v)) {}
};

class EmptySetError : public std::invalid_argument {
 public:
  EmptySetError() : std::invalid_argument("vertex set must be nonempty") {}
};

enum class Side : std::uint8_t { Left = 0, Right = 1 };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  HyperplaneId hyperplane = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ValidationOptions {
  // Distance/separation check and the median-axiom check. Structural checks
  // (connectivity, simplicity, two halfspaces per hyperplane) always run.
  bool strict = true;
  // The triple-wise median check is cubic; it only runs below this size.
  std::size_t median_check_limit = 5000;
};

// Subset of the vertices of a fixed complex. Membership is O(1).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : mask_(universe, false) {}
  VertexSet(std::size_t universe, std::span<const Vertex> members);
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members)
      : VertexSet(universe, std::span<const Vertex>(members.begin(), members.size())) {}

  static VertexSet all(std::size_t universe);

  std::size_t universe() const { return mask_.size(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(Vertex v) const { return v < mask_.size() && mask_[v]; }

  void insert(Vertex v);
  void erase(Vertex v);

  // Members in increasing order.
  std::vector<Vertex> members() const;

  bool subset_of(const VertexSet& other) const;
  bool intersects(const VertexSet& other) const;
  VertexSet intersection(const VertexSet& other) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.mask_ == b.mask_; }

 private:
  std::vector<bool> mask_;
  std::size_t count_ = 0;
};

struct Neighbor {
  Vertex vertex;
  HyperplaneId hyperplane;
};

// Finite CAT(0) cube complex stored as its 1-skeleton: a median graph whose
// edges carry the id of the dual hyperplane. Higher cubes are implicit.
//
// Hyperplane labels in the input may be any nonnegative integers; they are
// compacted to 0..H-1 in increasing label order and the original labels are
// kept for export. The Left side of every hyperplane is the component that
// contains vertex 0 (the smallest vertex id).
class CubeComplex {
 public:
  CubeComplex(std::size_t vertex_count, std::vector<Edge> edges, ValidationOptions options = {});

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t hyperplane_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Edges with compacted hyperplane ids.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const;

  HyperplaneId hyperplane_label(HyperplaneId h) const { return labels_.at(h); }
  const std::vector<HyperplaneId>& hyperplane_labels() const { return labels_; }

  Side side(Vertex v, HyperplaneId h) const {
    return signatures_[v].test(h) ? Side::Right : Side::Left;
  }
  const DynamicBitset& signature(Vertex v) const { return signatures_.at(v); }
  std::optional<Vertex> find_vertex(const DynamicBitset& signature) const;

  VertexSet halfspace(HyperplaneId h, Side s) const;
  // Two hyperplanes cross iff all four quadrants they cut out are occupied.
  bool crosses(HyperplaneId a, HyperplaneId b) const;

  void check_vertex(Vertex v) const {
    if (v >= vertex_count()) throw UnknownVertexError(v);
  }

 private:
  friend void validate(const CubeComplex&, ValidationOptions);

  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<HyperplaneId> labels_;
  std::vector<DynamicBitset> signatures_;
  std::unordered_map<DynamicBitset, Vertex, DynamicBitsetHash> by_signature_;
};

// Re-runs the metric and median checks. Throws ComplexError.
void validate(const CubeComplex& c, ValidationOptions options = {});

std::size_t distance(const CubeComplex& c, Vertex u, Vertex v);

// Throws ComplexError when the majority signature is not a vertex.
Vertex median(const CubeComplex& c, Vertex x, Vertex y, Vertex z);

VertexSet hull(const CubeComplex& c, const VertexSet& s);
bool is_convex(const CubeComplex& c, const VertexSet& s);

struct NoCommonPoint {
  std::size_t first;
  std::size_t second;
};
using HellyResult = std::variant<Vertex, NoCommonPoint>;

// Smallest-index vertex of the common intersection, or the lexicographically
// first disjoint pair. Throws std::invalid_argument for a nonconvex member.
HellyResult helly_point(const CubeComplex& c, std::span<const VertexSet> family);

struct Thickening {
  VertexSet set;
  // Largest distance from a vertex of `set` to the thickened set.
  std::size_t realized_radius = 0;
};

// hull of the closed r-neighbourhood of a convex set.
Thickening thicken(const CubeComplex& c, const VertexSet& y, std::size_t r);

// Maximum number of r-thickened translates sharing a vertex.
std::size_t packing_number(const CubeComplex& c, std::span<const VertexSet> translates,
                           std::size_t r);

struct ProductDecomposition {
  // Hyperplane classes, each sorted; classes ordered by smallest member.
  std::vector<std::vector<HyperplaneId>> classes;
  std::vector<CubeComplex> factors;
  // projections[f][v] is the image of vertex v in factor f.
  std::vector<std::vector<Vertex>> projections;
  bool exact = false;
};

ProductDecomposition product_decomposition(const CubeComplex& c);

// Vertex bijection a -> b preserving adjacency, if one exists. Backtracking
// with distance-profile pruning; intended for small complexes.
std::optional<std::vector<Vertex>> find_isomorphism(const CubeComplex& a, const CubeComplex& b);
bool isomorphic(const CubeComplex& a, const CubeComplex& b);

// Graphviz export of the 1-skeleton, edges coloured by hyperplane.
std::string to_dot(const CubeComplex& c, const std::string& name = "complex");

// m x n grid of vertices, vertex (x, y) has id x * n + y. Hyperplanes 0..m-2
// cut the first coordinate and m-1.. the second.
CubeComplex grid_complex(std::size_t m, std::size_t n);

}  // namespace cubeflat
