#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubeflat {

using IntVector = std::vector<std::int64_t>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integer sublattice of Z^p in Hermite normal form. Basis vectors are rows of
// an upper echelon matrix: pivots positive, entries above a pivot in
// [0, pivot), zero rows dropped. Two generating sets span the same lattice iff
// their normal forms are equal.
class Sublattice {
 public:
  explicit Sublattice(std::size_t ambient_rank) : ambient_(ambient_rank) {}

  static Sublattice full(std::size_t ambient_rank);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<IntVector>& basis() const { return basis_; }

  bool contains(std::span<const std::int64_t> v) const;

  friend bool operator==(const Sublattice&, const Sublattice&) = default;

 private:
  friend Sublattice hnf(std::size_t, std::span<const IntVector>);
  std::size_t ambient_;
  std::vector<IntVector> basis_;
};

Sublattice hnf(std::size_t ambient_rank, std::span<const IntVector> vectors);
Sublattice intersect(const Sublattice& a, const Sublattice& b);
bool commensurable(const Sublattice& a, const Sublattice& b);

// Exact binomial coefficient; throws std::overflow_error.
std::int64_t binomial(std::int64_t n, std::int64_t k);

std::int64_t gcd_of(std::span<const std::int64_t> v);
bool is_primitive(std::span<const std::int64_t> v);

struct CommensurabilityClass {
  Sublattice representative;
  std::vector<std::size_t> members;  // indices into the input list
};

struct ObstructionReport {
  std::size_t p = 0;
  std::size_t k = 0;
  std::vector<CommensurabilityClass> classes;
  std::int64_t threshold = 0;  // C(p, k) + 1
  bool fired = false;
  std::vector<std::string> hypotheses_assumed;
};

// Partitions equal-rank intersection lattices into commensurability classes
// and compares the class count with C(p, k) + 1.
ObstructionReport obstruction(std::span<const Sublattice> intersections, std::size_t p,
                              std::size_t k);

struct TubularEdge {
  std::string letter;
  IntVector from;  // b in the relation b^t = c
  IntVector to;    // c
};

// Multiple HNN extension of Z^p with cyclic edge groups.
struct TubularPresentation {
  std::size_t rank = 0;
  std::vector<TubularEdge> edges;
};

// Throws std::invalid_argument on zero or non-primitive edge vectors.
void check_presentation(const TubularPresentation& t);

ObstructionReport tubular_obstruction(const TubularPresentation& t);

}  // namespace cubeflat
