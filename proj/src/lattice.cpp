#include "cubeflat/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <utility>

namespace cubeflat {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return out;
}

// row -= q * pivot_row
void axpy(IntVector& row, std::int64_t q, const IntVector& pivot_row) {
  if (q == 0) return;
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = checked_sub(row[j], checked_mul(q, pivot_row[j]));
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Reduction {
  std::vector<IntVector> rows;
  std::vector<IntVector> transform;  // transform * input = rows
  std::size_t rank = 0;
};

// Integer row reduction to Hermite normal form, optionally tracking the
// unimodular transformation.
Reduction row_reduce(std::vector<IntVector> rows, std::size_t cols, bool track) {
  const std::size_t m = rows.size();
  Reduction out;
  if (track) {
    out.transform.assign(m, IntVector(m, 0));
    for (std::size_t i = 0; i < m; ++i) out.transform[i][i] = 1;
  }
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(rows[i], rows[j]);
    if (track) std::swap(out.transform[i], out.transform[j]);
  };
  auto sub_rows = [&](std::size_t target, std::int64_t q, std::size_t source) {
    axpy(rows[target], q, rows[source]);
    if (track) axpy(out.transform[target], q, out.transform[source]);
  };

  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < m; ++col) {
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (rows[i][col] != 0 &&
            (best == m || std::llabs(rows[i][col]) < std::llabs(rows[best][col]))) {
          best = i;
        }
      }
      if (best == m) break;
      swap_rows(r, best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (rows[i][col] == 0) continue;
        sub_rows(i, rows[i][col] / rows[r][col], r);
        if (rows[i][col] != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0) {
      for (auto& x : rows[r]) x = checked_sub(0, x);
      if (track) {
        for (auto& x : out.transform[r]) x = checked_sub(0, x);
      }
    }
    for (std::size_t i = 0; i < r; ++i) sub_rows(i, floor_div(rows[i][col], rows[r][col]), r);
    ++r;
  }
  out.rank = r;
  out.rows = std::move(rows);
  return out;
}

}  // namespace

Sublattice Sublattice::full(std::size_t ambient_rank) {
  std::vector<IntVector> basis(ambient_rank, IntVector(ambient_rank, 0));
  for (std::size_t i = 0; i < ambient_rank; ++i) basis[i][i] = 1;
  return hnf(ambient_rank, basis);
}

bool Sublattice::contains(std::span<const std::int64_t> v) const {
  if (v.size() != ambient_) throw DimensionError("vector has wrong dimension");
  IntVector rest(v.begin(), v.end());
  std::size_t col = 0;
  for (const auto& row : basis_) {
    while (row[col] == 0) {
      if (rest[col] != 0) return false;
      ++col;
    }
    if (rest[col] % row[col] != 0) return false;
    axpy(rest, rest[col] / row[col], row);
  }
  return std::all_of(rest.begin(), rest.end(), [](std::int64_t x) { return x == 0; });
}

Sublattice hnf(std::size_t ambient_rank, std::span<const IntVector> vectors) {
  std::vector<IntVector> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != ambient_rank) {
      throw DimensionError("vector of length " + std::to_string(v.size()) + " in Z^" +
                           std::to_string(ambient_rank));
    }
    rows.push_back(v);
  }
  auto red = row_reduce(std::move(rows), ambient_rank, false);
  Sublattice out(ambient_rank);
  out.basis_.assign(red.rows.begin(), red.rows.begin() + static_cast<std::ptrdiff_t>(red.rank));
  return out;
}

Sublattice intersect(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) {
    throw DimensionError("cannot intersect sublattices of Z^" + std::to_string(a.ambient_rank()) +
                         " and Z^" + std::to_string(b.ambient_rank()));
  }
  const std::size_t p = a.ambient_rank();
  if (a.rank() == 0 || b.rank() == 0) return Sublattice(p);
  std::vector<IntVector> rows = a.basis();
  rows.insert(rows.end(), b.basis().begin(), b.basis().end());
  const std::size_t m = rows.size();
  // Relations u with u * [A; B] = 0 give the common vectors u_A * A.
  auto red = row_reduce(std::move(rows), p, true);
  std::vector<IntVector> common;
  for (std::size_t i = red.rank; i < m; ++i) {
    IntVector v(p, 0);
    for (std::size_t j = 0; j < a.rank(); ++j) {
      for (std::size_t c = 0; c < p; ++c) {
        std::int64_t sum = 0;
        if (__builtin_add_overflow(v[c], checked_mul(red.transform[i][j], a.basis()[j][c]), &sum)) {
          throw std::overflow_error("integer overflow in lattice arithmetic");
        }
        v[c] = sum;
      }
    }
    common.push_back(std::move(v));
  }
  return hnf(p, common);
}

bool commensurable(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) {
    throw DimensionError("commensurability needs a common ambient lattice");
  }
  return a.rank() == b.rank() && intersect(a, b).rank() == a.rank();
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binomial needs n >= 0");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::int64_t>::max()) {
      throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t gcd_of(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

bool is_primitive(std::span<const std::int64_t> v) { return gcd_of(v) == 1; }

ObstructionReport obstruction(std::span<const Sublattice> intersections, std::size_t p,
                              std::size_t k) {
  ObstructionReport report;
  report.p = p;
  report.k = k;
  for (std::size_t i = 0; i < intersections.size(); ++i) {
    const auto& l = intersections[i];
    if (l.ambient_rank() != p) {
      throw DimensionError("intersection " + std::to_string(i) + " lives in Z^" +
                           std::to_string(l.ambient_rank()) + ", expected Z^" + std::to_string(p));
    }
    if (l.rank() != k) {
      throw std::invalid_argument("intersection " + std::to_string(i) + " has rank " +
                                  std::to_string(l.rank()) + ", expected " + std::to_string(k));
    }
    auto it = std::find_if(report.classes.begin(), report.classes.end(),
                           [&](const CommensurabilityClass& c) {
                             return commensurable(c.representative, l);
                           });
    if (it == report.classes.end()) {
      report.classes.push_back({l, {i}});
    } else {
      it->members.push_back(i);
    }
  }
  const auto c = binomial(static_cast<std::int64_t>(p), static_cast<std::int64_t>(k));
  if (c == std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("threshold overflows");
  report.threshold = c + 1;
  report.fired = static_cast<std::int64_t>(report.classes.size()) >= report.threshold;
  report.hypotheses_assumed = {
      "the ambient free-abelian subgroup Z^" + std::to_string(p) + " is highest",
      "each intersection is taken with a highest free-abelian subgroup",
  };
  return report;
}

void check_presentation(const TubularPresentation& t) {
  if (t.rank == 0) throw std::invalid_argument("presentation rank must be positive");
  for (const auto& e : t.edges) {
    for (const auto* v : {&e.from, &e.to}) {
      if (v->size() != t.rank) {
        throw DimensionError("edge " + e.letter + " has a vector of length " +
                             std::to_string(v->size()) + " in rank " + std::to_string(t.rank));
      }
      if (!is_primitive(*v)) {
        throw std::invalid_argument("edge " + e.letter + " has a non-primitive vector");
      }
    }
  }
}

ObstructionReport tubular_obstruction(const TubularPresentation& t) {
  check_presentation(t);
  std::vector<Sublattice> cyclic;
  for (const auto& e : t.edges) {
    cyclic.push_back(hnf(t.rank, std::vector<IntVector>{e.from}));
    cyclic.push_back(hnf(t.rank, std::vector<IntVector>{e.to}));
  }
  auto report = obstruction(cyclic, t.rank, 1);
  report.hypotheses_assumed.push_back(
      "the conjugates of Z^" + std::to_string(t.rank) +
      " by the stable letters are highest and meet Z^" + std::to_string(t.rank) +
      " exactly in the edge groups");
  return report;
}

}  // namespace cubeflat
