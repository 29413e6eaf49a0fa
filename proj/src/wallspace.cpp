#include "cubeflat/wallspace.hpp"

#include <deque>
#include <string>
#include <unordered_map>

namespace cubeflat {

Wallspace::Wallspace(std::size_t point_count, std::vector<std::vector<std::size_t>> left_sides)
    : point_count_(point_count) {
  if (point_count == 0 && !left_sides.empty()) {
    throw WallspaceError("walls need points to separate");
  }
  std::unordered_map<DynamicBitset, std::size_t, DynamicBitsetHash> seen;
  for (std::size_t w = 0; w < left_sides.size(); ++w) {
    DynamicBitset left(point_count);
    for (std::size_t p : left_sides[w]) {
      if (p >= point_count) {
        throw WallspaceError("wall " + std::to_string(w) + " references unknown point " +
                             std::to_string(p));
      }
      left.set(p);
    }
    const std::size_t n_left = left.count();
    if (n_left == 0 || n_left == point_count) {
      throw WallspaceError("wall " + std::to_string(w) + " has an empty side");
    }
    // A bipartition is identified up to swapping sides: normalise so point 0 is on the left.
    DynamicBitset key = left.test(0) ? left : (left ^ DynamicBitset::ones(point_count));
    if (auto [it, inserted] = seen.emplace(std::move(key), w); !inserted) {
      throw WallspaceError("walls " + std::to_string(it->second) + " and " + std::to_string(w) +
                           " induce the same bipartition");
    }
    left_.push_back(std::move(left));
  }
}

std::vector<std::size_t> Wallspace::left_side(std::size_t wall) const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < point_count_; ++p) {
    if (left_.at(wall).test(p)) out.push_back(p);
  }
  return out;
}

Pocset::Pocset(std::size_t wall_count) : n_(wall_count), allowed_(wall_count * wall_count, 0xF) {}

void Pocset::forbid(std::size_t a, Side sa, std::size_t b, Side sb) {
  allowed_[a * n_ + b] &= static_cast<std::uint8_t>(~(1u << quadrant(sa, sb)));
  allowed_[b * n_ + a] &= static_cast<std::uint8_t>(~(1u << quadrant(sb, sa)));
}

bool Pocset::consistent(const Orientation& o) const {
  for (std::size_t a = 0; a < n_; ++a) {
    const Side sa = o.test(a) ? Side::Right : Side::Left;
    for (std::size_t b = a + 1; b < n_; ++b) {
      if (!compatible(a, sa, b, o.test(b) ? Side::Right : Side::Left)) return false;
    }
  }
  return true;
}

bool Pocset::flip_consistent(const Orientation& o, std::size_t w) const {
  const Side sw = o.test(w) ? Side::Left : Side::Right;  // side after the flip
  for (std::size_t b = 0; b < n_; ++b) {
    if (b != w && !compatible(w, sw, b, o.test(b) ? Side::Right : Side::Left)) return false;
  }
  return true;
}

Pocset pocset_of(const Wallspace& w) {
  Pocset p(w.wall_count());
  const std::size_t n = w.wall_count();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      unsigned occupied = 0;
      for (std::size_t pt = 0; pt < w.point_count(); ++pt) {
        occupied |= 1u << (static_cast<unsigned>(w.side(a, pt)) * 2 +
                           static_cast<unsigned>(w.side(b, pt)));
      }
      for (Side sa : {Side::Left, Side::Right}) {
        for (Side sb : {Side::Left, Side::Right}) {
          const unsigned q = static_cast<unsigned>(sa) * 2 + static_cast<unsigned>(sb);
          if (!((occupied >> q) & 1u)) p.forbid(a, sa, b, sb);
        }
      }
    }
  }
  return p;
}

Orientation canonical_orientation(const Wallspace& w, std::size_t point) {
  if (point >= w.point_count()) {
    throw std::out_of_range("unknown point id " + std::to_string(point));
  }
  Orientation o(w.wall_count());
  for (std::size_t wall = 0; wall < w.wall_count(); ++wall) {
    o.set(wall, w.side(wall, point) == Side::Right);
  }
  return o;
}

DualComplex dual_of_pocset(const Pocset& p, std::span<const Orientation> seeds,
                           ValidationOptions options) {
  if (seeds.empty()) throw std::invalid_argument("dual construction needs at least one seed");
  std::unordered_map<Orientation, Vertex, DynamicBitsetHash> index;
  std::vector<Orientation> orientations;
  std::vector<Vertex> seed_vertices;
  std::deque<Vertex> queue;
  auto visit = [&](const Orientation& o) {
    auto [it, inserted] = index.emplace(o, static_cast<Vertex>(orientations.size()));
    if (inserted) {
      orientations.push_back(o);
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& s : seeds) {
    if (s.size() != p.wall_count()) throw std::invalid_argument("seed has wrong length");
    if (!p.consistent(s)) throw WallspaceError("seed orientation is inconsistent");
    seed_vertices.push_back(visit(s));
  }
  std::vector<Edge> edges;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (std::size_t w = 0; w < p.wall_count(); ++w) {
      if (!p.flip_consistent(orientations[u], w)) continue;
      Orientation next = orientations[u];
      next.flip(w);
      const Vertex v = visit(next);
      if (u < v) edges.push_back({u, v, static_cast<HyperplaneId>(w)});
    }
  }
  const std::size_t n = orientations.size();
  return DualComplex{CubeComplex(n, std::move(edges), options), std::move(orientations),
                     std::move(seed_vertices)};
}

DualComplex dual_complex(const Wallspace& w, ValidationOptions options) {
  if (w.point_count() == 0) throw WallspaceError("wallspace has no points");
  std::vector<Orientation> seeds;
  seeds.reserve(w.point_count());
  for (std::size_t pt = 0; pt < w.point_count(); ++pt) seeds.push_back(canonical_orientation(w, pt));
  return dual_of_pocset(pocset_of(w), seeds, options);
}

CubeComplex dual(const Wallspace& w) { return std::move(dual_complex(w).complex); }

}  // namespace cubeflat
