#include "cubeflat/cube_complex.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace cubeflat {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> bfs_from(const std::vector<std::vector<Neighbor>>& adjacency,
                                  std::span<const Vertex> sources) {
  std::vector<std::size_t> dist(adjacency.size(), kUnreached);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (const auto& nb : adjacency[u]) {
      if (dist[nb.vertex] == kUnreached) {
        dist[nb.vertex] = dist[u] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  return dist;
}

// Vertices reachable from `start` without crossing an edge of hyperplane h.
std::vector<bool> reach_avoiding(const std::vector<std::vector<Neighbor>>& adjacency, Vertex start,
                                 HyperplaneId h) {
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<Vertex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (const auto& nb : adjacency[u]) {
      if (nb.hyperplane != h && !seen[nb.vertex]) {
        seen[nb.vertex] = true;
        stack.push_back(nb.vertex);
      }
    }
  }
  return seen;
}

void check_universe(const CubeComplex& c, const VertexSet& s) {
  if (s.universe() != c.vertex_count()) {
    throw std::invalid_argument("vertex set belongs to a complex with " +
                                std::to_string(s.universe()) + " vertices, expected " +
                                std::to_string(c.vertex_count()));
  }
}

}  // namespace

// ---------------------------------------------------------------- VertexSet

VertexSet::VertexSet(std::size_t universe, std::span<const Vertex> members)
    : mask_(universe, false) {
  for (Vertex v : members) {
    if (v >= universe) throw UnknownVertexError(v);
    insert(v);
  }
}

VertexSet VertexSet::all(std::size_t universe) {
  VertexSet s(universe);
  s.mask_.assign(universe, true);
  s.count_ = universe;
  return s;
}

void VertexSet::insert(Vertex v) {
  if (!mask_.at(v)) {
    mask_[v] = true;
    ++count_;
  }
}

void VertexSet::erase(Vertex v) {
  if (mask_.at(v)) {
    mask_[v] = false;
    --count_;
  }
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(count_);
  for (std::size_t v = 0; v < mask_.size(); ++v) {
    if (mask_[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

bool VertexSet::subset_of(const VertexSet& other) const {
  for (std::size_t v = 0; v < mask_.size(); ++v) {
    if (mask_[v] && !other.contains(static_cast<Vertex>(v))) return false;
  }
  return true;
}

bool VertexSet::intersects(const VertexSet& other) const {
  const std::size_t n = std::min(mask_.size(), other.mask_.size());
  for (std::size_t v = 0; v < n; ++v) {
    if (mask_[v] && other.mask_[v]) return true;
  }
  return false;
}

VertexSet VertexSet::intersection(const VertexSet& other) const {
  VertexSet out(mask_.size());
  for (std::size_t v = 0; v < mask_.size(); ++v) {
    if (mask_[v] && other.contains(static_cast<Vertex>(v))) out.insert(static_cast<Vertex>(v));
  }
  return out;
}

// -------------------------------------------------------------- CubeComplex

CubeComplex::CubeComplex(std::size_t vertex_count, std::vector<Edge> edges,
                         ValidationOptions options)
    : adjacency_(vertex_count) {
  if (vertex_count == 0) throw ComplexError("a cube complex needs at least one vertex");
  if (vertex_count > std::numeric_limits<Vertex>::max()) {
    throw ComplexError("too many vertices");
  }

  labels_.reserve(edges.size());
  for (const auto& e : edges) labels_.push_back(e.hyperplane);
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());

  std::set<std::pair<Vertex, Vertex>> seen_pairs;
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw ComplexError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") references an unknown vertex");
    }
    if (e.u == e.v) throw ComplexError("self-loop at vertex " + std::to_string(e.u));
    if (!seen_pairs.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw ComplexError("duplicate edge between " + std::to_string(e.u) + " and " +
                         std::to_string(e.v));
    }
    const auto h = static_cast<HyperplaneId>(
        std::lower_bound(labels_.begin(), labels_.end(), e.hyperplane) - labels_.begin());
    edges_.push_back({e.u, e.v, h});
    adjacency_[e.u].push_back({e.v, h});
    adjacency_[e.v].push_back({e.u, h});
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  // Connectivity and bipartiteness.
  const Vertex root = 0;
  const auto dist = bfs_from(adjacency_, std::span<const Vertex>(&root, 1));
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (dist[v] == kUnreached) {
      throw ComplexError("graph is disconnected: vertex " + std::to_string(v) +
                         " is unreachable from vertex 0");
    }
  }
  for (const auto& e : edges_) {
    if (dist[e.u] % 2 == dist[e.v] % 2) {
      throw ComplexError("graph is not bipartite (edge " + std::to_string(e.u) + "-" +
                         std::to_string(e.v) + ")");
    }
  }

  // Halfspaces: deleting the edges of one hyperplane leaves two components.
  const std::size_t hcount = labels_.size();
  signatures_.assign(vertex_count, DynamicBitset(hcount));
  for (HyperplaneId h = 0; h < hcount; ++h) {
    const auto left = reach_avoiding(adjacency_, 0, h);
    Vertex first_right = 0;
    bool found = false;
    for (std::size_t v = 0; v < vertex_count && !found; ++v) {
      if (!left[v]) {
        first_right = static_cast<Vertex>(v);
        found = true;
      }
    }
    if (!found) {
      throw ComplexError("removing hyperplane " + std::to_string(labels_[h]) +
                         " does not disconnect the graph");
    }
    const auto right = reach_avoiding(adjacency_, first_right, h);
    for (std::size_t v = 0; v < vertex_count; ++v) {
      if (!left[v] && !right[v]) {
        throw ComplexError("removing hyperplane " + std::to_string(labels_[h]) +
                           " leaves more than two components");
      }
      if (right[v]) signatures_[v].set(h);
    }
  }
  for (const auto& e : edges_) {
    if (signatures_[e.u].test(e.hyperplane) == signatures_[e.v].test(e.hyperplane)) {
      throw ComplexError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                         " of hyperplane " + std::to_string(labels_[e.hyperplane]) +
                         " does not join its two halfspaces");
    }
  }

  by_signature_.reserve(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!by_signature_.emplace(signatures_[v], static_cast<Vertex>(v)).second) {
      throw ComplexError("vertices " + std::to_string(by_signature_[signatures_[v]]) + " and " +
                         std::to_string(v) + " are separated by no hyperplane");
    }
  }

  validate(*this, options);
}

std::span<const Neighbor> CubeComplex::neighbors(Vertex v) const {
  check_vertex(v);
  return adjacency_[v];
}

std::optional<Vertex> CubeComplex::find_vertex(const DynamicBitset& signature) const {
  if (auto it = by_signature_.find(signature); it != by_signature_.end()) return it->second;
  return std::nullopt;
}

VertexSet CubeComplex::halfspace(HyperplaneId h, Side s) const {
  if (h >= hyperplane_count()) {
    throw std::out_of_range("unknown hyperplane index " + std::to_string(h));
  }
  VertexSet out(vertex_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    if (side(static_cast<Vertex>(v), h) == s) out.insert(static_cast<Vertex>(v));
  }
  return out;
}

bool CubeComplex::crosses(HyperplaneId a, HyperplaneId b) const {
  if (a == b) return false;
  unsigned quadrants = 0;
  for (const auto& sig : signatures_) {
    quadrants |= 1u << (sig.test(a) * 2 + sig.test(b));
    if (quadrants == 0xF) return true;
  }
  return false;
}

void validate(const CubeComplex& c, ValidationOptions options) {
  if (!options.strict) return;
  const std::size_t n = c.vertex_count();
  // Path distance must equal the number of separating hyperplanes; this also
  // makes every halfspace convex.
  for (Vertex u = 0; u < n; ++u) {
    const auto dist = bfs_from(c.adjacency_, std::span<const Vertex>(&u, 1));
    for (Vertex v = u + 1; v < n; ++v) {
      if (dist[v] != c.signatures_[u].hamming(c.signatures_[v])) {
        throw ComplexError("distance between " + std::to_string(u) + " and " +
                           std::to_string(v) + " is " + std::to_string(dist[v]) + " but " +
                           std::to_string(c.signatures_[u].hamming(c.signatures_[v])) +
                           " hyperplanes separate them");
      }
    }
  }
  if (n >= options.median_check_limit) return;
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      for (Vertex z = y + 1; z < n; ++z) {
        const auto m = DynamicBitset::majority(c.signatures_[x], c.signatures_[y],
                                               c.signatures_[z]);
        if (!c.by_signature_.contains(m)) {
          throw ComplexError("vertices " + std::to_string(x) + ", " + std::to_string(y) + ", " +
                             std::to_string(z) + " have no median");
        }
      }
    }
  }
}

// --------------------------------------------------------------- operations

std::size_t distance(const CubeComplex& c, Vertex u, Vertex v) {
  c.check_vertex(u);
  c.check_vertex(v);
  return c.signature(u).hamming(c.signature(v));
}

Vertex median(const CubeComplex& c, Vertex x, Vertex y, Vertex z) {
  c.check_vertex(x);
  c.check_vertex(y);
  c.check_vertex(z);
  const auto m = DynamicBitset::majority(c.signature(x), c.signature(y), c.signature(z));
  if (auto v = c.find_vertex(m)) return *v;
  throw ComplexError("median axiom fails for vertices " + std::to_string(x) + ", " +
                     std::to_string(y) + ", " + std::to_string(z));
}

VertexSet hull(const CubeComplex& c, const VertexSet& s) {
  check_universe(c, s);
  if (s.empty()) throw EmptySetError();
  const auto members = s.members();
  const std::size_t hcount = c.hyperplane_count();
  DynamicBitset all_right = DynamicBitset::ones(hcount);
  DynamicBitset any_right(hcount);
  for (Vertex v : members) {
    all_right &= c.signature(v);
    any_right |= c.signature(v);
  }
  // Hyperplanes with all of s on one side constrain the hull to that side.
  DynamicBitset constrained = all_right | (any_right ^ DynamicBitset::ones(hcount));
  const DynamicBitset wanted = all_right;
  VertexSet out(c.vertex_count());
  for (Vertex v = 0; v < c.vertex_count(); ++v) {
    if (!((c.signature(v) ^ wanted) & constrained).any()) out.insert(v);
  }
  return out;
}

bool is_convex(const CubeComplex& c, const VertexSet& s) { return hull(c, s) == s; }

HellyResult helly_point(const CubeComplex& c, std::span<const VertexSet> family) {
  if (family.empty()) throw std::invalid_argument("helly_point needs a nonempty family");
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!is_convex(c, family[i])) {
      throw std::invalid_argument("family member " + std::to_string(i) + " is not convex");
    }
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (!family[i].intersects(family[j])) return NoCommonPoint{i, j};
    }
  }
  VertexSet common = family[0];
  for (std::size_t i = 1; i < family.size(); ++i) common = common.intersection(family[i]);
  if (common.empty()) {
    throw ComplexError("pairwise-intersecting convex family has empty intersection");
  }
  return common.members().front();
}

Thickening thicken(const CubeComplex& c, const VertexSet& y, std::size_t r) {
  if (!is_convex(c, y)) throw std::invalid_argument("thicken expects a convex set");
  const auto sources = y.members();
  std::vector<std::vector<Neighbor>> adjacency(c.vertex_count());
  for (Vertex v = 0; v < c.vertex_count(); ++v) {
    auto nbs = c.neighbors(v);
    adjacency[v].assign(nbs.begin(), nbs.end());
  }
  const auto dist = bfs_from(adjacency, sources);
  VertexSet ball(c.vertex_count());
  for (Vertex v = 0; v < c.vertex_count(); ++v) {
    if (dist[v] <= r) ball.insert(v);
  }
  Thickening out{hull(c, ball), 0};
  for (Vertex v : out.set.members()) out.realized_radius = std::max(out.realized_radius, dist[v]);
  return out;
}

std::size_t packing_number(const CubeComplex& c, std::span<const VertexSet> translates,
                           std::size_t r) {
  if (translates.empty()) throw std::invalid_argument("packing_number needs translates");
  std::vector<std::size_t> multiplicity(c.vertex_count(), 0);
  for (const auto& t : translates) {
    const auto thick = thicken(c, t, r);
    for (Vertex v : thick.set.members()) ++multiplicity[v];
  }
  return *std::max_element(multiplicity.begin(), multiplicity.end());
}

ProductDecomposition product_decomposition(const CubeComplex& c) {
  const std::size_t hcount = c.hyperplane_count();
  // quadrant occupancy for each ordered pair a < b
  std::vector<std::uint8_t> quadrants(hcount * hcount, 0);
  for (Vertex v = 0; v < c.vertex_count(); ++v) {
    const auto& sig = c.signature(v);
    for (std::size_t a = 0; a < hcount; ++a) {
      const unsigned sa = sig.test(a);
      for (std::size_t b = a + 1; b < hcount; ++b) {
        quadrants[a * hcount + b] |= static_cast<std::uint8_t>(1u << (sa * 2 + sig.test(b)));
      }
    }
  }
  std::vector<std::size_t> parent(hcount);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < hcount; ++a) {
    for (std::size_t b = a + 1; b < hcount; ++b) {
      if (quadrants[a * hcount + b] != 0xF) {
        const auto ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::map<std::size_t, std::vector<HyperplaneId>> by_root;
  for (std::size_t h = 0; h < hcount; ++h) by_root[find(h)].push_back(static_cast<HyperplaneId>(h));

  ProductDecomposition out;
  for (auto& [root, cls] : by_root) out.classes.push_back(std::move(cls));
  std::sort(out.classes.begin(), out.classes.end());

  long double product = 1;
  for (const auto& cls : out.classes) {
    std::unordered_map<DynamicBitset, Vertex, DynamicBitsetHash> index;
    std::vector<Vertex> projection(c.vertex_count());
    for (Vertex v = 0; v < c.vertex_count(); ++v) {
      DynamicBitset key(cls.size());
      for (std::size_t i = 0; i < cls.size(); ++i) key.set(i, c.signature(v).test(cls[i]));
      auto [it, inserted] = index.emplace(std::move(key), static_cast<Vertex>(index.size()));
      projection[v] = it->second;
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<Edge> edges;
    for (const auto& e : c.edges()) {
      if (!std::binary_search(cls.begin(), cls.end(), e.hyperplane)) continue;
      const Vertex pu = projection[e.u], pv = projection[e.v];
      if (seen.emplace(std::min(pu, pv), std::max(pu, pv)).second) {
        edges.push_back({pu, pv, c.hyperplane_label(e.hyperplane)});
      }
    }
    product *= static_cast<long double>(index.size());
    out.factors.emplace_back(index.size(), std::move(edges), ValidationOptions{.strict = false});
    out.projections.push_back(std::move(projection));
  }
  if (out.classes.empty()) {
    // A single vertex is the empty product; report it as one trivial factor.
    out.factors.emplace_back(1, std::vector<Edge>{}, ValidationOptions{.strict = false});
    out.projections.push_back(std::vector<Vertex>(c.vertex_count(), 0));
    out.classes.emplace_back();
  }
  out.exact = product == static_cast<long double>(c.vertex_count());
  return out;
}

// ------------------------------------------------------------- isomorphism

std::optional<std::vector<Vertex>> find_isomorphism(const CubeComplex& a, const CubeComplex& b) {
  const std::size_t n = a.vertex_count();
  if (n != b.vertex_count() || a.edge_count() != b.edge_count()) return std::nullopt;

  // Invariant: degree followed by the histogram of distances to all vertices.
  auto profile = [](const CubeComplex& c) {
    std::vector<std::vector<std::size_t>> out(c.vertex_count());
    for (Vertex v = 0; v < c.vertex_count(); ++v) {
      std::vector<std::size_t> hist(c.hyperplane_count() + 2, 0);
      hist[0] = c.neighbors(v).size();
      for (Vertex w = 0; w < c.vertex_count(); ++w) ++hist[1 + distance(c, v, w)];
      out[v] = std::move(hist);
    }
    return out;
  };
  const auto pa = profile(a);
  const auto pb = profile(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  // Root: the vertex of a whose profile is rarest.
  std::map<std::vector<std::size_t>, std::size_t> freq;
  for (const auto& p : pa) ++freq[p];
  Vertex root = 0;
  for (Vertex v = 1; v < n; ++v) {
    if (freq[pa[v]] < freq[pa[root]]) root = v;
  }
  std::vector<Vertex> order;
  std::vector<Vertex> parent(n, 0);
  {
    std::vector<bool> seen(n, false);
    std::deque<Vertex> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (const auto& nb : a.neighbors(u)) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = true;
          parent[nb.vertex] = u;
          queue.push_back(nb.vertex);
        }
      }
    }
  }

  std::vector<Vertex> map(n, 0);
  std::vector<bool> used(n, false);
  auto consistent = [&](std::size_t depth, Vertex target) {
    const Vertex src = order[depth];
    if (used[target] || pa[src] != pb[target]) return false;
    for (std::size_t i = 0; i < depth; ++i) {
      if (distance(a, src, order[i]) != distance(b, target, map[order[i]])) return false;
    }
    return true;
  };
  // Iterative DFS over candidate lists.
  std::vector<std::vector<Vertex>> candidates(n);
  std::vector<std::size_t> cursor(n, 0);
  auto fill = [&](std::size_t depth) {
    candidates[depth].clear();
    cursor[depth] = 0;
    if (depth == 0) {
      for (Vertex t = 0; t < n; ++t) candidates[0].push_back(t);
    } else {
      for (const auto& nb : b.neighbors(map[parent[order[depth]]])) {
        candidates[depth].push_back(nb.vertex);
      }
    }
  };
  std::size_t depth = 0;
  fill(0);
  while (true) {
    bool advanced = false;
    while (cursor[depth] < candidates[depth].size()) {
      const Vertex t = candidates[depth][cursor[depth]++];
      if (consistent(depth, t)) {
        map[order[depth]] = t;
        used[t] = true;
        advanced = true;
        break;
      }
    }
    if (advanced) {
      if (depth + 1 == n) return map;
      fill(++depth);
      continue;
    }
    if (depth == 0) return std::nullopt;
    --depth;
    used[map[order[depth]]] = false;
  }
}

bool isomorphic(const CubeComplex& a, const CubeComplex& b) {
  return find_isomorphism(a, b).has_value();
}

// ----------------------------------------------------------------- export

std::string to_dot(const CubeComplex& c, const std::string& name) {
  static constexpr std::array<const char*, 10> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream os;
  os << "graph " << name << " {\n  node [shape=circle, fontsize=10];\n";
  for (Vertex v = 0; v < c.vertex_count(); ++v) os << "  " << v << ";\n";
  for (const auto& e : c.edges()) {
    const auto label = c.hyperplane_label(e.hyperplane);
    os << "  " << e.u << " -- " << e.v << " [color=\"" << kPalette[label % kPalette.size()]
       << "\", label=\"h" << label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

CubeComplex grid_complex(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw std::invalid_argument("grid dimensions must be positive");
  std::vector<Edge> edges;
  auto id = [n](std::size_t x, std::size_t y) { return static_cast<Vertex>(x * n + y); };
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x + 1 < m) edges.push_back({id(x, y), id(x + 1, y), static_cast<HyperplaneId>(x)});
      if (y + 1 < n) {
        edges.push_back({id(x, y), id(x, y + 1), static_cast<HyperplaneId>(m - 1 + y)});
      }
    }
  }
  return CubeComplex(m * n, std::move(edges), ValidationOptions{.strict = false});
}

}  // namespace cubeflat
