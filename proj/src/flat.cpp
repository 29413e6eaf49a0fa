#include "cubeflat/flat.hpp"

#include <algorithm>
#include <cstdlib>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "cubeflat/lattice.hpp"

namespace cubeflat {

// ---------------------------------------------------------------- rationals

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("malformed rational \"" + text + "\"");
    }
    return v;
  };
  std::string_view s(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  const std::int64_t den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in \"" + text + "\"");
  return Rational(parse_int(s.substr(0, slash)), den);
}

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---------------------------------------------------------------- intervals

CrossingInterval CrossingInterval::finite(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw std::invalid_argument("finite interval needs lo <= hi, got " + std::to_string(lo) +
                                " > " + std::to_string(hi));
  }
  return {Kind::Finite, lo, hi};
}

bool CrossingInterval::contains(std::int64_t d) const {
  switch (kind_) {
    case Kind::Empty: return false;
    case Kind::Finite: return lo_ <= d && d <= hi_;
    case Kind::AtLeast: return d >= lo_;
    case Kind::AtMost: return d <= hi_;
    case Kind::All: return true;
  }
  return false;
}

CrossingInterval CrossingInterval::negated() const {
  switch (kind_) {
    case Kind::Finite: return finite(-hi_, -lo_);
    case Kind::AtLeast: return at_most(-lo_);
    case Kind::AtMost: return at_least(-hi_);
    default: return *this;
  }
}

std::string to_string(CrossingInterval::Kind k) {
  switch (k) {
    case CrossingInterval::Kind::Empty: return "empty";
    case CrossingInterval::Kind::Finite: return "finite";
    case CrossingInterval::Kind::AtLeast: return "atleast";
    case CrossingInterval::Kind::AtMost: return "atmost";
    case CrossingInterval::Kind::All: return "all";
  }
  return "?";
}

std::string to_string(const CrossingInterval& c) {
  switch (c.kind()) {
    case CrossingInterval::Kind::Finite:
      return "[" + std::to_string(c.lo()) + "," + std::to_string(c.hi()) + "]";
    case CrossingInterval::Kind::AtLeast: return "[" + std::to_string(c.lo()) + ",inf)";
    case CrossingInterval::Kind::AtMost: return "(-inf," + std::to_string(c.hi()) + "]";
    default: return to_string(c.kind());
  }
}

std::string to_string(const WallRef& w) {
  return "(" + std::to_string(w.cls) + "," + std::to_string(w.rep) + ")";
}

std::vector<WallRef> PeriodicWallspace::orbits() const {
  std::vector<WallRef> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = 0; j < classes[i].reps.size(); ++j) out.push_back({i, j});
  }
  return out;
}

std::string to_string(Lemma l) {
  switch (l) {
    case Lemma::Structure: return "Structure";
    case Lemma::FiniteDimension: return "FiniteDimension";
    case Lemma::CoincidentWalls: return "CoincidentWalls";
    case Lemma::CrossingAntisymmetry: return "CrossingAntisymmetry";
    case Lemma::AlignmentEquivalence: return "AlignmentEquivalence";
    case Lemma::PartialOrderAntisymmetry: return "PartialOrderAntisymmetry";
    case Lemma::PartialOrderTransitivity: return "PartialOrderTransitivity";
    case Lemma::MaximalClass: return "MaximalClass";
    case Lemma::Nesting: return "Nesting";
  }
  return "?";
}

namespace {

std::string describe(const std::vector<WallRef>& ws) {
  std::string s;
  for (const auto& w : ws) s += (s.empty() ? "" : " ") + to_string(w);
  return s;
}

}  // namespace

ValidationError::ValidationError(Lemma lemma, std::vector<WallRef> witness, const std::string& what)
    : std::runtime_error(to_string(lemma) + ": " + what +
                         (witness.empty() ? "" : " [" + describe(witness) + "]")),
      lemma_(lemma),
      witness_(std::move(witness)) {}

std::string to_string(const OrbitPairClass& c) {
  if (std::holds_alternative<Crossing>(c)) return "crossing";
  if (std::holds_alternative<Aligned>(c)) return "aligned";
  const auto& s = std::get<SemiCrossing>(c);
  return std::string("semi-crossing(") + (s.direction == Direction::Up ? "up" : "down") +
         ", m=" + std::to_string(s.threshold) + ")";
}

// ---------------------------------------------------------------- relations

namespace {

bool parallel(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (static_cast<__int128>(a[i]) * b[j] != static_cast<__int128>(a[j]) * b[i]) return false;
    }
  }
  return true;
}

// Crossing set of (a, b) with a.cls == b.cls, including the diagonal rule.
bool orbit_walls_cross(const PeriodicWallspace& pw, const WallRef& a, std::int64_t t,
                       const WallRef& b, std::int64_t s) {
  if (a.cls != b.cls) return true;
  if (a.rep == b.rep && t == s) return false;
  return pw.interval(a.cls, a.rep, b.rep).contains(t - s);
}

Rational position(const PeriodicWallspace& pw, const WallRef& w, std::int64_t t) {
  const auto& c = pw.classes[w.cls];
  return c.reps[w.rep] + c.period * t;
}

void check_ref(const PeriodicWallspace& pw, const WallRef& w) {
  if (!pw.contains(w)) throw std::out_of_range("unknown orbit " + to_string(w));
}

bool aligned_unchecked(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b) {
  return a.cls == b.cls && pw.interval(a.cls, a.rep, b.rep).bounded();
}

bool above_unchecked(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b) {
  return a.cls == b.cls && a.rep != b.rep &&
         pw.interval(a.cls, a.rep, b.rep).kind() == CrossingInterval::Kind::AtLeast;
}

}  // namespace

OrbitPairClass classify_pair(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b) {
  check_ref(pw, a);
  check_ref(pw, b);
  if (a.cls != b.cls) return Crossing{};
  if (a.rep == b.rep) return Aligned{};
  const auto& iv = pw.interval(a.cls, a.rep, b.rep);
  switch (iv.kind()) {
    case CrossingInterval::Kind::All: return Crossing{};
    case CrossingInterval::Kind::AtLeast: return SemiCrossing{Direction::Up, iv.lo() - 1};
    case CrossingInterval::Kind::AtMost: return SemiCrossing{Direction::Down, -iv.hi() - 1};
    default: return Aligned{};
  }
}

bool above(const PeriodicWallspace& pw, const WallRef& a, const WallRef& b) {
  check_ref(pw, a);
  check_ref(pw, b);
  return above_unchecked(pw, a, b);
}

std::vector<AlignmentClass> alignment_partition(const PeriodicWallspace& pw) {
  const auto orbits = pw.orbits();
  std::vector<std::size_t> parent(orbits.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    for (std::size_t j = i + 1; j < orbits.size(); ++j) {
      if (aligned_unchecked(pw, orbits[i], orbits[j])) parent[find(j)] = find(i);
    }
  }
  std::map<std::size_t, AlignmentClass> groups;
  for (std::size_t i = 0; i < orbits.size(); ++i) groups[find(i)].push_back(orbits[i]);
  std::vector<AlignmentClass> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const AlignmentClass& x, const AlignmentClass& y) { return x.front() < y.front(); });
  return out;
}

std::vector<AlignmentClass> alignment_classes(const PeriodicWallspace& pw) {
  for (const auto& a : pw.orbits()) {
    for (const auto& b : pw.orbits()) {
      if (above_unchecked(pw, a, b)) {
        throw std::invalid_argument("orbits " + to_string(a) + " and " + to_string(b) +
                                    " are semi-crossing; use dichotomy");
      }
    }
  }
  return alignment_partition(pw);
}

std::int64_t disjointness_index(const PeriodicWallspace& pw, std::size_t cls, std::size_t rep) {
  check_ref(pw, {cls, rep});
  const auto& iv = pw.interval(cls, rep, rep);
  if (!iv.bounded()) throw std::invalid_argument("self-crossing interval is unbounded");
  if (iv.kind() == CrossingInterval::Kind::Empty) return 1;
  const std::int64_t reach = std::max(std::abs(iv.lo()), std::abs(iv.hi()));
  for (std::int64_t n = 1;; ++n) {
    bool ok = true;
    for (std::int64_t m = n; m <= reach && ok; m += n) {
      if (iv.contains(m) || iv.contains(-m)) ok = false;
    }
    if (ok) return n;
  }
}

// ---------------------------------------------------------------- validation

namespace {

void validate_structure(const PeriodicWallspace& pw) {
  auto fail = [](std::vector<WallRef> w, const std::string& msg) {
    throw ValidationError(Lemma::Structure, std::move(w), msg);
  };
  if (pw.rank == 0) fail({}, "rank must be positive");
  if (pw.classes.empty()) fail({}, "at least one parallelism class is required");
  for (std::size_t i = 0; i < pw.classes.size(); ++i) {
    const auto& c = pw.classes[i];
    const std::string name = "class " + std::to_string(i);
    if (c.direction.size() != pw.rank) {
      fail({}, name + " direction has length " + std::to_string(c.direction.size()) +
                   ", expected " + std::to_string(pw.rank));
    }
    if (!is_primitive(c.direction)) fail({}, name + " direction is not a primitive vector");
    if (c.period <= 0) fail({}, name + " period must be positive");
    if (c.reps.empty()) fail({}, name + " has no representatives");
    for (std::size_t j = 0; j < c.reps.size(); ++j) {
      if (c.reps[j] < 0 || c.reps[j] >= c.period) {
        fail({{i, j}}, name + " representative offset must lie in [0, period)");
      }
    }
    if (c.crossing.size() != c.reps.size()) fail({}, name + " crossing table has wrong size");
    for (const auto& row : c.crossing) {
      if (row.size() != c.reps.size()) fail({}, name + " crossing table has wrong size");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (parallel(c.direction, pw.classes[k].direction)) {
        fail({{k, 0}, {i, 0}}, "classes " + std::to_string(k) + " and " + std::to_string(i) +
                                   " have parallel directions");
      }
    }
  }
}

}  // namespace

void validate(const PeriodicWallspace& pw) {
  validate_structure(pw);
  const auto orbits = pw.orbits();

  for (const auto& a : orbits) {
    const auto& iv = pw.interval(a.cls, a.rep, a.rep);
    if (!iv.bounded()) {
      throw ValidationError(Lemma::FiniteDimension, {a},
                            "a wall crosses infinitely many of its own translates");
    }
    if (iv.kind() == CrossingInterval::Kind::Finite && iv.lo() != -iv.hi()) {
      throw ValidationError(Lemma::FiniteDimension, {a},
                            "self-crossing interval " + to_string(iv) + " is not symmetric");
    }
  }

  for (const auto& a : orbits) {
    for (const auto& b : orbits) {
      if (a.cls != b.cls || !(a < b)) continue;
      const auto& ab = pw.interval(a.cls, a.rep, b.rep);
      const auto& ba = pw.interval(a.cls, b.rep, a.rep);
      if (ba == ab.negated()) continue;
      const bool both_up = ab.kind() == ba.kind() && (ab.kind() == CrossingInterval::Kind::AtLeast ||
                                                      ab.kind() == CrossingInterval::Kind::AtMost);
      throw ValidationError(
          both_up ? Lemma::PartialOrderAntisymmetry : Lemma::CrossingAntisymmetry, {a, b},
          "interval " + to_string(ab) + " is not the negation of " + to_string(ba));
    }
  }

  for (const auto& a : orbits) {
    for (const auto& b : orbits) {
      if (a.cls != b.cls || !(a < b)) continue;
      if (position(pw, a, 0) == position(pw, b, 0) && !orbit_walls_cross(pw, a, 0, b, 0)) {
        throw ValidationError(Lemma::CoincidentWalls, {a, b},
                              "walls at the same position must cross");
      }
    }
  }

  for (const auto& a : orbits) {
    for (const auto& b : orbits) {
      for (const auto& c : orbits) {
        if (a == b || b == c || a == c) continue;
        if (aligned_unchecked(pw, a, b) && aligned_unchecked(pw, b, c) &&
            !aligned_unchecked(pw, a, c)) {
          throw ValidationError(Lemma::AlignmentEquivalence, {a, b, c},
                                "aligned relation is not transitive");
        }
      }
    }
  }

  for (const auto& a : orbits) {
    for (const auto& b : orbits) {
      if (!above_unchecked(pw, a, b)) continue;
      for (const auto& c : orbits) {
        if (c == a || c == b) continue;
        if (above_unchecked(pw, b, c) && !above_unchecked(pw, a, c)) {
          throw ValidationError(Lemma::PartialOrderTransitivity, {a, b, c},
                                "semi-crossing order is not transitive");
        }
        if (aligned_unchecked(pw, b, c) && !above_unchecked(pw, a, c)) {
          throw ValidationError(Lemma::PartialOrderTransitivity, {a, b, c},
                                "orbit above one member of an alignment class is not above all");
        }
        if (aligned_unchecked(pw, a, c) && !above_unchecked(pw, c, b)) {
          throw ValidationError(Lemma::PartialOrderTransitivity, {a, b, c},
                                "orbit below one member of an alignment class is not below all");
        }
      }
    }
  }

  // Every orbit outside a maximal class either crosses all of it or lies
  // below all of it.
  for (const auto& q : alignment_partition(pw)) {
    const bool maximal = std::none_of(orbits.begin(), orbits.end(), [&](const WallRef& h) {
      return std::any_of(q.begin(), q.end(),
                         [&](const WallRef& m) { return above_unchecked(pw, h, m); });
    });
    if (!maximal) continue;
    for (const auto& h : orbits) {
      if (h.cls != q.front().cls || std::find(q.begin(), q.end(), h) != q.end()) continue;
      std::size_t crossing = 0;
      std::size_t below = 0;
      for (const auto& m : q) {
        if (above_unchecked(pw, m, h)) {
          ++below;
        } else if (pw.interval(h.cls, h.rep, m.rep).kind() == CrossingInterval::Kind::All) {
          ++crossing;
        }
      }
      if (crossing != q.size() && below != q.size()) {
        std::vector<WallRef> w = q;
        w.push_back(h);
        throw ValidationError(Lemma::MaximalClass, std::move(w),
                              "orbit neither crosses nor lies below a maximal class");
      }
    }
  }

  // Nesting, with the middle wall normalised to translate 0. Beyond the
  // interval bounds every relation is constant, so a bounded scan suffices.
  for (std::size_t i = 0; i < pw.classes.size(); ++i) {
    const auto& cls = pw.classes[i];
    std::int64_t bound = 0;
    for (const auto& row : cls.crossing) {
      for (const auto& iv : row) bound = std::max({bound, std::abs(iv.lo()), std::abs(iv.hi())});
    }
    const std::int64_t reach = bound + 2;
    const std::size_t r = cls.reps.size();
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t c = 0; c < r; ++c) {
          const WallRef wa{i, a}, wb{i, b}, wc{i, c};
          const Rational yb = position(pw, wb, 0);
          for (std::int64_t s = -reach; s <= 0; ++s) {
            if (position(pw, wa, s) >= yb || orbit_walls_cross(pw, wa, s, wb, 0)) continue;
            for (std::int64_t u = 0; u <= reach; ++u) {
              if (position(pw, wc, u) <= yb || orbit_walls_cross(pw, wc, u, wb, 0)) continue;
              if (orbit_walls_cross(pw, wa, s, wc, u)) {
                throw ValidationError(
                    Lemma::Nesting, {wa, wb, wc},
                    "translates " + std::to_string(s) + " and " + std::to_string(u) +
                        " cross although a wall between them crosses neither");
              }
            }
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------- windows

std::optional<std::size_t> WindowComplex::wall_index(const WallRef& orbit,
                                                     std::int64_t translate) const {
  if (translate < -radius || translate >= radius) return std::nullopt;
  // Walls are stored orbit by orbit, 2N translates each.
  for (std::size_t base = 0; base < walls.size(); base += static_cast<std::size_t>(2 * radius)) {
    if (walls[base].orbit == orbit) return base + static_cast<std::size_t>(translate + radius);
  }
  return std::nullopt;
}

namespace {

std::vector<WindowWall> window_walls(const PeriodicWallspace& pw, std::int64_t radius,
                                     const std::vector<WallRef>& orbits) {
  std::vector<WindowWall> walls;
  for (const auto& o : orbits) {
    check_ref(pw, o);
    for (std::int64_t t = -radius; t < radius; ++t) walls.push_back({o, t, position(pw, o, t)});
  }
  return walls;
}

bool walls_cross(const PeriodicWallspace& pw, const WindowWall& a, const WindowWall& b) {
  return orbit_walls_cross(pw, a.orbit, a.translate, b.orbit, b.translate);
}

}  // namespace

WindowComplex build_window(const PeriodicWallspace& pw, std::int64_t radius,
                           const std::vector<WallRef>& orbits) {
  if (radius < 1) throw std::invalid_argument("window radius must be at least 1");
  WindowComplex out{radius, window_walls(pw, radius, orbits.empty() ? pw.orbits() : orbits),
                    DualComplex{CubeComplex(1, {}), {}, {}}};
  const auto& walls = out.walls;
  Pocset pocset(walls.size());
  for (std::size_t a = 0; a < walls.size(); ++a) {
    for (std::size_t b = a + 1; b < walls.size(); ++b) {
      if (walls_cross(pw, walls[a], walls[b])) continue;
      // Nested: the lower wall's left side lies in the upper wall's left side.
      if (walls[a].position < walls[b].position) {
        pocset.forbid(a, Side::Left, b, Side::Right);
      } else if (walls[b].position < walls[a].position) {
        pocset.forbid(b, Side::Left, a, Side::Right);
      } else {
        throw ValidationError(Lemma::CoincidentWalls, {walls[a].orbit, walls[b].orbit},
                              "walls at the same position must cross");
      }
    }
  }
  // Everything on the left is the canonical orientation of a point below the window.
  const std::vector<Orientation> seeds{Orientation(walls.size())};
  out.dual = dual_of_pocset(pocset, seeds);
  return out;
}

CubeComplex window_hull(const PeriodicWallspace& pw, std::int64_t radius) {
  return std::move(build_window(pw, radius).dual.complex);
}

std::size_t crossing_width(const PeriodicWallspace& pw, const std::vector<WallRef>& orbits,
                           std::int64_t radius) {
  if (radius < 1) throw std::invalid_argument("window radius must be at least 1");
  auto walls = window_walls(pw, radius, orbits);
  std::sort(walls.begin(), walls.end(), [](const WindowWall& x, const WindowWall& y) {
    if (x.position != y.position) return x.position < y.position;
    return std::tie(x.orbit, x.translate) < std::tie(y.orbit, y.translate);
  });
  std::size_t width = 0;
  for (std::size_t a = 0; a < walls.size(); ++a) {
    for (std::size_t b = a + 1; b < walls.size(); ++b) {
      if (walls_cross(pw, walls[a], walls[b])) width = std::max(width, b - a);
    }
  }
  return width;
}

QuasilineCertificate quasiline_certificate(const PeriodicWallspace& pw,
                                           const std::vector<WallRef>& orbits,
                                           std::int64_t radius) {
  if (orbits.empty()) throw std::invalid_argument("quasiline certificate needs orbits");
  QuasilineCertificate cert;
  cert.radius = radius;
  cert.width_at_radius = crossing_width(pw, orbits, radius);
  cert.width_at_double_radius = crossing_width(pw, orbits, 2 * radius);
  if (cert.width_at_radius == cert.width_at_double_radius) cert.width = cert.width_at_radius;
  return cert;
}

// ---------------------------------------------------------------- push-off

namespace {

bool is_maximal(const PeriodicWallspace& pw, const AlignmentClass& q) {
  for (const auto& h : pw.orbits()) {
    for (const auto& m : q) {
      if (above_unchecked(pw, h, m)) return false;
    }
  }
  return true;
}

// Sample class values of generic points of the window core. Values are
// tuples (one per parallelism class) avoiding every wall position; one
// representative per cell of the window arrangement.
std::vector<std::vector<Rational>> core_samples(const PeriodicWallspace& pw,
                                                const std::vector<WindowWall>& walls,
                                                std::int64_t radius) {
  const std::size_t nc = pw.classes.size();
  std::vector<std::vector<Rational>> positions(nc);
  for (const auto& w : walls) positions[w.orbit.cls].push_back(w.position);
  std::vector<std::vector<Rational>> cell_values(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const Rational lo = pw.classes[i].period * (-radius);
    const Rational hi = pw.classes[i].period * radius;
    auto& pos = positions[i];
    pos.push_back(lo);
    pos.push_back(hi);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    for (std::size_t j = 0; j + 1 < pos.size(); ++j) {
      if (pos[j] >= lo && pos[j + 1] <= hi) cell_values[i].push_back((pos[j] + pos[j + 1]) / 2);
    }
  }

  std::vector<IntVector> dirs;
  for (const auto& c : pw.classes) dirs.push_back(c.direction);
  std::vector<std::vector<Rational>> out;
  if (hnf(pw.rank, dirs).rank() == nc) {
    // Independent directions: every tuple of values is realised by a point.
    std::vector<std::size_t> idx(nc, 0);
    while (true) {
      std::vector<Rational> v(nc);
      for (std::size_t i = 0; i < nc; ++i) v[i] = cell_values[i][idx[i]];
      out.push_back(std::move(v));
      std::size_t i = 0;
      while (i < nc && ++idx[i] == cell_values[i].size()) idx[i++] = 0;
      if (i == nc) break;
    }
    return out;
  }

  // Dependent directions: sample points on a fine grid and keep one per cell.
  std::int64_t denom = 2;
  Rational extent = 0;
  for (const auto& c : pw.classes) {
    denom = std::lcm(denom, 2 * c.period.denominator());
    for (const auto& r : c.reps) denom = std::lcm(denom, 2 * r.denominator());
    extent = std::max(extent, c.period * radius);
  }
  const std::int64_t steps = boost::rational_cast<std::int64_t>(extent * denom) + 1;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::int64_t> g(pw.rank, -steps);
  while (true) {
    std::vector<Rational> point(pw.rank);
    for (std::size_t j = 0; j < pw.rank; ++j) {
      point[j] = Rational(g[j], denom) + Rational(1, denom * static_cast<std::int64_t>(7 + 4 * j));
    }
    std::vector<Rational> values(nc);
    std::vector<std::size_t> cell(nc);
    bool ok = true;
    for (std::size_t i = 0; i < nc && ok; ++i) {
      Rational v = 0;
      for (std::size_t j = 0; j < pw.rank; ++j) v += point[j] * pw.classes[i].direction[j];
      const auto& pos = positions[i];
      if (v < pos.front() || v >= pos.back() || std::binary_search(pos.begin(), pos.end(), v)) {
        ok = false;
        break;
      }
      values[i] = v;
      cell[i] = static_cast<std::size_t>(std::upper_bound(pos.begin(), pos.end(), v) - pos.begin());
    }
    if (ok && seen.insert(cell).second) out.push_back(std::move(values));
    std::size_t j = 0;
    while (j < pw.rank && ++g[j] > steps) g[j++] = -steps;
    if (j == pw.rank) break;
  }
  return out;
}

// Translate shifts (one per class) induced by lattice vectors b with
// direction_i . b a multiple of period_i, limited to |shift| <= 2N.
std::vector<std::vector<std::int64_t>> lattice_shifts(const PeriodicWallspace& pw,
                                                      std::int64_t radius) {
  Rational max_period = 0;
  for (const auto& c : pw.classes) max_period = std::max(max_period, c.period);
  const std::int64_t box =
      2 * radius * std::max<std::int64_t>(1, boost::rational_cast<std::int64_t>(max_period) + 1);
  std::set<std::vector<std::int64_t>> shifts;
  std::vector<std::int64_t> b(pw.rank, -box);
  while (true) {
    std::vector<std::int64_t> ell;
    bool ok = true;
    for (const auto& c : pw.classes) {
      std::int64_t dot = 0;
      for (std::size_t j = 0; j < pw.rank; ++j) dot += c.direction[j] * b[j];
      const Rational q = Rational(dot) / c.period;
      if (q.denominator() != 1 || q.numerator() > 2 * radius || q.numerator() < -2 * radius) {
        ok = false;
        break;
      }
      ell.push_back(q.numerator());
    }
    if (ok) shifts.insert(std::move(ell));
    std::size_t j = 0;
    while (j < pw.rank && ++b[j] > box) b[j++] = -box;
    if (j == pw.rank) break;
  }
  return {shifts.begin(), shifts.end()};
}

}  // namespace

PushoffResult pushoff(const PeriodicWallspace& pw, const AlignmentClass& q, std::int64_t k,
                      std::int64_t radius) {
  if (k < 1) throw std::invalid_argument("push-off shift must be positive");
  if (radius < 1) throw std::invalid_argument("window radius must be at least 1");
  if (2 * k > radius) {
    throw PushoffError("shift escapes window: k = " + std::to_string(k) + " > N/2 with N = " +
                       std::to_string(radius));
  }
  AlignmentClass sorted_q = q;
  std::sort(sorted_q.begin(), sorted_q.end());
  if (!sorted_q.empty()) {
    const auto partition = alignment_partition(pw);
    if (std::find(partition.begin(), partition.end(), sorted_q) == partition.end()) {
      throw PushoffError("Q is not an alignment class");
    }
    if (!is_maximal(pw, sorted_q)) throw PushoffError("Q is not maximal in the semi-crossing order");
  }
  auto in_q = [&](const WallRef& w) {
    return std::binary_search(sorted_q.begin(), sorted_q.end(), w);
  };

  const auto window = build_window(pw, radius);
  const auto& walls = window.walls;
  const auto& orient = window.dual.orientations;
  const std::size_t nw = walls.size();

  // Source wall of each target wall under the shift, or nullopt for walls
  // whose source lies below the window (oriented Right).
  std::vector<std::optional<std::size_t>> source(nw);
  std::vector<std::size_t> dropped;
  for (std::size_t w = 0; w < nw; ++w) {
    if (!in_q(walls[w].orbit)) {
      source[w] = w;
      continue;
    }
    source[w] = window.wall_index(walls[w].orbit, walls[w].translate - k);
    if (walls[w].translate >= radius - k) dropped.push_back(w);
  }

  std::unordered_map<Orientation, Vertex, DynamicBitsetHash> index;
  for (Vertex v = 0; v < orient.size(); ++v) index.emplace(orient[v], v);

  PushoffResult result;
  result.k = k;
  result.radius = radius;
  result.window_vertex_count = orient.size();
  for (Vertex v = 0; v < orient.size(); ++v) {
    const bool in_domain =
        std::none_of(dropped.begin(), dropped.end(), [&](std::size_t w) { return orient[v].test(w); });
    if (!in_domain) continue;
    Orientation image(nw);
    for (std::size_t w = 0; w < nw; ++w) image.set(w, source[w] ? orient[v].test(*source[w]) : true);
    auto it = index.find(image);
    if (it == index.end()) {
      throw PushoffError("image of vertex " + std::to_string(v) + " is not a window vertex");
    }
    result.domain.push_back(v);
    result.image.push_back(it->second);
  }

  auto& audit = result.audit;
  audit.injective =
      std::unordered_set<Vertex>(result.image.begin(), result.image.end()).size() == result.image.size();
  if (!audit.injective) throw PushoffError("push-off is not injective on vertices");
  audit.distance_nonincreasing = true;
  for (std::size_t i = 0; i < result.domain.size(); ++i) {
    for (std::size_t j = i + 1; j < result.domain.size(); ++j) {
      ++audit.vertex_pairs_checked;
      if (orient[result.image[i]].hamming(orient[result.image[j]]) >
          orient[result.domain[i]].hamming(orient[result.domain[j]])) {
        audit.distance_nonincreasing = false;
        throw PushoffError("push-off increases the distance between vertices " +
                           std::to_string(result.domain[i]) + " and " +
                           std::to_string(result.domain[j]));
      }
    }
  }

  if (sorted_q.empty()) return result;

  // Canonical vertices x of generic core points e, compared with b.x.
  const std::size_t qc = sorted_q.front().cls;
  const Rational q_limit = pw.classes[qc].period * (radius - k);
  const auto samples = core_samples(pw, walls, radius);
  const auto shifts = lattice_shifts(pw, radius);
  for (const auto& values : samples) {
    if (values[qc] >= q_limit) continue;
    for (const auto& ell : shifts) {
      bool in_core = true;
      for (std::size_t i = 0; i < values.size() && in_core; ++i) {
        const Rational moved = values[i] + pw.classes[i].period * ell[i];
        const Rational bound = pw.classes[i].period * radius;
        in_core = moved >= -bound && moved < bound;
      }
      if (!in_core) continue;
      std::size_t d = 0;
      for (const auto& w : walls) {
        const std::size_t c = w.orbit.cls;
        const Rational shifted =
            in_q(w.orbit) ? w.position - pw.classes[c].period * k : w.position;
        const bool right_of_image = shifted < values[c];
        const bool right_of_translate = w.position < values[c] + pw.classes[c].period * ell[c];
        if (right_of_image != right_of_translate) ++d;
      }
      ++audit.canonical_pairs_checked;
      if (!audit.min_displacement || d < *audit.min_displacement) audit.min_displacement = d;
    }
  }
  if (audit.min_displacement && *audit.min_displacement < static_cast<std::size_t>(k)) {
    throw PushoffError("canonical vertex displaced by only " +
                       std::to_string(*audit.min_displacement) + " < k = " + std::to_string(k));
  }
  return result;
}

// ---------------------------------------------------------------- dichotomy

std::optional<AlignmentClass> select_maximal_class(const PeriodicWallspace& pw) {
  const auto orbits = pw.orbits();
  for (const auto& q : alignment_partition(pw)) {
    if (!is_maximal(pw, q)) continue;
    const bool dominates = std::any_of(orbits.begin(), orbits.end(), [&](const WallRef& h) {
      return above_unchecked(pw, q.front(), h);
    });
    if (dominates) return q;
  }
  return std::nullopt;
}

namespace {

// Checks that restricting orientations to each factor's walls is a graph
// isomorphism from the window hull onto the product of the factor windows.
bool product_isomorphic(const WindowComplex& hull, const std::vector<WindowComplex>& factors) {
  const std::size_t nf = factors.size();
  std::vector<std::pair<std::size_t, std::size_t>> home(hull.walls.size());
  for (std::size_t w = 0; w < hull.walls.size(); ++w) {
    bool found = false;
    for (std::size_t f = 0; f < nf && !found; ++f) {
      if (auto idx = factors[f].wall_index(hull.walls[w].orbit, hull.walls[w].translate)) {
        home[w] = {f, *idx};
        found = true;
      }
    }
    if (!found) return false;
  }
  std::vector<std::unordered_map<Orientation, Vertex, DynamicBitsetHash>> index(nf);
  std::size_t product = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& o = factors[f].dual.orientations;
    for (Vertex v = 0; v < o.size(); ++v) index[f].emplace(o[v], v);
    product *= o.size();
  }
  const auto& hull_orient = hull.dual.orientations;
  if (product != hull_orient.size()) return false;

  std::set<std::vector<Vertex>> tuples;
  for (const auto& o : hull_orient) {
    std::vector<Orientation> parts;
    for (const auto& f : factors) parts.emplace_back(f.walls.size());
    for (std::size_t w = 0; w < o.size(); ++w) parts[home[w].first].set(home[w].second, o.test(w));
    std::vector<Vertex> tuple;
    for (std::size_t f = 0; f < nf; ++f) {
      auto it = index[f].find(parts[f]);
      if (it == index[f].end()) return false;
      tuple.push_back(it->second);
    }
    tuples.insert(std::move(tuple));
  }
  if (tuples.size() != hull_orient.size()) return false;

  // Every hull edge flips one wall, hence is a product edge; equal counts
  // then give equal edge sets.
  std::size_t product_edges = 0;
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t others = 1;
    for (std::size_t g = 0; g < nf; ++g) {
      if (g != f) others *= factors[g].dual.orientations.size();
    }
    product_edges += factors[f].dual.complex.edge_count() * others;
  }
  return product_edges == hull.dual.complex.edge_count();
}

}  // namespace

DichotomyReport dichotomy(const PeriodicWallspace& pw, std::size_t rank, std::int64_t radius) {
  validate(pw);
  if (rank < 1 || rank > pw.rank) {
    throw DichotomyError("lattice rank " + std::to_string(rank) + " must lie in [1, " +
                         std::to_string(pw.rank) + "]");
  }
  if (radius < 1) throw std::invalid_argument("window radius must be at least 1");

  DichotomyReport report;
  report.radius = radius;
  const auto hull = build_window(pw, radius);
  report.hull_vertex_count = hull.dual.orientations.size();
  const auto partition = alignment_partition(pw);
  std::vector<WindowComplex> factor_windows;
  for (const auto& cls : partition) {
    factor_windows.push_back(build_window(pw, radius, cls));
    report.factor_vertex_counts.push_back(factor_windows.back().dual.orientations.size());
  }

  const auto orbits = pw.orbits();
  for (const auto& a : orbits) {
    for (const auto& b : orbits) {
      if (!above_unchecked(pw, a, b)) continue;
      SemiCrossingWitness w;
      w.upper = a;
      w.lower = b;
      w.threshold = pw.interval(a.cls, a.rep, b.rep).lo() - 1;
      auto q = select_maximal_class(pw);
      if (!q) throw DichotomyError("semi-crossing order has no dominating maximal class");
      w.maximal_class = *q;
      for (std::int64_t k = 1; k <= std::min<std::int64_t>(3, radius / 2); ++k) {
        const auto p = pushoff(pw, *q, k, radius);
        w.pushoffs.push_back({k, p.audit.min_displacement.value_or(0), p.audit.canonical_pairs_checked});
      }
      report.verdict = NonCocompact{std::move(w)};
      return report;
    }
  }

  if (partition.size() < rank) {
    throw DichotomyError(std::to_string(partition.size()) + " alignment classes cannot support a rank " +
                         std::to_string(rank) + " lattice");
  }
  if (partition.size() > rank) {
    report.verdict = NonCocompact{ExcessClassesWitness{partition.size(), rank, partition}};
    return report;
  }
  ProductOfQuasilines product;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const auto cert = quasiline_certificate(pw, partition[i], radius);
    if (!cert.width) {
      throw DichotomyError("alignment class " + std::to_string(i) +
                           " has no stable crossing width (" + std::to_string(cert.width_at_radius) +
                           " vs " + std::to_string(cert.width_at_double_radius) + ")");
    }
    product.factors.push_back({partition[i], *cert.width, report.factor_vertex_counts[i]});
  }
  if (!product_isomorphic(hull, factor_windows)) {
    throw DichotomyError("window hull is not the product of the alignment-class factors");
  }
  report.verdict = std::move(product);
  return report;
}

}  // namespace cubeflat
