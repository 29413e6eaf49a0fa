#include <doctest.h>

#include <fstream>
#include <random>

#include "cubeflat/flat.hpp"
#include "cubeflat/io.hpp"
#include "oracles.hpp"

using namespace cubeflat;

namespace {

PeriodicWallspace load(const std::string& name) {
  std::ifstream in(std::string(CUBEFLAT_FIXTURES) + "/" + name);
  REQUIRE(in.good());
  return periodic_from_json(json::parse(in));
}

// One parallelism class in the line, unit period, the given offsets and a
// full crossing table (self entries included).
PeriodicWallspace line(std::vector<Rational> reps, std::vector<std::vector<CrossingInterval>> table) {
  PeriodicWallspace pw;
  pw.rank = 1;
  pw.classes.push_back({{1}, Rational(1), std::move(reps), std::move(table)});
  return pw;
}

PeriodicWallspace figure1() { return load("figure1.json"); }
PeriodicWallspace grid() { return load("standard-grid.json"); }
PeriodicWallspace glide() { return load("glide-reflection.json"); }

// Exhaustive count of consistent orientations of the window walls, read
// straight from the interval table: two walls that do not cross are nested
// by position, so the two sides facing away from each other are disjoint.
std::size_t window_orientations(const PeriodicWallspace& pw, std::int64_t n) {
  struct W {
    WallRef o;
    std::int64_t t;
    Rational pos;
  };
  std::vector<W> ws;
  for (const auto& o : pw.orbits()) {
    const auto& c = pw.classes[o.cls];
    for (std::int64_t t = -n; t < n; ++t) ws.push_back({o, t, c.reps[o.rep] + c.period * t});
  }
  const std::size_t m = ws.size();
  REQUIRE(m <= 20);
  // nested[i][j]: i below j and not crossing.
  std::vector<std::vector<bool>> nested(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || ws[i].o.cls != ws[j].o.cls) continue;
      const bool cross = pw.interval(ws[i].o.cls, ws[i].o.rep, ws[j].o.rep).contains(ws[i].t - ws[j].t) &&
                         !(ws[i].o == ws[j].o && ws[i].t == ws[j].t);
      nested[i][j] = !cross && ws[i].pos < ws[j].pos;
    }
  }
  std::size_t count = 0;
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    // bit set = the chosen side is above the wall.
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      for (std::size_t j = 0; j < m && ok; ++j) {
        if (nested[i][j] && !((bits >> i) & 1u) && ((bits >> j) & 1u)) ok = false;
      }
    }
    count += ok;
  }
  return count;
}

CrossingInterval random_interval(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-2, 2);
  switch (rng() % 6) {
    case 0: return CrossingInterval::empty();
    case 1: {
      const int a = v(rng), b = v(rng);
      return CrossingInterval::finite(std::min(a, b), std::max(a, b));
    }
    case 2: return CrossingInterval::at_least(v(rng));
    case 3: return CrossingInterval::at_most(v(rng));
    case 4: return CrossingInterval::all();
    default: return CrossingInterval::empty();
  }
}

// Random single-class table with at most three representatives; callers
// keep the ones that validate.
PeriodicWallspace random_line(std::mt19937_64& rng) {
  const std::size_t r = 1 + rng() % 3;
  std::vector<Rational> reps;
  std::vector<int> offsets{0, 1, 2, 3};
  std::shuffle(offsets.begin(), offsets.end(), rng);
  for (std::size_t i = 0; i < r; ++i) reps.emplace_back(offsets[i], 4);
  std::vector<std::vector<CrossingInterval>> table(r, std::vector<CrossingInterval>(r, CrossingInterval::empty()));
  for (std::size_t i = 0; i < r; ++i) {
    table[i][i] = rng() % 3 == 0 ? CrossingInterval::finite(-1, 1) : CrossingInterval::empty();
    for (std::size_t j = i + 1; j < r; ++j) {
      table[i][j] = random_interval(rng);
      table[j][i] = table[i][j].negated();
    }
  }
  return line(std::move(reps), std::move(table));
}

bool has_semi_crossing(const PeriodicWallspace& pw) {
  for (const auto& a : pw.orbits()) {
    for (const auto& b : pw.orbits()) {
      if (std::holds_alternative<SemiCrossing>(classify_pair(pw, a, b))) return true;
    }
  }
  return false;
}

std::string verdict_name(const DichotomyReport& r) {
  if (r.cocompact()) return "product";
  const auto& w = std::get<NonCocompact>(r.verdict).witness;
  return std::holds_alternative<SemiCrossingWitness>(w) ? "semi" : "excess";
}

}  // namespace

TEST_SUITE("flat-analyzer") {
  TEST_CASE("validation of the shipped data") {
    CHECK_NOTHROW(validate(grid()));
    CHECK_NOTHROW(validate(figure1()));
    CHECK_NOTHROW(validate(glide()));
  }

  TEST_CASE("validation rejects inconsistent tables") {
    auto both_up = line({Rational(0), Rational(1, 2)},
                        {{CrossingInterval::empty(), CrossingInterval::at_least(0)},
                         {CrossingInterval::at_least(0), CrossingInterval::empty()}});
    try {
      validate(both_up);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.lemma() == Lemma::PartialOrderAntisymmetry);
      CHECK(e.witness().size() == 2);
    }

    auto mismatch = line({Rational(0), Rational(1, 2)},
                         {{CrossingInterval::empty(), CrossingInterval::finite(0, 1)},
                          {CrossingInterval::finite(0, 1), CrossingInterval::empty()}});
    try {
      validate(mismatch);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.lemma() == Lemma::CrossingAntisymmetry);
    }

    // Self interval must be finite and symmetric.
    auto self = line({Rational(0)}, {{CrossingInterval::at_least(1)}});
    CHECK_THROWS_AS(validate(self), ValidationError);
    auto lopsided = line({Rational(0)}, {{CrossingInterval::finite(-1, 2)}});
    CHECK_THROWS_AS(validate(lopsided), ValidationError);

    auto outside = line({Rational(3, 2)}, {{CrossingInterval::empty()}});
    try {
      validate(outside);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.lemma() == Lemma::Structure);
    }

    auto parallel = grid();
    parallel.classes[1].direction = {2, 0};
    CHECK_THROWS_AS(validate(parallel), ValidationError);
    parallel.classes[1].direction = {-1, 0};
    CHECK_THROWS_AS(validate(parallel), ValidationError);

    // Aligned a~b, b~c but a, c crossing everywhere.
    auto chain = line({Rational(0), Rational(1, 4), Rational(1, 2)},
                      {{CrossingInterval::empty(), CrossingInterval::empty(), CrossingInterval::all()},
                       {CrossingInterval::empty(), CrossingInterval::empty(), CrossingInterval::empty()},
                       {CrossingInterval::all(), CrossingInterval::empty(), CrossingInterval::empty()}});
    try {
      validate(chain);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.lemma() == Lemma::AlignmentEquivalence);
      CHECK(e.witness().size() == 3);
    }
  }

  TEST_CASE("classification") {
    const auto f = figure1();
    const auto up = classify_pair(f, {0, 0}, {0, 1});
    REQUIRE(std::holds_alternative<SemiCrossing>(up));
    CHECK(std::get<SemiCrossing>(up) == SemiCrossing{Direction::Up, 0});
    CHECK(classify_pair(f, {0, 1}, {0, 0}) == OrbitPairClass{SemiCrossing{Direction::Down, 0}});
    CHECK(above(f, {0, 0}, {0, 1}));
    CHECK_FALSE(above(f, {0, 1}, {0, 0}));
    CHECK(classify_pair(f, {0, 0}, {0, 0}) == OrbitPairClass{Aligned{}});

    const auto g = grid();
    CHECK(classify_pair(g, {0, 0}, {1, 0}) == OrbitPairClass{Crossing{}});
    CHECK(classify_pair(glide(), {0, 0}, {0, 1}) == OrbitPairClass{Crossing{}});
    CHECK_THROWS_AS(classify_pair(g, {0, 0}, {2, 0}), std::out_of_range);
  }

  TEST_CASE("trichotomy is stable under swapping") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int trial = 0; trial < 2000 && checked < 300; ++trial) {
      const auto pw = random_line(rng);
      try {
        validate(pw);
      } catch (const ValidationError&) {
        continue;
      }
      ++checked;
      for (const auto& a : pw.orbits()) {
        for (const auto& b : pw.orbits()) {
          const auto ab = classify_pair(pw, a, b);
          const auto ba = classify_pair(pw, b, a);
          CHECK(ab.index() == ba.index());
          if (const auto* s = std::get_if<SemiCrossing>(&ab)) {
            const auto& t = std::get<SemiCrossing>(ba);
            CHECK(s->direction != t.direction);
            CHECK(s->threshold == t.threshold);
            // The threshold is sharp: crossing starts right after m.
            const auto& iv = pw.interval(a.cls, a.rep, b.rep);
            const std::int64_t m = s->threshold;
            if (s->direction == Direction::Up) {
              CHECK(iv.contains(m + 1));
              CHECK_FALSE(iv.contains(m));
            } else {
              CHECK(iv.contains(-m - 1));
              CHECK_FALSE(iv.contains(-m));
            }
          }
          CHECK(pw.interval(a.cls, a.rep, b.rep).negated() == pw.interval(b.cls, b.rep, a.rep));
        }
      }
    }
    CHECK(checked > 50);
  }

  TEST_CASE("alignment classes") {
    const auto g = alignment_classes(grid());
    CHECK(g.size() == 2);
    CHECK(g[0] == AlignmentClass{{0, 0}});
    CHECK(g[1] == AlignmentClass{{1, 0}});

    // Crossing everywhere keeps the two glide orbits apart.
    const auto gl = alignment_classes(glide());
    CHECK(gl.size() == 2);

    CHECK_THROWS_AS(alignment_classes(figure1()), std::invalid_argument);
    CHECK(alignment_partition(figure1()).size() == 2);

    auto merged = line({Rational(0), Rational(1, 2)},
                       {{CrossingInterval::empty(), CrossingInterval::finite(-1, 0)},
                        {CrossingInterval::finite(0, 1), CrossingInterval::empty()}});
    REQUIRE_NOTHROW(validate(merged));
    CHECK(alignment_classes(merged).size() == 1);

    // Random inputs: distinct classes pairwise cross, same class is the
    // closure of the aligned relation.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto pw = random_line(rng);
      try {
        validate(pw);
      } catch (const ValidationError&) {
        continue;
      }
      if (has_semi_crossing(pw)) continue;
      const auto classes = alignment_classes(pw);
      for (std::size_t i = 0; i < classes.size(); ++i) {
        for (std::size_t j = 0; j < classes.size(); ++j) {
          for (const auto& a : classes[i]) {
            for (const auto& b : classes[j]) {
              const bool aligned = std::holds_alternative<Aligned>(classify_pair(pw, a, b));
              if (i != j) CHECK(std::holds_alternative<Crossing>(classify_pair(pw, a, b)));
              // Validation makes alignment transitive, so no closure is needed.
              if (i == j) CHECK(aligned);
            }
          }
        }
      }
    }
  }

  TEST_CASE("disjointness index") {
    auto one = [](CrossingInterval self) { return line({Rational(0)}, {{self}}); };
    CHECK(disjointness_index(one(CrossingInterval::empty()), 0, 0) == 1);
    CHECK(disjointness_index(one(CrossingInterval::finite(-1, 1)), 0, 0) == 2);
    CHECK(disjointness_index(one(CrossingInterval::finite(-2, 2)), 0, 0) == 3);
    // Direct scan oracle.
    for (std::int64_t h = 1; h <= 6; ++h) {
      const auto pw = one(CrossingInterval::finite(-h, h));
      std::int64_t n = 1;
      while (true) {
        bool clear = true;
        for (std::int64_t k = 1; k <= 2 * h; ++k) clear = clear && !pw.interval(0, 0, 0).contains(k * n);
        if (clear) break;
        ++n;
      }
      CHECK(disjointness_index(pw, 0, 0) == n);
    }
  }

  TEST_CASE("window hulls") {
    const auto g = window_hull(grid(), 2);
    CHECK(g.vertex_count() == 25);
    CHECK(isomorphic(g, grid_complex(5, 5)));
    CHECK(isomorphic(window_hull(glide(), 2), grid_complex(5, 5)));

    for (std::int64_t n = 1; n <= 3; ++n) {
      const auto h = window_hull(figure1(), n);
      INFO("N=" << n);
      CHECK(h.vertex_count() == static_cast<std::size_t>((2 * n + 1) * (n + 1)));
      CHECK(h.vertex_count() == window_orientations(figure1(), n));
      CHECK_NOTHROW(validate(h));
    }
    CHECK(window_orientations(grid(), 2) == 25);
    CHECK_THROWS_AS(window_hull(grid(), 0), std::invalid_argument);

    const auto w = build_window(grid(), 2, {{0, 0}});
    CHECK(w.walls.size() == 4);
    CHECK(w.dual.complex.vertex_count() == 5);
    CHECK(w.wall_index({0, 0}, -2).has_value());
    CHECK_FALSE(w.wall_index({0, 0}, 2).has_value());
  }

  TEST_CASE("hull is the product of the class factors") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 3000 && checked < 40; ++trial) {
      auto pw = random_line(rng);
      try {
        validate(pw);
      } catch (const ValidationError&) {
        continue;
      }
      if (has_semi_crossing(pw)) continue;
      ++checked;
      for (std::int64_t n = 2; n <= 3; ++n) {
        std::size_t product = 1;
        for (const auto& cls : alignment_classes(pw)) {
          product *= build_window(pw, n, cls).dual.complex.vertex_count();
        }
        CHECK(window_hull(pw, n).vertex_count() == product);
      }
    }
    CHECK(checked > 10);
  }

  TEST_CASE("quasiline certificates") {
    const auto nested = line({Rational(0)}, {{CrossingInterval::empty()}});
    const auto a = quasiline_certificate(nested, {{0, 0}}, 4);
    REQUIRE(a.width.has_value());
    CHECK(*a.width == 0);

    const auto thick = line({Rational(0)}, {{CrossingInterval::finite(-1, 1)}});
    const auto b = quasiline_certificate(thick, {{0, 0}}, 4);
    REQUIRE(b.width.has_value());
    CHECK(*b.width == 1);
    CHECK(b.width_at_radius == b.width_at_double_radius);

    // Two orbits crossing at every translate difference, put in one class.
    const auto c = quasiline_certificate(glide(), {{0, 0}, {0, 1}}, 3);
    CHECK_FALSE(c.width.has_value());
    CHECK(c.width_at_radius < c.width_at_double_radius);

    for (const auto& cls : alignment_classes(grid())) {
      const auto q = quasiline_certificate(grid(), cls, 6);
      CHECK(q.width == std::optional<std::size_t>(0));
    }
  }

  TEST_CASE("dichotomy verdicts") {
    const auto g = dichotomy(grid(), 2, 4);
    REQUIRE(g.cocompact());
    CHECK(std::get<ProductOfQuasilines>(g.verdict).factors.size() == 2);
    CHECK(g.hull_vertex_count == 81);
    CHECK(g.factor_vertex_counts == std::vector<std::size_t>{9, 9});

    const auto gl = dichotomy(glide(), 1, 4);
    REQUIRE_FALSE(gl.cocompact());
    const auto& gw = std::get<NonCocompact>(gl.verdict).witness;
    REQUIRE(std::holds_alternative<ExcessClassesWitness>(gw));
    CHECK(std::get<ExcessClassesWitness>(gw).class_count == 2);
    CHECK(std::get<ExcessClassesWitness>(gw).rank == 1);

    const auto f = dichotomy(figure1(), 1, 6);
    REQUIRE_FALSE(f.cocompact());
    const auto& fw = std::get<NonCocompact>(f.verdict).witness;
    REQUIRE(std::holds_alternative<SemiCrossingWitness>(fw));
    const auto& s = std::get<SemiCrossingWitness>(fw);
    CHECK(s.upper == WallRef{0, 0});
    CHECK(s.lower == WallRef{0, 1});
    CHECK(s.maximal_class == AlignmentClass{{0, 0}});
    REQUIRE(s.pushoffs.size() == 3);
    for (const auto& p : s.pushoffs) CHECK(p.min_displacement == static_cast<std::size_t>(p.k));

    CHECK_THROWS_AS(dichotomy(grid(), 3, 4), DichotomyError);
    CHECK_THROWS_AS(dichotomy(grid(), 0, 4), DichotomyError);
    // Fewer alignment classes than the rank cannot come from a cocompact flat.
    auto thin = grid();
    thin.rank = 2;
    thin.classes.pop_back();
    CHECK_THROWS_AS(dichotomy(thin, 2, 4), DichotomyError);
  }

  TEST_CASE("dichotomy is stable in the window radius") {
    for (const auto& [pw, rank] : std::vector<std::pair<PeriodicWallspace, std::size_t>>{
             {grid(), 2}, {glide(), 1}, {figure1(), 1}}) {
      for (std::int64_t n = 2; n <= 6; ++n) {
        const auto a = dichotomy(pw, rank, n);
        const auto b = dichotomy(pw, rank, n + 1);
        CHECK(verdict_name(a) == verdict_name(b));
        if (!a.cocompact() && verdict_name(a) == "semi") {
          const auto& wa = std::get<SemiCrossingWitness>(std::get<NonCocompact>(a.verdict).witness);
          const auto& wb = std::get<SemiCrossingWitness>(std::get<NonCocompact>(b.verdict).witness);
          CHECK(wa.maximal_class == wb.maximal_class);
        }
      }
    }
  }

  TEST_CASE("pushoff") {
    const auto f = figure1();
    const auto q = select_maximal_class(f);
    REQUIRE(q.has_value());
    CHECK(*q == AlignmentClass{{0, 0}});

    const auto one = pushoff(f, *q, 1, 4);
    CHECK(one.audit.injective);
    CHECK(one.audit.distance_nonincreasing);
    CHECK(one.audit.min_displacement == std::optional<std::size_t>(1));
    CHECK(one.audit.canonical_pairs_checked > 0);
    const auto two = pushoff(f, *q, 2, 6);
    CHECK(two.audit.min_displacement == std::optional<std::size_t>(2));

    // Every image is at distance at most k from its source in the window,
    // since only Q walls change and each Q orbit moves by k translates.
    const auto hull = window_hull(f, 6);
    for (std::size_t i = 0; i < two.domain.size(); ++i) {
      CHECK(distance(hull, two.domain[i], two.image[i]) <= 2 * q->size());
    }

    const auto id = pushoff(f, {}, 1, 4);
    CHECK(id.domain == id.image);
    CHECK(id.domain.size() == id.window_vertex_count);
    CHECK_FALSE(id.audit.min_displacement.has_value());

    CHECK_THROWS_AS(pushoff(f, *q, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(pushoff(f, *q, 3, 4), PushoffError);
    CHECK_THROWS_AS(pushoff(f, {{0, 1}}, 1, 4), PushoffError);
    CHECK_THROWS_AS(pushoff(f, {{0, 0}, {0, 1}}, 1, 4), PushoffError);
  }

  TEST_CASE("pushoff audits on random tables") {
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 5000 && checked < 40; ++trial) {
      const auto pw = random_line(rng);
      try {
        validate(pw);
      } catch (const ValidationError&) {
        continue;
      }
      const auto q = select_maximal_class(pw);
      if (!q) continue;
      ++checked;
      INFO("trial " << trial);
      for (std::int64_t k = 1; k <= 2; ++k) {
        PushoffResult r;
        REQUIRE_NOTHROW(r = pushoff(pw, *q, k, 4));
        CHECK(r.audit.injective);
        CHECK(r.audit.distance_nonincreasing);
        REQUIRE(r.audit.min_displacement.has_value());
        CHECK(*r.audit.min_displacement >= static_cast<std::size_t>(k));
      }
    }
    CHECK(checked > 10);
  }

  TEST_CASE("rationals and intervals") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK(format_rational(Rational(2)) == "2/1");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(CrossingInterval::finite(2, 1), std::invalid_argument);
    CHECK(CrossingInterval::at_least(2).negated() == CrossingInterval::at_most(-2));
    CHECK(CrossingInterval::finite(-1, 3).negated() == CrossingInterval::finite(-3, 1));
    CHECK(CrossingInterval::all().contains(-100));
    CHECK_FALSE(CrossingInterval::empty().contains(0));
    const auto f = figure1();
    CHECK(periodic_from_json(periodic_to_json(f)).classes[0].crossing == f.classes[0].crossing);
  }
}
