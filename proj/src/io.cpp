#include "cubeflat/io.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <regex>

namespace cubeflat {

namespace {

template <typename T>
T get_as(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(where + ": missing field \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(where + ": field \"" + key + "\" has the wrong type");
  }
}

Rational rational_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
  throw FormatError(where + ": expected a rational string \"a/b\"");
}

}  // namespace

json complex_to_json(const CubeComplex& c) {
  std::vector<std::array<std::uint64_t, 3>> edges;
  for (const auto& e : c.edges()) {
    edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v), c.hyperplane_label(e.hyperplane)});
  }
  std::sort(edges.begin(), edges.end());
  json out;
  out["vertices"] = c.vertex_count();
  out["edges"] = edges;
  return out;
}

CubeComplex complex_from_json(const json& j, ValidationOptions options) {
  const auto n = get_as<std::int64_t>(j, "vertices", "complex");
  if (n < 1) throw FormatError("complex: \"vertices\" must be positive");
  const auto raw = get_as<std::vector<std::vector<std::int64_t>>>(j, "edges", "complex");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& e = raw[i];
    if (e.size() != 3 || std::any_of(e.begin(), e.end(), [](std::int64_t x) {
          return x < 0 || x > std::numeric_limits<std::uint32_t>::max();
        })) {
      throw FormatError("complex: edge " + std::to_string(i) +
                        " must be [u, v, hyperplane] with nonnegative ids");
    }
    edges.push_back({static_cast<Vertex>(e[0]), static_cast<Vertex>(e[1]),
                     static_cast<HyperplaneId>(e[2])});
  }
  return CubeComplex(static_cast<std::size_t>(n), std::move(edges), options);
}

json wallspace_to_json(const Wallspace& w) {
  json walls = json::array();
  for (std::size_t i = 0; i < w.wall_count(); ++i) walls.push_back(w.left_side(i));
  return {{"points", w.point_count()}, {"walls", walls}};
}

Wallspace wallspace_from_json(const json& j) {
  const auto n = get_as<std::int64_t>(j, "points", "wallspace");
  if (n < 0) throw FormatError("wallspace: \"points\" must be nonnegative");
  const auto walls = get_as<std::vector<std::vector<std::size_t>>>(j, "walls", "wallspace");
  return Wallspace(static_cast<std::size_t>(n), walls);
}

json interval_to_json(const CrossingInterval& c) {
  json out{{"kind", to_string(c.kind())}};
  switch (c.kind()) {
    case CrossingInterval::Kind::Finite:
      out["lo"] = c.lo();
      out["hi"] = c.hi();
      break;
    case CrossingInterval::Kind::AtLeast: out["lo"] = c.lo(); break;
    case CrossingInterval::Kind::AtMost: out["hi"] = c.hi(); break;
    default: break;
  }
  return out;
}

CrossingInterval interval_from_json(const json& j) {
  const auto kind = get_as<std::string>(j, "kind", "interval");
  auto bound = [&](const char* key) { return get_as<std::int64_t>(j, key, "interval " + kind); };
  if (kind == "empty") return CrossingInterval::empty();
  if (kind == "all") return CrossingInterval::all();
  if (kind == "atleast") return CrossingInterval::at_least(bound("lo"));
  if (kind == "atmost") return CrossingInterval::at_most(bound("hi"));
  if (kind == "finite") {
    const auto lo = bound("lo");
    const auto hi = bound("hi");
    if (lo > hi) throw FormatError("interval finite: lo > hi");
    return CrossingInterval::finite(lo, hi);
  }
  throw FormatError("interval: unknown kind \"" + kind + "\"");
}

json periodic_to_json(const PeriodicWallspace& pw) {
  json classes = json::array();
  for (const auto& c : pw.classes) {
    json reps = json::array();
    for (const auto& r : c.reps) reps.push_back(format_rational(r));
    json crossing = json::object();
    for (std::size_t a = 0; a < c.crossing.size(); ++a) {
      for (std::size_t b = 0; b < c.crossing[a].size(); ++b) {
        crossing["(" + std::to_string(a) + "," + std::to_string(b) + ")"] =
            interval_to_json(c.crossing[a][b]);
      }
    }
    classes.push_back({{"direction", c.direction},
                       {"period", format_rational(c.period)},
                       {"reps", reps},
                       {"crossing", crossing}});
  }
  return {{"rank", pw.rank}, {"classes", classes}};
}

PeriodicWallspace periodic_from_json(const json& j) {
  PeriodicWallspace pw;
  const auto rank = get_as<std::int64_t>(j, "rank", "periodic wallspace");
  if (rank < 1) throw FormatError("periodic wallspace: rank must be positive");
  pw.rank = static_cast<std::size_t>(rank);
  if (!j.contains("classes") || !j["classes"].is_array()) {
    throw FormatError("periodic wallspace: \"classes\" must be an array");
  }
  static const std::regex key_re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  for (std::size_t i = 0; i < j["classes"].size(); ++i) {
    const auto& cj = j["classes"][i];
    const std::string where = "class " + std::to_string(i);
    ParallelismClass c;
    c.direction = get_as<std::vector<std::int64_t>>(cj, "direction", where);
    if (!cj.contains("period")) throw FormatError(where + ": missing field \"period\"");
    c.period = rational_from_json(cj["period"], where + " period");
    if (!cj.contains("reps") || !cj["reps"].is_array()) {
      throw FormatError(where + ": \"reps\" must be an array");
    }
    for (const auto& r : cj["reps"]) c.reps.push_back(rational_from_json(r, where + " rep"));
    const std::size_t n = c.reps.size();

    std::vector<std::vector<std::optional<CrossingInterval>>> given(
        n, std::vector<std::optional<CrossingInterval>>(n));
    if (cj.contains("crossing")) {
      if (!cj["crossing"].is_object()) throw FormatError(where + ": \"crossing\" must be an object");
      for (const auto& [key, value] : cj["crossing"].items()) {
        std::smatch m;
        if (!std::regex_match(key, m, key_re)) {
          throw FormatError(where + ": crossing key \"" + key + "\" is not of the form (j,j')");
        }
        const auto a = std::stoull(m[1]);
        const auto b = std::stoull(m[2]);
        if (a >= n || b >= n) throw FormatError(where + ": crossing key \"" + key + "\" out of range");
        given[a][b] = interval_from_json(value);
      }
    }
    c.crossing.assign(n, std::vector<CrossingInterval>(n, CrossingInterval::empty()));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (given[a][b]) {
          c.crossing[a][b] = *given[a][b];
        } else if (given[b][a]) {
          c.crossing[a][b] = given[b][a]->negated();
        }
      }
    }
    pw.classes.push_back(std::move(c));
  }
  return pw;
}

IntersectionData intersections_from_json(const json& j) {
  IntersectionData out;
  const auto p = get_as<std::int64_t>(j, "rank", "intersection data");
  const auto k = get_as<std::int64_t>(j, "k", "intersection data");
  if (p < 1 || k < 0) throw FormatError("intersection data: need rank >= 1 and k >= 0");
  out.p = static_cast<std::size_t>(p);
  out.k = static_cast<std::size_t>(k);
  const auto lattices =
      get_as<std::vector<std::vector<IntVector>>>(j, "lattices", "intersection data");
  for (const auto& gens : lattices) out.lattices.push_back(hnf(out.p, gens));
  return out;
}

json to_json(const WallRef& w) { return {{"class", w.cls}, {"rep", w.rep}}; }

namespace {

json refs(const std::vector<WallRef>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(to_json(w));
  return out;
}

}  // namespace

json to_json(const OrbitPairClass& c) {
  if (std::holds_alternative<Crossing>(c)) return {{"kind", "crossing"}};
  if (std::holds_alternative<Aligned>(c)) return {{"kind", "aligned"}};
  const auto& s = std::get<SemiCrossing>(c);
  return {{"kind", "semi-crossing"},
          {"direction", s.direction == Direction::Up ? "up" : "down"},
          {"threshold", s.threshold}};
}

json to_json(const ObstructionReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"representative", c.representative.basis()}, {"members", c.members}});
  }
  return {{"p", r.p},
          {"k", r.k},
          {"class_count", r.classes.size()},
          {"classes", classes},
          {"threshold", r.threshold},
          {"fired", r.fired}};
}

json to_json(const QuasilineCertificate& c) {
  json out{{"radius", c.radius},
           {"width_at_radius", c.width_at_radius},
           {"width_at_double_radius", c.width_at_double_radius}};
  out["width"] = c.width ? json(*c.width) : json(nullptr);
  return out;
}

json to_json(const PushoffResult& r) {
  const auto& a = r.audit;
  json audit{{"injective", a.injective},
             {"distance_nonincreasing", a.distance_nonincreasing},
             {"vertex_pairs_checked", a.vertex_pairs_checked},
             {"canonical_pairs_checked", a.canonical_pairs_checked}};
  audit["min_displacement"] = a.min_displacement ? json(*a.min_displacement) : json(nullptr);
  return {{"k", r.k},
          {"radius", r.radius},
          {"window_vertex_count", r.window_vertex_count},
          {"domain_size", r.domain.size()},
          {"audit", audit}};
}

json to_json(const DichotomyReport& r) {
  json out{{"radius", r.radius},
           {"hull_vertex_count", r.hull_vertex_count},
           {"factor_vertex_counts", r.factor_vertex_counts}};
  if (const auto* p = std::get_if<ProductOfQuasilines>(&r.verdict)) {
    json factors = json::array();
    for (const auto& f : p->factors) {
      factors.push_back({{"alignment_class", refs(f.alignment_class)},
                         {"width", f.width},
                         {"vertex_count", f.vertex_count}});
    }
    out["verdict"] = "ProductOfQuasilines";
    out["factors"] = factors;
    return out;
  }
  const auto& nc = std::get<NonCocompact>(r.verdict);
  out["verdict"] = "NonCocompact";
  if (const auto* s = std::get_if<SemiCrossingWitness>(&nc.witness)) {
    json pushoffs = json::array();
    for (const auto& e : s->pushoffs) {
      pushoffs.push_back({{"k", e.k},
                          {"min_displacement", e.min_displacement},
                          {"canonical_pairs_checked", e.canonical_pairs_checked}});
    }
    out["witness"] = {{"kind", "SemiCrossingWitness"},
                      {"upper", to_json(s->upper)},
                      {"lower", to_json(s->lower)},
                      {"threshold", s->threshold},
                      {"maximal_class", refs(s->maximal_class)},
                      {"pushoffs", pushoffs}};
  } else {
    const auto& e = std::get<ExcessClassesWitness>(nc.witness);
    json classes = json::array();
    for (const auto& c : e.classes) classes.push_back(refs(c));
    out["witness"] = {{"kind", "ExcessClassesWitness"},
                      {"class_count", e.class_count},
                      {"rank", e.rank},
                      {"classes", classes}};
  }
  return out;
}

json to_json(const ValidationError& e) {
  return {{"lemma", to_string(e.lemma())}, {"witness", refs(e.witness())}, {"message", e.what()}};
}

json vertex_list(const VertexSet& s) { return s.members(); }

}  // namespace cubeflat
