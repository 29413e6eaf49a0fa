#include "cubeflat/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cubeflat/presentation.hpp"

namespace cubeflat {

namespace {

// Distinguishes unreadable files (exit 1) from bad content (exit 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

json parse_json(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

const std::vector<std::string> kModelAssumptions = {
    "crossing data between parallel walls is supplied as input",
    "crossing of two walls depends only on the difference of their translate indices",
    "statements about infinite complexes are checked on windows of radius N and 2N",
};

bool subset_match(const json& expected, const json& actual) {
  if (expected.is_object()) {
    if (!actual.is_object()) return false;
    for (const auto& [key, value] : expected.items()) {
      if (!actual.contains(key) || !subset_match(value, actual[key])) return false;
    }
    return true;
  }
  return expected == actual;
}

struct Context {
  explicit Context(const Command& c) : cmd(c) {}
  const Command& cmd;
  std::vector<std::string> contents;
  json result = json::object();
  json warnings = json::array();
  json hypotheses = json::array();
  std::string dot;
  bool negative = false;
  bool mismatch = false;
};

ValidationOptions options_of(const Command& cmd) { return {.strict = cmd.strict}; }

void need_inputs(const Command& cmd, std::size_t n) {
  if (cmd.inputs.size() != n) {
    throw std::invalid_argument(cmd.name + " expects " + std::to_string(n) + " input file(s)");
  }
}

std::vector<Vertex> parse_vertices(const std::string& text) {
  auto family = parse_family(text);
  if (family.size() != 1) throw std::invalid_argument("expected one vertex list");
  return family.front();
}

std::vector<VertexSet> to_sets(const CubeComplex& c, const std::vector<std::vector<Vertex>>& family) {
  std::vector<VertexSet> out;
  for (const auto& members : family) {
    for (auto v : members) c.check_vertex(v);
    out.emplace_back(c.vertex_count(), members);
  }
  return out;
}

void cmd_dual(Context& ctx) {
  need_inputs(ctx.cmd, 1);
  const auto w = wallspace_from_json(parse_json(ctx.contents[0], ctx.cmd.inputs[0]));
  const auto d = dual_complex(w, options_of(ctx.cmd));
  ctx.result["complex"] = complex_to_json(d.complex);
  ctx.result["vertex_count"] = d.complex.vertex_count();
  ctx.result["hyperplane_count"] = d.complex.hyperplane_count();
  ctx.result["point_vertices"] = d.seed_vertices;
  if (!ctx.cmd.dot_output.empty()) ctx.dot = to_dot(d.complex, "dual");
}

CubeComplex load_complex(Context& ctx) {
  need_inputs(ctx.cmd, 1);
  return complex_from_json(parse_json(ctx.contents[0], ctx.cmd.inputs[0]), options_of(ctx.cmd));
}

void cmd_hull(Context& ctx) {
  const auto c = load_complex(ctx);
  const auto members = parse_vertices(ctx.cmd.vertices);
  const auto s = to_sets(c, {members}).front();
  const auto h = hull(c, s);
  ctx.result["input"] = vertex_list(s);
  ctx.result["hull"] = vertex_list(h);
  ctx.result["convex"] = h == s;
}

void cmd_helly(Context& ctx) {
  const auto c = load_complex(ctx);
  const auto family = to_sets(c, parse_family(ctx.cmd.family));
  const auto r = helly_point(c, family);
  if (const auto* v = std::get_if<Vertex>(&r)) {
    ctx.result["common_vertex"] = *v;
  } else {
    const auto& p = std::get<NoCommonPoint>(r);
    ctx.result["no_common_point"] = {p.first, p.second};
  }
}

void cmd_pack(Context& ctx) {
  const auto c = load_complex(ctx);
  const auto family = to_sets(c, parse_family(ctx.cmd.family));
  json thick = json::array();
  for (const auto& y : family) {
    const auto t = thicken(c, y, ctx.cmd.thickening);
    thick.push_back({{"size", t.set.size()}, {"realized_radius", t.realized_radius}});
  }
  ctx.result["r"] = ctx.cmd.thickening;
  ctx.result["thickenings"] = thick;
  ctx.result["packing_number"] = packing_number(c, family, ctx.cmd.thickening);
}

PeriodicWallspace load_periodic(Context& ctx) {
  need_inputs(ctx.cmd, 1);
  return periodic_from_json(parse_json(ctx.contents[0], ctx.cmd.inputs[0]));
}

void cmd_classify(Context& ctx) {
  const auto pw = load_periodic(ctx);
  validate(pw);
  json pairs = json::array();
  const auto orbits = pw.orbits();
  bool semi = false;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    for (std::size_t j = i + 1; j < orbits.size(); ++j) {
      const auto c = classify_pair(pw, orbits[i], orbits[j]);
      semi = semi || std::holds_alternative<SemiCrossing>(c);
      pairs.push_back({{"a", to_json(orbits[i])}, {"b", to_json(orbits[j])}, {"relation", to_json(c)}});
    }
  }
  json partition = json::array();
  for (const auto& cls : alignment_partition(pw)) {
    json members = json::array();
    for (const auto& w : cls) members.push_back(to_json(w));
    partition.push_back(members);
  }
  json index = json::array();
  for (const auto& w : orbits) {
    index.push_back({{"orbit", to_json(w)}, {"index", disjointness_index(pw, w.cls, w.rep)}});
  }
  ctx.result["valid"] = true;
  ctx.result["parallelism_classes"] = pw.classes.size();
  ctx.result["pairs"] = pairs;
  ctx.result["alignment_partition"] = partition;
  ctx.result["semi_crossing_present"] = semi;
  ctx.result["disjointness_index"] = index;
  for (const auto& h : kModelAssumptions) ctx.hypotheses.push_back(h);
}

void cmd_dichotomy(Context& ctx) {
  const auto pw = load_periodic(ctx);
  if (ctx.cmd.rank == 0) throw std::invalid_argument("dichotomy needs --rank");
  const auto report = dichotomy(pw, ctx.cmd.rank, ctx.cmd.radius);
  ctx.result = to_json(report);
  ctx.negative = !report.cocompact();
  for (const auto& h : kModelAssumptions) ctx.hypotheses.push_back(h);
  if (ctx.cmd.radius < 2 && !report.cocompact()) {
    ctx.warnings.push_back("window radius below 2 leaves no room for push-off evidence");
  }
}

void cmd_obstruct(Context& ctx) {
  need_inputs(ctx.cmd, 1);
  const auto& path = ctx.cmd.inputs[0];
  ObstructionReport report;
  if (std::filesystem::path(path).extension() == ".json") {
    const auto data = intersections_from_json(parse_json(ctx.contents[0], path));
    report = obstruction(data.lattices, data.p, data.k);
    ctx.result["input_kind"] = "intersections";
  } else {
    report = tubular_obstruction(parse_presentation(ctx.contents[0]));
    ctx.result["input_kind"] = "presentation";
  }
  const auto body = to_json(report);
  for (const auto& [k, v] : body.items()) ctx.result[k] = v;
  for (const auto& h : report.hypotheses_assumed) ctx.hypotheses.push_back(h);
  ctx.negative = report.fired;
}

void cmd_fixtures(Context& ctx) {
  namespace fs = std::filesystem;
  const fs::path dir(ctx.cmd.fixtures_dir);
  const auto manifest = parse_json(read_file((dir / "manifest.json").string()), "manifest.json");
  if (!manifest.contains("fixtures") || !manifest["fixtures"].is_array()) {
    throw FormatError("manifest.json: \"fixtures\" must be an array");
  }
  json rows = json::array();
  std::size_t passed = 0;
  for (const auto& f : manifest["fixtures"]) {
    Command sub;
    sub.name = f.at("command").get<std::string>();
    for (const auto& in : f.at("inputs")) sub.inputs.push_back((dir / in.get<std::string>()).string());
    sub.rank = f.value("rank", std::size_t{0});
    sub.radius = f.value("radius", std::int64_t{6});
    sub.thickening = f.value("r", std::size_t{0});
    sub.vertices = f.value("vertices", std::string{});
    sub.family = f.value("family", std::string{});
    sub.strict = ctx.cmd.strict;
    const auto r = execute(sub);
    const bool ok = r.exit_code == f.value("exit", 0) &&
                    subset_match(f.value("expect", json::object()), r.report["result"]);
    passed += ok ? 1 : 0;
    rows.push_back({{"name", f.at("name")}, {"passed", ok}, {"exit_code", r.exit_code}});
  }
  ctx.result["fixtures"] = rows;
  ctx.result["passed"] = passed;
  ctx.result["total"] = rows.size();
  ctx.mismatch = passed != rows.size();
}

json options_json(const Command& cmd) {
  return {{"radius", cmd.radius},
          {"rank", cmd.rank},
          {"r", cmd.thickening},
          {"vertices", cmd.vertices},
          {"family", cmd.family},
          {"strict", cmd.strict},
          {"fail_on_negative", cmd.fail_on_negative}};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::vector<Vertex>> parse_family(const std::string& text) {
  std::vector<std::vector<Vertex>> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<Vertex> members;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const auto last = item.find_last_not_of(" \t");
      const std::string tok = item.substr(first, last - first + 1);
      if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
        throw std::invalid_argument("bad vertex id \"" + tok + "\"");
      }
      members.push_back(static_cast<Vertex>(std::stoul(tok)));
    }
    if (members.empty()) throw std::invalid_argument("empty vertex set in \"" + text + "\"");
    out.push_back(std::move(members));
  }
  if (out.empty()) throw std::invalid_argument("no vertex sets given");
  return out;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

RunResult execute(const Command& cmd) {
  RunResult out;
  Context ctx(cmd);
  json& rep = out.report;
  rep["schema"] = kReportSchema;
  rep["command"] = {{"name", cmd.name}, {"inputs", cmd.inputs}};
  rep["options"] = options_json(cmd);

  auto fail = [&](int code, const std::string& kind, json detail) {
    out.exit_code = code;
    rep["status"] = kind;
    rep["error"] = std::move(detail);
  };
  try {
    std::string all;
    for (const auto& path : cmd.inputs) {
      ctx.contents.push_back(read_file(path));
      all += ctx.contents.back();
      all.push_back('\0');
    }
    rep["input_digest"] = hex64(fnv1a64(all));

    if (cmd.name == "dual") {
      cmd_dual(ctx);
    } else if (cmd.name == "hull") {
      cmd_hull(ctx);
    } else if (cmd.name == "helly") {
      cmd_helly(ctx);
    } else if (cmd.name == "pack") {
      cmd_pack(ctx);
    } else if (cmd.name == "classify") {
      cmd_classify(ctx);
    } else if (cmd.name == "dichotomy") {
      cmd_dichotomy(ctx);
    } else if (cmd.name == "obstruct") {
      cmd_obstruct(ctx);
    } else if (cmd.name == "fixtures") {
      cmd_fixtures(ctx);
    } else {
      throw std::invalid_argument("unknown command \"" + cmd.name + "\"");
    }
    rep["status"] = "ok";
    if (ctx.mismatch) {
      out.exit_code = kValidationError;
      rep["status"] = "fixture-mismatch";
    } else if (ctx.negative && cmd.fail_on_negative) {
      out.exit_code = kNegativeVerdict;
    }
  } catch (const IoError& e) {
    fail(kIoError, "io-error", {{"message", e.what()}});
  } catch (const ValidationError& e) {
    fail(kValidationError, "validation-error", to_json(e));
  } catch (const PresentationError& e) {
    fail(kValidationError, "validation-error",
         {{"kind", to_string(e.kind())}, {"line", e.line()}, {"column", e.column()},
          {"message", e.what()}});
  } catch (const std::exception& e) {
    fail(kValidationError, "validation-error", {{"message", e.what()}});
  }
  if (!rep.contains("input_digest")) rep["input_digest"] = nullptr;
  rep["result"] = std::move(ctx.result);
  rep["warnings"] = std::move(ctx.warnings);
  rep["assumed_hypotheses"] = std::move(ctx.hypotheses);
  out.dot = std::move(ctx.dot);
  return out;
}

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  auto result = execute(cmd);
  const std::string text = render(result.report);
  if (cmd.output.empty()) {
    out << text;
  } else {
    std::ofstream f(cmd.output, std::ios::binary);
    if (!(f << text)) {
      err << "cannot write " << cmd.output << "\n";
      return kIoError;
    }
  }
  if (!cmd.dot_output.empty() && !result.dot.empty()) {
    std::ofstream f(cmd.dot_output, std::ios::binary);
    if (!(f << result.dot)) {
      err << "cannot write " << cmd.dot_output << "\n";
      return kIoError;
    }
  }
  if (result.exit_code != kOk && result.report.contains("error")) {
    err << result.report["error"].value("message", std::string{}) << "\n";
  }
  return result.exit_code;
}

}  // namespace cubeflat
