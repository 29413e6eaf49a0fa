#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cubeflat/cli.hpp"
#include "cubeflat/presentation.hpp"

using namespace cubeflat;

namespace {

std::string fixture(const std::string& name) { return std::string(CUBEFLAT_FIXTURES) + "/" + name; }

Command command(const std::string& name, std::vector<std::string> inputs) {
  Command c;
  c.name = name;
  c.inputs = std::move(inputs);
  return c;
}

// Temporary file removed on scope exit.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& body)
      : path(std::filesystem::temp_directory_path() / name) {
    std::ofstream(path) << body;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

void check_presentation_error(const std::string& text, PresentationError::Kind kind, std::size_t line,
                              std::size_t column) {
  try {
    parse_presentation(text);
    FAIL("expected a presentation error for: " << text);
  } catch (const PresentationError& e) {
    CHECK(e.kind() == kind);
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("presentation parsing") {
    const auto a = parse_presentation("rank 2\nedge t1: (1,0) -> (0,1)");
    CHECK(a.rank == 2);
    REQUIRE(a.edges.size() == 1);
    CHECK(a.edges[0].letter == "t1");
    CHECK(a.edges[0].from == IntVector{1, 0});
    CHECK(a.edges[0].to == IntVector{0, 1});

    std::ifstream in(fixture("generic-p3-r2.txt"));
    std::stringstream ss;
    ss << in.rdbuf();
    const auto g = parse_presentation(ss.str());
    CHECK(g.rank == 3);
    CHECK(g.edges.size() == 2);

    const auto spaced = parse_presentation("  # comment\n rank 2 # trailing\n\nedge  s : ( -1 , 2 )->(0,1)\n");
    CHECK(spaced.edges[0].from == IntVector{-1, 2});

    try {
      parse_presentation("edge t1: (2,2) -> (0,1)");
      FAIL("expected a non-primitive error");
    } catch (const PresentationError& e) {
      CHECK(e.kind() == PresentationError::Kind::NonPrimitive);
      CHECK(e.line() == 1);
    }
    check_presentation_error("rank 2\nedge t1 (1,0) -> (0,1)", PresentationError::Kind::Syntax, 2, 9);
    check_presentation_error("rank 2\nedge t1: (1,0) -> (0,1,0)", PresentationError::Kind::Dimension, 2, 0);
    check_presentation_error("edge t1: (1,0) -> (0,1)", PresentationError::Kind::MissingRank, 1, 0);
    check_presentation_error("rank 2\nrank 3", PresentationError::Kind::Syntax, 2, 1);
    check_presentation_error("rank two", PresentationError::Kind::Syntax, 1, 6);
  }

  TEST_CASE("command results and exit codes") {
    auto d = command("dichotomy", {fixture("figure1.json")});
    d.rank = 1;
    auto r = execute(d);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["status"] == "ok");
    CHECK(r.report["result"]["verdict"] == "NonCocompact");
    CHECK(r.report["result"]["witness"]["kind"] == "SemiCrossingWitness");
    d.fail_on_negative = true;
    CHECK(execute(d).exit_code == kNegativeVerdict);

    auto o = command("obstruct", {fixture("example43.json")});
    r = execute(o);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["result"]["fired"] == true);
    CHECK_FALSE(r.report["assumed_hypotheses"].empty());
    o.fail_on_negative = true;
    CHECK(execute(o).exit_code == kNegativeVerdict);

    auto dual = command("dual", {fixture("two-crossing-walls.json")});
    dual.dot_output = "unused.dot";
    r = execute(dual);
    CHECK(r.report["result"]["vertex_count"] == 4);
    CHECK(r.dot.find("--") != std::string::npos);

    CHECK(execute(command("dual", {fixture("missing.json")})).exit_code == kIoError);

    TempFile bad("cubeflat-bad-table.json",
                 R"j({"rank":1,"classes":[{"direction":[1],"period":"1/1","reps":["0/1","1/2"],)j"
                 R"j("crossing":{"(0,0)":{"kind":"empty"},"(1,1)":{"kind":"empty"},)j"
                 R"j("(0,1)":{"kind":"atleast","lo":0},"(1,0)":{"kind":"atleast","lo":0}}}]})j");
    r = execute(command("classify", {bad.path.string()}));
    CHECK(r.exit_code == kValidationError);
    CHECK(r.report["error"]["lemma"] == "PartialOrderAntisymmetry");

    TempFile garbage("cubeflat-garbage.json", "{not json");
    CHECK(execute(command("dual", {garbage.path.string()})).exit_code == kValidationError);

    TempFile text("cubeflat-pres.txt", "rank 2\nedge t1: (2,2) -> (0,1)\n");
    r = execute(command("obstruct", {text.path.string()}));
    CHECK(r.exit_code == kValidationError);
    CHECK(r.report["error"]["kind"] == "non-primitive");

    auto h = command("hull", {fixture("grid3x3.json")});
    h.vertices = "0,8";
    r = execute(h);
    CHECK(r.report["result"]["hull"].size() == 9);
    h.vertices = "0,99";
    CHECK(execute(h).exit_code == kValidationError);

    auto f = command("fixtures", {});
    f.fixtures_dir = CUBEFLAT_FIXTURES;
    r = execute(f);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["result"]["passed"] == r.report["result"]["total"]);
  }

  TEST_CASE("reports are deterministic") {
    auto d = command("dichotomy", {fixture("standard-grid.json")});
    d.rank = 2;
    d.radius = 3;
    const auto a = render(execute(d).report);
    const auto b = render(execute(d).report);
    CHECK(a == b);
    const auto j = json::parse(a);
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["input_digest"].get<std::string>().size() == 16);
    CHECK(j["options"]["radius"] == 3);

    std::ostringstream out, err;
    CHECK(run(d, out, err) == kOk);
    CHECK(out.str() == a);
  }

  TEST_CASE("emitted complexes re-parse") {
    const auto r = execute(command("dual", {fixture("nested-walls.json")}));
    const auto c = complex_from_json(r.report["result"]["complex"]);
    CHECK(c.vertex_count() == r.report["result"]["vertex_count"].get<std::size_t>());
    CHECK(isomorphic(c, complex_from_json(complex_to_json(c))));
  }

  TEST_CASE("helpers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(parse_family("0,1;2,3") == std::vector<std::vector<Vertex>>{{0, 1}, {2, 3}});
    CHECK_THROWS_AS(parse_family("0,x"), std::invalid_argument);
  }
}
