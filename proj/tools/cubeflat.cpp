#include <CLI11.hpp>

#include <iostream>

#include "cubeflat/cli.hpp"

int main(int argc, char** argv) {
  using cubeflat::Command;

  CLI::App app{"Cube complex tools for periodic walls in flats and lattice obstructions"};
  app.require_subcommand(1);

  Command cmd;
  std::string file;
  std::string output;
  std::string dot;
  bool fail_on_negative = false;

  auto common = [&](CLI::App* sub, bool needs_file) {
    if (needs_file) sub->add_option("input", file, "input file")->required();
    sub->add_option("-o,--output", output, "write the JSON report here instead of stdout");
    sub->add_flag("--strict,!--no-strict", cmd.strict, "full median-graph validation of inputs");
    sub->add_flag("--fail-on-negative", fail_on_negative,
                  "exit 3 when the obstruction fires or the hull is not cocompact");
  };

  auto* dual = app.add_subcommand("dual", "dual cube complex of a wallspace");
  common(dual, true);
  dual->add_option("--dot", dot, "also write a Graphviz file");

  auto* hull = app.add_subcommand("hull", "convex hull of a vertex set");
  common(hull, true);
  hull->add_option("--vertices", cmd.vertices, "comma-separated vertex ids")->required();

  auto* helly = app.add_subcommand("helly", "common vertex of a convex family");
  common(helly, true);
  helly->add_option("--family", cmd.family, "sets separated by ';', ids by ','")->required();

  auto* pack = app.add_subcommand("pack", "multiplicity of thickened convex sets");
  common(pack, true);
  pack->add_option("--family", cmd.family, "sets separated by ';', ids by ','")->required();
  pack->add_option("-r,--radius", cmd.thickening, "thickening radius")->default_val(0);

  auto* classify = app.add_subcommand("classify", "validate periodic wall data and classify orbit pairs");
  common(classify, true);

  auto* dichotomy = app.add_subcommand("dichotomy", "product of quasilines or non-cocompactness witness");
  common(dichotomy, true);
  dichotomy->add_option("--rank", cmd.rank, "rank of the acting lattice")->required()->check(
      CLI::PositiveNumber);
  dichotomy->add_option("-N,--window", cmd.radius, "window radius")->default_val(6)->check(
      CLI::PositiveNumber);

  auto* obstruct = app.add_subcommand(
      "obstruct", "commensurability-class count against C(p,k)+1 (JSON intersections or presentation text)");
  common(obstruct, true);

  auto* fixtures = app.add_subcommand("fixtures", "run the shipped fixtures against their expected verdicts");
  common(fixtures, false);
  fixtures->add_option("--dir", cmd.fixtures_dir, "fixture directory")->default_val("fixtures");

  CLI11_PARSE(app, argc, argv);

  cmd.name = app.get_subcommands().front()->get_name();
  if (!file.empty()) cmd.inputs.push_back(file);
  cmd.output = output;
  cmd.dot_output = dot;
  cmd.fail_on_negative = fail_on_negative;
  return cubeflat::run(cmd, std::cout, std::cerr);
}
