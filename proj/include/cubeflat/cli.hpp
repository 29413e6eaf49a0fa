#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cubeflat/io.hpp"

namespace cubeflat {

inline constexpr const char* kReportSchema = "cubeflat-report/1";

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kNegativeVerdict = 3 };

struct Command {
  // dual | hull | helly | pack | classify | dichotomy | obstruct | fixtures
  std::string name;
  std::vector<std::string> inputs;
  std::int64_t radius = 6;
  std::size_t rank = 0;  // dichotomy; 0 means "not given"
  std::size_t thickening = 0;
  std::string vertices;  // hull: "0,1,4"
  std::string family;    // helly, pack: "0,1;3,4"
  std::string output;    // report path, stdout when empty
  std::string dot_output;
  std::string fixtures_dir = "fixtures";
  bool strict = true;
  bool fail_on_negative = false;
};

struct RunResult {
  int exit_code = kOk;
  json report;
  std::string dot;  // filled by `dual` when a DOT path is requested
};

// Computes the report without writing anything.
RunResult execute(const Command& cmd);

// execute(), then writes the report (and DOT, if requested). Returns the exit code.
int run(const Command& cmd, std::ostream& out, std::ostream& err);

// Sorted-key JSON with a trailing newline; byte-identical for equal reports.
std::string render(const json& report);

std::uint64_t fnv1a64(const std::string& data);

// "0,1;2,3" -> {{0,1},{2,3}}. Throws std::invalid_argument.
std::vector<std::vector<Vertex>> parse_family(const std::string& text);

}  // namespace cubeflat
