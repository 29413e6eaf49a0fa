#include "cubeflat/presentation.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

namespace cubeflat {

PresentationError::PresentationError(Kind kind, std::size_t line, std::size_t column,
                                     const std::string& message)
    : std::runtime_error(column == 0 ? "line " + std::to_string(line) + ": " + message
                                     : "line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string to_string(PresentationError::Kind k) {
  switch (k) {
    case PresentationError::Kind::Syntax: return "syntax";
    case PresentationError::Kind::NonPrimitive: return "non-primitive";
    case PresentationError::Kind::Dimension: return "dimension";
    case PresentationError::Kind::MissingRank: return "missing-rank";
  }
  return "?";
}

namespace {

using Kind = PresentationError::Kind;

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t number) : s_(line), line_(number) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ == s_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw PresentationError(Kind::Syntax, line_, column(), msg);
  }

  void expect(std::string_view token) {
    skip_space();
    if (s_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected an identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::int64_t integer() {
    skip_space();
    const char* begin = s_.data() + pos_;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  IntVector vector() {
    expect("(");
    IntVector v{integer()};
    while (true) {
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        v.push_back(integer());
      } else {
        break;
      }
    }
    expect(")");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct PendingEdge {
  TubularEdge edge;
  std::size_t line;
};

}  // namespace

TubularPresentation parse_presentation(std::string_view text) {
  std::optional<std::size_t> rank;
  std::vector<PendingEdge> edges;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    LineCursor cur(line, number);
    if (cur.done()) continue;
    const std::size_t keyword_col = cur.column();
    const std::string keyword = cur.word();
    if (keyword == "rank") {
      if (rank) throw PresentationError(Kind::Syntax, number, keyword_col, "rank given twice");
      const std::size_t col = cur.column();
      const auto p = cur.integer();
      if (p < 1) throw PresentationError(Kind::Syntax, number, col, "rank must be positive");
      rank = static_cast<std::size_t>(p);
    } else if (keyword == "edge") {
      PendingEdge e{{}, number};
      e.edge.letter = cur.word();
      cur.expect(":");
      cur.skip_space();
      const std::size_t from_col = cur.column();
      e.edge.from = cur.vector();
      cur.expect("->");
      cur.skip_space();
      const std::size_t to_col = cur.column();
      e.edge.to = cur.vector();
      if (!cur.done()) cur.fail("unexpected trailing text");
      if (!is_primitive(e.edge.from)) {
        throw PresentationError(Kind::NonPrimitive, number, from_col,
                                "vector of edge " + e.edge.letter + " is not primitive");
      }
      if (!is_primitive(e.edge.to)) {
        throw PresentationError(Kind::NonPrimitive, number, to_col,
                                "vector of edge " + e.edge.letter + " is not primitive");
      }
      edges.push_back(std::move(e));
    } else {
      throw PresentationError(Kind::Syntax, number, keyword_col,
                              "unknown keyword '" + keyword + "'");
    }
  }
  if (!rank) throw PresentationError(Kind::MissingRank, number, 0, "no 'rank' line");

  TubularPresentation out;
  out.rank = *rank;
  for (auto& e : edges) {
    if (e.edge.from.size() != *rank || e.edge.to.size() != *rank) {
      throw PresentationError(Kind::Dimension, e.line, 0,
                              "edge " + e.edge.letter + " does not have vectors of length " +
                                  std::to_string(*rank));
    }
    out.edges.push_back(std::move(e.edge));
  }
  return out;
}

}  // namespace cubeflat
