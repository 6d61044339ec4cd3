#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgen {

// Error with a source position, thrown by the s-expression reader and by the
// PDDL/constraint parsers built on top of it.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}

  int line;
  int col;
};

namespace sexpr {

// A node is either an atom (token nonempty) or a list of children.
struct Node {
  std::string token;
  std::vector<Node> children;
  int line = 0;
  int col = 0;

  bool is_atom() const { return !token.empty(); }
  bool is_list() const { return token.empty(); }
};

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Case-insensitive atom/keyword comparison.
inline bool atom_is(const Node& n, std::string_view kw) {
  if (!n.is_atom() || n.token.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(n.token[i])) !=
        std::tolower(static_cast<unsigned char>(kw[i])))
      return false;
  }
  return true;
}

namespace detail {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Node> read_all() {
    std::vector<Node> nodes;
    skip_blank();
    while (!eof()) {
      nodes.push_back(read_node());
      skip_blank();
    }
    return nodes;
  }

private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  // Commas are treated as whitespace so comma-separated argument lists parse
  // the same as space-separated ones.
  static bool is_blank(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',';
  }

  void skip_blank() {
    while (!eof()) {
      if (is_blank(peek())) {
        advance();
      } else if (peek() == ';') {
        while (!eof() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Node read_node() {
    const int line = line_;
    const int col = col_;
    if (peek() == '(') {
      advance();
      Node list;
      list.line = line;
      list.col = col;
      skip_blank();
      while (!eof() && peek() != ')') {
        list.children.push_back(read_node());
        skip_blank();
      }
      if (eof())
        throw ParseError(line, col, "unterminated '(' before end of input");
      advance();  // ')'
      return list;
    }
    if (peek() == ')') throw ParseError(line, col, "unexpected ')'");
    Node atom;
    atom.line = line;
    atom.col = col;
    while (!eof() && !is_blank(peek()) && peek() != '(' && peek() != ')' &&
           peek() != ';') {
      atom.token.push_back(peek());
      advance();
    }
    return atom;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

inline std::vector<Node> parse_all(std::string_view text) {
  return detail::Reader(text).read_all();
}

inline Node parse_one(std::string_view text) {
  auto nodes = parse_all(text);
  if (nodes.size() != 1)
    throw ParseError(1, 1, "expected exactly one top-level expression, found " +
                               std::to_string(nodes.size()));
  return nodes.front();
}

inline void to_string_rec(const Node& n, std::string& out) {
  if (n.is_atom()) {
    out += n.token;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ' ';
    to_string_rec(n.children[i], out);
  }
  out += ')';
}

inline std::string to_string(const Node& n) {
  std::string out;
  to_string_rec(n, out);
  return out;
}

}  // namespace sexpr
}  // namespace pgen
