#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "tabml/arff.hpp"
#include "tabml/textutil.hpp"

namespace tabml::detail {

// Line reader for the versioned text formats (models, fitted filters).
// Skips blank lines; positions in errors are 1-based.
struct LineIn {
  std::istream& in;
  std::size_t line_no = 0;

  std::string next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return line;
    }
    throw ParseError("unexpected end of file", line_no + 1, 1);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_no, 1); }
};

inline double read_double_tok(std::istringstream& in, LineIn& r, const char* what) {
  std::string tok;
  if (!(in >> tok)) r.fail(std::string("expected ") + what);
  auto v = parse_double(tok);
  if (!v) r.fail(std::string("invalid ") + what + " '" + tok + "'");
  return *v;
}

inline std::vector<AttributeSpec> read_schema_block(LineIn& r) {
  std::istringstream head(r.next());
  std::string word;
  std::size_t n = 0;
  if (!(head >> word >> n) || word != "attributes") r.fail("expected 'attributes <n>'");
  std::vector<std::string> decls;
  decls.reserve(n);
  for (std::size_t i = 0; i < n; ++i) decls.push_back(r.next());
  return parse_attribute_decls(decls);
}

inline void write_schema_block(std::ostream& out, const std::vector<AttributeSpec>& schema) {
  out << "attributes " << schema.size() << "\n";
  for (const AttributeSpec& a : schema) out << attribute_decl(a) << "\n";
}

}  // namespace tabml::detail
