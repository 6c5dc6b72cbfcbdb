#include "tabml/arff.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tabml/textutil.hpp"

namespace tabml {

ParseError::ParseError(const std::string& msg, std::size_t line_no, std::size_t column_no)
    : Error("line " + std::to_string(line_no) + ", column " + std::to_string(column_no) + ": " + msg),
      line(line_no),
      column(column_no) {}

Value Value::numeric(double v) {
  Value out;
  out.tag_ = Tag::Numeric;
  out.num_ = v;
  return out;
}

Value Value::nominal(std::size_t index) {
  Value out;
  out.tag_ = Tag::Nominal;
  out.idx_ = index;
  return out;
}

double Value::number() const {
  if (tag_ != Tag::Numeric) throw Error("value is not numeric");
  return num_;
}

std::size_t Value::index() const {
  if (tag_ != Tag::Nominal) throw Error("value is not nominal");
  return idx_;
}

bool Value::operator==(const Value& o) const {
  if (tag_ != o.tag_) return false;
  switch (tag_) {
    case Tag::Missing: return true;
    case Tag::Numeric: return num_ == o.num_;
    case Tag::Nominal: return idx_ == o.idx_;
  }
  return false;
}

std::size_t Dataset::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == name) return i;
  throw SchemaError("no attribute named '" + std::string(name) + "'");
}

void Dataset::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& a : attributes) {
    if (a.name.empty()) throw Error("attribute with empty name");
    if (!seen.insert(a.name).second) throw Error("duplicate attribute name '" + a.name + "'");
    if (a.is_nominal()) {
      if (a.labels.empty()) throw Error("attribute '" + a.name + "' has no nominal labels");
      std::unordered_set<std::string> lab;
      for (const auto& l : a.labels)
        if (!lab.insert(l).second)
          throw Error("attribute '" + a.name + "' has duplicate label '" + l + "'");
    } else if (!a.labels.empty()) {
      throw Error("numeric attribute '" + a.name + "' carries labels");
    }
  }
  for (std::size_t r = 0; r < instances.size(); ++r) {
    const Row& row = instances[r];
    if (row.size() != attributes.size())
      throw Error("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                  " values, expected " + std::to_string(attributes.size()));
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Value& v = row[c];
      if (v.is_missing()) continue;
      if (attributes[c].is_numeric()) {
        if (!v.is_numeric()) throw Error("row " + std::to_string(r) + ": non-numeric value in numeric column");
        if (!std::isfinite(v.number())) throw Error("row " + std::to_string(r) + ": non-finite numeric value");
      } else {
        if (!v.is_nominal()) throw Error("row " + std::to_string(r) + ": non-nominal value in nominal column");
        if (v.index() >= attributes[c].labels.size())
          throw Error("row " + std::to_string(r) + ": label index out of range");
      }
    }
  }
}

bool Dataset::operator==(const Dataset& o) const {
  return relation == o.relation && attributes == o.attributes && instances == o.instances;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  std::size_t column = 0;  // 1-based
};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

bool is_ws(char c) { return c == ' ' || c == '\t'; }

struct LineScanner {
  std::string_view line;
  std::size_t line_no;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < line.size() && is_ws(line[pos])) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }
  char peek() const { return pos < line.size() ? line[pos] : '\0'; }

  [[noreturn]] void fail(const std::string& msg, std::size_t col = 0) const {
    throw ParseError(msg, line_no, col ? col : pos + 1);
  }

  // Reads one bare or quoted token. Bare tokens stop at whitespace or any
  // character in `stops`. Quoted tokens honor backslash escapes.
  Token token(std::string_view stops) {
    skip_ws();
    Token t;
    t.column = pos + 1;
    if (pos >= line.size()) fail("unexpected end of line");
    char q = line[pos];
    if (q == '\'' || q == '"') {
      t.quoted = true;
      ++pos;
      while (true) {
        if (pos >= line.size()) fail("unterminated quoted token", t.column);
        char c = line[pos++];
        if (c == q) break;
        if (c == '\\') {
          if (pos >= line.size()) fail("unterminated quoted token", t.column);
          c = line[pos++];
        }
        t.text.push_back(c);
      }
    } else {
      while (pos < line.size() && !is_ws(line[pos]) && stops.find(line[pos]) == std::string_view::npos)
        t.text.push_back(line[pos++]);
      if (t.text.empty()) fail("empty value");
    }
    return t;
  }
};

struct Parser {
  std::vector<std::pair<std::size_t, std::string>> lines;  // (line_no, text)

  explicit Parser(std::istream& in) {
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      lines.emplace_back(no, std::move(raw));
      raw.clear();
    }
  }

  static bool blank_or_comment(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && is_ws(s[i])) ++i;
    return i >= s.size() || s[i] == '%';
  }

  Dataset run() {
    Dataset d;
    std::size_t i = 0;
    const std::size_t n = lines.size();

    auto next_meaningful = [&]() {
      while (i < n && blank_or_comment(lines[i].second)) ++i;
      return i < n;
    };

    // @relation
    if (!next_meaningful()) throw ParseError("expected @relation", n + 1, 1);
    {
      LineScanner sc{lines[i].second, lines[i].first};
      Token kw = sc.token("");
      if (kw.quoted || !iequals(kw.text, "@relation")) sc.fail("expected @relation", kw.column);
      Token name = sc.token("");
      if (name.text.empty()) sc.fail("empty relation name", name.column);
      if (!sc.at_end()) sc.fail("unexpected text after relation name");
      d.relation = name.text;
      ++i;
    }

    // @attribute declarations until @data
    std::vector<std::unordered_map<std::string, std::size_t>> label_index;
    bool saw_data = false;
    std::unordered_set<std::string> names;
    while (next_meaningful()) {
      LineScanner sc{lines[i].second, lines[i].first};
      Token kw = sc.token("");
      if (!kw.quoted && iequals(kw.text, "@data")) {
        if (!sc.at_end()) sc.fail("unexpected text after @data");
        saw_data = true;
        ++i;
        break;
      }
      if (kw.quoted || !iequals(kw.text, "@attribute")) sc.fail("expected @attribute or @data", kw.column);

      AttributeSpec spec;
      Token name = sc.token("{");
      if (name.text.empty()) sc.fail("empty attribute name", name.column);
      spec.name = name.text;
      if (!names.insert(spec.name).second) sc.fail("duplicate attribute name '" + spec.name + "'", name.column);

      sc.skip_ws();
      if (sc.peek() == '{') {
        spec.kind = AttrKind::Nominal;
        ++sc.pos;
        std::unordered_map<std::string, std::size_t> idx;
        while (true) {
          sc.skip_ws();
          if (sc.peek() == '}') {
            ++sc.pos;
            break;
          }
          Token lab = sc.token(",}");
          if (lab.text.empty() && !lab.quoted) sc.fail("empty nominal label", lab.column);
          if (lab.text.empty()) sc.fail("empty nominal label", lab.column);
          if (!idx.emplace(lab.text, spec.labels.size()).second)
            sc.fail("duplicate label '" + lab.text + "'", lab.column);
          spec.labels.push_back(lab.text);
          sc.skip_ws();
          if (sc.peek() == ',') {
            ++sc.pos;
          } else if (sc.peek() != '}') {
            sc.fail("expected ',' or '}' in nominal specification");
          }
        }
        if (spec.labels.empty()) sc.fail("nominal attribute '" + spec.name + "' declares no labels");
        if (!sc.at_end()) sc.fail("unexpected text after nominal specification");
        label_index.push_back(std::move(idx));
      } else {
        Token type = sc.token("");
        if (!sc.at_end()) sc.fail("unexpected text after attribute type");
        if (iequals(type.text, "numeric") || iequals(type.text, "real") || iequals(type.text, "integer")) {
          spec.kind = AttrKind::Numeric;
        } else if (iequals(type.text, "string") || iequals(type.text, "date") ||
                   iequals(type.text, "relational")) {
          sc.fail("attribute type '" + type.text + "' is not supported; use numeric or nominal", type.column);
        } else {
          sc.fail("unknown attribute type '" + type.text + "'", type.column);
        }
        label_index.emplace_back();
      }
      d.attributes.push_back(std::move(spec));
      ++i;
    }
    if (!saw_data) throw ParseError("expected @data", n + 1, 1);
    if (d.attributes.empty()) throw ParseError("no attributes declared before @data", lines[i - 1].first, 1);

    // data rows
    const std::size_t n_attr = d.attributes.size();
    for (; i < n; ++i) {
      if (blank_or_comment(lines[i].second)) continue;
      LineScanner sc{lines[i].second, lines[i].first};
      sc.skip_ws();
      if (sc.peek() == '{')
        sc.fail("sparse ARFF rows are not supported");

      Row row;
      row.reserve(n_attr);
      std::size_t col = 0;
      while (true) {
        Token cell = sc.token(",");
        if (col >= n_attr)
          sc.fail("row has more than " + std::to_string(n_attr) + " values", cell.column);
        const AttributeSpec& spec = d.attributes[col];
        if (!cell.quoted && cell.text == "?") {
          row.push_back(Value::missing());
        } else if (spec.is_numeric()) {
          auto v = parse_double(cell.text);
          if (!v) sc.fail("invalid numeric value '" + cell.text + "'", cell.column);
          if (!std::isfinite(*v)) sc.fail("non-finite numeric value '" + cell.text + "'", cell.column);
          row.push_back(Value::numeric(*v));
        } else {
          auto it = label_index[col].find(cell.text);
          if (it == label_index[col].end())
            sc.fail("undeclared label '" + cell.text + "' for attribute '" + spec.name + "'", cell.column);
          row.push_back(Value::nominal(it->second));
        }
        ++col;
        sc.skip_ws();
        if (sc.pos >= sc.line.size()) break;
        if (sc.peek() != ',') sc.fail("expected ',' between values");
        ++sc.pos;
      }
      if (col != n_attr)
        sc.fail("row has " + std::to_string(col) + " values, expected " + std::to_string(n_attr), 1);
      d.instances.push_back(std::move(row));
    }
    return d;
  }
};

}  // namespace

Dataset parse_arff(std::istream& in) {
  Parser p(in);
  return p.run();
}

Dataset parse_arff(const std::string& text) {
  std::istringstream in(text);
  return parse_arff(in);
}

Dataset parse_arff_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path + "'");
  return parse_arff(in);
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

std::string attribute_decl(const AttributeSpec& a) {
  std::string out = "@attribute " + quote_token(a.name) + " ";
  if (a.is_numeric()) {
    out += "numeric";
  } else {
    out += "{";
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (i) out += ",";
      out += quote_token(a.labels[i]);
    }
    out += "}";
  }
  return out;
}

std::vector<AttributeSpec> parse_attribute_decls(const std::vector<std::string>& lines) {
  std::string doc = "@relation schema\n";
  for (const std::string& l : lines) doc += l + "\n";
  doc += "@data\n";
  return parse_arff(doc).attributes;
}

std::string write_arff(const Dataset& d) {
  std::string out;
  out += "@relation " + quote_token(d.relation) + "\n\n";
  for (const auto& a : d.attributes) out += attribute_decl(a) + "\n";
  out += "\n@data\n";
  for (const Row& row : d.instances) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      const Value& v = row[c];
      if (v.is_missing())
        out += "?";
      else if (v.is_numeric())
        out += format_double(v.number());
      else
        out += quote_token(d.attributes[c].labels[v.index()]);
    }
    out += "\n";
  }
  return out;
}

void write_arff_file(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file '" + path + "' for writing");
  out << write_arff(d);
  if (!out) throw Error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Column statistics
// ---------------------------------------------------------------------------

ColumnStats column_stats(const Dataset& d, std::size_t attr) {
  if (attr >= d.n_attributes()) throw SchemaError("attribute index " + std::to_string(attr) + " out of range");
  const AttributeSpec& spec = d.attributes[attr];
  ColumnStats s;
  s.count = d.n_rows();

  if (spec.is_nominal()) {
    s.label_counts.assign(spec.labels.size(), 0);
    for (const Row& row : d.instances) {
      const Value& v = row[attr];
      if (v.is_missing())
        ++s.missing;
      else
        ++s.label_counts[v.index()];
    }
    for (std::size_t c : s.label_counts) {
      if (c > 0) ++s.distinct;
      if (c == 1) ++s.unique;
    }
    return s;
  }

  std::vector<double> vals;
  vals.reserve(d.n_rows());
  double sum = 0.0;
  for (const Row& row : d.instances) {
    const Value& v = row[attr];
    if (v.is_missing()) {
      ++s.missing;
    } else {
      vals.push_back(v.number());
      sum += v.number();
    }
  }
  if (!vals.empty()) {
    s.mean = sum / static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 0; i < vals.size();) {
      std::size_t j = i;
      while (j < vals.size() && vals[j] == vals[i]) ++j;
      ++s.distinct;
      if (j - i == 1) ++s.unique;
      i = j;
    }
  }
  return s;
}

}  // namespace tabml
