#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tabml {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (ARFF files, model files, configs). Positions are 1-based.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t line_no, std::size_t column_no);
  std::size_t line = 0;
  std::size_t column = 0;
};

// Data handed to an operation does not match the schema it was built for.
struct SchemaError : Error {
  using Error::Error;
};

enum class AttrKind { Numeric, Nominal };

struct AttributeSpec {
  std::string name;
  AttrKind kind = AttrKind::Numeric;
  std::vector<std::string> labels;  // nominal only: non-empty, no duplicates

  bool is_numeric() const { return kind == AttrKind::Numeric; }
  bool is_nominal() const { return kind == AttrKind::Nominal; }
  bool operator==(const AttributeSpec&) const = default;
};

// One cell: a finite real, a 0-based index into the column's label list, or missing.
class Value {
 public:
  Value() = default;  // missing

  static Value numeric(double v);
  static Value nominal(std::size_t index);
  static Value missing() { return Value(); }

  bool is_missing() const { return tag_ == Tag::Missing; }
  bool is_numeric() const { return tag_ == Tag::Numeric; }
  bool is_nominal() const { return tag_ == Tag::Nominal; }

  double number() const;      // numeric only
  std::size_t index() const;  // nominal only

  bool operator==(const Value& o) const;

 private:
  enum class Tag : std::uint8_t { Missing, Numeric, Nominal };
  Tag tag_ = Tag::Missing;
  double num_ = 0.0;
  std::size_t idx_ = 0;
};

using Row = std::vector<Value>;

struct Dataset {
  std::string relation;
  std::vector<AttributeSpec> attributes;
  std::vector<Row> instances;

  std::size_t n_attributes() const { return attributes.size(); }
  std::size_t n_rows() const { return instances.size(); }

  // Index of the attribute called `name`; SchemaError if absent.
  std::size_t attribute_index(std::string_view name) const;

  // Throws Error on the first violated invariant (arity, value kinds,
  // nominal index range, duplicate attribute names, ...).
  void validate() const;

  bool operator==(const Dataset&) const;
};

Dataset parse_arff(std::istream& in);
Dataset parse_arff(const std::string& text);
Dataset parse_arff_file(const std::string& path);

std::string write_arff(const Dataset& d);
void write_arff_file(const Dataset& d, const std::string& path);

// One "@attribute <name> <type>" declaration line (no trailing newline).
std::string attribute_decl(const AttributeSpec& a);

// Parses one declaration line per entry, in order. Used by the model and
// filter file formats, which embed schemas as ARFF attribute lines.
std::vector<AttributeSpec> parse_attribute_decls(const std::vector<std::string>& lines);

struct ColumnStats {
  std::size_t count = 0;     // rows in the dataset
  std::size_t missing = 0;
  std::size_t distinct = 0;  // distinct non-missing values
  std::size_t unique = 0;    // values occurring exactly once
  std::optional<double> mean;             // numeric columns; absent when no values
  std::vector<std::size_t> label_counts;  // nominal columns; one count per label
};

ColumnStats column_stats(const Dataset& d, std::size_t attr);

}  // namespace tabml
