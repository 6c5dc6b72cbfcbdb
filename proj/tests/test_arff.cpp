#include <doctest.h>

#include <sstream>

#include "generators.hpp"
#include "tabml/arff.hpp"
#include "tabml/textutil.hpp"

using namespace tabml;

TEST_CASE("minimal grammar") {
  const Dataset d = parse_arff("@relation t\n@attribute x numeric\n@attribute c {a,b}\n@data\n1.5,a\n?,b\n");
  CHECK(d.relation == "t");
  REQUIRE(d.n_attributes() == 2);
  CHECK(d.attributes[0].is_numeric());
  REQUIRE(d.attributes[1].is_nominal());
  CHECK(d.attributes[1].labels == std::vector<std::string>{"a", "b"});
  REQUIRE(d.n_rows() == 2);
  CHECK(d.instances[0][0] == Value::numeric(1.5));
  CHECK(d.instances[0][1] == Value::nominal(0));
  CHECK(d.instances[1][0].is_missing());
  CHECK(d.instances[1][1] == Value::nominal(1));
}

TEST_CASE("keywords and numeric type aliases are case-insensitive") {
  const Dataset d = parse_arff("@RELATION t\n@ATTRIBUTE a REAL\n@Attribute b Integer\n@DATA\n1,2\n");
  CHECK(d.attributes[0].is_numeric());
  CHECK(d.attributes[1].is_numeric());
  CHECK(d.instances[0][0] == Value::numeric(1.0));
}

TEST_CASE("comments and blank lines are skipped") {
  const Dataset d = parse_arff("% header comment\n\n@relation t\n% another\n@attribute x numeric\n@data\n% row comment\n1\n\n2\n");
  CHECK(d.n_rows() == 2);
}

TEST_CASE("scientific notation and exact numeric parsing") {
  const Dataset d = parse_arff("@relation t\n@attribute x numeric\n@data\n1.25e-3\n-4E2\n");
  CHECK(d.instances[0][0] == Value::numeric(0.00125));
  CHECK(d.instances[1][0] == Value::numeric(-400.0));
}

TEST_CASE("row arity mismatch is a positioned error") {
  try {
    parse_arff("@relation t\n@attribute x numeric\n@attribute y numeric\n@data\n1,2,3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 5);
  }
}

TEST_CASE("weka-style quoted labels parse with quotes stripped") {
  std::string text =
      "@relation rain\n"
      "@attribute F4 {'(-inf-0.5]','(0.5-5.5]','(5.5-inf)'}\n"
      "@data\n";
  for (int i = 0; i < 20; ++i)
    text += i % 3 == 0 ? "'(-inf-0.5]'\n" : (i % 3 == 1 ? "'(0.5-5.5]'\n" : "'(5.5-inf)'\n");
  const Dataset d = parse_arff(text);
  REQUIRE(d.n_rows() == 20);
  CHECK(d.attributes[0].labels[0] == "(-inf-0.5]");
  CHECK(d.attributes[0].labels[1] == "(0.5-5.5]");
  CHECK(d.instances[0][0] == Value::nominal(0));
  CHECK(d.instances[1][0] == Value::nominal(1));
  // labels survive a full write/parse cycle, re-quoted in the file text
  const Dataset again = parse_arff(write_arff(d));
  CHECK(again == d);
  CHECK(write_arff(d).find("'(-inf-0.5]'") != std::string::npos);
}

TEST_CASE("parser error cases") {
  CHECK_THROWS_AS(parse_arff(""), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@data\n"), ParseError);                 // no attributes
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n"), ParseError);  // no @data
  CHECK_THROWS_AS(parse_arff("@attribute x numeric\n@data\n"), ParseError);        // no @relation
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x string\n@data\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x date\n@data\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x wibble\n@data\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n@attribute x numeric\n@data\n"),
                  ParseError);  // duplicate name
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute c {a,a}\n@data\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute c {}\n@data\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute c {a,b}\n@data\nz\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n@data\nabc\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n@data\n{0 1}\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n@data\ninf\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute x numeric\n@data\nnan\n"), ParseError);
  CHECK_THROWS_AS(parse_arff("@relation t\n@attribute c {'a}\n@data\n"), ParseError);  // quote
}

TEST_CASE("undeclared label error names the attribute and position") {
  try {
    parse_arff("@relation t\n@attribute c {a,b}\n@data\na\nc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 5);
    CHECK(std::string(e.what()).find("'c'") != std::string::npos);
  }
}

TEST_CASE("quoted question mark is a label, bare one is missing") {
  const Dataset d = parse_arff("@relation t\n@attribute c {'?',a}\n@data\n'?'\n?\n");
  CHECK(d.instances[0][0] == Value::nominal(0));
  CHECK(d.instances[1][0].is_missing());
  CHECK(parse_arff(write_arff(d)) == d);
}

TEST_CASE("writer: empty instance list gives header only") {
  Dataset d;
  d.relation = "empty";
  d.attributes.push_back({"x", AttrKind::Numeric, {}});
  const std::string text = write_arff(d);
  CHECK(text.substr(text.size() - 6) == "@data\n");
  CHECK(parse_arff(text) == d);
}

TEST_CASE("writer: missing values become bare question marks") {
  Dataset d;
  d.relation = "m";
  d.attributes.push_back({"x", AttrKind::Numeric, {}});
  d.instances.push_back({Value::missing()});
  CHECK(write_arff(d).find("\n?\n") != std::string::npos);
}

TEST_CASE("round-trip property on random datasets") {
  Rng rng(20260809);
  for (int i = 0; i < 80; ++i) {
    const Dataset d = testgen::random_dataset(rng);
    d.validate();
    const Dataset back = parse_arff(write_arff(d));
    REQUIRE(back == d);
  }
}

TEST_CASE("parser totality: fuzzed inputs parse or throw ParseError") {
  Rng rng(7);
  const std::string valid =
      "@relation t\n@attribute x numeric\n@attribute c {a,b}\n@data\n1.5,a\n?,b\n2,a\n";
  for (int i = 0; i < 400; ++i) {
    std::string text;
    if (i % 3 == 0) {
      const std::size_t len = rng.below(200);
      for (std::size_t k = 0; k < len; ++k) text.push_back(static_cast<char>(32 + rng.below(95)));
    } else {
      text = valid;
      for (int m = 0; m < 8; ++m) {
        const std::size_t pos = rng.below(text.size());
        if (rng.uniform01() < 0.5)
          text[pos] = static_cast<char>(32 + rng.below(95));
        else
          text.insert(pos, 1,
                      static_cast<char>(rng.uniform01() < 0.3 ? '\n' : 32 + rng.below(95)));
      }
    }
    try {
      const Dataset d = parse_arff(text);
      d.validate();
    } catch (const ParseError&) {
      // the only acceptable failure mode
    }
  }
}

TEST_CASE("column_stats basics") {
  Dataset d;
  d.relation = "s";
  d.attributes.push_back({"x", AttrKind::Numeric, {}});
  d.instances.push_back({Value::numeric(1)});
  d.instances.push_back({Value::numeric(2)});
  d.instances.push_back({Value::missing()});
  const ColumnStats s = column_stats(d, 0);
  CHECK(s.count == 3);
  CHECK(s.missing == 1);
  CHECK(s.distinct == 2);
  CHECK(s.unique == 2);
  REQUIRE(s.mean);
  CHECK(*s.mean == doctest::Approx(1.5));
}

TEST_CASE("column_stats: all-missing column reports no mean") {
  Dataset d;
  d.relation = "s";
  d.attributes.push_back({"x", AttrKind::Numeric, {}});
  d.instances.push_back({Value::missing()});
  d.instances.push_back({Value::missing()});
  const ColumnStats s = column_stats(d, 0);
  CHECK(s.missing == 2);
  CHECK(!s.mean);
  CHECK(s.distinct == 0);
}

TEST_CASE("column_stats reproduces the 10-bin rainfall listing shape") {
  const std::vector<std::string> labels = {
      "(-inf-0.5]",   "(0.5-5.5]",        "(5.5-12.5]",              "(12.5-29.5]",
      "(29.5-59.5]",  "(59.5-115]",       "(115-184.389639]",        "(184.389639-184.889639]",
      "(184.889639-452]", "(452-inf)"};
  const std::vector<std::size_t> counts = {11378, 735, 682, 645, 650, 681, 372, 1170, 585, 582};
  Dataset d;
  d.relation = "rain";
  d.attributes.push_back({"F4", AttrKind::Nominal, labels});
  for (std::size_t l = 0; l < counts.size(); ++l)
    for (std::size_t k = 0; k < counts[l]; ++k) d.instances.push_back({Value::nominal(l)});
  const ColumnStats s = column_stats(d, 0);
  CHECK(s.count == 17480);
  CHECK(s.missing == 0);
  CHECK(s.distinct == 10);
  CHECK(s.unique == 0);
  CHECK(s.label_counts == counts);
}

TEST_CASE("column_stats count identities hold on random datasets") {
  Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    const Dataset d = testgen::random_dataset(rng);
    for (std::size_t a = 0; a < d.n_attributes(); ++a) {
      const ColumnStats s = column_stats(d, a);
      CHECK(s.count == d.n_rows());
      const std::size_t non_missing = s.count - s.missing;
      if (d.attributes[a].is_nominal()) {
        std::size_t sum = 0;
        for (std::size_t c : s.label_counts) sum += c;
        CHECK(sum == non_missing);
      }
      CHECK(s.distinct <= non_missing);
      CHECK(s.unique <= s.distinct);
    }
  }
  CHECK_THROWS_AS(column_stats(testgen::random_dataset(rng), 1000), SchemaError);
}

TEST_CASE("attribute_index and validate") {
  Dataset d = parse_arff("@relation t\n@attribute x numeric\n@attribute c {a}\n@data\n");
  CHECK(d.attribute_index("c") == 1);
  CHECK_THROWS_AS(d.attribute_index("nope"), SchemaError);
  d.instances.push_back({Value::numeric(1)});  // arity violation
  CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("format_double output parses back exactly") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = testgen::random_number(rng);
    auto p = parse_double(format_double(v));
    REQUIRE(p);
    CHECK(*p == v);
  }
  CHECK(format_double(115.0) == "115");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(184.389639) == "184.389639");
}
