#pragma once

#include <string>
#include <vector>

#include "tabml/arff.hpp"
#include "tabml/rng.hpp"

// Seeded random datasets for round-trip and property tests.
namespace testgen {

using tabml::AttrKind;
using tabml::AttributeSpec;
using tabml::Dataset;
using tabml::Rng;
using tabml::Row;
using tabml::Value;

inline std::string random_token(Rng& rng) {
  static const std::vector<std::string> plain = {"a", "b", "sunny", "rain", "x1", "low", "high"};
  static const std::vector<std::string> weird = {
      "(-inf-0.5]", "(0.5-5.5]", "(452-inf)", "with space", "comma,label", "quo'te",
      "dou\"ble", "back\\slash", "{brace}", "100%", "?", "tab\there", "-1.5"};
  std::string base = rng.uniform01() < 0.6 ? plain[rng.below(plain.size())]
                                           : weird[rng.below(weird.size())];
  // keep labels distinct by appending a counter elsewhere; here add salt sometimes
  if (rng.uniform01() < 0.3) base += "_" + std::to_string(rng.below(1000));
  return base;
}

inline double random_number(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return static_cast<double>(rng.below(100)) - 50.0;
    case 1: return rng.uniform(-1000.0, 1000.0);
    case 2: return rng.normal(0.0, 1.0) * 1e-6;
    case 3: return rng.normal(0.0, 1.0) * 1e12;
    default: return rng.uniform01();
  }
}

inline Dataset random_dataset(Rng& rng, std::size_t max_attrs = 8, std::size_t max_rows = 60,
                              double missing_rate = 0.1) {
  Dataset d;
  d.relation = random_token(rng);
  const std::size_t n_attrs = 1 + rng.below(max_attrs);
  for (std::size_t a = 0; a < n_attrs; ++a) {
    AttributeSpec spec;
    spec.name = "attr " + std::to_string(a) + (rng.uniform01() < 0.2 ? "'" + random_token(rng) : "");
    if (rng.uniform01() < 0.5) {
      spec.kind = AttrKind::Nominal;
      const std::size_t n_labels = 1 + rng.below(6);
      for (std::size_t l = 0; l < n_labels; ++l)
        spec.labels.push_back(random_token(rng) + "#" + std::to_string(l));
    }
    d.attributes.push_back(std::move(spec));
  }
  const std::size_t n_rows = rng.below(max_rows + 1);
  for (std::size_t r = 0; r < n_rows; ++r) {
    Row row;
    for (const AttributeSpec& spec : d.attributes) {
      if (rng.uniform01() < missing_rate) {
        row.push_back(Value::missing());
      } else if (spec.is_numeric()) {
        row.push_back(Value::numeric(random_number(rng)));
      } else {
        row.push_back(Value::nominal(rng.below(spec.labels.size())));
      }
    }
    d.instances.push_back(std::move(row));
  }
  return d;
}

}  // namespace testgen
