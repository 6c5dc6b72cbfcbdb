#pragma once

#include <cstddef>
#include <vector>

#include "tabml/arff.hpp"

namespace tabml::detail {

struct UsableRows {
  std::vector<std::size_t> rows;  // rows with a non-missing class value
  std::size_t skipped = 0;
};

// Validates class_attr (in range, nominal) and that at least one usable row
// exists; throws SchemaError / Error otherwise.
UsableRows usable_rows(const Dataset& d, std::size_t class_attr);

std::size_t argmax_lowest(const std::vector<double>& v);

}  // namespace tabml::detail
