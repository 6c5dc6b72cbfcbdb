#pragma once

#include <string>
#include <vector>

#include "tabml/eval.hpp"

namespace tabml {

struct ConfigError : Error {
  ConfigError(const std::string& file, std::size_t line, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ": " + msg) {}
};

// Display names used as table column headers.
std::string classifier_display_name(Algorithm a);

struct DatasetRef {
  std::string name;
  std::string train_path;
  std::string dev_path;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  TableFormat format = TableFormat::Plain;
  std::size_t runs = 1;
  std::size_t threads = 1;
  std::vector<std::pair<std::string, ClassifierSpec>> classifiers;
  std::vector<DatasetRef> datasets;
  std::vector<ExperimentRow> rows;
};

// Declarative key-value/section format; see the documented schema in the
// README. Errors carry "<filename>:<line>:".
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& filename);

// Expands "F3", "F1-F20", or "F1+F4+F7" into attribute names.
std::vector<std::string> expand_attr_spec(const std::string& spec);

// Embedded experiment grids: "resultset1" (11 day-of-week rows per city) and
// "resultset2" (3 bin resolutions x F4/F7/F8 targets per city).
const std::vector<std::string>& builtin_config_names();
const std::string& builtin_config(const std::string& name);

}  // namespace tabml
