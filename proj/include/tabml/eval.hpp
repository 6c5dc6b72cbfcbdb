#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tabml/arff.hpp"
#include "tabml/classifiers.hpp"
#include "tabml/filters.hpp"

namespace tabml {

struct EvaluationReport {
  std::size_t n_total = 0;    // evaluated rows (missing-class rows excluded)
  std::size_t n_correct = 0;
  std::size_t n_skipped_missing_class = 0;
  std::size_t n_unseen_class = 0;  // dev rows whose class label the model never saw
  double accuracy = 0.0;           // n_correct / n_total
  // Model class labels, extended with any occurring unseen dev labels.
  std::vector<std::string> class_labels;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted], square
  std::vector<double> precision, recall;            // per class; 0 when undefined
};

// Dev rows with a missing class are skipped and counted. Dev rows whose class
// label the model never saw are always errors, tallied in extension rows of
// the confusion matrix. Feature attribute specs must match the model exactly.
EvaluationReport evaluate(const Model& m, const Dataset& dev, std::size_t class_attr);

// Constant model predicting the training majority class (ties -> lowest index).
std::unique_ptr<Model> majority_baseline(const Dataset& train, std::size_t class_attr);

// ---------------------------------------------------------------------------
// Experiment matrix
// ---------------------------------------------------------------------------

struct DiscretizeStep {
  DiscretizeMode mode = DiscretizeMode::EqualWidth;
  std::size_t bins = 10;
  // Attribute names to discretize; empty = every numeric attribute except the
  // class. The class attribute is always excluded from this step.
  std::vector<std::string> attrs;
};

struct ExperimentRow {
  std::string label;  // "Properties" column text
  bool impute = false;
  std::optional<DiscretizeStep> discretize;
  std::string class_attr_name;
  // >0: equal-width-bin a numeric class attribute into this many bins
  // (fitted on train), making it a nominal prediction target.
  std::size_t class_bins = 0;
  std::optional<ClassScheme> remap;
  std::string class_display;  // defaults to class_attr_name
};

struct ExperimentSpec {
  std::string name;  // dataset display name
  Dataset train;
  Dataset dev;
  std::vector<ExperimentRow> rows;
  std::vector<std::pair<std::string, ClassifierSpec>> classifiers;  // display name + spec
  std::uint64_t seed = 1;
  std::size_t runs = 1;     // >1: repeat with derived seeds, report mean accuracy
  std::size_t threads = 1;  // grid parallelism; results are schedule-independent
};

struct ResultCell {
  double accuracy = 0.0;  // mean over runs
  double stddev = 0.0;    // population stddev over runs (0 for a single run)
  std::vector<double> run_accuracies;
  EvaluationReport report;  // from the first run
};

struct ResultTable {
  std::string title;
  std::vector<ExperimentRow> rows;
  std::vector<std::string> classifier_names;
  std::vector<std::vector<ResultCell>> cells;  // [row][classifier]
};

// Seed for one grid cell; the random-forest seed of cell (row, col) in run k.
std::uint64_t cell_seed(std::uint64_t base, std::size_t row, std::size_t col, std::size_t run = 0);

// Fits the row's filters on train, applies them to train and dev, trains every
// classifier, and evaluates on dev. Deterministic given spec.seed, for any
// thread count.
ResultTable run_experiment(const ExperimentSpec& spec);

enum class TableFormat { Plain, Markdown, Csv };
std::optional<TableFormat> format_from_name(std::string_view name);
std::string format_extension(TableFormat f);

// Accuracies rendered as percentages with four decimal places.
std::string render_table(const ResultTable& t, TableFormat f);

// One JSON object per cell (accuracy, counts, confusion matrix).
std::string report_jsonl(const ResultTable& t);

}  // namespace tabml
