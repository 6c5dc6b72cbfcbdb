#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tabml/arff.hpp"

namespace tabml {

// ---------------------------------------------------------------------------
// Missing-value imputation: train-fitted mean (numeric) / mode (nominal).
// ---------------------------------------------------------------------------

struct ImputationModel {
  std::vector<AttributeSpec> schema;         // specs the model was fitted on
  std::vector<std::optional<Value>> fill;    // one per attribute; absent when the
                                             // column had no observed values
};

ImputationModel fit_imputation(const Dataset& d);
Dataset apply_imputation(const Dataset& d, const ImputationModel& m);

// ---------------------------------------------------------------------------
// Discretization: numeric column -> nominal interval column.
// ---------------------------------------------------------------------------

enum class DiscretizeMode { EqualWidth, SupervisedMdl };

struct AttributeCuts {
  std::size_t attr = 0;
  std::vector<double> cut_points;     // strictly increasing
  std::vector<std::string> labels;    // cut_points.size() + 1 interval labels
};

struct DiscretizationModel {
  DiscretizeMode mode = DiscretizeMode::EqualWidth;
  std::size_t bins = 1;               // requested k (equal-width only)
  std::vector<AttributeSpec> schema;
  std::vector<AttributeCuts> columns;  // ascending attribute index
};

// "(-inf-c1]", "(c1-c2]", ..., "(cn-inf)"; no cuts -> {"(-inf-inf)"}.
// Numbers are rendered with format_double, so labels recover cuts exactly.
std::vector<std::string> interval_labels(const std::vector<double>& cut_points);

struct Interval {
  double lo = 0.0;  // -inf for the leftmost bin
  double hi = 0.0;  // +inf for the rightmost bin
};

// Inverse of interval_labels for one label; Error when not an interval label.
Interval parse_interval_label(const std::string& label);

// Bin of v given cut points: first i with v <= cut_points[i], else the last bin.
std::size_t bin_index(const std::vector<double>& cut_points, double v);

DiscretizationModel fit_equal_width(const Dataset& d, const std::vector<std::size_t>& attrs,
                                    std::size_t k);
DiscretizationModel fit_supervised_mdl(const Dataset& d, const std::vector<std::size_t>& attrs,
                                       std::size_t class_attr);
Dataset apply_discretization(const Dataset& d, const DiscretizationModel& m);

// ---------------------------------------------------------------------------
// Class-target remapping over a 7-label Mon..Sun attribute.
// ---------------------------------------------------------------------------

enum class ClassScheme { SevenDay, WeekdaySatSun, WeekdayWeekend };

std::string scheme_name(ClassScheme s);
std::optional<ClassScheme> scheme_from_name(std::string_view name);

struct ClassRemap {
  std::size_t attr = 0;
  ClassScheme scheme = ClassScheme::SevenDay;
  std::vector<AttributeSpec> schema;
  std::vector<std::string> target_labels;
  std::vector<std::size_t> mapping;  // source label index -> target label index
};

// Validates that d.attributes[attr] is nominal with the 7 weekday labels in
// Mon..Sun order (common long/short spellings accepted).
ClassRemap make_class_remap(const Dataset& d, std::size_t attr, ClassScheme scheme);
Dataset apply_class_remap(const Dataset& d, const ClassRemap& r);

// ---------------------------------------------------------------------------
// Fitted-filter file form (versioned text), for reuse across train/dev.
// ---------------------------------------------------------------------------

using FilterModel = std::variant<ImputationModel, DiscretizationModel, ClassRemap>;

std::string save_filter(const FilterModel& f);
FilterModel load_filter(std::istream& in);
FilterModel load_filter_file(const std::string& path);
Dataset apply_filter(const Dataset& d, const FilterModel& f);

}  // namespace tabml
