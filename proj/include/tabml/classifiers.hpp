#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tabml/arff.hpp"
#include "tabml/rng.hpp"

namespace tabml {

enum class Algorithm { NaiveBayes, J48, RandomForest, IB1, Majority };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);
// The four user-selectable algorithms (majority is an evaluation baseline).
const std::vector<std::string>& trainable_algorithm_names();

struct J48Params {
  double confidence = 0.25;
  double min_leaf = 2.0;
  bool subtree_raising = true;
  bool prune = true;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t features_per_split = 0;  // 0 = floor(log2(#features) + 1)
  std::uint64_t seed = 0;
};

struct ClassifierSpec {
  Algorithm algorithm = Algorithm::NaiveBayes;
  J48Params j48;
  ForestParams forest;
};

// ---------------------------------------------------------------------------
// Common model interface
// ---------------------------------------------------------------------------

class Model {
 public:
  virtual ~Model() = default;

  const std::vector<AttributeSpec>& attributes() const { return schema_; }
  std::size_t class_attr() const { return class_attr_; }
  const AttributeSpec& class_spec() const { return schema_[class_attr_]; }
  std::size_t n_classes() const { return class_spec().labels.size(); }
  // Training rows dropped because their class value was missing.
  std::size_t skipped_missing_class() const { return skipped_; }

  virtual Algorithm algorithm() const = 0;

  // argmax of predict_distribution, ties resolved to the lowest label index.
  std::size_t predict(const Row& row) const;
  // Sums to 1 within 1e-9; the class cell of `row` is ignored.
  virtual std::vector<double> predict_distribution(const Row& row) const = 0;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static std::unique_ptr<Model> load(std::istream& in);
  static std::unique_ptr<Model> load_file(const std::string& path);

  // SchemaError unless `row` matches the training schema (class cell exempt).
  void check_row(const Row& row) const;

 protected:
  virtual void save_params(std::ostream& out) const = 0;

  std::vector<AttributeSpec> schema_;
  std::size_t class_attr_ = 0;
  std::size_t skipped_ = 0;

  friend std::unique_ptr<Model> load_model_params(std::istream&);
};

std::unique_ptr<Model> train(const ClassifierSpec& spec, const Dataset& d, std::size_t class_attr);

// ---------------------------------------------------------------------------
// Naive Bayes (Gaussian numerics, Laplace-smoothed nominal tables)
// ---------------------------------------------------------------------------

class NaiveBayesModel : public Model {
 public:
  static constexpr double kVarianceFloor = 1e-6;

  struct Gaussian {
    double n = 0.0;  // observed count; 0 means the factor is skipped
    double mean = 0.0;
    double var = kVarianceFloor;
  };
  struct NominalTable {
    // counts[class][label] of non-missing training values; conditionals are
    // (count + 1) / (class_total + n_labels).
    std::vector<std::vector<double>> counts;
    std::vector<double> class_totals;
  };

  static std::unique_ptr<NaiveBayesModel> fit(const Dataset& d, std::size_t class_attr);

  Algorithm algorithm() const override { return Algorithm::NaiveBayes; }
  std::vector<double> predict_distribution(const Row& row) const override;
  // Unnormalized per-class log scores (log prior + sum of log likelihoods).
  std::vector<double> log_scores(const Row& row) const;

  std::vector<double> priors;               // Laplace-smoothed, sums to 1
  std::vector<NominalTable> nominal;        // indexed by attribute, unused => empty
  std::vector<std::vector<Gaussian>> gauss; // indexed by attribute, then class

 protected:
  void save_params(std::ostream& out) const override;
};

// ---------------------------------------------------------------------------
// Decision trees (C4.5-style growth, pessimistic pruning)
// ---------------------------------------------------------------------------

struct TreeNode {
  // Split fields; attr < 0 marks a leaf.
  int attr = -1;
  bool numeric_split = false;
  double threshold = 0.0;
  std::vector<std::unique_ptr<TreeNode>> children;  // nominal: one per label; numeric: {<=t, >t}
  std::vector<double> child_weights;                // training weight routed to each child

  std::vector<double> class_counts;  // weighted training distribution at this node
  std::size_t predicted = 0;

  bool is_leaf() const { return attr < 0; }
  std::size_t node_count() const;
  std::size_t depth() const;  // leaves have depth 0
  std::unique_ptr<TreeNode> clone() const;
};

struct GrowOptions {
  double min_leaf = 2.0;               // every child of a split must receive >= min_leaf weight
  std::size_t features_per_split = 0;  // 0 = consider all attributes
  double min_gain = 1e-12;             // splits must beat this information gain
};

// Grows an unpruned tree. Rows with a missing class are skipped; rows with a
// missing split value are distributed fractionally across children in
// proportion to the known-value child weights. `rng` is consumed only when
// features_per_split restricts the candidate set.
std::unique_ptr<TreeNode> grow_tree(const Dataset& d, std::size_t class_attr,
                                    const GrowOptions& opt, Rng* rng = nullptr);

// Bottom-up subtree replacement (and optionally raising) driven by the
// pessimistic error estimate at hp.confidence.
void prune_tree(TreeNode& root, const Dataset& d, std::size_t class_attr, const J48Params& hp);

// Upper-confidence estimate of the errors beyond `errors` expected from a
// node covering `total` weight (the C4.5 pessimistic-error term).
double added_errors(double total, double errors, double confidence);

// Class distribution `row` routes to under `root`. Missing split values
// follow every child, weighted by the training share of each child.
std::vector<double> tree_distribution(const TreeNode& root, const Row& row,
                                      std::size_t n_classes);

class TreeModel : public Model {
 public:
  static std::unique_ptr<TreeModel> fit(const Dataset& d, std::size_t class_attr,
                                        const J48Params& hp);

  Algorithm algorithm() const override { return Algorithm::J48; }
  std::vector<double> predict_distribution(const Row& row) const override;

  const TreeNode& root() const { return *root_; }
  J48Params params;

 protected:
  void save_params(std::ostream& out) const override;

 private:
  std::unique_ptr<TreeNode> root_;
  friend std::unique_ptr<Model> load_model_params(std::istream&);
};

// ---------------------------------------------------------------------------
// Random forest (bagged unpruned random trees, majority vote)
// ---------------------------------------------------------------------------

class ForestModel : public Model {
 public:
  static std::unique_ptr<ForestModel> fit(const Dataset& d, std::size_t class_attr,
                                          const ForestParams& p);

  Algorithm algorithm() const override { return Algorithm::RandomForest; }
  // Vote fractions: votes per class / n_trees.
  std::vector<double> predict_distribution(const Row& row) const override;

  // Seed of tree t's private stream: derive_seed(params.seed, t). The stream
  // first draws the n bootstrap row indices (below(n) each), then feature
  // subsets during growth.
  static std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree);
  std::size_t effective_features_per_split() const;

  const std::vector<std::unique_ptr<TreeNode>>& trees() const { return trees_; }
  ForestParams params;

 protected:
  void save_params(std::ostream& out) const override;

 private:
  std::vector<std::unique_ptr<TreeNode>> trees_;
  friend std::unique_ptr<Model> load_model_params(std::istream&);
};

// ---------------------------------------------------------------------------
// IB1 (1-nearest-neighbor, range-normalized Euclidean distance)
// ---------------------------------------------------------------------------

class IB1Model : public Model {
 public:
  static std::unique_ptr<IB1Model> fit(const Dataset& d, std::size_t class_attr);

  Algorithm algorithm() const override { return Algorithm::IB1; }
  std::vector<double> predict_distribution(const Row& row) const override;

  // Squared distance between a query row and stored instance i. Numeric
  // attributes are min-max normalized with training bounds (values outside
  // clamp to [0,1]); nominal attributes contribute 0/1; any missing value in
  // the pair contributes 1. The class attribute is excluded.
  double squared_distance(const Row& row, std::size_t i) const;
  // Index into the stored instances of the nearest neighbor, scanning in
  // storage order and keeping the first minimum.
  std::size_t nearest(const Row& row) const;

  std::vector<Row> instances;            // training rows in original order
  std::vector<double> numeric_min, numeric_max;  // per attribute; 0/0 for nominal

 protected:
  void save_params(std::ostream& out) const override;
};

// ---------------------------------------------------------------------------
// Majority baseline (constant prediction of the training majority class)
// ---------------------------------------------------------------------------

class MajorityModel : public Model {
 public:
  static std::unique_ptr<MajorityModel> fit(const Dataset& d, std::size_t class_attr);

  Algorithm algorithm() const override { return Algorithm::Majority; }
  std::vector<double> predict_distribution(const Row& row) const override;

  std::vector<double> proportions;  // training class proportions

 protected:
  void save_params(std::ostream& out) const override;
};

}  // namespace tabml
