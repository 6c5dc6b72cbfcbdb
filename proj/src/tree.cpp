#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "tabml/classifiers.hpp"
#include "train_util.hpp"

namespace tabml {

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c->node_count();
  return n;
}

std::size_t TreeNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c->depth() + 1);
  return d;
}

std::unique_ptr<TreeNode> TreeNode::clone() const {
  auto out = std::make_unique<TreeNode>();
  out->attr = attr;
  out->numeric_split = numeric_split;
  out->threshold = threshold;
  out->child_weights = child_weights;
  out->class_counts = class_counts;
  out->predicted = predicted;
  out->children.reserve(children.size());
  for (const auto& c : children) out->children.push_back(c->clone());
  return out;
}

namespace {

struct Inst {
  std::uint32_t row;
  double weight;
};

double entropy_bits(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts)
    if (c > 0.0) s += c * std::log2(c);
  return std::log2(total) - s / total;
}

struct Partition {
  std::vector<std::vector<Inst>> parts;
  std::vector<double> weights;
};

// Routes instances through a split. Rows whose split value is missing are
// sharded across children in proportion to the known-value child weights.
Partition partition_instances(const Dataset& d, int attr, bool numeric_split, double threshold,
                              std::size_t n_children, const std::vector<Inst>& insts) {
  Partition p;
  p.parts.resize(n_children);
  p.weights.assign(n_children, 0.0);
  std::vector<Inst> missing;
  double known_total = 0.0;
  std::vector<double> known(n_children, 0.0);
  for (const Inst& in : insts) {
    const Value& v = d.instances[in.row][static_cast<std::size_t>(attr)];
    if (v.is_missing()) {
      missing.push_back(in);
      continue;
    }
    const std::size_t idx =
        numeric_split ? (v.number() <= threshold ? 0 : 1) : v.index();
    p.parts[idx].push_back(in);
    known[idx] += in.weight;
    known_total += in.weight;
  }
  for (std::size_t i = 0; i < n_children; ++i) p.weights[i] = known[i];
  if (!missing.empty() && known_total > 0.0) {
    for (const Inst& in : missing) {
      for (std::size_t i = 0; i < n_children; ++i) {
        if (known[i] <= 0.0) continue;
        const double w = in.weight * known[i] / known_total;
        p.parts[i].push_back({in.row, w});
        p.weights[i] += w;
      }
    }
  }
  return p;
}

struct SplitChoice {
  int attr = -1;
  bool numeric = false;
  double threshold = 0.0;
  double ratio = -std::numeric_limits<double>::infinity();
};

class Grower {
 public:
  Grower(const Dataset& d, std::size_t class_attr, const GrowOptions& opt, Rng* rng)
      : d_(d), class_attr_(class_attr), opt_(opt), rng_(rng),
        n_classes_(d.attributes[class_attr].labels.size()) {
    for (std::size_t a = 0; a < d.n_attributes(); ++a)
      if (a != class_attr) features_.push_back(a);
  }

  std::unique_ptr<TreeNode> grow(std::vector<Inst>&& insts) {
    auto node = std::make_unique<TreeNode>();
    node->class_counts.assign(n_classes_, 0.0);
    double total = 0.0;
    for (const Inst& in : insts) {
      node->class_counts[d_.instances[in.row][class_attr_].index()] += in.weight;
      total += in.weight;
    }
    node->predicted = detail::argmax_lowest(node->class_counts);

    const double max_count = node->class_counts[node->predicted];
    if (total - max_count <= 1e-12) return node;             // pure
    if (total < 2.0 * opt_.min_leaf) return node;            // too small to split

    SplitChoice best = choose_split(insts, total);
    if (best.attr < 0) return node;

    node->attr = best.attr;
    node->numeric_split = best.numeric;
    node->threshold = best.threshold;
    const std::size_t n_children =
        best.numeric ? 2 : d_.attributes[static_cast<std::size_t>(best.attr)].labels.size();
    Partition p = partition_instances(d_, best.attr, best.numeric, best.threshold, n_children, insts);
    insts.clear();
    insts.shrink_to_fit();
    node->child_weights = p.weights;
    node->children.reserve(n_children);
    for (std::size_t i = 0; i < n_children; ++i) node->children.push_back(grow(std::move(p.parts[i])));
    return node;
  }

 private:
  SplitChoice choose_split(const std::vector<Inst>& insts, double total_weight) {
    std::vector<std::size_t> cand;
    if (opt_.features_per_split > 0 && opt_.features_per_split < features_.size() && rng_) {
      std::vector<std::size_t> pool(features_);
      for (std::size_t i = 0; i < opt_.features_per_split; ++i) {
        const std::size_t j = i + rng_->below(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      cand.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(opt_.features_per_split));
      std::sort(cand.begin(), cand.end());  // ascending, so ratio ties pick the lowest attribute
    } else {
      cand = features_;
    }

    SplitChoice best;
    for (std::size_t a : cand) {
      if (d_.attributes[a].is_nominal())
        eval_nominal(a, insts, total_weight, best);
      else
        eval_numeric(a, insts, total_weight, best);
    }
    return best;
  }

  // Split info over child weights plus (when present) the missing bag.
  static double split_info(const std::vector<double>& child_weights, double missing_weight,
                           double total) {
    double s = 0.0;
    for (double w : child_weights)
      if (w > 0.0) s += w * std::log2(w);
    if (missing_weight > 0.0) s += missing_weight * std::log2(missing_weight);
    return std::log2(total) - s / total;
  }

  void eval_nominal(std::size_t attr, const std::vector<Inst>& insts, double total_weight,
                    SplitChoice& best) {
    const std::size_t n_labels = d_.attributes[attr].labels.size();
    std::vector<std::vector<double>> bags(n_labels, std::vector<double>(n_classes_, 0.0));
    std::vector<double> bag_weight(n_labels, 0.0);
    std::vector<double> known_counts(n_classes_, 0.0);
    double known = 0.0;
    for (const Inst& in : insts) {
      const Value& v = d_.instances[in.row][attr];
      if (v.is_missing()) continue;
      const std::size_t cls = d_.instances[in.row][class_attr_].index();
      bags[v.index()][cls] += in.weight;
      bag_weight[v.index()] += in.weight;
      known_counts[cls] += in.weight;
      known += in.weight;
    }
    if (known <= 0.0) return;
    for (double w : bag_weight)
      if (w < opt_.min_leaf) return;  // every child must carry min_leaf weight

    double h_split = 0.0;
    for (std::size_t l = 0; l < n_labels; ++l)
      h_split += bag_weight[l] * entropy_bits(bags[l], bag_weight[l]);
    h_split /= known;
    const double gain = (known / total_weight) * (entropy_bits(known_counts, known) - h_split);
    if (gain <= opt_.min_gain) return;
    const double si = split_info(bag_weight, total_weight - known, total_weight);
    if (si <= 0.0) return;
    const double ratio = gain / si;
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.attr = static_cast<int>(attr);
      best.numeric = false;
    }
  }

  void eval_numeric(std::size_t attr, const std::vector<Inst>& insts, double total_weight,
                    SplitChoice& best) {
    struct VW {
      double value;
      double weight;
      std::size_t cls;
    };
    std::vector<VW> known;
    known.reserve(insts.size());
    double known_weight = 0.0;
    std::vector<double> known_counts(n_classes_, 0.0);
    for (const Inst& in : insts) {
      const Value& v = d_.instances[in.row][attr];
      if (v.is_missing()) continue;
      const std::size_t cls = d_.instances[in.row][class_attr_].index();
      known.push_back({v.number(), in.weight, cls});
      known_weight += in.weight;
      known_counts[cls] += in.weight;
    }
    if (known.empty()) return;
    std::sort(known.begin(), known.end(), [](const VW& x, const VW& y) { return x.value < y.value; });

    const double h_known = entropy_bits(known_counts, known_weight);
    std::vector<double> left(n_classes_, 0.0);
    std::vector<double> right(known_counts);
    double w_left = 0.0;
    for (std::size_t i = 0; i + 1 < known.size(); ++i) {
      left[known[i].cls] += known[i].weight;
      right[known[i].cls] -= known[i].weight;
      w_left += known[i].weight;
      if (known[i].value >= known[i + 1].value) continue;
      const double w_right = known_weight - w_left;
      if (w_left < opt_.min_leaf || w_right < opt_.min_leaf) continue;
      const double h =
          (w_left * entropy_bits(left, w_left) + w_right * entropy_bits(right, w_right)) /
          known_weight;
      const double gain = (known_weight / total_weight) * (h_known - h);
      if (gain <= opt_.min_gain) continue;
      const double si = split_info({w_left, w_right}, total_weight - known_weight, total_weight);
      if (si <= 0.0) continue;
      const double ratio = gain / si;
      if (ratio > best.ratio) {
        best.ratio = ratio;
        best.attr = static_cast<int>(attr);
        best.numeric = true;
        best.threshold = (known[i].value + known[i + 1].value) / 2.0;
      }
    }
  }

  const Dataset& d_;
  std::size_t class_attr_;
  GrowOptions opt_;
  Rng* rng_;
  std::size_t n_classes_;
  std::vector<std::size_t> features_;
};

std::vector<Inst> initial_instances(const Dataset& d, std::size_t class_attr) {
  auto u = detail::usable_rows(d, class_attr);
  std::vector<Inst> insts;
  insts.reserve(u.rows.size());
  for (std::size_t r : u.rows) insts.push_back({static_cast<std::uint32_t>(r), 1.0});
  return insts;
}

// ---------------------------------------------------------------------------
// Pruning
// ---------------------------------------------------------------------------

class Pruner {
 public:
  Pruner(const Dataset& d, std::size_t class_attr, const J48Params& hp)
      : d_(d), class_attr_(class_attr), hp_(hp) {}

  void prune(TreeNode& node, const std::vector<Inst>& insts) {
    if (node.is_leaf()) return;
    Partition p = route(node, insts);
    for (std::size_t i = 0; i < node.children.size(); ++i) prune(*node.children[i], p.parts[i]);

    const double err_tree = subtree_errors(node);
    const double err_leaf = leaf_errors(node);

    std::unique_ptr<TreeNode> raised;
    double err_raised = std::numeric_limits<double>::infinity();
    if (hp_.subtree_raising) {
      const std::size_t largest = detail::argmax_lowest(node.child_weights);
      if (!node.children[largest]->is_leaf()) {
        raised = node.children[largest]->clone();
        refit(*raised, insts, node.predicted);
        prune(*raised, insts);
        err_raised = subtree_errors(*raised);
      }
    }

    if (err_leaf <= err_tree && err_leaf <= err_raised) {
      node.attr = -1;
      node.numeric_split = false;
      node.children.clear();
      node.child_weights.clear();
    } else if (raised && err_raised <= err_tree) {
      node = std::move(*raised);
    }
  }

 private:
  Partition route(const TreeNode& node, const std::vector<Inst>& insts) const {
    return partition_instances(d_, node.attr, node.numeric_split, node.threshold,
                               node.children.size(), insts);
  }

  double leaf_errors(const TreeNode& node) const {
    double total = 0.0;
    for (double c : node.class_counts) total += c;
    const double errs = total - node.class_counts[node.predicted];
    return errs + added_errors(total, errs, hp_.confidence);
  }

  double subtree_errors(const TreeNode& node) const {
    if (node.is_leaf()) return leaf_errors(node);
    double sum = 0.0;
    for (const auto& c : node.children) sum += subtree_errors(*c);
    return sum;
  }

  // Recomputes distributions and child weights as if the subtree had been
  // trained on `insts`. Structure is kept; nodes left with no weight keep
  // `fallback` as their prediction.
  void refit(TreeNode& node, const std::vector<Inst>& insts, std::size_t fallback) const {
    const std::size_t n_classes = d_.attributes[class_attr_].labels.size();
    node.class_counts.assign(n_classes, 0.0);
    double total = 0.0;
    for (const Inst& in : insts) {
      node.class_counts[d_.instances[in.row][class_attr_].index()] += in.weight;
      total += in.weight;
    }
    node.predicted = total > 0.0 ? detail::argmax_lowest(node.class_counts) : fallback;
    if (node.is_leaf()) return;
    Partition p = route(node, insts);
    node.child_weights = p.weights;
    for (std::size_t i = 0; i < node.children.size(); ++i)
      refit(*node.children[i], p.parts[i], node.predicted);
  }

  const Dataset& d_;
  std::size_t class_attr_;
  J48Params hp_;
};

void add_distribution(const TreeNode& node, const Row& row, double weight,
                      std::vector<double>& out) {
  if (node.is_leaf()) {
    double total = 0.0;
    for (double c : node.class_counts) total += c;
    if (total > 0.0) {
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += weight * node.class_counts[c] / total;
    } else {
      out[node.predicted] += weight;
    }
    return;
  }
  const Value& v = row[static_cast<std::size_t>(node.attr)];
  if (v.is_missing()) {
    double total = 0.0;
    for (double w : node.child_weights) total += w;
    if (total <= 0.0) {
      out[node.predicted] += weight;
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i)
      if (node.child_weights[i] > 0.0)
        add_distribution(*node.children[i], row, weight * node.child_weights[i] / total, out);
    return;
  }
  const std::size_t idx = node.numeric_split ? (v.number() <= node.threshold ? 0 : 1) : v.index();
  add_distribution(*node.children[idx], row, weight, out);
}

}  // namespace

double added_errors(double total, double errors, double confidence) {
  if (total <= 0.0) return 0.0;
  if (confidence > 0.5) return 0.0;
  if (errors < 1.0) {
    const double base = total * (1.0 - std::pow(confidence, 1.0 / total));
    if (errors == 0.0) return base;
    return base + errors * (added_errors(total, 1.0, confidence) - base);
  }
  if (errors + 0.5 >= total) return std::max(total - errors, 0.0);
  static const boost::math::normal norm;
  const double z = boost::math::quantile(norm, 1.0 - confidence);
  const double f = (errors + 0.5) / total;
  const double r =
      (f + z * z / (2.0 * total) +
       z * std::sqrt(f / total - f * f / total + z * z / (4.0 * total * total))) /
      (1.0 + z * z / total);
  return r * total - errors;
}

std::vector<double> tree_distribution(const TreeNode& root, const Row& row,
                                      std::size_t n_classes) {
  std::vector<double> out(n_classes, 0.0);
  add_distribution(root, row, 1.0, out);
  return out;
}

std::unique_ptr<TreeNode> grow_tree(const Dataset& d, std::size_t class_attr,
                                    const GrowOptions& opt, Rng* rng) {
  Grower g(d, class_attr, opt, rng);
  return g.grow(initial_instances(d, class_attr));
}

void prune_tree(TreeNode& root, const Dataset& d, std::size_t class_attr, const J48Params& hp) {
  Pruner p(d, class_attr, hp);
  p.prune(root, initial_instances(d, class_attr));
}

std::unique_ptr<TreeModel> TreeModel::fit(const Dataset& d, std::size_t class_attr,
                                          const J48Params& hp) {
  auto u = detail::usable_rows(d, class_attr);
  auto m = std::make_unique<TreeModel>();
  m->schema_ = d.attributes;
  m->class_attr_ = class_attr;
  m->skipped_ = u.skipped;
  m->params = hp;
  GrowOptions opt;
  opt.min_leaf = hp.min_leaf;
  m->root_ = grow_tree(d, class_attr, opt);
  if (hp.prune) prune_tree(*m->root_, d, class_attr, hp);
  return m;
}

std::vector<double> TreeModel::predict_distribution(const Row& row) const {
  check_row(row);
  return tree_distribution(*root_, row, n_classes());
}

}  // namespace tabml
