#include <cmath>

#include "tabml/classifiers.hpp"
#include "train_util.hpp"

namespace tabml {

std::uint64_t ForestModel::tree_seed(std::uint64_t forest_seed, std::size_t tree) {
  return derive_seed(forest_seed, tree);
}

std::size_t ForestModel::effective_features_per_split() const {
  if (params.features_per_split > 0) return params.features_per_split;
  const std::size_t n_features = schema_.size() > 1 ? schema_.size() - 1 : 1;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n_features)) + 1.0)));
}

std::unique_ptr<ForestModel> ForestModel::fit(const Dataset& d, std::size_t class_attr,
                                              const ForestParams& p) {
  if (p.n_trees < 1) throw Error("random forest needs at least one tree");
  auto u = detail::usable_rows(d, class_attr);
  auto m = std::make_unique<ForestModel>();
  m->schema_ = d.attributes;
  m->class_attr_ = class_attr;
  m->skipped_ = u.skipped;
  m->params = p;

  const std::size_t n = u.rows.size();
  GrowOptions opt;
  opt.min_leaf = 1.0;
  opt.features_per_split = m->effective_features_per_split();

  m->trees_.reserve(p.n_trees);
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    Rng rng(tree_seed(p.seed, t));
    Dataset boot;
    boot.relation = d.relation;
    boot.attributes = d.attributes;
    boot.instances.reserve(n);
    for (std::size_t i = 0; i < n; ++i) boot.instances.push_back(d.instances[u.rows[rng.below(n)]]);
    m->trees_.push_back(grow_tree(boot, class_attr, opt, &rng));
  }
  return m;
}

std::vector<double> ForestModel::predict_distribution(const Row& row) const {
  check_row(row);
  std::vector<double> votes(n_classes(), 0.0);
  for (const auto& t : trees_) {
    const std::vector<double> dist = tree_distribution(*t, row, n_classes());
    votes[detail::argmax_lowest(dist)] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

}  // namespace tabml
