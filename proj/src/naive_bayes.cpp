#include <algorithm>
#include <cmath>

#include "tabml/classifiers.hpp"
#include "train_util.hpp"

namespace tabml {

std::unique_ptr<NaiveBayesModel> NaiveBayesModel::fit(const Dataset& d, std::size_t class_attr) {
  auto u = detail::usable_rows(d, class_attr);
  auto m = std::make_unique<NaiveBayesModel>();
  m->schema_ = d.attributes;
  m->class_attr_ = class_attr;
  m->skipped_ = u.skipped;

  const std::size_t n_classes = d.attributes[class_attr].labels.size();
  const std::size_t n_attrs = d.n_attributes();

  std::vector<double> class_counts(n_classes, 0.0);
  for (std::size_t r : u.rows) class_counts[d.instances[r][class_attr].index()] += 1.0;
  m->priors.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    m->priors[c] = (class_counts[c] + 1.0) /
                   (static_cast<double>(u.rows.size()) + static_cast<double>(n_classes));

  m->nominal.resize(n_attrs);
  m->gauss.resize(n_attrs);
  for (std::size_t a = 0; a < n_attrs; ++a) {
    if (a == class_attr) continue;
    const AttributeSpec& spec = d.attributes[a];
    if (spec.is_nominal()) {
      NominalTable& t = m->nominal[a];
      t.counts.assign(n_classes, std::vector<double>(spec.labels.size(), 0.0));
      t.class_totals.assign(n_classes, 0.0);
      for (std::size_t r : u.rows) {
        const Value& v = d.instances[r][a];
        if (v.is_missing()) continue;
        const std::size_t c = d.instances[r][class_attr].index();
        t.counts[c][v.index()] += 1.0;
        t.class_totals[c] += 1.0;
      }
    } else {
      auto& g = m->gauss[a];
      g.assign(n_classes, Gaussian{});
      for (std::size_t r : u.rows) {
        const Value& v = d.instances[r][a];
        if (v.is_missing()) continue;
        Gaussian& gc = g[d.instances[r][class_attr].index()];
        gc.n += 1.0;
        gc.mean += v.number();
      }
      for (Gaussian& gc : g) {
        if (gc.n > 0) gc.mean /= gc.n;
        gc.var = 0.0;
      }
      for (std::size_t r : u.rows) {
        const Value& v = d.instances[r][a];
        if (v.is_missing()) continue;
        Gaussian& gc = g[d.instances[r][class_attr].index()];
        const double dv = v.number() - gc.mean;
        gc.var += dv * dv;
      }
      // Sample variance with a floor; fewer than two observations get the floor.
      for (Gaussian& gc : g)
        gc.var = gc.n >= 2.0 ? std::max(gc.var / (gc.n - 1.0), kVarianceFloor) : kVarianceFloor;
    }
  }
  return m;
}

std::vector<double> NaiveBayesModel::log_scores(const Row& row) const {
  check_row(row);
  const std::size_t n_classes = priors.size();
  std::vector<double> score(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) score[c] = std::log(priors[c]);

  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (a == class_attr_ || row[a].is_missing()) continue;
    if (schema_[a].is_nominal()) {
      const NominalTable& t = nominal[a];
      const double n_labels = static_cast<double>(schema_[a].labels.size());
      const std::size_t v = row[a].index();
      for (std::size_t c = 0; c < n_classes; ++c)
        score[c] += std::log((t.counts[c][v] + 1.0) / (t.class_totals[c] + n_labels));
    } else {
      const double x = row[a].number();
      for (std::size_t c = 0; c < n_classes; ++c) {
        const Gaussian& g = gauss[a][c];
        if (g.n <= 0.0) continue;  // no evidence for this class; skip the factor
        const double dv = x - g.mean;
        score[c] += -0.5 * std::log(2.0 * M_PI * g.var) - dv * dv / (2.0 * g.var);
      }
    }
  }
  return score;
}

std::vector<double> NaiveBayesModel::predict_distribution(const Row& row) const {
  std::vector<double> score = log_scores(row);
  const double hi = *std::max_element(score.begin(), score.end());
  double sum = 0.0;
  for (double& s : score) {
    s = std::exp(s - hi);
    sum += s;
  }
  for (double& s : score) s /= sum;
  return score;
}

}  // namespace tabml
