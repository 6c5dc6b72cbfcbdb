#include <limits>

#include "tabml/classifiers.hpp"
#include "train_util.hpp"

namespace tabml {

std::unique_ptr<IB1Model> IB1Model::fit(const Dataset& d, std::size_t class_attr) {
  auto u = detail::usable_rows(d, class_attr);
  auto m = std::make_unique<IB1Model>();
  m->schema_ = d.attributes;
  m->class_attr_ = class_attr;
  m->skipped_ = u.skipped;
  m->instances.reserve(u.rows.size());
  for (std::size_t r : u.rows) m->instances.push_back(d.instances[r]);

  m->numeric_min.assign(d.n_attributes(), 0.0);
  m->numeric_max.assign(d.n_attributes(), 0.0);
  for (std::size_t a = 0; a < d.n_attributes(); ++a) {
    if (!d.attributes[a].is_numeric()) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Row& row : m->instances) {
      if (row[a].is_missing()) continue;
      lo = std::min(lo, row[a].number());
      hi = std::max(hi, row[a].number());
    }
    if (lo <= hi) {
      m->numeric_min[a] = lo;
      m->numeric_max[a] = hi;
    }
  }
  return m;
}

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

double IB1Model::squared_distance(const Row& row, std::size_t i) const {
  const Row& stored = instances[i];
  double sum = 0.0;
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (a == class_attr_) continue;
    const Value& x = row[a];
    const Value& y = stored[a];
    if (x.is_missing() || y.is_missing()) {
      sum += 1.0;
      continue;
    }
    if (schema_[a].is_numeric()) {
      const double width = numeric_max[a] - numeric_min[a];
      double nx = 0.0, ny = 0.0;
      if (width > 0.0) {
        nx = clamp01((x.number() - numeric_min[a]) / width);
        ny = clamp01((y.number() - numeric_min[a]) / width);
      }
      const double diff = nx - ny;
      sum += diff * diff;
    } else {
      if (x.index() != y.index()) sum += 1.0;
    }
  }
  return sum;
}

std::size_t IB1Model::nearest(const Row& row) const {
  check_row(row);
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Row& stored = instances[i];
    double sum = 0.0;
    bool abandoned = false;
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      if (a == class_attr_) continue;
      const Value& x = row[a];
      const Value& y = stored[a];
      if (x.is_missing() || y.is_missing()) {
        sum += 1.0;
      } else if (schema_[a].is_numeric()) {
        const double width = numeric_max[a] - numeric_min[a];
        if (width > 0.0) {
          const double diff = clamp01((x.number() - numeric_min[a]) / width) -
                              clamp01((y.number() - numeric_min[a]) / width);
          sum += diff * diff;
        }
      } else if (x.index() != y.index()) {
        sum += 1.0;
      }
      if (sum > best_dist) {  // cannot become the first minimum anymore
        abandoned = true;
        break;
      }
    }
    if (!abandoned && sum < best_dist) {
      best_dist = sum;
      best = i;
    }
  }
  return best;
}

std::vector<double> IB1Model::predict_distribution(const Row& row) const {
  std::vector<double> out(n_classes(), 0.0);
  out[instances[nearest(row)][class_attr_].index()] = 1.0;
  return out;
}

}  // namespace tabml
