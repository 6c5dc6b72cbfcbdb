#include <fstream>

#include "tabml/classifiers.hpp"
#include "train_util.hpp"

namespace tabml {

namespace detail {

UsableRows usable_rows(const Dataset& d, std::size_t class_attr) {
  if (class_attr >= d.n_attributes())
    throw SchemaError("class attribute index " + std::to_string(class_attr) + " out of range");
  if (!d.attributes[class_attr].is_nominal())
    throw SchemaError("class attribute '" + d.attributes[class_attr].name + "' must be nominal");
  UsableRows u;
  u.rows.reserve(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    if (d.instances[r][class_attr].is_missing())
      ++u.skipped;
    else
      u.rows.push_back(r);
  }
  if (u.rows.empty()) throw Error("no training rows with a class value");
  return u;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace detail

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::NaiveBayes: return "naive_bayes";
    case Algorithm::J48: return "j48";
    case Algorithm::RandomForest: return "random_forest";
    case Algorithm::IB1: return "ib1";
    case Algorithm::Majority: return "majority";
  }
  return "naive_bayes";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "naive_bayes") return Algorithm::NaiveBayes;
  if (name == "j48") return Algorithm::J48;
  if (name == "random_forest") return Algorithm::RandomForest;
  if (name == "ib1") return Algorithm::IB1;
  if (name == "majority") return Algorithm::Majority;
  return std::nullopt;
}

const std::vector<std::string>& trainable_algorithm_names() {
  static const std::vector<std::string> names = {"naive_bayes", "j48", "random_forest", "ib1"};
  return names;
}

void Model::check_row(const Row& row) const {
  if (row.size() != schema_.size())
    throw SchemaError("row has " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(schema_.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i == class_attr_ || row[i].is_missing()) continue;
    const AttributeSpec& a = schema_[i];
    if (a.is_numeric()) {
      if (!row[i].is_numeric())
        throw SchemaError("attribute '" + a.name + "': expected a numeric value");
    } else {
      if (!row[i].is_nominal() || row[i].index() >= a.labels.size())
        throw SchemaError("attribute '" + a.name + "': value is not one of the declared labels");
    }
  }
}

std::size_t Model::predict(const Row& row) const {
  return detail::argmax_lowest(predict_distribution(row));
}

std::unique_ptr<MajorityModel> MajorityModel::fit(const Dataset& d, std::size_t class_attr) {
  auto u = detail::usable_rows(d, class_attr);
  auto m = std::make_unique<MajorityModel>();
  m->schema_ = d.attributes;
  m->class_attr_ = class_attr;
  m->skipped_ = u.skipped;
  m->proportions.assign(d.attributes[class_attr].labels.size(), 0.0);
  for (std::size_t r : u.rows) m->proportions[d.instances[r][class_attr].index()] += 1.0;
  for (double& p : m->proportions) p /= static_cast<double>(u.rows.size());
  return m;
}

std::vector<double> MajorityModel::predict_distribution(const Row& row) const {
  check_row(row);
  return proportions;
}

std::unique_ptr<Model> train(const ClassifierSpec& spec, const Dataset& d, std::size_t class_attr) {
  switch (spec.algorithm) {
    case Algorithm::NaiveBayes: return NaiveBayesModel::fit(d, class_attr);
    case Algorithm::J48: return TreeModel::fit(d, class_attr, spec.j48);
    case Algorithm::RandomForest: return ForestModel::fit(d, class_attr, spec.forest);
    case Algorithm::IB1: return IB1Model::fit(d, class_attr);
    case Algorithm::Majority: return MajorityModel::fit(d, class_attr);
  }
  throw Error("unknown algorithm");
}

void Model::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file '" + path + "' for writing");
  save(out);
  if (!out) throw Error("write to '" + path + "' failed");
}

std::unique_ptr<Model> Model::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path + "'");
  return load(in);
}

}  // namespace tabml
