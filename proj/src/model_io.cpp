#include <ostream>
#include <sstream>

#include "line_io.hpp"
#include "tabml/classifiers.hpp"
#include "tabml/textutil.hpp"

namespace tabml {

namespace {

constexpr const char* kModelMagic = "tabml-model 1";

using detail::LineIn;
using detail::read_double_tok;

void write_counts(std::ostream& out, const std::vector<double>& v) {
  for (double c : v) out << " " << format_double(c);
}

std::vector<double> read_doubles(std::istringstream& in, LineIn& r, std::size_t n, const char* what) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(read_double_tok(in, r, what));
  return out;
}

void save_tree(std::ostream& out, const TreeNode& n) {
  if (n.is_leaf()) {
    out << "leaf " << n.predicted << " counts";
    write_counts(out, n.class_counts);
    out << "\n";
    return;
  }
  out << "split " << n.attr << " " << (n.numeric_split ? "numeric" : "nominal") << " "
      << format_double(n.threshold) << " " << n.predicted << " counts";
  write_counts(out, n.class_counts);
  out << " weights";
  write_counts(out, n.child_weights);
  out << "\n";
  for (const auto& c : n.children) save_tree(out, *c);
}

std::unique_ptr<TreeNode> load_tree(LineIn& r, const std::vector<AttributeSpec>& schema,
                                    std::size_t n_classes) {
  std::istringstream line(r.next());
  std::string kind;
  line >> kind;
  auto node = std::make_unique<TreeNode>();
  std::string word;
  if (kind == "leaf") {
    if (!(line >> node->predicted >> word) || word != "counts") r.fail("malformed leaf line");
    node->class_counts = read_doubles(line, r, n_classes, "count");
    return node;
  }
  if (kind != "split") r.fail("expected 'leaf' or 'split'");
  std::string split_kind;
  if (!(line >> node->attr >> split_kind)) r.fail("malformed split line");
  if (node->attr < 0 || static_cast<std::size_t>(node->attr) >= schema.size())
    r.fail("split attribute out of range");
  node->numeric_split = split_kind == "numeric";
  if (!node->numeric_split && split_kind != "nominal") r.fail("unknown split kind");
  node->threshold = read_double_tok(line, r, "threshold");
  if (!(line >> node->predicted >> word) || word != "counts") r.fail("malformed split line");
  node->class_counts = read_doubles(line, r, n_classes, "count");
  if (!(line >> word) || word != "weights") r.fail("malformed split line");
  const std::size_t n_children =
      node->numeric_split ? 2 : schema[static_cast<std::size_t>(node->attr)].labels.size();
  node->child_weights = read_doubles(line, r, n_children, "weight");
  node->children.reserve(n_children);
  for (std::size_t i = 0; i < n_children; ++i)
    node->children.push_back(load_tree(r, schema, n_classes));
  return node;
}

void save_instances(std::ostream& out, const std::vector<Row>& rows,
                    const std::vector<AttributeSpec>& schema) {
  out << "instances " << rows.size() << "\n";
  for (const Row& row : rows) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (a) out << " ";
      if (row[a].is_missing())
        out << "?";
      else if (schema[a].is_numeric())
        out << format_double(row[a].number());
      else
        out << row[a].index();
    }
    out << "\n";
  }
}

}  // namespace

void Model::save(std::ostream& out) const {
  out << kModelMagic << "\n";
  out << "algorithm " << algorithm_name(algorithm()) << "\n";
  out << "class " << class_attr_ << "\n";
  out << "skipped " << skipped_ << "\n";
  detail::write_schema_block(out, schema_);
  save_params(out);
  out << "end\n";
}

void NaiveBayesModel::save_params(std::ostream& out) const {
  out << "priors " << priors.size();
  write_counts(out, priors);
  out << "\n";
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (a == class_attr_) continue;
    if (schema_[a].is_nominal()) {
      out << "attr " << a << " nominal\n";
      const NominalTable& t = nominal[a];
      for (std::size_t c = 0; c < priors.size(); ++c) {
        out << format_double(t.class_totals[c]);
        write_counts(out, t.counts[c]);
        out << "\n";
      }
    } else {
      out << "attr " << a << " numeric\n";
      for (const Gaussian& g : gauss[a])
        out << format_double(g.n) << " " << format_double(g.mean) << " " << format_double(g.var)
            << "\n";
    }
  }
}

void TreeModel::save_params(std::ostream& out) const {
  out << "params " << format_double(params.confidence) << " " << format_double(params.min_leaf)
      << " " << (params.subtree_raising ? 1 : 0) << " " << (params.prune ? 1 : 0) << "\n";
  save_tree(out, *root_);
}

void ForestModel::save_params(std::ostream& out) const {
  out << "forest " << params.n_trees << " " << params.features_per_split << " " << params.seed
      << "\n";
  for (const auto& t : trees_) save_tree(out, *t);
}

void IB1Model::save_params(std::ostream& out) const {
  for (std::size_t a = 0; a < schema_.size(); ++a)
    if (schema_[a].is_numeric())
      out << "range " << a << " " << format_double(numeric_min[a]) << " "
          << format_double(numeric_max[a]) << "\n";
  save_instances(out, instances, schema_);
}

void MajorityModel::save_params(std::ostream& out) const {
  out << "proportions " << proportions.size();
  write_counts(out, proportions);
  out << "\n";
}

std::unique_ptr<Model> load_model_params(std::istream& in) {
  LineIn r{in};
  if (r.next() != kModelMagic) r.fail("not a tabml model file");

  std::string word, algo_name;
  {
    std::istringstream line(r.next());
    if (!(line >> word >> algo_name) || word != "algorithm") r.fail("expected 'algorithm <name>'");
  }
  auto algo = algorithm_from_name(algo_name);
  if (!algo) r.fail("unknown algorithm '" + algo_name + "'");

  std::size_t class_attr = 0, skipped = 0;
  {
    std::istringstream line(r.next());
    if (!(line >> word >> class_attr) || word != "class") r.fail("expected 'class <index>'");
  }
  {
    std::istringstream line(r.next());
    if (!(line >> word >> skipped) || word != "skipped") r.fail("expected 'skipped <n>'");
  }
  std::vector<AttributeSpec> schema = detail::read_schema_block(r);
  if (class_attr >= schema.size() || !schema[class_attr].is_nominal())
    r.fail("class attribute is invalid for the stored schema");
  const std::size_t n_classes = schema[class_attr].labels.size();

  std::unique_ptr<Model> model;
  switch (*algo) {
    case Algorithm::NaiveBayes: {
      auto m = std::make_unique<NaiveBayesModel>();
      {
        std::istringstream line(r.next());
        std::size_t n = 0;
        if (!(line >> word >> n) || word != "priors" || n != n_classes)
          r.fail("expected 'priors <n_classes> ...'");
        m->priors = read_doubles(line, r, n_classes, "prior");
      }
      m->nominal.resize(schema.size());
      m->gauss.resize(schema.size());
      for (std::size_t i = 0; i + 1 < schema.size(); ++i) {
        std::istringstream line(r.next());
        std::size_t a = 0;
        std::string kind;
        if (!(line >> word >> a >> kind) || word != "attr" || a >= schema.size())
          r.fail("expected 'attr <index> <kind>'");
        if (kind == "nominal") {
          NaiveBayesModel::NominalTable& t = m->nominal[a];
          t.counts.assign(n_classes, {});
          t.class_totals.assign(n_classes, 0.0);
          for (std::size_t c = 0; c < n_classes; ++c) {
            std::istringstream row(r.next());
            t.class_totals[c] = read_double_tok(row, r, "class total");
            t.counts[c] = read_doubles(row, r, schema[a].labels.size(), "count");
          }
        } else if (kind == "numeric") {
          auto& g = m->gauss[a];
          g.assign(n_classes, NaiveBayesModel::Gaussian{});
          for (std::size_t c = 0; c < n_classes; ++c) {
            std::istringstream row(r.next());
            g[c].n = read_double_tok(row, r, "count");
            g[c].mean = read_double_tok(row, r, "mean");
            g[c].var = read_double_tok(row, r, "variance");
          }
        } else {
          r.fail("unknown attribute kind '" + kind + "'");
        }
      }
      model = std::move(m);
      break;
    }
    case Algorithm::J48: {
      auto m = std::make_unique<TreeModel>();
      std::istringstream line(r.next());
      int raising = 0, prune = 0;
      if (!(line >> word) || word != "params") r.fail("expected 'params ...'");
      m->params.confidence = read_double_tok(line, r, "confidence");
      m->params.min_leaf = read_double_tok(line, r, "min_leaf");
      if (!(line >> raising >> prune)) r.fail("malformed params line");
      m->params.subtree_raising = raising != 0;
      m->params.prune = prune != 0;
      m->root_ = load_tree(r, schema, n_classes);
      model = std::move(m);
      break;
    }
    case Algorithm::RandomForest: {
      auto m = std::make_unique<ForestModel>();
      std::istringstream line(r.next());
      if (!(line >> word >> m->params.n_trees >> m->params.features_per_split >> m->params.seed) ||
          word != "forest")
        r.fail("expected 'forest <n_trees> <features_per_split> <seed>'");
      for (std::size_t t = 0; t < m->params.n_trees; ++t)
        m->trees_.push_back(load_tree(r, schema, n_classes));
      model = std::move(m);
      break;
    }
    case Algorithm::IB1: {
      auto m = std::make_unique<IB1Model>();
      m->numeric_min.assign(schema.size(), 0.0);
      m->numeric_max.assign(schema.size(), 0.0);
      for (std::size_t a = 0; a < schema.size(); ++a) {
        if (!schema[a].is_numeric()) continue;
        std::istringstream line(r.next());
        std::size_t idx = 0;
        if (!(line >> word >> idx) || word != "range" || idx != a)
          r.fail("expected 'range <attr> <min> <max>'");
        m->numeric_min[a] = read_double_tok(line, r, "min");
        m->numeric_max[a] = read_double_tok(line, r, "max");
      }
      std::size_t n_rows = 0;
      {
        std::istringstream line(r.next());
        if (!(line >> word >> n_rows) || word != "instances") r.fail("expected 'instances <n>'");
      }
      for (std::size_t i = 0; i < n_rows; ++i) {
        std::istringstream line(r.next());
        Row row;
        row.reserve(schema.size());
        for (std::size_t a = 0; a < schema.size(); ++a) {
          std::string tok;
          if (!(line >> tok)) r.fail("instance row is too short");
          if (tok == "?") {
            row.push_back(Value::missing());
          } else if (schema[a].is_numeric()) {
            auto v = parse_double(tok);
            if (!v) r.fail("invalid numeric cell '" + tok + "'");
            row.push_back(Value::numeric(*v));
          } else {
            auto v = parse_double(tok);
            if (!v || *v < 0 || static_cast<std::size_t>(*v) >= schema[a].labels.size())
              r.fail("invalid label index '" + tok + "'");
            row.push_back(Value::nominal(static_cast<std::size_t>(*v)));
          }
        }
        m->instances.push_back(std::move(row));
      }
      model = std::move(m);
      break;
    }
    case Algorithm::Majority: {
      auto m = std::make_unique<MajorityModel>();
      std::istringstream line(r.next());
      std::size_t n = 0;
      if (!(line >> word >> n) || word != "proportions" || n != n_classes)
        r.fail("expected 'proportions <n_classes> ...'");
      m->proportions = read_doubles(line, r, n_classes, "proportion");
      model = std::move(m);
      break;
    }
  }
  if (r.next() != "end") r.fail("expected 'end'");
  model->schema_ = std::move(schema);
  model->class_attr_ = class_attr;
  model->skipped_ = skipped;
  return model;
}

std::unique_ptr<Model> Model::load(std::istream& in) { return load_model_params(in); }

}  // namespace tabml
