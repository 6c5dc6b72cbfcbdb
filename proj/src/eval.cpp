#include "tabml/eval.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tabml/rng.hpp"
#include "train_util.hpp"

namespace tabml {

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

EvaluationReport evaluate(const Model& m, const Dataset& dev, std::size_t class_attr) {
  if (class_attr >= dev.n_attributes())
    throw SchemaError("class attribute index " + std::to_string(class_attr) + " out of range");
  const AttributeSpec& dev_class = dev.attributes[class_attr];
  const AttributeSpec& model_class = m.class_spec();
  if (class_attr != m.class_attr() || dev_class.name != model_class.name || !dev_class.is_nominal())
    throw SchemaError("dev class attribute does not match the model's class attribute");
  if (dev.n_attributes() != m.attributes().size())
    throw SchemaError("dev data has a different attribute count than the model");
  for (std::size_t a = 0; a < dev.n_attributes(); ++a)
    if (a != class_attr && !(dev.attributes[a] == m.attributes()[a]))
      throw SchemaError("attribute '" + dev.attributes[a].name + "' does not match the model");

  // Map dev class labels into model space; unmatched labels that occur in the
  // data get extension rows so the confusion matrix still sums to n_total.
  const std::size_t n_model = model_class.labels.size();
  std::vector<std::optional<std::size_t>> to_model(dev_class.labels.size());
  for (std::size_t i = 0; i < dev_class.labels.size(); ++i)
    for (std::size_t j = 0; j < n_model; ++j)
      if (dev_class.labels[i] == model_class.labels[j]) {
        to_model[i] = j;
        break;
      }

  EvaluationReport rep;
  rep.class_labels = model_class.labels;
  std::vector<std::optional<std::size_t>> extension(dev_class.labels.size());
  for (const Row& row : dev.instances) {
    const Value& v = row[class_attr];
    if (v.is_missing() || to_model[v.index()]) continue;
    if (!extension[v.index()]) {
      extension[v.index()] = rep.class_labels.size();
      rep.class_labels.push_back(dev_class.labels[v.index()]);
    }
  }

  const std::size_t dim = rep.class_labels.size();
  rep.confusion.assign(dim, std::vector<std::size_t>(dim, 0));
  for (const Row& row : dev.instances) {
    const Value& v = row[class_attr];
    if (v.is_missing()) {
      ++rep.n_skipped_missing_class;
      continue;
    }
    const std::size_t pred = m.predict(row);
    std::size_t truth;
    if (to_model[v.index()]) {
      truth = *to_model[v.index()];
    } else {
      truth = *extension[v.index()];
      ++rep.n_unseen_class;
    }
    ++rep.confusion[truth][pred];
    ++rep.n_total;
    if (pred == truth) ++rep.n_correct;
  }
  rep.accuracy = rep.n_total > 0
                     ? static_cast<double>(rep.n_correct) / static_cast<double>(rep.n_total)
                     : 0.0;

  rep.precision.assign(dim, 0.0);
  rep.recall.assign(dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      row_sum += rep.confusion[c][j];
      col_sum += rep.confusion[j][c];
    }
    if (col_sum > 0) rep.precision[c] = static_cast<double>(rep.confusion[c][c]) / col_sum;
    if (row_sum > 0) rep.recall[c] = static_cast<double>(rep.confusion[c][c]) / row_sum;
  }
  return rep;
}

std::unique_ptr<Model> majority_baseline(const Dataset& train, std::size_t class_attr) {
  return MajorityModel::fit(train, class_attr);
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

std::uint64_t cell_seed(std::uint64_t base, std::size_t row, std::size_t col, std::size_t run) {
  return derive_seed(derive_seed(derive_seed(base, row), col), run);
}

namespace {

struct PreparedRow {
  Dataset train;
  Dataset dev;
  std::size_t class_attr = 0;
};

std::vector<std::size_t> resolve_discretize_attrs(const Dataset& d, const DiscretizeStep& step,
                                                  std::size_t class_attr) {
  std::vector<std::size_t> attrs;
  if (step.attrs.empty()) {
    for (std::size_t a = 0; a < d.n_attributes(); ++a)
      if (a != class_attr && d.attributes[a].is_numeric()) attrs.push_back(a);
  } else {
    for (const std::string& name : step.attrs) {
      const std::size_t a = d.attribute_index(name);
      if (a == class_attr) continue;  // the class is never an input of its own filter
      attrs.push_back(a);
    }
  }
  return attrs;
}

// Fits the row's filter chain on train and applies it to train and dev:
// imputation (features only) -> class remap -> feature discretization ->
// class binning.
PreparedRow prepare_row(const ExperimentRow& row, const Dataset& train, const Dataset& dev) {
  PreparedRow out;
  out.train = train;
  out.dev = dev;
  out.class_attr = train.attribute_index(row.class_attr_name);

  if (row.impute) {
    ImputationModel m = fit_imputation(out.train);
    m.fill[out.class_attr] = std::nullopt;  // class cells stay as observed
    Dataset t = apply_imputation(out.train, m);
    Dataset v = apply_imputation(out.dev, m);
    out.train = std::move(t);
    out.dev = std::move(v);
  }
  if (row.remap) {
    ClassRemap r = make_class_remap(out.train, out.class_attr, *row.remap);
    Dataset t = apply_class_remap(out.train, r);
    Dataset v = apply_class_remap(out.dev, r);
    out.train = std::move(t);
    out.dev = std::move(v);
  }
  if (row.discretize) {
    const std::vector<std::size_t> attrs =
        resolve_discretize_attrs(out.train, *row.discretize, out.class_attr);
    if (!attrs.empty()) {
      DiscretizationModel m =
          row.discretize->mode == DiscretizeMode::EqualWidth
              ? fit_equal_width(out.train, attrs, row.discretize->bins)
              : fit_supervised_mdl(out.train, attrs, out.class_attr);
      Dataset t = apply_discretization(out.train, m);
      Dataset v = apply_discretization(out.dev, m);
      out.train = std::move(t);
      out.dev = std::move(v);
    }
  }
  if (row.class_bins > 0) {
    if (!out.train.attributes[out.class_attr].is_numeric())
      throw SchemaError("class_bins set but class attribute '" + row.class_attr_name +
                        "' is not numeric");
    DiscretizationModel m = fit_equal_width(out.train, {out.class_attr}, row.class_bins);
    Dataset t = apply_discretization(out.train, m);
    Dataset v = apply_discretization(out.dev, m);
    out.train = std::move(t);
    out.dev = std::move(v);
  }
  return out;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  ResultTable table;
  table.title = spec.name;
  table.rows = spec.rows;
  for (const auto& [name, cs] : spec.classifiers) table.classifier_names.push_back(name);
  table.cells.assign(spec.rows.size(),
                     std::vector<ResultCell>(spec.classifiers.size(), ResultCell{}));

  struct Job {
    std::size_t row;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < spec.rows.size(); ++r)
    for (std::size_t k = 0; k < spec.runs; ++k) jobs.push_back({r, k});

  // run_accuracies indexed [row][col][run]; reports kept for run 0 only.
  for (auto& row : table.cells)
    for (auto& cell : row) cell.run_accuracies.assign(spec.runs, 0.0);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job job = jobs[j];
      const ExperimentRow& row = spec.rows[job.row];
      try {
        PreparedRow prep = prepare_row(row, spec.train, spec.dev);
        for (std::size_t c = 0; c < spec.classifiers.size(); ++c) {
          ClassifierSpec cs = spec.classifiers[c].second;
          cs.forest.seed = cell_seed(spec.seed, job.row, c, job.run);
          std::unique_ptr<Model> model = train(cs, prep.train, prep.class_attr);
          EvaluationReport rep = evaluate(*model, prep.dev, prep.class_attr);
          ResultCell& cell = table.cells[job.row][c];
          cell.run_accuracies[job.run] = rep.accuracy;
          if (job.run == 0) cell.report = std::move(rep);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty())
          first_error = "row " + std::to_string(job.row + 1) + " ('" + row.label +
                        "'): " + e.what();
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, spec.threads);
  if (n_threads == 1 || jobs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(n_threads, jobs.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw Error("experiment failed at " + first_error);

  for (auto& row : table.cells) {
    for (ResultCell& cell : row) {
      double sum = 0.0;
      for (double a : cell.run_accuracies) sum += a;
      cell.accuracy = sum / static_cast<double>(cell.run_accuracies.size());
      double var = 0.0;
      for (double a : cell.run_accuracies) var += (a - cell.accuracy) * (a - cell.accuracy);
      cell.stddev = std::sqrt(var / static_cast<double>(cell.run_accuracies.size()));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::optional<TableFormat> format_from_name(std::string_view name) {
  if (name == "plain") return TableFormat::Plain;
  if (name == "markdown") return TableFormat::Markdown;
  if (name == "csv") return TableFormat::Csv;
  return std::nullopt;
}

std::string format_extension(TableFormat f) {
  switch (f) {
    case TableFormat::Plain: return "txt";
    case TableFormat::Markdown: return "md";
    case TableFormat::Csv: return "csv";
  }
  return "txt";
}

namespace {

std::string percent(double accuracy) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << accuracy * 100.0 << "%";
  return out.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::vector<std::vector<std::string>> table_grid(const ResultTable& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Properties", "Class Attribute"};
  for (const std::string& c : t.classifier_names) header.push_back(c);
  grid.push_back(std::move(header));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<std::string> line;
    line.push_back(t.rows[r].label);
    line.push_back(t.rows[r].class_display.empty() ? t.rows[r].class_attr_name
                                                   : t.rows[r].class_display);
    for (const ResultCell& cell : t.cells[r]) line.push_back(percent(cell.accuracy));
    grid.push_back(std::move(line));
  }
  return grid;
}

}  // namespace

std::string render_table(const ResultTable& t, TableFormat f) {
  const auto grid = table_grid(t);
  std::string out;
  switch (f) {
    case TableFormat::Plain: {
      std::vector<std::size_t> width(grid[0].size(), 0);
      for (const auto& row : grid)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
      out = t.title + "\n";
      for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) out += "  ";
          out += row[c];
          if (c + 1 < row.size()) out.append(width[c] - row[c].size(), ' ');
        }
        out += "\n";
      }
      break;
    }
    case TableFormat::Markdown: {
      out = "### " + t.title + "\n\n";
      for (std::size_t r = 0; r < grid.size(); ++r) {
        out += "|";
        for (const std::string& cell : grid[r]) out += " " + cell + " |";
        out += "\n";
        if (r == 0) {
          out += "|";
          for (std::size_t c = 0; c < grid[0].size(); ++c) out += " --- |";
          out += "\n";
        }
      }
      break;
    }
    case TableFormat::Csv: {
      for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) out += ",";
          out += csv_field(row[c]);
        }
        out += "\r\n";
      }
      break;
    }
  }
  return out;
}

std::string report_jsonl(const ResultTable& t) {
  std::string out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.classifier_names.size(); ++c) {
      const ResultCell& cell = t.cells[r][c];
      nlohmann::json j;
      j["dataset"] = t.title;
      j["row"] = t.rows[r].label;
      j["class"] = t.rows[r].class_display.empty() ? t.rows[r].class_attr_name
                                                   : t.rows[r].class_display;
      j["classifier"] = t.classifier_names[c];
      j["accuracy"] = cell.accuracy;
      j["stddev"] = cell.stddev;
      j["runs"] = cell.run_accuracies;
      j["n_total"] = cell.report.n_total;
      j["n_correct"] = cell.report.n_correct;
      j["n_skipped_missing_class"] = cell.report.n_skipped_missing_class;
      j["n_unseen_class"] = cell.report.n_unseen_class;
      j["labels"] = cell.report.class_labels;
      j["confusion"] = cell.report.confusion;
      out += j.dump();
      out += "\n";
    }
  }
  return out;
}

}  // namespace tabml
