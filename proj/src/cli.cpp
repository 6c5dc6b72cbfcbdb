#include "tabml/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tabml/classifiers.hpp"
#include "tabml/eval.hpp"
#include "tabml/experiment_config.hpp"
#include "tabml/filters.hpp"
#include "tabml/synth.hpp"
#include "tabml/textutil.hpp"

namespace tabml {

namespace {

namespace fs = std::filesystem;

long percent_of(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return std::lround(100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open file '" + out_path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + out_path + "' failed");
}

std::vector<std::size_t> resolve_attrs(const Dataset& d, const std::string& spec) {
  std::vector<std::size_t> attrs;
  if (spec.empty()) {
    for (std::size_t a = 0; a < d.n_attributes(); ++a)
      if (d.attributes[a].is_numeric()) attrs.push_back(a);
    if (attrs.empty()) throw SchemaError("dataset has no numeric attributes to discretize");
  } else {
    for (const std::string& name : expand_attr_spec(spec)) attrs.push_back(d.attribute_index(name));
  }
  return attrs;
}

std::size_t resolve_class(const Dataset& d, const std::string& name) {
  if (name.empty()) return d.n_attributes() - 1;
  return d.attribute_index(name);
}

// Everything except the class column must match the training schema; the
// class column only has to keep its name so predictions stay meaningful.
void check_predict_schema(const Model& m, const Dataset& d) {
  if (d.n_attributes() != m.attributes().size())
    throw SchemaError("data has " + std::to_string(d.n_attributes()) + " attributes, model has " +
                      std::to_string(m.attributes().size()));
  for (std::size_t a = 0; a < d.n_attributes(); ++a) {
    if (a == m.class_attr()) {
      if (d.attributes[a].name != m.class_spec().name)
        throw SchemaError("attribute '" + d.attributes[a].name + "': expected the class attribute '" +
                          m.class_spec().name + "'");
      continue;
    }
    if (!(d.attributes[a] == m.attributes()[a]))
      throw SchemaError("attribute '" + d.attributes[a].name + "' does not match the model schema");
  }
}

struct ExperimentArgs {
  std::string config_path;
  std::string builtin;
  std::string data_dir;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t runs = 0;
  std::size_t threads = 0;
};

int cmd_experiment(const ExperimentArgs& args) {
  std::string text, filename;
  fs::path base_dir = ".";
  if (!args.builtin.empty()) {
    text = builtin_config(args.builtin);
    filename = "builtin:" + args.builtin;
  } else if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw Error("cannot open config '" + args.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    filename = args.config_path;
    base_dir = fs::path(args.config_path).parent_path();
    if (base_dir.empty()) base_dir = ".";
  } else {
    throw Error("experiment needs a config file or --builtin name");
  }
  if (!args.data_dir.empty()) base_dir = args.data_dir;

  ExperimentConfig cfg = parse_experiment_config(text, filename);
  if (!args.format.empty()) {
    auto f = format_from_name(args.format);
    if (!f) throw Error("unknown format '" + args.format + "' (plain, markdown, csv)");
    cfg.format = *f;
  }
  if (args.seed_set) cfg.seed = args.seed;
  if (args.runs > 0) cfg.runs = args.runs;
  if (args.threads > 0) cfg.threads = args.threads;

  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  if (!args.out_dir.empty()) fs::create_directories(args.out_dir);

  bool first = true;
  for (const DatasetRef& ds : cfg.datasets) {
    ExperimentSpec spec;
    spec.name = ds.name;
    spec.train = parse_arff_file(resolve(ds.train_path).string());
    spec.dev = parse_arff_file(resolve(ds.dev_path).string());
    spec.rows = cfg.rows;
    spec.classifiers = cfg.classifiers;
    spec.seed = cfg.seed;
    spec.runs = cfg.runs;
    spec.threads = cfg.threads;
    ResultTable table = run_experiment(spec);
    const std::string rendered = render_table(table, cfg.format);
    if (args.out_dir.empty()) {
      if (!first) std::cout << "\n";
      std::cout << rendered;
      first = false;
    } else {
      const fs::path table_path =
          fs::path(args.out_dir) / (ds.name + "." + format_extension(cfg.format));
      const fs::path detail_path = fs::path(args.out_dir) / (ds.name + ".jsonl");
      write_output(rendered, table_path.string());
      write_output(report_jsonl(table), detail_path.string());
      std::cout << "wrote " << table_path.string() << "\n";
      std::cout << "wrote " << detail_path.string() << "\n";
    }
  }
  return 0;
}

}  // namespace

std::string inspect_text(const Dataset& d) {
  std::ostringstream out;
  out << "Relation: " << d.relation << "\n";
  out << "Instances: " << d.n_rows() << "\tAttributes: " << d.n_attributes() << "\n";
  for (std::size_t a = 0; a < d.n_attributes(); ++a) {
    const AttributeSpec& spec = d.attributes[a];
    const ColumnStats s = column_stats(d, a);
    out << "\n";
    out << "Name: " << spec.name << "\tType: " << (spec.is_numeric() ? "Numeric" : "Nominal")
        << "\n";
    out << "Missing: " << s.missing << " (" << percent_of(s.missing, s.count) << "%)\tDistinct: "
        << s.distinct << "\n";
    out << "\tUnique: " << s.unique << " (" << percent_of(s.unique, s.count) << "%)\n";
    if (spec.is_numeric()) {
      if (s.mean) out << "Mean: " << format_double(*s.mean) << "\n";
    } else {
      out << "No.\tLabel\tCount\n";
      for (std::size_t l = 0; l < spec.labels.size(); ++l)
        out << (l + 1) << "\t" << quote_token(spec.labels[l]) << "\t" << s.label_counts[l] << "\n";
    }
  }
  return out.str();
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"tabular classification toolkit"};
  app.require_subcommand(1);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print per-attribute statistics of an ARFF file");
  std::string inspect_in, inspect_out;
  inspect->add_option("file", inspect_in, "ARFF file")->required();
  inspect->add_option("--out", inspect_out, "write to a file instead of stdout");

  // generate
  auto* generate = app.add_subcommand("generate", "write a seeded synthetic weather dataset");
  SyntheticConfig gen_cfg;
  std::string gen_out, gen_city = "generic", gen_coupling = "independent";
  generate->add_option("--rows", gen_cfg.n_rows, "number of instances")->capture_default_str();
  generate->add_option("--seed", gen_cfg.seed, "generator seed")->capture_default_str();
  generate->add_option("--missing-rate", gen_cfg.missing_rate, "chance a feature cell is missing")
      ->capture_default_str();
  generate->add_option("--coupling", gen_coupling, "independent or weather_coupled")
      ->capture_default_str();
  generate->add_option("--city", gen_city, "brisbane, adelaide, perth, hobart, or generic")
      ->capture_default_str();
  generate->add_option("--out", gen_out, "output ARFF path (stdout when omitted)");

  // filter
  auto* filter = app.add_subcommand("filter", "fit or apply a dataset filter");
  std::string flt_in, flt_fit, flt_apply, flt_attrs, flt_class, flt_scheme = "weekday_weekend";
  std::string flt_model_out, flt_out;
  std::size_t flt_bins = 10;
  filter->add_option("file", flt_in, "input ARFF file")->required();
  filter->add_option("--fit", flt_fit, "impute, equal-width, supervised, or remap");
  filter->add_option("--apply", flt_apply, "apply a saved filter model");
  filter->add_option("--bins", flt_bins, "bin count for equal-width")->capture_default_str();
  filter->add_option("--attrs", flt_attrs, "attributes (e.g. F1-F20 or F1+F4); default: all numeric");
  filter->add_option("--class", flt_class, "class attribute (default: last)");
  filter->add_option("--scheme", flt_scheme, "remap scheme")->capture_default_str();
  filter->add_option("--model-out", flt_model_out, "save the fitted filter here");
  filter->add_option("--out", flt_out, "transformed ARFF path (stdout when omitted)");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a classifier and save the model");
  std::string trn_in, trn_algo, trn_class, trn_model_out;
  ClassifierSpec trn_spec;
  bool trn_no_raising = false;
  train_cmd->add_option("file", trn_in, "training ARFF file")->required();
  train_cmd->add_option("--algo", trn_algo, "naive_bayes, j48, random_forest, or ib1")->required();
  train_cmd->add_option("--class", trn_class, "class attribute (default: last)");
  train_cmd->add_option("--model-out", trn_model_out, "model output path")->required();
  train_cmd->add_option("--confidence", trn_spec.j48.confidence, "j48 pruning confidence")
      ->capture_default_str();
  train_cmd->add_option("--min-leaf", trn_spec.j48.min_leaf, "j48 minimum child weight")
      ->capture_default_str();
  train_cmd->add_flag("--no-subtree-raising", trn_no_raising, "disable j48 subtree raising");
  train_cmd->add_option("--trees", trn_spec.forest.n_trees, "random forest size")
      ->capture_default_str();
  train_cmd->add_option("--features-per-split", trn_spec.forest.features_per_split,
                        "random forest features per node (0 = auto)")
      ->capture_default_str();
  train_cmd->add_option("--seed", trn_spec.forest.seed, "random forest seed")
      ->capture_default_str();

  // predict
  auto* predict = app.add_subcommand("predict", "predict class labels with a saved model");
  std::string prd_in, prd_model, prd_out;
  bool prd_dist = false;
  predict->add_option("file", prd_in, "ARFF file to predict")->required();
  predict->add_option("--model", prd_model, "model file")->required();
  predict->add_flag("--distribution", prd_dist, "also print the class distribution");
  predict->add_option("--out", prd_out, "write predictions to a file");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment grid from a config");
  ExperimentArgs exp_args;
  experiment->add_option("config", exp_args.config_path, "experiment config file");
  experiment->add_option("--builtin", exp_args.builtin, "resultset1 or resultset2");
  experiment->add_option("--data-dir", exp_args.data_dir, "directory for relative data paths");
  experiment->add_option("--out-dir", exp_args.out_dir, "write one table (+ .jsonl) per dataset");
  experiment->add_option("--format", exp_args.format, "plain, markdown, or csv");
  experiment->add_option("--seed", exp_args.seed, "experiment seed")
      ->each([&](const std::string&) { exp_args.seed_set = true; });
  experiment->add_option("--runs", exp_args.runs, "repeat runs per cell (mean accuracy)");
  experiment->add_option("--threads", exp_args.threads, "worker threads for grid cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(inspect)) {
      write_output(inspect_text(parse_arff_file(inspect_in)), inspect_out);
      return 0;
    }

    if (app.got_subcommand(generate)) {
      auto coupling = coupling_from_name(gen_coupling);
      if (!coupling)
        throw Error("unknown coupling '" + gen_coupling + "' (independent, weather_coupled)");
      auto city = city_params(gen_city);
      if (!city)
        throw Error("unknown city '" + gen_city + "' (brisbane, adelaide, perth, hobart, generic)");
      gen_cfg.coupling = *coupling;
      gen_cfg.city = *city;
      write_output(write_arff(generate_synthetic(gen_cfg)), gen_out);
      return 0;
    }

    if (app.got_subcommand(filter)) {
      const Dataset d = parse_arff_file(flt_in);
      if (flt_fit.empty() == flt_apply.empty())
        throw Error("filter needs exactly one of --fit or --apply");
      FilterModel model = [&]() -> FilterModel {
        if (!flt_apply.empty()) return load_filter_file(flt_apply);
        if (flt_fit == "impute") return fit_imputation(d);
        if (flt_fit == "equal-width") return fit_equal_width(d, resolve_attrs(d, flt_attrs), flt_bins);
        if (flt_fit == "supervised")
          return fit_supervised_mdl(d, resolve_attrs(d, flt_attrs), resolve_class(d, flt_class));
        if (flt_fit == "remap") {
          auto scheme = scheme_from_name(flt_scheme);
          if (!scheme)
            throw Error("unknown scheme '" + flt_scheme +
                        "' (seven_day, weekday_sat_sun, weekday_weekend)");
          return make_class_remap(d, resolve_class(d, flt_class), *scheme);
        }
        throw Error("unknown filter type '" + flt_fit +
                    "' (impute, equal-width, supervised, remap)");
      }();
      if (!flt_model_out.empty()) write_output(save_filter(model), flt_model_out);
      write_output(write_arff(apply_filter(d, model)), flt_out);
      return 0;
    }

    if (app.got_subcommand(train_cmd)) {
      auto algo = algorithm_from_name(trn_algo);
      if (!algo || *algo == Algorithm::Majority) {
        std::string valid;
        for (const std::string& v : trainable_algorithm_names())
          valid += (valid.empty() ? "" : ", ") + v;
        throw Error("unknown algorithm '" + trn_algo + "' (valid names: " + valid + ")");
      }
      trn_spec.algorithm = *algo;
      trn_spec.j48.subtree_raising = !trn_no_raising;
      const Dataset d = parse_arff_file(trn_in);
      const std::unique_ptr<Model> model = train(trn_spec, d, resolve_class(d, trn_class));
      model->save_file(trn_model_out);
      if (model->skipped_missing_class() > 0)
        std::cerr << "skipped " << model->skipped_missing_class()
                  << " training rows with a missing class value\n";
      return 0;
    }

    if (app.got_subcommand(predict)) {
      const std::unique_ptr<Model> model = Model::load_file(prd_model);
      const Dataset d = parse_arff_file(prd_in);
      check_predict_schema(*model, d);
      std::ostringstream out;
      for (const Row& row : d.instances) {
        if (prd_dist) {
          const std::vector<double> dist = model->predict_distribution(row);
          std::size_t best = 0;
          for (std::size_t c = 1; c < dist.size(); ++c)
            if (dist[c] > dist[best]) best = c;
          out << model->class_spec().labels[best];
          for (double p : dist) out << "\t" << format_double(p);
        } else {
          out << model->class_spec().labels[model->predict(row)];
        }
        out << "\n";
      }
      write_output(out.str(), prd_out);
      return 0;
    }

    if (app.got_subcommand(experiment)) return cmd_experiment(exp_args);

    throw Error("no subcommand");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("tabml");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tabml
