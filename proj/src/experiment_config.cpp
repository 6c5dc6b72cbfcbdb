#include "tabml/experiment_config.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "tabml/textutil.hpp"

namespace tabml {

std::string classifier_display_name(Algorithm a) {
  switch (a) {
    case Algorithm::NaiveBayes: return "Naive Bayes Simple";
    case Algorithm::RandomForest: return "Random Forest";
    case Algorithm::J48: return "J48";
    case Algorithm::IB1: return "IB1";
    case Algorithm::Majority: return "Majority";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits on commas that sit outside parentheses.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

bool parse_size(const std::string& s, std::size_t& out) {
  if (s.empty()) return false;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  out = v;
  return true;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::vector<std::string> expand_attr_spec(const std::string& spec) {
  std::vector<std::string> names;
  std::string part;
  std::istringstream in(spec);
  while (std::getline(in, part, '+')) {
    part = trim(part);
    if (part.empty()) throw Error("empty attribute name in '" + spec + "'");
    // Range form: <prefix><a>-<prefix><b> with a shared alphabetic prefix.
    const std::size_t dash = part.find('-');
    bool expanded = false;
    if (dash != std::string::npos && dash > 0 && dash + 1 < part.size()) {
      const std::string lhs = part.substr(0, dash), rhs = part.substr(dash + 1);
      std::size_t lp = 0, rp = 0;
      while (lp < lhs.size() && !std::isdigit(static_cast<unsigned char>(lhs[lp]))) ++lp;
      while (rp < rhs.size() && !std::isdigit(static_cast<unsigned char>(rhs[rp]))) ++rp;
      std::size_t a = 0, b = 0;
      if (lp > 0 && lp < lhs.size() && rp < rhs.size() && lhs.substr(0, lp) == rhs.substr(0, rp) &&
          parse_size(lhs.substr(lp), a) && parse_size(rhs.substr(rp), b) && a <= b) {
        for (std::size_t i = a; i <= b; ++i) names.push_back(lhs.substr(0, lp) + std::to_string(i));
        expanded = true;
      }
    }
    if (!expanded) names.push_back(part);
  }
  if (names.empty()) throw Error("empty attribute list '" + spec + "'");
  return names;
}

namespace {

struct RowBuilder {
  ExperimentRow row;
  std::size_t line = 0;
  bool any = false;
};

void parse_filters(const std::string& value, ExperimentRow& row, const std::string& file,
                   std::size_t line_no) {
  for (const std::string& item : split_top_level(value)) {
    if (item.empty() || item == "none") continue;
    const std::size_t paren = item.find('(');
    const std::string head = trim(paren == std::string::npos ? item : item.substr(0, paren));
    std::map<std::string, std::string> args;
    if (paren != std::string::npos) {
      if (item.back() != ')') throw ConfigError(file, line_no, "missing ')' in '" + item + "'");
      const std::string inner = item.substr(paren + 1, item.size() - paren - 2);
      std::string piece;
      std::istringstream in(inner);
      while (std::getline(in, piece, ',')) {
        piece = trim(piece);
        if (piece.empty()) continue;
        const std::size_t eq = piece.find('=');
        if (eq == std::string::npos)
          throw ConfigError(file, line_no, "expected key=value in '" + item + "'");
        args[trim(piece.substr(0, eq))] = trim(piece.substr(eq + 1));
      }
    }
    if (head == "impute") {
      row.impute = true;
    } else if (head == "equal_width" || head == "supervised") {
      if (row.discretize)
        throw ConfigError(file, line_no, "only one discretization step per row");
      DiscretizeStep step;
      step.mode = head == "equal_width" ? DiscretizeMode::EqualWidth : DiscretizeMode::SupervisedMdl;
      if (head == "equal_width") {
        auto it = args.find("bins");
        if (it == args.end() || !parse_size(it->second, step.bins) || step.bins < 1)
          throw ConfigError(file, line_no, "equal_width needs bins=<k>");
        args.erase(it);
      }
      if (auto it = args.find("attrs"); it != args.end()) {
        step.attrs = expand_attr_spec(it->second);
        args.erase(it);
      }
      if (!args.empty())
        throw ConfigError(file, line_no, "unknown argument '" + args.begin()->first + "'");
      row.discretize = std::move(step);
    } else {
      throw ConfigError(file, line_no,
                        "unknown filter '" + head + "' (expected impute, equal_width, supervised)");
    }
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& filename) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;

  enum class Section { None, Experiment, Dataset, Row };
  Section section = Section::None;
  RowBuilder rb;
  bool classifiers_set = false;

  auto flush_row = [&]() {
    if (!rb.any) return;
    if (rb.row.label.empty()) throw ConfigError(filename, rb.line, "[row] needs a label");
    if (rb.row.class_attr_name.empty()) throw ConfigError(filename, rb.line, "[row] needs a class");
    if (rb.row.class_display.empty()) rb.row.class_display = rb.row.class_attr_name;
    cfg.rows.push_back(std::move(rb.row));
    rb = RowBuilder{};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(filename, line_no, "missing ']'");
      const std::string header = trim(line.substr(1, line.size() - 2));
      flush_row();
      if (header == "experiment") {
        section = Section::Experiment;
      } else if (header == "row") {
        section = Section::Row;
        rb.any = true;
        rb.line = line_no;
      } else if (header.rfind("dataset", 0) == 0) {
        const std::string name = trim(header.substr(7));
        if (name.empty()) throw ConfigError(filename, line_no, "[dataset] needs a name");
        cfg.datasets.push_back({name, "", ""});
        section = Section::Dataset;
      } else {
        throw ConfigError(filename, line_no, "unknown section '[" + header + "]'");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(filename, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    switch (section) {
      case Section::None:
        throw ConfigError(filename, line_no, "key outside any section");
      case Section::Experiment:
        if (key == "seed") {
          if (!parse_u64(value, cfg.seed)) throw ConfigError(filename, line_no, "invalid seed");
        } else if (key == "format") {
          auto f = format_from_name(value);
          if (!f)
            throw ConfigError(filename, line_no,
                              "unknown format '" + value + "' (plain, markdown, csv)");
          cfg.format = *f;
        } else if (key == "runs") {
          if (!parse_size(value, cfg.runs) || cfg.runs < 1)
            throw ConfigError(filename, line_no, "invalid runs");
        } else if (key == "threads") {
          if (!parse_size(value, cfg.threads) || cfg.threads < 1)
            throw ConfigError(filename, line_no, "invalid threads");
        } else if (key == "classifiers") {
          if (classifiers_set) throw ConfigError(filename, line_no, "classifiers already set");
          classifiers_set = true;
          for (const std::string& name : split_top_level(value)) {
            auto algo = algorithm_from_name(name);
            if (!algo || *algo == Algorithm::Majority) {
              std::string valid;
              for (const std::string& v : trainable_algorithm_names())
                valid += (valid.empty() ? "" : ", ") + v;
              throw ConfigError(filename, line_no,
                                "unknown classifier '" + name + "' (valid names: " + valid + ")");
            }
            ClassifierSpec spec;
            spec.algorithm = *algo;
            cfg.classifiers.emplace_back(classifier_display_name(*algo), spec);
          }
        } else {
          throw ConfigError(filename, line_no, "unknown key '" + key + "' in [experiment]");
        }
        break;
      case Section::Dataset:
        if (key == "train")
          cfg.datasets.back().train_path = value;
        else if (key == "dev")
          cfg.datasets.back().dev_path = value;
        else
          throw ConfigError(filename, line_no, "unknown key '" + key + "' in [dataset]");
        break;
      case Section::Row:
        if (key == "label") {
          rb.row.label = value;
        } else if (key == "filters") {
          parse_filters(value, rb.row, filename, line_no);
        } else if (key == "class") {
          rb.row.class_attr_name = value;
        } else if (key == "class_bins") {
          if (!parse_size(value, rb.row.class_bins) || rb.row.class_bins < 1)
            throw ConfigError(filename, line_no, "invalid class_bins");
        } else if (key == "remap") {
          auto s = scheme_from_name(value);
          if (!s)
            throw ConfigError(filename, line_no,
                              "unknown remap scheme '" + value +
                                  "' (seven_day, weekday_sat_sun, weekday_weekend)");
          rb.row.remap = *s;
        } else if (key == "class_display") {
          rb.row.class_display = value;
        } else {
          throw ConfigError(filename, line_no, "unknown key '" + key + "' in [row]");
        }
        break;
    }
  }
  flush_row();

  if (cfg.classifiers.empty())
    throw ConfigError(filename, line_no, "no classifiers configured");
  if (cfg.datasets.empty()) throw ConfigError(filename, line_no, "no [dataset] sections");
  if (cfg.rows.empty()) throw ConfigError(filename, line_no, "no [row] sections");
  for (const DatasetRef& ds : cfg.datasets) {
    if (ds.train_path.empty())
      throw ConfigError(filename, line_no, "dataset '" + ds.name + "' has no train file");
    if (ds.dev_path.empty())
      throw ConfigError(filename, line_no, "dataset '" + ds.name + "' has no dev file");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Builtin grids
// ---------------------------------------------------------------------------

namespace {

std::string builtin_datasets() {
  std::string out;
  for (const char* city : {"brisbane", "adelaide", "perth", "hobart"}) {
    out += std::string("[dataset ") + city + "]\n";
    out += std::string("train = ") + city + ".train.arff\n";
    out += std::string("dev = ") + city + ".dev.arff\n\n";
  }
  return out;
}

std::string weekday_row(const std::string& label, const std::string& filters) {
  std::string out = "[row]\nlabel = " + label + "\n";
  if (!filters.empty()) out += "filters = " + filters + "\n";
  out += "class = F21\nclass_display = Week day (F21)\n\n";
  return out;
}

std::string make_resultset1() {
  std::string out =
      "# Day-of-week prediction grid: 11 preprocessing/target rows per city.\n"
      "[experiment]\n"
      "seed = 1\n"
      "format = plain\n"
      "classifiers = naive_bayes, random_forest, j48, ib1\n\n";
  out += builtin_datasets();
  out += weekday_row("Raw (No Pre-Processing)", "");
  out += weekday_row("Replace Missing Values", "impute");
  out += weekday_row("Supervised Discretisation of all attributes",
                     "impute, supervised(attrs=F1-F20)");
  out += weekday_row("Unsupervised Discretisation of Year attribute into 2 Bins",
                     "impute, equal_width(bins=2, attrs=F1)");
  out += weekday_row("Unsupervised Discretisation of Year attribute into 10 Bins",
                     "impute, equal_width(bins=10, attrs=F1)");
  out += weekday_row("Unsupervised Discretisation of all Attributes (F1-F20) into 10 Bins",
                     "impute, equal_width(bins=10, attrs=F1-F20)");
  out += weekday_row("Unsupervised Discretisation of all Attributes (F1-F20) into 4 Bins",
                     "impute, equal_width(bins=4, attrs=F1-F20)");
  out += weekday_row("Unsupervised Discretisation of all Attributes (F1-F20) into 2 Bins",
                     "impute, equal_width(bins=2, attrs=F1-F20)");
  out += weekday_row("Unsupervised Discretisation of all Attributes (F1-F20) into 1 Bin",
                     "impute, equal_width(bins=1, attrs=F1-F20)");
  out +=
      "[row]\n"
      "label = Unsupervised Discretisation of all Attributes (F1-F20) into 4 Bins\n"
      "filters = impute, equal_width(bins=4, attrs=F1-F20)\n"
      "class = F21\n"
      "remap = weekday_sat_sun\n"
      "class_display = Weekday/Sat/Sun\n\n"
      "[row]\n"
      "label = Unsupervised Discretisation of all Attributes (F1-F20) into 4 Bins\n"
      "filters = impute, equal_width(bins=4, attrs=F1-F20)\n"
      "class = F21\n"
      "remap = weekday_weekend\n"
      "class_display = Weekday/Weekend\n";
  return out;
}

std::string make_resultset2() {
  std::string out =
      "# Weather-target prediction grid: bin resolution x F4/F7/F8 per city.\n"
      "[experiment]\n"
      "seed = 1\n"
      "format = plain\n"
      "classifiers = naive_bayes, random_forest, j48, ib1\n\n";
  out += builtin_datasets();
  const std::vector<std::pair<std::string, std::string>> targets = {
      {"F4", "Rainfall (F4)"}, {"F7", "Avg Temperature (F7)"}, {"F8", "Max Wind (F8)"}};
  for (int bins : {10, 4, 2}) {
    for (const auto& [attr, display] : targets) {
      out += "[row]\n";
      out += "label = Unsupervised Discretisation of all Attributes (F1-F20) into " +
             std::to_string(bins) + " Bins\n";
      out += "filters = impute, equal_width(bins=" + std::to_string(bins) + ", attrs=F1-F20)\n";
      out += "class = " + attr + "\n";
      out += "class_bins = " + std::to_string(bins) + "\n";
      out += "class_display = " + display + "\n\n";
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& builtin_config_names() {
  static const std::vector<std::string> names = {"resultset1", "resultset2"};
  return names;
}

const std::string& builtin_config(const std::string& name) {
  static const std::string rs1 = make_resultset1();
  static const std::string rs2 = make_resultset2();
  if (name == "resultset1") return rs1;
  if (name == "resultset2") return rs2;
  throw Error("unknown builtin config '" + name + "' (resultset1, resultset2)");
}

}  // namespace tabml
