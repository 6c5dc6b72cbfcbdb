#include "tabml/filters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "line_io.hpp"
#include "tabml/textutil.hpp"

namespace tabml {

// ---------------------------------------------------------------------------
// Imputation
// ---------------------------------------------------------------------------

ImputationModel fit_imputation(const Dataset& d) {
  if (d.n_rows() == 0) throw Error("cannot fit imputation on an empty dataset");
  ImputationModel m;
  m.schema = d.attributes;
  m.fill.resize(d.n_attributes());
  for (std::size_t a = 0; a < d.n_attributes(); ++a) {
    const AttributeSpec& spec = d.attributes[a];
    if (spec.is_numeric()) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const Row& row : d.instances) {
        if (row[a].is_missing()) continue;
        sum += row[a].number();
        ++n;
      }
      if (n > 0) m.fill[a] = Value::numeric(sum / static_cast<double>(n));
    } else {
      std::vector<std::size_t> counts(spec.labels.size(), 0);
      std::size_t n = 0;
      for (const Row& row : d.instances) {
        if (row[a].is_missing()) continue;
        ++counts[row[a].index()];
        ++n;
      }
      if (n > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
          if (counts[i] > counts[best]) best = i;  // ties keep the lowest index
        m.fill[a] = Value::nominal(best);
      }
    }
  }
  return m;
}

Dataset apply_imputation(const Dataset& d, const ImputationModel& m) {
  if (d.attributes != m.schema)
    throw SchemaError("attribute specs do not match the fitted imputation model");
  Dataset out;
  out.relation = d.relation;
  out.attributes = d.attributes;
  out.instances = d.instances;
  for (Row& row : out.instances)
    for (std::size_t a = 0; a < row.size(); ++a)
      if (row[a].is_missing() && m.fill[a]) row[a] = *m.fill[a];
  return out;
}

// ---------------------------------------------------------------------------
// Interval labels
// ---------------------------------------------------------------------------

std::vector<std::string> interval_labels(const std::vector<double>& cut_points) {
  std::vector<std::string> labels;
  if (cut_points.empty()) {
    labels.push_back("(-inf-inf)");
    return labels;
  }
  labels.push_back("(-inf-" + format_double(cut_points.front()) + "]");
  for (std::size_t i = 1; i < cut_points.size(); ++i)
    labels.push_back("(" + format_double(cut_points[i - 1]) + "-" + format_double(cut_points[i]) + "]");
  labels.push_back("(" + format_double(cut_points.back()) + "-inf)");
  return labels;
}

namespace {

std::optional<double> parse_bound(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  auto v = parse_double(s);
  if (v && std::isfinite(*v)) return v;
  return std::nullopt;
}

}  // namespace

Interval parse_interval_label(const std::string& label) {
  if (label.size() >= 3 && label.front() == '(' && (label.back() == ']' || label.back() == ')')) {
    std::string_view inner(label.data() + 1, label.size() - 2);
    for (std::size_t pos = 1; pos < inner.size(); ++pos) {
      if (inner[pos] != '-') continue;
      auto lo = parse_bound(inner.substr(0, pos));
      auto hi = parse_bound(inner.substr(pos + 1));
      if (lo && hi && *lo < *hi) return Interval{*lo, *hi};
    }
  }
  throw Error("not an interval label: '" + label + "'");
}

std::size_t bin_index(const std::vector<double>& cut_points, double v) {
  return static_cast<std::size_t>(
      std::lower_bound(cut_points.begin(), cut_points.end(), v) - cut_points.begin());
}

// ---------------------------------------------------------------------------
// Equal-width discretization
// ---------------------------------------------------------------------------

namespace {

void check_selection(const Dataset& d, const std::vector<std::size_t>& attrs) {
  std::vector<bool> seen(d.n_attributes(), false);
  for (std::size_t a : attrs) {
    if (a >= d.n_attributes())
      throw SchemaError("attribute index " + std::to_string(a) + " out of range");
    if (seen[a]) throw Error("attribute '" + d.attributes[a].name + "' selected twice");
    seen[a] = true;
    if (!d.attributes[a].is_numeric())
      throw SchemaError("attribute '" + d.attributes[a].name + "' is not numeric");
  }
}

}  // namespace

DiscretizationModel fit_equal_width(const Dataset& d, const std::vector<std::size_t>& attrs,
                                    std::size_t k) {
  if (k < 1) throw Error("bin count must be >= 1");
  check_selection(d, attrs);

  DiscretizationModel m;
  m.mode = DiscretizeMode::EqualWidth;
  m.bins = k;
  m.schema = d.attributes;

  std::vector<std::size_t> sorted(attrs);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t a : sorted) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    for (const Row& row : d.instances) {
      if (row[a].is_missing()) continue;
      lo = std::min(lo, row[a].number());
      hi = std::max(hi, row[a].number());
      ++n;
    }
    if (n == 0)
      throw SchemaError("attribute '" + d.attributes[a].name + "' has no observed values");

    AttributeCuts col;
    col.attr = a;
    if (hi > lo) {
      const double width = (hi - lo) / static_cast<double>(k);
      for (std::size_t i = 1; i < k; ++i) {
        double c = lo + width * static_cast<double>(i);
        if (col.cut_points.empty() || c > col.cut_points.back()) col.cut_points.push_back(c);
      }
    }
    col.labels = interval_labels(col.cut_points);
    m.columns.push_back(std::move(col));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Supervised (entropy/MDL) discretization
// ---------------------------------------------------------------------------

namespace {

double entropy_bits(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts)
    if (c > 0.0) s += c * std::log2(c);
  return std::log2(total) - s / total;
}

std::size_t classes_present(const std::vector<double>& counts) {
  std::size_t k = 0;
  for (double c : counts)
    if (c > 0.0) ++k;
  return k;
}

struct ValueClass {
  double value;
  std::size_t cls;
};

// Recursive Fayyad-Irani split search over data[begin, end), sorted by value.
// block_class[i] is the class shared by every instance with data[i]'s value,
// or SIZE_MAX when that value's block is mixed.
void mdl_cuts(const std::vector<ValueClass>& data, const std::vector<std::size_t>& block_class,
              std::size_t begin, std::size_t end, std::size_t n_classes,
              std::vector<double>& cuts) {
  const std::size_t n = end - begin;
  if (n < 2) return;

  std::vector<double> all(n_classes, 0.0);
  for (std::size_t i = begin; i < end; ++i) all[data[i].cls] += 1.0;
  const double total = static_cast<double>(n);
  const double h_all = entropy_bits(all, total);
  if (h_all <= 0.0) return;

  std::vector<double> left(n_classes, 0.0);
  std::vector<double> best_left;
  double best_avg = std::numeric_limits<double>::infinity();
  double best_h_left = 0.0, best_h_right = 0.0;
  std::size_t best_pos = 0;
  bool found = false;

  for (std::size_t i = begin; i + 1 < end; ++i) {
    left[data[i].cls] += 1.0;
    if (data[i].value >= data[i + 1].value) continue;
    // Candidate boundaries are midpoints between adjacent value blocks whose
    // class distributions differ; two pure blocks of one class are skipped.
    if (block_class[i] != SIZE_MAX && block_class[i] == block_class[i + 1]) continue;

    const double n_left = static_cast<double>(i + 1 - begin);
    const double n_right = total - n_left;
    std::vector<double> right(n_classes, 0.0);
    for (std::size_t c = 0; c < n_classes; ++c) right[c] = all[c] - left[c];
    const double h_left = entropy_bits(left, n_left);
    const double h_right = entropy_bits(right, n_right);
    const double avg = (n_left * h_left + n_right * h_right) / total;
    if (avg < best_avg) {
      best_avg = avg;
      best_pos = i + 1;
      best_left = left;
      best_h_left = h_left;
      best_h_right = h_right;
      found = true;
    }
  }
  if (!found) return;

  const double gain = h_all - best_avg;
  if (gain <= 0.0) return;

  std::vector<double> right(n_classes, 0.0);
  for (std::size_t c = 0; c < n_classes; ++c) right[c] = all[c] - best_left[c];
  const double k = static_cast<double>(classes_present(all));
  const double k_left = static_cast<double>(classes_present(best_left));
  const double k_right = static_cast<double>(classes_present(right));
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * h_all - k_left * best_h_left - k_right * best_h_right);
  if (gain <= (std::log2(total - 1.0) + delta) / total) return;

  cuts.push_back((data[best_pos - 1].value + data[best_pos].value) / 2.0);
  mdl_cuts(data, block_class, begin, best_pos, n_classes, cuts);
  mdl_cuts(data, block_class, best_pos, end, n_classes, cuts);
}

}  // namespace

DiscretizationModel fit_supervised_mdl(const Dataset& d, const std::vector<std::size_t>& attrs,
                                       std::size_t class_attr) {
  if (d.n_rows() == 0) throw Error("cannot fit supervised discretization on an empty dataset");
  if (class_attr >= d.n_attributes())
    throw SchemaError("class attribute index " + std::to_string(class_attr) + " out of range");
  if (!d.attributes[class_attr].is_nominal())
    throw SchemaError("class attribute '" + d.attributes[class_attr].name + "' must be nominal");
  check_selection(d, attrs);

  const std::size_t n_classes = d.attributes[class_attr].labels.size();

  DiscretizationModel m;
  m.mode = DiscretizeMode::SupervisedMdl;
  m.bins = 0;
  m.schema = d.attributes;

  std::vector<std::size_t> sorted(attrs);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t a : sorted) {
    std::vector<ValueClass> data;
    data.reserve(d.n_rows());
    for (const Row& row : d.instances) {
      if (row[a].is_missing() || row[class_attr].is_missing()) continue;
      data.push_back({row[a].number(), row[class_attr].index()});
    }
    std::sort(data.begin(), data.end(),
              [](const ValueClass& x, const ValueClass& y) { return x.value < y.value; });

    // Per-position block class: the single class of all instances sharing the
    // value, or SIZE_MAX for mixed blocks.
    std::vector<std::size_t> block_class(data.size(), SIZE_MAX);
    for (std::size_t i = 0; i < data.size();) {
      std::size_t j = i;
      std::size_t cls = data[i].cls;
      bool pure = true;
      while (j < data.size() && data[j].value == data[i].value) {
        if (data[j].cls != cls) pure = false;
        ++j;
      }
      if (pure)
        for (std::size_t p = i; p < j; ++p) block_class[p] = cls;
      i = j;
    }

    AttributeCuts col;
    col.attr = a;
    mdl_cuts(data, block_class, 0, data.size(), n_classes, col.cut_points);
    std::sort(col.cut_points.begin(), col.cut_points.end());
    col.labels = interval_labels(col.cut_points);
    m.columns.push_back(std::move(col));
  }
  return m;
}

Dataset apply_discretization(const Dataset& d, const DiscretizationModel& m) {
  if (d.attributes != m.schema)
    throw SchemaError("attribute specs do not match the fitted discretization model");
  Dataset out;
  out.relation = d.relation;
  out.attributes = d.attributes;
  out.instances = d.instances;
  for (const AttributeCuts& col : m.columns) {
    AttributeSpec& spec = out.attributes[col.attr];
    spec.kind = AttrKind::Nominal;
    spec.labels = col.labels;
    for (Row& row : out.instances) {
      Value& v = row[col.attr];
      if (v.is_missing()) continue;
      v = Value::nominal(bin_index(col.cut_points, v.number()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Class remapping
// ---------------------------------------------------------------------------

std::string scheme_name(ClassScheme s) {
  switch (s) {
    case ClassScheme::SevenDay: return "seven_day";
    case ClassScheme::WeekdaySatSun: return "weekday_sat_sun";
    case ClassScheme::WeekdayWeekend: return "weekday_weekend";
  }
  return "seven_day";
}

std::optional<ClassScheme> scheme_from_name(std::string_view name) {
  if (name == "seven_day") return ClassScheme::SevenDay;
  if (name == "weekday_sat_sun") return ClassScheme::WeekdaySatSun;
  if (name == "weekday_weekend") return ClassScheme::WeekdayWeekend;
  return std::nullopt;
}

namespace {

int weekday_position(std::string_view label) {
  std::string low;
  low.reserve(label.size());
  for (char c : label) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static const std::vector<std::vector<std::string>> aliases = {
      {"mon", "monday"},          {"tue", "tues", "tuesday"}, {"wed", "wednesday"},
      {"thu", "thur", "thurs", "thursday"}, {"fri", "friday"}, {"sat", "saturday"},
      {"sun", "sunday"}};
  for (std::size_t i = 0; i < aliases.size(); ++i)
    for (const std::string& a : aliases[i])
      if (low == a) return static_cast<int>(i);
  return -1;
}

}  // namespace

ClassRemap make_class_remap(const Dataset& d, std::size_t attr, ClassScheme scheme) {
  if (attr >= d.n_attributes())
    throw SchemaError("attribute index " + std::to_string(attr) + " out of range");
  const AttributeSpec& spec = d.attributes[attr];
  if (!spec.is_nominal())
    throw SchemaError("attribute '" + spec.name + "' is not nominal");
  if (spec.labels.size() != 7)
    throw SchemaError("attribute '" + spec.name + "' has " + std::to_string(spec.labels.size()) +
                      " labels, expected the 7 weekdays");
  for (std::size_t i = 0; i < 7; ++i)
    if (weekday_position(spec.labels[i]) != static_cast<int>(i))
      throw SchemaError("attribute '" + spec.name + "' label '" + spec.labels[i] +
                        "' is not the expected weekday at position " + std::to_string(i + 1));

  ClassRemap r;
  r.attr = attr;
  r.scheme = scheme;
  r.schema = d.attributes;
  switch (scheme) {
    case ClassScheme::SevenDay:
      r.target_labels = spec.labels;
      r.mapping = {0, 1, 2, 3, 4, 5, 6};
      break;
    case ClassScheme::WeekdaySatSun:
      r.target_labels = {"Weekday", "Sat", "Sun"};
      r.mapping = {0, 0, 0, 0, 0, 1, 2};
      break;
    case ClassScheme::WeekdayWeekend:
      r.target_labels = {"Weekday", "Weekend"};
      r.mapping = {0, 0, 0, 0, 0, 1, 1};
      break;
  }
  return r;
}

Dataset apply_class_remap(const Dataset& d, const ClassRemap& r) {
  if (d.attributes != r.schema)
    throw SchemaError("attribute specs do not match the fitted class remap");
  Dataset out;
  out.relation = d.relation;
  out.attributes = d.attributes;
  out.attributes[r.attr].labels = r.target_labels;
  out.instances = d.instances;
  for (Row& row : out.instances) {
    Value& v = row[r.attr];
    if (v.is_missing()) continue;
    v = Value::nominal(r.mapping[v.index()]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filter file IO
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kFilterMagic = "tabml-filter 1";

using detail::LineIn;
using detail::read_double_tok;
using detail::read_schema_block;
using detail::write_schema_block;

}  // namespace

std::string save_filter(const FilterModel& f) {
  std::ostringstream out;
  out << kFilterMagic << "\n";
  if (const auto* m = std::get_if<ImputationModel>(&f)) {
    out << "type imputation\n";
    write_schema_block(out, m->schema);
    for (std::size_t a = 0; a < m->fill.size(); ++a) {
      out << "fill " << a << " ";
      if (!m->fill[a])
        out << "none";
      else if (m->fill[a]->is_numeric())
        out << "numeric " << format_double(m->fill[a]->number());
      else
        out << "nominal " << m->fill[a]->index();
      out << "\n";
    }
  } else if (const auto* m = std::get_if<DiscretizationModel>(&f)) {
    out << "type " << (m->mode == DiscretizeMode::EqualWidth ? "equal_width" : "supervised_mdl")
        << "\n";
    write_schema_block(out, m->schema);
    out << "bins " << m->bins << "\n";
    out << "columns " << m->columns.size() << "\n";
    for (const AttributeCuts& col : m->columns) {
      out << "cuts " << col.attr << " " << col.cut_points.size();
      for (double c : col.cut_points) out << " " << format_double(c);
      out << "\n";
    }
  } else {
    const auto& remap = std::get<ClassRemap>(f);
    out << "type class_remap\n";
    write_schema_block(out, remap.schema);
    out << "scheme " << scheme_name(remap.scheme) << " attr " << remap.attr << "\n";
  }
  out << "end\n";
  return out.str();
}

FilterModel load_filter(std::istream& in) {
  LineIn r{in};
  if (r.next() != kFilterMagic) r.fail("not a tabml filter file");
  std::istringstream tl(r.next());
  std::string word, type;
  if (!(tl >> word >> type) || word != "type") r.fail("expected 'type <name>'");

  if (type == "imputation") {
    ImputationModel m;
    m.schema = read_schema_block(r);
    m.fill.resize(m.schema.size());
    for (std::size_t i = 0; i < m.schema.size(); ++i) {
      std::istringstream line(r.next());
      std::string kw, kind;
      std::size_t attr = 0;
      if (!(line >> kw >> attr >> kind) || kw != "fill" || attr >= m.schema.size())
        r.fail("expected 'fill <attr> <kind> ...'");
      if (kind == "none") {
        m.fill[attr] = std::nullopt;
      } else if (kind == "numeric") {
        m.fill[attr] = Value::numeric(read_double_tok(line, r, "fill value"));
      } else if (kind == "nominal") {
        std::size_t idx = 0;
        if (!(line >> idx)) r.fail("expected label index");
        m.fill[attr] = Value::nominal(idx);
      } else {
        r.fail("unknown fill kind '" + kind + "'");
      }
    }
    if (r.next() != "end") r.fail("expected 'end'");
    return m;
  }

  if (type == "equal_width" || type == "supervised_mdl") {
    DiscretizationModel m;
    m.mode = type == "equal_width" ? DiscretizeMode::EqualWidth : DiscretizeMode::SupervisedMdl;
    m.schema = read_schema_block(r);
    {
      std::istringstream line(r.next());
      std::string kw;
      if (!(line >> kw >> m.bins) || kw != "bins") r.fail("expected 'bins <k>'");
    }
    std::size_t n_cols = 0;
    {
      std::istringstream line(r.next());
      std::string kw;
      if (!(line >> kw >> n_cols) || kw != "columns") r.fail("expected 'columns <n>'");
    }
    for (std::size_t i = 0; i < n_cols; ++i) {
      std::istringstream line(r.next());
      std::string kw;
      AttributeCuts col;
      std::size_t n_cuts = 0;
      if (!(line >> kw >> col.attr >> n_cuts) || kw != "cuts" || col.attr >= m.schema.size())
        r.fail("expected 'cuts <attr> <n> ...'");
      for (std::size_t c = 0; c < n_cuts; ++c)
        col.cut_points.push_back(read_double_tok(line, r, "cut point"));
      col.labels = interval_labels(col.cut_points);
      m.columns.push_back(std::move(col));
    }
    if (r.next() != "end") r.fail("expected 'end'");
    return m;
  }

  if (type == "class_remap") {
    std::vector<AttributeSpec> schema = read_schema_block(r);
    std::istringstream line(r.next());
    std::string kw, name, attr_kw;
    std::size_t attr = 0;
    if (!(line >> kw >> name >> attr_kw >> attr) || kw != "scheme" || attr_kw != "attr")
      r.fail("expected 'scheme <name> attr <i>'");
    auto scheme = scheme_from_name(name);
    if (!scheme) r.fail("unknown remap scheme '" + name + "'");
    if (r.next() != "end") r.fail("expected 'end'");
    Dataset shell;
    shell.relation = "schema";
    shell.attributes = schema;
    return make_class_remap(shell, attr, *scheme);
  }

  r.fail("unknown filter type '" + type + "'");
}

FilterModel load_filter_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path + "'");
  return load_filter(in);
}

Dataset apply_filter(const Dataset& d, const FilterModel& f) {
  if (const auto* m = std::get_if<ImputationModel>(&f)) return apply_imputation(d, *m);
  if (const auto* m = std::get_if<DiscretizationModel>(&f)) return apply_discretization(d, *m);
  return apply_class_remap(d, std::get<ClassRemap>(f));
}

}  // namespace tabml
