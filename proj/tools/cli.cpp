#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "wgie/bounds.hpp"
#include "wgie/csv.hpp"
#include "wgie/datasets.hpp"
#include "wgie/distributions.hpp"
#include "wgie/entropy.hpp"
#include "wgie/errors.hpp"
#include "wgie/estimation.hpp"
#include "wgie/modelsel.hpp"
#include "wgie/simulation.hpp"

namespace wgie::cli {

namespace {

using Json = nlohmann::ordered_json;

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Options {
  std::string family;
  std::string params;
  std::string model_file;
  std::vector<std::string> windows;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::string sizes;
  std::size_t reps = 1000;
  std::optional<std::uint64_t> seed;
  std::string data;
  std::string column;
  std::string format = "csv";
  std::string out;
  unsigned workers = 1;
  std::string protocol = "truncated";
  std::string measures = "wgie";
  std::string families = "ee,gamma,weibull";
  std::size_t grid = 30;
  std::string grid_dir;
  std::string dataset;
};

double parse_number(const std::string& text, std::string_view what) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) {
    throw ConfigError(std::string(what) + ": cannot parse number '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, std::string_view seps) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string_view::npos) {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

Family require_family(const std::string& name) {
  const auto f = parse_family(name);
  if (!f) throw ConfigError("unknown family '" + name + "'");
  if (*f == Family::custom) throw ConfigError("family 'custom' is not available from the CLI");
  return *f;
}

DistributionModel model_from(Family family, const std::map<std::string, double>& named,
                             const std::vector<double>& positional) {
  const auto names = param_names(family);
  std::vector<double> values;
  if (!named.empty()) {
    for (const auto& n : names) {
      const auto it = named.find(n);
      if (it == named.end()) {
        throw ConfigError("family '" + std::string(family_name(family)) + "' needs parameter '" +
                          n + "'");
      }
      values.push_back(it->second);
    }
    for (const auto& [k, v] : named) {
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        throw ConfigError("family '" + std::string(family_name(family)) +
                          "' has no parameter '" + k + "'");
      }
    }
  } else {
    values = positional;
  }
  if (values.size() != names.size()) {
    std::ostringstream msg;
    msg << "family '" << family_name(family) << "' takes " << names.size() << " parameter(s)";
    throw ConfigError(msg.str());
  }
  return DistributionModel::from_params(family, values);
}

DistributionModel parse_model(const Options& o) {
  if (!o.model_file.empty()) {
    std::ifstream in(o.model_file);
    if (!in) throw ConfigError("cannot open model file '" + o.model_file + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError("model file '" + o.model_file + "': " + e.what());
    }
    if (!j.contains("family") || !j["family"].is_string()) {
      throw ConfigError("model file needs a string 'family'");
    }
    const Family f = require_family(j["family"].get<std::string>());
    std::map<std::string, double> named;
    std::vector<double> positional;
    if (j.contains("params")) {
      if (j["params"].is_object()) {
        for (const auto& [k, v] : j["params"].items()) {
          if (!v.is_number()) throw ConfigError("model file: parameter '" + k + "' is not a number");
          named[k] = v.get<double>();
        }
      } else if (j["params"].is_array()) {
        for (const auto& v : j["params"]) positional.push_back(v.get<double>());
      } else {
        throw ConfigError("model file: 'params' must be an object or an array");
      }
    }
    return model_from(f, named, positional);
  }
  if (o.family.empty()) throw ConfigError("--family (or --model FILE) is required");
  const Family f = require_family(o.family);
  std::map<std::string, double> named;
  std::vector<double> positional;
  for (const auto& tok : split(o.params, ", \t")) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      positional.push_back(parse_number(tok, "--params"));
    } else {
      named[tok.substr(0, eq)] = parse_number(tok.substr(eq + 1), "--params");
    }
  }
  if (!named.empty() && !positional.empty()) {
    throw ConfigError("--params: use either key=value pairs or plain values, not both");
  }
  return model_from(f, named, positional);
}

std::vector<Window> parse_windows(const Options& o) {
  std::vector<Window> out;
  for (const auto& w : o.windows) {
    const auto parts = split(w, ",");
    if (parts.size() != 2) throw ConfigError("--window expects t1,t2 but got '" + w + "'");
    Window win{parse_number(parts[0], "--window"), parse_number(parts[1], "--window")};
    win.validate();
    out.push_back(win);
  }
  return out;
}

std::vector<EntropyOrder> parse_orders(const Options& o, bool required,
                                       std::vector<EntropyOrder> fallback = {}) {
  if (o.alphas.size() != o.betas.size()) {
    throw ConfigError("--alpha and --beta must be given the same number of times");
  }
  if (o.alphas.empty()) {
    if (required && fallback.empty()) throw ConfigError("--alpha and --beta are required");
    return fallback;
  }
  std::vector<EntropyOrder> out;
  for (std::size_t i = 0; i < o.alphas.size(); ++i) out.emplace_back(o.alphas[i], o.betas[i]);
  return out;
}

Sample load_sample(const Options& o) {
  if (o.data.empty()) throw ConfigError("--data FILE|plane7912|bearings is required");
  if (const auto d = datasets::find(o.data)) {
    return Sample({d->values.begin(), d->values.end()}, std::string(d->name));
  }
  std::ifstream in(o.data);
  if (!in) throw ConfigError("cannot open data file '" + o.data + "'");
  std::vector<double> values;
  std::string line;
  std::optional<std::size_t> col;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!o.column.empty()) {
      const auto fields = split(line, ",");
      if (!col) {
        const auto it = std::find(fields.begin(), fields.end(), o.column);
        if (it == fields.end()) throw ConfigError("column '" + o.column + "' not in header");
        col = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      if (*col >= fields.size()) {
        throw ConfigError("line " + std::to_string(lineno) + ": missing column '" + o.column + "'");
      }
      values.push_back(parse_number(fields[*col], "data"));
    } else {
      values.push_back(parse_number(line, "data"));
    }
  }
  if (values.empty()) throw ConfigError("data file '" + o.data + "' has no values");
  return Sample(std::move(values), std::filesystem::path(o.data).filename().string());
}

std::string params_text(const DistributionModel& m) {
  std::string s;
  const auto names = param_names(m.family());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ' ';
    s += names[i] + "=" + format_number(m.param(i));
  }
  return s;
}

Json model_json(const DistributionModel& m) {
  Json params = Json::object();
  const auto names = param_names(m.family());
  for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = m.param(i);
  return Json{{"family", std::string(family_name(m.family()))}, {"params", params}};
}

// A table rendered either as CSV (header + rows) or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  struct Cell {
    Json json;
    std::string text;
  };
  static Cell num(double x) { return {std::isfinite(x) ? Json(x) : Json(nullptr), format_number(x)}; }
  static Cell integer(long long x) { return {Json(x), std::to_string(x)}; }
  static Cell str(std::string s) { return {Json(s), csv_field(s)}; }
  static Cell boolean(bool b) { return {Json(b), b ? "true" : "false"}; }

  void add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns_.size(); ++i) s += (i ? "," : "") + columns_[i];
    s += '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i].text;
      s += '\n';
    }
    return s;
  }

  Json json() const {
    Json arr = Json::array();
    for (const auto& r : rows_) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < r.size(); ++i) obj[columns_[i]] = r[i].json;
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct Output {
  std::string text;
};

Output render(const Options& o, const Table& t, Json extra = Json::object()) {
  if (o.format == "json") {
    Json doc = Json::object();
    doc["rows"] = t.json();
    for (auto& [k, v] : extra.items()) doc[k] = v;
    return {doc.dump(2) + "\n"};
  }
  return {t.csv()};
}

using T = Table;

// ---------------------------------------------------------------- compute

Output cmd_compute(const Options& o) {
  const auto model = parse_model(o);
  auto windows = parse_windows(o);
  if (windows.empty()) windows.push_back(full_window(model));
  const auto orders = parse_orders(o, true);
  const auto measures = split(o.measures, ",");
  static const std::vector<std::string> known{"wgie", "interval_shannon",
                                              "weighted_interval_entropy", "kappa", "eta_gap"};
  for (const auto& m : measures) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ConfigError("--measures: unknown measure '" + m + "'");
    }
  }
  Table t({"family", "params", "t1", "t2", "alpha", "beta", "measure", "value", "method",
           "est_error"});
  for (const auto& w : windows) {
    for (const auto& ord : orders) {
      for (const auto& m : measures) {
        double value = 0.0;
        std::string method = "quadrature";
        double err = std::numeric_limits<double>::quiet_NaN();
        if (m == "wgie") {
          const auto v = wgie(model, w, ord);
          value = v.value;
          method = std::string(to_string(v.method));
          err = v.est_error;
        } else if (m == "interval_shannon") {
          value = interval_shannon(model, w);
        } else if (m == "weighted_interval_entropy") {
          value = weighted_interval_entropy(model, w);
        } else if (m == "kappa") {
          value = kappa_gap(model, w, ord);
        } else {
          value = eta_gap(model, w, ord);
        }
        t.add({T::str(std::string(family_name(model.family()))), T::str(params_text(model)),
               T::num(w.t1), T::num(w.t2), T::num(ord.alpha()), T::num(ord.beta()), T::str(m),
               T::num(value), T::str(method), T::num(err)});
      }
    }
  }
  return render(o, t);
}

// ----------------------------------------------------------- bounds-check

void add_bound(Table& t, Window w, const EntropyOrder& ord, const BoundReport& r,
               std::string note) {
  t.add({T::num(w.t1), T::num(w.t2), T::num(ord.alpha()), T::num(ord.beta()),
         T::str(std::string(to_string(r.theorem_id))), T::boolean(r.hypothesis_holds),
         T::num(r.lhs), T::num(r.rhs), T::num(r.margin), T::boolean(r.satisfied),
         T::boolean(r.informative), T::str(std::move(note))});
}

Output cmd_bounds(const Options& o) {
  const auto model = parse_model(o);
  const auto windows = parse_windows(o);
  if (windows.empty()) throw ConfigError("bounds-check needs at least one --window");
  const auto orders = parse_orders(o, true);
  Table t({"t1", "t2", "alpha", "beta", "theorem", "hypothesis_holds", "lhs", "rhs", "margin",
           "satisfied", "informative", "note"});
  std::size_t violations = 0;
  for (const auto& w : windows) {
    for (const auto& ord : orders) {
      const Direction d1 = detect_direction_t1(model, w, ord);
      std::vector<std::pair<BoundReport, std::string>> reports;
      reports.emplace_back(bound_t1_monotone(model, w, ord, d1),
                           "direction " + std::string(to_string(d1)));
      if (std::isfinite(w.t2)) {
        const Direction d2 = detect_direction_t2(model, w, ord);
        reports.emplace_back(bound_t2_monotone(model, w, ord, d2),
                             "direction " + std::string(to_string(d2)));
        const auto [g1, g2] = bound_gfr_monotone(model, w, ord);
        reports.emplace_back(g1, "");
        reports.emplace_back(g2, "");
      }
      const auto [du, dl] = bound_density_monotone(model, w, ord);
      const std::string shape(to_string(structure_flags(model).density));
      reports.emplace_back(du, "density " + shape);
      reports.emplace_back(dl, "density " + shape);
      reports.emplace_back(bound_exp_inequality(model, w, ord), "");
      reports.emplace_back(bound_logsum(model, w, ord), "");
      for (auto& [r, note] : reports) {
        if (r.hypothesis_holds && !r.satisfied) ++violations;
        add_bound(t, w, ord, r, note);
      }
    }
  }
  return render(o, t, Json{{"violations", violations}});
}

// ------------------------------------------------------------- uniqueness

std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + format_number(xs[i]);
  return s;
}

Output cmd_uniqueness(const Options& o) {
  const auto model = parse_model(o);
  const auto windows = parse_windows(o);
  if (windows.empty()) throw ConfigError("uniqueness needs at least one --window");
  const auto orders = parse_orders(o, true);
  Table t({"t1", "t2", "alpha", "beta", "side", "direction_t1", "direction_t2",
           "hypothesis_holds", "stationary_point", "value_at_stationary", "roots", "gfr_value",
           "gfr_is_root", "regime", "search_failed"});
  for (const auto& w : windows) {
    for (const auto& ord : orders) {
      const auto u = uniqueness_diagnostic(model, w, ord);
      for (const SideDiagnostic* s : {&u.eta_side, &u.zeta_side}) {
        t.add({T::num(w.t1), T::num(w.t2), T::num(ord.alpha()), T::num(ord.beta()),
               T::str(s->side == Side::t1 ? "eta" : "zeta"),
               T::str(std::string(to_string(u.direction_t1))),
               T::str(std::string(to_string(u.direction_t2))), T::boolean(u.hypothesis_holds),
               T::num(s->stationary_point), T::num(s->value_at_stationary),
               {Json(s->roots), join_numbers(s->roots)}, T::num(s->gfr_value),
               T::boolean(s->gfr_is_root), T::integer(s->regime), T::boolean(s->search_failed)});
      }
    }
  }
  return render(o, t);
}

// -------------------------------------------------------------- fit / gof

std::vector<Family> parse_family_list(const std::string& s) {
  std::vector<Family> out;
  for (const auto& name : split(s, ",")) out.push_back(require_family(name));
  if (out.empty()) throw ConfigError("no families given");
  return out;
}

Output cmd_fit(const Options& o, bool with_ks) {
  const Sample s = load_sample(o);
  const auto families = parse_family_list(o.family.empty() ? "exponential" : o.family);
  const auto windows = parse_windows(o);
  if (!windows.empty()) {
    // Truncated-window estimation: both protocols side by side.
    if (families.size() != 1 || families[0] != Family::exponential) {
      throw ConfigError("fit --window supports --family exponential only");
    }
    const auto orders = parse_orders(o, true);
    const FitResult full = fit_exponential(s);
    Table t({"t1", "t2", "alpha", "beta", "protocol", "n_used", "theta", "converged", "wgie"});
    for (const auto& w : windows) {
      const FitResult trunc = fit_doubly_truncated_exponential(s, w);
      std::size_t used = 0;
      for (double x : s.values()) used += (x > w.t1 && x <= w.t2);
      for (const auto& ord : orders) {
        t.add({T::num(w.t1), T::num(w.t2), T::num(ord.alpha()), T::num(ord.beta()),
               T::str("truncated"), T::integer(static_cast<long long>(used)),
               T::num(trunc.model.param(0)), T::boolean(trunc.converged),
               T::num(wgie(trunc.model, w, ord).value)});
        t.add({T::num(w.t1), T::num(w.t2), T::num(ord.alpha()), T::num(ord.beta()),
               T::str("full_sample"), T::integer(static_cast<long long>(s.size())),
               T::num(full.model.param(0)), T::boolean(full.converged),
               T::num(wgie(full.model, w, ord).value)});
      }
    }
    const std::string note =
        "truncated: theta re-estimated per window from observations in (t1, t2]; "
        "full_sample: theta = 1/mean of all observations, reused for every window";
    return render(o, t, Json{{"note", note}});
  }
  std::vector<std::string> cols{"dataset", "n", "family", "params", "loglik", "converged",
                                "iterations"};
  if (with_ks) {
    cols.push_back("ks_statistic");
    cols.push_back("ks_p_value");
  }
  Table t(cols);
  for (Family f : families) {
    const FitResult r = fit_family(s, f);
    std::vector<Table::Cell> row{T::str(s.name()), T::integer(static_cast<long long>(s.size())),
                                 T::str(std::string(family_name(f))),
                                 T::str(params_text(r.model)), T::num(r.loglik),
                                 T::boolean(r.converged), T::integer(r.iterations)};
    if (with_ks) {
      const KsResult ks = ks_test(s, r.model);
      row.push_back(T::num(ks.statistic));
      row.push_back(T::num(ks.p_value));
    }
    t.add(std::move(row));
  }
  return render(o, t);
}

// --------------------------------------------------------------- simulate

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(s, ",")) {
    const double v = parse_number(tok, "--n");
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
      throw ConfigError("--n: sample sizes must be positive integers, got '" + tok + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Output cmd_simulate(const Options& o) {
  if (!o.seed) throw ConfigError("simulate requires --seed");
  SimConfig cfg;
  if (!o.family.empty() || !o.model_file.empty()) cfg.model = parse_model(o);
  cfg.windows = parse_windows(o);
  if (cfg.windows.empty()) {
    cfg.windows = {{1, 3}, {1, 5}, {1, 7}, {3, 11}, {5, 11}, {7, 11}};
  }
  if (!o.sizes.empty()) cfg.sample_sizes = parse_sizes(o.sizes);
  cfg.replications = o.reps;
  const auto orders = parse_orders(o, true);
  if (orders.size() != 1) throw ConfigError("simulate takes exactly one --alpha/--beta pair");
  cfg.ord = orders[0];
  cfg.seed = *o.seed;
  if (o.protocol == "truncated") {
    cfg.protocol = EstimationProtocol::truncated;
  } else if (o.protocol == "full_sample") {
    cfg.protocol = EstimationProtocol::full_sample;
  } else {
    throw ConfigError("--protocol must be truncated or full_sample");
  }
  const SimReport rep = run_monte_carlo(cfg, o.workers);
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      rows.push_back(Json{{"window_t1", r.window.t1}, {"window_t2", r.window.t2}, {"n", r.n},
                          {"mean_estimate", r.mean_estimate}, {"bias", r.bias}, {"mse", r.mse},
                          {"true_value", r.true_value}, {"failures", r.failures}});
    }
    Json doc{{"model", model_json(cfg.model)},
             {"alpha", cfg.ord.alpha()},
             {"beta", cfg.ord.beta()},
             {"replications", cfg.replications},
             {"seed", cfg.seed},
             {"protocol", std::string(to_string(cfg.protocol))},
             {"rows", rows}};
    return {doc.dump(2) + "\n"};
  }
  return {to_csv(rep)};
}

// ---------------------------------------------------------------- compare

Json grid_json(const EntropyGapGrid& g) {
  Json pts = Json::array();
  for (const auto& p : g.points) pts.push_back(Json{p.u, p.v, p.t1, p.t2, p.value});
  return Json{{"columns", Json{"u", "v", "t1", "t2", "value"}},
              {"min", grid_min(g)},
              {"mean", grid_mean(g)},
              {"points", pts}};
}

Output cmd_compare(const Options& o, std::ostream& err) {
  const Sample s = load_sample(o);
  const auto families = parse_family_list(o.families);
  const auto orders = parse_orders(o, false, {EntropyOrder(1.5, 2.0)});
  if (orders.size() != 1) throw ConfigError("compare takes exactly one --alpha/--beta pair");
  const EntropyOrder ord = orders[0];
  const UvGrid grid = uv_grid(o.grid);
  const ModelRanking ranking = rank_models(s, families, ord, grid, o.workers);
  for (const auto& w : ranking.warnings) err << "warning: " << w << '\n';

  Table t({"rank", "family", "params", "loglik", "converged", "grid_mean_wgie"});
  for (const auto& r : ranking.rows) {
    t.add({T::integer(r.rank), T::str(std::string(family_name(r.family))),
           T::str(params_text(r.fit.model)), T::num(r.fit.loglik), T::boolean(r.fit.converged),
           T::num(r.summary)});
  }

  // Gap grids: kappa and eta per model, and best-minus-other WGIE differences.
  std::vector<std::pair<std::string, EntropyGapGrid>> grids;
  for (const auto& r : ranking.rows) {
    const std::string name(family_name(r.family));
    grids.emplace_back("kappa_" + name, kappa_grid(r.fit.model, ord, grid, o.workers));
    grids.emplace_back("eta_" + name, eta_grid(r.fit.model, ord, grid, o.workers));
  }
  if (!ranking.rows.empty()) {
    const auto& best = ranking.rows.front();
    for (std::size_t i = 1; i < ranking.rows.size(); ++i) {
      const auto& other = ranking.rows[i];
      grids.emplace_back("diff_" + std::string(family_name(best.family)) + "_" +
                             std::string(family_name(other.family)),
                         wgie_difference_grid(best.fit.model, other.fit.model, ord, grid,
                                              o.workers));
    }
  }
  if (!o.grid_dir.empty()) {
    std::filesystem::create_directories(o.grid_dir);
    for (const auto& [name, g] : grids) {
      const auto path = std::filesystem::path(o.grid_dir) / (name + ".csv");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + path.string() + "'");
      f << to_csv(g);
    }
  }
  if (o.format == "json") {
    Json gj = Json::object();
    for (const auto& [name, g] : grids) gj[name] = grid_json(g);
    Json doc{{"dataset", s.name()},
             {"alpha", ord.alpha()},
             {"beta", ord.beta()},
             {"summary", "mean WGIE over the valid (u, v) grid points, t1 = -log u, t2 = -log v"},
             {"ranking", t.json()},
             {"warnings", ranking.warnings},
             {"grids", gj}};
    return {doc.dump(2) + "\n"};
  }
  return {t.csv()};
}

// --------------------------------------------------------------- datasets

Output cmd_datasets(const Options& o) {
  Table t({"dataset", "index", "value"});
  Json doc = Json::object();
  bool any = false;
  for (const auto& d : datasets::all) {
    if (!o.dataset.empty() && d.name != o.dataset) continue;
    any = true;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      t.add({T::str(std::string(d.name)), T::integer(static_cast<long long>(i + 1)),
             T::num(d.values[i])});
    }
    doc[std::string(d.name)] = Json(std::vector<double>(d.values.begin(), d.values.end()));
  }
  if (!any) throw ConfigError("unknown dataset '" + o.dataset + "'");
  if (o.format == "json") return {doc.dump(2) + "\n"};
  return {t.csv()};
}

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "Model family");
  app->add_option("--params", o.params,
                  "Parameters: key=value pairs (e.g. 'shape=2,rate=0.5') or values in order");
  app->add_option("--model", o.model_file,
                  "JSON model file {\"family\": NAME, \"params\": {key: value}}");
}

void add_order_flags(CLI::App* app, Options& o) {
  app->add_option("--alpha", o.alphas, "alpha (repeatable, paired with --beta)");
  app->add_option("--beta", o.betas, "beta (repeatable, paired with --alpha)");
}

void add_window_flag(CLI::App* app, Options& o) {
  app->add_option("--window", o.windows, "Truncation window t1,t2 (repeatable; t2 may be inf)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{
      "Weighted generalized interval entropy toolkit.\n\n"
      "Families and parameters (--params order):\n"
      "  uniform a,b | exponential theta | power a,b | beta c | pareto1 a,b\n"
      "  gamma shape,rate | gpd theta | weibull shape,rate | ee shape,rate\n"
      "  linear lo,hi,intercept,slope\n\n"
      "Exit codes: 0 success, 2 configuration error, 3 numerical failure.",
      "wgie"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "Write output to PATH instead of stdout");
  app.add_option("--workers", o.workers, "Worker threads (0 = all cores)")->capture_default_str();

  auto* compute = app.add_subcommand("compute", "Entropy values for model/window/order tuples");
  add_model_flags(compute, o);
  add_window_flag(compute, o);
  add_order_flags(compute, o);
  compute
      ->add_option("--measures", o.measures,
                   "Comma list of wgie, interval_shannon, weighted_interval_entropy, kappa, eta_gap")
      ->capture_default_str();

  auto* bounds = app.add_subcommand("bounds-check", "Evaluate every bound at each window");
  add_model_flags(bounds, o);
  add_window_flag(bounds, o);
  add_order_flags(bounds, o);

  auto* uniq = app.add_subcommand("uniqueness", "Roots of eta and zeta around the GFR values");
  add_model_flags(uniq, o);
  add_window_flag(uniq, o);
  add_order_flags(uniq, o);

  auto* fit = app.add_subcommand(
      "fit", "Maximum-likelihood fits; with --window, truncated vs full-sample WGIE estimates");
  auto* gof = app.add_subcommand("gof", "Fits plus Kolmogorov-Smirnov distance and p-value");
  for (auto* sc : {fit, gof}) {
    sc->add_option("--data", o.data, "Data file (one value per line) or plane7912 | bearings");
    sc->add_option("--column", o.column, "CSV column name to read from the data file");
    sc->add_option("--family", o.family,
                   "Comma list of exponential, gamma, weibull, ee (default exponential)");
  }
  add_window_flag(fit, o);
  add_order_flags(fit, o);

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo bias/MSE study of the plug-in estimator");
  add_model_flags(sim, o);
  add_window_flag(sim, o);
  add_order_flags(sim, o);
  sim->add_option("--n", o.sizes, "Comma list of sample sizes (default 50,100,500,1000)");
  sim->add_option("--reps", o.reps, "Replications per cell")->capture_default_str();
  sim->add_option("--seed", o.seed, "Base seed (required)");
  sim->add_option("--protocol", o.protocol, "truncated | full_sample")->capture_default_str();

  auto* cmp = app.add_subcommand("compare", "Rank fitted models by mean WGIE over a (u,v) grid");
  cmp->add_option("--data", o.data, "Data file or plane7912 | bearings");
  cmp->add_option("--column", o.column, "CSV column name to read from the data file");
  cmp->add_option("--families", o.families, "Comma list of families")->capture_default_str();
  add_order_flags(cmp, o);
  cmp->add_option("--grid", o.grid, "Points per grid axis over (0.05, 0.95)")->capture_default_str();
  cmp->add_option("--grid-dir", o.grid_dir, "Directory for u,v,t1,t2,value grid CSVs");

  auto* ds = app.add_subcommand("datasets", "Print the embedded datasets");
  ds->add_option("--name", o.dataset, "plane7912 | bearings (default both)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Output result;
    if (compute->parsed()) {
      result = cmd_compute(o);
    } else if (bounds->parsed()) {
      result = cmd_bounds(o);
    } else if (uniq->parsed()) {
      result = cmd_uniqueness(o);
    } else if (fit->parsed()) {
      result = cmd_fit(o, false);
    } else if (gof->parsed()) {
      result = cmd_fit(o, true);
    } else if (sim->parsed()) {
      result = cmd_simulate(o);
    } else if (cmp->parsed()) {
      result = cmd_compare(o, err);
    } else {
      result = cmd_datasets(o);
    }
    if (o.out.empty()) {
      out << result.text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + o.out + "'");
      f << result.text;
    }
    return kExitOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace wgie::cli
