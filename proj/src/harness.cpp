// Copyright 2026 The commsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
#include "commsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "commsim/presets.hpp"
#include "commsim/problems.hpp"

namespace commsim {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
  return x;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x < 0.0 || std::floor(x) != x) {
    throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
  }
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, sep);) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  return out;
}

// Section view that remembers which keys were read, so typos are reported.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name)
      : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> get(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    if (auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'))) {
      return *v;
    }
    return std::nullopt;
  }

  void check_unused() const {
    if (!tree_) return;
    for (const auto& [k, v] : *tree_) {
      if (!used_.count(k)) {
        throw ConfigError(fmt::format("unknown key '{}' in [{}]", k, name_));
      }
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("[run] trials must be >= 1");
  if (rounds < 1) throw ConfigError("[run] rounds must be >= 1");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) {
      throw ConfigError("[run] eps targets must be strictly decreasing");
    }
  }
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("[run] eps targets must be positive");
  }
  const auto& a = algorithm.name;
  if (a != "adiana" && a != "diana" && a != "ef21" && a != "nesterov") {
    throw ConfigError("unknown algorithm '" + a + "'");
  }
  if (a == "adiana" && algorithm.schedule != "sc" && algorithm.schedule != "gc" &&
      algorithm.schedule != "manual") {
    throw ConfigError("unknown schedule '" + algorithm.schedule + "'");
  }
  if (a != "nesterov" && !compressor.hint) {
    throw ConfigError("[compressor] kind is required for " + a);
  }
}

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [name, sub] : root) {
    if (name != "problem" && name != "algorithm" && name != "compressor" &&
        name != "run") {
      throw ConfigError("unknown config section [" + name + "]");
    }
  }
  ExperimentConfig c;

  Section pr(child(root, "problem"), "problem");
  auto& p = c.problem;
  if (auto v = pr.get("type")) p.type = *v;
  if (auto v = pr.get("mu")) p.mu = to_double("mu", *v);
  if (auto v = pr.get("L")) p.L = to_double("L", *v);
  if (auto v = pr.get("d")) p.d = to_size("d", *v);
  if (auto v = pr.get("n")) p.n = to_size("n", *v);
  if (auto v = pr.get("M")) p.M = to_size("M", *v);
  if (auto v = pr.get("cond")) p.cond = to_double("cond", *v);
  if (auto v = pr.get("seed")) p.seed = to_size("seed", *v);
  if (auto v = pr.get("rhs")) {
    if (*v != "zero" && *v != "gaussian") throw ConfigError("rhs must be zero or gaussian");
    p.random_rhs = *v == "gaussian";
  }
  if (auto v = pr.get("delta")) p.delta = to_double("delta", *v);
  if (auto v = pr.get("path")) p.path = *v;
  if (auto v = pr.get("points_per_worker")) p.points_per_worker = to_size("points_per_worker", *v);
  if (auto v = pr.get("fstar_cache")) p.fstar_cache = *v;
  pr.check_unused();

  Section al(child(root, "algorithm"), "algorithm");
  auto& a = c.algorithm;
  bool manual_given = false;
  if (auto v = al.get("preset")) {
    const Preset& ps = find_preset(*v);
    a.preset = *v;
    a.name = ps.algorithm;
    if (ps.adiana) {
      a.manual = *ps.adiana;
      manual_given = true;
    }
    a.gamma = ps.gamma;
    a.eta = ps.eta;
    a.theta = ps.theta;
    if (ps.algorithm != "nesterov") c.compressor.hint = ps.compressor;
  }
  if (auto v = al.get("name")) a.name = *v;
  if (auto v = al.get("shift_init")) {
    if (*v == "zero") {
      a.shift_init = ShiftInit::kZero;
    } else if (*v == "gradient") {
      a.shift_init = ShiftInit::kGradient;
    } else {
      throw ConfigError("shift_init must be zero or gradient");
    }
  }
  if (a.name == "adiana") {
    if (auto v = al.get("eta")) { a.manual.eta = parse_rule(*v); manual_given = true; }
    if (auto v = al.get("theta1")) a.manual.theta1 = parse_rule(*v);
    if (auto v = al.get("theta2")) a.manual.theta2 = parse_rule(*v);
    if (auto v = al.get("p")) a.manual.p = parse_rule(*v);
    if (auto v = al.get("alpha")) a.manual.alpha = parse_rule(*v);
    if (auto v = al.get("beta")) a.manual.beta = parse_rule(*v);
    if (auto v = al.get("gamma")) a.manual.gamma = parse_rule(*v);
    a.schedule = manual_given ? "manual" : "sc";
    if (auto v = al.get("schedule")) a.schedule = *v;
  } else if (a.name == "diana" || a.name == "ef21") {
    if (auto v = al.get("gamma")) a.gamma = to_double("gamma", *v);
    if (auto v = al.get("alpha")) a.alpha = to_double("alpha", *v);
  } else if (a.name == "nesterov") {
    if (auto v = al.get("eta")) a.eta = to_double("eta", *v);
    if (auto v = al.get("theta")) a.theta = to_double("theta", *v);
  }
  al.check_unused();

  Section co(child(root, "compressor"), "compressor");
  if (auto v = co.get("hint")) c.compressor.hint = *v;
  if (auto kind = co.get("kind")) {
    std::string h = *kind;
    if (auto s = co.get("s")) h += ":" + *s;
    if (auto r = co.get("randomness")) h += ":" + *r;
    c.compressor.hint = h;
  } else {
    co.get("s");
    co.get("randomness");
  }
  if (auto v = co.get("raw_bits")) c.compressor.raw_bits = static_cast<int>(to_size("raw_bits", *v));
  co.check_unused();

  Section ru(child(root, "run"), "run");
  if (auto v = ru.get("rounds")) c.rounds = to_size("rounds", *v);
  if (auto v = ru.get("trials")) c.trials = to_size("trials", *v);
  if (auto v = ru.get("seed")) c.seed = to_size("seed", *v);
  if (auto v = ru.get("eps")) {
    c.eps.clear();
    for (const auto& e : split(*v, ',')) c.eps.push_back(to_double("eps", e));
  }
  if (auto v = ru.get("output")) c.output = *v;
  if (auto v = ru.get("execution")) c.execution = parse_execution(*v);
  if (auto v = ru.get("lyapunov")) c.track_lyapunov = to_bool("lyapunov", *v);
  if (auto v = ru.get("checkpoint_every")) c.checkpoint_every = to_size("checkpoint_every", *v);
  ru.check_unused();

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

void apply_env_overrides(ExperimentConfig& config) {
  if (const char* s = std::getenv("COMMSIM_SEED"); s && *s) {
    config.seed = to_size("COMMSIM_SEED", s);
  }
}

ProblemPtr build_problem(const ProblemConfig& pc) {
  const std::string& t = pc.type;
  if (t == "constructed") return gen_constructed_quadratic(pc.mu, pc.L, pc.d, pc.n);
  if (t == "least_squares") {
    LeastSquaresSpec s;
    s.n = pc.n;
    s.M = pc.M;
    s.d = pc.d;
    s.cond = pc.cond;
    s.seed = pc.seed;
    s.random_rhs = pc.random_rhs;
    return gen_least_squares(s);
  }
  if (t == "libsvm") {
    if (pc.path.empty()) throw ConfigError("[problem] path is required for libsvm");
    auto p = load_libsvm(pc.path, pc.n, pc.points_per_worker);
    ReferenceOptimumOptions o;
    o.cache_path = pc.fstar_cache.value_or(pc.path + ".fstar");
    attach_reference_optimum(*p, o);
    return p;
  }
  if (t == "sc-example1") return gen_zero_chain_sc(pc.L, pc.mu, pc.n, pc.d, pc.delta).problem;
  if (t == "gc-example1") return gen_zero_chain_gc(pc.L, pc.n, pc.d, pc.delta).problem;
  if (t == "gc-example3") return gen_zero_chain_gc3(pc.L, pc.n, pc.d, pc.delta).problem;
  if (t == "sc-homogeneous") {
    return gen_sc_homogeneous(pc.L, pc.mu, pc.n, pc.d, pc.delta).problem;
  }
  throw ConfigError("unknown problem type '" + t + "'");
}

CompressorSpec build_compressor(const ExperimentConfig& config, std::size_t d) {
  if (config.algorithm.name == "nesterov") return CompressorSpec::identity(d);
  CompressorSpec s = resolve_compressor_hint(*config.compressor.hint, d);
  s.raw_bits = config.compressor.raw_bits;
  s.validate();
  return s;
}

Trace run_trial(const ExperimentConfig& config, const Problem& problem,
                const CompressorSpec& spec, std::size_t trial) {
  RunOptions o;
  o.rounds = config.rounds;
  o.seed = config.seed;
  o.trial = trial;
  o.execution = config.execution;
  o.track_lyapunov = config.track_lyapunov;
  o.checkpoint_every = config.checkpoint_every;
  o.shift_init = config.algorithm.shift_init;
  const auto& a = config.algorithm;
  if (a.name == "adiana") {
    const double omega = spec.omega();
    AdianaSchedule sched;
    if (a.schedule == "sc") {
      sched = AdianaSchedule::strongly_convex(problem.smoothness(),
                                              problem.strong_convexity(),
                                              problem.workers(), omega);
    } else if (a.schedule == "gc") {
      sched = AdianaSchedule::generally_convex(problem.smoothness(),
                                               problem.workers(), omega);
    } else {
      sched = AdianaSchedule::manual(a.manual, problem.strong_convexity(), omega);
    }
    return run_adiana(problem, spec, sched, o);
  }
  if (a.name == "diana") return run_diana(problem, spec, a.gamma, a.alpha, o);
  if (a.name == "ef21") return run_ef21(problem, spec, a.gamma, o);
  if (a.name == "nesterov") return run_nesterov(problem, a.eta, a.theta, o);
  throw ConfigError("unknown algorithm '" + a.name + "'");
}

TccResult compute_tcc(std::span<const Trace> ensemble, double eps) {
  if (ensemble.empty()) throw Error("compute_tcc needs a non-empty ensemble");
  TccResult r;
  r.eps = eps;
  std::size_t len = 0;
  for (const auto& t : ensemble) len = std::max(len, t.points().size());
  for (std::size_t j = 0; j < len; ++j) {
    double sum = 0.0, bits = 0.0;
    for (const auto& t : ensemble) {
      if (j >= t.points().size()) return r;
      sum += t.points()[j].subopt;
      bits += t.points()[j].bits;
    }
    const double K = static_cast<double>(ensemble.size());
    if (sum / K <= eps) {
      r.rounds = ensemble.front().points()[j].round;
      r.bits = bits / K;
      return r;
    }
  }
  return r;
}

std::vector<SummaryRow> summarize(std::span<const Trace> ensemble) {
  std::vector<SummaryRow> rows;
  std::size_t len = 0;
  for (const auto& t : ensemble) len = std::max(len, t.points().size());
  for (std::size_t j = 0; j < len; ++j) {
    SummaryRow row;
    // Shifted by the first value so identical trials give exactly zero spread.
    std::optional<double> shift;
    double s1 = 0.0, bits = 0.0;
    for (const auto& t : ensemble) {
      if (j >= t.points().size()) continue;
      row.round = t.points()[j].round;
      if (!shift) shift = t.points()[j].subopt;
      s1 += t.points()[j].subopt - *shift;
      bits += t.points()[j].bits;
      ++row.count;
    }
    const double K = static_cast<double>(row.count);
    const double dm = s1 / K;
    row.mean = *shift + dm;
    row.bits = bits / K;
    double s2 = 0.0;
    for (const auto& t : ensemble) {
      if (j >= t.points().size()) continue;
      const double e = t.points()[j].subopt - *shift - dm;
      s2 += e * e;
    }
    row.std = row.count > 1 ? std::sqrt(s2 / (K - 1.0)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_summary_csv(std::ostream& os, std::span<const Trace> ensemble) {
  os << "# bits_cum: per-worker cumulative bits; message-dependent costs are "
        "averaged across workers each round, then across trials\n";
  os << kSummaryHeader << '\n';
  if (ensemble.empty()) return;
  const auto& m = ensemble.front().meta();
  const std::string prefix =
      fmt::format("{},{},{},{},{},{},", m.algorithm, m.compressor,
                  format_double(m.omega), m.n, m.d, m.seed);
  for (const auto& r : summarize(ensemble)) {
    os << prefix << r.round << ',' << format_double(r.bits) << ','
       << format_double(r.mean) << ',' << format_double(r.std) << ','
       << r.count << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, build_problem(config.problem));
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                ProblemPtr problem) {
  config.validate();
  ExperimentResult res;
  res.problem = problem;
  res.compressor = build_compressor(config, problem->dim());
  for (std::size_t t = 0; t < config.trials; ++t) {
    res.traces.push_back(run_trial(config, *problem, res.compressor, t));
    res.partial = res.partial || res.traces.back().diverged();
  }
  std::sort(res.traces.begin(), res.traces.end(),
            [](const Trace& a, const Trace& b) { return a.meta().trial < b.meta().trial; });
  res.summary = summarize(res.traces);
  for (double e : config.eps) res.tcc.push_back(compute_tcc(res.traces, e));

  if (!config.output.empty()) {
    std::ofstream raw(config.output + ".raw.csv", std::ios::binary);
    write_trace_csv(raw, res.traces);
    std::ofstream sum(config.output + ".summary.csv", std::ios::binary);
    write_summary_csv(sum, res.traces);
    std::ofstream meta(config.output + ".meta.txt", std::ios::binary);
    write_metadata(meta, *problem);
    meta << "algorithm=" << config.algorithm.name << '\n';
    if (config.algorithm.preset) meta << "preset=" << *config.algorithm.preset << '\n';
    meta << "compressor=" << res.compressor.id() << '\n';
    meta << "omega=" << format_double(res.compressor.omega()) << '\n';
    meta << "seed=" << config.seed << '\n';
    meta << "trials=" << config.trials << '\n';
    meta << "rounds=" << config.rounds << '\n';
    meta << "partial=" << (res.partial ? "true" : "false") << '\n';
    if (!raw || !sum || !meta) throw Error("failed writing outputs under '" + config.output + "'");
  }
  return res;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw ConfigError("log grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> v;
  if (count == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    v.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                       static_cast<double>(count - 1)));
  }
  return v;
}

GridSpec parse_grid(std::istream& is) {
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("grid parse error: ") + e.what());
  }
  GridSpec g;
  if (const auto* grid = child(root, "grid")) {
    for (const auto& [k, v] : *grid) {
      const std::string text = v.get_value<std::string>();
      std::vector<double> values;
      if (text.rfind("log:", 0) == 0) {
        const auto f = split(text.substr(4), ':');
        if (f.size() != 3) throw ConfigError("grid '" + k + "': expected log:lo:hi:count");
        values = log_grid(to_double(k, f[0]), to_double(k, f[1]), to_size(k, f[2]));
      } else {
        for (const auto& s : split(text, ',')) values.push_back(to_double(k, s));
      }
      if (values.empty()) throw ConfigError("grid '" + k + "' is empty");
      g.axes.emplace_back(k, std::move(values));
    }
  }
  if (g.axes.empty()) throw ConfigError("grid file has no [grid] entries");
  if (const auto* tune = child(root, "tune")) {
    for (const auto& [k, v] : *tune) {
      if (k != "budget_fraction") throw ConfigError("unknown key '" + k + "' in [tune]");
      g.budget_fraction = to_double(k, v.get_value<std::string>());
    }
  }
  if (!(g.budget_fraction > 0.0 && g.budget_fraction <= 1.0)) {
    throw ConfigError("budget_fraction must be in (0, 1]");
  }
  return g;
}

GridSpec load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid '" + path + "'");
  return parse_grid(in);
}

ExperimentConfig with_params(
    const ExperimentConfig& config,
    const std::vector<std::pair<std::string, double>>& params) {
  ExperimentConfig c = config;
  auto& a = c.algorithm;
  for (const auto& [k, v] : params) {
    if (a.name == "adiana") {
      const Rule r = Rule::constant(v);
      if (k == "eta") a.manual.eta = r;
      else if (k == "theta1") a.manual.theta1 = r;
      else if (k == "theta2") a.manual.theta2 = r;
      else if (k == "p") a.manual.p = r;
      else if (k == "alpha") a.manual.alpha = r;
      else if (k == "beta") a.manual.beta = r;
      else if (k == "gamma") a.manual.gamma = r;
      else throw ConfigError("adiana has no tunable parameter '" + k + "'");
      a.schedule = "manual";
    } else if (a.name == "diana" || a.name == "ef21") {
      if (k == "gamma") a.gamma = v;
      else if (k == "alpha" && a.name == "diana") a.alpha = v;
      else throw ConfigError(a.name + " has no tunable parameter '" + k + "'");
    } else {
      if (k == "eta") a.eta = v;
      else if (k == "theta") a.theta = v;
      else throw ConfigError("nesterov has no tunable parameter '" + k + "'");
    }
  }
  return c;
}

TuneResult tune_grid(const ExperimentConfig& config, const GridSpec& grid) {
  return tune_grid(config, grid, build_problem(config.problem));
}

TuneResult tune_grid(const ExperimentConfig& config, const GridSpec& grid,
                     ProblemPtr problem) {
  ExperimentConfig base = config;
  base.output.clear();
  base.rounds = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(static_cast<double>(config.rounds) *
                                             grid.budget_fraction)));
  const std::string step =
      config.algorithm.name == "diana" || config.algorithm.name == "ef21" ? "gamma" : "eta";
  const CompressorSpec spec = build_compressor(base, problem->dim());

  TuneResult res;
  std::vector<std::size_t> idx(grid.axes.size(), 0);
  for (bool more = true; more;) {
    GridPoint pt;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
      pt.params.emplace_back(grid.axes[a].first, grid.axes[a].second[idx[a]]);
    }
    const ExperimentConfig cfg = with_params(base, pt.params);
    double sum = 0.0;
    try {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const Trace tr = run_trial(cfg, *problem, spec, t);
        if (tr.diverged() || tr.points().empty()) {
          pt.diverged = true;
          break;
        }
        sum += tr.points().back().subopt;
      }
    } catch (const ConfigError&) {
      pt.diverged = true;
    }
    pt.final_subopt = pt.diverged ? std::numeric_limits<double>::infinity()
                                  : sum / static_cast<double>(cfg.trials);
    res.evaluated.push_back(pt);

    more = false;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      if (++idx[a] < grid.axes[a].second.size()) {
        more = true;
        break;
      }
      idx[a] = 0;
    }
  }

  auto step_of = [&](const GridPoint& p) {
    for (const auto& [k, v] : p.params) {
      if (k == step) return v;
    }
    return 0.0;
  };
  auto better = [&](const GridPoint& x, const GridPoint& y) {
    if (x.final_subopt != y.final_subopt) return x.final_subopt < y.final_subopt;
    if (step_of(x) != step_of(y)) return step_of(x) < step_of(y);
    for (std::size_t i = 0; i < x.params.size(); ++i) {
      if (x.params[i].second != y.params[i].second) {
        return x.params[i].second < y.params[i].second;
      }
    }
    return false;
  };
  const GridPoint* best = nullptr;
  for (const auto& p : res.evaluated) {
    if (p.diverged) continue;
    if (!best || better(p, *best)) best = &p;
  }
  if (!best) {
    std::string desc;
    for (const auto& [k, vals] : grid.axes) {
      desc += " " + k + "={";
      for (std::size_t i = 0; i < vals.size(); ++i) {
        desc += (i ? "," : "") + format_double(vals[i]);
      }
      desc += "}";
    }
    throw ConfigError("every grid point diverged:" + desc);
  }
  res.best = *best;
  return res;
}

}  // namespace commsim
