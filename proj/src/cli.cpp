#include "lobby/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lobby/empirics.hpp"
#include "lobby/equilibrium.hpp"
#include "lobby/payoff.hpp"
#include "lobby/profile_io.hpp"
#include "lobby/theorems.hpp"
#include "lobby/verify.hpp"

namespace lobby::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamArgs {
  std::optional<double> pi1, pi2, f1, f2, alpha;
  int capacity = 2;

  bool any() const { return pi1 || pi2 || f1 || f2 || alpha; }
};

void add_param_options(CLI::App& cmd, ParamArgs& p) {
  cmd.add_option("--pi1", p.pi1, "prior on issue 1");
  cmd.add_option("--pi2", p.pi2, "prior on issue 2");
  cmd.add_option("--f1", p.f1, "lobbying cost of group 1");
  cmd.add_option("--f2", p.f2, "lobbying cost of group 2");
  cmd.add_option("--alpha", p.alpha, "weight of issue 1");
  cmd.add_option("--capacity", p.capacity, "issues the policymaker can reform")
      ->check(CLI::IsMember({1, 2}));
}

GameParams params_from(const ParamArgs& p) {
  if (!p.pi1 || !p.pi2 || !p.f1 || !p.f2 || !p.alpha) {
    throw UsageError("--pi1, --pi2, --f1, --f2 and --alpha are all required");
  }
  RawParams raw{*p.pi1, *p.pi2, *p.f1, *p.f2, *p.alpha,
                p.capacity == 1 ? Capacity::One : Capacity::Two};
  try {
    return validate_params(raw);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileUnreadable, fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Either the instance given by flags (with its constructed equilibrium) or
/// the document read from --profile.
ProfileDocument resolve_instance(const ParamArgs& p, const std::string& profile_path,
                                 const ConstructOptions& options = {}) {
  if (!profile_path.empty()) {
    if (p.any()) throw UsageError("give either --profile or parameter flags, not both");
    return read_profile(read_file(profile_path));
  }
  auto params = params_from(p);
  return {params, construct_equilibrium(params, options)};
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw Error(ErrorKind::FileUnreadable, fmt::format("cannot write '{}'", out_path));
  file << text;
}

std::string num(double v) { return format_number(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

nlohmann::ordered_json payoff_json(const PayoffVector& v) {
  nlohmann::ordered_json j;
  j["eu1"] = round12(v.group1);
  j["eu2"] = round12(v.group2);
  j["eudp"] = round12(v.policymaker);
  return j;
}

std::string regime_comment(const RegimeReport& r) {
  std::string s;
  s += fmt::format("# cost_ratio = {}\n", num(r.cost_ratio));
  s += fmt::format("# lemma1_regime = {}\n", to_string(r.lemma1));
  s += fmt::format("# lemma2_regime = {}\n", to_string(r.lemma2));
  s += fmt::format("# theorem1_region = {}{}\n", to_string(r.region),
                   r.region_empty ? " (R2 empty)" : "");
  s += fmt::format("# r2_interval = [{}, {}]\n", num(r.r2_lower), num(r.r2_upper));
  s += fmt::format("# theorem2_lhs = {}\n", num(r.pareto_lhs));
  s += fmt::format("# theorem2_condition = {}\n", flag(r.pareto_condition));
  s += fmt::format("# boundary = {}\n", flag(r.any_boundary()));
  return s;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  ParamArgs params;
  bool strict = false;
  std::string force;
};

std::string do_solve(const SolveArgs& a, const std::string& format, double tol) {
  auto params = params_from(a.params);
  if (!a.force.empty() && params.capacity() == Capacity::One) {
    throw UsageError("--force applies to the capacity-two game only");
  }
  ConstructOptions options;
  options.strict_regime = a.strict;
  if (a.force == "truthful") options.force_lemma1 = Lemma1Regime::Truthful;
  if (a.force == "overlobbying") options.force_lemma1 = Lemma1Regime::OverLobbying;
  auto regimes = classify_regimes(params, tol);
  auto profile = construct_equilibrium(params, options);

  if (format == "json") {
    auto j = profile_to_json(params, profile);
    j["regime_cost_ratio"] = round12(regimes.cost_ratio);
    j["regime_lemma1"] = std::string(to_string(regimes.lemma1));
    j["regime_lemma2"] = std::string(to_string(regimes.lemma2));
    j["regime_theorem1_region"] = std::string(to_string(regimes.region));
    j["regime_boundary"] = regimes.any_boundary();
    return j.dump(2) + "\n";
  }
  if (format == "csv") throw UsageError("solve supports --format text or json");
  return regime_comment(regimes) + write_profile(params, profile);
}

// ---------------------------------------------------------------- payoffs

std::string format_payoffs(const PayoffVector& v, const std::string& format) {
  if (format == "json") return payoff_json(v).dump(2) + "\n";
  if (format == "csv") {
    return fmt::format("eu1,eu2,eudp\n{},{},{}\n", num(v.group1), num(v.group2),
                       num(v.policymaker));
  }
  return fmt::format("EU1 = {}\nEU2 = {}\nEUDP = {}\n", num(v.group1), num(v.group2),
                     num(v.policymaker));
}

std::string format_estimate(const PayoffEstimate& e, const std::string& format) {
  auto se = [&](double PayoffVector::*field) {
    return e.std_error ? num((*e.std_error).*field) : std::string("NA");
  };
  if (format == "json") {
    nlohmann::ordered_json j;
    j["trials"] = e.trials;
    j["seed"] = e.seed;
    j["algorithm"] = std::string(e.algorithm);
    j["mean"] = payoff_json(e.mean);
    j["std_error"] = e.std_error ? payoff_json(*e.std_error) : nlohmann::ordered_json();
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    return fmt::format(
        "trials,seed,algorithm,eu1,eu2,eudp,se_eu1,se_eu2,se_eudp\n"
        "{},{},{},{},{},{},{},{},{}\n",
        e.trials, e.seed, e.algorithm, num(e.mean.group1), num(e.mean.group2),
        num(e.mean.policymaker), se(&PayoffVector::group1), se(&PayoffVector::group2),
        se(&PayoffVector::policymaker));
  }
  return fmt::format(
      "trials = {}\nseed = {}\nalgorithm = {}\n"
      "EU1 = {} (se {})\nEU2 = {} (se {})\nEUDP = {} (se {})\n",
      e.trials, e.seed, e.algorithm, num(e.mean.group1), se(&PayoffVector::group1),
      num(e.mean.group2), se(&PayoffVector::group2), num(e.mean.policymaker),
      se(&PayoffVector::policymaker));
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  SweepGrid grid;
  bool with_n1 = true;
  bool with_n2 = true;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double tol = kTolerance;
};

struct CapacityColumns {
  std::string verified = "NA";
  PayoffVector payoffs{};
  bool have_payoffs = false;
  std::optional<PayoffEstimate> sim;
};

CapacityColumns evaluate_capacity(const GameParams& params, const SweepOptions& o,
                                  std::uint64_t seed) {
  CapacityColumns c;
  try {
    auto profile = construct_equilibrium(params);
    c.verified = flag(verify_equilibrium(profile, params, o.tol).passed());
    c.payoffs = exact_payoffs(profile, params);
    c.have_payoffs = true;
    if (o.trials > 0) c.sim = simulate(profile, params, o.trials, seed);
  } catch (const Error&) {
    // Left as NA; the regime columns still describe the point.
  }
  return c;
}

std::string sweep_row(const RawParams& raw, std::size_t index, const SweepOptions& o) {
  auto params = validate_params(raw);
  auto regimes = classify_regimes(params, o.tol);

  std::vector<std::string> cells = {
      num(raw.pi1), num(raw.pi2), num(raw.f1), num(raw.f2), num(raw.alpha),
      num(regimes.cost_ratio), std::string(to_string(regimes.lemma1)),
      std::string(to_string(regimes.lemma2)), std::string(to_string(regimes.region)),
      flag(regimes.any_boundary()), num(regimes.pareto_lhs),
      flag(regimes.pareto_condition)};

  const std::uint64_t seed = o.seed + index;
  std::optional<CapacityColumns> n2, n1;
  if (o.with_n2) n2 = evaluate_capacity(params.with_capacity(Capacity::Two), o, seed);
  if (o.with_n1) n1 = evaluate_capacity(params.with_capacity(Capacity::One), o, seed);

  auto payoff_cells = [&](const std::optional<CapacityColumns>& c) {
    if (c && c->have_payoffs) {
      cells.push_back(num(c->payoffs.group1));
      cells.push_back(num(c->payoffs.group2));
      cells.push_back(num(c->payoffs.policymaker));
    } else {
      cells.insert(cells.end(), 3, "NA");
    }
  };
  if (o.with_n2) cells.push_back(n2->verified);
  if (o.with_n1) cells.push_back(n1->verified);
  if (o.with_n2) payoff_cells(n2);
  if (o.with_n1) payoff_cells(n1);

  if (o.with_n1 && o.with_n2) {
    std::string t1 = "NA";
    try {
      t1 = flag(theorem1_compare(params, o.tol).holds());
    } catch (const Error&) {
    }
    cells.push_back(t1);
    try {
      auto t2 = theorem2_check(params, o.tol);
      cells.push_back(flag(t2.pareto_verdict));
      cells.push_back(flag(t2.applicable));
      cells.push_back(flag(t2.consistent));
    } catch (const Error&) {
      cells.insert(cells.end(), 3, "NA");
    }
  }

  if (o.trials > 0) {
    auto sim_cells = [&](const std::optional<CapacityColumns>& c) {
      if (c && c->sim) {
        cells.push_back(num(c->sim->mean.group1));
        cells.push_back(num(c->sim->mean.group2));
        cells.push_back(num(c->sim->mean.policymaker));
      } else {
        cells.insert(cells.end(), 3, "NA");
      }
    };
    if (o.with_n2) sim_cells(n2);
    if (o.with_n1) sim_cells(n1);
  }

  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += cells[k];
  }
  return line + "\n";
}

std::string do_sweep(const SweepOptions& o, unsigned jobs) {
  auto points = o.grid.points();
  for (const auto& p : points) {
    auto violations = check_params(p);
    if (!violations.empty()) {
      throw UsageError(fmt::format("grid point outside parameter bounds: {}",
                                   violations.front().message));
    }
  }

  std::vector<std::string> rows(points.size());
  auto work = [&](unsigned worker) {
    for (std::size_t k = worker; k < points.size(); k += jobs) {
      rows[k] = sweep_row(points[k], k, o);
    }
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
  }

  std::string csv = sweep_header(o.with_n1, o.with_n2, o.trials > 0);
  for (const auto& r : rows) csv += r;
  return csv;
}

// ---------------------------------------------------------------- quadrants

struct QuadrantArgs {
  std::string data;
  empirics::ColumnMapping mapping;
  std::string delimiter;
  std::string scale = "epin";
  std::optional<double> index_cutoff, abundance_cutoff, income_cutoff;
  bool countries = false;
};

std::string do_quadrants(QuadrantArgs a, const std::string& format, std::ostream& err) {
  using namespace empirics;
  a.mapping.scale = a.scale == "nrgi" ? IndexScale::Nrgi : IndexScale::Epin;
  if (a.delimiter == "tab" || a.delimiter == "\\t") {
    a.mapping.delimiter = '\t';
  } else if (a.delimiter.size() == 1) {
    a.mapping.delimiter = a.delimiter[0];
  } else if (!a.delimiter.empty()) {
    throw UsageError("--delimiter takes one character or 'tab'");
  }
  auto t = Thresholds::for_scale(a.mapping.scale);
  if (a.index_cutoff) t.index_high_cutoff = *a.index_cutoff;
  if (a.abundance_cutoff) t.abundance_cutoff = *a.abundance_cutoff;
  if (a.income_cutoff) t.income_low_cutoff = *a.income_cutoff;

  auto loaded = load_countries(a.data, a.mapping, t);
  for (const auto& d : loaded.diagnostics) {
    err << fmt::format("{}: {}\n", to_string(d.kind), d.message);
  }
  if (a.countries) {
    if (format == "json") throw UsageError("--countries supports csv output only");
    return format_countries_csv(loaded.records, t);
  }
  auto table = anomaly_table(loaded.records, t);
  if (format == "csv") return format_table_csv(table);
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (int q = 0; q < 4; ++q) {
      j.push_back({{"quadrant", std::string(to_string(static_cast<Quadrant>(q)))},
                   {"members", table.members[q]},
                   {"anomalies", table.anomalies[q]},
                   {"anomaly_names", table.anomaly_names[q]}});
    }
    return j.dump(2) + "\n";
  }
  return format_table_text(table);
}

}  // namespace

double SweepAxis::value(int k) const {
  if (steps <= 1) return min;
  return min + (max - min) * k / (steps - 1);
}

std::size_t SweepGrid::size() const {
  return std::size_t(pi1.steps) * pi2.steps * f1.steps * f2.steps * alpha.steps;
}

std::vector<RawParams> SweepGrid::points() const {
  std::vector<RawParams> out;
  out.reserve(size());
  for (int a = 0; a < pi1.steps; ++a)
    for (int b = 0; b < pi2.steps; ++b)
      for (int c = 0; c < f1.steps; ++c)
        for (int d = 0; d < f2.steps; ++d)
          for (int e = 0; e < alpha.steps; ++e) {
            out.push_back({pi1.value(a), pi2.value(b), f1.value(c), f2.value(d),
                           alpha.value(e), Capacity::Two});
          }
  return out;
}

SweepGrid parse_grid(const std::string& text) {
  SweepGrid grid;
  if (text.empty() || text == "default") return grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("grid entry needs name=min:max:steps");
    std::string name = item.substr(0, eq);
    SweepAxis* axis = name == "pi1"   ? &grid.pi1
                      : name == "pi2" ? &grid.pi2
                      : name == "f1"  ? &grid.f1
                      : name == "f2"  ? &grid.f2
                      : name == "alpha" ? &grid.alpha
                                        : nullptr;
    if (!axis) throw std::invalid_argument("unknown grid axis '" + name + "'");
    std::stringstream range(item.substr(eq + 1));
    std::string lo, hi, steps;
    if (!std::getline(range, lo, ':') || !std::getline(range, hi, ':') ||
        !std::getline(range, steps, ':')) {
      throw std::invalid_argument("grid axis '" + name + "' needs min:max:steps");
    }
    axis->min = std::stod(lo);
    axis->max = std::stod(hi);
    axis->steps = std::stoi(steps);
    if (axis->steps < 1) throw std::invalid_argument("grid steps must be >= 1");
  }
  return grid;
}

std::string sweep_header(bool with_n1, bool with_n2, bool with_simulation) {
  std::string h =
      "pi1,pi2,f1,f2,alpha,C,lemma1_regime,lemma2_regime,theorem1_region,boundary,"
      "theorem2_lhs,theorem2_condition";
  if (with_n2) h += ",n2_verified";
  if (with_n1) h += ",n1_verified";
  if (with_n2) h += ",n2_eu1,n2_eu2,n2_eudp";
  if (with_n1) h += ",n1_eu1,n1_eu2,n1_eudp";
  if (with_n1 && with_n2) {
    h += ",theorem1_holds,pareto_verdict,theorem2_applicable,theorem2_consistent";
  }
  if (with_simulation) {
    if (with_n2) h += ",n2_sim_eu1,n2_sim_eu2,n2_sim_eudp";
    if (with_n1) h += ",n1_sim_eu1,n1_sim_eu2,n1_sim_eudp";
  }
  return h + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-issue lobbying game: equilibria, verification, payoffs"};
  app.require_subcommand(1);

  double tol = kTolerance;
  std::string out_path;
  std::string format = "text";
  std::uint64_t seed = 1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "comparison tolerance")->capture_default_str();
    cmd->add_option("--out", out_path, "write output to this file");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
  };

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "print regimes and the equilibrium profile");
  add_param_options(*solve, solve_args.params);
  solve->add_flag("--strict", solve_args.strict, "reject knife-edge parameters");
  solve->add_option("--force", solve_args.force, "capacity-two construction to force")
      ->check(CLI::IsMember({"truthful", "overlobbying"}));
  add_common(solve);

  std::string profile_path;
  auto* verify = app.add_subcommand("verify", "check a profile document for equilibrium");
  verify->add_option("--profile", profile_path, "profile document")->required();
  add_common(verify);

  ParamArgs payoff_params;
  auto* payoffs = app.add_subcommand("payoffs", "exact expected payoffs");
  add_param_options(*payoffs, payoff_params);
  payoffs->add_option("--profile", profile_path, "profile document instead of flags");
  add_common(payoffs);

  ParamArgs sim_params;
  std::uint64_t trials = 100000;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo payoff estimate");
  add_param_options(*sim, sim_params);
  sim->add_option("--profile", profile_path, "profile document instead of flags");
  sim->add_option("--trials", trials, "number of plays")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
  add_common(sim);

  std::string grid_text = "default";
  std::string sweep_capacity = "both";
  std::uint64_t sweep_trials = 0;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid to CSV");
  sweep->add_option("--grid", grid_text, "'default' or pi1=min:max:steps,...")
      ->capture_default_str();
  sweep->add_option("--capacity", sweep_capacity, "1, 2 or both")
      ->check(CLI::IsMember({"1", "2", "both"}));
  sweep->add_option("--trials", sweep_trials, "add simulated payoffs with this many plays");
  sweep->add_option("--seed", seed, "RNG seed (offset by the row index)");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_common(sweep);

  QuadrantArgs quad;
  auto* quadrants = app.add_subcommand("quadrants", "quadrant anomaly table from country data");
  quadrants->add_option("--data,data", quad.data, "country CSV/TSV")->required();
  quadrants->add_option("--name-col", quad.mapping.name)->capture_default_str();
  quadrants->add_option("--index-col", quad.mapping.index)->capture_default_str();
  quadrants->add_option("--abundance-col", quad.mapping.abundance)->capture_default_str();
  quadrants->add_option("--gni-col", quad.mapping.gni)->capture_default_str();
  quadrants->add_option("--income-col", quad.mapping.income)->capture_default_str();
  quadrants->add_option("--delimiter", quad.delimiter, "one character or 'tab'");
  quadrants->add_option("--scale", quad.scale, "index scale")
      ->check(CLI::IsMember({"epin", "nrgi"}))
      ->capture_default_str();
  quadrants->add_option("--index-cutoff", quad.index_cutoff);
  quadrants->add_option("--abundance-cutoff", quad.abundance_cutoff);
  quadrants->add_option("--income-cutoff", quad.income_cutoff);
  quadrants->add_flag("--countries", quad.countries, "per-country CSV instead of the table");
  add_common(quadrants);

  std::vector<std::string> argv_store = {"lobbygame"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      emit(do_solve(solve_args, format, tol), out_path, out);
    } else if (verify->parsed()) {
      auto doc = read_profile(read_file(profile_path));
      auto report = verify_equilibrium(doc.profile, doc.params, tol);
      std::string text;
      if (format == "json") {
        nlohmann::ordered_json j;
        j["passed"] = report.passed();
        j["bayes_ok"] = report.bayes_ok;
        j["lobby_ok"] = report.lobby_ok;
        j["access_ok"] = report.access_ok;
        j["policy_ok"] = report.policy_ok;
        j["max_violation"] = round12(report.max_violation);
        text = j.dump(2) + "\n";
      } else {
        text = format_report(report);
      }
      emit(text, out_path, out);
      return report.passed() ? 0 : 1;
    } else if (payoffs->parsed()) {
      auto doc = resolve_instance(payoff_params, profile_path);
      emit(format_payoffs(exact_payoffs(doc.profile, doc.params), format), out_path, out);
    } else if (sim->parsed()) {
      auto doc = resolve_instance(sim_params, profile_path);
      emit(format_estimate(simulate(doc.profile, doc.params, trials, seed), format),
           out_path, out);
    } else if (sweep->parsed()) {
      if (format == "json") throw UsageError("sweep writes CSV");
      SweepOptions o;
      try {
        o.grid = parse_grid(grid_text);
      } catch (const std::exception& e) {
        throw UsageError(fmt::format("--grid: {}", e.what()));
      }
      o.with_n1 = sweep_capacity != "2";
      o.with_n2 = sweep_capacity != "1";
      o.trials = sweep_trials;
      o.seed = seed;
      o.tol = tol;
      emit(do_sweep(o, jobs), out_path, out);
    } else if (quadrants->parsed()) {
      emit(do_quadrants(quad, format, err), out_path, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lobby::cli
