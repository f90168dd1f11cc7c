#include "vlmc/cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <optional>
#include <sstream>

#include "vlmc/cascades.hpp"
#include "vlmc/cli/config.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/process.hpp"
#include "vlmc/prw1d.hpp"
#include "vlmc/prw2d.hpp"
#include "vlmc/semi_markov.hpp"
#include "vlmc/stationary.hpp"

namespace vlmc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModel = 1;
constexpr int kExitInconclusive = 2;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17) << x;
  return s.str();
}

void prepare(std::ostream& s) {
  s.imbue(std::locale::classic());
  s << std::setprecision(17);
}

struct Options {
  std::string model_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string csv;
  std::size_t steps = 1000;
  std::size_t horizon = 1000;
  std::size_t trials = 10000;
  std::size_t jumps = 1000;
  std::size_t k_max = 20;
  std::string source;
  std::string cylinder;
};

struct Context {
  const Options& opt;
  const ModelConfig& config;
  std::ostream& out;
  std::ostream& err;
  std::string echo;

  std::uint64_t seed() const {
    if (opt.seed) return *opt.seed;
    if (const char* env = std::getenv("VLMC_WALKS_SEED"); env && *env) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0') {
        throw Error(ErrorCode::SemanticError, "VLMC_WALKS_SEED is not an unsigned integer",
                    "VLMC_WALKS_SEED");
      }
      return v;
    }
    return config.seed.value_or(0);
  }

  Word init() const {
    if (config.init) return *config.init;
    const Alphabet& a = config.model.alphabet();
    if (config.model.is_comb() && a == Alphabet("du")) return "du";
    if (config.model.is_comb() && a == compass()) return "en";
    throw Error(ErrorCode::SemanticError, "this model needs an \"init\" word", "/init");
  }

  /// Writes the CSV to --csv when given; "-" replaces the report on stdout.
  bool csv_to_stdout() const { return opt.csv == "-"; }

  void emit_csv(const std::function<void(std::ostream&)>& write) const {
    if (opt.csv.empty()) return;
    if (csv_to_stdout()) {
      write(out);
      return;
    }
    std::ofstream file(opt.csv);
    if (!file) throw Error(ErrorCode::SemanticError, "cannot write '" + opt.csv + "'", opt.csv);
    prepare(file);
    write(file);
  }

  /// Report stream; swallowed when the CSV goes to stdout.
  std::ostream& report() const {
    static std::ostringstream sink;
    sink.str("");
    return csv_to_stdout() ? sink : out;
  }

  void header() const {
    std::ostream& r = report();
    r << "command: " << echo << '\n';
    r << "model: " << fingerprint(config) << '\n';
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SemanticError, "cannot read model file '" + path + "'", path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string join(const std::vector<Word>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : ",") + w;
  return s;
}

std::string describe(const CascadeSeriesResult& r) {
  std::string s = num(r.value) + " (" + to_string(r.status);
  if (r.analytic) s += ", analytic";
  if (r.terms_used) s += ", " + std::to_string(r.terms_used) + " terms";
  if (!r.note.empty()) s += ", " + r.note;
  return s + ")";
}

void csv_series_row(std::ostream& s, const char* kind, const Word& row, const Word& col,
                    const CascadeSeriesResult& r) {
  s << kind << ',' << row << ',' << col << ',' << to_string(r.status) << ',' << num(r.value) << ','
    << r.terms_used << ',' << (r.analytic ? 1 : 0) << '\n';
}

int cmd_check(const Context& c) {
  c.header();
  std::ostream& r = c.report();
  const ProbabilizedTree& m = c.config.model;
  std::string letters;
  for (Letter x : m.alphabet().symbols()) letters += (letters.empty() ? "" : ",") + std::string(1, x);
  r << "alphabet: " << letters << '\n';
  r << "tree: " << (m.is_comb() ? "comb" : "explicit") << '\n';
  if (m.is_comb()) {
    r << "contexts: infinite (alpha^k beta for every ordered pair)\n";
  } else {
    r << "contexts: " << m.tree().leaves().size() << '\n';
    r << "height: " << *m.tree().height() << '\n';
  }
  const auto set = alpha_lis_set(m.tree());
  r << "alpha-lis: " << set.members.size() << " {" << join(set.members) << "}\n";
  const auto stable = is_stable(m.tree());
  r << "stable: " << (stable.stable ? "yes" : "no (witness " + *stable.witness + ")") << '\n';
  const auto nn = validate_non_null(m);
  r << "non-null: " << (nn.pass ? "pass" : "fail") << '\n';
  for (const auto& [context, letter] : nn.zeros) {
    r << "  zero: q_" << context << "(" << letter << ")\n";
  }
  r << "vanishing run tails: " << (cascade_terms_vanish(m) ? "yes" : "no") << '\n';
  if (c.config.init) {
    r << "init: " << *c.config.init << " (context " << pref(m.tree(), *c.config.init) << ")\n";
  }
  r << "status: valid\n";
  return kExitOk;
}

int cmd_cascades(const Context& c) {
  const ProbabilizedTree& m = c.config.model;
  const auto& policy = c.config.policy;
  const auto stable = is_stable(m.tree());
  if (!stable.stable) {
    throw Error(ErrorCode::Unsupported, "the context tree is not stable", *stable.witness);
  }
  const auto set = alpha_lis_set(m.tree());
  std::vector<std::pair<Word, CascadeSeriesResult>> kappas;
  std::vector<std::tuple<Word, Word, CascadeSeriesResult>> entries;
  bool inconclusive = false;
  for (const auto& s : set.members) {
    kappas.emplace_back(s, kappa(m, s, policy));
    inconclusive |= kappas.back().second.inconclusive();
  }
  for (const auto& row : set.members) {
    for (const auto& col : set.members) {
      entries.emplace_back(row, col, q_entry(m, row, col, policy));
      inconclusive |= std::get<2>(entries.back()).inconclusive();
    }
  }
  c.header();
  std::ostream& r = c.report();
  r << "alpha-lis order: " << join(set.members) << '\n';
  for (const auto& [s, k] : kappas) r << "kappa[" << s << "] = " << describe(k) << '\n';
  for (const auto& [row, col, q] : entries) {
    r << "Q[" << row << "," << col << "] = " << describe(q) << '\n';
  }
  if (inconclusive) r << "warning: some series are inconclusive\n";
  c.emit_csv([&](std::ostream& s) {
    s << "kind,row,col,status,value,terms_used,analytic\n";
    for (const auto& [a, k] : kappas) csv_series_row(s, "kappa", a, "", k);
    for (const auto& [row, col, q] : entries) csv_series_row(s, "q", row, col, q);
  });
  return inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_stationary(const Context& c) {
  const auto verdict = stationarity_verdict(c.config.model, c.config.policy);
  c.header();
  std::ostream& r = c.report();
  r << "verdict: " << to_string(verdict.outcome) << '\n';
  r << "reason: " << verdict.reason << '\n';
  if (verdict.measure) {
    const auto& m = *verdict.measure;
    for (std::size_t i = 0; i < m.index().size(); ++i) {
      r << "pi(" << m.index()[i] << ") = " << num(m.base()(static_cast<Eigen::Index>(i))) << '\n';
    }
    r << "normalization: " << num(m.normalization()) << '\n';
    r << "residual: " << num(m.residual()) << '\n';
    if (!c.opt.cylinder.empty()) {
      r << "cylinder " << c.opt.cylinder << ": "
        << num(pi_cylinder(m, c.opt.cylinder, c.config.policy)) << '\n';
    }
    c.emit_csv([&](std::ostream& s) {
      s << "alpha_lis,mass\n";
      for (std::size_t i = 0; i < m.index().size(); ++i) {
        s << m.index()[i] << ',' << num(m.base()(static_cast<Eigen::Index>(i))) << '\n';
      }
    });
    return kExitOk;
  }
  if (verdict.inconclusive) return kExitInconclusive;
  if (!c.opt.cylinder.empty()) {
    c.err << "error: no stationary probability, cylinder " << c.opt.cylinder << " is undefined\n";
    return kExitModel;
  }
  c.emit_csv([](std::ostream& s) { s << "alpha_lis,mass\n"; });
  return kExitOk;
}

int cmd_classify1d(const Context& c) {
  const DoubleCombModel model(c.config.model);
  const auto result = classify(model, c.config.policy);
  c.header();
  std::ostream& r = c.report();
  const auto& d = result.drift;
  r << "Theta_u: " << num(d.theta_u) << '\n';
  r << "Theta_d: " << num(d.theta_d) << '\n';
  r << "d_M: " << num(d.d_m) << '\n';
  r << "d_S: " << num(d.d_s) << '\n';
  r << "J_u|d: " << describe(d.j_ud) << '\n';
  r << "J_d|u: " << describe(d.j_du) << '\n';
  for (const auto& w : result.warnings) r << "warning: " << w << '\n';
  r << "verdict: " << to_string(result.verdict) << ", cell " << result.rule_fired << '\n';
  r << "reason: " << result.reason << '\n';
  return result.verdict == Verdict1D::Undecidable ? kExitInconclusive : kExitOk;
}

int cmd_simulate1d(const Context& c) {
  const DoubleCombModel model(c.config.model);
  if (c.config.init && *c.config.init != "du") {
    throw Error(ErrorCode::SemanticError, "one-dimensional walks start from the context du", "/init");
  }
  const auto trace = simulate_prw1(model, c.opt.steps, c.seed());
  c.header();
  std::ostream& r = c.report();
  r << "seed: " << c.seed() << '\n';
  r << "steps: " << c.opt.steps << '\n';
  r << "S_N: " << trace.positions.back() << '\n';
  r << "breaking times: " << trace.breaks.size() - 1 << '\n';
  r << "completed d-runs: " << trace.tau_d.size() << '\n';
  r << "completed u-runs: " << trace.tau_u.size() << '\n';
  r << "skeleton points: " << trace.skeleton.size() << '\n';
  c.emit_csv([&](std::ostream& s) { write_walk1d_csv(s, trace); });
  return kExitOk;
}

int cmd_kernel2d(const Context& c) {
  const QuadCombModel model(c.config.model);
  const auto kernel = build_bend_kernel(model, c.config.policy);
  const Eigen::VectorXd pi = bend_stationary(kernel);
  c.header();
  std::ostream& r = c.report();
  for (std::size_t i = 0; i < kernel.states.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    r << kernel.states[i] << ":";
    for (std::size_t j = 0; j < kernel.states.size(); ++j) {
      const double p = kernel.p(row, static_cast<Eigen::Index>(j));
      if (p > 0) r << ' ' << kernel.states[j] << '=' << num(p);
    }
    r << "  pi_J=" << num(pi(row)) << '\n';
  }
  c.emit_csv([&](std::ostream& s) {
    s << "from,to,probability\n";
    for (std::size_t i = 0; i < kernel.states.size(); ++i) {
      for (std::size_t j = 0; j < kernel.states.size(); ++j) {
        if (kernel.states[i][1] != kernel.states[j][0]) continue;
        s << kernel.states[i] << ',' << kernel.states[j] << ','
          << num(kernel.p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
      }
    }
  });
  return kExitOk;
}

int cmd_simulate2d(const Context& c) {
  const QuadCombModel model(c.config.model);
  if (c.config.init && *c.config.init != "en") {
    throw Error(ErrorCode::SemanticError, "two-dimensional walks start from the bend ne (context en)",
                "/init");
  }
  const auto trace = simulate_prw2(model, c.opt.steps, c.seed());
  c.header();
  std::ostream& r = c.report();
  r << "seed: " << c.seed() << '\n';
  r << "steps: " << c.opt.steps << '\n';
  r << "S_N: (" << trace.positions.back().x() << ", " << trace.positions.back().y() << ")\n";
  r << "breaking times: " << trace.breaks.size() - 1 << '\n';
  c.emit_csv([&](std::ostream& s) { write_walk2d_csv(s, trace); });
  return kExitOk;
}

int cmd_dichotomy(const Context& c) {
  const QuadCombModel model(c.config.model);
  build_bend_kernel(model, c.config.policy);  // Assumption 2 check
  const auto report = return_prob_diagnostic(model, c.opt.horizon, c.opt.trials, c.seed(), c.opt.threads);
  c.header();
  std::ostream& r = c.report();
  r << "seed: " << c.seed() << '\n';
  r << "horizon: " << report.horizon << '\n';
  r << "trials: " << report.trials << '\n';
  r << "censored trials: " << report.censored_trials << '\n';
  r << "partial sum at N: " << num(report.partial_sums.back()) << '\n';
  r << "growth over (N/10, N]: " << num(report.last_decade_growth) << '\n';
  r << "trend: " << report.trend << '\n';
  r << "note: plateauing means growth below 1e-3 over the last decade; a finite-horizon hint, not a proof\n";
  std::size_t touched = 0;
  for (double m : report.min_norm) touched += m == 0.0;
  r << "trials with some return: " << touched << '\n';
  c.emit_csv([&](std::ostream& s) { write_dichotomy_csv(s, report); });
  return kExitOk;
}

int cmd_kernel(const Context& c) {
  const auto slice = tabulate_kernel(c.config.model, c.opt.source, c.opt.k_max);
  c.header();
  std::ostream& r = c.report();
  double total = 0.0;
  for (const auto& e : slice.entries) {
    if (e.probability > 0) r << "p[" << slice.source << "," << e.target << "](" << e.k << ") = " << num(e.probability) << '\n';
    total += e.probability;
  }
  r << "tabulated mass: " << num(total) << '\n';
  r << "remainder beyond k = " << slice.k_max << ": " << num(slice.remainder) << '\n';
  c.emit_csv([&](std::ostream& s) { write_kernel_csv(s, slice); });
  return kExitOk;
}

int cmd_diagram_check(const Context& c) {
  const ProbabilizedTree& m = c.config.model;
  const Word init = c.init();
  const bool one_dim = m.is_comb() && m.alphabet() == Alphabet("du");
  const bool two_dim = m.is_comb() && m.alphabet() == compass();
  if (!one_dim && !two_dim) {
    throw Error(ErrorCode::Unsupported, "diagram-check needs a double or quadruple comb");
  }
  if (init.size() != 2 || (one_dim && init != "du")) {
    throw Error(ErrorCode::SemanticError, "diagram-check starts from a two-letter context", "/init");
  }
  const LetterTrace trace = simulate_letters_until_jumps(m, init, c.opt.jumps, c.seed());
  const MrcPath v = extract_mrc_letters(trace, m.tree());
  const MrcPath w = one_dim ? extract_mrc_bends(walk1d_from_letters(trace.letters))
                            : extract_mrc_bends(walk2d_from_letters(reversed(init), trace.letters));
  const auto report = check_diagram(v, w, trace.letters.size());
  c.header();
  std::ostream& r = c.report();
  r << "seed: " << c.seed() << '\n';
  r << "steps: " << trace.letters.size() << '\n';
  r << "jumps compared: " << report.jumps_compared << '\n';
  r << "consistent: " << (report.consistent ? "yes" : "no") << '\n';
  r << "detail: " << report.detail << '\n';
  return report.consistent ? kExitOk : kExitModel;
}

int cmd_simulate(const Context& c) {
  const auto trace = simulate_letters(c.config.model, c.init(), c.opt.steps, c.seed());
  c.header();
  std::ostream& r = c.report();
  r << "seed: " << c.seed() << '\n';
  r << "steps: " << c.opt.steps << '\n';
  r << "final context: " << trace.contexts.back() << '\n';
  c.emit_csv([&](std::ostream& s) { write_letter_trace_csv(s, trace); });
  return kExitOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InconclusiveEntry:
    case ErrorCode::InconclusiveSum: return kExitInconclusive;
    default: return kExitModel;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  prepare(out);
  CLI::App app{"Variable-length Markov chains and the persistent random walks they drive",
               "vlmc-walks"};
  app.require_subcommand(1);
  Options opt;

  auto with_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model_path, "model file (JSON)")->required();
    return sub;
  };
  auto with_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "master seed (default: VLMC_WALKS_SEED, then the model's seed)");
    return sub;
  };
  auto with_csv = [&](CLI::App* sub) {
    sub->add_option("--csv", opt.csv, "write the table to this file ('-' for stdout)");
    return sub;
  };

  std::map<std::string, std::function<int(const Context&)>> handlers{
      {"check", cmd_check},
      {"cascades", cmd_cascades},
      {"stationary", cmd_stationary},
      {"classify1d", cmd_classify1d},
      {"simulate1d", cmd_simulate1d},
      {"kernel2d", cmd_kernel2d},
      {"simulate2d", cmd_simulate2d},
      {"dichotomy", cmd_dichotomy},
      {"kernel", cmd_kernel},
      {"diagram-check", cmd_diagram_check},
      {"simulate", cmd_simulate},
  };

  with_model(app.add_subcommand("check", "validate a model and describe its tree"));
  with_csv(with_model(app.add_subcommand("cascades", "cascade series and the Q matrix")));
  auto* stationary = with_csv(with_model(app.add_subcommand("stationary", "stationarity verdict and measure")));
  stationary->add_option("--cylinder", opt.cylinder, "word whose cylinder probability to print");
  with_model(app.add_subcommand("classify1d", "recurrence or drift of the one-dimensional walk"));
  auto* sim1 = with_csv(with_seed(with_model(app.add_subcommand("simulate1d", "simulate the one-dimensional walk"))));
  sim1->add_option("--steps", opt.steps, "number of steps");
  with_csv(with_model(app.add_subcommand("kernel2d", "bend kernel and its invariant law")));
  auto* sim2 = with_csv(with_seed(with_model(app.add_subcommand("simulate2d", "simulate the two-dimensional walk"))));
  sim2->add_option("--steps", opt.steps, "number of steps");
  auto* dich = with_csv(with_seed(with_model(app.add_subcommand("dichotomy", "Monte-Carlo return frequencies of the skeleton"))));
  dich->add_option("--horizon", opt.horizon, "largest jump index N");
  dich->add_option("--trials", opt.trials, "independent trials");
  dich->add_option("--threads", opt.threads, "worker threads (0: all cores)");
  auto* kern = with_csv(with_model(app.add_subcommand("kernel", "semi-Markov kernel slice of one alpha-lis")));
  kern->add_option("--source", opt.source, "source alpha-lis")->required();
  kern->add_option("--k-max", opt.k_max, "largest sojourn tabulated");
  auto* diag = with_seed(with_model(app.add_subcommand("diagram-check", "compare the letter and walk views of one trace")));
  diag->add_option("--jumps", opt.jumps, "number of jumps to compare");
  auto* sim = with_csv(with_seed(with_model(app.add_subcommand("simulate", "letter trace of the chain"))));
  sim->add_option("--steps", opt.steps, "number of steps");

  try {
    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    app.parse(reversed_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitModel;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    const ModelConfig config = parse_model_config(read_file(opt.model_path));
    std::string echo = "vlmc-walks";
    for (const auto& a : args) echo += " " + a;
    const Context context{opt, config, out, err, echo};
    code = handlers.at(app.get_subcommands().front()->get_name())(context);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitModel;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << "wall time: " << std::fixed << std::setprecision(3) << elapsed.count() << " s\n";
  return code;
}

}  // namespace vlmc::cli
