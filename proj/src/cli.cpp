#include "pulsekick/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pulsekick/collapse.hpp"
#include "pulsekick/oracle.hpp"
#include "pulsekick/pulsesim.hpp"
#include "pulsekick/qcore.hpp"

namespace pulsekick::cli {

namespace {

// ---------------------------------------------------------------------------
// Deterministic output formatting
// ---------------------------------------------------------------------------

// 17 significant digits in scientific notation round-trips any double and is
// locale-independent (snprintf with the default "C" numeric locale, which
// this program never changes).
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

struct Cell {
  std::variant<double, long long, std::string> value;
};

Cell num(double v) { return {v}; }
Cell integer(long long v) { return {v}; }
Cell text(std::string v) { return {std::move(v)}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_csv(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c.value)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c.value))
    return std::to_string(*i);
  return std::get<std::string>(c.value);
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << cell_csv(row[i]);
    }
    os << '\n';
  }
}

// Hand-rolled JSON emitter: the object keys must mirror the CSV column order
// byte-for-byte, which rules out serializers that re-sort keys.
void write_json(std::ostream& os, const Table& table) {
  os << "[\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    os << "  {";
    const auto& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ", ";
      os << '"' << table.columns[i] << "\": ";
      if (const auto* s = std::get_if<std::string>(&row[i].value)) {
        os << '"' << *s << '"';
      } else {
        os << cell_csv(row[i]);
      }
    }
    os << (r + 1 < table.rows.size() ? "},\n" : "}\n");
  }
  os << "]\n";
}

void emit(const Table& table, const std::string& out_path,
          const std::string& format, std::ostream& out) {
  std::ostringstream body;
  if (format == "json") {
    write_json(body, table);
  } else {
    write_csv(body, table);
  }
  if (out_path.empty()) {
    out << body.str();
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    throw Error("cannot open output file: " + out_path);
  }
  file << body.str();
  if (!file.good()) {
    throw Error("failed writing output file: " + out_path);
  }
}

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

// Complex flags arrive as 1 or 2 comma-separated reals: "re" or "re,im".
ComplexScalar to_complex(const std::vector<double>& parts) {
  const double re = parts.empty() ? 0.0 : parts[0];
  const double im = parts.size() > 1 ? parts[1] : 0.0;
  return {re, im};
}

// Normalizing state construction with the documented warning when the input
// deviates noticeably from unit norm.
SuperpositionState make_state(const std::vector<double>& a1,
                              const std::vector<double>& a2,
                              std::ostream& err) {
  const ComplexScalar v1 = to_complex(a1);
  const ComplexScalar v2 = to_complex(a2);
  if (is_finite(v1) && is_finite(v2)) {
    const double r = std::hypot(std::abs(v1), std::abs(v2));
    if (std::abs(r - 1.0) > 1e-6 && r > 1e-150) {
      err << "warning: input state norm " << format_double(r)
          << " deviates from 1; normalizing\n";
    }
  }
  return SuperpositionState::normalized(v1, v2);
}

std::vector<std::size_t> thin_indices(std::size_t total, std::size_t max_rows) {
  std::vector<std::size_t> idx;
  if (total == 0) return idx;
  if (max_rows < 2) max_rows = 2;
  if (total <= max_rows) {
    idx.resize(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    return idx;
  }
  idx.reserve(max_rows);
  for (std::size_t i = 0; i < max_rows; ++i) {
    // Uniform in index, always keeping the first and last samples.
    idx.push_back(i * (total - 1) / (max_rows - 1));
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Deterministic random draws for the verify subcommand
// ---------------------------------------------------------------------------

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1); mapped from raw engine output so the value stream
  // does not depend on library-specific distribution internals.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    const double u = std::max(uniform(), 1e-300);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  SuperpositionState state() {
    // Four Gaussian components normalized: uniform on the state sphere.
    while (true) {
      const ComplexScalar a1(gaussian(), gaussian());
      const ComplexScalar a2(gaussian(), gaussian());
      if (std::hypot(std::abs(a1), std::abs(a2)) > 1e-6) {
        return SuperpositionState::normalized(a1, a2);
      }
    }
  }

  Coupling coupling(double mod_lo = 1e-3, double mod_hi = 10.0) {
    const double m = uniform(mod_lo, mod_hi);
    const double ph = uniform(-std::numbers::pi, std::numbers::pi);
    return Coupling(std::polar(m, ph));
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Strict config-file validation
// ---------------------------------------------------------------------------

// CLI11 applies recognized config values but silently skips lines it cannot
// parse and keys it does not know. The interface contract instead rejects
// malformed files and unknown keys, so the accepted file format is re-checked
// here: blank lines, '#'/';' comments, [section] headers naming a
// subcommand, and "key = value" pairs naming an option of that subcommand.
void validate_config_file(const CLI::App& app, const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw Error("config file not readable: " + path);
  }
  auto fail = [&path](std::size_t line_no, const std::string& why) {
    throw Error("config file " + path + " line " + std::to_string(line_no) +
                ": " + why);
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };

  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(line_no, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty() || app.get_subcommand_no_throw(section) == nullptr) {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");

    // Dotted keys select a subcommand explicitly; otherwise the enclosing
    // section applies.
    std::string scope = section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      scope = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    const CLI::App* target =
        scope.empty() ? &app : app.get_subcommand_no_throw(scope);
    if (target == nullptr) {
      fail(line_no, "unknown subcommand " + scope);
    }
    if (target->get_option_no_throw("--" + key) == nullptr) {
      fail(line_no, "unknown key " + key +
                        (scope.empty() ? "" : " in [" + scope + "]"));
    }
  }
}

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct OutputOpts {
  std::string path;
  std::string format = "csv";
};

void add_output_opts(CLI::App* cmd, OutputOpts& o) {
  cmd->add_option("--out", o.path,
                  "Write results to this file instead of standard output");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

struct StateOpts {
  std::vector<double> a1{1.0, 0.0};
  std::vector<double> a2{0.0, 0.0};
};

void add_state_opts(CLI::App* cmd, StateOpts& s) {
  cmd->add_option("--a1", s.a1, "First amplitude as re,im")
      ->expected(1, 2)
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--a2", s.a2, "Second amplitude as re,im")
      ->expected(1, 2)
      ->delimiter(',')
      ->capture_default_str();
}

struct TolOpts {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double window = 8.0;
};

void add_tol_opts(CLI::App* cmd, TolOpts& t) {
  const auto tol_range = CLI::Range(1e-300, 1e-4);
  cmd->add_option("--rel-tol", t.rel_tol, "Integrator relative tolerance")
      ->check(tol_range)
      ->capture_default_str();
  cmd->add_option("--abs-tol", t.abs_tol, "Integrator absolute tolerance")
      ->check(tol_range)
      ->capture_default_str();
  cmd->add_option("--window", t.window,
                  "Half-width of the integration window in units of 1/n")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

IntegratorOptions to_options(const TolOpts& t) {
  IntegratorOptions o;
  o.rel_tol = t.rel_tol;
  o.abs_tol = t.abs_tol;
  o.window = t.window;
  return o;
}

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

int run_propagate(const StateOpts& st, const std::vector<double>& kflag,
                  double class_tol, const OutputOpts& out_opts,
                  std::ostream& out, std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  const Coupling k(to_complex(kflag));
  const SuperpositionState result = delta_propagate(state, k);
  const double p2 = transition_probability(state, k);
  const StrengthClass cls = classify_strength(k, class_tol);

  Table table;
  table.columns = {"c1_re", "c1_im", "c2_re", "c2_im", "p1", "p2", "class"};
  table.rows.push_back({num(result.a1().real()), num(result.a1().imag()),
                        num(result.a2().real()), num(result.a2().imag()),
                        num(result.p1()), num(p2), text(to_string(cls.kind))});
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_sweep(const StateOpts& st, double from, double to, long long steps,
              double kphase, const OutputOpts& out_opts, std::ostream& out,
              std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  Table table;
  table.columns = {"kmod", "p2"};
  for (long long i = 0; i < steps; ++i) {
    const double kmod =
        steps == 1 ? from : from + (to - from) * static_cast<double>(i) /
                                       static_cast<double>(steps - 1);
    const Coupling k(std::polar(kmod, kphase));
    table.rows.push_back({num(kmod), num(transition_probability(state, k))});
  }
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_simulate(const StateOpts& st, const std::vector<double>& kflag,
                 double omega0, double n, const TolOpts& tols,
                 long long max_rows, const OutputOpts& out_opts,
                 std::ostream& out, std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  const Coupling k(to_complex(kflag));
  const Trajectory traj = integrate_exact(state, k, SystemParams{omega0},
                                          PulseSpec{n}, to_options(tols));
  Table table;
  table.columns = {"t", "a1_re", "a1_im", "a2_re", "a2_im", "norm"};
  for (const std::size_t i :
       thin_indices(traj.samples.size(), static_cast<std::size_t>(max_rows))) {
    const TrajectorySample& s = traj.samples[i];
    table.rows.push_back({num(s.t), num(s.a1.real()), num(s.a1.imag()),
                          num(s.a2.real()), num(s.a2.imag()),
                          num(std::norm(s.a1) + std::norm(s.a2))});
  }
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_converge(const StateOpts& st, const std::vector<double>& kflag,
                 double omega0, std::vector<double> n_list, const TolOpts& tols,
                 const OutputOpts& out_opts, std::ostream& out,
                 std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  const Coupling k(to_complex(kflag));
  const std::vector<ConvergenceRow> rows = convergence_study(
      state, k, SystemParams{omega0}, n_list, to_options(tols));

  bool any_failed = false;
  Table table;
  table.columns = {"n", "err_state", "err_prob"};
  for (const ConvergenceRow& r : rows) {
    if (r.failed) {
      err << "error: integration failed at n = " << format_double(r.n) << ": "
          << r.message << '\n';
      any_failed = true;
      continue;
    }
    table.rows.push_back({num(r.n), num(r.err_state), num(r.err_prob)});
  }
  if (any_failed) {
    return 1;
  }
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_collapse(const StateOpts& st, int branches, const OutputOpts& out_opts,
                 std::ostream& out, std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  const std::vector<CollapseSolution> sols =
      collapse_strengths(state, branches);
  Table table;
  table.columns = {"branch",   "arccos_sign", "sign", "R",
                   "k_re",     "k_im",        "residual"};
  for (const CollapseSolution& s : sols) {
    table.rows.push_back(
        {integer(s.branch.branch_index), text(to_string(s.branch.arccos_sign)),
         text(to_string(s.branch.sign)), num(s.branch.R), num(s.k.real()),
         num(s.k.imag()), num(s.residual)});
  }
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_reverse(const StateOpts& st, int branches, long long solution_index,
                const OutputOpts& out_opts, std::ostream& out,
                std::ostream& err) {
  const SuperpositionState state = make_state(st.a1, st.a2, err);
  const std::vector<CollapseSolution> sols =
      collapse_strengths(state, branches);
  if (sols.empty()) {
    throw Error("no collapse solutions found for this state");
  }
  if (solution_index < 0 ||
      static_cast<std::size_t>(solution_index) >= sols.size()) {
    throw Error("solution index out of range: have " +
                std::to_string(sols.size()) + " solutions");
  }
  const CollapseSolution& sol = sols[static_cast<std::size_t>(solution_index)];

  const SuperpositionState collapsed = delta_propagate(state, Coupling(sol.k));
  // The closed-form phase is undefined when a1 = 0; the propagated amplitude
  // itself is the documented fallback.
  ComplexScalar expected_phase;
  try {
    expected_phase = collapsed_phase(state, sol);
  } catch (const DegenerateState&) {
    expected_phase = collapsed.a1();
  }
  const Coupling back(reverse_strength(sol));
  const SuperpositionState recovered = delta_propagate(collapsed, back);

  const double err_collapsed =
      std::max(std::abs(collapsed.a1() - expected_phase),
               std::abs(collapsed.a2()));
  const double err_recovered =
      std::max(std::abs(recovered.a1() - state.a1()),
               std::abs(recovered.a2() - state.a2()));

  Table table;
  table.columns = {"stage", "k_re",  "k_im", "a1_re",
                   "a1_im", "a2_re", "a2_im", "err"};
  auto row = [&table](const char* stage, ComplexScalar k,
                      const SuperpositionState& s, double e) {
    table.rows.push_back({text(stage), num(k.real()), num(k.imag()),
                          num(s.a1().real()), num(s.a1().imag()),
                          num(s.a2().real()), num(s.a2().imag()), num(e)});
  };
  row("initial", ComplexScalar(0.0, 0.0), state, 0.0);
  row("collapsed", sol.k, collapsed, err_collapsed);
  row("recovered", back.value(), recovered, err_recovered);
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

int run_figure1(int points, const OutputOpts& out_opts, std::ostream& out) {
  Table table;
  table.columns = {"alpha1_mod", "kmod_plus", "kmod_minus"};
  for (const BranchCurveRow& r : figure1_data(points)) {
    table.rows.push_back(
        {num(r.alpha1_mod), num(r.kmod_plus), num(r.kmod_minus)});
  }
  emit(table, out_opts.path, out_opts.format, out);
  return 0;
}

struct VerifyCheck {
  std::string name;
  long long draws = 0;
  double max_err = 0.0;
  double tol = 0.0;
  bool ok() const { return max_err < tol; }
};

int run_verify(long long draws, std::uint64_t seed, const OutputOpts& out_opts,
               std::ostream& out, std::ostream& err) {
  Draws rng(seed);
  std::vector<VerifyCheck> checks;

  {
    VerifyCheck c{"propagator_unitarity", draws, 0.0, 1e-12};
    for (long long i = 0; i < draws; ++i) {
      const SuperpositionState s = rng.state();
      const SuperpositionState r = delta_propagate(s, rng.coupling());
      c.max_err = std::max(c.max_err, std::abs(r.p1() + r.p2() - 1.0));
    }
    checks.push_back(c);
  }
  {
    VerifyCheck c{"exponential_route_agreement", draws, 0.0, 1e-10};
    for (long long i = 0; i < draws; ++i) {
      const SuperpositionState s = rng.state();
      const Coupling k = rng.coupling();
      const SuperpositionState a = delta_propagate(s, k);
      const SuperpositionState b = exp_form_propagate(s, k);
      c.max_err = std::max({c.max_err, std::abs(a.a1() - b.a1()),
                            std::abs(a.a2() - b.a2())});
    }
    checks.push_back(c);
  }
  {
    VerifyCheck c{"transition_probability_consistency", draws, 0.0, 1e-12};
    for (long long i = 0; i < draws; ++i) {
      const SuperpositionState s = rng.state();
      const Coupling k = rng.coupling();
      c.max_err = std::max(c.max_err, std::abs(transition_probability(s, k) -
                                               delta_propagate(s, k).p2()));
    }
    checks.push_back(c);
  }
  {
    VerifyCheck closed{"closed_form_vs_integrator", 3, 0.0, 1e-8};
    VerifyCheck quad{"conserved_quadratic", 3, 0.0, 1e-8};
    for (const double n : {3.0, 5.0, 8.0}) {
      const SuperpositionState s = rng.state();
      const Coupling k = rng.coupling(1e-3, 3.0);
      const PulseSpec pulse{n};
      const Trajectory traj =
          integrate_exact(s, k, SystemParams{0.0}, pulse, {});
      for (const TrajectorySample& sample : traj.samples) {
        const SuperpositionState ref =
            finite_n_closed_form(s, k, pulse, sample.t);
        closed.max_err =
            std::max({closed.max_err, std::abs(sample.a1 - ref.a1()),
                      std::abs(sample.a2 - ref.a2())});
      }
      quad.max_err =
          std::max(quad.max_err, conserved_quadratic_residual(traj, s, k));
    }
    checks.push_back(closed);
    checks.push_back(quad);
  }
  {
    const long long state_draws = std::max<long long>(draws / 10, 1);
    VerifyCheck c{"collapse_round_trip", state_draws, 0.0, 1e-10};
    for (long long i = 0; i < state_draws; ++i) {
      const SuperpositionState s = rng.state();
      for (const CollapseSolution& sol : collapse_strengths(s, 1)) {
        const SuperpositionState collapsed =
            delta_propagate(s, Coupling(sol.k));
        const SuperpositionState back =
            delta_propagate(collapsed, Coupling(reverse_strength(sol)));
        c.max_err = std::max({c.max_err, std::abs(back.a1() - s.a1()),
                              std::abs(back.a2() - s.a2())});
      }
    }
    checks.push_back(c);
  }

  Table table;
  table.columns = {"check", "draws", "max_err", "tol", "status"};
  bool all_ok = true;
  for (const VerifyCheck& c : checks) {
    all_ok = all_ok && c.ok();
    table.rows.push_back({text(c.name), integer(c.draws), num(c.max_err),
                          num(c.tol), text(c.ok() ? "ok" : "fail")});
  }
  emit(table, out_opts.path, out_opts.format, out);
  if (!all_ok) {
    for (const VerifyCheck& c : checks) {
      if (!c.ok()) {
        err << "verification failed: " << c.name
            << " max_err = " << format_double(c.max_err)
            << " tol = " << format_double(c.tol) << '\n';
      }
    }
    return 1;
  }
  out << "all checks passed: " << checks.size() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "pulsekick: delta-pulse dynamics of a two-level system.\n"
      "Exact propagator, finite-width Gaussian pulse integration, collapse\n"
      "strength enumeration, and cross-checking oracles."};
  app.name("pulsekick");
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Config file with key = value lines under [subcommand] "
                 "sections; # starts a comment. Flags take precedence.")
      ->envname("PULSEKICK_CONFIG");

  // propagate
  StateOpts prop_state;
  std::vector<double> prop_k{0.0, 0.0};
  double class_tol = 1e-9;
  OutputOpts prop_out;
  auto* propagate =
      app.add_subcommand("propagate", "Apply a delta pulse to a state");
  propagate->add_option("--k", prop_k, "Interaction strength as re,im")
      ->expected(1, 2)
      ->delimiter(',')
      ->capture_default_str();
  propagate
      ->add_option("--class-tol", class_tol,
                   "Tolerance on 2|k|/pi for special-strength classification")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_state_opts(propagate, prop_state);
  add_output_opts(propagate, prop_out);

  // sweep
  StateOpts sweep_state;
  double sweep_from = 0.0, sweep_to = 2.0 * std::numbers::pi,
         sweep_phase = 0.0;
  long long sweep_steps = 101;
  OutputOpts sweep_out;
  std::string sweep_param = "kmod";
  auto* sweep = app.add_subcommand(
      "sweep", "Transition probability over a grid of strength moduli");
  sweep->add_option("--param", sweep_param, "Swept parameter")
      ->check(CLI::IsMember({"kmod"}))
      ->capture_default_str();
  sweep->add_option("--from", sweep_from, "Grid start")->capture_default_str();
  sweep->add_option("--to", sweep_to, "Grid end")->capture_default_str();
  sweep->add_option("--steps", sweep_steps, "Number of grid rows")
      ->check(CLI::Range(1LL, 100000000LL))
      ->capture_default_str();
  sweep
      ->add_option("--kphase", sweep_phase,
                   "Phase of k applied to every modulus on the grid")
      ->capture_default_str();
  add_state_opts(sweep, sweep_state);
  add_output_opts(sweep, sweep_out);

  // simulate
  StateOpts sim_state;
  std::vector<double> sim_k{1.0, 0.0};
  double sim_omega0 = 0.0, sim_n = 0.0;
  TolOpts sim_tols;
  long long sim_max_rows = 2000;
  OutputOpts sim_out;
  auto* simulate = app.add_subcommand(
      "simulate", "Integrate the exact amplitude equations at finite width");
  simulate->add_option("--k", sim_k, "Interaction strength as re,im")
      ->expected(1, 2)
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--omega0", sim_omega0, "Energy gap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--n", sim_n, "Pulse width parameter")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate
      ->add_option("--max-rows", sim_max_rows,
                   "Maximum emitted rows (uniform-in-index thinning)")
      ->check(CLI::Range(2LL, 100000000LL))
      ->capture_default_str();
  add_state_opts(simulate, sim_state);
  add_tol_opts(simulate, sim_tols);
  add_output_opts(simulate, sim_out);

  // converge
  StateOpts conv_state;
  std::vector<double> conv_k{1.0, 0.0};
  double conv_omega0 = 0.0;
  std::vector<double> conv_n_list{10.0, 20.0, 40.0, 80.0, 160.0};
  TolOpts conv_tols;
  OutputOpts conv_out;
  auto* converge = app.add_subcommand(
      "converge", "Delta-limit convergence table over pulse widths");
  converge->add_option("--k", conv_k, "Interaction strength as re,im")
      ->expected(1, 2)
      ->delimiter(',')
      ->capture_default_str();
  converge->add_option("--omega0", conv_omega0, "Energy gap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  converge
      ->add_option("--n-list", conv_n_list,
                   "Ascending comma-separated pulse width parameters")
      ->delimiter(',')
      ->capture_default_str();
  add_state_opts(converge, conv_state);
  add_tol_opts(converge, conv_tols);
  add_output_opts(converge, conv_out);

  // collapse
  StateOpts col_state;
  int col_branches = 2;
  OutputOpts col_out;
  auto* collapse = app.add_subcommand(
      "collapse", "Strengths that collapse the state to the first eigenstate");
  collapse
      ->add_option("--branches", col_branches,
                   "Highest 2*pi branch index to enumerate")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();
  add_state_opts(collapse, col_state);
  add_output_opts(collapse, col_out);

  // reverse
  StateOpts rev_state;
  int rev_branches = 2;
  long long rev_index = 0;
  OutputOpts rev_out;
  auto* reverse = app.add_subcommand(
      "reverse", "Collapse round trip: initial, collapsed, recovered");
  reverse
      ->add_option("--branches", rev_branches,
                   "Highest 2*pi branch index to enumerate")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();
  reverse
      ->add_option("--solution-index", rev_index,
                   "Which collapse solution to apply (ordered by modulus)")
      ->check(CLI::Range(0LL, 100000000LL))
      ->capture_default_str();
  add_state_opts(reverse, rev_state);
  add_output_opts(reverse, rev_out);

  // figure1
  int fig_points = 101;
  OutputOpts fig_out;
  auto* figure1 = app.add_subcommand(
      "figure1", "Base collapse branch curves as a function of |a1|");
  figure1->add_option("--points", fig_points, "Number of grid rows")
      ->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  add_output_opts(figure1, fig_out);

  // verify
  long long ver_draws = 1000;
  std::uint64_t ver_seed = 20240817ULL;
  OutputOpts ver_out;
  auto* verify = app.add_subcommand(
      "verify", "Cross-check suite: oracles, unitarity, conserved quadratic");
  verify->add_option("--draws", ver_draws, "Random draws per check")
      ->check(CLI::Range(1LL, 100000000LL))
      ->capture_default_str();
  verify->add_option("--seed", ver_seed, "Random seed")->capture_default_str();
  add_output_opts(verify, ver_out);

  for (CLI::App* sub : app.get_subcommands(nullptr)) {
    sub->fallthrough();
    sub->configurable(true);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  // Reject config files that CLI11 would partially apply: malformed lines
  // and unknown keys are configuration errors, same exit class as bad flags.
  try {
    const CLI::Option* config_opt = app.get_config_ptr();
    if (config_opt != nullptr && config_opt->count() > 0) {
      const std::string used_config = config_opt->as<std::string>();
      if (!used_config.empty()) {
        validate_config_file(app, used_config);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  // The subcommand is the first command-line token naming one that parsed;
  // config sections can mark additional subcommands as seen but must not
  // select what runs.
  CLI::App* chosen = nullptr;
  for (int i = 1; i < argc && chosen == nullptr; ++i) {
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub->get_name() == argv[i]) {
        chosen = sub;
        break;
      }
    }
  }
  if (chosen == nullptr) {
    err << "error: no subcommand given on the command line\n";
    return 2;
  }

  try {
    if (chosen == propagate) {
      return run_propagate(prop_state, prop_k, class_tol, prop_out, out, err);
    }
    if (chosen == sweep) {
      return run_sweep(sweep_state, sweep_from, sweep_to, sweep_steps,
                       sweep_phase, sweep_out, out, err);
    }
    if (chosen == simulate) {
      return run_simulate(sim_state, sim_k, sim_omega0, sim_n, sim_tols,
                          sim_max_rows, sim_out, out, err);
    }
    if (chosen == converge) {
      return run_converge(conv_state, conv_k, conv_omega0, conv_n_list,
                          conv_tols, conv_out, out, err);
    }
    if (chosen == collapse) {
      return run_collapse(col_state, col_branches, col_out, out, err);
    }
    if (chosen == reverse) {
      return run_reverse(rev_state, rev_branches, rev_index, rev_out, out,
                         err);
    }
    if (chosen == figure1) {
      return run_figure1(fig_points, fig_out, out);
    }
    if (chosen == verify) {
      return run_verify(ver_draws, ver_seed, ver_out, out, err);
    }
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pulsekick::cli
