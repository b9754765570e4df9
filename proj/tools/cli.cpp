#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "rydsim/dissipative.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/fermion_oracle.hpp"
#include "rydsim/fit.hpp"
#include "rydsim/models.hpp"
#include "rydsim/pulse.hpp"
#include "rydsim/rng.hpp"
#include "rydsim/statevec.hpp"
#include "rydsim/trotter.hpp"

namespace rydsim::cli {
namespace {

/// Invalid user input, reported with the offending field.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what) {}
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw UsageError(field, "expected a number, got '" + text + "'");
  }
  if (used != t.size()) throw UsageError(field, "expected a number, got '" + text + "'");
  return v;
}

double angle_field(const std::string& field, const std::string& text) {
  try {
    return parse_angle(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(field, "expected an angle such as pi, pi/2, 0.25pi or radians, got '" + text + "'");
  }
}

std::vector<double> number_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(field, item));
  return out;
}

bool parse_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw UsageError(field, "expected true or false, got '" + text + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

template <class T>
std::string to_text_value(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_floating_point_v<T>) {
    return fmt(v);
  } else {
    return std::to_string(v);
  }
}

// ---------------------------------------------------------------------------
// Subcommand plumbing

struct Context {
  std::ostream& csv;
  std::ostream& err;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  /// (key, current value) in registration order, for --dump-config.
  std::vector<std::pair<std::string, std::function<std::string()>>> fields;
  std::function<std::string(Context&)> body;  // returns the summary tail

  template <class T>
  void bind(const std::string& key, T& var, const std::string& help) {
    app->add_option("--" + key, var, help)->capture_default_str();
    fields.emplace_back(key, [&var] { return to_text_value(var); });
  }
};

std::string dump_config(const Command& c) {
  std::string s = "command=" + c.name + "\n";
  for (const auto& [key, value] : c.fields) s += key + "=" + value() + "\n";
  return s;
}

// Parameters of every subcommand, owned by run() for the parse lifetime.
struct Params {
  std::uint64_t seed = 1;
  std::string output = "-";

  // lattice / couplings
  std::size_t lx = 2, ly = 2;
  double e0 = 1.0;
  double jx = 1.0, jy = 1.0, jz = 1.0, h = 0.0;
  std::string periodic = "false";
  double t_hop = 1.0, u = 0.0, v_aux = 1.0;
  std::string spinful = "false";

  // Trotter evolution
  double tau = 0.1;
  std::size_t steps = 10;
  int order = 1;
  std::string init = "random";
  std::string observables;
  std::string tau_scan;

  // cooling
  std::string theta = "pi";
  std::size_t trajectories = 1000;
  double q_init = 0.5;
  std::string engine = "syndrome";
  std::string cool_init = "syndromes";

  // spectra / models
  std::string encoding = "jw";
  std::string model = "toric";

  // pulse
  double duration = 209.4;
  double x_max = 0.2;
  std::string area;
  double omega_c = 2.0, delta = 1.0;
  std::string blockade = "inf";
  std::string shape = "sin2";
  std::string durations;
  double rel_tol = 1e-10, abs_tol = 1e-12;
};

StateVector initial_state(const std::string& kind, std::size_t n, std::uint64_t seed) {
  if (kind == "zero") return StateVector(n);
  if (kind == "plus" || kind == "neel") {
    std::uint64_t bits = 0;
    if (kind == "neel") {
      for (std::size_t q = 1; q < n; q += 2) bits |= std::uint64_t{1} << q;
      return StateVector::basis(n, bits);
    }
    StateVector s(n);
    for (std::size_t q = 0; q < n; ++q) s.apply_1q(q, Mat2{{std::sqrt(0.5), std::sqrt(0.5)}, {std::sqrt(0.5), -std::sqrt(0.5)}});
    return s;
  }
  if (kind == "random") {
    Rng rng = make_stream(seed, 0);
    std::normal_distribution<double> g;
    std::vector<cplx> amp(std::size_t{1} << n);
    for (auto& a : amp) a = {g(rng), g(rng)};
    return StateVector::from_amplitudes(n, amp);
  }
  throw UsageError("--init", "unknown initial state '" + kind + "' (random, zero, plus, neel)");
}

struct Observable {
  std::string label;
  OperatorSum op;
};

std::vector<Observable> parse_observables(const std::string& text, std::size_t n, const ToricLattice* lattice) {
  std::vector<Observable> out;
  for (const auto& tok : split_list(text)) {
    const char head = tok[0];
    const std::string rest = tok.substr(1);
    const bool indexed = !rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos;
    if (tok == "Mz") {
      OperatorSum m(n);
      for (std::size_t q = 0; q < n; ++q) m.add(1.0, PauliString::single(n, q, Pauli::Z));
      out.push_back({tok, m});
    } else if (indexed && (head == 'X' || head == 'Y' || head == 'Z')) {
      const auto q = std::stoul(rest);
      if (q >= n) throw UsageError("--observables", "qubit out of range in '" + tok + "'");
      const Pauli p = head == 'X' ? Pauli::X : head == 'Y' ? Pauli::Y : Pauli::Z;
      out.push_back({tok, OperatorSum(PauliString::single(n, q, p))});
    } else if (indexed && lattice && (head == 'A' || head == 'B')) {
      const auto k = std::stoul(rest);
      if (k >= lattice->plaquettes.size()) throw UsageError("--observables", "stabilizer out of range in '" + tok + "'");
      out.push_back({tok, OperatorSum(head == 'A' ? lattice->plaquette_operator(k) : lattice->star_operator(k))});
    } else if (tok.size() == n && tok.find_first_not_of("IXYZ") == std::string::npos) {
      out.push_back({tok, OperatorSum(PauliString::from_word(tok))});
    } else {
      throw UsageError("--observables", "cannot interpret '" + tok + "'");
    }
  }
  return out;
}

// Shared Trotter evolution loop. Returns the largest distance to exact
// evolution (NaN when the register is too large to check).
double evolve_and_report(const OperatorSum& h, const Params& p, const ToricLattice* lattice, Context& ctx) {
  const std::size_t n = h.n_qubits();
  if (p.order != 1 && p.order != 2) throw UsageError("--order", "must be 1 or 2");
  if (!(p.tau > 0.0)) throw UsageError("--tau", "must be positive");
  const auto observables = parse_observables(p.observables, n, lattice);
  const Circuit step = trotterize(h, p.tau, 1, p.order);
  StateVector state = initial_state(p.init, n, p.seed);
  const bool check = n <= kPropagatorQubitCap;
  Eigen::MatrixXcd u_exact;
  Eigen::VectorXcd exact;
  if (check) {
    u_exact = exact_propagator(h, p.tau, n);
    exact = state.to_eigen();
  }
  ctx.csv << "step,time,energy";
  for (const auto& o : observables) ctx.csv << ',' << o.label;
  if (check) ctx.csv << ",exact_distance";
  ctx.csv << '\n';
  double worst = check ? 0.0 : std::nan("");
  for (std::size_t k = 0; k <= p.steps; ++k) {
    if (k > 0) {
      apply(step, state);
      if (check) exact = u_exact * exact;
    }
    ctx.csv << k << ',' << fmt(static_cast<double>(k) * p.tau) << ',' << fmt(expectation(state, h));
    for (const auto& o : observables) ctx.csv << ',' << fmt(expectation(state, o.op));
    if (check) {
      const double d = (state.to_eigen() - exact).norm();
      worst = std::max(worst, d);
      ctx.csv << ',' << fmt(d);
    }
    ctx.csv << '\n';
  }
  return worst;
}

HubbardSpec hubbard_spec(const Params& p) {
  HubbardSpec s;
  s.lx = p.lx;
  s.ly = p.ly;
  s.t_hop = p.t_hop;
  s.u = p.u;
  s.v_aux = p.v_aux;
  s.spinful = parse_bool("--spinful", p.spinful);
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands

std::string run_toric_evolve(const Params& p, Context& ctx) {
  const ToricModel m = build_toric(p.lx, p.ly, p.e0);
  const double worst = evolve_and_report(m.hamiltonian, p, &m.lattice, ctx);
  return "max_exact_distance=" + fmt(worst);
}

std::string run_heisenberg(const Params& p, Context& ctx) {
  const std::size_t n = p.lx * p.ly;
  const auto bonds = p.ly > 1 ? square_bonds(p.lx, p.ly) : chain_bonds(p.lx, parse_bool("--periodic", p.periodic));
  const OperatorSum h = build_heisenberg(n, bonds, p.jx, p.jy, p.jz, p.h);
  if (p.tau_scan.empty()) return "max_exact_distance=" + fmt(evolve_and_report(h, p, nullptr, ctx));

  if (p.order != 1 && p.order != 2) throw UsageError("--order", "must be 1 or 2");
  const auto taus = number_list("--tau-scan", p.tau_scan);
  if (taus.size() < 2) throw UsageError("--tau-scan", "needs at least two time steps");
  ctx.csv << "tau,step_error\n";
  std::vector<double> errors;
  for (double t : taus) {
    if (!(t > 0.0)) throw UsageError("--tau-scan", "time steps must be positive");
    errors.push_back(step_error(h, t, p.order));
    ctx.csv << fmt(t) << ',' << fmt(errors.back()) << '\n';
  }
  return "order=" + std::to_string(p.order) + " fitted_exponent=" + fmt(loglog_slope(taus, errors));
}

std::string run_toric_cool(const Params& p, Context& ctx, int& status) {
  CoolingParams cp;
  cp.theta = angle_field("--theta", p.theta);
  cp.n_steps = p.steps;
  cp.n_trajectories = p.trajectories;
  cp.q_init = p.q_init;
  cp.seed = p.seed;
  cp.e0 = p.e0;
  if (!(cp.theta > 0.0 && cp.theta <= std::numbers::pi + 1e-12)) throw UsageError("--theta", "must lie in (0, pi]");
  if (!(cp.q_init >= 0.0 && cp.q_init <= 1.0)) throw UsageError("--q-init", "must lie in [0, 1]");
  if (cp.n_trajectories == 0) throw UsageError("--trajectories", "must be positive");

  if (p.engine == "lindblad") {
    // Isolated plaquette; the excited population decays at theta^2/4 per step.
    const std::size_t n = 4;
    const PauliString a = PauliString::from_word("XXXX");
    const OperatorSum one = OperatorSum::identity(n);
    const OperatorSum excited = (one - OperatorSum(a)) * 0.5;
    const OperatorSum ground = (one + OperatorSum(a)) * 0.5;
    const OperatorSum jump = OperatorSum(PauliString::single(n, 0, Pauli::Z)) * excited;
    const Eigen::MatrixXcd rho0 =
        (cp.q_init * to_matrix(excited, n) + (1.0 - cp.q_init) * to_matrix(ground, n)) / 8.0;
    const double gamma = cp.theta * cp.theta / 4.0;
    const OperatorSum energy = OperatorSum(a, -cp.e0);
    DensityMatrix rho(rho0);
    ctx.csv << "step,mean_energy,stderr\n";
    for (std::size_t k = 0; k <= cp.n_steps; ++k) {
      if (k > 0) rho = lindblad_integrate({jump}, gamma, rho, 1.0);
      ctx.csv << k << ',' << fmt(rho.expectation(energy)) << ",0\n";
    }
    return "engine=lindblad gamma=" + fmt(gamma) + " final_energy=" + fmt(rho.expectation(energy));
  }

  const ToricLattice lat = make_toric_lattice(p.lx, p.ly);
  if (p.engine == "compare") {
    const EquivalenceReport r = equivalence_check(lat, cp);
    ctx.csv << "step,syndrome_mean,syndrome_stderr,trajectory_mean,trajectory_stderr,z\n";
    for (std::size_t k = 0; k < r.z_scores.size(); ++k) {
      ctx.csv << k << ',' << fmt(r.syndrome.mean[k]) << ',' << fmt(r.syndrome.stderr_of_mean[k]) << ','
              << fmt(r.trajectory.mean[k]) << ',' << fmt(r.trajectory.stderr_of_mean[k]) << ',' << fmt(r.z_scores[k])
              << '\n';
    }
    if (!r.agree) status = 1;
    return std::string("engine=compare max_z=") + fmt(r.max_z) + (r.agree ? " agree" : " DISAGREE");
  }

  EnergyTrace trace;
  if (p.engine == "syndrome") {
    trace = syndrome_mc_run(lat, cp);
  } else if (p.engine == "trajectory") {
    TrajectoryInit init = TrajectoryInit::syndromes;
    if (p.cool_init == "readout") {
      init = TrajectoryInit::random_basis_readout;
    } else if (p.cool_init != "syndromes") {
      throw UsageError("--init", "trajectory initial state must be syndromes or readout");
    }
    trace = trajectory_run(lat, cp, init);
  } else {
    throw UsageError("--engine", "unknown engine '" + p.engine + "' (syndrome, trajectory, lindblad, compare)");
  }
  ctx.csv << "step,mean_energy,stderr\n";
  for (std::size_t k = 0; k < trace.mean.size(); ++k) {
    ctx.csv << k << ',' << fmt(trace.mean[k]) << ',' << fmt(trace.stderr_of_mean[k]) << '\n';
  }
  return "engine=" + p.engine + " final_energy=" + fmt(trace.mean.back()) + " ground_energy=" +
         fmt(-cp.e0 * static_cast<double>(lat.n_edges()));
}

std::string run_hubbard_spectrum(const Params& p, Context& ctx, int& status) {
  const HubbardSpec spec = hubbard_spec(p);
  std::vector<std::pair<std::string, Encoding>> encodings;
  if (p.encoding == "jw" || p.encoding == "both") encodings.emplace_back("jw", Encoding::jw);
  if (p.encoding == "vc" || p.encoding == "both") encodings.emplace_back("vc", Encoding::vc);
  if (encodings.empty()) throw UsageError("--encoding", "unknown encoding '" + p.encoding + "' (jw, vc, both)");
  ctx.csv << "encoding,n_up,n_down,index,oracle,encoded,abs_diff\n";
  double worst = 0.0;
  for (const auto& [label, enc] : encodings) {
    for (const auto& c : compare_spectra(spec, enc)) {
      worst = std::max(worst, c.max_abs_diff);
      const std::size_t rows = std::max(c.oracle.size(), c.encoded.size());
      for (std::size_t k = 0; k < rows; ++k) {
        const double o = k < c.oracle.size() ? c.oracle[k] : std::nan("");
        const double e = k < c.encoded.size() ? c.encoded[k] : std::nan("");
        ctx.csv << label << ',' << c.sector.n_up << ',' << c.sector.n_down << ',' << k << ',' << fmt(o) << ','
                << fmt(e) << ',' << fmt(std::abs(o - e)) << '\n';
      }
    }
  }
  if (!(worst <= 1e-8)) status = 1;
  return "max_abs_diff=" + fmt(worst);
}

std::string run_gate_fidelity(const Params& p, Context& ctx) {
  PulseProfile base;
  base.x_max = p.x_max;
  base.omega_c = p.omega_c;
  base.delta = p.delta;
  base.blockade = parse_number("--blockade", p.blockade);
  if (p.shape == "sin2") {
    base.shape = PulseShape::sin2;
  } else if (p.shape == "rectangular") {
    base.shape = PulseShape::rectangular;
  } else {
    throw UsageError("--shape", "unknown pulse shape '" + p.shape + "' (sin2, rectangular)");
  }
  std::vector<double> durations = p.durations.empty() ? std::vector<double>{p.duration} : number_list("--durations", p.durations);
  IntegratorOptions opts;
  opts.rel_tol = p.rel_tol;
  opts.abs_tol = p.abs_tol;
  ctx.csv << "duration,x_max,area,f_zero,f_rydberg,leak_r\n";
  double min_zero = 1.0, min_ryd = 1.0;
  for (double t : durations) {
    if (!(t > 0.0)) throw UsageError("--durations", "pulse durations must be positive");
    PulseProfile prof = base;
    prof.duration = t;
    if (!p.area.empty()) prof = calibrate_area(prof, angle_field("--area", p.area));
    const GateFidelity f = gate_fidelity(prof, opts);
    min_zero = std::min(min_zero, f.f_zero);
    min_ryd = std::min(min_ryd, f.f_rydberg);
    ctx.csv << fmt(t) << ',' << fmt(prof.x_max) << ',' << fmt(raman_area(prof)) << ',' << fmt(f.f_zero) << ','
            << fmt(f.f_rydberg) << ',' << fmt(f.leak_r) << '\n';
  }
  return "min_f_zero=" + fmt(min_zero) + " min_f_rydberg=" + fmt(min_ryd);
}

std::string run_dump_hamiltonian(const Params& p, Context& ctx) {
  OperatorSum h;
  if (p.model == "toric") {
    h = build_toric(p.lx, p.ly, p.e0).hamiltonian;
  } else if (p.model == "heisenberg") {
    const auto bonds = p.ly > 1 ? square_bonds(p.lx, p.ly) : chain_bonds(p.lx, parse_bool("--periodic", p.periodic));
    h = build_heisenberg(p.lx * p.ly, bonds, p.jx, p.jy, p.jz, p.h);
  } else if (p.model == "hubbard-jw") {
    h = build_hubbard_jw(hubbard_spec(p));
  } else if (p.model == "hubbard-vc") {
    h = build_hubbard_vc(hubbard_spec(p));
  } else {
    throw UsageError("--model", "unknown model '" + p.model + "' (toric, heisenberg, hubbard-jw, hubbard-vc)");
  }
  h = h.normalized();
  ctx.csv << "index,coeff_re,coeff_im,pauli,weight\n";
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto& t = h.terms()[k];
    ctx.csv << k << ',' << fmt(t.coeff.real()) << ',' << fmt(t.coeff.imag()) << ',' << t.string.word() << ','
            << t.string.weight() << '\n';
  }
  return "model=" + p.model + " qubits=" + std::to_string(h.n_qubits()) + " terms=" + std::to_string(h.size()) +
         " max_weight=" + std::to_string(h.max_weight());
}

// ---------------------------------------------------------------------------
// Config files

// Flat "key = value" lines; '#' starts a comment line. The key "command"
// names the subcommand.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config", "cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (out.empty()) throw UsageError("--config", "config file '" + path + "' has no entries");
  return out;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty angle");
  const auto pi_at = t.find("pi");
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
    return v;
  };
  try {
    if (pi_at == std::string::npos) return number(t);
    std::string coef = trim(t.substr(0, pi_at));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-") {
      c = -1.0;
    } else if (coef == "+") {
      c = 1.0;
    } else if (!coef.empty()) {
      c = number(coef);
    }
    const std::string tail = trim(t.substr(pi_at + 2));
    double den = 1.0;
    if (!tail.empty()) {
      if (tail[0] != '/') throw std::invalid_argument("unexpected text after pi in '" + text + "'");
      den = number(trim(tail.substr(1)));
      if (den == 0.0) throw std::invalid_argument("zero denominator in '" + text + "'");
    }
    return c * std::numbers::pi / den;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("angle out of range: '" + text + "'");
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed angle '" + text + "'");
  }
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Params p;
  CLI::App app{"Digital quantum simulation with mesoscopic Rydberg gates"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "Expand help for every subcommand");

  std::vector<std::unique_ptr<Command>> commands;
  auto add_command = [&](const std::string& name, const std::string& help) -> Command& {
    commands.push_back(std::make_unique<Command>());
    Command& c = *commands.back();
    c.name = name;
    c.app = app.add_subcommand(name, help);
    return c;
  };
  auto common = [&](Command& c) {
    c.bind("seed", p.seed, "Master RNG seed");
    c.bind("output", p.output, "CSV destination, - for standard output");
  };

  int status = 0;
  {
    Command& c = add_command("toric-evolve", "Trotterized toric-code evolution with exactness check");
    c.bind("lx", p.lx, "Torus width");
    c.bind("ly", p.ly, "Torus height");
    c.bind("e0", p.e0, "Coupling E0");
    c.bind("tau", p.tau, "Time step");
    c.bind("steps", p.steps, "Number of steps");
    c.bind("order", p.order, "Trotter order (1 or 2)");
    c.bind("init", p.init, "Initial state: random, zero, plus");
    c.bind("observables", p.observables, "Comma list: A<p>, B<s>, X<q>, Y<q>, Z<q>, Mz or Pauli words");
    common(c);
    c.body = [&](Context& ctx) { return run_toric_evolve(p, ctx); };
  }
  {
    Command& c = add_command("heisenberg", "Trotterized Heisenberg evolution or step-error scan");
    c.bind("lx", p.lx, "Chain length (or lattice width)");
    c.bind("ly", p.ly, "Lattice height; 1 selects a chain");
    c.bind("periodic", p.periodic, "Close the chain (true/false)");
    c.bind("jx", p.jx, "XX coupling");
    c.bind("jy", p.jy, "YY coupling");
    c.bind("jz", p.jz, "ZZ coupling");
    c.bind("hz", p.h, "Z field");
    c.bind("tau", p.tau, "Time step");
    c.bind("steps", p.steps, "Number of steps");
    c.bind("order", p.order, "Trotter order (1 or 2)");
    c.bind("init", p.init, "Initial state: random, zero, plus, neel");
    c.bind("observables", p.observables, "Comma list: X<q>, Y<q>, Z<q>, Mz or Pauli words");
    c.bind("tau-scan", p.tau_scan, "Comma list of time steps; emits single-step errors instead of a trace");
    common(c);
    c.body = [&](Context& ctx) { return run_heisenberg(p, ctx); };
  }
  {
    Command& c = add_command("toric-cool", "Dissipative cooling of the toric code");
    c.bind("lx", p.lx, "Torus width");
    c.bind("ly", p.ly, "Torus height");
    c.bind("theta", p.theta, "Pump angle (pi, pi/2, 0.25pi or radians)");
    c.bind("steps", p.steps, "Number of sweeps");
    c.bind("trajectories", p.trajectories, "Number of trajectories");
    c.bind("q-init", p.q_init, "Initial excitation probability per stabilizer");
    c.bind("e0", p.e0, "Coupling E0");
    c.bind("engine", p.engine, "syndrome, trajectory, lindblad or compare");
    c.bind("init", p.cool_init, "Trajectory initial state: syndromes or readout");
    common(c);
    c.body = [&](Context& ctx) { return run_toric_cool(p, ctx, status); };
  }
  {
    Command& c = add_command("hubbard-spectrum", "Hubbard spectra of the spin encodings against the Fock oracle");
    c.bind("lx", p.lx, "Lattice width");
    c.bind("ly", p.ly, "Lattice height");
    c.bind("t", p.t_hop, "Hopping t");
    c.bind("u", p.u, "On-site interaction U");
    c.bind("v", p.v_aux, "Auxiliary coupling (local encoding)");
    c.bind("spinful", p.spinful, "Two spin species (true/false)");
    c.bind("encoding", p.encoding, "jw, vc or both");
    common(c);
    c.body = [&](Context& ctx) { return run_hubbard_spectrum(p, ctx, status); };
  }
  {
    Command& c = add_command("gate-fidelity", "Pulse-level fidelity of the mesoscopic gate");
    c.bind("duration", p.duration, "Pulse duration T");
    c.bind("x-max", p.x_max, "Peak probe ratio");
    c.bind("area", p.area, "Calibrate x-max to this Raman area (angle); empty keeps x-max");
    c.bind("omega-c", p.omega_c, "Coupling Rabi frequency");
    c.bind("delta", p.delta, "Intermediate-state detuning");
    c.bind("blockade", p.blockade, "Blockade shift on the Rydberg branch (inf drops the Rydberg level)");
    c.bind("shape", p.shape, "sin2 or rectangular");
    c.bind("durations", p.durations, "Comma list of durations to sweep (overrides --duration)");
    c.bind("rel-tol", p.rel_tol, "Integrator relative tolerance");
    c.bind("abs-tol", p.abs_tol, "Integrator absolute tolerance");
    common(c);
    c.body = [&](Context& ctx) { return run_gate_fidelity(p, ctx); };
  }
  {
    Command& c = add_command("dump-hamiltonian", "Print a model Hamiltonian as Pauli terms");
    c.bind("model", p.model, "toric, heisenberg, hubbard-jw or hubbard-vc");
    c.bind("lx", p.lx, "Lattice width");
    c.bind("ly", p.ly, "Lattice height");
    c.bind("e0", p.e0, "Toric coupling");
    c.bind("periodic", p.periodic, "Close the Heisenberg chain");
    c.bind("jx", p.jx, "XX coupling");
    c.bind("jy", p.jy, "YY coupling");
    c.bind("jz", p.jz, "ZZ coupling");
    c.bind("hz", p.h, "Z field");
    c.bind("t", p.t_hop, "Hopping t");
    c.bind("u", p.u, "On-site interaction U");
    c.bind("v", p.v_aux, "Auxiliary coupling");
    c.bind("spinful", p.spinful, "Two spin species");
    common(c);
    c.body = [&](Context& ctx) { return run_dump_hamiltonian(p, ctx); };
  }

  // Expand --config and strip --dump-config before CLI11 sees the arguments.
  std::vector<std::string> args;
  bool dump = false;
  std::string config_path;
  try {
    for (std::size_t k = 0; k < raw_args.size(); ++k) {
      const std::string& a = raw_args[k];
      if (a == "--dump-config") {
        dump = true;
      } else if (a == "--config") {
        if (k + 1 >= raw_args.size()) throw UsageError("--config", "missing file name");
        config_path = raw_args[++k];
      } else if (a.rfind("--config=", 0) == 0) {
        config_path = a.substr(9);
      } else {
        args.push_back(a);
      }
    }
    if (!config_path.empty()) {
      std::string command;
      std::vector<std::string> file_args;
      for (const auto& [key, value] : read_config(config_path)) {
        if (key == "command") {
          command = value;
        } else {
          file_args.push_back("--" + key + "=" + value);
        }
      }
      auto is_command = [&](const std::string& s) {
        for (const auto& c : commands) {
          if (c->name == s) return true;
        }
        return false;
      };
      auto pos = std::find_if(args.begin(), args.end(), is_command);
      if (pos == args.end()) {
        if (command.empty()) throw UsageError("--config", "no subcommand given on the command line or as command=");
        args.insert(args.begin(), command);
        pos = args.begin();
      } else if (!command.empty() && *pos != command) {
        throw UsageError("--config", "file selects '" + command + "' but the command line selects '" + *pos + "'");
      }
      args.insert(pos + 1, file_args.begin(), file_args.end());
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<const char*> argv{"rydsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (raw_args.empty()) err << app.help();
    return 2;
  }

  Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c->app->parsed()) chosen = c.get();
  }
  if (!chosen) {
    err << "error: no subcommand\n";
    return 2;
  }
  if (dump) {
    out << dump_config(*chosen);
    return 0;
  }

  std::ofstream file;
  if (p.output != "-") {
    file.open(p.output);
    if (!file) {
      err << "error: --output: cannot open '" << p.output << "'\n";
      return 2;
    }
  }
  std::ostream& csv = p.output == "-" ? out : file;
  Context ctx{csv, err};
  std::string summary;
  try {
    summary = chosen->body(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << chosen->name << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << chosen->name << ": " << e.what() << '\n';
    return 1;
  }
  csv.flush();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << chosen->name << ": wall=" << std::fixed << std::setprecision(3) << wall << "s seed=" << p.seed << ' '
      << summary << '\n';
  return status;
}

}  // namespace rydsim::cli
