#include "app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "amd/reports.hpp"

namespace amd {
namespace app {

namespace fs = std::filesystem;
using nlohmann::json;
using reports::matrix_from_json;
using reports::matrix_to_json;

namespace {

const std::vector<std::string> kExperiments = {"decompose", "gaps",  "veff",
                                               "evolve",    "scan", "holonomy"};

bool known_preset(const std::string& name) {
  for (const auto& p : presets::registry())
    if (p.name == name) return true;
  return false;
}

void require_known_preset(const ExperimentConfig& cfg) {
  if (cfg.preset.empty() && cfg.system) return;
  if (known_preset(cfg.preset)) return;
  std::ostringstream os;
  os << "unknown preset '" << cfg.preset << "'; available:";
  for (const auto& p : presets::registry()) os << " " << p.name;
  throw std::invalid_argument(os.str());
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(text, &pos, 16);
  if (pos != text.size()) throw std::invalid_argument("seed must be hexadecimal: " + text);
  return v;
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment) == kExperiments.end())
    throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
  require_known_preset(cfg);
  if (cfg.gamma <= 0 || cfg.gamma_plus <= 0 || cfg.gamma_minus <= 0)
    throw std::invalid_argument("rates must be positive");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (cfg.s_points < 11) throw std::invalid_argument("s_points must be >= 11");
  if (cfg.transport_N < 10) throw std::invalid_argument("N must be >= 10");
  for (double t : cfg.T_values)
    if (t <= 0) throw std::invalid_argument("T values must be positive");
}

int qubits_of_preset(const std::string& preset) {
  if (preset == "appendix-b") return 3;
  if (preset == "depol-b") return 2;
  throw std::invalid_argument("preset '" + preset + "' has no site structure for veff");
}

std::pair<char, int> parse_v_op(const std::string& text) {
  // "sigma-z@1"
  const auto at = text.find('@');
  if (at == std::string::npos || text.rfind("sigma-", 0) != 0 || at != 7)
    throw std::invalid_argument("cannot parse operator '" + text + "' (want sigma-{x,y,z}@site)");
  const char axis = text[6];
  const int site = std::stoi(text.substr(at + 1));
  return {axis, site};
}

Lindbladian system_lindbladian(const ExperimentConfig& cfg) {
  if (cfg.system) {
    if (cfg.system->dim <= 0) throw std::invalid_argument("inline system: dim must be positive");
    return Lindbladian(cfg.system->hamiltonian, cfg.system->dissipators);
  }
  if (cfg.preset == "appendix-b")
    return presets::appendix_b_lindbladian(cfg.omega, cfg.gamma_plus, cfg.gamma_minus);
  if (cfg.preset == "depol-b") return presets::depol_b_lindbladian(cfg.gamma);
  throw std::invalid_argument("experiment '" + cfg.experiment + "' needs preset appendix-b, "
                              "depol-b or an inline system");
}

PauliLoopKind loop_kind(const std::string& preset) {
  if (preset == "holonomy-x") return PauliLoopKind::ZZ_X;
  if (preset == "holonomy-z") return PauliLoopKind::XX_Z;
  if (preset == "holonomy-xx") return PauliLoopKind::XZZ_XX;
  throw std::invalid_argument("not a holonomy preset: " + preset);
}

Operator ground_projector_A(int m) {
  Operator rho = Operator::Zero(m, m);
  rho(0, 0) = 1.0;
  return rho;
}

void write_outputs(const ExperimentConfig& cfg, const json& report, const std::string& csv,
                   const std::string& svg = "") {
  fs::create_directories(cfg.out_dir);
  reports::write_file((fs::path(cfg.out_dir) / "report.json").string(), report.dump(2) + "\n");
  reports::write_file((fs::path(cfg.out_dir) / "data.csv").string(), csv);
  if (!svg.empty())
    reports::write_file((fs::path(cfg.out_dir) / "plot.svg").string(), svg);
}

json base_report(const ExperimentConfig& cfg) {
  return json{{"schema_version", 1}, {"experiment", cfg.experiment},
              {"preset", cfg.preset}, {"seed", cfg.seed}};
}

// --- experiment handlers -----------------------------------------------------

void run_decompose(const ExperimentConfig& cfg) {
  const Lindbladian L = system_lindbladian(cfg);
  const Decomposition dec = decompose(L, {kDefaultRelTol, cfg.seed});
  json report = base_report(cfg);
  report["decomposition"] = reports::decomposition_to_json(dec);

  std::ostringstream csv;
  csv << "block,m,n,fixed_state_eigenvalues,residual\n";
  for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
    const auto& b = dec.blocks[k];
    Eigen::SelfAdjointEigenSolver<Operator> es(b.fixed_state);
    csv << k << "," << b.m << "," << b.n << ",";
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
      csv << reports::format_double(es.eigenvalues()(i));
      if (i > 0) csv << ";";
    }
    csv << "," << reports::format_double(b.residual) << "\n";
  }
  write_outputs(cfg, report, csv.str());
}

std::pair<LindbladCurve, BlockTracker> constant_preset_curve(const ExperimentConfig& cfg) {
  const Lindbladian L = system_lindbladian(cfg);
  Block blk;
  if (cfg.preset == "appendix-b") {
    blk = presets::appendix_b_block(cfg.gamma_plus, cfg.gamma_minus);
  } else if (cfg.preset == "depol-b") {
    blk = presets::depol_b_block(cfg.gamma);
  } else {
    const Decomposition dec = decompose(L, {kDefaultRelTol, cfg.seed});
    if (dec.blocks.empty()) throw NumericalDiagnostic("no stationary block found");
    blk = dec.blocks.front();
  }
  return {LindbladCurve(LindbladCurve::Sampled{{{0.0, L}}}), constant_tracker(std::move(blk))};
}

void run_gaps(const ExperimentConfig& cfg) {
  GapReport rep;
  if (cfg.preset == "closed-sweep") {
    const LindbladCurve curve = presets::closed_sweep_curve(1.0, M_PI / 2, 401);
    rep = compute_gaps(curve, presets::ground_tracker(curve), cfg.s_points);
  } else if (cfg.preset.rfind("holonomy", 0) == 0) {
    const Loop loop = presets::holonomy_loop(loop_kind(cfg.preset), cfg.loop_a, cfg.loop_b, cfg.gamma);
    // gap of the rotated-frame generator with the fixed block
    const LindbladCurve constant(
        LindbladCurve::Sampled{{{0.0, loop.curve.rotated_generator()}}});
    rep = compute_gaps(constant, constant_tracker(loop.block0), cfg.s_points);
  } else {
    auto [curve, tracker] = constant_preset_curve(cfg);
    rep = compute_gaps(curve, tracker, cfg.s_points);
  }
  json report = base_report(cfg);
  report["gap"] = reports::gap_report_to_json(rep);
  write_outputs(cfg, report, reports::gaps_csv(rep));
}

void run_veff(const ExperimentConfig& cfg) {
  const int sites = qubits_of_preset(cfg.preset);
  const Block blk = cfg.preset == "appendix-b"
                        ? presets::appendix_b_block(cfg.gamma_plus, cfg.gamma_minus)
                        : presets::depol_b_block(cfg.gamma);
  json ops = json::array();
  std::ostringstream csv;
  csv << "operator,c_x,c_y,c_z\n";
  for (const auto& name : cfg.v_ops) {
    const auto [axis, site] = parse_v_op(name);
    if (site < 1 || site > sites)
      throw std::invalid_argument("site out of range in '" + name + "'");
    Operator pauli;
    switch (axis) {
      case 'x': pauli = sigma_x(); break;
      case 'y': pauli = sigma_y(); break;
      case 'z': pauli = sigma_z(); break;
      default: throw std::invalid_argument("axis must be x, y or z in '" + name + "'");
    }
    const Operator V = embed_at_site(pauli, site - 1, sites);
    const Operator eff = v_eff(V, blk);
    const Operator tl = traceless(eff);
    const double cx = 0.5 * (sigma_x() * tl).trace().real();
    const double cy = 0.5 * (sigma_y() * tl).trace().real();
    const double cz = 0.5 * (sigma_z() * tl).trace().real();
    ops.push_back({{"operator", name},
                   {"v_eff", matrix_to_json(eff)},
                   {"traceless", matrix_to_json(tl)},
                   {"c_x", cx},
                   {"c_y", cy},
                   {"c_z", cz}});
    csv << name << "," << reports::format_double(cx) << "," << reports::format_double(cy) << ","
        << reports::format_double(cz) << "\n";
  }
  json report = base_report(cfg);
  report["effective_interactions"] = ops;
  report["gamma_plus"] = cfg.gamma_plus;
  report["gamma_minus"] = cfg.gamma_minus;
  write_outputs(cfg, report, csv.str());
}

void run_evolve(const ExperimentConfig& cfg) {
  LindbladCurve curve = [&]() {
    if (cfg.preset == "closed-sweep") return presets::closed_sweep_curve(1.0, M_PI / 2, 401);
    if (cfg.preset.rfind("holonomy", 0) == 0)
      return presets::holonomy_loop(loop_kind(cfg.preset), cfg.loop_a, cfg.loop_b, cfg.gamma).curve;
    return LindbladCurve(LindbladCurve::Sampled{{{0.0, system_lindbladian(cfg)}}});
  }();

  Operator rho0;
  if (cfg.preset == "closed-sweep") {
    const Block blk = presets::closed_sweep_tracker(1.0, M_PI / 2)(0.0);
    rho0 = blk.isometry * blk.isometry.adjoint();
  } else if (cfg.preset.rfind("holonomy", 0) == 0) {
    const Loop loop = presets::holonomy_loop(loop_kind(cfg.preset), cfg.loop_a, cfg.loop_b, cfg.gamma);
    const Block& blk = loop.block0;
    const Operator rhoB =
        cfg.start_b_mixed ? Operator(identity(blk.n) / double(blk.n)) : blk.fixed_state;
    rho0 = blk.isometry * kron(ground_projector_A(blk.m), rhoB) * blk.isometry.adjoint();
  } else if (cfg.preset == "appendix-b" || cfg.preset == "depol-b") {
    const Block blk = cfg.preset == "appendix-b"
                          ? presets::appendix_b_block(cfg.gamma_plus, cfg.gamma_minus)
                          : presets::depol_b_block(cfg.gamma);
    const Operator rhoB =
        cfg.start_b_mixed ? Operator(identity(blk.n) / double(blk.n)) : blk.fixed_state;
    rho0 = blk.isometry * kron(ground_projector_A(blk.m), rhoB) * blk.isometry.adjoint();
  } else {
    rho0 = identity(curve.dim()) / double(curve.dim());
  }

  const long steps = cfg.steps > 0 ? cfg.steps : default_steps(curve, cfg.T);
  const long stride = std::max<long>(1, steps / 200);
  const Trajectory traj = propagate_curve(curve, rho0, cfg.T, steps, stride);

  json report = base_report(cfg);
  report["T"] = cfg.T;
  report["steps"] = steps;
  report["herm_drift"] = traj.herm_drift;
  report["trace_drift"] = traj.trace_drift;
  report["final_state"] = matrix_to_json(traj.final_state());
  write_outputs(cfg, report, reports::trajectory_csv(traj));
}

void run_scan(const ExperimentConfig& cfg) {
  std::vector<double> Ts = cfg.T_values;
  if (Ts.empty()) Ts = {50, 100, 200, 400, 800, 1600};

  LindbladCurve curve = [&]() {
    if (cfg.preset == "closed-sweep") return presets::closed_sweep_curve(1.0, M_PI / 2, 401);
    if (cfg.preset.rfind("holonomy", 0) == 0)
      return presets::holonomy_loop(loop_kind(cfg.preset), cfg.loop_a, cfg.loop_b, cfg.gamma).curve;
    if (cfg.preset == "appendix-b") {
      const auto [axis, site] = parse_v_op(cfg.v_ops.front());
      Operator pauli = axis == 'x' ? sigma_x() : axis == 'y' ? sigma_y() : sigma_z();
      return LindbladCurve(LindbladCurve::RotatedFrame{
          presets::appendix_b_lindbladian(cfg.omega, cfg.gamma_plus, cfg.gamma_minus),
          FramePath(FramePath::ConstantGenerator{embed_at_site(pauli, site - 1, 3)})});
    }
    throw std::invalid_argument("scan supports closed-sweep, holonomy-* and appendix-b presets");
  }();

  BlockTracker tracker;
  Operator rho0A;
  if (cfg.preset == "closed-sweep") {
    tracker = presets::ground_tracker(curve);
    rho0A = Operator::Identity(1, 1);
  } else if (cfg.preset.rfind("holonomy", 0) == 0) {
    const Loop loop = presets::holonomy_loop(loop_kind(cfg.preset), cfg.loop_a, cfg.loop_b, cfg.gamma);
    tracker = constant_tracker(loop.block0);
    rho0A = ground_projector_A(loop.block0.m);
  } else {
    tracker = constant_tracker(presets::appendix_b_block(cfg.gamma_plus, cfg.gamma_minus));
    rho0A = ground_projector_A(2);
  }

  ScanOptions opts;
  opts.threads = cfg.threads;
  opts.with_gap = true;
  opts.gap_s_points = std::max(11, cfg.s_points / 4);
  opts.error_opts.steps = cfg.steps;
  opts.error_opts.start_B_maximally_mixed = cfg.start_b_mixed;
  const ScalingReport rep = scaling_scan(curve, tracker, rho0A, Ts, opts);

  json report = base_report(cfg);
  report["scan"] = reports::scaling_report_to_json(rep);
  write_outputs(cfg, report, reports::scaling_csv(rep),
                cfg.plot ? reports::scaling_svg(rep) : "");
}

void run_holonomy(const ExperimentConfig& cfg) {
  const PauliLoopKind kind = loop_kind(cfg.preset);
  const Loop loop = presets::holonomy_loop(kind, cfg.loop_a, cfg.loop_b, cfg.gamma);
  const Operator target = predicted_gate(kind, cfg.loop_b);

  json gates;
  std::ostringstream csv;
  csv << "method,channel_fidelity,fidelity_vs_predicted\n";
  std::optional<ExtractedGate> transport, full;
  double trace_loss = 0.0;
  if (cfg.method == "transport" || cfg.method == "both") {
    transport = gate_via_transport(loop, cfg.transport_N);
    const Operator probe = loop.block0.isometry *
                           kron(ground_projector_A(loop.block0.m), loop.block0.fixed_state) *
                           loop.block0.isometry.adjoint();
    trace_loss = transport_discrete(loop, cfg.transport_N, probe).trace_loss;
  }
  if (cfg.method == "full" || cfg.method == "both")
    full = gate_via_simulation(loop, cfg.T, cfg.steps);
  if (!transport && !full)
    throw std::invalid_argument("method must be transport, full or both");

  auto emit = [&](const char* name, const ExtractedGate& g) {
    const double fp = average_gate_fidelity(g.unitary, target);
    gates[name] = {{"unitary", matrix_to_json(g.unitary)},
                   {"channel_fidelity", g.fidelity},
                   {"fidelity_vs_predicted", fp}};
    csv << name << "," << reports::format_double(g.fidelity) << ","
        << reports::format_double(fp) << "\n";
  };
  if (transport) emit("transport", *transport);
  if (full) emit("full", *full);

  json report = base_report(cfg);
  report["a"] = cfg.loop_a;
  report["b"] = cfg.loop_b;
  report["gamma"] = cfg.gamma;
  report["N"] = cfg.transport_N;
  report["T"] = cfg.T;
  report["predicted_gate"] = matrix_to_json(target);
  report["gates"] = gates;
  if (transport) report["transport_trace_loss"] = trace_loss;
  if (transport && full)
    report["agreement_gate_fidelity"] = average_gate_fidelity(transport->unitary, full->unitary);
  write_outputs(cfg, report, csv.str());
}

}  // namespace

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  is >> j;
  cfg = config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json system{{"preset", cfg.preset},        {"omega", cfg.omega},
              {"gamma_plus", cfg.gamma_plus}, {"gamma_minus", cfg.gamma_minus},
              {"gamma", cfg.gamma},           {"a", cfg.loop_a},
              {"b", cfg.loop_b}};
  if (cfg.system) {
    system["dim"] = cfg.system->dim;
    system["hamiltonian"] = matrix_to_json(cfg.system->hamiltonian);
    json diss = json::array();
    for (const auto& L : cfg.system->dissipators) diss.push_back(matrix_to_json(L));
    system["dissipators"] = diss;
  }
  char seed_hex[20];
  std::snprintf(seed_hex, sizeof(seed_hex), "%llx", static_cast<unsigned long long>(cfg.seed));
  return json{{"schema_version", 1},
              {"experiment", cfg.experiment},
              {"system", system},
              {"parameters",
               {{"T_list", cfg.T_values},
                {"T", cfg.T},
                {"steps", cfg.steps},
                {"s_points", cfg.s_points},
                {"N", cfg.transport_N},
                {"v", cfg.v_ops},
                {"method", cfg.method},
                {"start_b_mixed", cfg.start_b_mixed},
                {"seed", std::string(seed_hex)},
                {"threads", cfg.threads}}},
              {"output", {{"dir", cfg.out_dir}, {"plot", cfg.plot}}}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw std::invalid_argument("config: missing or unsupported schema_version");
  ExperimentConfig cfg;
  cfg.experiment = j.value("experiment", "");
  if (j.contains("system")) {
    const json& s = j["system"];
    cfg.preset = s.value("preset", "");
    cfg.omega = s.value("omega", cfg.omega);
    cfg.gamma_plus = s.value("gamma_plus", cfg.gamma_plus);
    cfg.gamma_minus = s.value("gamma_minus", cfg.gamma_minus);
    cfg.gamma = s.value("gamma", cfg.gamma);
    cfg.loop_a = s.value("a", cfg.loop_a);
    cfg.loop_b = s.value("b", cfg.loop_b);
    if (s.contains("dim")) {
      ExperimentConfig::InlineSystem sys;
      sys.dim = s["dim"].get<int>();
      sys.hamiltonian = matrix_from_json(s["hamiltonian"], sys.dim, sys.dim);
      if (s.contains("dissipators"))
        for (const auto& L : s["dissipators"])
          sys.dissipators.push_back(matrix_from_json(L, sys.dim, sys.dim));
      cfg.system = std::move(sys);
    }
  }
  if (j.contains("parameters")) {
    const json& p = j["parameters"];
    if (p.contains("T_list")) cfg.T_values = p["T_list"].get<std::vector<double>>();
    cfg.T = p.value("T", cfg.T);
    cfg.steps = p.value("steps", cfg.steps);
    cfg.s_points = p.value("s_points", cfg.s_points);
    cfg.transport_N = p.value("N", cfg.transport_N);
    if (p.contains("v")) cfg.v_ops = p["v"].get<std::vector<std::string>>();
    cfg.method = p.value("method", cfg.method);
    cfg.start_b_mixed = p.value("start_b_mixed", cfg.start_b_mixed);
    if (p.contains("seed")) cfg.seed = parse_seed(p["seed"].get<std::string>());
    cfg.threads = p.value("threads", cfg.threads);
  }
  if (j.contains("output")) {
    cfg.out_dir = j["output"].value("dir", cfg.out_dir);
    cfg.plot = j["output"].value("plot", cfg.plot);
  }
  return cfg;
}

int run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (const char* env = std::getenv("AMD_SEED")) cfg.seed = parse_seed(env);
  try {
    validate(cfg);
    if (cfg.experiment == "decompose") run_decompose(cfg);
    else if (cfg.experiment == "gaps") run_gaps(cfg);
    else if (cfg.experiment == "veff") run_veff(cfg);
    else if (cfg.experiment == "evolve") run_evolve(cfg);
    else if (cfg.experiment == "scan") run_scan(cfg);
    else if (cfg.experiment == "holonomy") run_holonomy(cfg);
  } catch (const NumericalDiagnostic& e) {
    std::cerr << "numerical diagnostic: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

std::string preset_table() {
  std::ostringstream os;
  os << "preset        summary\n";
  os << "------------  -------\n";
  for (const auto& p : presets::registry()) {
    os << p.name;
    for (std::size_t k = p.name.size(); k < 14; ++k) os << ' ';
    os << p.summary << "\n";
  }
  return os.str();
}

int main(int argc, char** argv) {
  CLI::App cli{"adiabatic Markovian dynamics experiment runner"};
  cli.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, seed_hex;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", cfg.preset, "system preset (see `amd presets`)");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", seed_hex, "hex seed for randomized steps");
    sub->add_option("--threads", cfg.threads, "parallel scan workers");
    sub->add_option("--omega", cfg.omega, "collective precession rate");
    sub->add_option("--gamma-plus", cfg.gamma_plus, "absorption rate");
    sub->add_option("--gamma-minus", cfg.gamma_minus, "emission rate");
    sub->add_option("--gamma", cfg.gamma, "depolarizing rate");
  };

  CLI::App* dec = cli.add_subcommand("decompose", "stationary-structure decomposition");
  add_common(dec);
  CLI::App* gaps = cli.add_subcommand("gaps", "generalized gap along the curve");
  add_common(gaps);
  gaps->add_option("--s-points", cfg.s_points, "grid points in s");
  CLI::App* veff = cli.add_subcommand("veff", "effective interactions on the noiseless factor");
  add_common(veff);
  veff->add_option("--v", cfg.v_ops, "perturbations, e.g. sigma-z@1");
  CLI::App* evolve = cli.add_subcommand("evolve", "propagate a preset and export the trajectory");
  add_common(evolve);
  evolve->add_option("--T", cfg.T, "total time");
  evolve->add_option("--steps", cfg.steps, "integration substeps (0 = auto)");
  evolve->add_flag("--mixed-b", cfg.start_b_mixed, "start the cofactor maximally mixed");
  CLI::App* scan = cli.add_subcommand("scan", "adiabatic error versus total time");
  add_common(scan);
  scan->add_option("--T", cfg.T_values, "T values")->delimiter(',');
  scan->add_option("--steps", cfg.steps, "integration substeps (0 = auto)");
  scan->add_option("--v", cfg.v_ops, "perturbation for the appendix-b scan");
  scan->add_option("--s-points", cfg.s_points, "gap grid resolution");
  scan->add_flag("--plot", cfg.plot, "emit a log-log SVG plot");
  scan->add_flag("--mixed-b", cfg.start_b_mixed, "start the cofactor maximally mixed");
  CLI::App* hol = cli.add_subcommand("holonomy", "extract a dissipation-driven holonomic gate");
  add_common(hol);
  hol->add_option("--a", cfg.loop_a, "loop generator coefficient a");
  hol->add_option("--b", cfg.loop_b, "loop generator coefficient b");
  hol->add_option("--T", cfg.T, "total time of the full simulation");
  hol->add_option("--N", cfg.transport_N, "discrete transport steps");
  hol->add_option("--steps", cfg.steps, "integration substeps (0 = auto)");
  hol->add_option("--method", cfg.method, "transport | full | both");
  CLI::App* pre = cli.add_subcommand("presets", "list the preset registry");
  (void)pre;

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = cli.get_subcommands().front();
  if (sub->get_name() == "presets") {
    std::cout << preset_table();
    return 0;
  }

  ExperimentConfig merged;
  if (!config_path.empty()) {
    try {
      load_config_file(config_path, merged);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  // command-line values win over the file
  merged.experiment = sub->get_name();
  auto take = [&](auto& dst, const auto& src, const char* flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) dst = src;
  };
  take(merged.preset, cfg.preset, "--preset");
  take(merged.out_dir, cfg.out_dir, "--out");
  take(merged.threads, cfg.threads, "--threads");
  take(merged.omega, cfg.omega, "--omega");
  take(merged.gamma_plus, cfg.gamma_plus, "--gamma-plus");
  take(merged.gamma_minus, cfg.gamma_minus, "--gamma-minus");
  take(merged.gamma, cfg.gamma, "--gamma");
  take(merged.s_points, cfg.s_points, "--s-points");
  take(merged.v_ops, cfg.v_ops, "--v");
  take(merged.steps, cfg.steps, "--steps");
  take(merged.start_b_mixed, cfg.start_b_mixed, "--mixed-b");
  take(merged.loop_a, cfg.loop_a, "--a");
  take(merged.loop_b, cfg.loop_b, "--b");
  take(merged.transport_N, cfg.transport_N, "--N");
  take(merged.method, cfg.method, "--method");
  take(merged.plot, cfg.plot, "--plot");
  const CLI::Option* t_opt = sub->get_option_no_throw("--T");
  if (t_opt != nullptr && t_opt->count() > 0) {
    if (sub->get_name() == "scan")
      merged.T_values = cfg.T_values;
    else
      merged.T = cfg.T;
  }
  const CLI::Option* seed_opt = sub->get_option_no_throw("--seed");
  if (seed_opt != nullptr && seed_opt->count() > 0) {
    try {
      merged.seed = parse_seed(seed_hex);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return run_experiment(merged);
}

}  // namespace app
}  // namespace amd
