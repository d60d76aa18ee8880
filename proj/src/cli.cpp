#include "wqed/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wqed/dressed.hpp"
#include "wqed/error.hpp"
#include "wqed/model.hpp"
#include "wqed/oracle.hpp"
#include "wqed/scattering.hpp"
#include "wqed/sweep.hpp"
#include "wqed/verify.hpp"

namespace wqed {

namespace {

enum class OutputFormat { Csv, Svg, Both };

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(std::complex<double> v) {
  return num(v.real()) + (std::signbit(v.imag()) ? " - " : " + ") + num(std::abs(v.imag())) + "i";
}

// Flags that override individual ModelParams fields. `--delta-b` is applied
// last and moves omega_3 so that omega_32 - omega_b takes that value. The same
// storage is shared by every subcommand; only options that were given apply.
struct ParamFlags {
  struct RealFlag {
    CLI::Option* option;
    double ModelParams::*field;
    double* value;
  };
  double omega_a = 0, omega_b = 0, omega_2 = 0, omega_3 = 0, xi = 0, g_a = 0, g_b = 0, delta_b = 0;
  int n = 0;
  std::vector<RealFlag> reals;
  std::vector<CLI::Option*> n_opts;
  std::vector<CLI::Option*> delta_b_opts;

  void attach(CLI::App& app) {
    auto real = [&](const char* name, double& storage, double ModelParams::*field,
                    const char* help) {
      reals.push_back({app.add_option(name, storage, help), field, &storage});
    };
    real("--omega-a", omega_a, &ModelParams::omega_a, "waveguide cavity frequency");
    real("--omega-b", omega_b, &ModelParams::omega_b, "control cavity frequency");
    real("--omega-2", omega_2, &ModelParams::omega_2, "energy of level |2>");
    real("--omega-3", omega_3, &ModelParams::omega_3, "energy of level |3>");
    real("--xi", xi, &ModelParams::xi, "hopping strength");
    real("--g-a", g_a, &ModelParams::g_a, "|1>-|2> coupling");
    real("--g-b", g_b, &ModelParams::g_b, "|2>-|3> coupling");
    n_opts.push_back(app.add_option("--n", n, "b-mode photon number"));
    delta_b_opts.push_back(
        app.add_option("--delta-b", delta_b, "sets omega_3 = omega_2 + omega_b + delta_b"));
  }

  void apply(ModelParams& p) const {
    for (const RealFlag& f : reals) {
      if (f.option->count() > 0) p.*(f.field) = *f.value;
    }
    for (const CLI::Option* o : n_opts) {
      if (o->count() > 0) p.n = n;
    }
    for (const CLI::Option* o : delta_b_opts) {
      if (o->count() > 0) p.omega_3 = p.omega_2 + p.omega_b + delta_b;
    }
  }
};

// Parsed form of a command line before any computation runs.
struct RunConfig {
  std::string subcommand;
  std::string preset_name;
  std::string config_path;
  ParamFlags flags;

  // point / oracle-stationary
  double k = 0.0;
  CLI::Option* k_opt = nullptr;
  bool allow_band_edge = false;
  int half_length = 25;

  // sweep
  std::string axis = "k";
  CLI::Option* axis_opt = nullptr;
  double lo = 0.0, hi = 0.0;
  CLI::Option* lo_opt = nullptr;
  CLI::Option* hi_opt = nullptr;
  int samples = 1001;
  CLI::Option* samples_opt = nullptr;
  bool oracle_check = false;
  std::string output;
  OutputFormat format = OutputFormat::Csv;

  // oracle-wavepacket
  double k0 = 0.0;
  double sigma = 15.0;
  int chain_half_length = 1000;
  int j0 = 0;
  CLI::Option* j0_opt = nullptr;
  double dt = 0.0;
  CLI::Option* dt_opt = nullptr;
  double t_final = 0.0;
  CLI::Option* t_final_opt = nullptr;
  int buffer = 10;
  int record_every = 50;
  bool decoupled = false;

  // verify
  VerifyOptions verify;
};

// Base spec from the preset (if any), then the JSON config, then the flags.
SweepSpec resolve_spec(const RunConfig& cfg) {
  SweepSpec spec;
  spec.lo = -std::numbers::pi;
  spec.hi = std::numbers::pi;
  if (!cfg.preset_name.empty()) {
    auto p = preset(cfg.preset_name);
    if (!p) throw Error(ErrorCode::InvalidRunSpec, "unknown preset '" + cfg.preset_name + "'");
    spec = *p;
  }
  if (!cfg.config_path.empty()) {
    std::ifstream in(cfg.config_path);
    if (!in) throw Error(ErrorCode::InvalidRunSpec, "cannot read config " + cfg.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidRunSpec, std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidRunSpec, "config must be a JSON object");
    nlohmann::json model = nlohmann::json::parse(to_json(spec.base));
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "axis") {
          auto a = parse_axis(value.get<std::string>());
          if (!a) throw Error(ErrorCode::InvalidRunSpec, "unknown axis in config");
          spec.axis = *a;
        } else if (key == "lo") {
          spec.lo = value.get<double>();
        } else if (key == "hi") {
          spec.hi = value.get<double>();
        } else if (key == "m") {
          spec.samples = value.get<int>();
        } else if (key == "k") {
          spec.fixed_k = value.get<double>();
        } else if (key == "oracle_check") {
          spec.oracle_check = value.get<bool>();
        } else {
          model[key] = value;  // unknown keys are rejected by params_from_json
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidRunSpec, std::string("bad config value: ") + e.what());
    }
    spec.base = params_from_json(model.dump());
  }
  cfg.flags.apply(spec.base);
  if (cfg.axis_opt && cfg.axis_opt->count() > 0) {
    auto a = parse_axis(cfg.axis);
    if (!a) throw Error(ErrorCode::InvalidRunSpec, "axis must be one of k, delta_b, gb2n");
    spec.axis = *a;
  }
  if (cfg.lo_opt && cfg.lo_opt->count() > 0) spec.lo = cfg.lo;
  if (cfg.hi_opt && cfg.hi_opt->count() > 0) spec.hi = cfg.hi;
  if (cfg.samples_opt && cfg.samples_opt->count() > 0) spec.samples = cfg.samples;
  if (cfg.k_opt && cfg.k_opt->count() > 0) spec.fixed_k = cfg.k;
  if (cfg.oracle_check) spec.oracle_check = true;
  spec.base.validate();
  return spec;
}

void warn_rwa(const ModelParams& p, std::ostream& err) {
  const RwaReport rwa = rwa_validity(p);
  if (!rwa.valid) {
    err << "warning: rotating-wave approximation questionable, g_b sqrt(n) / min(omega_2, omega_3) = "
        << num(rwa.ratio) << " > " << num(kRwaThreshold) << '\n';
  }
}

double requested_momentum(const RunConfig& cfg, const SweepSpec& spec) {
  if (cfg.k_opt->count() > 0) return cfg.k;
  if (!cfg.preset_name.empty() && spec.axis != Axis::K) return spec.fixed_k;
  throw Error(ErrorCode::InvalidRunSpec, "--k is required");
}

int cmd_point(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = resolve_spec(cfg);
  const ModelParams& p = spec.base;
  const ScatteringPoint point = make_point(p, requested_momentum(cfg, spec));
  warn_rwa(p, err);
  const ScatteringResult res = scattering_amplitudes(p, point);
  if (res.branch == Branch::BandEdge && !cfg.allow_band_edge) {
    err << "BandEdge: sin k = 0, the group velocity vanishes and no photon propagates; "
           "the limiting values r = -1, t = 0 are printed with --allow-band-edge\n";
    return kExitComputation;
  }
  const auto v = effective_potential(p, point);
  out << "k        = " << num(point.k) << '\n'
      << "Omega_k  = " << num(point.Omega_k) << '\n'
      << "E        = " << num(point.E) << '\n'
      << "delta_a  = " << num(point.delta_a) << '\n'
      << "delta_b  = " << num(point.delta_b) << '\n'
      << "V        = " << (v ? num(*v) : std::string("pole")) << '\n'
      << "r        = " << num(res.r) << '\n'
      << "t        = " << num(res.t) << '\n'
      << "R        = " << num(res.R) << '\n'
      << "T        = " << num(res.T) << '\n'
      << "branch   = " << to_string(res.branch) << '\n';
  return kExitOk;
}

std::string with_extension(const std::string& path, const char* ext) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot) + ext;
  }
  return path + ext;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  file << content;
  if (!file) throw Error(ErrorCode::IoError, "write failed for " + path);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = resolve_spec(cfg);
  spec.validate();
  warn_rwa(spec.base, err);
  const std::vector<SweepRow> rows = run_sweep(spec);

  std::ostringstream csv;
  write_sweep_csv(spec, rows, csv);
  const std::string title = cfg.preset_name.empty() ? std::string("sweep") : cfg.preset_name;
  if (cfg.output.empty()) {
    if (cfg.format == OutputFormat::Svg) {
      write_sweep_svg(spec, rows, out, title);
    } else {
      out << csv.str();
    }
  } else {
    const bool both = cfg.format == OutputFormat::Both;
    if (cfg.format != OutputFormat::Svg) {
      write_file(both ? with_extension(cfg.output, ".csv") : cfg.output, csv.str());
    }
    if (cfg.format != OutputFormat::Csv) {
      std::ostringstream svg;
      write_sweep_svg(spec, rows, svg, title);
      write_file(both ? with_extension(cfg.output, ".svg") : cfg.output, svg.str());
    }
  }

  double t_min = 2.0, t_max = -1.0, oracle_max = 0.0;
  long errors = 0, marked = 0;
  for (const SweepRow& row : rows) {
    if (row.physical_n) ++marked;
    if (!row.result) {
      ++errors;
      continue;
    }
    t_min = std::min(t_min, row.result->T);
    t_max = std::max(t_max, row.result->T);
    if (row.dr_abs) oracle_max = std::max({oracle_max, *row.dr_abs, *row.dt_abs});
  }
  std::ostream& summary = cfg.output.empty() ? err : out;
  summary << "rows=" << rows.size() << " errors=" << errors << " T_min=" << num(t_min)
          << " T_max=" << num(t_max);
  if (spec.oracle_check) summary << " oracle_max_delta=" << num(oracle_max);
  if (spec.axis == Axis::GbSqN) summary << " integer_n_points=" << marked;
  summary << " loci:";
  const auto loci = sweep_loci(spec);
  if (loci.empty()) summary << " none";
  for (const Locus& l : loci) summary << ' ' << l.kind << '@' << num(l.axis_value);
  summary << '\n';
  return kExitOk;
}

int cmd_oracle_stationary(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = resolve_spec(cfg);
  const ModelParams& p = spec.base;
  const double k = requested_momentum(cfg, spec);
  warn_rwa(p, err);
  const StationarySolution sol = solve_stationary(LatticeProblem{p, cfg.half_length, false}, k);
  const ScatteringResult closed = scattering_amplitudes(p, make_point(p, k));
  out << "L            = " << cfg.half_length << '\n'
      << "r_fit        = " << num(sol.r_fit) << '\n'
      << "t_fit        = " << num(sol.t_fit) << '\n'
      << "r_closed     = " << num(closed.r) << '\n'
      << "t_closed     = " << num(closed.t) << '\n'
      << "|dr|         = " << num(std::abs(sol.r_fit - closed.r)) << '\n'
      << "|dt|         = " << num(std::abs(sol.t_fit - closed.t)) << '\n'
      << "R+T          = " << num(std::norm(sol.r_fit) + std::norm(sol.t_fit)) << '\n'
      << "beta         = " << num(sol.beta) << '\n'
      << "zeta         = " << num(sol.zeta) << '\n'
      << "max_residual = " << num(sol.max_residual) << '\n';
  return kExitOk;
}

int cmd_oracle_wavepacket(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = resolve_spec(cfg);
  WavepacketSpec wp;
  wp.params = spec.base;
  wp.decoupled_emitter = cfg.decoupled;
  wp.k0 = cfg.k0;
  wp.sigma = cfg.sigma;
  wp.half_length = cfg.chain_half_length;
  if (cfg.j0_opt->count() > 0) wp.j0 = cfg.j0;
  if (cfg.dt_opt->count() > 0) wp.dt = cfg.dt;
  if (cfg.t_final_opt->count() > 0) wp.t_final = cfg.t_final;
  wp.buffer = cfg.buffer;
  wp.record_every = cfg.record_every;
  warn_rwa(wp.params, err);
  const WavepacketRun run = run_wavepacket(wp);
  if (!cfg.output.empty()) {
    std::ostringstream csv;
    write_wavepacket_csv(run, csv);
    write_file(cfg.output, csv.str());
  }
  out << "chain_length   = " << run.chain_length << '\n'
      << "j0             = " << run.j0 << '\n'
      << "dt             = " << num(run.dt) << '\n'
      << "t_final        = " << num(run.t_final) << '\n'
      << "T_measured     = " << num(run.T_measured) << '\n'
      << "R_measured     = " << num(run.R_measured) << '\n'
      << "residual       = " << num(run.residual) << '\n'
      << "max_norm_drift = " << num(run.max_norm_drift) << '\n'
      << "max_abs_zeta   = " << num(run.max_zeta_abs) << '\n';
  if (!cfg.decoupled) {
    const ScatteringResult closed = scattering_amplitudes(wp.params, make_point(wp.params, wp.k0));
    out << "T_closed       = " << num(closed.T) << '\n'
        << "T_difference   = " << num(run.T_measured - closed.T) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const VerifyReport report = run_verification(cfg.verify);
  print_report(report, out);
  return report.all_passed() ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon scattering in a coupled-cavity waveguide with a cascade emitter",
               "wqed"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--preset", cfg.preset_name, "figure preset (fig2a..fig2e, fig3a..fig3c)");
    sub->add_option("--config", cfg.config_path, "JSON file with model and sweep keys");
    cfg.flags.attach(*sub);
  };

  CLI::App* point = app.add_subcommand("point", "closed-form amplitudes at one momentum");
  common(point);
  cfg.k_opt = point->add_option("--k", cfg.k, "momentum (radians per site)");
  point->add_flag("--allow-band-edge", cfg.allow_band_edge, "print the sin k = 0 limit");

  CLI::App* sweep = app.add_subcommand("sweep", "one-dimensional parameter sweep");
  common(sweep);
  cfg.axis_opt = sweep->add_option("--axis", cfg.axis, "k, delta_b or gb2n");
  cfg.lo_opt = sweep->add_option("--lo", cfg.lo, "axis lower bound");
  cfg.hi_opt = sweep->add_option("--hi", cfg.hi, "axis upper bound");
  cfg.samples_opt = sweep->add_option("-m,--samples", cfg.samples, "sample count");
  CLI::Option* sweep_k = sweep->add_option("--k", cfg.k, "fixed momentum for delta_b/gb2n sweeps");
  sweep->add_flag("--oracle-check", cfg.oracle_check, "co-run the stationary oracle per row");
  sweep->add_option("-o,--output", cfg.output, "output path (stdout when omitted)");
  const std::map<std::string, OutputFormat> formats{
      {"csv", OutputFormat::Csv}, {"svg", OutputFormat::Svg}, {"both", OutputFormat::Both}};
  sweep->add_option("--format", cfg.format, "csv, svg or both")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  CLI::App* stationary = app.add_subcommand("oracle-stationary", "finite-lattice stationary solve");
  common(stationary);
  CLI::Option* stationary_k = stationary->add_option("--k", cfg.k, "momentum");
  stationary->add_option("--L", cfg.half_length, "half length of the lattice");

  CLI::App* wave = app.add_subcommand("oracle-wavepacket", "time-domain Gaussian packet");
  common(wave);
  wave->add_option("--k0", cfg.k0, "carrier momentum")->required();
  wave->add_option("--sigma", cfg.sigma, "packet width in sites");
  wave->add_option("--L", cfg.chain_half_length, "chain has 2L+1 sites");
  cfg.j0_opt = wave->add_option("--j0", cfg.j0, "launch centre");
  cfg.dt_opt = wave->add_option("--dt", cfg.dt, "time step");
  cfg.t_final_opt = wave->add_option("--t-final", cfg.t_final, "evolution time");
  wave->add_option("--buffer", cfg.buffer, "sites around the scatterer excluded from T/R");
  wave->add_option("--record-every", cfg.record_every, "steps between CSV samples");
  wave->add_flag("--decoupled", cfg.decoupled, "remove the emitter coupling (free propagation)");
  wave->add_option("-o,--output", cfg.output, "CSV record path");

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--seed", cfg.verify.seed, "random seed");
  verify->add_option("--unitarity-points", cfg.verify.unitarity_points);
  verify->add_option("--equivalence-points", cfg.verify.equivalence_points);
  verify->add_option("--condition-points", cfg.verify.condition_points);
  verify->add_option("--oracle-points", cfg.verify.oracle_points);
  verify->add_flag("--with-wavepacket", cfg.verify.with_wavepacket, "add the dynamical spot checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // --k lives on several subcommands; route whichever one was parsed.
  if (sweep->parsed()) cfg.k_opt = sweep_k;
  if (stationary->parsed()) cfg.k_opt = stationary_k;

  try {
    if (point->parsed()) return cmd_point(cfg, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, out, err);
    if (stationary->parsed()) return cmd_oracle_stationary(cfg, out, err);
    if (wave->parsed()) return cmd_oracle_wavepacket(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool usage = e.code() == ErrorCode::InvalidParams || e.code() == ErrorCode::InvalidRunSpec;
    return usage ? kExitUsage : kExitComputation;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("wqed");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace wqed
