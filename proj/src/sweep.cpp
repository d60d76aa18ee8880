#include "wqed/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <thread>

#include "wqed/oracle.hpp"

namespace wqed {

namespace {

constexpr double kPi = std::numbers::pi;

// Presets keep omega_a = 0 and omega_b = 2; only differences of frequencies
// enter any amplitude.
constexpr double kPresetOmegaB = 2.0;

ModelParams figure2_params(int n, double delta_b) {
  ModelParams p;
  p.omega_a = 0.0;
  p.omega_b = kPresetOmegaB;
  p.omega_2 = 2.0;
  p.omega_3 = p.omega_2 + p.omega_b + delta_b;
  p.xi = 2.0;
  p.g_a = 1.0;
  p.g_b = 1.0;
  p.n = n;
  return p;
}

// omega_2 placed so that delta_a takes the requested value at momentum k.
ModelParams figure3_params(double delta_a, double delta_b, double k, double xi) {
  ModelParams p;
  p.omega_a = 0.0;
  p.omega_b = kPresetOmegaB;
  p.xi = xi;
  p.omega_2 = delta_a + dispersion(p, k);
  p.omega_3 = p.omega_2 + p.omega_b + delta_b;
  p.g_a = 1.0;
  p.g_b = 1.0;
  p.n = 1;
  return p;
}

SweepSpec k_sweep(ModelParams base) {
  SweepSpec s;
  s.base = base;
  s.axis = Axis::K;
  s.lo = -kPi;
  s.hi = kPi;
  return s;
}

SweepRow evaluate_row(const SweepSpec& spec, double value) {
  SweepRow row;
  row.axis_value = value;
  const ModelParams params = params_at(spec, value);
  const double k = momentum_at(spec, value);
  if (spec.axis == Axis::GbSqN && spec.base.g_b > 0.0) {
    const double n_equiv = value / (spec.base.g_b * spec.base.g_b);
    const double nearest = std::round(n_equiv);
    if (nearest >= 1.0 && std::abs(n_equiv - nearest) <= 1e-9 * std::max(1.0, nearest)) {
      row.physical_n = static_cast<int>(nearest);
    }
  }
  try {
    const ScatteringPoint point = make_point(params, k);
    row.result = scattering_amplitudes(params, point);
  } catch (const Error& e) {
    row.error = e.code();
    return row;
  }
  if (spec.oracle_check) {
    try {
      const StationarySolution sol =
          solve_stationary(LatticeProblem{params, spec.oracle_half_length, false}, k);
      row.dr_abs = std::abs(sol.r_fit - row.result->r);
      row.dt_abs = std::abs(sol.t_fit - row.result->t);
    } catch (const Error&) {
      // Band-edge rows have no stationary scattering state; columns stay nan.
    }
  }
  return row;
}

void append_number(std::string& out, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  out += buf;
}

}  // namespace

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::K: return "k";
    case Axis::DeltaB: return "delta_b";
    case Axis::GbSqN: return "gb2n";
  }
  return "unknown";
}

std::optional<Axis> parse_axis(std::string_view name) {
  if (name == "k") return Axis::K;
  if (name == "delta_b") return Axis::DeltaB;
  if (name == "gb2n") return Axis::GbSqN;
  return std::nullopt;
}

void SweepSpec::validate() const {
  base.validate();
  if (samples < 2) throw Error(ErrorCode::InvalidRunSpec, "sample count m must be >= 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCode::InvalidRunSpec, "sweep range needs lo < hi");
  }
  if (axis == Axis::K && (lo < -kPi || hi > kPi)) {
    throw Error(ErrorCode::InvalidRunSpec, "k sweeps must stay within [-pi, pi]");
  }
  if (axis == Axis::GbSqN && lo < 0.0) {
    throw Error(ErrorCode::InvalidRunSpec, "g_b^2 n cannot be negative");
  }
  if (axis != Axis::K && !std::isfinite(fixed_k)) {
    throw Error(ErrorCode::InvalidRunSpec, "fixed k must be finite");
  }
  if (oracle_check && oracle_half_length < 10) {
    throw Error(ErrorCode::InvalidRunSpec, "oracle half length must be >= 10");
  }
}

ModelParams params_at(const SweepSpec& spec, double value) {
  ModelParams p = spec.base;
  switch (spec.axis) {
    case Axis::K:
      break;
    case Axis::DeltaB:
      p.omega_3 = p.omega_2 + p.omega_b + value;
      break;
    case Axis::GbSqN:
      p.n = 1;
      p.g_b = std::sqrt(value);
      break;
  }
  return p;
}

double momentum_at(const SweepSpec& spec, double value) {
  return spec.axis == Axis::K ? value : spec.fixed_k;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  std::vector<double> grid(static_cast<std::size_t>(spec.samples));
  const double span = spec.hi - spec.lo;
  for (int i = 0; i < spec.samples; ++i) {
    grid[static_cast<std::size_t>(i)] =
        i == spec.samples - 1 ? spec.hi : spec.lo + span * i / (spec.samples - 1);
  }
  return grid;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WQED_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && requested > 0) {
      return std::min(hw, static_cast<unsigned>(requested));
    }
  }
  return hw;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<SweepRow> rows(grid.size());
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(grid.size()));
  auto work = [&](unsigned first) {
    for (std::size_t i = first; i < grid.size(); i += workers) rows[i] = evaluate_row(spec, grid[i]);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return rows;
}

std::vector<Locus> sweep_loci(const SweepSpec& spec) {
  spec.validate();
  std::vector<Locus> loci;
  auto add = [&](const char* kind, double value) {
    if (value >= spec.lo && value <= spec.hi) loci.push_back({kind, value});
  };
  const ModelParams& base = spec.base;
  switch (spec.axis) {
    case Axis::K: {
      if (base.gb2n() > 0.0) {
        for (double k : momenta_at_energy(base, base.omega_2 + base.delta_b())) {
          add("full_transmission", k);
        }
      }
      for (double k : full_reflection_momenta(base)) add("full_reflection", k);
      break;
    }
    case Axis::DeltaB: {
      const double da = make_point(base, spec.fixed_k).delta_a;
      if (base.gb2n() > 0.0) {
        add("full_transmission", -da);
        // delta_a (delta_a + delta_b) = g_b^2 n
        if (da != 0.0) add("full_reflection", base.gb2n() / da - da);
      }
      break;
    }
    case Axis::GbSqN: {
      const ScatteringPoint point = make_point(params_at(spec, spec.hi), spec.fixed_k);
      if (auto needed = full_reflection_coupling(point)) add("full_reflection", *needed);
      break;
    }
  }
  std::sort(loci.begin(), loci.end(),
            [](const Locus& a, const Locus& b) { return a.axis_value < b.axis_value; });
  return loci;
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig3a", "fig3b", "fig3c"};
}

std::optional<SweepSpec> preset(std::string_view name) {
  if (name == "fig2a") return k_sweep(figure2_params(1, 0.0));
  if (name == "fig2b") return k_sweep(figure2_params(30, 0.0));
  if (name == "fig2c") return k_sweep(figure2_params(1, -3.0));
  if (name == "fig2d") return k_sweep(figure2_params(30, -3.0));
  if (name == "fig2e") return k_sweep(figure2_params(0, 0.0));
  if (name == "fig3a" || name == "fig3b") {
    const double k = kPi / 4.0;
    SweepSpec s;
    s.base = figure3_params(name == "fig3a" ? 0.8 : -0.8, 0.0, k, 1.0);
    s.axis = Axis::DeltaB;
    s.lo = -5.0;
    s.hi = 5.0;
    s.fixed_k = k;
    return s;
  }
  if (name == "fig3c") {
    const double k = kPi / 6.0;
    SweepSpec s;
    s.base = figure3_params(1.0, 2.0, k, 2.0);
    s.axis = Axis::GbSqN;
    s.lo = 0.0;
    s.hi = 500.0;
    s.fixed_k = k;
    return s;
  }
  return std::nullopt;
}

void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "axis_name,axis_value,re_r,im_r,re_t,im_t,R,T,branch";
  if (spec.oracle_check) out << ",dr_abs,dt_abs";
  out << '\n';
  const std::string name(axis_name(spec.axis));
  std::string line;
  for (const SweepRow& row : rows) {
    line.clear();
    line += name;
    line += ',';
    append_number(line, row.axis_value);
    if (row.result) {
      const ScatteringResult& res = *row.result;
      for (double v : {res.r.real(), res.r.imag(), res.t.real(), res.t.imag(), res.R, res.T}) {
        line += ',';
        append_number(line, v);
      }
      line += ',';
      line += to_string(res.branch);
    } else {
      line += ",nan,nan,nan,nan,nan,nan,";
      line += to_string(row.error.value_or(ErrorCode::InvalidPoint));
    }
    if (spec.oracle_check) {
      line += ',';
      append_number(line, row.dr_abs.value_or(std::nan("")));
      line += ',';
      append_number(line, row.dt_abs.value_or(std::nan("")));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace wqed
