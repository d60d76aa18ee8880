#pragma once

// One-dimensional parameter sweeps of the closed-form amplitudes, with the
// figure presets and optional per-row stationary-oracle cross-check.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/error.hpp"
#include "wqed/model.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

enum class Axis { K, DeltaB, GbSqN };

std::string_view axis_name(Axis axis);       // "k", "delta_b", "gb2n"
std::optional<Axis> parse_axis(std::string_view name);

struct SweepSpec {
  ModelParams base;
  Axis axis = Axis::K;
  double lo = 0.0;
  double hi = 0.0;
  int samples = 1001;
  double fixed_k = 0.0;  // DeltaB and GbSqN sweeps only
  bool oracle_check = false;
  int oracle_half_length = 25;

  /// m >= 2, lo < hi, finite bounds; K sweeps must stay within [-pi, pi].
  /// Throws InvalidRunSpec.
  void validate() const;
};

struct SweepRow {
  double axis_value = 0.0;
  std::optional<ScatteringResult> result;
  std::optional<ErrorCode> error;
  std::optional<double> dr_abs;  // |r_oracle - r|, oracle_check only
  std::optional<double> dt_abs;
  std::optional<int> physical_n;  // GbSqN rows that land on g_b^2 n for integer n
};

/// Parameters and momentum for one axis value. DeltaB moves omega_3 so that
/// omega_32 - omega_b equals the value; GbSqN uses n = 1, g_b = sqrt(value)
/// (only g_b^2 n enters the amplitudes).
ModelParams params_at(const SweepSpec& spec, double value);
double momentum_at(const SweepSpec& spec, double value);

/// Evenly spaced axis values lo + (hi - lo) i / (m - 1).
std::vector<double> sweep_grid(const SweepSpec& spec);

/// One row per grid value, in axis order. Rows are evaluated on up to
/// worker_count() threads; the output does not depend on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Threads used by run_sweep: WQED_THREADS when set to a positive integer,
/// capped by the hardware concurrency (at least 1).
unsigned worker_count();

struct Locus {
  std::string kind;  // "full_transmission" or "full_reflection"
  double axis_value = 0.0;
};

/// Resonance positions predicted by the closed-form conditions that fall in
/// [lo, hi], ascending by axis value.
std::vector<Locus> sweep_loci(const SweepSpec& spec);

/// Names: fig2a, fig2b, fig2c, fig2d, fig2e, fig3a, fig3b, fig3c.
std::vector<std::string> preset_names();
std::optional<SweepSpec> preset(std::string_view name);

/// Header: axis_name,axis_value,re_r,im_r,re_t,im_t,R,T,branch[,dr_abs,dt_abs].
/// Error rows print nan values and the error name in the branch column.
void write_sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out);

/// Minimal SVG line chart of R and T against the axis value.
void write_sweep_svg(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out,
                     std::string_view title);

}  // namespace wqed
