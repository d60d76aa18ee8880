#include "wqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "wqed/error.hpp"

namespace wqed {

namespace {

using cplx = std::complex<double>;

double emitter_b_coupling(const ModelParams& p) {
  return p.g_b * std::sqrt(static_cast<double>(p.n));
}

}  // namespace

Eigen::SparseMatrix<double> build_hamiltonian(const LatticeProblem& problem) {
  const ModelParams& p = problem.params;
  p.validate();
  const int L = problem.half_length;
  if (L < 2) throw Error(ErrorCode::InvalidRunSpec, "half_length must be >= 2");

  const double n = static_cast<double>(p.n);
  const double photon = p.omega_a + n * p.omega_b;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(3 * (2 * L + 1) + 6));
  for (int j = -L; j <= L; ++j) {
    const int i = problem.site_index(j);
    entries.emplace_back(i, i, photon);
    if (j < L) {
      entries.emplace_back(i, i + 1, -p.xi);
      entries.emplace_back(i + 1, i, -p.xi);
    }
  }
  const int e2 = problem.e2_index();
  const int e3 = problem.e3_index();
  entries.emplace_back(e2, e2, p.omega_2 + n * p.omega_b);
  entries.emplace_back(e3, e3, p.omega_3 + (n - 1.0) * p.omega_b);
  if (!problem.decoupled_emitter) {
    const int a0 = problem.site_index(0);
    entries.emplace_back(a0, e2, p.g_a);
    entries.emplace_back(e2, a0, p.g_a);
  }
  if (const double gb = emitter_b_coupling(p); gb != 0.0) {
    entries.emplace_back(e2, e3, gb);
    entries.emplace_back(e3, e2, gb);
  }

  Eigen::SparseMatrix<double> h(problem.dimension(), problem.dimension());
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

StationarySolution solve_stationary(const LatticeProblem& problem, double k) {
  const int L = problem.half_length;
  if (L < 10) throw Error(ErrorCode::InvalidRunSpec, "stationary solve needs half_length >= 10");
  const ScatteringPoint point = make_point(problem.params, k);
  if (std::abs(std::sin(point.k)) < kStationarySinTolerance) {
    throw Error(ErrorCode::BandEdge, "sin k = 0: no propagating scattering state");
  }
  const Eigen::SparseMatrix<double> h = build_hamiltonian(problem);
  const double E = point.E;
  const double kk = point.k;

  // Unknowns: alpha_j for j in [-L+2, L-2], then beta, zeta, r, t.
  const int n_interior = 2 * L - 3;
  const int ib = n_interior;
  const int iz = n_interior + 1;
  const int ir = n_interior + 2;
  const int it = n_interior + 3;
  const int n_unknowns = n_interior + 4;

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_unknowns, n_unknowns);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_unknowns);

  const int e2 = problem.e2_index();
  const int e3 = problem.e3_index();
  const bool e3_inert = emitter_b_coupling(problem.params) == 0.0;
  const bool e2_inert = problem.decoupled_emitter && e3_inert;

  // Adds coefficient c multiplying basis state `state` into equation `row`.
  auto add = [&](int row, int state, cplx c) {
    if (state == e2) { a(row, ib) += c; return; }
    if (state == e3) { a(row, iz) += c; return; }
    const int j = state - L;
    if (j <= -L + 1) {
      const cplx in = std::exp(cplx(0.0, kk * j));
      a(row, ir) += c * std::conj(in);
      rhs(row) -= c * in;
    } else if (j >= L - 1) {
      a(row, it) += c * std::exp(cplx(0.0, kk * j));
    } else {
      a(row, j + L - 2) += c;
    }
  };
  // Row of (E - H) for basis state `state`.
  auto add_row = [&](int row, int state) {
    for (Eigen::SparseMatrix<double>::InnerIterator it_h(h, state); it_h; ++it_h) {
      const int other = static_cast<int>(it_h.row());
      const double diag = other == state ? E : 0.0;
      add(row, other, diag - it_h.value());
    }
  };

  int row = 0;
  for (int j = -L + 1; j <= L - 1; ++j) add_row(row++, problem.site_index(j));
  if (e2_inert) {
    a(row++, ib) = 1.0;
  } else {
    add_row(row++, e2);
  }
  if (e3_inert) {
    // |3,n-1> is unreachable without the b coupling.
    a(row++, iz) = 1.0;
  } else {
    add_row(row++, e3);
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-13)) {
    throw Error(ErrorCode::SingularSystem, "stationary system is numerically singular");
  }
  const Eigen::VectorXcd x = lu.solve(rhs);

  StationarySolution sol;
  sol.half_length = L;
  sol.beta = x(ib);
  sol.zeta = x(iz);
  sol.r_fit = x(ir);
  sol.t_fit = x(it);
  sol.alpha.resize(static_cast<std::size_t>(2 * L + 1));
  for (int j = -L; j <= L; ++j) {
    cplx value;
    if (j <= -L + 1) {
      value = std::exp(cplx(0.0, kk * j)) + sol.r_fit * std::exp(cplx(0.0, -kk * j));
    } else if (j >= L - 1) {
      value = sol.t_fit * std::exp(cplx(0.0, kk * j));
    } else {
      value = x(j + L - 2);
    }
    sol.alpha[static_cast<std::size_t>(j + L)] = value;
  }

  Eigen::VectorXcd psi(problem.dimension());
  for (int j = -L; j <= L; ++j) psi(problem.site_index(j)) = sol.alpha_at(j);
  psi(e2) = sol.beta;
  psi(e3) = sol.zeta;
  const Eigen::VectorXcd hpsi = h.cast<cplx>() * psi;
  std::vector<int> checked;
  for (int j = -L + 1; j <= L - 1; ++j) checked.push_back(problem.site_index(j));
  if (!e2_inert) checked.push_back(e2);
  if (!e3_inert) checked.push_back(e3);
  for (int i : checked) {
    sol.max_residual = std::max(sol.max_residual, std::abs(E * psi(i) - hpsi(i)));
  }
  return sol;
}

WavepacketRun run_wavepacket(const WavepacketSpec& spec) {
  const ModelParams& p = spec.params;
  p.validate();
  if (!(spec.sigma >= 8.0)) throw Error(ErrorCode::InvalidRunSpec, "sigma must be >= 8 sites");
  const int L = spec.half_length;
  const int chain = 2 * L + 1;
  if (static_cast<double>(chain) < 20.0 * spec.sigma) {
    throw Error(ErrorCode::InvalidRunSpec, "chain_length must be >= 20 sigma");
  }
  const double k0 = spec.k0;
  if (!(std::abs(k0) > 0.0 && std::abs(k0) < std::numbers::pi) ||
      std::abs(std::sin(k0)) < 0.2) {
    throw Error(ErrorCode::InvalidRunSpec, "need 0 < |k0| < pi and |sin k0| >= 0.2");
  }
  if (spec.buffer < 0 || spec.record_every < 1) {
    throw Error(ErrorCode::InvalidRunSpec, "buffer must be >= 0 and record_every >= 1");
  }

  const double velocity = 2.0 * p.xi * std::sin(k0);
  const int direction = velocity > 0.0 ? 1 : -1;
  const int launch_distance = spec.buffer + static_cast<int>(std::ceil(6.0 * spec.sigma)) + 20;
  const int j0 = spec.j0.value_or(-direction * launch_distance);
  if (std::abs(j0) >= L || j0 * direction >= 0) {
    throw Error(ErrorCode::InvalidRunSpec, "j0 must lie inside the chain, upstream of the scatterer");
  }
  const double t_final =
      spec.t_final.value_or(1.2 * 2.0 * std::abs(j0) / std::abs(velocity));
  const double dt_request = spec.dt.value_or(0.02 / p.xi);
  if (!(t_final > 0.0) || !(dt_request > 0.0)) {
    throw Error(ErrorCode::InvalidRunSpec, "dt and t_final must be positive");
  }
  const int steps = static_cast<int>(std::ceil(t_final / dt_request));
  const double dt = t_final / steps;

  LatticeProblem problem{p, L, spec.decoupled_emitter};
  Eigen::SparseMatrix<double> h = build_hamiltonian(problem);
  // Shifting by the photon-sector energy only changes a global phase.
  const double shift = p.omega_a + static_cast<double>(p.n) * p.omega_b;
  Eigen::SparseMatrix<double> identity(h.rows(), h.cols());
  identity.setIdentity();
  const Eigen::SparseMatrix<double> shifted = h - shift * identity;
  const cplx half_step(0.0, 0.5 * dt);
  Eigen::SparseMatrix<cplx> forward = identity.cast<cplx>() + half_step * shifted.cast<cplx>();
  Eigen::SparseMatrix<cplx> backward = identity.cast<cplx>() - half_step * shifted.cast<cplx>();
  forward.makeCompressed();
  backward.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> solver;
  solver.compute(forward);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSystem, "Crank-Nicolson factorisation failed");
  }

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(problem.dimension());
  for (int j = -L; j <= L; ++j) {
    const double x = static_cast<double>(j - j0);
    psi(problem.site_index(j)) =
        std::exp(-x * x / (4.0 * spec.sigma * spec.sigma)) * std::exp(cplx(0.0, k0 * j));
  }
  psi /= psi.norm();

  const int e2 = problem.e2_index();
  const int e3 = problem.e3_index();
  const int buffer = spec.buffer;
  auto sample = [&](double time) {
    WavepacketSample s;
    s.time = time;
    for (int j = -L; j <= L; ++j) {
      const double prob = std::norm(psi(problem.site_index(j)));
      if (j < -buffer) s.p_left += prob;
      else if (j > buffer) s.p_right += prob;
      else s.p_scatterer += prob;
    }
    s.beta2 = std::norm(psi(e2));
    s.zeta2 = std::norm(psi(e3));
    s.norm = s.p_left + s.p_right + s.p_scatterer + s.beta2 + s.zeta2;
    return s;
  };
  auto edge_probability = [&] {
    double edge = 0.0;
    for (int d = 0; d < 5; ++d) {
      edge += std::norm(psi(problem.site_index(-L + d))) + std::norm(psi(problem.site_index(L - d)));
    }
    return edge;
  };

  WavepacketRun run;
  run.chain_length = chain;
  run.k0 = k0;
  run.sigma = spec.sigma;
  run.j0 = j0;
  run.dt = dt;
  run.t_final = t_final;
  run.steps = steps;
  run.record.push_back(sample(0.0));
  run.max_zeta_abs = std::abs(psi(e3));

  Eigen::VectorXcd rhs(psi.size());
  for (int step = 1; step <= steps; ++step) {
    rhs.noalias() = backward * psi;
    psi = solver.solve(rhs);
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(psi.squaredNorm() - 1.0));
    run.max_zeta_abs = std::max(run.max_zeta_abs, std::abs(psi(e3)));
    if (edge_probability() > kEdgeProbabilityThreshold) {
      throw Error(ErrorCode::BoundaryContamination,
                  "packet reached the chain ends at t = " + std::to_string(step * dt));
    }
    if (step % spec.record_every == 0 || step == steps) run.record.push_back(sample(step * dt));
  }

  const WavepacketSample& last = run.record.back();
  run.T_measured = direction > 0 ? last.p_right : last.p_left;
  run.R_measured = direction > 0 ? last.p_left : last.p_right;
  run.residual = last.p_scatterer + last.beta2 + last.zeta2;
  return run;
}

void write_wavepacket_csv(const WavepacketRun& run, std::ostream& out) {
  out << "time,norm,P_left,P_right,P_scatterer,|beta|^2,|zeta|^2\n";
  char buf[256];
  for (const auto& s : run.record) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.time, s.norm,
                  s.p_left, s.p_right, s.p_scatterer, s.beta2, s.zeta2);
    out << buf;
  }
}

}  // namespace wqed
