#include "rabiflow/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rabiflow::fock {

namespace {

constexpr cplx kI{0.0, 1.0};

OperatorMatrix named(std::string label, Matrix m) { return {std::move(label), std::move(m)}; }

Matrix diagonal_in_photon_number(const Basis& basis, const std::function<double(int)>& f) {
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (Atom atom : {Atom::excited, Atom::ground}) {
    for (int n = 0; n <= basis.n_max(); ++n) {
      const Index i = basis.index(atom, n);
      m(i, i) = f(n);
    }
  }
  return m;
}

std::vector<Index> with_dark(const Basis& basis) {
  std::vector<Index> region = basis.interior();
  region.push_back(basis.dark_index());
  return region;
}

}  // namespace

Basis::Basis(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("Basis: n_max must be >= 1");
}

int Basis::required_cutoff(double alpha_abs) {
  return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 10.0 * alpha_abs + 20.0));
}

int Basis::sector_of(Index i) const {
  const int n = static_cast<int>(i % (n_max_ + 1));
  return i <= n_max_ ? n + 1 : n;
}

std::vector<Index> Basis::interior() const {
  std::vector<Index> region;
  for (int k = 1; k <= n_max_ - 1; ++k) {
    region.push_back(index(Atom::excited, k - 1));
    region.push_back(index(Atom::ground, k));
  }
  return region;
}

OperatorSet build_operators(const Basis& basis, const ModelParams& params) {
  derive_scales(params);
  const Index dim = basis.dim();
  const double hbar = params.hbar;

  Matrix a = Matrix::Zero(dim, dim);
  Matrix sigma = Matrix::Zero(dim, dim);
  Matrix sigma3 = Matrix::Zero(dim, dim);
  for (int n = 0; n <= basis.n_max(); ++n) {
    for (Atom atom : {Atom::excited, Atom::ground}) {
      if (n > 0) a(basis.index(atom, n - 1), basis.index(atom, n)) = std::sqrt(double(n));
    }
    sigma(basis.index(Atom::ground, n), basis.index(Atom::excited, n)) = 1.0;
    sigma3(basis.index(Atom::excited, n), basis.index(Atom::excited, n)) = 1.0;
    sigma3(basis.index(Atom::ground, n), basis.index(Atom::ground, n)) = -1.0;
  }
  const Matrix a_dag = a.adjoint();
  const Matrix sigma_dag = sigma.adjoint();
  const Matrix n_phot = a_dag * a;
  const Matrix id = Matrix::Identity(dim, dim);

  const Matrix h = hbar * params.omega * (n_phot + 0.5 * id) +
                   0.5 * hbar * params.nu * sigma3 +
                   hbar * params.g * (a_dag * sigma + a * sigma_dag);

  // sqrt(a^+a) and (a a^+)^(-1/2) built on photon-number eigenvalues
  const Matrix sqrt_n = diagonal_in_photon_number(basis, [](int n) { return std::sqrt(double(n)); });
  const Matrix inv_sqrt_n1 =
      diagonal_in_photon_number(basis, [](int n) { return 1.0 / std::sqrt(double(n + 1)); });

  const Matrix b =
      std::sqrt(hbar) * (sigma_dag * sigma + sigma * sigma_dag * sqrt_n * inv_sqrt_n1) * a;
  const Matrix tau = sigma * a_dag * inv_sqrt_n1;
  const Matrix tau_dag = tau.adjoint();
  const Matrix b_dag = b.adjoint();

  OperatorSet ops;
  ops.a = named("a", a);
  ops.a_dag = named("a+", a_dag);
  ops.sigma = named("sigma", sigma);
  ops.sigma_dag = named("sigma+", sigma_dag);
  ops.sigma3 = named("sigma3", sigma3);
  ops.n_phot = named("n_phot", n_phot);
  ops.hamiltonian = named("H", h);
  ops.b = named("b", b);
  ops.b_dag = named("b+", b_dag);
  ops.tau = named("tau", tau);
  ops.tau_dag = named("tau+", tau_dag);
  ops.tau1 = named("tau1", tau + tau_dag);
  ops.tau2 = named("tau2", kI * (tau - tau_dag));
  ops.tau3 = named("tau3", tau_dag * tau - tau * tau_dag);
  ops.action = named("B", b * b_dag);
  ops.n_exc = named("n_exc", n_phot + sigma_dag * sigma);
  return ops;
}

Matrix operator_function(const Matrix& hermitian, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("operator_function: eigendecomposition failed");
  }
  const Eigen::VectorXd values = solver.eigenvalues();
  Eigen::VectorXcd mapped(values.size());
  for (Index i = 0; i < values.size(); ++i) mapped(i) = f(values(i));
  return solver.eigenvectors() * mapped.asDiagonal() * solver.eigenvectors().adjoint();
}

double max_abs_on(const Matrix& m, std::span<const Index> region) {
  double worst = 0.0;
  for (Index i : region) {
    for (Index j : region) worst = std::max(worst, std::abs(m(i, j)));
  }
  return worst;
}

NormalFormReport verify_normal_form(const OperatorSet& ops, const Basis& basis,
                                    const ModelParams& params) {
  const Scales sc = derive_scales(params);
  const Matrix& action = ops.action.m;
  const Matrix sqrt_action =
      operator_function(action, [](double x) { return std::sqrt(std::max(x, 0.0)); });
  const Matrix normal_form = params.omega * action + sc.delta * ops.tau3.m +
                             sc.lambda * sqrt_action * ops.tau1.m;
  const Matrix diff = ops.hamiltonian.m - normal_form;

  const std::vector<Index> region = basis.interior();
  NormalFormReport report{};
  report.residual = max_abs_on(diff, region);
  report.hamiltonian_norm = ops.hamiltonian.m.cwiseAbs().maxCoeff();
  report.dark_state_discrepancy = std::abs(diff(basis.dark_index(), basis.dark_index()));
  return report;
}

std::vector<IdentityResidual> verify_polariton_algebra(const OperatorSet& ops,
                                                       const Basis& basis,
                                                       const ModelParams& params) {
  const Index dim = basis.dim();
  const Matrix id = Matrix::Identity(dim, dim);
  const std::vector<Index> interior = basis.interior();
  const std::vector<Index> interior_dark = with_dark(basis);
  std::vector<Index> everything(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) everything[static_cast<std::size_t>(i)] = i;

  const Matrix& tau = ops.tau.m;
  const Matrix& tau_dag = ops.tau_dag.m;
  const Matrix& b = ops.b.m;
  const Matrix& action = ops.action.m;
  const Matrix& h = ops.hamiltonian.m;

  Matrix dark = Matrix::Zero(dim, dim);
  dark(basis.dark_index(), basis.dark_index()) = 1.0;

  auto comm = [](const Matrix& x, const Matrix& y) -> Matrix { return x * y - y * x; };
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());

  std::vector<IdentityResidual> out;
  out.push_back({"tau^2 = 0", max_abs_on(tau * tau, everything), true});
  out.push_back({"{tau,tau+} + |g0><g0| = 1",
                 max_abs_on(tau * tau_dag + tau_dag * tau + dark - id, interior_dark), true});
  out.push_back({"[b,B] = hbar b", max_abs_on(comm(b, action) - params.hbar * b, interior), true});
  out.push_back({"[b,tau] = 0", max_abs_on(comm(b, tau), interior), true});
  out.push_back({"[b,tau+] = 0", max_abs_on(comm(b, tau_dag), interior), true});
  out.push_back({"tau1^2 = 1", max_abs_on(ops.tau1.m * ops.tau1.m - id, interior), true});
  out.push_back({"tau2^2 = 1", max_abs_on(ops.tau2.m * ops.tau2.m - id, interior), true});
  out.push_back({"tau3^2 = 1", max_abs_on(ops.tau3.m * ops.tau3.m - id, interior), true});
  out.push_back({"[tau1,tau2] = 2i tau3",
                 max_abs_on(comm(ops.tau1.m, ops.tau2.m) - 2.0 * kI * ops.tau3.m, interior), true});
  out.push_back({"[H,n_exc] = 0 (relative)", max_abs_on(comm(h, ops.n_exc.m), everything) / scale,
                 true});
  out.push_back({"B = hbar n_exc", max_abs_on(action - params.hbar * ops.n_exc.m, interior_dark),
                 true});
  // The printed polariton number a^+a - sigma^+sigma is not conserved by H;
  // reported for the record only.
  const Matrix n_pol_printed = ops.n_phot.m - ops.sigma_dag.m * ops.sigma.m;
  out.push_back({"[H,a+a - s+s] (not conserved)",
                 max_abs_on(comm(h, n_pol_printed), everything) / scale, false});
  return out;
}

FlowReport verify_heisenberg_flows(const OperatorSet& ops, const Basis& basis,
                                   const ModelParams& params, std::span<const double> times,
                                   double tolerance) {
  const double hbar = params.hbar;
  const Index dim = basis.dim();
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix& action = ops.action.m;

  // Operator functions of B, zero on the dark state (excluded from comparison).
  const double floor = 0.5 * hbar;
  auto fn = [&](const std::function<double(double)>& f, double shift = 0.0) {
    return operator_function(action, [&](double x) { return x < floor ? 0.0 : f(x + shift); });
  };
  const Matrix c_op = fn([&](double x) { return mixing(x, params).c; });
  const Matrix s_op = fn([&](double x) { return mixing(x, params).s; });
  const Matrix c_up = fn([&](double x) { return mixing(x, params).c; }, hbar);
  const Matrix s_up = fn([&](double x) { return mixing(x, params).s; }, hbar);
  const Matrix rabi_eig = fn([&](double x) { return 2.0 * dressed_energy(x, params) / hbar; });
  const Matrix phase_eig = fn([&](double x) { return phase_frequency_h(x, params); });

  const Matrix& t1 = ops.tau1.m;
  const Matrix& t2 = ops.tau2.m;
  const Matrix& t3 = ops.tau3.m;
  const Matrix p_plus = 0.5 * (id + s_op * t1 + c_op * t3);
  const Matrix p_minus = 0.5 * (id - s_op * t1 - c_op * t3);
  const Matrix p_plus_up = 0.5 * (id + s_up * t1 + c_up * t3);
  const Matrix p_minus_up = 0.5 * (id - s_up * t1 - c_up * t3);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(ops.hamiltonian.m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("verify_heisenberg_flows: eigendecomposition of H failed");
  }
  const Matrix& vecs = solver.eigenvectors();
  const Eigen::VectorXd& energies = solver.eigenvalues();

  // Diagonal operator functions of B are exactly diagonal in this basis, so
  // exp(i f(B) t) is formed entrywise on the diagonal.
  auto diag_phase = [&](const Matrix& f_of_b, double t, double sign) {
    Matrix m = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) m(i, i) = std::exp(sign * kI * f_of_b(i, i).real() * t);
    return m;
  };

  const std::vector<Index> region = basis.interior();
  FlowReport report;
  double worst = -1.0;
  for (double t : times) {
    Eigen::VectorXcd phases(dim);
    for (Index i = 0; i < dim; ++i) phases(i) = std::exp(-kI * energies(i) * t / hbar);
    const Matrix u = vecs * phases.asDiagonal() * vecs.adjoint();

    const Matrix tau3_t = u.adjoint() * t3 * u;
    const Matrix cos_rabi = 0.5 * (diag_phase(rabi_eig, t, 1.0) + diag_phase(rabi_eig, t, -1.0));
    const Matrix sin_rabi =
        (diag_phase(rabi_eig, t, 1.0) - diag_phase(rabi_eig, t, -1.0)) / (2.0 * kI);
    const Matrix tau3_flow = c_op * (s_op * t1 + c_op * t3) -
                             (s_op * c_op * t1 - s_op * s_op * t3) * cos_rabi +
                             s_op * t2 * sin_rabi;

    const Matrix b_t = u.adjoint() * ops.b.m * u;
    const Matrix e_rabi_m = diag_phase(rabi_eig, t, -1.0);
    const Matrix e_rabi_p = diag_phase(rabi_eig, t, 1.0);
    const Matrix e_phase_m = diag_phase(phase_eig, t, -1.0);
    const Matrix e_phase_p = diag_phase(phase_eig, t, 1.0);
    const Matrix b_flow = ((p_plus + p_minus * e_rabi_m) * p_plus_up * e_phase_m +
                           (p_plus * e_rabi_p + p_minus) * p_minus_up * e_phase_p) *
                          std::exp(-kI * params.omega * t) * ops.b.m;

    const Matrix d_tau3 = tau3_t - tau3_flow;
    const Matrix d_b = b_t - b_flow;
    const double r_tau3 = max_abs_on(d_tau3, region);
    const double r_b = max_abs_on(d_b, region);
    report.tau3_residual = std::max(report.tau3_residual, r_tau3);
    report.b_residual = std::max(report.b_residual, r_b);
    if (std::max(r_tau3, r_b) > worst) {
      worst = std::max(r_tau3, r_b);
      report.worst_time = t;
    }
    if (!report.first_failure && std::max(r_tau3, r_b) > tolerance) {
      for (Index i : region) {
        bool bad = false;
        for (Index j : region) {
          if (std::abs(d_tau3(i, j)) > tolerance || std::abs(d_b(i, j)) > tolerance) bad = true;
        }
        if (bad) {
          report.first_failure = std::make_pair(basis.sector_of(i), t);
          break;
        }
      }
    }
  }
  return report;
}

SectorDecomposition::SectorDecomposition(const Basis& basis, const ModelParams& params)
    : basis_(basis), params_(params) {
  const Scales sc = derive_scales(params);
  const double hbar = params.hbar;
  dark_energy_ = 0.5 * hbar * params.omega - 0.5 * hbar * params.nu;
  edge_energy_ = hbar * params.omega * (basis.n_max() + 0.5) + 0.5 * hbar * params.nu;
  sectors_.reserve(static_cast<std::size_t>(basis.n_max()));
  for (int k = 1; k <= basis.n_max(); ++k) {
    Sector sec{};
    sec.k = k;
    sec.action = hbar * k;
    sec.upper = basis.index(Atom::excited, k - 1);
    sec.lower = basis.index(Atom::ground, k);
    const Mixing m = mixing(sec.action, params);
    const double eps = sc.lambda * std::sqrt(sec.action + sc.b_r);
    sec.energy_plus = params.omega * sec.action + eps;
    sec.energy_minus = params.omega * sec.action - eps;
    const double cos_half = std::sqrt(0.5 * (1.0 + m.c));
    const double sin_half = m.s / (2.0 * cos_half);
    sec.plus = {cos_half, sin_half};
    sec.minus = {-sin_half, cos_half};
    sectors_.push_back(sec);
  }
}

AtomFieldState::AtomFieldState(Basis basis, Vector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.dim()) {
    throw std::invalid_argument("AtomFieldState: amplitude vector has wrong dimension");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "AtomFieldState: state not normalized (norm - 1 = " << norm - 1.0 << ")";
    throw std::invalid_argument(msg.str());
  }
}

Vector coherent_amplitudes(cplx alpha, int n_max) {
  Vector out(n_max + 1);
  const double r = std::abs(alpha);
  const double phi = std::arg(alpha);
  for (int n = 0; n <= n_max; ++n) {
    if (r == 0.0) {
      out(n) = n == 0 ? 1.0 : 0.0;
      continue;
    }
    const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    out(n) = std::polar(std::exp(log_mag), n * phi);
  }
  return out;
}

AtomFieldState prepare_state(const WavePacketPrep& prep, const Basis& basis,
                             const ModelParams& params) {
  const double r = std::abs(prep.alpha0);
  const int required = Basis::required_cutoff(r);
  if (basis.n_max() < required) {
    std::ostringstream msg;
    msg << "prepare_state: n_max = " << basis.n_max() << " too small for |alpha0| = " << r
        << ", need n_max >= " << required;
    throw TruncationError(msg.str(), required);
  }
  const Vector field = coherent_amplitudes(prep.alpha0, basis.n_max());
  const Eigen::Vector2cd atom = atomic_vector(prep, params);
  Vector amp(basis.dim());
  for (int n = 0; n <= basis.n_max(); ++n) {
    amp(basis.index(Atom::excited, n)) = atom(0) * field(n);
    amp(basis.index(Atom::ground, n)) = atom(1) * field(n);
  }
  amp /= amp.norm();
  return AtomFieldState(basis, std::move(amp));
}

AtomFieldState propagate(const AtomFieldState& state, double t,
                         const SectorDecomposition& sectors) {
  if (!(state.basis() == sectors.basis())) {
    throw std::invalid_argument("propagate: state and sectors use different bases");
  }
  const Basis& basis = state.basis();
  const double hbar = sectors.params().hbar;
  const Vector& in = state.amplitudes();
  Vector out(in.size());

  const Index dark = basis.dark_index();
  out(dark) = in(dark) * std::exp(-kI * sectors.dark_energy() * t / hbar);
  const Index edge = basis.index(Atom::excited, basis.n_max());
  out(edge) = in(edge) * std::exp(-kI * sectors.edge_energy() * t / hbar);

  for (const auto& sec : sectors.sectors()) {
    const cplx x0 = in(sec.upper);
    const cplx x1 = in(sec.lower);
    const cplx cp = (sec.plus(0) * x0 + sec.plus(1) * x1) * std::exp(-kI * sec.energy_plus * t / hbar);
    const cplx cm =
        (sec.minus(0) * x0 + sec.minus(1) * x1) * std::exp(-kI * sec.energy_minus * t / hbar);
    out(sec.upper) = sec.plus(0) * cp + sec.minus(0) * cm;
    out(sec.lower) = sec.plus(1) * cp + sec.minus(1) * cm;
  }
  return AtomFieldState(basis, std::move(out));
}

cplx expect(const AtomFieldState& state, const OperatorMatrix& op) {
  if (op.m.rows() != state.basis().dim() || op.m.cols() != state.basis().dim()) {
    throw std::invalid_argument("expect: operator '" + op.label + "' does not match the basis");
  }
  const Vector& psi = state.amplitudes();
  return psi.dot(op.m * psi);
}

double expect_hermitian(const AtomFieldState& state, const OperatorMatrix& op) {
  const cplx v = expect(state, op);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
    std::ostringstream msg;
    msg << "expect_hermitian: <" << op.label << "> has imaginary part " << v.imag();
    throw std::runtime_error(msg.str());
  }
  return v.real();
}

double mean_sigma3(const AtomFieldState& state) {
  const int n_max = state.basis().n_max();
  const Vector& psi = state.amplitudes();
  return psi.head(n_max + 1).squaredNorm() - psi.tail(n_max + 1).squaredNorm();
}

cplx mean_field(const AtomFieldState& state) {
  const Basis& basis = state.basis();
  const Vector& psi = state.amplitudes();
  cplx acc = 0.0;
  for (Atom atom : {Atom::excited, Atom::ground}) {
    for (int n = 1; n <= basis.n_max(); ++n) {
      acc += std::conj(psi(basis.index(atom, n - 1))) * std::sqrt(double(n)) *
             psi(basis.index(atom, n));
    }
  }
  return acc;
}

double mean_action(const AtomFieldState& state, double hbar) {
  const Basis& basis = state.basis();
  const Vector& psi = state.amplitudes();
  double acc = 0.0;
  for (Index i = 0; i < basis.dim(); ++i) acc += basis.sector_of(i) * std::norm(psi(i));
  return hbar * acc;
}

}  // namespace rabiflow::fock
