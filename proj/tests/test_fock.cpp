#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "rabiflow/fock.hpp"

using namespace rabiflow;
using namespace rabiflow::fock;

namespace {

const cplx I{0.0, 1.0};

Matrix dense_propagator(const Matrix& h, double t, double hbar) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phase(es.eigenvalues().size());
  for (Index i = 0; i < phase.size(); ++i) phase(i) = std::exp(-I * es.eigenvalues()(i) * t / hbar);
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

AtomFieldState basis_state(const Basis& basis, Atom atom, int n) {
  Vector v = Vector::Zero(basis.dim());
  v(basis.index(atom, n)) = 1.0;
  return {basis, v};
}

}  // namespace

TEST_CASE("basis layout") {
  const Basis b(5);
  CHECK(b.dim() == 12);
  CHECK(b.index(Atom::excited, 0) == 0);
  CHECK(b.index(Atom::ground, 0) == 6);
  CHECK(b.dark_index() == 6);
  CHECK(b.sector_of(b.index(Atom::excited, 2)) == 3);
  CHECK(b.sector_of(b.index(Atom::ground, 3)) == 3);
  CHECK(b.sector_of(b.dark_index()) == 0);
  CHECK(b.interior().size() == 8);
  CHECK(Basis::required_cutoff(0.0) == 20);
  CHECK(Basis::required_cutoff(3.0) == 59);
  CHECK(Basis::required_cutoff(std::sqrt(50.0)) == 141);
  CHECK_THROWS(Basis(0));
}

TEST_CASE("ladder and Hamiltonian matrix elements") {
  const Basis basis(6);
  const ModelParams p = ModelParams::from_action_scale(1.0, 0.8, 2.0, 0.3);
  const OperatorSet ops = build_operators(basis, p);
  const Atom e = Atom::excited;
  const Atom g = Atom::ground;

  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(ops.a.m(basis.index(g, n - 1), basis.index(g, n)) - std::sqrt(double(n))) < 1e-15);
    CHECK(std::abs(ops.a_dag.m(basis.index(e, n), basis.index(e, n - 1)) - std::sqrt(double(n))) < 1e-15);
  }
  CHECK(std::abs(ops.sigma.m(basis.index(g, 2), basis.index(e, 2)) - 1.0) == 0.0);
  CHECK(ops.sigma3.m(basis.index(e, 4), basis.index(e, 4)) == cplx(1.0));
  CHECK(ops.sigma3.m(basis.index(g, 4), basis.index(g, 4)) == cplx(-1.0));

  const double hbar = p.hbar;
  for (int n = 0; n <= 6; ++n) {
    const Index ie = basis.index(e, n);
    const Index ig = basis.index(g, n);
    CHECK(ops.hamiltonian.m(ie, ie).real() ==
          doctest::Approx(hbar * p.omega * (n + 0.5) + 0.5 * hbar * p.nu));
    CHECK(ops.hamiltonian.m(ig, ig).real() ==
          doctest::Approx(hbar * p.omega * (n + 0.5) - 0.5 * hbar * p.nu));
    if (n < 6) {
      CHECK(std::abs(ops.hamiltonian.m(ie, basis.index(g, n + 1)) - hbar * p.g * std::sqrt(n + 1.0)) <
            1e-14);
    }
  }
  CHECK((ops.hamiltonian.m - ops.hamiltonian.m.adjoint()).norm() == 0.0);
}

TEST_CASE("sector eigenpairs match a numerical 2x2 solve") {
  const Basis basis(12);
  const ModelParams p = ModelParams::from_action_scale(1.0, 1.0, 6.25, 0.4);
  const OperatorSet ops = build_operators(basis, p);
  const SectorDecomposition dec(basis, p);
  REQUIRE(dec.sectors().size() == 12);
  for (const auto& s : dec.sectors()) {
    Eigen::Matrix2cd block;
    block << ops.hamiltonian.m(s.upper, s.upper), ops.hamiltonian.m(s.upper, s.lower),
        ops.hamiltonian.m(s.lower, s.upper), ops.hamiltonian.m(s.lower, s.lower);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    CHECK(s.energy_minus == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-13));
    CHECK(s.energy_plus == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-13));
    CHECK((block * s.plus.cast<cplx>() - s.energy_plus * s.plus.cast<cplx>()).norm() < 1e-12);
    CHECK((block * s.minus.cast<cplx>() - s.energy_minus * s.minus.cast<cplx>()).norm() < 1e-12);
    CHECK(s.action == doctest::Approx(s.k * p.hbar));
  }
  CHECK(dec.dark_energy() == doctest::Approx(ops.hamiltonian.m(basis.dark_index(), basis.dark_index()).real()));
  const Index edge = basis.index(Atom::excited, 12);
  CHECK(dec.edge_energy() == doctest::Approx(ops.hamiltonian.m(edge, edge).real()));
}

TEST_CASE("sector propagation equals the dense propagator") {
  const Basis basis(40);
  const ModelParams p = ModelParams::from_action_scale(1.0, 1.0, 6.25, 0.3);
  const OperatorSet ops = build_operators(basis, p);
  const SectorDecomposition dec(basis, p);
  for (AtomicPrep atomic : {AtomicPrep::excited, AtomicPrep::plus_dressed}) {
    const AtomFieldState psi0 = prepare_state({cplx(1.2, -0.7), atomic}, basis, p);
    for (double t : {0.0, 0.37, 4.1, 23.0}) {
      const Vector dense = dense_propagator(ops.hamiltonian.m, t, p.hbar) * psi0.amplitudes();
      CHECK((propagate(psi0, t, dec).amplitudes() - dense).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("vacuum Rabi oscillation at resonance") {
  const Basis basis(8);
  const double g = 0.9;
  ModelParams p;
  p.g = g;
  const SectorDecomposition dec(basis, p);
  const AtomFieldState up = basis_state(basis, Atom::excited, 0);
  for (double t : {0.0, 0.3, 1.1, 2.0, 7.5}) {
    const AtomFieldState psi = propagate(up, t, dec);
    CHECK(std::norm(psi(Atom::excited, 0)) == doctest::Approx(std::pow(std::cos(g * t), 2)).epsilon(1e-13));
    CHECK(mean_sigma3(psi) == doctest::Approx(std::cos(2.0 * g * t)).epsilon(1e-12));
  }
  const AtomFieldState dark = basis_state(basis, Atom::ground, 0);
  CHECK(std::abs(propagate(dark, 3.0, dec)(Atom::ground, 0)) == doctest::Approx(1.0));
}

TEST_CASE("long-time propagation stays unitary and conserves invariants") {
  const ModelParams p = ModelParams::from_action_scale(1.0, 1.0, 6.25);
  const WavePacketPrep prep{cplx(std::sqrt(8.0), 0.0), AtomicPrep::excited};
  const Basis basis = Basis::for_coherent(std::abs(prep.alpha0));
  const SectorDecomposition dec(basis, p);
  const OperatorSet ops = build_operators(basis, p);
  const AtomFieldState psi0 = prepare_state(prep, basis, p);
  const double period = 2.0 * std::numbers::pi * p.hbar / (2.0 * dressed_energy(prep.action(1.0), p));
  const double e0 = expect_hermitian(psi0, ops.hamiltonian);
  const double b0 = mean_action(psi0, p.hbar);
  for (double periods : {1.0, 10.0, 1000.0}) {
    const AtomFieldState psi = propagate(psi0, periods * period, dec);
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-13);
    CHECK(expect_hermitian(psi, ops.hamiltonian) == doctest::Approx(e0).epsilon(1e-12));
    CHECK(mean_action(psi, p.hbar) == doctest::Approx(b0).epsilon(1e-12));
  }
}

TEST_CASE("structured expectations agree with dense operators") {
  const Basis basis(45);
  const ModelParams p = ModelParams::from_action_scale(1.0, 1.0, 6.25, 0.2);
  const OperatorSet ops = build_operators(basis, p);
  const SectorDecomposition dec(basis, p);
  const AtomFieldState psi0 =
      prepare_state({cplx(0.9, 1.4), AtomicPrep::plus_dressed}, basis, p);
  for (double t : {0.0, 1.7, 9.0}) {
    const AtomFieldState psi = propagate(psi0, t, dec);
    CHECK(mean_sigma3(psi) == doctest::Approx(expect_hermitian(psi, ops.sigma3)).epsilon(1e-13));
    CHECK(std::abs(mean_field(psi) - expect(psi, ops.a)) < 1e-13);
    CHECK(mean_action(psi, p.hbar) == doctest::Approx(expect_hermitian(psi, ops.action)).epsilon(1e-12));
  }
}

TEST_CASE("coherent amplitudes") {
  const cplx alpha(2.0, 1.0);
  const Vector c = coherent_amplitudes(alpha, 80);
  CHECK(c.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  double mean_n = 0.0;
  for (Index n = 0; n < c.size(); ++n) mean_n += double(n) * std::norm(c(n));
  CHECK(mean_n == doctest::Approx(std::norm(alpha)).epsilon(1e-12));
  CHECK(std::abs(c(1) / c(0) - alpha) < 1e-14);

  const Basis small(10);
  CHECK_THROWS_AS(prepare_state({cplx(3.0, 0.0), AtomicPrep::excited}, small, ModelParams{}),
                  TruncationError);
  try {
    prepare_state({cplx(3.0, 0.0), AtomicPrep::excited}, small, ModelParams{});
  } catch (const TruncationError& e) {
    CHECK(e.required_n_max() == 59);
  }
}

TEST_CASE("states must be normalized") {
  const Basis basis(4);
  Vector v = Vector::Zero(basis.dim());
  v(0) = 1.1;
  CHECK_THROWS(AtomFieldState(basis, v));
}

TEST_CASE("identity checks hold on a small basis") {
  const Basis basis(24);
  for (double b_r : {0.0, 6.25}) {
    const ModelParams p = ModelParams::from_action_scale(1.0, 1.0, b_r);
    const OperatorSet ops = build_operators(basis, p);
    const NormalFormReport nf = verify_normal_form(ops, basis, p);
    CHECK(nf.relative_residual() < 1e-13);
    for (const IdentityResidual& r : verify_polariton_algebra(ops, basis, p)) {
      CAPTURE(r.name);
      if (r.enforced) CHECK(r.residual < 1e-11);
    }
    const std::vector<double> times{0.0, 0.5, 2.0, 11.0};
    const FlowReport flows = verify_heisenberg_flows(ops, basis, p, times);
    CHECK(flows.tau3_residual < 1e-11);
    CHECK(flows.b_residual < 1e-11);
    CHECK_FALSE(flows.first_failure.has_value());
  }
}

TEST_CASE("operator functions of a Hermitian matrix") {
  Matrix m(2, 2);
  m << 2.0, 0.0, 0.0, 9.0;
  const Matrix r = operator_function(m, [](double x) { return std::sqrt(x); });
  CHECK(std::abs(r(0, 0) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(r(1, 1) - 3.0) < 1e-15);
}

TEST_CASE("revival at resonance") {
  ModelParams p;
  const WavePacketPrep prep{cplx(std::sqrt(10.0), 0.0), AtomicPrep::excited};
  const Basis basis = Basis::for_coherent(std::abs(prep.alpha0));
  const SectorDecomposition dec(basis, p);
  const AtomFieldState psi0 = prepare_state(prep, basis, p);
  const double t_rev = 2.0 * std::numbers::pi * std::sqrt(10.0);
  double quiet = 0.0;
  double loud = 0.0;
  for (double t = 0.3 * t_rev; t < 0.35 * t_rev; t += 0.02) {
    quiet = std::max(quiet, std::abs(mean_sigma3(propagate(psi0, t, dec))));
  }
  for (double t = 0.9 * t_rev; t < 1.1 * t_rev; t += 0.02) {
    loud = std::max(loud, std::abs(mean_sigma3(propagate(psi0, t, dec))));
  }
  CHECK(quiet < 0.1);
  CHECK(loud > 0.3);
}
