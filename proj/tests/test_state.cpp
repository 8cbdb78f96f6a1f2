#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "qspir/state.hpp"

using namespace qspir;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

const QubitId A{"A"}, B{"B"}, C{"C"};

QuantumRegister three_ghz() {
  VectorXcd amp = VectorXcd::Zero(8);
  amp[0] = amp[7] = 1.0 / std::sqrt(2.0);
  return QuantumRegister({A, B, C}, amp);
}

}  // namespace

TEST_CASE("make_bell_pair: amplitudes, norm, reduced state") {
  const QuantumRegister phi = make_bell_pair(A, B);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(phi.amplitudes()[0] - s) < 1e-15);
  CHECK(std::abs(phi.amplitudes()[1]) == 0.0);
  CHECK(std::abs(phi.amplitudes()[2]) == 0.0);
  CHECK(std::abs(phi.amplitudes()[3] - s) < 1e-15);
  CHECK(phi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));

  const DensityMatrix red = partial_trace(density(phi), {A});
  CHECK(std::abs(red.matrix()(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(red.matrix()(1, 1) - 0.5) < 1e-14);
  CHECK(std::abs(red.matrix()(0, 1)) < 1e-14);

  CHECK_THROWS(make_bell_pair(A, A));
}

TEST_CASE("apply_weyl: matrix oracle and involution") {
  const QuantumRegister phi = make_bell_pair(A, B);
  CHECK((apply_weyl(phi, B, weyl_identity()).amplitudes() - phi.amplitudes())
            .norm() < 1e-15);

  // X on the second qubit of |Phi> -> (|01> + |10>)/sqrt2.
  const QuantumRegister flipped = apply_weyl(phi, B, {0, {1, 0}});
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(flipped.amplitudes()[1] - s) < 1e-15);
  CHECK(std::abs(flipped.amplitudes()[2] - s) < 1e-15);

  const QuantumRegister twice =
      apply_weyl(apply_weyl(phi, A, {0, {0, 1}}), A, {0, {0, 1}});
  CHECK((twice.amplitudes() - phi.amplitudes()).norm() < 1e-15);

  CHECK_THROWS(apply_weyl(phi, C, weyl_identity()));
}

TEST_CASE("bell_pvm_outcomes: pinned branches") {
  const QuantumRegister phi = make_bell_pair(A, B);
  for (const auto& br : bell_pvm_outcomes(phi, A, B)) {
    if (br.outcome == WeylLabel{0, 0})
      CHECK(br.probability == doctest::Approx(1.0).epsilon(1e-14));
    else
      CHECK(br.probability < 1e-14);
  }

  const QuantumRegister moved = apply_weyl(phi, B, {0, {1, 0}});
  for (const auto& br : bell_pvm_outcomes(moved, A, B)) {
    const double want = (br.outcome == WeylLabel{1, 0}) ? 1.0 : 0.0;
    CHECK(br.probability == doctest::Approx(want).epsilon(1e-14));
  }

  // |00>: only the b-degrees of freedom fire.
  VectorXcd zz = VectorXcd::Zero(4);
  zz[0] = 1.0;
  const QuantumRegister reg00({A, B}, zz);
  std::map<int, double> probs;
  for (const auto& br : bell_pvm_outcomes(reg00, A, B))
    probs[label_index(br.outcome)] = br.probability;
  CHECK(probs[label_index({0, 0})] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(probs[label_index({0, 1})] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(probs[label_index({1, 0})] < 1e-14);
  CHECK(probs[label_index({1, 1})] < 1e-14);
}

TEST_CASE("bell_pvm_outcomes: completeness and probability sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumRegister reg({A, B, C}, random_pure_state(8, rng));
    double total = 0.0;
    for (const auto& br : bell_pvm_outcomes(reg, A, B)) {
      total += br.probability;
      if (!br.empty)
        CHECK(br.post_state.amplitudes().norm() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("PVM completeness: projectors sum to the identity") {
  // Assemble the four projectors from the basis vectors (1/sqrt2) sum_r
  // (-1)^{rb} |r, r+a> and check sum = I4.
  MatrixXcd sum = MatrixXcd::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      VectorXcd v = VectorXcd::Zero(4);
      for (int r = 0; r < 2; ++r)
        v[2 * r + ((r + a) & 1)] = ((r * b) & 1 ? -1.0 : 1.0) / std::sqrt(2.0);
      sum += v * v.adjoint();
    }
  CHECK((sum - MatrixXcd::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("sample_bell_pvm: determinism and empirical frequencies") {
  const QuantumRegister phi = make_bell_pair(A, B);
  const auto [o1, r1] = sample_bell_pvm(phi, A, B, 42);
  const auto [o2, r2] = sample_bell_pvm(phi, A, B, 42);
  CHECK(o1 == WeylLabel{0, 0});
  CHECK(o1 == o2);

  VectorXcd zz = VectorXcd::Zero(4);
  zz[0] = 1.0;
  const QuantumRegister reg00({A, B}, zz);
  std::mt19937_64 rng(7);
  std::map<int, int> hits;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i)
    hits[label_index(sample_bell_pvm(reg00, A, B, rng).first)]++;
  CHECK(std::abs(hits[label_index({0, 0})] / double(trials) - 0.5) < 0.01);
  CHECK(std::abs(hits[label_index({0, 1})] / double(trials) - 0.5) < 0.01);
  CHECK(hits[label_index({1, 0})] == 0);
  CHECK(hits[label_index({1, 1})] == 0);
}

TEST_CASE("partial_trace: pinned examples and staged discarding") {
  const DensityMatrix ghz = density(three_ghz());

  const DensityMatrix keep_all = partial_trace(ghz, {A, B, C});
  CHECK((keep_all.matrix() - ghz.matrix()).norm() < 1e-14);

  const DensityMatrix two = partial_trace(ghz, {A, B});
  MatrixXcd want = MatrixXcd::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK((two.matrix() - want).norm() < 1e-14);

  const DensityMatrix staged =
      partial_trace(partial_trace(ghz, {A, B}), {A});
  const DensityMatrix direct = partial_trace(ghz, {A});
  CHECK((staged.matrix() - direct.matrix()).norm() < 1e-12);

  CHECK_THROWS(partial_trace(two, {C}));
}

TEST_CASE("von_neumann_entropy: pinned values and basis independence") {
  const QuantumRegister phi = make_bell_pair(A, B);
  CHECK(von_neumann_entropy(density(phi)) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(von_neumann_entropy(partial_trace(density(phi), {A})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(MatrixXcd::Identity(4, 4) * 0.25) ==
        doctest::Approx(2.0).epsilon(1e-12));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXcd psi = random_pure_state(8, rng);
    MatrixXcd rho = MatrixXcd::Zero(4, 4);
    // Mixed state from partial contraction of a random 8-dim pure state.
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int r = 0; r < 2; ++r) rho(i, j) += psi[2 * i + r] * std::conj(psi[2 * j + r]);
    const MatrixXcd u = random_unitary(4, rng);
    CHECK(std::abs(von_neumann_entropy(rho) -
                   von_neumann_entropy(MatrixXcd(u * rho * u.adjoint()))) <
          1e-9);
  }
}

TEST_CASE("holevo_information: pinned values") {
  MatrixXcd p0 = MatrixXcd::Zero(2, 2), p1 = MatrixXcd::Zero(2, 2),
            plus(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  plus << 0.5, 0.5, 0.5, 0.5;

  CHECK(holevo_information({{0.5, p0}, {0.5, p0}}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(holevo_information({{0.5, p0}, {0.5, p1}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Binary entropy of (1 + 1/sqrt2)/2, via the average state's eigenvalues.
  const double lam = 0.5 + 0.5 / std::sqrt(2.0);
  const double want = -lam * std::log2(lam) - (1 - lam) * std::log2(1 - lam);
  CHECK(holevo_information({{0.5, p0}, {0.5, plus}}) ==
        doctest::Approx(want).epsilon(1e-9));
  CHECK(want == doctest::Approx(0.6009).epsilon(1e-3));
}

TEST_CASE("reduced-state power-trace bound on random bipartite pure states") {
  // For a pure state on d1 x d2 and s in (0,1):
  // Tr rho_1^s <= min(d1,d2)^{1-s}.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(2, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int d1 = dim(rng), d2 = dim(rng);
    const VectorXcd psi = random_pure_state(d1 * d2, rng);
    MatrixXcd rho1 = MatrixXcd::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int r = 0; r < d2; ++r)
          rho1(i, j) += psi[i * d2 + r] * std::conj(psi[j * d2 + r]);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho1, Eigen::EigenvaluesOnly);
    for (const double s : {0.25, 0.5, 0.75}) {
      double tr = 0.0;
      for (int i = 0; i < d1; ++i) {
        const double lam = std::max(0.0, es.eigenvalues()[i]);
        if (lam > 0) tr += std::pow(lam, s);
      }
      CHECK(tr <= std::pow(double(std::min(d1, d2)), 1.0 - s) + 1e-9);
    }
  }
}

TEST_CASE("register hygiene: capacity and norm checks") {
  VectorXcd bad = VectorXcd::Zero(2);
  bad[0] = 2.0;
  CHECK_THROWS(QuantumRegister({A}, bad));
  CHECK_THROWS(QuantumRegister({A, A}, VectorXcd::Zero(4)));
}
