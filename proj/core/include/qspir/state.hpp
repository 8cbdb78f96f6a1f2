#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qspir/weyl.hpp"

namespace qspir {

/// Thrown when an enumeration or register would exceed the simulator's
/// hard size limits.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Norm / trace hygiene tolerance used across the dense backend.
inline constexpr double kNormTol = 1e-12;
/// Eigenvalue clip threshold for entropies.
inline constexpr double kEigClip = 1e-10;
/// Hard cap on dense register width.
inline constexpr int kMaxQubits = 24;

struct QubitId {
  std::string name;

  friend bool operator==(const QubitId&, const QubitId&) = default;
};

/// Dense normalized state vector over an ordered list of named qubits.
/// Basis convention: the qubit at position 0 is the MOST significant bit
/// of the computational basis label.
class QuantumRegister {
 public:
  QuantumRegister() = default;
  QuantumRegister(std::vector<QubitId> qubits, Eigen::VectorXcd amplitudes);

  const std::vector<QubitId>& qubits() const { return qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  int num_qubits() const { return static_cast<int>(qubits_.size()); }
  std::size_t dim() const { return std::size_t(amp_.size()); }
  bool empty() const { return qubits_.empty(); }

  /// Position of a named qubit; throws if unknown.
  int index_of(const QubitId& q) const;
  bool contains(const QubitId& q) const;

  std::string debug_dump() const;

 private:
  std::vector<QubitId> qubits_;
  Eigen::VectorXcd amp_;
};

/// Hermitian, PSD, trace-1 matrix over an ordered list of named qubits.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(std::vector<QubitId> qubits, Eigen::MatrixXcd matrix);

  const std::vector<QubitId>& qubits() const { return qubits_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  int index_of(const QubitId& q) const;

 private:
  std::vector<QubitId> qubits_;
  Eigen::MatrixXcd mat_;
};

/// (1/sqrt2)(|00> + |11>) on (q1, q2).
QuantumRegister make_bell_pair(const QubitId& q1, const QubitId& q2);

/// Tensor product; qubit names must stay unique.
QuantumRegister tensor(const QuantumRegister& a, const QuantumRegister& b);

/// Applies the 2x2 realization of `op` to qubit `q`.
QuantumRegister apply_weyl(const QuantumRegister& reg, const QubitId& q,
                           SignedWeyl op);

struct PvmBranch {
  WeylLabel outcome;
  double probability = 0.0;
  QuantumRegister post_state;  // q1, q2 projected out; empty marker below
  bool empty = false;          // true for zero-probability branches
};

/// All four branches of the Bell-basis PVM on (q1, q2), with projector
/// elements (I (x) W(a,b))|Phi><Phi|(I (x) W(a,b))^dag. Post-states are
/// normalized by the positive square root of the branch probability, so
/// their global sign is deterministic.
std::vector<PvmBranch> bell_pvm_outcomes(const QuantumRegister& reg,
                                         const QubitId& q1, const QubitId& q2);

/// Born-rule sample over bell_pvm_outcomes; identical seed, identical outcome.
std::pair<WeylLabel, QuantumRegister> sample_bell_pvm(const QuantumRegister& reg,
                                                      const QubitId& q1,
                                                      const QubitId& q2,
                                                      std::uint64_t rng_seed);
std::pair<WeylLabel, QuantumRegister> sample_bell_pvm(const QuantumRegister& reg,
                                                      const QubitId& q1,
                                                      const QubitId& q2,
                                                      std::mt19937_64& rng);

DensityMatrix density(const QuantumRegister& reg);

DensityMatrix partial_trace(const DensityMatrix& dm,
                            const std::vector<QubitId>& keep);

/// -sum lambda log2 lambda, eigenvalues clipped at 0. Reported in bits.
double von_neumann_entropy(const DensityMatrix& dm);
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

/// S(sum p_i rho_i) - sum p_i S(rho_i), in bits.
double holevo_information(
    const std::vector<std::pair<double, DensityMatrix>>& ensemble);
double holevo_information(
    const std::vector<std::pair<double, Eigen::MatrixXcd>>& ensemble);

/// Haar-ish random unit vector of the given dimension (orthogonalized
/// complex-normal samples); used by property tests.
Eigen::VectorXcd random_pure_state(int dim, std::mt19937_64& rng);
Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

}  // namespace qspir
