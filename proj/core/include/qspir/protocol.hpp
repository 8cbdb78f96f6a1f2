#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qspir/state.hpp"
#include "qspir/weyl.hpp"

namespace qspir {

enum class Backend { dense, frame };
enum class Mode { sample, enumerate_all };

struct ProtocolConfig {
  int n_servers = 2;   // N
  int n_files = 2;     // F
  int blocks = 1;      // number of 2-bit file blocks
  int query_index = 1; // K, 1-based
  std::vector<LabelVector> files;  // F entries of length `blocks`
  Backend backend = Backend::frame;
  std::uint64_t rng_seed = 0;
  Mode mode = Mode::sample;

  void validate() const;
};

/// One query subset per server, as F-bit masks (bit i-1 <-> file i).
/// The symmetric difference of all N subsets must be {K}.
class QuerySet {
 public:
  QuerySet(std::vector<std::uint32_t> masks, int query_index);

  const std::vector<std::uint32_t>& masks() const { return masks_; }
  std::uint32_t mask(int server) const { return masks_.at(std::size_t(server - 1)); }
  int n_servers() const { return int(masks_.size()); }

 private:
  std::vector<std::uint32_t> masks_;
};

/// Symbolic record of one shared maximally entangled pair: the semantic
/// state is (I (x) matrix(frame)) |Phi> on (endpoint_a, endpoint_b).
/// The frame sign is a global phase and never affects outcome statistics.
struct BellLink {
  QubitId endpoint_a;
  QubitId endpoint_b;
  SignedWeyl frame;
};

struct ProtocolTranscript {
  QuerySet queries{{0, 1}, 1};
  std::vector<LabelVector> answers;                     // H_t per server
  std::vector<std::vector<WeylLabel>> middle_outcomes;  // [block][t-2] = G_t
  std::vector<std::vector<WeylLabel>> pair_sums;        // [block][j-1]
  std::vector<WeylLabel> user_correction;               // per block
  LabelVector output;                                   // retrieved value
  int downloaded_qubits = 0;
  int downloaded_cbits = 0;
  int uploaded_bits = 0;
  double branch_probability = 1.0;
};

struct RunOptions {
  bool skip_user_correction = false;          // fault-injection hook
  std::size_t max_branches = std::size_t(1) << 22;
};

/// Q_1..Q_{N-1} uniform independent subsets, Q_N closes the symmetric
/// difference to {k}.
QuerySet make_queries(int n_servers, int n_files, int k, std::mt19937_64& rng);
QuerySet make_queries(int n_servers, int n_files, int k, std::uint64_t rng_seed);

/// Componentwise sum of the selected files; empty mask gives the zero vector.
LabelVector server_answer(const std::vector<LabelVector>& files,
                          std::uint32_t query_mask);

/// Entanglement-swapping step on the symbolic backend: link1.endpoint_b and
/// link2.endpoint_a are measured with the given outcome; the surviving link
/// spans (link1.endpoint_a, link2.endpoint_b).
BellLink frame_swap_update(const BellLink& link1, const BellLink& link2,
                           WeylLabel outcome);

struct TeleportBranch {
  WeylLabel outcome;
  double probability = 0.0;
  QuantumRegister pre_correction;  // state before the receiving-side fix-up
  QuantumRegister output_state;
};

/// All four measurement branches of the teleportation-with-an-operation
/// protocol. `payload` names the qubit to teleport; any other qubits in
/// `input_state` ride along as references. When `operation_first` is false
/// the receiver applies W(cd) after the measurement instead of before it.
std::vector<TeleportBranch> teleport_with_operation_outcomes(
    const QuantumRegister& input_state, const QubitId& payload, WeylLabel cd,
    bool operation_first = true);

std::pair<WeylLabel, QuantumRegister> teleport_with_operation(
    const QuantumRegister& input_state, const QubitId& payload, WeylLabel cd,
    std::uint64_t rng_seed);

/// Both parties imprint their labels on halves of a fresh Bell pair; the
/// Bell measurement reveals the componentwise sum.
WeylLabel two_sum_transmit(WeylLabel ab, WeylLabel cd, std::uint64_t rng_seed);

/// The four PVM branches of the two-sum transmission (exactly one carries
/// nonzero probability).
std::vector<std::pair<double, WeylLabel>> two_sum_outcomes(WeylLabel ab,
                                                           WeylLabel cd);

/// Full protocol run. Sample mode returns one transcript; enumerate mode
/// returns every measurement branch with probabilities summing to 1.
std::vector<ProtocolTranscript> run_qspir(const ProtocolConfig& config);
std::vector<ProtocolTranscript> run_qspir(const ProtocolConfig& config,
                                          const QuerySet& queries,
                                          const RunOptions& options = {});

/// Three-server specialization (N = 3, one block), kept as a separately
/// tested path.
std::vector<ProtocolTranscript> run_qspir_three_server(
    const ProtocolConfig& config);

struct ThreeServerTrace {
  WeylLabel middle_outcome;
  double probability = 0.0;
  QuantumRegister pre_correction;   // state on (H1, H3) before the fix-up
  QuantumRegister post_correction;  // state after W(a,b) on H3
};

/// Dense state chain of the three-server protocol, one branch per middle
/// outcome; exposes the intermediate two-qubit states for exactness checks.
std::vector<ThreeServerTrace> three_server_state_trace(
    const std::vector<LabelVector>& files, const QuerySet& queries);

/// Classical XOR baseline: servers answer with H_t as classical strings.
ProtocolTranscript run_classical_baseline(const ProtocolConfig& config);

/// Download cost in qubit equivalents: N*l for even N, (N+1)*l for odd N.
int download_qubit_equivalents(int n_servers, int blocks);

}  // namespace qspir
