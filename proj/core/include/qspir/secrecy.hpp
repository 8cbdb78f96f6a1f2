#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qspir/protocol.hpp"
#include "qspir/rational.hpp"

namespace qspir {

/// A protocol family at fixed (N, F, l): the verifier enumerates every file
/// assignment, query draw, and measurement branch of that family.
struct FamilyConfig {
  int n_servers = 2;
  int n_files = 2;
  int blocks = 1;
};

/// Protocol under test. The mutated variants exist so the verifier's
/// nonzero paths are exercised against a protocol that is actually leaky.
enum class Variant {
  standard,           // the QSPIR protocol
  skip_correction,    // user omits the retrieval fix-up (breaks correctness)
  clear_h2,           // server 2 additionally broadcasts H_2 in the clear
  classical_baseline  // classical XOR scheme
};

/// Query construction under test.
enum class QueryRule {
  standard,    // uniform independent subsets, last closes on {K}
  leak_first   // Q_1 := {K}; deliberately reveals the index
};

/// Which parts of the user's received view enter the server-secrecy
/// computation; narrowing the view supports data-processing checks.
struct ViewOptions {
  bool include_queries = true;
  bool include_pair_qubits = true;
  bool include_classical = true;  // odd-N classical bits / leaked H_2
};

/// Average error probability over all files, query indices, query draws and
/// measurement branches, as an exact rational.
Rational error_measure(const FamilyConfig& fc, Variant variant = Variant::standard);

struct GammaEntry {
  double bits = 0.0;
  bool exact = false;       // true when the value below is exact
  Rational exact_bits{0};   // valid only when exact
};

/// I(K; Q_t') per server t over uniform K and the query distribution.
/// Exact rationals whenever every likelihood ratio is a power of two
/// (always the case for the tested rules).
std::map<int, GammaEntry> user_secrecy(const FamilyConfig& fc,
                                       QueryRule rule = QueryRule::standard);

/// Holevo information between W_i and the user's full received view,
/// conditioned on K = k, for every pair (i, k), i != k. Classical parts of
/// the view are folded in exactly (orthogonal-block decomposition).
std::map<std::pair<int, int>, double> server_secrecy(
    const FamilyConfig& fc, Variant variant = Variant::standard,
    ViewOptions view = {});

/// Max over servers t, query indices k and file values w of the trace
/// distance between the transmitted-systems state of the other N-1 servers
/// given W_k = w and its w-average.
double lemma1_check(const FamilyConfig& fc, Variant variant = Variant::standard);
double lemma1_check_for_server(const FamilyConfig& fc, int t,
                               Variant variant = Variant::standard);

struct SecurityReport {
  Rational alpha{0};
  double beta_bits = 0.0;
  double gamma_bits = 0.0;
  Rational gamma_exact{0};
  bool gamma_is_exact = false;
  std::map<std::pair<int, int>, double> per_pair_beta;
  std::map<int, GammaEntry> per_server_gamma;
};

SecurityReport build_security_report(const FamilyConfig& fc,
                                     Variant variant = Variant::standard);

}  // namespace qspir
