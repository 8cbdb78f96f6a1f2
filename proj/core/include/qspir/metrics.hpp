#pragma once

#include <string>
#include <vector>

#include "qspir/protocol.hpp"
#include "qspir/rational.hpp"
#include "qspir/secrecy.hpp"

namespace qspir {

/// Communication accounting for one family, alongside its security report.
struct MetricsReport {
  int n_servers = 0;
  int n_files = 0;
  int blocks = 0;
  Rational alpha{0};
  double beta_bits = 0.0;
  double gamma_bits = 0.0;
  int upload_bits = 0;
  int download_qubits = 0;
  int download_cbits = 0;
  int download_qubit_equivalents = 0;
  Rational rate{0};        // retrieved qubits / downloaded qubit equivalents
  Rational theta_ratio{0}; // upload bits / download qubit equivalents
};

MetricsReport measure_family(const FamilyConfig& fc,
                             Variant variant = Variant::standard);

/// One row of the achieved-vs-optimal rate comparison.
struct RateRow {
  int n_servers = 0;
  Rational measured{0};
  Rational optimal{0};    // 1 / ceil(N/2)
  Rational classical{0};  // 1 / N, the classical scheme's rate
  bool matches_optimal = false;
};

std::vector<RateRow> rate_table(const std::vector<int>& n_values, int n_files,
                                int blocks);

/// theta = upload / download as the block count grows; the upload share
/// becomes negligible per retrieved qubit only in N, never in l.
struct ThetaRow {
  int blocks = 0;
  Rational theta{0};
};

std::vector<ThetaRow> theta_trend(int n_servers, int n_files,
                                  const std::vector<int>& blocks_values);

std::string metrics_to_json(const std::vector<MetricsReport>& rows);
std::string metrics_to_csv(const std::vector<MetricsReport>& rows);
std::string transcripts_to_json(const ProtocolConfig& config,
                                const std::vector<ProtocolTranscript>& runs);
std::string rate_table_to_json(const std::vector<RateRow>& rows);
std::string rate_table_to_csv(const std::vector<RateRow>& rows);

}  // namespace qspir
