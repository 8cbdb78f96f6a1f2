#include "qspir/metrics.hpp"

#include <json.hpp>
#include <sstream>

namespace qspir {

namespace {

using nlohmann::json;

json label_json(WeylLabel l) { return json::array({int(l.a), int(l.b)}); }

json labels_json(const std::vector<WeylLabel>& ls) {
  json out = json::array();
  for (auto l : ls) out.push_back(label_json(l));
  return out;
}

json label_vector_json(const LabelVector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(label_json(v.at(i)));
  return out;
}

}  // namespace

MetricsReport measure_family(const FamilyConfig& fc, Variant variant) {
  MetricsReport m;
  m.n_servers = fc.n_servers;
  m.n_files = fc.n_files;
  m.blocks = fc.blocks;

  // Cost accounting from an actual run.
  ProtocolConfig pc;
  pc.n_servers = fc.n_servers;
  pc.n_files = fc.n_files;
  pc.blocks = fc.blocks;
  pc.files.assign(std::size_t(fc.n_files), LabelVector(std::size_t(fc.blocks)));
  ProtocolTranscript tr;
  if (variant == Variant::classical_baseline) {
    tr = run_classical_baseline(pc);
  } else {
    tr = run_qspir(pc).front();
  }
  m.upload_bits = tr.uploaded_bits;
  m.download_qubits = tr.downloaded_qubits;
  m.download_cbits = tr.downloaded_cbits;
  // Classical bits count one-for-one in the download total.
  m.download_qubit_equivalents = tr.downloaded_qubits + tr.downloaded_cbits;
  m.rate = Rational(2 * fc.blocks, m.download_qubit_equivalents);
  m.theta_ratio = Rational(m.upload_bits, m.download_qubit_equivalents);

  const SecurityReport sec = build_security_report(fc, variant);
  m.alpha = sec.alpha;
  m.beta_bits = sec.beta_bits;
  m.gamma_bits = sec.gamma_bits;
  return m;
}

std::vector<RateRow> rate_table(const std::vector<int>& n_values, int n_files,
                                int blocks) {
  std::vector<RateRow> rows;
  for (int n : n_values) {
    RateRow r;
    r.n_servers = n;
    ProtocolConfig pc;
    pc.n_servers = n;
    pc.n_files = n_files;
    pc.blocks = blocks;
    pc.files.assign(std::size_t(n_files), LabelVector(std::size_t(blocks)));
    const ProtocolTranscript tr = run_qspir(pc).front();
    r.measured =
        Rational(2 * blocks, tr.downloaded_qubits + tr.downloaded_cbits);
    r.optimal = Rational(1, (n + 1) / 2);
    r.classical = Rational(1, n);
    r.matches_optimal = (r.measured == r.optimal);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ThetaRow> theta_trend(int n_servers, int n_files,
                                  const std::vector<int>& blocks_values) {
  std::vector<ThetaRow> rows;
  for (int l : blocks_values) {
    ThetaRow r;
    r.blocks = l;
    r.theta = Rational(n_servers * n_files,
                       download_qubit_equivalents(n_servers, l));
    rows.push_back(r);
  }
  return rows;
}

std::string metrics_to_json(const std::vector<MetricsReport>& rows) {
  json out;
  out["schema"] = 1;
  out["families"] = json::array();
  for (const auto& m : rows) {
    json j;
    j["n"] = m.n_servers;
    j["f"] = m.n_files;
    j["blocks"] = m.blocks;
    j["alpha"] = fraction_string(m.alpha);
    j["alpha_decimal"] = decimal_string(m.alpha);
    j["beta_bits"] = m.beta_bits;
    j["gamma_bits"] = m.gamma_bits;
    j["upload_bits"] = m.upload_bits;
    j["download_qubits"] = m.download_qubits;
    j["download_cbits"] = m.download_cbits;
    j["download_qubit_equivalents"] = m.download_qubit_equivalents;
    j["rate"] = fraction_string(m.rate);
    j["theta"] = fraction_string(m.theta_ratio);
    out["families"].push_back(j);
  }
  return out.dump(2) + "\n";
}

std::string metrics_to_csv(const std::vector<MetricsReport>& rows) {
  std::ostringstream out;
  out << "n,f,blocks,alpha,beta_bits,gamma_bits,upload_bits,download_qubits,"
         "download_cbits,download_qubit_equivalents,rate,theta\n";
  for (const auto& m : rows) {
    out << m.n_servers << ',' << m.n_files << ',' << m.blocks << ','
        << fraction_string(m.alpha) << ',' << m.beta_bits << ','
        << m.gamma_bits << ',' << m.upload_bits << ',' << m.download_qubits
        << ',' << m.download_cbits << ',' << m.download_qubit_equivalents
        << ',' << fraction_string(m.rate) << ','
        << fraction_string(m.theta_ratio) << '\n';
  }
  return out.str();
}

std::string transcripts_to_json(const ProtocolConfig& config,
                                const std::vector<ProtocolTranscript>& runs) {
  json out;
  out["schema"] = 1;
  out["config"] = {
      {"n", config.n_servers},
      {"f", config.n_files},
      {"blocks", config.blocks},
      {"k", config.query_index},
      {"backend", config.backend == Backend::frame ? "frame" : "dense"},
      {"mode", config.mode == Mode::sample ? "sample" : "enumerate"},
      {"seed", config.rng_seed},
  };
  out["files"] = json::array();
  for (const auto& w : config.files)
    out["files"].push_back(label_vector_json(w));
  out["runs"] = json::array();
  for (const auto& tr : runs) {
    json j;
    j["queries"] = tr.queries.masks();
    j["answers"] = json::array();
    for (const auto& h : tr.answers) j["answers"].push_back(label_vector_json(h));
    j["middle_outcomes"] = json::array();
    for (const auto& per_block : tr.middle_outcomes)
      j["middle_outcomes"].push_back(labels_json(per_block));
    j["pair_sums"] = json::array();
    for (const auto& per_block : tr.pair_sums)
      j["pair_sums"].push_back(labels_json(per_block));
    j["user_correction"] = labels_json(tr.user_correction);
    j["output"] = label_vector_json(tr.output);
    j["downloaded_qubits"] = tr.downloaded_qubits;
    j["downloaded_cbits"] = tr.downloaded_cbits;
    j["uploaded_bits"] = tr.uploaded_bits;
    j["branch_probability"] =
        decimal_string(rational_from_dyadic(tr.branch_probability));
    out["runs"].push_back(j);
  }
  return out.dump(2) + "\n";
}

std::string rate_table_to_json(const std::vector<RateRow>& rows) {
  json out;
  out["schema"] = 1;
  out["rates"] = json::array();
  for (const auto& r : rows) {
    out["rates"].push_back({{"n", r.n_servers},
                            {"measured", fraction_string(r.measured)},
                            {"optimal", fraction_string(r.optimal)},
                            {"classical", fraction_string(r.classical)},
                            {"matches_optimal", r.matches_optimal}});
  }
  return out.dump(2) + "\n";
}

std::string rate_table_to_csv(const std::vector<RateRow>& rows) {
  std::ostringstream out;
  out << "n,measured,optimal,classical,matches_optimal\n";
  for (const auto& r : rows)
    out << r.n_servers << ',' << fraction_string(r.measured) << ','
        << fraction_string(r.optimal) << ',' << fraction_string(r.classical)
        << ',' << (r.matches_optimal ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace qspir
