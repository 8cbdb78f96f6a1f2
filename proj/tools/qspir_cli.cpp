// Command-line front end: runs protocol families, checks the security
// invariants, and emits JSON/CSV reports.
//
// Exit codes: 0 all asserted invariants hold; 1 first invariant violation
// (named on stderr); 2 invalid arguments; 3 enumeration over capacity.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "qspir/metrics.hpp"
#include "qspir/protocol.hpp"
#include "qspir/secrecy.hpp"

namespace {

using nlohmann::json;
using namespace qspir;

struct CellResult {
  FamilyConfig fc;
  MetricsReport metrics;
  double lemma1 = 0.0;
  bool lemma1_ran = false;
  std::vector<std::string> skipped;   // sub-checks dropped for capacity
  std::vector<std::string> failures;  // named invariant violations
};

int worker_count() {
  if (const char* env = std::getenv("QSPIR_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << body;
}

// Runs the requested verifier checks for one (N, F, l) cell. In grid mode
// capacity overruns downgrade to a skip marker so the default grid stays
// fast; in single-cell mode they propagate and become exit code 3.
CellResult verify_cell(const FamilyConfig& fc, const std::string& verify,
                       Variant variant, QueryRule rule, bool grid_mode) {
  const bool do_err = verify == "error" || verify == "all";
  const bool do_user = verify == "user" || verify == "all";
  const bool do_server = verify == "server" || verify == "all";
  const bool do_lemma = verify == "lemma1" || verify == "all";

  CellResult r;
  r.fc = fc;
  r.metrics.n_servers = fc.n_servers;
  r.metrics.n_files = fc.n_files;
  r.metrics.blocks = fc.blocks;

  ProtocolConfig pc;
  pc.n_servers = fc.n_servers;
  pc.n_files = fc.n_files;
  pc.blocks = fc.blocks;
  pc.files.assign(std::size_t(fc.n_files), LabelVector(std::size_t(fc.blocks)));
  const ProtocolTranscript tr = variant == Variant::classical_baseline
                                    ? run_classical_baseline(pc)
                                    : run_qspir(pc).front();
  r.metrics.upload_bits = tr.uploaded_bits;
  r.metrics.download_qubits = tr.downloaded_qubits;
  r.metrics.download_cbits = tr.downloaded_cbits;
  r.metrics.download_qubit_equivalents =
      tr.downloaded_qubits + tr.downloaded_cbits;
  r.metrics.rate = Rational(2 * fc.blocks, r.metrics.download_qubit_equivalents);
  r.metrics.theta_ratio =
      Rational(r.metrics.upload_bits, r.metrics.download_qubit_equivalents);

  if (r.metrics.upload_bits != fc.n_servers * fc.n_files)
    r.failures.push_back("upload_bits == N*F");
  const Rational expect_rate = variant == Variant::classical_baseline
                                   ? Rational(1, fc.n_servers)
                                   : Rational(1, (fc.n_servers + 1) / 2);
  if (r.metrics.rate != expect_rate)
    r.failures.push_back("rate == ceil(N/2)^-1");

  auto guarded = [&](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const capacity_error&) {
      if (!grid_mode) throw;
      r.skipped.push_back(what);
    }
  };

  if (do_err)
    guarded("error", [&] {
      r.metrics.alpha = error_measure(fc, variant);
      if (r.metrics.alpha != Rational(0))
        r.failures.push_back("alpha == 0");
    });
  if (do_user)
    guarded("user", [&] {
      const auto gamma = user_secrecy(fc, rule);
      for (const auto& [t, g] : gamma) {
        r.metrics.gamma_bits = std::max(r.metrics.gamma_bits, g.bits);
        if (!g.exact || g.exact_bits != Rational(0)) {
          r.failures.push_back("gamma == 0 (server " + std::to_string(t) + ")");
          break;
        }
      }
    });
  if (do_server && variant != Variant::skip_correction)
    guarded("server", [&] {
      const auto beta = server_secrecy(fc, variant);
      for (const auto& [ik, b] : beta) {
        r.metrics.beta_bits = std::max(r.metrics.beta_bits, b);
        if (b > 1e-9) {
          r.failures.push_back("beta <= 1e-9 (i=" + std::to_string(ik.first) +
                               ",k=" + std::to_string(ik.second) + ")");
          break;
        }
      }
    });
  if (do_lemma && variant != Variant::classical_baseline &&
      variant != Variant::skip_correction)
    guarded("lemma1", [&] {
      r.lemma1 = lemma1_check(fc, variant);
      r.lemma1_ran = true;
      if (r.lemma1 > 1e-12)
        r.failures.push_back("lemma1 trace distance <= 1e-12");
    });
  return r;
}

json cell_json(const CellResult& r) {
  json j;
  j["n"] = r.fc.n_servers;
  j["f"] = r.fc.n_files;
  j["blocks"] = r.fc.blocks;
  j["alpha"] = fraction_string(r.metrics.alpha);
  j["beta_bits"] = r.metrics.beta_bits;
  j["gamma_bits"] = r.metrics.gamma_bits;
  j["upload_bits"] = r.metrics.upload_bits;
  j["download_qubits"] = r.metrics.download_qubits;
  j["download_cbits"] = r.metrics.download_cbits;
  j["download_qubit_equivalents"] = r.metrics.download_qubit_equivalents;
  j["rate"] = fraction_string(r.metrics.rate);
  j["theta"] = fraction_string(r.metrics.theta_ratio);
  if (r.lemma1_ran) j["lemma1_trace_distance"] = r.lemma1;
  j["skipped"] = r.skipped;
  j["failures"] = r.failures;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator and verifier for an (N-1)-private quantum "
               "symmetric PIR protocol"};

  std::string protocol = "qspir";
  int n = 2, f = 2, blocks = 1, k = 0;
  std::string mode = "sample", backend = "frame", verify = "none";
  std::string out_dir, format = "both", mutate = "none";
  std::uint64_t seed = 0;
  bool emit_rate_table = false, emit_theta_trend = false;

  app.add_option("--protocol", protocol)
      ->check(CLI::IsMember({"qspir", "qspir3", "classical"}));
  auto* opt_n = app.add_option("--n", n)->check(CLI::Range(2, 8));
  auto* opt_f = app.add_option("--f", f)->check(CLI::Range(2, 8));
  auto* opt_l = app.add_option("--blocks", blocks)->check(CLI::Range(1, 64));
  app.add_option("--k", k, "query index; 0 = iterate all");
  app.add_option("--mode", mode)->check(CLI::IsMember({"sample", "enumerate"}));
  app.add_option("--backend", backend)
      ->check(CLI::IsMember({"dense", "frame"}));
  app.add_option("--seed", seed);
  app.add_option("--verify", verify)
      ->check(CLI::IsMember({"none", "error", "user", "server", "lemma1", "all"}));
  app.add_option("--out", out_dir, "report directory");
  app.add_option("--format", format)
      ->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--mutate", mutate,
                 "fault injection: none|skip-correction|clear-h2|leak-first")
      ->check(CLI::IsMember({"none", "skip-correction", "clear-h2",
                             "leak-first"}));
  app.add_flag("--rate-table", emit_rate_table,
               "emit measured vs. theoretical rates for N in [2,6]");
  app.add_flag("--theta-trend", emit_theta_trend,
               "emit upload/download ratio for blocks in [1,16]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (protocol == "qspir3" && opt_n->count() && n != 3) {
      std::cerr << "qspir3 requires --n 3\n";
      return 2;
    }
    if (protocol == "qspir3") n = 3;

    Variant variant = protocol == "classical" ? Variant::classical_baseline
                                              : Variant::standard;
    QueryRule rule = QueryRule::standard;
    if (mutate == "skip-correction") variant = Variant::skip_correction;
    if (mutate == "clear-h2") variant = Variant::clear_h2;
    if (mutate == "leak-first") rule = QueryRule::leak_first;

    json report;
    report["schema"] = 1;
    std::ostringstream csv;
    bool invariant_failed = false;
    std::string first_failure;

    if (verify != "none") {
      // Explicit flags select a single cell, otherwise the default grid.
      std::vector<FamilyConfig> cells;
      const bool grid_mode = !opt_n->count() && !opt_f->count() &&
                             !opt_l->count();
      if (grid_mode) {
        for (int gn : {2, 3, 4, 5})
          for (int gf : {2, 3})
            for (int gl : {1, 2}) cells.push_back({gn, gf, gl});
      } else {
        cells.push_back({n, f, blocks});
      }

      std::vector<CellResult> results(cells.size());
      std::atomic<std::size_t> next{0};
      std::exception_ptr error;
      std::mutex error_mu;
      auto work = [&] {
        for (;;) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= cells.size()) return;
          try {
            results[idx] =
                verify_cell(cells[idx], verify, variant, rule, grid_mode);
          } catch (...) {
            std::scoped_lock lk(error_mu);
            if (!error) error = std::current_exception();
            return;
          }
        }
      };
      const int workers =
          std::min<int>(worker_count(), int(cells.size()));
      std::vector<std::thread> pool;
      for (int w = 1; w < workers; ++w) pool.emplace_back(work);
      work();
      for (auto& t : pool) t.join();
      if (error) std::rethrow_exception(error);

      report["cells"] = json::array();
      csv << "n,f,blocks,alpha,beta_bits,gamma_bits,upload_bits,"
             "download_qubit_equivalents,rate,theta,failures,skipped\n";
      for (const auto& r : results) {
        report["cells"].push_back(cell_json(r));
        csv << r.fc.n_servers << ',' << r.fc.n_files << ',' << r.fc.blocks
            << ',' << fraction_string(r.metrics.alpha) << ','
            << r.metrics.beta_bits << ',' << r.metrics.gamma_bits << ','
            << r.metrics.upload_bits << ','
            << r.metrics.download_qubit_equivalents << ','
            << fraction_string(r.metrics.rate) << ','
            << fraction_string(r.metrics.theta_ratio) << ','
            << r.failures.size() << ',' << r.skipped.size() << '\n';
        if (!r.failures.empty() && !invariant_failed) {
          invariant_failed = true;
          first_failure = "N=" + std::to_string(r.fc.n_servers) +
                          " F=" + std::to_string(r.fc.n_files) +
                          " l=" + std::to_string(r.fc.blocks) + ": " +
                          r.failures.front();
        }
      }
    } else {
      // Plain protocol run.
      ProtocolConfig pc;
      pc.n_servers = n;
      pc.n_files = f;
      pc.blocks = blocks;
      pc.backend = backend == "dense" ? Backend::dense : Backend::frame;
      pc.mode = mode == "sample" ? Mode::sample : Mode::enumerate_all;
      pc.rng_seed = seed;
      pc.files.assign(std::size_t(f), LabelVector(std::size_t(blocks)));
      report["runs"] = json::array();
      const int k_lo = (k == 0) ? 1 : k;
      const int k_hi = (k == 0) ? f : k;
      for (int kk = k_lo; kk <= k_hi; ++kk) {
        pc.query_index = kk;
        std::vector<ProtocolTranscript> runs;
        if (protocol == "classical") {
          runs.push_back(run_classical_baseline(pc));
        } else if (protocol == "qspir3") {
          runs = run_qspir_three_server(pc);
        } else {
          runs = run_qspir(pc);
        }
        report["runs"].push_back(
            json::parse(transcripts_to_json(pc, runs)));
      }
      csv << "k,runs\n";
      for (int kk = k_lo; kk <= k_hi; ++kk) csv << kk << ",1\n";
    }

    if (emit_rate_table) {
      const auto rows = rate_table({2, 3, 4, 5, 6}, f, blocks);
      report["rate_table"] = json::parse(rate_table_to_json(rows));
      for (const auto& r : rows)
        if (!r.matches_optimal && !invariant_failed) {
          invariant_failed = true;
          first_failure = "rate matches ceil(N/2)^-1 at N=" +
                          std::to_string(r.n_servers);
        }
    }
    if (emit_theta_trend) {
      std::vector<int> ls;
      for (int l = 1; l <= 16; ++l) ls.push_back(l);
      const auto rows = theta_trend(n, f, ls);
      report["theta_trend"] = json::array();
      for (const auto& r : rows)
        report["theta_trend"].push_back(
            {{"blocks", r.blocks}, {"theta", fraction_string(r.theta)}});
      for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].theta < rows[i - 1].theta) && !invariant_failed) {
          invariant_failed = true;
          first_failure = "theta strictly decreasing in blocks";
        }
    }

    const std::string json_body = report.dump(2) + "\n";
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      if (format == "json" || format == "both")
        write_file(std::filesystem::path(out_dir) / "report.json", json_body);
      if (format == "csv" || format == "both")
        write_file(std::filesystem::path(out_dir) / "report.csv", csv.str());
    } else {
      std::cout << (format == "csv" ? csv.str() : json_body);
    }

    if (invariant_failed) {
      std::cerr << "invariant violated: " << first_failure << "\n";
      return 1;
    }
    return 0;
  } catch (const capacity_error& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
