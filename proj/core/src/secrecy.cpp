#include "qspir/secrecy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace qspir {

namespace {

// ---------------------------------------------------------------------------
// Packed-label helpers. A file value (or any per-block label vector) is a
// 2l-bit integer, 2 bits per block, matching LabelVector's packing.

std::uint64_t pow4(int e) { return std::uint64_t(1) << (2 * e); }

LabelVector unpack(int blocks, std::uint64_t value) {
  return LabelVector::from_packed(std::size_t(blocks), value);
}

// Enumeration budget: a verifier call above this many inner-loop visits is
// rejected rather than left to run for hours.
constexpr std::uint64_t kOpsBudget = 120'000'000;

struct GTables {
  int gdims = 0;  // number of middle outcomes = (n-2) * l
  std::vector<std::uint32_t> sum_g;      // per-block XOR of all G_t
  std::vector<std::uint32_t> pair_sums;  // packed (j, p) -> G_2j + G_2j+1
  std::vector<std::uint32_t> g_last;     // G_{n-1} per block (odd n)
};

// Middle-outcome code layout: label of (t, p) at bits 2*((t-2)*l + p).
GTables build_gtables(int n, int l) {
  GTables gt;
  gt.gdims = (n - 2) * l;
  if (gt.gdims > 13) throw capacity_error("middle-outcome space too large");
  const std::uint64_t total = pow4(gt.gdims);
  const int pairs = std::max(0, n / 2 - 1);
  const bool odd = (n % 2) != 0;
  gt.sum_g.resize(total);
  gt.pair_sums.resize(total);
  if (odd) gt.g_last.resize(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint32_t sum = 0, ps = 0, gl = 0;
    for (int p = 0; p < l; ++p) {
      std::uint32_t block_sum = 0;
      for (int t = 2; t <= n - 1; ++t) {
        const std::uint32_t g =
            std::uint32_t(code >> (2 * ((t - 2) * l + p))) & 3u;
        block_sum ^= g;
        if (odd && t == n - 1) gl |= g << (2 * p);
      }
      sum |= block_sum << (2 * p);
      for (int j = 1; j <= pairs; ++j) {
        const std::uint32_t ga =
            std::uint32_t(code >> (2 * ((2 * j - 2) * l + p))) & 3u;
        const std::uint32_t gb =
            std::uint32_t(code >> (2 * ((2 * j - 1) * l + p))) & 3u;
        ps |= (ga ^ gb) << (2 * ((j - 1) * l + p));
      }
    }
    gt.sum_g[code] = sum;
    gt.pair_sums[code] = ps;
    if (odd) gt.g_last[code] = gl;
  }
  return gt;
}

// |Phi_g> = (I (x) W(g)) |Phi> as a dense 4-vector (real entries).
Eigen::VectorXcd bell_vec(int label_idx) {
  const WeylLabel g = label_from_index(label_idx);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < 2; ++r) {
    const int c = (r + g.a) & 1;
    const double ph = ((r * g.b) & 1) ? -1.0 : 1.0;
    v[r * 2 + c] = inv_sqrt2 * ph;
  }
  return v;
}

Eigen::MatrixXcd bell_dm(int label_idx) {
  const Eigen::VectorXcd v = bell_vec(label_idx);
  return v * v.adjoint();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b,
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Classical mutual information from an exact contingency table.
// Returns an exact rational whenever every likelihood ratio is a power of
// two (in particular, exactly zero under exact independence).
GammaEntry table_mutual_information(const std::vector<long long>& counts,
                                    std::size_t rows, std::size_t cols) {
  std::vector<long long> rsum(rows, 0), csum(cols, 0);
  long long total = 0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      rsum[r] += counts[r * cols + c];
      csum[c] += counts[r * cols + c];
      total += counts[r * cols + c];
    }
  GammaEntry out;
  bool all_dyadic = true;
  Rational exact(0);
  double approx = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const long long n = counts[r * cols + c];
      if (n == 0) continue;
      const __int128 lhs = __int128(n) * total;
      const __int128 rhs = __int128(rsum[r]) * csum[c];
      const double ratio = double(n) * double(total) /
                           (double(rsum[r]) * double(csum[c]));
      approx += (double(n) / double(total)) * std::log2(ratio);
      if (lhs == rhs) continue;  // log ratio is 0
      // Power-of-two test on the reduced ratio lhs/rhs.
      __int128 a = lhs, b = rhs;
      while (a % 2 == 0 && b % 2 == 0) { a /= 2; b /= 2; }
      int e = 0;
      while (a % 2 == 0) { a /= 2; ++e; }
      while (b % 2 == 0) { b /= 2; --e; }
      if (a == b) {
        exact += Rational(n, total) * Rational(e, 1);
      } else {
        all_dyadic = false;
      }
    }
  out.exact = all_dyadic;
  out.exact_bits = all_dyadic ? exact : Rational(0);
  out.bits = all_dyadic ? to_double(exact) : approx;
  return out;
}

std::vector<std::uint32_t> query_masks(int n, int f, int k, QueryRule rule,
                                       std::uint64_t free_code) {
  std::vector<std::uint32_t> masks(std::size_t(n), 0);
  const std::uint32_t fmask = (std::uint32_t(1) << f) - 1;
  std::uint32_t x = 0;
  int slot = 0;
  if (rule == QueryRule::leak_first) {
    masks[0] = std::uint32_t(1) << (k - 1);
    x = masks[0];
    slot = 1;
  }
  for (; slot < n - 1; ++slot) {
    masks[std::size_t(slot)] =
        std::uint32_t(free_code >> (f * (rule == QueryRule::leak_first
                                             ? slot - 1
                                             : slot))) & fmask;
    x ^= masks[std::size_t(slot)];
  }
  masks[std::size_t(n - 1)] = x ^ (std::uint32_t(1) << (k - 1));
  return masks;
}

std::uint32_t xor_selected(const std::vector<std::uint32_t>& file_vals,
                           std::uint32_t mask) {
  std::uint32_t h = 0;
  for (std::size_t i = 0; i < file_vals.size(); ++i)
    if ((mask >> i) & 1) h ^= file_vals[i];
  return h;
}

std::vector<std::uint32_t> decode_files(int f, int l, std::uint64_t wcode) {
  std::vector<std::uint32_t> vals(std::size_t(f), 0u);
  const std::uint64_t m = pow4(l) - 1;
  for (int i = 0; i < f; ++i)
    vals[std::size_t(i)] = std::uint32_t((wcode >> (2 * l * i)) & m);
  return vals;
}

}  // namespace

// ---------------------------------------------------------------------------

Rational error_measure(const FamilyConfig& fc, Variant variant) {
  const int n = fc.n_servers, f = fc.n_files, l = fc.blocks;
  ProtocolConfig probe;
  probe.n_servers = n;
  probe.n_files = f;
  probe.blocks = l;
  const std::uint64_t wcount = pow4(l * f);
  const std::uint64_t qcount = std::uint64_t(1) << ((n - 1) * f);

  if (variant == Variant::classical_baseline) {
    // Deterministic output; still enumerated rather than assumed.
    long long errors = 0;
    for (std::uint64_t wcode = 0; wcode < wcount; ++wcode) {
      const auto vals = decode_files(f, l, wcode);
      for (int k = 1; k <= f; ++k)
        for (std::uint64_t qc = 0; qc < qcount; ++qc) {
          const auto masks = query_masks(n, f, k, QueryRule::standard, qc);
          std::uint32_t out = 0;
          for (auto m : masks) out ^= xor_selected(vals, m);
          if (out != vals[std::size_t(k - 1)]) ++errors;
        }
    }
    return Rational(errors, (long long)(wcount * f * qcount));
  }

  const std::uint64_t branches = pow4((n - 2) * l);
  if (wcount * f * qcount * branches > kOpsBudget)
    throw capacity_error("error-measure enumeration too large");

  RunOptions opts;
  opts.skip_user_correction = (variant == Variant::skip_correction);
  probe.backend = Backend::frame;
  probe.mode = Mode::enumerate_all;

  long long errors = 0;
  for (std::uint64_t wcode = 0; wcode < wcount; ++wcode) {
    const auto vals = decode_files(f, l, wcode);
    probe.files.clear();
    for (auto v : vals) probe.files.push_back(unpack(l, v));
    for (int k = 1; k <= f; ++k) {
      probe.query_index = k;
      const LabelVector& expected = probe.files[std::size_t(k - 1)];
      // The run depends on the queries only through the answer tuple, so
      // query draws with identical answers are grouped and weighted.
      std::unordered_map<std::uint64_t, std::pair<std::uint64_t, long long>>
          groups;  // answer-tuple key -> (representative draw, multiplicity)
      for (std::uint64_t qc = 0; qc < qcount; ++qc) {
        const auto masks = query_masks(n, f, k, QueryRule::standard, qc);
        std::uint64_t key = 0;
        for (int t = 0; t < n; ++t)
          key |= std::uint64_t(xor_selected(vals, masks[std::size_t(t)]))
                 << (2 * l * t);
        auto [it, fresh] = groups.try_emplace(key, qc, 0);
        it->second.second++;
      }
      for (const auto& [key, rep] : groups) {
        QuerySet qs(query_masks(n, f, k, QueryRule::standard, rep.first), k);
        const auto transcripts = run_qspir(probe, qs, opts);
        if (transcripts.size() != branches)
          throw std::logic_error("unexpected branch count in enumeration");
        for (const auto& tr : transcripts)
          if (!(tr.output == expected)) errors += rep.second;
      }
    }
  }
  return Rational(errors, (long long)(wcount * f * qcount * branches));
}

std::map<int, GammaEntry> user_secrecy(const FamilyConfig& fc, QueryRule rule) {
  const int n = fc.n_servers, f = fc.n_files;
  const int free_servers = (rule == QueryRule::leak_first) ? n - 2 : n - 1;
  const std::uint64_t qcount = std::uint64_t(1) << (free_servers * f);
  const std::size_t keyspace = std::size_t(1) << ((n - 1) * f);
  if (qcount * std::uint64_t(f) * std::uint64_t(n) > kOpsBudget ||
      (n - 1) * f > 24)
    throw capacity_error("user-secrecy enumeration too large");

  std::vector<std::vector<long long>> counts(
      std::size_t(n), std::vector<long long>(std::size_t(f) * keyspace, 0));
  for (int k = 1; k <= f; ++k)
    for (std::uint64_t qc = 0; qc < qcount; ++qc) {
      const auto masks = query_masks(n, f, k, rule, qc);
      for (int t = 1; t <= n; ++t) {
        std::size_t key = 0;
        int slot = 0;
        for (int s = 1; s <= n; ++s) {
          if (s == t) continue;
          key |= std::size_t(masks[std::size_t(s - 1)]) << (f * slot);
          ++slot;
        }
        counts[std::size_t(t - 1)][std::size_t(k - 1) * keyspace + key]++;
      }
    }

  std::map<int, GammaEntry> out;
  for (int t = 1; t <= n; ++t)
    out[t] = table_mutual_information(counts[std::size_t(t - 1)],
                                      std::size_t(f), keyspace);
  return out;
}

std::map<std::pair<int, int>, double> server_secrecy(const FamilyConfig& fc,
                                                     Variant variant,
                                                     ViewOptions view) {
  const int n = fc.n_servers, f = fc.n_files, l = fc.blocks;
  const bool odd = (n % 2) != 0;
  const int pairs = std::max(0, n / 2 - 1);
  const std::uint64_t wcount = pow4(l * f);
  const std::uint64_t qcount = std::uint64_t(1) << ((n - 1) * f);
  const std::uint64_t wv = pow4(l);  // values of one file

  if (variant == Variant::skip_correction)
    throw std::invalid_argument("server secrecy: unsupported variant");

  std::map<std::pair<int, int>, double> result;

  if (variant == Variant::classical_baseline) {
    // Fully classical view: queries plus all answer strings.
    const std::uint64_t hspace = pow4(l * n);
    const std::uint64_t cspace = (view.include_queries ? qcount : 1) * hspace;
    if (wcount * f * qcount > kOpsBudget || cspace * wv > (std::uint64_t(1) << 28))
      throw capacity_error("baseline server-secrecy enumeration too large");
    for (int k = 1; k <= f; ++k)
      for (int i = 1; i <= f; ++i) {
        if (i == k) continue;
        std::vector<long long> counts(std::size_t(wv * cspace), 0);
        for (std::uint64_t wcode = 0; wcode < wcount; ++wcode) {
          const auto vals = decode_files(f, l, wcode);
          for (std::uint64_t qc = 0; qc < qcount; ++qc) {
            const auto masks = query_masks(n, f, k, QueryRule::standard, qc);
            std::uint64_t h = 0;
            for (int t = 0; t < n; ++t)
              h |= std::uint64_t(xor_selected(vals, masks[std::size_t(t)]))
                   << (2 * l * t);
            const std::uint64_t c =
                (view.include_queries ? qc * hspace : 0) + h;
            counts[std::size_t(vals[std::size_t(i - 1)]) * cspace + c]++;
          }
        }
        result[{i, k}] =
            table_mutual_information(counts, std::size_t(wv), cspace).bits;
      }
    return result;
  }

  const GTables gt = build_gtables(n, l);
  const std::uint64_t gcount = pow4(gt.gdims);
  const std::uint64_t cext = (view.include_classical ? (odd ? wv : 1) : 1) *
                             ((variant == Variant::clear_h2 &&
                               view.include_classical)
                                  ? wv
                                  : 1);
  const std::uint64_t qpart = view.include_queries ? qcount : 1;
  const std::uint64_t cspace = qpart * cext;
  const std::uint64_t qd = wv * (view.include_pair_qubits ? pow4(pairs * l) : 1);
  const std::uint64_t table = cspace * wv * qd;
  if (wcount * qcount * gcount > kOpsBudget ||
      table > (std::uint64_t(1) << 27))
    throw capacity_error("server-secrecy enumeration too large");

  // chi is memoized on the canonical form of the conditional ensemble.
  std::unordered_map<std::string, double> chi_memo;
  const Eigen::Index qdim =
      Eigen::Index(1) << (2 * l * (1 + (view.include_pair_qubits ? pairs : 0)));

  auto state_of = [&](std::uint64_t qdesc) {
    // qdesc: chain labels in the low 2l bits, pair sums above.
    Eigen::MatrixXcd rho(1, 1);
    rho(0, 0) = 1.0;
    for (int p = 0; p < l; ++p)
      rho = kron(rho, bell_dm(int((qdesc >> (2 * p)) & 3)));
    if (view.include_pair_qubits)
      for (int jp = 0; jp < pairs * l; ++jp)
        rho = kron(rho, bell_dm(int((qdesc >> (2 * l + 2 * jp)) & 3)));
    return rho;
  };

  for (int k = 1; k <= f; ++k)
    for (int i = 1; i <= f; ++i) {
      if (i == k) continue;
      std::vector<std::uint32_t> counts(std::size_t(table), 0);
      for (std::uint64_t wcode = 0; wcode < wcount; ++wcode) {
        const auto vals = decode_files(f, l, wcode);
        const std::uint32_t wk = vals[std::size_t(k - 1)];
        const std::uint32_t wi = vals[std::size_t(i - 1)];
        for (std::uint64_t qc = 0; qc < qcount; ++qc) {
          const std::uint64_t cbase = view.include_queries ? qc : 0;
          std::uint64_t h2 = 0;
          if (variant == Variant::clear_h2 && view.include_classical) {
            const auto masks = query_masks(n, f, k, QueryRule::standard, qc);
            h2 = xor_selected(vals, masks[1]);
          }
          for (std::uint64_t g = 0; g < gcount; ++g) {
            std::uint64_t c = cbase;
            if (view.include_classical && odd) c = c * wv + gt.g_last[g];
            if (variant == Variant::clear_h2 && view.include_classical)
              c = c * wv + h2;
            const std::uint64_t chain = wk ^ gt.sum_g[g];
            const std::uint64_t qdesc =
                view.include_pair_qubits
                    ? chain | (std::uint64_t(gt.pair_sums[g]) << (2 * l))
                    : chain;
            counts[std::size_t((c * wv + wi) * qd + qdesc)]++;
          }
        }
      }

      // Classical part: I(W_i ; C).
      std::vector<long long> cw(std::size_t(wv * cspace), 0);
      for (std::uint64_t c = 0; c < cspace; ++c)
        for (std::uint64_t w = 0; w < wv; ++w) {
          long long s = 0;
          for (std::uint64_t q = 0; q < qd; ++q)
            s += counts[std::size_t((c * wv + w) * qd + q)];
          cw[std::size_t(w * cspace + c)] = s;
        }
      double beta = table_mutual_information(cw, std::size_t(wv), cspace).bits;

      // Quantum part: sum over classical blocks of p(c) * chi(W_i ; HQ | c).
      long long grand = 0;
      for (auto v : cw) grand += v;
      for (std::uint64_t c = 0; c < cspace; ++c) {
        long long ctotal = 0;
        for (std::uint64_t w = 0; w < wv; ++w)
          ctotal += cw[std::size_t(w * cspace + c)];
        if (ctotal == 0) continue;
        // Canonical key of the conditional ensemble.
        std::ostringstream key;
        for (std::uint64_t w = 0; w < wv; ++w) {
          const long long rt = cw[std::size_t(w * cspace + c)];
          if (rt == 0) continue;
          long long g1 = std::gcd(rt, ctotal);
          key << 'p' << rt / g1 << '/' << ctotal / g1 << ':';
          long long rgcd = 0;
          for (std::uint64_t q = 0; q < qd; ++q)
            rgcd = std::gcd<long long>(rgcd,
                                       counts[std::size_t((c * wv + w) * qd + q)]);
          for (std::uint64_t q = 0; q < qd; ++q) {
            const long long v = counts[std::size_t((c * wv + w) * qd + q)];
            if (v) key << q << ',' << v / rgcd << ';';
          }
          key << '|';
        }
        const std::string ks = key.str();
        auto it = chi_memo.find(ks);
        double chi;
        if (it != chi_memo.end()) {
          chi = it->second;
        } else {
          if (chi_memo.size() > 512)
            throw capacity_error("server-secrecy conditional blocks blew up");
          std::vector<std::pair<double, Eigen::MatrixXcd>> ensemble;
          for (std::uint64_t w = 0; w < wv; ++w) {
            const long long rt = cw[std::size_t(w * cspace + c)];
            if (rt == 0) continue;
            Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(qdim, qdim);
            for (std::uint64_t q = 0; q < qd; ++q) {
              const long long v = counts[std::size_t((c * wv + w) * qd + q)];
              if (v) rho += (double(v) / double(rt)) * state_of(q);
            }
            ensemble.emplace_back(double(rt) / double(ctotal), std::move(rho));
          }
          chi = holevo_information(ensemble);
          chi_memo.emplace(ks, chi);
        }
        beta += (double(ctotal) / double(grand)) * chi;
      }
      result[{i, k}] = beta;
    }
  return result;
}

double lemma1_check_for_server(const FamilyConfig& fc, int t, Variant variant) {
  const int n = fc.n_servers, f = fc.n_files, l = fc.blocks;
  if (t < 1 || t > n) throw std::invalid_argument("server index out of range");
  if (variant == Variant::classical_baseline ||
      variant == Variant::skip_correction)
    throw std::invalid_argument("lemma check: unsupported variant");
  const bool odd = (n % 2) != 0;
  const int pairs = std::max(0, n / 2 - 1);
  const std::uint64_t wv = pow4(l);
  const std::uint64_t wc_count = pow4(l * (f - 1));
  const std::uint64_t qcount = std::uint64_t(1) << ((n - 1) * f);
  const GTables gt = build_gtables(n, l);
  const std::uint64_t gcount = pow4(gt.gdims);
  if (wv * wc_count * qcount * gcount * std::uint64_t(f) > kOpsBudget)
    throw capacity_error("reduced-state enumeration too large");

  // Transmitted systems of the other N-1 servers. Constant factors
  // (single halves of entangled pairs, lone chain endpoints) have fixed
  // maximally mixed states and cancel in the trace distance, so the
  // descriptor keeps only the w-relevant parts.
  const bool chain_both = (t != 1 && t != n);
  std::vector<int> full_pairs;  // pair indices with both qubits visible
  for (int j = 1; j <= pairs; ++j)
    if (t != 2 * j && t != 2 * j + 1) full_pairs.push_back(j);
  const bool see_glast = odd && t != n - 1;
  const bool see_h2 = (variant == Variant::clear_h2) && t != 2;

  const std::uint64_t desc_space =
      (chain_both ? wv : 1) * pow4(int(full_pairs.size()) * l) *
      (see_glast ? wv : 1) * (see_h2 ? wv : 1);
  const Eigen::Index dim =
      Eigen::Index(1)
      << (2 * l * ((chain_both ? 1 : 0) + int(full_pairs.size()) +
                   (see_glast ? 1 : 0) + (see_h2 ? 1 : 0)));
  if (dim > 4096) throw capacity_error("reduced-state dimension too large");

  auto state_of = [&](std::uint64_t desc) {
    Eigen::MatrixXcd rho(1, 1);
    rho(0, 0) = 1.0;
    int shift = 0;
    if (chain_both) {
      for (int p = 0; p < l; ++p)
        rho = kron(rho, bell_dm(int((desc >> (shift + 2 * p)) & 3)));
      shift += 2 * l;
    }
    for (std::size_t j = 0; j < full_pairs.size(); ++j) {
      for (int p = 0; p < l; ++p)
        rho = kron(rho, bell_dm(int((desc >> (shift + 2 * p)) & 3)));
      shift += 2 * l;
    }
    auto classical = [&](int bits) {
      Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(Eigen::Index(wv),
                                                     Eigen::Index(wv));
      proj(bits, bits) = 1.0;
      return proj;
    };
    if (see_glast) {
      rho = kron(rho, classical(int((desc >> shift) & (wv - 1))));
      shift += 2 * l;
    }
    if (see_h2) rho = kron(rho, classical(int((desc >> shift) & (wv - 1))));
    return rho;
  };

  double max_td = 0.0;
  for (int k = 1; k <= f; ++k) {
    std::vector<std::unordered_map<std::uint64_t, long long>> weights(
        wv);
    for (std::uint64_t w = 0; w < wv; ++w)
      for (std::uint64_t wcc = 0; wcc < wc_count; ++wcc) {
        // Reassemble the full file tuple with file k set to w.
        std::vector<std::uint32_t> vals(std::size_t(f), 0u);
        std::uint64_t rem = wcc;
        for (int i = 0; i < f; ++i) {
          if (i == k - 1) {
            vals[std::size_t(i)] = std::uint32_t(w);
          } else {
            vals[std::size_t(i)] = std::uint32_t(rem & (wv - 1));
            rem >>= 2 * l;
          }
        }
        for (std::uint64_t qc = 0; qc < qcount; ++qc) {
          std::uint64_t h2 = 0;
          if (see_h2) {
            const auto masks = query_masks(n, f, k, QueryRule::standard, qc);
            h2 = xor_selected(vals, masks[1]);
          }
          for (std::uint64_t g = 0; g < gcount; ++g) {
            std::uint64_t desc = 0;
            int shift = 0;
            if (chain_both) {
              desc |= std::uint64_t(std::uint32_t(w) ^ gt.sum_g[g]);
              shift += 2 * l;
            }
            for (std::size_t j = 0; j < full_pairs.size(); ++j) {
              const int jj = full_pairs[j];
              std::uint64_t s = 0;
              for (int p = 0; p < l; ++p)
                s |= std::uint64_t((gt.pair_sums[g] >>
                                    (2 * ((jj - 1) * l + p))) & 3)
                     << (2 * p);
              desc |= s << shift;
              shift += 2 * l;
            }
            if (see_glast) {
              desc |= std::uint64_t(gt.g_last[g]) << shift;
              shift += 2 * l;
            }
            if (see_h2) desc |= h2 << shift;
            weights[std::size_t(w)][desc]++;
          }
        }
      }

    const double norm = double(wc_count) * double(qcount) * double(gcount);
    std::vector<Eigen::MatrixXcd> rho_w(
        std::size_t(wv), Eigen::MatrixXcd::Zero(dim, dim));
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t w = 0; w < wv; ++w) {
      for (const auto& [desc, cnt] : weights[std::size_t(w)])
        rho_w[std::size_t(w)] += (double(cnt) / norm) * state_of(desc);
      avg += rho_w[std::size_t(w)] / double(wv);
    }
    for (std::uint64_t w = 0; w < wv; ++w)
      max_td = std::max(max_td, trace_distance(rho_w[std::size_t(w)], avg));
  }
  (void)desc_space;
  return max_td;
}

double lemma1_check(const FamilyConfig& fc, Variant variant) {
  double max_td = 0.0;
  for (int t = 1; t <= fc.n_servers; ++t)
    max_td = std::max(max_td, lemma1_check_for_server(fc, t, variant));
  return max_td;
}

SecurityReport build_security_report(const FamilyConfig& fc, Variant variant) {
  SecurityReport rep;
  rep.alpha = error_measure(fc, variant);
  const QueryRule rule = QueryRule::standard;
  rep.per_server_gamma = user_secrecy(fc, rule);
  rep.gamma_is_exact = true;
  for (const auto& [t, g] : rep.per_server_gamma) {
    rep.gamma_bits = std::max(rep.gamma_bits, g.bits);
    if (!g.exact)
      rep.gamma_is_exact = false;
    else if (g.exact_bits > rep.gamma_exact)
      rep.gamma_exact = g.exact_bits;
  }
  rep.per_pair_beta = server_secrecy(fc, variant);
  for (const auto& [ik, b] : rep.per_pair_beta)
    rep.beta_bits = std::max(rep.beta_bits, b);
  return rep;
}

}  // namespace qspir
