#include "qspir/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qspir {

namespace {

std::string qn(const char* base, int t, int p) {
  return std::string(base) + std::to_string(t) + "_p" + std::to_string(p);
}

// Per-block measurement branch: everything the user ends up holding.
struct BlockBranch {
  std::vector<WeylLabel> middles;    // G_t for t = 2..N-1
  std::vector<WeylLabel> pair_sums;  // per pair (2j, 2j+1)
  WeylLabel correction;
  WeylLabel outcome;
  double prob = 1.0;
};

WeylLabel sum_labels(const std::vector<WeylLabel>& v) {
  WeylLabel s{};
  for (auto l : v) s = s + l;
  return s;
}

int n_pairs(int n_servers) { return std::max(0, n_servers / 2 - 1); }

void finish_block_dense(int n, const std::vector<WeylLabel>& h, int block,
                        bool skip_corr, QuantumRegister reg,
                        std::vector<WeylLabel> middles, double prob,
                        std::vector<BlockBranch>& out) {
  const QubitId h1{qn("H", 1, block)};
  const QubitId hn{qn("H", n, block)};
  reg = apply_weyl(reg, hn, {0, h[std::size_t(n - 1)]});

  BlockBranch br;
  br.middles = std::move(middles);
  for (int j = 1; j <= n_pairs(n); ++j) {
    const WeylLabel ga = br.middles[std::size_t(2 * j - 2)];
    const WeylLabel gb = br.middles[std::size_t(2 * j - 1)];
    auto sums = two_sum_outcomes(ga, gb);
    WeylLabel s{};
    for (auto& [p, lab] : sums)
      if (p > 0.5) s = lab;
    br.pair_sums.push_back(s);
  }
  br.correction = sum_labels(br.middles);
  if (!skip_corr) reg = apply_weyl(reg, hn, {0, br.correction});

  for (const auto& fin : bell_pvm_outcomes(reg, h1, hn)) {
    if (fin.probability == 0.0) continue;
    BlockBranch b = br;
    b.outcome = fin.outcome;
    b.prob = prob * fin.probability;
    out.push_back(std::move(b));
  }
}

void explore_block_dense(int n, const std::vector<WeylLabel>& h, int block,
                         bool skip_corr, QuantumRegister reg, int t,
                         std::vector<WeylLabel> middles, double prob,
                         std::vector<BlockBranch>& out,
                         std::mt19937_64* sampler) {
  if (t == n) {
    finish_block_dense(n, h, block, skip_corr, std::move(reg),
                       std::move(middles), prob, out);
    return;
  }
  // Bring in the next shared pair and run serv_t's operation + measurement.
  const QubitId left{std::string("H") + std::to_string(t) + "L_p" +
                     std::to_string(block)};
  const QubitId right{std::string("H") + std::to_string(t) + "R_p" +
                      std::to_string(block)};
  const std::string next =
      (t + 1 == n) ? qn("H", n, block)
                   : std::string("H") + std::to_string(t + 1) + "L_p" +
                         std::to_string(block);
  QuantumRegister merged = tensor(reg, make_bell_pair(right, QubitId{next}));
  merged = apply_weyl(merged, left, {0, h[std::size_t(t - 1)]});

  if (sampler) {
    auto branches = bell_pvm_outcomes(merged, left, right);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u = dist(*sampler);
    for (const auto& br : branches) {
      if (br.probability > 0.0 && u < br.probability) {
        middles.push_back(br.outcome);
        explore_block_dense(n, h, block, skip_corr, br.post_state, t + 1,
                            std::move(middles), prob * br.probability, out,
                            sampler);
        return;
      }
      u -= br.probability;
    }
    for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
      if (it->probability > 0.0) {
        middles.push_back(it->outcome);
        explore_block_dense(n, h, block, skip_corr, it->post_state, t + 1,
                            std::move(middles), prob * it->probability, out,
                            sampler);
        return;
      }
    }
    throw std::logic_error("middle measurement produced no branch");
  }

  for (const auto& br : bell_pvm_outcomes(merged, left, right)) {
    if (br.probability == 0.0) continue;
    auto mid = middles;
    mid.push_back(br.outcome);
    explore_block_dense(n, h, block, skip_corr, br.post_state, t + 1,
                        std::move(mid), prob * br.probability, out, sampler);
  }
}

std::vector<BlockBranch> run_block_dense(int n, const std::vector<WeylLabel>& h,
                                         int block, bool skip_corr,
                                         std::mt19937_64* sampler) {
  const QubitId h1{qn("H", 1, block)};
  const std::string first =
      (n == 2) ? qn("H", 2, block)
               : std::string("H2L_p") + std::to_string(block);
  QuantumRegister reg = make_bell_pair(h1, QubitId{first});
  reg = apply_weyl(reg, h1, {0, h[0]});
  std::vector<BlockBranch> out;
  explore_block_dense(n, h, block, skip_corr, std::move(reg), 2, {}, 1.0, out,
                      sampler);
  return out;
}

std::vector<BlockBranch> run_block_frame(int n, const std::vector<WeylLabel>& h,
                                         int block, bool skip_corr,
                                         std::mt19937_64* sampler) {
  const int middles = n - 2;
  std::vector<BlockBranch> out;
  std::vector<int> gsel(std::size_t(std::max(middles, 0)), 0);

  auto run_one = [&](const std::vector<int>& gs, double prob) {
    // Pure frame algebra on the chain label; qubit identities never enter
    // the arithmetic (frame_swap_update with an identity fresh link reduces
    // to composing the outcome onto the accumulated frame).
    SignedWeyl frame = compose(weyl_identity(), transpose({0, h[0]}));
    BlockBranch br;
    br.middles.reserve(std::size_t(std::max(middles, 0)));
    br.pair_sums.reserve(std::size_t(n_pairs(n)));
    for (int t = 2; t <= n - 1; ++t) {
      frame = compose({0, h[std::size_t(t - 1)]}, frame);
      const WeylLabel g = label_from_index(gs[std::size_t(t - 2)]);
      frame = compose({0, g}, frame);
      br.middles.push_back(g);
    }
    frame = compose({0, h[std::size_t(n - 1)]}, frame);
    for (int j = 1; j <= n_pairs(n); ++j)
      br.pair_sums.push_back(br.middles[std::size_t(2 * j - 2)] +
                             br.middles[std::size_t(2 * j - 1)]);
    br.correction = sum_labels(br.middles);
    if (!skip_corr) frame = compose({0, br.correction}, frame);
    br.outcome = frame.label;
    br.prob = prob;
    out.push_back(std::move(br));
  };

  if (sampler) {
    std::uniform_int_distribution<int> dist(0, 3);
    for (auto& g : gsel) g = dist(*sampler);
    run_one(gsel, std::pow(0.25, middles));
    return out;
  }
  const std::size_t total = std::size_t(1) << (2 * std::max(middles, 0));
  const double p = 1.0 / double(total);
  for (std::size_t code = 0; code < total; ++code) {
    for (int i = 0; i < middles; ++i)
      gsel[std::size_t(i)] = int((code >> (2 * i)) & 3);
    run_one(gsel, p);
  }
  return out;
}

std::vector<ProtocolTranscript> run_impl(const ProtocolConfig& config,
                                         const QuerySet& queries,
                                         const RunOptions& options,
                                         std::mt19937_64& rng) {
  config.validate();
  if (queries.n_servers() != config.n_servers)
    throw std::invalid_argument("query set has wrong server count");

  const int n = config.n_servers;
  const int l = config.blocks;
  std::vector<LabelVector> answers;
  answers.reserve(std::size_t(n));
  for (int t = 1; t <= n; ++t)
    answers.push_back(server_answer(config.files, queries.mask(t)));

  const bool sample = config.mode == Mode::sample;
  std::mt19937_64* sampler = sample ? &rng : nullptr;

  std::vector<std::vector<BlockBranch>> per_block;
  per_block.reserve(std::size_t(l));
  std::size_t total = 1;
  for (int p = 0; p < l; ++p) {
    std::vector<WeylLabel> h(std::size_t(n), WeylLabel{});
    for (int t = 0; t < n; ++t) h[std::size_t(t)] = answers[std::size_t(t)].at(std::size_t(p));
    auto branches = config.backend == Backend::dense
                        ? run_block_dense(n, h, p, options.skip_user_correction,
                                          sampler)
                        : run_block_frame(n, h, p, options.skip_user_correction,
                                          sampler);
    total *= branches.size();
    if (total > options.max_branches)
      throw capacity_error("enumerate mode exceeds branch cap");
    per_block.push_back(std::move(branches));
  }

  const int dq = (n % 2 == 0) ? n * l : (n - 1) * l;
  const int dc = (n % 2 == 0) ? 0 : 2 * l;

  std::vector<ProtocolTranscript> result;
  result.reserve(total);
  std::vector<std::size_t> sel(std::size_t(l), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    ProtocolTranscript tr;
    tr.queries = queries;
    tr.answers = answers;
    tr.middle_outcomes.reserve(std::size_t(l));
    tr.pair_sums.reserve(std::size_t(l));
    tr.user_correction.reserve(std::size_t(l));
    tr.output = LabelVector(std::size_t(l));
    tr.downloaded_qubits = dq;
    tr.downloaded_cbits = dc;
    tr.uploaded_bits = n * config.n_files;
    std::size_t rem = idx;
    for (int p = 0; p < l; ++p) {
      const auto& blk = per_block[std::size_t(p)];
      const BlockBranch& br = blk[rem % blk.size()];
      rem /= blk.size();
      tr.middle_outcomes.push_back(br.middles);
      tr.pair_sums.push_back(br.pair_sums);
      tr.user_correction.push_back(br.correction);
      tr.output.set(std::size_t(p), br.outcome);
      tr.branch_probability *= br.prob;
    }
    result.push_back(std::move(tr));
  }
  return result;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (n_servers < 2) throw std::invalid_argument("need at least 2 servers");
  if (n_files < 2) throw std::invalid_argument("need at least 2 files");
  if (blocks < 1) throw std::invalid_argument("need at least 1 block");
  if (query_index < 1 || query_index > n_files)
    throw std::invalid_argument("query index out of range");
  if (int(files.size()) != n_files)
    throw std::invalid_argument("file list must have exactly F entries");
  for (const auto& f : files)
    if (int(f.size()) != blocks)
      throw std::invalid_argument("every file must have exactly `blocks` blocks");
}

QuerySet::QuerySet(std::vector<std::uint32_t> masks, int query_index)
    : masks_(std::move(masks)) {
  if (masks_.size() < 2) throw std::invalid_argument("need at least 2 queries");
  std::uint32_t x = 0;
  for (auto m : masks_) x ^= m;
  if (x != (std::uint32_t(1) << (query_index - 1)))
    throw std::invalid_argument(
        "query subsets must have symmetric difference {K}");
}

QuerySet make_queries(int n_servers, int n_files, int k, std::mt19937_64& rng) {
  if (k < 1 || k > n_files) throw std::invalid_argument("k out of range");
  std::uniform_int_distribution<std::uint32_t> dist(
      0, (std::uint32_t(1) << n_files) - 1);
  std::vector<std::uint32_t> masks(std::size_t(n_servers), 0u);
  std::uint32_t x = 0;
  for (int t = 0; t < n_servers - 1; ++t) {
    masks[std::size_t(t)] = dist(rng);
    x ^= masks[std::size_t(t)];
  }
  masks[std::size_t(n_servers - 1)] = x ^ (std::uint32_t(1) << (k - 1));
  return QuerySet(std::move(masks), k);
}

QuerySet make_queries(int n_servers, int n_files, int k,
                      std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return make_queries(n_servers, n_files, k, rng);
}

LabelVector server_answer(const std::vector<LabelVector>& files,
                          std::uint32_t query_mask) {
  if (files.empty()) throw std::invalid_argument("no files");
  if (query_mask >> files.size())
    throw std::out_of_range("query mask selects a nonexistent file");
  LabelVector sum(files.front().size());
  for (std::size_t i = 0; i < files.size(); ++i)
    if ((query_mask >> i) & 1) sum = sum + files[i];
  return sum;
}

BellLink frame_swap_update(const BellLink& link1, const BellLink& link2,
                           WeylLabel outcome) {
  // Measured qubits are (link1.endpoint_b, link2.endpoint_a); all four
  // endpoints must be distinct qubits.
  const std::array<const std::string*, 4> names = {
      &link1.endpoint_a.name, &link1.endpoint_b.name, &link2.endpoint_a.name,
      &link2.endpoint_b.name};
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (*names[i] == *names[j])
        throw std::invalid_argument("swap endpoint mismatch: " + *names[i]);
  BellLink out;
  out.endpoint_a = link1.endpoint_a;
  out.endpoint_b = link2.endpoint_b;
  out.frame =
      compose(link2.frame, compose(SignedWeyl{0, outcome}, link1.frame));
  return out;
}

std::vector<TeleportBranch> teleport_with_operation_outcomes(
    const QuantumRegister& input_state, const QubitId& payload, WeylLabel cd,
    bool operation_first) {
  if (!input_state.contains(payload))
    throw std::invalid_argument("payload qubit missing from input state");
  const QubitId h2{"teleport__H2"};
  const QubitId h3{"teleport__H3"};
  if (input_state.contains(h2) || input_state.contains(h3))
    throw std::invalid_argument("reserved teleport qubit names in input");

  QuantumRegister reg = tensor(input_state, make_bell_pair(h2, h3));
  if (operation_first) reg = apply_weyl(reg, h3, {0, cd});

  std::vector<TeleportBranch> out;
  for (const auto& br : bell_pvm_outcomes(reg, payload, h2)) {
    TeleportBranch tb;
    tb.outcome = br.outcome;
    tb.probability = br.probability;
    if (br.probability == 0.0) continue;
    tb.pre_correction = operation_first
                            ? br.post_state
                            : apply_weyl(br.post_state, h3, {0, cd});
    tb.output_state = apply_weyl(tb.pre_correction, h3, {0, br.outcome});
    out.push_back(std::move(tb));
  }
  return out;
}

std::pair<WeylLabel, QuantumRegister> teleport_with_operation(
    const QuantumRegister& input_state, const QubitId& payload, WeylLabel cd,
    std::uint64_t rng_seed) {
  auto branches = teleport_with_operation_outcomes(input_state, payload, cd);
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  for (const auto& br : branches) {
    if (u < br.probability) return {br.outcome, br.output_state};
    u -= br.probability;
  }
  return {branches.back().outcome, branches.back().output_state};
}

std::vector<std::pair<double, WeylLabel>> two_sum_outcomes(WeylLabel ab,
                                                           WeylLabel cd) {
  const QubitId qa{"twosum__A"};
  const QubitId qb{"twosum__B"};
  QuantumRegister reg = make_bell_pair(qa, qb);
  reg = apply_weyl(reg, qa, {0, ab});
  reg = apply_weyl(reg, qb, {0, cd});
  std::vector<std::pair<double, WeylLabel>> out;
  for (const auto& br : bell_pvm_outcomes(reg, qa, qb))
    out.emplace_back(br.probability, br.outcome);
  return out;
}

WeylLabel two_sum_transmit(WeylLabel ab, WeylLabel cd,
                           std::uint64_t /*rng_seed*/) {
  // The PVM is deterministic here; the seed is accepted for interface
  // symmetry with the other measurement primitives.
  for (const auto& [p, lab] : two_sum_outcomes(ab, cd))
    if (p > 0.5) return lab;
  throw std::logic_error("two-sum transmission lost its branch");
}

std::vector<ProtocolTranscript> run_qspir(const ProtocolConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  QuerySet q =
      make_queries(config.n_servers, config.n_files, config.query_index, rng);
  return run_impl(config, q, RunOptions{}, rng);
}

std::vector<ProtocolTranscript> run_qspir(const ProtocolConfig& config,
                                          const QuerySet& queries,
                                          const RunOptions& options) {
  std::mt19937_64 rng(config.rng_seed);
  return run_impl(config, queries, options, rng);
}

std::vector<ProtocolTranscript> run_qspir_three_server(
    const ProtocolConfig& config) {
  if (config.n_servers != 3 || config.blocks != 1)
    throw std::invalid_argument("three-server path needs N=3 and one block");
  return run_qspir(config);
}

std::vector<ThreeServerTrace> three_server_state_trace(
    const std::vector<LabelVector>& files, const QuerySet& queries) {
  if (queries.n_servers() != 3)
    throw std::invalid_argument("three-server trace needs N=3");
  for (const auto& f : files)
    if (f.size() != 1)
      throw std::invalid_argument("three-server trace needs one block");
  const QubitId h1{"H1"}, h2l{"H2L"}, h2r{"H2R"}, h3{"H3"};
  QuantumRegister reg =
      tensor(make_bell_pair(h1, h2l), make_bell_pair(h2r, h3));
  reg = apply_weyl(reg, h1, {0, server_answer(files, queries.mask(1)).at(0)});
  reg = apply_weyl(reg, h2l, {0, server_answer(files, queries.mask(2)).at(0)});
  reg = apply_weyl(reg, h3, {0, server_answer(files, queries.mask(3)).at(0)});

  std::vector<ThreeServerTrace> out;
  for (const auto& br : bell_pvm_outcomes(reg, h2l, h2r)) {
    if (br.probability == 0.0) continue;
    ThreeServerTrace t;
    t.middle_outcome = br.outcome;
    t.probability = br.probability;
    t.pre_correction = br.post_state;
    t.post_correction = apply_weyl(br.post_state, h3, {0, br.outcome});
    out.push_back(std::move(t));
  }
  return out;
}

ProtocolTranscript run_classical_baseline(const ProtocolConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  QuerySet q =
      make_queries(config.n_servers, config.n_files, config.query_index, rng);
  ProtocolTranscript tr;
  tr.queries = q;
  LabelVector sum(std::size_t(config.blocks));
  for (int t = 1; t <= config.n_servers; ++t) {
    tr.answers.push_back(server_answer(config.files, q.mask(t)));
    sum = sum + tr.answers.back();
  }
  tr.output = sum;
  tr.downloaded_qubits = 0;
  tr.downloaded_cbits = config.n_servers * 2 * config.blocks;
  tr.uploaded_bits = config.n_servers * config.n_files;
  tr.branch_probability = 1.0;
  return tr;
}

int download_qubit_equivalents(int n_servers, int blocks) {
  return (n_servers % 2 == 0) ? n_servers * blocks
                              : (n_servers + 1) * blocks;
}

}  // namespace qspir
