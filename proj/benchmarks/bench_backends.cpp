// Dense vs. symbolic-frame backend timings for single protocol runs.

#include <benchmark/benchmark.h>

#include "qspir/protocol.hpp"
#include "qspir/secrecy.hpp"

using namespace qspir;

namespace {

ProtocolConfig config(int n, int l, Backend backend) {
  ProtocolConfig pc;
  pc.n_servers = n;
  pc.n_files = 2;
  pc.blocks = l;
  pc.files.assign(2, LabelVector(std::size_t(l)));
  pc.backend = backend;
  return pc;
}

void BM_sample_dense(benchmark::State& state) {
  ProtocolConfig pc = config(int(state.range(0)), int(state.range(1)),
                             Backend::dense);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    pc.rng_seed = seed++;
    benchmark::DoNotOptimize(run_qspir(pc));
  }
}
BENCHMARK(BM_sample_dense)
    ->Args({3, 1})->Args({4, 1})->Args({6, 1})->Args({6, 8});

void BM_sample_frame(benchmark::State& state) {
  ProtocolConfig pc = config(int(state.range(0)), int(state.range(1)),
                             Backend::frame);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    pc.rng_seed = seed++;
    benchmark::DoNotOptimize(run_qspir(pc));
  }
}
BENCHMARK(BM_sample_frame)
    ->Args({3, 1})->Args({4, 1})->Args({6, 1})->Args({6, 8});

void BM_enumerate_frame(benchmark::State& state) {
  ProtocolConfig pc = config(int(state.range(0)), int(state.range(1)),
                             Backend::frame);
  pc.mode = Mode::enumerate_all;
  for (auto _ : state) benchmark::DoNotOptimize(run_qspir(pc));
}
BENCHMARK(BM_enumerate_frame)->Args({4, 1})->Args({5, 1})->Args({4, 2});

void BM_error_measure(benchmark::State& state) {
  const FamilyConfig fc{int(state.range(0)), 2, 1};
  for (auto _ : state) benchmark::DoNotOptimize(error_measure(fc));
}
BENCHMARK(BM_error_measure)->Arg(3)->Arg(4);

void BM_server_secrecy(benchmark::State& state) {
  const FamilyConfig fc{int(state.range(0)), 2, 1};
  for (auto _ : state) benchmark::DoNotOptimize(server_secrecy(fc));
}
BENCHMARK(BM_server_secrecy)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
