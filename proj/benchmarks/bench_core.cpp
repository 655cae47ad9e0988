#include <benchmark/benchmark.h>

#include <memory>

#include "ghznet/adversary.hpp"
#include "ghznet/bellcert.hpp"
#include "ghznet/protocols.hpp"
#include "ghznet/qstate.hpp"

using namespace ghznet;

namespace {

void BM_ApplyPauli(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  QuantumRegister reg = ghz_state(n, Sign::plus);
  int q = 1;
  for (auto _ : state) {
    reg = apply_pauli(reg, q, Pauli::Z);
    q = q % n + 1;
    benchmark::DoNotOptimize(reg);
  }
}
BENCHMARK(BM_ApplyPauli)->Arg(5)->Arg(9)->Arg(11);

void BM_MeasureAllX(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuantumRegister reg = ghz_state(n, Sign::plus);
  std::vector<int> all;
  for (int q = 1; q <= n; ++q) all.push_back(q);
  SplitMix64 rng(1);
  for (auto _ : state) {
    MeasurementResult m = measure_basis(reg, all, MeasureBasis::X, rng);
    benchmark::DoNotOptimize(m.outcome.bits);
  }
}
BENCHMARK(BM_MeasureAllX)->Arg(5)->Arg(9);

void BM_BellExpectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BellOperator op = build_bell_operator(n);
  const QuantumRegister reg = ghz_state(n, Sign::plus);
  for (auto _ : state) benchmark::DoNotOptimize(expectation(op, reg));
}
BENCHMARK(BM_BellExpectation)->Arg(5)->Arg(9);

void BM_Spectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BellOperator op = build_bell_operator(n);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(op).eigenvalues.size());
}
BENCHMARK(BM_Spectrum)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_LrMax(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lr_max(n).max_value);
}
BENCHMARK(BM_LrMax)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_ParityRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NetworkConfig cfg;
  cfg.n = n;
  cfg.security_parameter = 3;
  cfg.source = std::make_shared<IdealGhzSource>(n);
  const std::vector<int> inputs(static_cast<std::size_t>(n), 1);
  SplitMix64 rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(run_parity(cfg, inputs, {}, rng).y);
}
BENCHMARK(BM_ParityRun)->Arg(5)->Arg(9);

void BM_AegPipeline(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.n = 5;
  cfg.security_parameter = 3;
  cfg.source = std::make_shared<IdealGhzSource>(5);
  AegOptions options;
  options.max_repetitions = 64;
  SplitMix64 rng(3);
  for (auto _ : state) {
    const NotificationResult notif = run_notification(cfg, AgentId{2}, AgentId{4}, rng);
    benchmark::DoNotOptimize(notif.beliefs);
    const AegResult r = run_aeg(cfg, AgentId{2}, AgentId{4}, options, rng);
    benchmark::DoNotOptimize(r.status);
  }
}
BENCHMARK(BM_AegPipeline)->Unit(benchmark::kMicrosecond);

void BM_SelfTest(benchmark::State& state) {
  const IdealGhzSource source(5);
  SplitMix64 rng(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(self_test(source, 5, 1000, 0.5, rng).estimate);
}
BENCHMARK(BM_SelfTest)->Unit(benchmark::kMicrosecond);

void BM_GuessAttack(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const NoiseSpec spec = NoiseSpec::from_delta(5, 0.04, junk_mid_eigenspace(5));
  std::vector<int> honest;
  for (int i = 1; i <= k; ++i) honest.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(sender_guess_attack(5, spec, honest).pgm_success);
}
BENCHMARK(BM_GuessAttack)->Arg(2)->Arg(5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
