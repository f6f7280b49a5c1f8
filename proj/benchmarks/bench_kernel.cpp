#include <benchmark/benchmark.h>

#include "gsc/air.hpp"
#include "gsc/constellation.hpp"
#include "gsc/grad.hpp"
#include "gsc/shaping.hpp"

using namespace gsc;

namespace {

Constellation start(std::size_t M) {
  return normalize(generate({StartKind::Lattice, M, 1, 0}));
}

void kernel(benchmark::State& state, Metric metric, bool gradient) {
  const auto c = start(static_cast<std::size_t>(state.range(0)));
  const GhqGrid g(10, 2);
  const double s2 = AwgnChannel::from_snr_db(12).sigma_sq;
  std::uint64_t h = 0;
  for (auto _ : state) {
    const auto r = kernel_pass(c, s2, g, {metric, gradient, false});
    h = r.h_evaluations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["h_evals"] = static_cast<double>(h);
  state.counters["time_per_h"] =
      benchmark::Counter(static_cast<double>(h) * static_cast<double>(state.iterations()),
                         benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}

void BM_MiValue(benchmark::State& s) { kernel(s, Metric::MI, false); }
void BM_MiValueGrad(benchmark::State& s) { kernel(s, Metric::MI, true); }
void BM_GmiValue(benchmark::State& s) { kernel(s, Metric::GMI, false); }
void BM_GmiValueGrad(benchmark::State& s) { kernel(s, Metric::GMI, true); }

BENCHMARK(BM_MiValue)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MiValueGrad)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GmiValue)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GmiValueGrad)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

// Central differences need 2 * 2N * M value passes per gradient.
void BM_GmiFiniteDifference(benchmark::State& state) {
  const auto c = start(static_cast<std::size_t>(state.range(0)));
  const GhqGrid g(10, 2);
  const double s2 = AwgnChannel::from_snr_db(12).sigma_sq;
  for (auto _ : state) {
    const auto fd = fd_gradient(
        [&](std::span<const double> p) {
          return kernel_pass(p, c.labels(), 1, s2, g, {Metric::GMI, false, false}).value;
        },
        c.coords(), 1e-5);
    benchmark::DoNotOptimize(fd.data());
  }
}
BENCHMARK(BM_GmiFiniteDifference)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ComposedObjective(benchmark::State& state) {
  const auto c = start(static_cast<std::size_t>(state.range(0)));
  const ShapingObjective obj{Metric::GMI, AwgnChannel::from_snr_db(12), GhqGrid(10, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(obj(c).value);
}
BENCHMARK(BM_ComposedObjective)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// Stretch case: one GMI + gradient evaluation at M = 8192.
void BM_Gmi8192(benchmark::State& state) {
  const auto c = start(8192);
  const GhqGrid g(10, 2);
  const auto ch = AwgnChannel::from_snr_db(25);
  for (auto _ : state) benchmark::DoNotOptimize(gmi_gradient(c, ch, g).value);
}
BENCHMARK(BM_Gmi8192)->Iterations(1)->Unit(benchmark::kSecond);

}  // namespace
BENCHMARK_MAIN();
