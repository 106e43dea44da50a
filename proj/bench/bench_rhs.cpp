#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include <omp.h>

#include "relaxrk/problems.hpp"

namespace {

struct Case {
  std::unique_ptr<relaxrk::euler::EulerSystemBase> sys;
  std::vector<double> u;
  std::vector<double> du;
};

Case make_case(const std::string& name, std::size_t N) {
  const relaxrk::ProblemSpec spec = relaxrk::make_problem(name);
  Case c;
  c.sys = relaxrk::make_euler_system(spec, 3, N, relaxrk::euler::InterfaceMode::es_rusanov);
  c.u = relaxrk::initial_state(spec, *c.sys);
  c.du.assign(c.u.size(), 0.0);
  return c;
}

// range(0): elements per direction, range(1): threads (0 = face-based reference)
void run(benchmark::State& state, const std::string& name) {
  Case c = make_case(name, static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  if (threads > 0) omp_set_num_threads(threads);
  for (auto _ : state) {
    if (threads == 0) {
      c.sys->rhs_reference(0.0, c.u, c.du);
    } else {
      c.sys->rhs(0.0, c.u, c.du);
    }
    benchmark::DoNotOptimize(c.du.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(c.u.size()));
}

void BM_sod(benchmark::State& state) { run(state, "sod"); }
void BM_vortex(benchmark::State& state) { run(state, "isentropic_vortex"); }

void thread_args(benchmark::internal::Benchmark* b, long long N) {
  const int max_threads = omp_get_max_threads();
  b->Args({N, 0});
  for (int t = 1; t <= max_threads; t *= 2) b->Args({N, t});
  b->ArgNames({"N", "threads"});
  b->UseRealTime();
}

}  // namespace

BENCHMARK(BM_sod)->Apply([](auto* b) { thread_args(b, 1024); });
BENCHMARK(BM_vortex)->Apply([](auto* b) { thread_args(b, 32); });

BENCHMARK_MAIN();
