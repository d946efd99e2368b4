#include <benchmark/benchmark.h>

#include "apcert/ap_engine.hpp"
#include "apcert/bounds.hpp"
#include "apcert/certificate.hpp"
#include "apcert/group.hpp"
#include "apcert/oracle.hpp"
#include "apcert/sdp.hpp"
#include "apcert/sym_reduce.hpp"

using namespace apcert;

static void BM_BuildSymmetric(benchmark::State& state) {
    int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_symmetric(m).order());
}
BENCHMARK(BM_BuildSymmetric)->Arg(5)->Arg(6);

static void BM_SymmetricProfile(benchmark::State& state) {
    int m = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(symmetric_group_order_profile(m).total());
}
BENCHMARK(BM_SymmetricProfile)->Arg(7)->Arg(8);

static void BM_EnumerateAps(benchmark::State& state) {
    FiniteGroup g = build_cyclic(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_aps(g, 3).size());
}
BENCHMARK(BM_EnumerateAps)->Arg(64)->Arg(256)->Arg(1024);

static void BM_TheoremBound(benchmark::State& state) {
    GroupFacts facts = group_facts("S8");
    for (auto _ : state) benchmark::DoNotOptimize(theorem1_bound(facts).get_d());
}
BENCHMARK(BM_TheoremBound);

static void BM_CertificateSweep(benchmark::State& state) {
    for (auto _ : state) {
        int checked = 0;
        for (int k = 5; k <= static_cast<int>(state.range(0)); ++k) {
            if (k % 2 == 0 || k % 3 == 0) continue;
            checked += verify_certificate(k).identity_holds;
        }
        benchmark::DoNotOptimize(checked);
    }
}
BENCHMARK(BM_CertificateSweep)->Arg(100)->Arg(500);

static void BM_OracleSearch(benchmark::State& state) {
    FiniteGroup g = build_cyclic(static_cast<int>(state.range(0)));
    ExactSearchOptions opts;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(exact_min(g, 3, opts).exact_min);
}
BENCHMARK(BM_OracleSearch)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_OrbitBasis(benchmark::State& state) {
    FiniteGroup g = build_cyclic(static_cast<int>(state.range(0)));
    SymmetryGenResult sym = symmetry_generators(g);
    for (auto _ : state) benchmark::DoNotOptimize(orbit_basis(sym.action).d);
}
BENCHMARK(BM_OrbitBasis)->Arg(31)->Arg(127)->Unit(benchmark::kMillisecond);

static void BM_SolveZ5Symmetric(benchmark::State& state) {
    SdpProblem problem = build_putinar_degree3(build_cyclic(5), PutinarMode::Symmetric);
    for (auto _ : state) benchmark::DoNotOptimize(solve_small(problem).objective);
}
BENCHMARK(BM_SolveZ5Symmetric)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
