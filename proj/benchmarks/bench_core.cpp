#include "hkcoeff/chains.hpp"
#include "hkcoeff/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace hkcoeff;

namespace {

MatrixZm random_mat(Rng& rng, RingZm r, std::size_t n) {
    MatrixZm A(r, n, n);
    for (auto& x : A.a) x = rng.below(r.m);
    return A;
}

void BM_howell(benchmark::State& state) {
    RingZm r(9);
    Rng rng(1);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    MatrixZm A = random_mat(rng, r, n);
    for (auto _ : state) benchmark::DoNotOptimize(howell_form(A));
}
BENCHMARK(BM_howell)->Arg(16)->Arg(64);

void BM_tau_multiply(benchmark::State& state) {
    auto gd = make_group_data(GroupKind::PGL2, 3);
    HeckeContext ctx(gd, RingZm(9));
    auto all = gd.elements_up_to(6);
    Rng rng(2);
    auto a = ctx.tau(all[rng.below(all.size())]);
    auto b = ctx.tau(all[rng.below(all.size())]);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.tau_multiply(a, b));
}
BENCHMARK(BM_tau_multiply);

void BM_t_functor(benchmark::State& state) {
    auto gd = make_group_data(GroupKind::SL2, 3);
    RingZm r(9);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    HeckeContext ctx(gd, r);
    Rng rng(3);
    auto M = random_parahoric_module(ctx, FaceLabel::x0, false, 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(t_functor(pd, *M));
}
BENCHMARK(BM_t_functor);

void BM_tree_boundary(benchmark::State& state) {
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(4);
    Rng rng(4);
    auto M = random_hmodule(gd, r, 2, rng);
    ModuleDiagram md = diagram_from_hecke_module(*M);
    auto region = build_region(RegionKind::Tree, gd, static_cast<std::size_t>(state.range(0)));
    CoeffSystem csys = spread(md.dia, region);
    for (auto _ : state) {
        ChainComplex cc = chain_complex(csys);
        benchmark::DoNotOptimize(boundary_injective(csys, cc));
    }
}
BENCHMARK(BM_tree_boundary)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
