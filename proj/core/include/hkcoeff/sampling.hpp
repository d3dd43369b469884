#pragma once

#include "hkcoeff/hecke.hpp"

#include <optional>

namespace hkcoeff {

/// splitmix64: fixed, portable generator; the seed fully determines every
/// sampled case.
struct Rng {
    u64 state;
    explicit Rng(u64 seed) : state(seed) {}
    u64 next() {
        state += 0x9e3779b97f4a7c15ull;
        u64 z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) { return n ? next() % n : 0; }
    bool coin() { return next() & 1; }
};

/// Random validated module over the full Hecke algebra with free carrier of
/// the given rank. Action matrices are assembled from random character data
/// and block solutions of the quadratic relation, then conjugated by a
/// random invertible matrix; nullopt if no candidate validates within the
/// given number of tries.
std::optional<HModule> random_hmodule(const GroupData& gd, RingZm ring, std::size_t rank,
                                      Rng& rng, int tries = 400);

/// Random validated module over a parahoric algebra H_F (or H_F^dagger).
std::optional<AlgebraModule> random_parahoric_module(const HeckeContext& ctx, FaceLabel face,
                                                     bool dagger, std::size_t rank, Rng& rng,
                                                     int tries = 400);

MatrixZm random_invertible(RingZm ring, std::size_t n, Rng& rng);

}  // namespace hkcoeff
