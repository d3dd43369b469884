#include "hkcoeff/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace hkcoeff {

namespace {

// A character of the torus quotient, stored by its values on the fixed
// generator list (empty when q = 2).
using Character = std::vector<u64>;

struct SampleSpace {
    const GroupData& gd;
    RingZm ring;
    std::vector<u64> roots_of_unity;  // mu_{q-1} inside (Z/m)^x

    explicit SampleSpace(const GroupData& g, RingZm r) : gd(g), ring(r) {
        for (u64 u = 1; u < ring.m; ++u) {
            if (!ring.is_unit(u)) continue;
            u64 x = 1;
            for (u64 e = 0; e < gd.q - 1; ++e) x = x * u % ring.m;
            if (x == 1 % ring.m) roots_of_unity.push_back(u);
        }
        if (roots_of_unity.empty()) roots_of_unity.push_back(1 % ring.m);
    }

    std::size_t nfac() const { return gd.torus_factors; }

    // evaluate a character on a torus element via discrete logs
    u64 eval(const Character& chi, const TorusElt& t) const {
        if (gd.q == 2) return 1 % ring.m;
        auto gens = gd.torus_generators();
        u64 base = gens[0][0];
        u64 out = 1 % ring.m;
        for (std::size_t f = 0; f < nfac(); ++f) {
            u64 e = 0, x = 1;
            while (x != t[f] % gd.q) { x = x * base % gd.q; ++e; }
            for (u64 k = 0; k < e; ++k) out = out * chi[f] % ring.m;
        }
        return out;
    }

    Character conj_char(const Character& chi) const {
        // chi composed with the s-conjugation: inversion, or swap for GL2
        if (gd.kind == GroupKind::GL2) return Character{chi[1], chi[0]};
        Character out = chi;
        for (auto& v : out) {
            // v has finite multiplicative order; find its inverse among roots
            for (u64 w : roots_of_unity)
                if (v * w % ring.m == 1 % ring.m) { v = w; break; }
        }
        return out;
    }

    Character random_char(Rng& rng) const {
        Character chi(nfac(), 1 % ring.m);
        for (auto& v : chi) v = roots_of_unity[rng.below(roots_of_unity.size())];
        return chi;
    }

    Character random_fixed_char(Rng& rng) const {
        std::vector<Character> fixed;
        std::vector<Character> all{Character(nfac(), 1 % ring.m)};
        // enumerate all characters and filter the s-fixed ones
        std::vector<std::size_t> idx(nfac(), 0);
        all.clear();
        while (true) {
            Character chi(nfac());
            for (std::size_t f = 0; f < nfac(); ++f) chi[f] = roots_of_unity[idx[f]];
            all.push_back(chi);
            std::size_t f = 0;
            while (f < nfac() && ++idx[f] == roots_of_unity.size()) idx[f++] = 0;
            if (f == nfac()) break;
        }
        for (const auto& chi : all)
            if (conj_char(chi) == chi) fixed.push_back(chi);
        return fixed[rng.below(fixed.size())];
    }
};

enum class BlockKind { Quadratic, Involution, Invertible };

// Enumerate solutions of the block equation on a 1x1 or 2x2 block with the
// given diagonal character data.
std::vector<MatrixZm> block_solutions(const SampleSpace& sp, BlockKind kindB,
                                      const std::vector<Character>& chis, bool off_diag_only) {
    const RingZm ring = sp.ring;
    const u64 m = ring.m;
    const std::size_t n = chis.size();
    std::vector<MatrixZm> out;

    // diagonal scalars entering the quadratic equation
    std::vector<u64> sigma(n), theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = sp.eval(chis[i], sp.gd.square[0]);
        u64 th = 0;
        for (const auto& cls : sp.gd.theta_classes[0]) th = (th + sp.eval(chis[i], cls)) % m;
        theta[i] = th;
    }
    u64 qv = sp.gd.q % m;

    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (off_diag_only && i == j) continue;
            slots.emplace_back(i, j);
        }
    std::vector<u64> vals(slots.size(), 0);
    while (true) {
        MatrixZm B(ring, n, n);
        for (std::size_t s = 0; s < slots.size(); ++s) B.at(slots[s].first, slots[s].second) = vals[s];
        bool ok = true;
        switch (kindB) {
            case BlockKind::Quadratic: {
                // B*B == q*S + Theta*B entrywise
                MatrixZm lhs = B.mul(B);
                MatrixZm rhs(ring, n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    rhs.at(i, i) = qv * sigma[i] % m;
                    for (std::size_t j = 0; j < n; ++j)
                        rhs.at(i, j) = (rhs.at(i, j) + theta[i] * B.at(i, j)) % m;
                }
                ok = lhs == rhs;
                break;
            }
            case BlockKind::Involution:
                ok = B.mul(B) == MatrixZm::identity(ring, n);
                break;
            case BlockKind::Invertible:
                ok = matrix_inverse(B).has_value();
                break;
        }
        if (ok) out.push_back(B);
        std::size_t s = 0;
        while (s < slots.size() && ++vals[s] == m) vals[s++] = 0;
        if (s == slots.size()) break;
    }
    return out;
}

struct BlockPlan {
    // partition of 0..rank-1 into singletons (s-fixed chi) and pairs
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<Character> chis;  // per coordinate
};

std::optional<BlockPlan> plan_characters(const SampleSpace& sp, std::size_t rank, Rng& rng) {
    BlockPlan plan;
    plan.chis.resize(rank);
    std::size_t i = 0;
    while (i < rank) {
        bool pair = (i + 1 < rank) && rng.coin();
        if (pair) {
            Character chi = sp.random_char(rng);
            plan.chis[i] = chi;
            plan.chis[i + 1] = sp.conj_char(chi);
            plan.blocks.push_back({i, i + 1});
            i += 2;
        } else {
            plan.chis[i] = sp.random_fixed_char(rng);
            plan.blocks.push_back({i});
            i += 1;
        }
    }
    return plan;
}

// sample a full matrix made of independent block solutions; characters of a
// pair block decide whether off-diagonal support is forced
std::optional<MatrixZm> sample_block_matrix(const SampleSpace& sp, BlockKind kindB,
                                            const BlockPlan& plan, std::size_t rank, Rng& rng) {
    MatrixZm A(sp.ring, rank, rank);
    for (const auto& blk : plan.blocks) {
        std::vector<Character> chis;
        for (auto i : blk) chis.push_back(plan.chis[i]);
        bool off_only = blk.size() == 2 && !(sp.conj_char(chis[0]) == chis[0]);
        auto sols = block_solutions(sp, kindB, chis, off_only);
        if (sols.empty()) return std::nullopt;
        const MatrixZm& B = sols[rng.below(sols.size())];
        for (std::size_t a = 0; a < blk.size(); ++a)
            for (std::size_t b = 0; b < blk.size(); ++b) A.at(blk[a], blk[b]) = B.at(a, b);
    }
    return A;
}

MatrixZm torus_matrix(const SampleSpace& sp, const BlockPlan& plan, const TorusElt& t,
                      std::size_t rank) {
    MatrixZm T(sp.ring, rank, rank);
    for (std::size_t i = 0; i < rank; ++i) T.at(i, i) = sp.eval(plan.chis[i], t);
    return T;
}

}  // namespace

MatrixZm random_invertible(RingZm ring, std::size_t n, Rng& rng) {
    while (true) {
        MatrixZm U(ring, n, n);
        for (auto& x : U.a) x = rng.below(ring.m);
        if (matrix_inverse(U)) return U;
    }
}

namespace {

// orbit closure of a random vector under the action matrices: a stable
// submodule, used to diversify carriers with quotient presentations
MatrixZm random_stable_submodule(const std::vector<MatrixZm>& actions, RingZm ring,
                                 std::size_t rank, Rng& rng) {
    std::vector<u64> v(rank);
    for (auto& x : v) x = rng.below(ring.m);
    MatrixZm span = howell_form(MatrixZm::from_rows(ring, {v}));
    while (true) {
        std::vector<std::vector<u64>> rows;
        for (std::size_t i = 0; i < span.rows; ++i) {
            rows.push_back(span.row(i));
            for (const auto& A : actions) rows.push_back(row_times_matrix(span.row(i), A));
        }
        MatrixZm next = howell_form(MatrixZm::from_rows(ring, rows));
        if (next == span) return span;
        span = std::move(next);
    }
}

}  // namespace

std::optional<HModule> random_hmodule(const GroupData& gd, RingZm ring, std::size_t rank,
                                      Rng& rng, int tries) {
    if (rank == 0) {
        HModule M;
        M.gd = gd;
        M.ring = ring;
        M.carrier = PresentedModule::zero(ring);
        M.act_s0 = M.act_s1 = MatrixZm(ring, 0, 0);
        if (gd.has_omega()) {
            M.act_omega = MatrixZm(ring, 0, 0);
            M.act_omega_inv = MatrixZm(ring, 0, 0);
        }
        for (std::size_t f = 0; f < gd.torus_generators().size(); ++f)
            M.act_torus_gen.push_back(MatrixZm(ring, 0, 0));
        return M;
    }
    SampleSpace sp(gd, ring);
    for (int t = 0; t < tries; ++t) {
        auto plan = plan_characters(sp, rank, rng);
        if (!plan) continue;
        auto A0 = sample_block_matrix(sp, BlockKind::Quadratic, *plan, rank, rng);
        if (!A0) continue;
        std::optional<MatrixZm> W, A1;
        if (gd.kind == GroupKind::SL2) {
            A1 = sample_block_matrix(sp, BlockKind::Quadratic, *plan, rank, rng);
            if (!A1) continue;
        } else {
            BlockKind wk = gd.kind == GroupKind::PGL2 ? BlockKind::Involution
                                                      : BlockKind::Invertible;
            W = sample_block_matrix(sp, wk, *plan, rank, rng);
            if (!W) continue;
            auto Winv = matrix_inverse(*W);
            if (!Winv) continue;
            // A0 W = W A1
            A1 = Winv->mul(A0->mul(*W));
        }
        std::vector<MatrixZm> torus;
        for (const auto& g : gd.torus_generators())
            torus.push_back(torus_matrix(sp, *plan, g, rank));

        // conjugate everything by a random invertible matrix
        MatrixZm U = random_invertible(ring, rank, rng);
        MatrixZm Uinv = *matrix_inverse(U);
        auto conj = [&](const MatrixZm& X) { return Uinv.mul(X).mul(U); };
        std::optional<MatrixZm> Wc;
        if (W) Wc = conj(*W);
        for (auto& T : torus) T = conj(T);

        PresentedModule carrier = PresentedModule::free_module(ring, rank);
        MatrixZm cA0 = conj(*A0), cA1 = conj(*A1);
        if (rng.below(3) == 0) {
            // quotient by a random stable submodule: non-free carriers
            std::vector<MatrixZm> acts{cA0, cA1};
            for (const auto& T : torus) acts.push_back(T);
            if (Wc) acts.push_back(*Wc);
            MatrixZm sub = random_stable_submodule(acts, ring, rank, rng);
            PresentedModule quot(ring, rank, sub);
            if (!quot.is_zero_module()) carrier = quot;
        }
        auto [mod, rep] = make_hmodule(gd, ring, carrier, cA0, cA1, torus, Wc);
        if (mod) return mod;
    }
    return std::nullopt;
}

std::optional<AlgebraModule> random_parahoric_module(const HeckeContext& ctx, FaceLabel face,
                                                     bool dagger, std::size_t rank, Rng& rng,
                                                     int tries) {
    const GroupData& gd = ctx.gd;
    const RingZm ring = ctx.ring;
    auto alg = std::make_shared<FiniteAlgebra>(parahoric_algebra(ctx, face, dagger));
    if (rank == 0) {
        AlgebraModule M;
        M.algebra = alg;
        M.carrier = PresentedModule::zero(ring);
        M.action.assign(alg->rank(), MatrixZm(ring, 0, 0));
        return M;
    }
    SampleSpace sp(gd, ring);
    const bool vertex = face != FaceLabel::C;
    const bool need_w = dagger && gd.kind == GroupKind::PGL2 && face == FaceLabel::C;
    for (int t = 0; t < tries; ++t) {
        auto plan = plan_characters(sp, rank, rng);
        if (!plan) continue;
        std::optional<MatrixZm> A, W;
        if (vertex) {
            A = sample_block_matrix(sp, BlockKind::Quadratic, *plan, rank, rng);
            if (!A) continue;
        }
        if (need_w) {
            W = sample_block_matrix(sp, BlockKind::Involution, *plan, rank, rng);
            if (!W) continue;
        }
        MatrixZm U = random_invertible(ring, rank, rng);
        MatrixZm Uinv = *matrix_inverse(U);
        auto conj = [&](const MatrixZm& X) { return Uinv.mul(X).mul(U); };

        // assemble the action of each basis element t * (n_i?) * omega^e
        AlgebraModule M;
        M.algebra = alg;
        M.carrier = PresentedModule::free_module(ring, rank);
        bool bad = false;
        for (const auto& w : alg->basis) {
            MatrixZm mat(ring, rank, rank);
            // torus part
            mat = torus_matrix(sp, *plan, w.torus, rank);
            if (w.word.len > 1) { bad = true; break; }
            if (w.word.len == 1) mat = A->mul(mat);
            if (w.omega != 0) {
                if (!W) { bad = true; break; }
                i64 e = ((w.omega % 2) + 2) % 2;
                for (i64 k = 0; k < e; ++k) mat = W->mul(mat);
            }
            M.action.push_back(conj(mat));
        }
        if (bad) continue;
        if (rng.below(3) == 0) {
            MatrixZm sub = random_stable_submodule(M.action, ring, rank, rng);
            PresentedModule quot(ring, rank, sub);
            if (!quot.is_zero_module()) M.carrier = quot;
        }
        if (M.validate().ok) return M;
    }
    return std::nullopt;
}

}  // namespace hkcoeff
