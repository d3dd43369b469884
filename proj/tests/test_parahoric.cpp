#include "doctest.h"

#include "hkcoeff/parahoric.hpp"
#include "hkcoeff/sampling.hpp"

using namespace hkcoeff;

TEST_CASE("finite quotients: orders and subgroups") {
    SUBCASE("SL2 q=2 at x0: order 6, pro-p image of order 2") {
        auto q = finite_quotient(make_group_data(GroupKind::SL2, 2), FaceLabel::x0, false);
        CHECK(q->size() == 6);
        CHECK(q->subgroup(SubgroupTag::ProP).size() == 2);
        CHECK(q->subgroup(SubgroupTag::Iwahori).size() == 2);  // Borel = U for q = 2
        CHECK(q->subgroup(SubgroupTag::OppUnipotent).size() == 2);
    }
    SUBCASE("SL2 q=2 at C: trivial group") {
        auto q = finite_quotient(make_group_data(GroupKind::SL2, 2), FaceLabel::C, false);
        CHECK(q->size() == 1);
    }
    SUBCASE("SL2 q=3 at x1: order 24, pro-p image = lower unipotent of order 3") {
        auto q = finite_quotient(make_group_data(GroupKind::SL2, 3), FaceLabel::x1, false);
        CHECK(q->size() == 24);
        auto u = q->subgroup(SubgroupTag::ProP);
        CHECK(u.size() == 3);
        for (auto id : u) {
            CHECK(q->mats[id][1] == 0);  // lower triangular in the x1 chart
        }
        CHECK(q->subgroup(SubgroupTag::Iwahori).size() == 6);  // lower Borel
    }
    SUBCASE("PGL2 q=3 at x0: order 24") {
        auto q = finite_quotient(make_group_data(GroupKind::PGL2, 3), FaceLabel::x0, false);
        CHECK(q->size() == 24);
        CHECK(q->subgroup(SubgroupTag::ProP).size() == 3);
    }
    SUBCASE("GL2 q=3 at x0: order 48") {
        auto q = finite_quotient(make_group_data(GroupKind::GL2, 3), FaceLabel::x0, false);
        CHECK(q->size() == 48);
    }
    SUBCASE("PGL2 dagger at C: torus extended by omega") {
        auto q = finite_quotient(make_group_data(GroupKind::PGL2, 3), FaceLabel::C, true);
        CHECK(q->size() == 4);  // Z/2 torus x omega
    }
}

TEST_CASE("universal representation and Frobenius reciprocity") {
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2, GroupKind::GL2}) {
        for (u64 qv : {2ull, 3ull}) {
            auto gd = make_group_data(kind, qv);
            for (u64 m : {4ull, 9ull}) {
                RingZm ring(m);
                for (auto f : {FaceLabel::x0, FaceLabel::x1, FaceLabel::C}) {
                    auto pd = make_parahoric_data(gd, ring, f, false);
                    CHECK(pd.X.validate().ok);
                    // rank of X and of its invariants
                    if (f != FaceLabel::C) {
                        u64 expected = pd.quo->size() / qv;
                        CHECK(pd.X.carrier.ambient == expected);
                    } else {
                        CHECK(pd.X.carrier.ambient == gd.torus_order());
                    }
                    // invariants(X_F) is the regular module of H_F: this is
                    // the executable certificate that the abstract structure
                    // constants match the double-coset convolution algebra
                    auto inv = invariants_module(pd, pd.X);
                    CHECK(inv.module.carrier.invariant_factors() ==
                          std::vector<u64>(pd.alg->rank(), m));
                    auto reg = regular_module(pd.alg);
                    // explicit Frobenius-reciprocity map: b -> [U'] * b
                    MatrixZm C(ring, pd.alg->rank(), inv.module.carrier.ambient);
                    for (std::size_t b = 0; b < pd.alg->rank(); ++b) {
                        std::vector<u64> e(pd.X.carrier.ambient, 0);
                        e[pd.unit_coset] = 1 % m;
                        auto v = row_times_matrix(e, pd.X_right[b]);
                        auto sol = solve_mod(inv.generators, pd.X.carrier.relations, v);
                        REQUIRE(sol.has_value());
                        C.set_row(b, *sol);
                    }
                    ModuleMap can(reg.carrier, inv.module.carrier, C);
                    CHECK(can.bijective());
                    for (std::size_t b = 0; b < pd.alg->rank(); ++b) {
                        ModuleMap lhs(reg.carrier, inv.module.carrier, reg.action[b].mul(C));
                        ModuleMap rhs(reg.carrier, inv.module.carrier,
                                      C.mul(inv.module.action[b]));
                        CHECK(lhs.equals(rhs));
                    }
                }
            }
        }
    }
}

TEST_CASE("fixed examples for X_F ranks") {
    auto gd2 = make_group_data(GroupKind::SL2, 2);
    auto pd = make_parahoric_data(gd2, RingZm(2), FaceLabel::x0, false);
    CHECK(pd.X.carrier.ambient == 3);
    auto inv = invariants(pd.X, SubgroupTag::ProP);
    CHECK(inv.module.size() == 4);  // rank 2 over Z/2

    auto gd3 = make_group_data(GroupKind::SL2, 3);
    auto pd3 = make_parahoric_data(gd3, RingZm(9), FaceLabel::x0, false);
    CHECK(pd3.X.carrier.ambient == 8);  // (q+1)(q-1)
    auto inv3 = invariants_module(pd3, pd3.X);
    CHECK(inv3.module.carrier.invariant_factors() == std::vector<u64>{9, 9, 9, 9});
}

TEST_CASE("invariants: trivial representation and U-orbit counting") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    auto pd = make_parahoric_data(gd, RingZm(2), FaceLabel::x0, false);
    auto triv = trivial_rep(pd.quo, RingZm(2));
    auto inv = invariants(triv, SubgroupTag::ProP);
    CHECK(inv.module.size() == 2);  // the whole carrier
    // invariants of X under the opposite unipotent: rank 2 (orbit count)
    auto invu = invariants(pd.X, SubgroupTag::OppUnipotent);
    CHECK(invu.module.size() == 4);
}

TEST_CASE("condition (H): fixed cases") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(2);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    SUBCASE("X_F satisfies (H)") {
        CHECK(check_condition_H(pd, pd.X).holds);
    }
    SUBCASE("the trivial representation satisfies (H)") {
        CHECK(check_condition_H(pd, trivial_rep(pd.quo, r)).holds);
    }
    SUBCASE("X / constants over Z/2: decided by the generation test") {
        // quotient of X_{x0} by the constant line
        std::vector<u64> ones(pd.X.carrier.ambient, 1);
        MatrixZm rel = MatrixZm::from_rows(r, {ones});
        FiniteRep Vq = pd.X;
        Vq.carrier = PresentedModule(r, pd.X.carrier.ambient, rel);
        REQUIRE(Vq.validate().ok);
        auto rep = check_condition_H(pd, Vq);
        // oracle: enumerate invariant generation directly; the quotient is
        // generated by its U-invariants, and so is its dual (checked by the
        // same machinery on an explicitly computed dual representation)
        CHECK(rep.holds == (rep.rep_generated && rep.dual_generated));
        CHECK(rep.rep_generated);
    }
}

TEST_CASE("t_functor: free module recovers X_F and zero maps to zero") {
    for (u64 m : {2ull, 9ull}) {
        RingZm ring(m);
        auto gd = make_group_data(GroupKind::SL2, m == 2 ? 2 : 3);
        auto pd = make_parahoric_data(gd, ring, FaceLabel::x0, false);
        SUBCASE("t_F(H_F) = X_F") {
            auto reg = regular_module(pd.alg);
            auto tf = t_functor(pd, reg);
            CHECK(tf.rep.carrier.size() == pd.X.carrier.size());
            CHECK(check_condition_H(pd, tf.rep).holds);
        }
        SUBCASE("t_F(0) = 0") {
            AlgebraModule zero;
            zero.algebra = pd.alg;
            zero.carrier = PresentedModule::zero(ring);
            zero.action.assign(pd.alg->rank(), MatrixZm(ring, 0, 0));
            auto tf = t_functor(pd, zero);
            CHECK(tf.rep.carrier.size() == 1);
        }
    }
}

TEST_CASE("Cabanes round trip on random modules") {
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2}) {
        for (u64 qv : {2ull, 3ull}) {
            auto gd = make_group_data(kind, qv);
            for (u64 m : {2ull, 4ull, 3ull, 9ull}) {
                RingZm ring(m);
                HeckeContext ctx(gd, ring);
                for (auto f : {FaceLabel::x0, FaceLabel::C}) {
                    auto pd = make_parahoric_data(gd, ring, f, false);
                    Rng rng(7000 + static_cast<u64>(kind) + qv * 3 + m * 7);
                    for (int i = 0; i < 4; ++i) {
                        auto M = random_parahoric_module(ctx, f, false, 1 + rng.below(2), rng);
                        REQUIRE(M.has_value());
                        CHECK(cabanes_roundtrip(pd, *M));
                        auto tf = t_functor(pd, *M);
                        CHECK(check_condition_H(pd, tf.rep).holds);
                    }
                }
            }
        }
    }
}

TEST_CASE("frobenius matrices are invertible") {
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2, GroupKind::GL2}) {
        for (u64 qv : {2ull, 3ull}) {
            auto gd = make_group_data(kind, qv);
            for (u64 m : {2ull, 4ull, 3ull, 9ull}) {
                HeckeContext ctx(gd, RingZm(m));
                for (auto f : {FaceLabel::x0, FaceLabel::x1, FaceLabel::C}) {
                    auto fm = frobenius_matrix(ctx, f);
                    CHECK(fm.invertible);
                }
            }
        }
    }
}

TEST_CASE("induction from the chamber to a vertex") {
    SUBCASE("trivial rank one at q=2 gives the rank-3 permutation module") {
        auto gd = make_group_data(GroupKind::SL2, 2);
        RingZm r(4);
        auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
        auto quoC = finite_quotient(gd, FaceLabel::C, false);
        auto ind = induce_rep(pd, trivial_rep(quoC, r));
        CHECK(ind.carrier.ambient == 3);
        CHECK(ind.validate().ok);
        CHECK(check_condition_H(pd, ind).holds);
        // equals X_{x0} as a representation: same carrier size and (H)
        CHECK(ind.carrier.size() == pd.X.carrier.size());
    }
    SUBCASE("inducing X_C at q=3 gives X_{x0} of rank 8") {
        auto gd = make_group_data(GroupKind::SL2, 3);
        RingZm r(9);
        auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
        auto pdC = make_parahoric_data(gd, r, FaceLabel::C, false);
        auto ind = induce_rep(pd, pdC.X);
        CHECK(ind.carrier.ambient == 8);
        CHECK(ind.validate().ok);
    }
    SUBCASE("inducing the zero representation gives zero") {
        auto gd = make_group_data(GroupKind::SL2, 2);
        RingZm r(4);
        auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
        auto quoC = finite_quotient(gd, FaceLabel::C, false);
        FiniteRep zero;
        zero.quo = quoC;
        zero.ring = r;
        zero.carrier = PresentedModule::zero(r);
        zero.action.assign(quoC->size(), MatrixZm(r, 0, 0));
        auto ind = induce_rep(pd, zero);
        CHECK(ind.carrier.size() == 1);
    }
}

TEST_CASE("base change preserves validated structure") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    auto pd4 = make_parahoric_data(gd, RingZm(4), FaceLabel::x0, false);
    auto v2 = change_ring(pd4.X, RingZm(2));
    CHECK(v2.validate().ok);
    auto pd2 = make_parahoric_data(gd, RingZm(2), FaceLabel::x0, false);
    CHECK(check_condition_H(pd2, v2).holds);
    CHECK_THROWS(change_ring(pd4.X, RingZm(3)));
}

TEST_CASE("nonzero p-group representations have nonzero invariants") {
    auto gd = make_group_data(GroupKind::SL2, 3);
    RingZm r(9);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    auto uprime = pd.quo->subgroup(SubgroupTag::ProP);
    Rng rng(4242);
    for (int i = 0; i < 20; ++i) {
        // random subrepresentation of the permutation module, generated by a
        // random vector's orbit
        std::vector<u64> v(pd.X.carrier.ambient);
        for (auto& x : v) x = rng.below(r.m);
        std::vector<std::vector<u64>> orbit;
        for (std::size_t g = 0; g < pd.quo->size(); ++g)
            orbit.push_back(row_times_matrix(v, pd.X.action[g]));
        MatrixZm span = howell_form(MatrixZm::from_rows(r, orbit));
        if (span.rows == 0) continue;
        // restrict the action to the subrepresentation via its generators
        FiniteRep sub;
        sub.quo = pd.quo;
        sub.ring = r;
        sub.carrier = PresentedModule(r, span.rows, kernel_mod(span, MatrixZm(r, 0, span.cols)));
        for (std::size_t g = 0; g < pd.quo->size(); ++g) {
            MatrixZm mat(r, span.rows, span.rows);
            for (std::size_t k = 0; k < span.rows; ++k) {
                auto img = row_times_matrix(span.row(k), pd.X.action[g]);
                auto sol = solve_linear(span, img);
                REQUIRE(sol.has_value());
                mat.set_row(k, sol->particular);
            }
            sub.action.push_back(std::move(mat));
        }
        auto inv = invariants(sub, uprime);
        CHECK(inv.module.size() > 1);
    }
}

TEST_CASE("group-ring action rule: tau_omega acts as omega on invariants") {
    auto gd = make_group_data(GroupKind::PGL2, 3);
    RingZm r(9);
    auto pd = make_parahoric_data(gd, r, FaceLabel::C, true);
    // on X_C^dagger, the action of tau_omega on invariants (= everything,
    // the pro-p image is trivial) is the omega group action
    auto inv = invariants_module(pd, pd.X);
    std::size_t om_idx = pd.alg->index.at(gd.omega_elt(1));
    std::size_t om_gid = pd.quo->from_weyl(gd.omega_elt(1));
    // generators of the fixed space are the full basis here
    CHECK(inv.generators.rows == pd.X.carrier.ambient);
    MatrixZm lhs = inv.module.action[om_idx];
    // conjugate the group action into the generator coordinates
    MatrixZm expect(r, inv.generators.rows, inv.generators.rows);
    for (std::size_t k = 0; k < inv.generators.rows; ++k) {
        auto img = row_times_matrix(inv.generators.row(k), pd.X.action[om_gid]);
        auto sol = solve_linear(inv.generators, img);
        REQUIRE(sol.has_value());
        expect.set_row(k, sol->particular);
    }
    CHECK(lhs == expect);
}

TEST_CASE("vertex invariants decompose as V^U + Jbar V^U") {
    // finite form of the invariants identity at the vertex level
    for (u64 qv : {2ull, 3ull}) {
        auto gd = make_group_data(GroupKind::SL2, qv);
        RingZm r(qv == 2 ? 4 : 9);
        auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
        for (const FiniteRep& V : {pd.X}) {
            if (!check_condition_H(pd, V).holds) continue;
            auto uprime = pd.quo->subgroup(SubgroupTag::ProP);
            auto ubar = pd.quo->subgroup(SubgroupTag::OppUnipotent);
            InvariantSpace inv = invariants(V, uprime);
            // Jbar * V^U: spans of (ubar - 1) v for invariants v
            std::vector<std::vector<u64>> jbar;
            for (std::size_t k = 0; k < inv.generators.rows; ++k)
                for (auto u : ubar) {
                    auto moved = row_times_matrix(inv.generators.row(k), V.action[u]);
                    for (std::size_t j = 0; j < moved.size(); ++j)
                        moved[j] = (moved[j] + r.m - inv.generators.at(k, j)) % r.m;
                    jbar.push_back(moved);
                }
            MatrixZm J = jbar.empty() ? MatrixZm(r, 0, V.carrier.ambient)
                                      : howell_form(MatrixZm::from_rows(r, jbar));
            // sum spans everything
            MatrixZm total = howell_form(inv.generators.vstack(J).vstack(V.carrier.relations));
            CHECK(total == MatrixZm::identity(r, V.carrier.ambient));
            // intersection is zero: solve x*inv = y*J
            MatrixZm stacked = inv.generators.vstack(J.scale(r.m - 1));
            MatrixZm ker = left_kernel(stacked);
            for (std::size_t i = 0; i < ker.rows; ++i) {
                std::vector<u64> xpart(inv.generators.rows);
                for (std::size_t j = 0; j < xpart.size(); ++j) xpart[j] = ker.at(i, j);
                auto vec = row_times_matrix(xpart, inv.generators);
                CHECK(V.carrier.is_zero_element(vec));
            }
        }
    }
}

TEST_CASE("Hom_{H_x}(X_x, H_x) against the brute-force oracle") {
    // SL2, q=2, R=Z/2: enumerate all 3x2 matrices over F_2 that intertwine
    // the right actions; the solution module is free of rank 3
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(2);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    REQUIRE(pd.X.carrier.ambient == 3);
    REQUIRE(pd.alg->rank() == 2);
    std::vector<std::pair<MatrixZm, MatrixZm>> pairs;
    for (std::size_t b = 0; b < pd.alg->rank(); ++b)
        pairs.emplace_back(pd.X_right[b], pd.alg->right_regular(b));
    HomSpace D = hom_space(PresentedModule::free_module(r, 3),
                           PresentedModule::free_module(r, 2), pairs);
    // brute force over all 64 candidate matrices
    u64 count = 0;
    for (u64 bits = 0; bits < 64; ++bits) {
        MatrixZm F(r, 3, 2);
        for (std::size_t k = 0; k < 6; ++k) F.a[k] = (bits >> k) & 1;
        bool ok = true;
        for (const auto& [A, B] : pairs)
            if (!(A.mul(F) == F.mul(B))) ok = false;
        count += ok;
    }
    CHECK(count == D.presentation.size());
    CHECK(D.presentation.invariant_factors() == std::vector<u64>{2, 2, 2});
}

TEST_CASE("injectivity and surjectivity transfer between reps and invariants") {
    // morphisms of condition-(H) representations are injective/surjective
    // exactly when their invariant parts are
    auto gd = make_group_data(GroupKind::SL2, 3);
    RingZm r(9);
    HeckeContext ctx(gd, r);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        auto M = random_parahoric_module(ctx, FaceLabel::x0, false, 1 + rng.below(2), rng);
        auto N = random_parahoric_module(ctx, FaceLabel::x0, false, 1 + rng.below(2), rng);
        REQUIRE(M.has_value());
        REQUIRE(N.has_value());
        HomSpace hom = algebra_hom(*M, *N);
        if (hom.generators.empty()) continue;
        std::vector<u64> coeffs(hom.generators.size());
        for (auto& c : coeffs) c = rng.below(9);
        MatrixZm phi = hom.combination(coeffs);
        ModuleMap f_inv(M->carrier, N->carrier, phi);
        TFunctorResult tm = t_functor(pd, *M), tn = t_functor(pd, *N);
        // induced map on the image representations: id_X (x) phi in tensor
        // coordinates, then through the carrier minimizations
        const std::size_t nX = pd.X.carrier.ambient;
        MatrixZm big(r, nX * M->carrier.ambient, nX * N->carrier.ambient);
        for (std::size_t i = 0; i < nX; ++i)
            for (std::size_t j = 0; j < M->carrier.ambient; ++j)
                for (std::size_t l = 0; l < N->carrier.ambient; ++l)
                    big.at(i * M->carrier.ambient + j, i * N->carrier.ambient + l) =
                        phi.at(j, l);
        ModuleMap f(tm.rep.carrier, tn.rep.carrier, tm.from_min.mul(big).mul(tn.to_min));
        REQUIRE(f.well_defined());
        CHECK(f.injective() == f_inv.injective());
        CHECK(f.surjective() == f_inv.surjective());
    }
}

TEST_CASE("subrepresentation generated by a submodule of invariants") {
    // the subrepresentation generated by N <= V^I satisfies (H) and has
    // invariants exactly N
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(4);
    auto pd = make_parahoric_data(gd, r, FaceLabel::x0, false);
    const FiniteRep& V = pd.X;
    InvariantsModule inv = invariants_module(pd, V);
    Rng rng(555);
    for (int trial = 0; trial < 8; ++trial) {
        // random submodule of the invariants: orbit-closure of random vectors
        std::vector<std::vector<u64>> gens;
        for (int k = 0; k < 2; ++k) {
            std::vector<u64> c(inv.module.carrier.ambient);
            for (auto& x : c) x = rng.below(4);
            // close under the algebra action
            for (std::size_t b = 0; b < pd.alg->rank(); ++b)
                gens.push_back(row_times_matrix(c, inv.module.action[b]));
            gens.push_back(c);
        }
        // express inside the carrier of V
        std::vector<std::vector<u64>> carrier_gens;
        for (const auto& g : gens) carrier_gens.push_back(row_times_matrix(g, inv.generators));
        MatrixZm NG = howell_form(MatrixZm::from_rows(r, carrier_gens));
        if (NG.rows == 0) continue;
        // generated subrepresentation inside V
        std::vector<std::vector<u64>> orbit;
        for (std::size_t i = 0; i < NG.rows; ++i)
            for (std::size_t g = 0; g < pd.quo->size(); ++g)
                orbit.push_back(row_times_matrix(NG.row(i), V.action[g]));
        MatrixZm span = howell_form(MatrixZm::from_rows(r, orbit));
        // restrict the action to the subrepresentation
        FiniteRep sub;
        sub.quo = pd.quo;
        sub.ring = r;
        sub.carrier = PresentedModule(r, span.rows, kernel_mod(span, V.carrier.relations));
        bool ok = true;
        for (std::size_t g = 0; g < pd.quo->size(); ++g) {
            MatrixZm mat(r, span.rows, span.rows);
            for (std::size_t k = 0; k < span.rows; ++k) {
                auto img = row_times_matrix(span.row(k), V.action[g]);
                auto sol = solve_mod(span, V.carrier.relations, img);
                REQUIRE(sol.has_value());
                mat.set_row(k, *sol);
            }
            sub.action.push_back(std::move(mat));
        }
        REQUIRE(ok);
        CHECK(check_condition_H(pd, sub).holds);
        // invariants of the subrepresentation = N: compare sizes inside V
        InvariantsModule sub_inv = invariants_module(pd, sub);
        // push the sub-invariants back into carrier coordinates of V
        std::vector<std::vector<u64>> sub_inv_in_v;
        for (std::size_t i = 0; i < sub_inv.generators.rows; ++i)
            sub_inv_in_v.push_back(
                row_times_matrix(sub_inv.generators.row(i), span));
        for (std::size_t i = 0; i < V.carrier.relations.rows; ++i)
            sub_inv_in_v.push_back(V.carrier.relations.row(i));
        for (std::size_t i = 0; i < NG.rows; ++i) {
            // N is contained in the sub-invariants
            CHECK(in_span(howell_form(MatrixZm::from_rows(r, sub_inv_in_v)), NG.row(i)));
        }
        // and conversely: each sub-invariant lies in N + relations
        std::vector<std::vector<u64>> n_plus_rel;
        for (std::size_t i = 0; i < NG.rows; ++i) n_plus_rel.push_back(NG.row(i));
        for (std::size_t i = 0; i < V.carrier.relations.rows; ++i)
            n_plus_rel.push_back(V.carrier.relations.row(i));
        MatrixZm nspan = howell_form(MatrixZm::from_rows(r, n_plus_rel));
        for (std::size_t i = 0; i < sub_inv.generators.rows; ++i)
            CHECK(in_span(nspan, row_times_matrix(sub_inv.generators.row(i), span)));
    }
}

TEST_CASE("dagger and plain orbits of the invariants coincide") {
    // with an omega action present, the dagger orbit of the invariants spans
    // no more than the parahoric orbit
    auto gd = make_group_data(GroupKind::PGL2, 3);
    RingZm r(9);
    auto pd = make_parahoric_data(gd, r, FaceLabel::C, true);
    const FiniteRep& V = pd.X;  // regular representation of the dagger group
    InvariantSpace inv = invariants(V, SubgroupTag::ProP);
    auto orbit_span = [&](const std::vector<std::size_t>& elts) {
        std::vector<std::vector<u64>> rows;
        for (std::size_t i = 0; i < inv.generators.rows; ++i)
            for (auto g : elts) rows.push_back(row_times_matrix(inv.generators.row(i), V.action[g]));
        return howell_form(MatrixZm::from_rows(r, rows));
    };
    std::vector<std::size_t> plain = V.quo->subgroup(SubgroupTag::Iwahori);
    std::vector<std::size_t> all(V.quo->size());
    for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
    CHECK(orbit_span(plain) == orbit_span(all));
}
