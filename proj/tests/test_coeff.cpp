#include "doctest.h"

#include "hkcoeff/coeff.hpp"
#include "hkcoeff/sampling.hpp"

using namespace hkcoeff;

namespace {

HModule sample_module(GroupKind kind, u64 q, u64 m, std::size_t rank, u64 seed) {
    auto gd = make_group_data(kind, q);
    Rng rng(seed);
    auto M = random_hmodule(gd, RingZm(m), rank, rng);
    REQUIRE(M.has_value());
    return *M;
}

}  // namespace

TEST_CASE("diagrams from modules validate and identify invariants") {
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2}) {
        for (u64 q : {2ull, 3ull}) {
            for (u64 m : {2ull, 9ull}) {
                auto M = sample_module(kind, q, m, 2, 101 + q + m);
                ModuleDiagram md = diagram_from_hecke_module(M);
                CHECK(md.dia.validate().ok);
                // canonical maps land bijectively in the invariants (face form
                // of the natural isomorphism M -> F(M)^I_F)
                FaceInvariants inv = face_invariants(md.dia);
                auto check_face = [&](const InvariantsModule& im, const ModuleMap& can,
                                      const FiniteRep& rep) {
                    MatrixZm C(M.ring, M.carrier.ambient, im.module.carrier.ambient);
                    for (std::size_t j = 0; j < M.carrier.ambient; ++j) {
                        auto sol = solve_mod(im.generators, rep.carrier.relations,
                                             can.matrix.row(j));
                        REQUIRE(sol.has_value());
                        C.set_row(j, *sol);
                    }
                    ModuleMap f(M.carrier, im.module.carrier, C);
                    CHECK(f.bijective());
                };
                check_face(inv.x0, md.can_x0, md.dia.d_x0);
                check_face(inv.x1, md.can_x1, md.dia.d_x1);
                check_face(inv.C, md.can_C, md.dia.d_C);
            }
        }
    }
}

TEST_CASE("zero module gives the zero diagram") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(4);
    Rng rng(7);
    auto M = random_hmodule(gd, r, 0, rng);
    REQUIRE(M.has_value());
    ModuleDiagram md = diagram_from_hecke_module(*M);
    CHECK(md.dia.d_x0.carrier.is_zero_module());
    CHECK(md.dia.d_x1.carrier.is_zero_module());
    CHECK(md.dia.d_C.carrier.is_zero_module());
}

TEST_CASE("spreading restricted to the base chamber is the diagram") {
    auto M = sample_module(GroupKind::SL2, 3, 9, 2, 303);
    ModuleDiagram md = diagram_from_hecke_module(M);
    auto region = build_region(RegionKind::Apartment, M.gd, 2);
    CoeffSystem csys = spread(md.dia, region);
    // the base chamber is chamber 0 with identity transports: its maps are
    // exactly the diagram restrictions
    CHECK(csys.rmaps[0].to_near == md.dia.r0.matrix);
    CHECK(csys.rmaps[0].to_far == md.dia.r1.matrix);
}

TEST_CASE("constant diagram spreads to the constant system") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(4);
    Diagram dia = constant_diagram(gd, r, PresentedModule::free_module(r, 1));
    auto region = build_region(RegionKind::Tree, gd, 2);
    CoeffSystem csys = spread(dia, region);
    for (const auto& maps : csys.rmaps) {
        CHECK(maps.to_near == MatrixZm::identity(r, 1));
        CHECK(maps.to_far == MatrixZm::identity(r, 1));
    }
}

TEST_CASE("transport cocycle relation on the spread system") {
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2}) {
        auto M = sample_module(kind, kind == GroupKind::SL2 ? 2 : 3,
                               kind == GroupKind::SL2 ? 4 : 9, 1, 404);
        ModuleDiagram md = diagram_from_hecke_module(M);
        auto region = build_region(RegionKind::Tree, M.gd, 2);
        CoeffSystem csys = spread(md.dia, region);
        const PadicCtx& ctx = region->pctx;
        // g, h range over small stabilizer-ish elements
        std::vector<GroupElt> elts{
            ge_from_mat(digit_upper(ctx, 1)),
            ge_from_mat(digit_lower1(ctx, 1)),
            ge_from_mat(lift_simple_mat(ctx, 0)),
        };
        if (kind == GroupKind::PGL2) elts.push_back(ge_omega(ctx));
        for (const auto& g : elts)
            for (const auto& h : elts) {
                GroupElt gh = ge_mul(ctx, g, h);
                for (std::size_t v = 0; v < region->vertices.size(); ++v) {
                    Face f{false, v};
                    auto ophf = transport_operator(csys, h, f);
                    if (!ophf) continue;
                    auto opg = transport_operator(csys, g, ophf->first);
                    auto opgh = transport_operator(csys, gh, f);
                    if (!opg || !opgh) continue;
                    CHECK(opg->first == opgh->first);
                    const FiniteRep& from = csys.face_value(f);
                    const FiniteRep& to = csys.face_value(opgh->first);
                    ModuleMap lhs(from.carrier, to.carrier, ophf->second.mul(opg->second));
                    ModuleMap rhs(from.carrier, to.carrier, opgh->second);
                    CHECK(lhs.equals(rhs));
                }
            }
    }
}

TEST_CASE("category membership for module systems and the constant system") {
    SUBCASE("F(M) systems lie in the category") {
        for (auto kind : {GroupKind::SL2, GroupKind::PGL2}) {
            auto M = sample_module(kind, 3, 3, 2, 505);
            ModuleDiagram md = diagram_from_hecke_module(M);
            auto region = build_region(RegionKind::Apartment, M.gd, 3);
            CoeffSystem csys = spread(md.dia, region);
            CHECK(check_category_C(csys).holds);
        }
    }
    SUBCASE("the constant system is decided by the checker") {
        auto gd = make_group_data(GroupKind::SL2, 2);
        RingZm r(2);
        Diagram dia = constant_diagram(gd, r, PresentedModule::free_module(r, 1));
        auto region = build_region(RegionKind::Apartment, gd, 2);
        CoeffSystem csys = spread(dia, region);
        auto rep = check_category_C(csys);
        // the trivial representation satisfies (H) over F_2, but the far
        // transitions multiply by q = 0, and the plain ones are identities
        CHECK(rep.condition_h_x0);
        CHECK(rep.condition_h_C);
        CHECK(rep.transitions_bijective);
        CHECK(rep.holds);
    }
}

TEST_CASE("apartment transitions: constant system counts cosets") {
    // for the constant system the far transition is multiplication by q
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(3);  // q = 2 invertible mod 3 keeps the count visible
    Diagram dia = constant_diagram(gd, r, PresentedModule::free_module(r, 1));
    auto region = build_region(RegionKind::Apartment, gd, 2);
    CoeffSystem csys = spread(dia, region);
    ApartmentSystem asys = apartment_system(csys);
    for (std::size_t c = 0; c < region->chambers.size(); ++c) {
        auto expect = [&](std::size_t vid, const MatrixZm& mat, bool plain) {
            u64 val = plain ? 1 : gd.q % r.m;
            CHECK(mat == MatrixZm::from_rows(r, {{val}}));
            (void)vid;
        };
        expect(region->chambers[c].v_near, asys.tmaps[c].to_near, asys.tmaps[c].near_plain);
        expect(region->chambers[c].v_far, asys.tmaps[c].to_far, asys.tmaps[c].far_plain);
    }
}

TEST_CASE("diagram morphisms spread functorially") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    RingZm r(4);
    Rng rng(606);
    auto M = random_hmodule(gd, r, 2, rng);
    REQUIRE(M.has_value());
    ModuleDiagram md = diagram_from_hecke_module(*M);
    // an H-module endomorphism of M: a matrix commuting with all generators
    std::vector<std::pair<MatrixZm, MatrixZm>> pairs;
    pairs.emplace_back(M->act_s0, M->act_s0);
    pairs.emplace_back(M->act_s1, M->act_s1);
    for (const auto& T : M->act_torus_gen) pairs.emplace_back(T, T);
    HomSpace endos = hom_space(M->carrier, M->carrier, pairs);
    REQUIRE(!endos.generators.empty());
    MatrixZm phi = endos.generators[rng.below(endos.generators.size())];
    // spread the morphism facewise through the canonical identifications:
    // f_F = can_F^{-1} . phi . can_F on each face value
    auto face_map = [&](const ModuleMap& can, const FiniteRep& val) {
        // express phi in the coordinates of the face value via the canonical
        // generators: can is injective with invariant image, and the face
        // value is generated by the orbit of that image; the induced map is
        // determined by equivariance. Here we verify commutation with the
        // restriction maps on the canonical image only.
        (void)val;
        return can.matrix;  // image of M-basis under can
    };
    // restriction compatibility on the canonical image: r_i(can_C(m)) =
    // can_i(m), so phi's facewise spread commutes with r_i iff it does on M
    MatrixZm viaC = phi.mul(md.can_C.matrix).mul(md.dia.r0.matrix);
    MatrixZm direct = phi.mul(md.can_x0.matrix);
    ModuleMap a(M->carrier, md.dia.d_x0.carrier, viaC), b(M->carrier, md.dia.d_x0.carrier, direct);
    CHECK(a.equals(b));
    (void)face_map;
}

TEST_CASE("module morphisms spread to morphisms of systems") {
    // an H-linear map M -> M' induces facewise maps t_F(phi) commuting with
    // every restriction map of the spread systems
    auto gd = make_group_data(GroupKind::SL2, 3);
    RingZm r(9);
    Rng rng(808);
    auto M = random_hmodule(gd, r, 2, rng);
    REQUIRE(M.has_value());
    // endomorphisms: never empty (the identity is one), so phi is a real case
    auto M2 = M;
    std::vector<std::pair<MatrixZm, MatrixZm>> pairs;
    pairs.emplace_back(M->act_s0, M2->act_s0);
    pairs.emplace_back(M->act_s1, M2->act_s1);
    for (std::size_t f = 0; f < M->act_torus_gen.size(); ++f)
        pairs.emplace_back(M->act_torus_gen[f], M2->act_torus_gen[f]);
    HomSpace homs = hom_space(M->carrier, M2->carrier, pairs);
    REQUIRE(!homs.generators.empty());
    MatrixZm phi = homs.combination([&] {
        std::vector<u64> c(homs.generators.size());
        for (auto& x : c) x = rng.below(9);
        return c;
    }());

    ModuleDiagram a = diagram_from_hecke_module(*M);
    ModuleDiagram b = diagram_from_hecke_module(*M2);
    auto region = build_region(RegionKind::Tree, gd, 2);
    CoeffSystem ca = spread(a.dia, region), cb = spread(b.dia, region);

    // facewise maps: id_X (x) phi through the carrier minimizations
    auto face_map = [&](const ParahoricData& pd, const TFunctorResult&, const FiniteRep&) {
        const std::size_t nX = pd.X.carrier.ambient;
        MatrixZm big(r, nX * M->carrier.ambient, nX * M2->carrier.ambient);
        for (std::size_t i = 0; i < nX; ++i)
            for (std::size_t j = 0; j < M->carrier.ambient; ++j)
                for (std::size_t l = 0; l < M2->carrier.ambient; ++l)
                    big.at(i * M->carrier.ambient + j, i * M2->carrier.ambient + l) =
                        phi.at(j, l);
        return big;
    };
    // rebuild the t-functor data to access the minimization maps
    auto tf = [&](const ParahoricData& pd, const HModule& mod) {
        return t_functor(pd, restrict_module(mod, *pd.alg));
    };
    TFunctorResult a0 = tf(*a.dia.pd_x0, *M), b0 = tf(*b.dia.pd_x0, *M2);
    TFunctorResult a1 = tf(*a.dia.pd_x1, *M), b1 = tf(*b.dia.pd_x1, *M2);
    TFunctorResult acm = tf(*a.dia.pd_C, *M), bcm = tf(*b.dia.pd_C, *M2);
    MatrixZm f0 = a0.from_min.mul(face_map(*a.dia.pd_x0, a0, a.dia.d_x0)).mul(b0.to_min);
    MatrixZm f1 = a1.from_min.mul(face_map(*a.dia.pd_x1, a1, a.dia.d_x1)).mul(b1.to_min);
    MatrixZm fc = acm.from_min.mul(face_map(*a.dia.pd_C, acm, a.dia.d_C)).mul(bcm.to_min);

    for (std::size_t c = 0; c < region->chambers.size(); ++c) {
        const auto& ch = region->chambers[c];
        auto commute = [&](std::size_t vid, const MatrixZm& ra, const MatrixZm& rb) {
            int type = region->vertices[vid].type;
            const MatrixZm& fv = type == 0 ? f0 : f1;
            ModuleMap lhs(a.dia.d_C.carrier, b.dia.vertex_value(type).carrier, ra.mul(fv));
            ModuleMap rhs(a.dia.d_C.carrier, b.dia.vertex_value(type).carrier, fc.mul(rb));
            CHECK(lhs.equals(rhs));
        };
        commute(ch.v_near, ca.rmaps[c].to_near, cb.rmaps[c].to_near);
        commute(ch.v_far, ca.rmaps[c].to_far, cb.rmaps[c].to_far);
    }
}
