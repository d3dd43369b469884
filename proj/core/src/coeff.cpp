#include "hkcoeff/coeff.hpp"

#include <stdexcept>

namespace hkcoeff {

namespace {

// x1-chart image of omega g omega^{-1} for a matrix given in the x0 chart
// (and conversely): conjugation by the permutation matrix.
std::array<u64, 4> wbar_conj(const std::array<u64, 4>& m) {
    // [[0,1],[1,0]] * [[a,b],[c,d]] * [[0,1],[1,0]] = [[d,c],[b,a]]
    return {m[3], m[2], m[1], m[0]};
}

}  // namespace

ValidationReport Diagram::validate() const {
    ValidationReport rep;
    auto sub = [&](const char* what, bool ok) {
        if (!ok) rep.fail(what);
    };
    sub("D_x0 invalid", d_x0.validate().ok);
    sub("D_x1 invalid", d_x1.validate().ok);
    sub("D_C invalid", d_C.validate().ok);
    sub("r0 not well defined", r0.well_defined());
    sub("r1 not well defined", r1.well_defined());

    // restrictions land in the pro-p invariants of the vertex values
    for (int type = 0; type < 2; ++type) {
        const auto& r = restriction(type);
        const auto& pdv = pd(type);
        for (auto u : pdv.quo->subgroup(SubgroupTag::ProP)) {
            ModuleMap moved(r.domain, r.codomain, r.matrix.mul(vertex_value(type).action[u]));
            if (!moved.equals(r)) sub("restriction image not pro-p invariant", false);
        }
        // torus equivariance through the chamber quotient
        for (const auto& t : gd.torus_elements()) {
            MatrixZm ct = d_C.action[pd_C->quo->from_torus(t)];
            MatrixZm vt = vertex_value(type).action[pdv.quo->from_torus(t)];
            ModuleMap lhs(r.domain, r.codomain, ct.mul(r.matrix));
            ModuleMap rhs(r.domain, r.codomain, r.matrix.mul(vt));
            if (!lhs.equals(rhs)) sub("restriction not torus equivariant", false);
        }
    }

    if (gd.kind == GroupKind::PGL2) {
        if (!c01 || !c10) {
            rep.fail("PGL2 diagram missing omega cross maps");
            return rep;
        }
        // omega^2 = 1 across the two cross maps
        ModuleMap round0(d_x0.carrier, d_x0.carrier, c01->mul(*c10));
        ModuleMap round1(d_x1.carrier, d_x1.carrier, c10->mul(*c01));
        sub("omega cross maps do not square to one",
            round0.equals(ModuleMap::identity(d_x0.carrier)) &&
                round1.equals(ModuleMap::identity(d_x1.carrier)));
        // compatibility (g h g^{-1}) o c = c o h on the vertex values
        const auto& Q0 = *pd_x0->quo;
        for (auto g : Q0.gens) {
            auto conj = pd_x1->quo->id_of_mat(wbar_conj(Q0.mats[g]));
            ModuleMap lhs(d_x0.carrier, d_x1.carrier, d_x0.action[g].mul(*c01));
            ModuleMap rhs(d_x0.carrier, d_x1.carrier, c01->mul(d_x1.action[conj]));
            if (!lhs.equals(rhs)) sub("omega cross map not equivariant", false);
        }
        // restriction square through omega: c_{omega,C} then r1 = r0 then c01
        std::size_t om = pd_C->quo->id_of_celt(gd.torus_identity(), 1);
        ModuleMap lhs(d_C.carrier, d_x1.carrier, d_C.action[om].mul(r1.matrix));
        ModuleMap rhs(d_C.carrier, d_x1.carrier, r0.matrix.mul(*c01));
        sub("omega-twisted restriction square fails", lhs.equals(rhs));
    }
    return rep;
}

ModuleDiagram diagram_from_hecke_module(const HModule& M) {
    if (M.gd.kind == GroupKind::GL2)
        throw std::invalid_argument("diagram_from_hecke_module: GL2 has infinite Omega_F");
    ModuleDiagram out;
    out.M = M;
    Diagram& dia = out.dia;
    dia.gd = M.gd;
    dia.ring = M.ring;
    const bool dagger_C = M.gd.kind == GroupKind::PGL2;

    dia.pd_x0 = std::make_shared<ParahoricData>(
        make_parahoric_data(M.gd, M.ring, FaceLabel::x0, false));
    dia.pd_x1 = std::make_shared<ParahoricData>(
        make_parahoric_data(M.gd, M.ring, FaceLabel::x1, false));
    dia.pd_C = std::make_shared<ParahoricData>(
        make_parahoric_data(M.gd, M.ring, FaceLabel::C, dagger_C));

    AlgebraModule m0 = restrict_module(M, *dia.pd_x0->alg);
    AlgebraModule m1 = restrict_module(M, *dia.pd_x1->alg);
    AlgebraModule mc = restrict_module(M, *dia.pd_C->alg);

    TFunctorResult t0 = t_functor(*dia.pd_x0, m0);
    TFunctorResult t1 = t_functor(*dia.pd_x1, m1);
    TFunctorResult tc = t_functor(*dia.pd_C, mc);
    dia.d_x0 = t0.rep;
    dia.d_x1 = t1.rep;
    dia.d_C = tc.rep;
    out.can_x0 = t0.canonical;
    out.can_x1 = t1.canonical;
    out.can_C = tc.canonical;

    auto canC_inv = out.can_C.inverse();
    if (!canC_inv)
        throw std::logic_error("diagram_from_hecke_module: chamber canonical map not invertible");
    dia.r0 = canC_inv->compose(out.can_x0);
    dia.r1 = canC_inv->compose(out.can_x1);

    if (M.gd.kind == GroupKind::PGL2) {
        // cross maps on tensor coordinates: e_{[g U']} (x) m -> e_{[wbar g wbar U']} (x) tau_omega m,
        // then compressed through the carrier minimizations
        auto cross = [&](const ParahoricData& from, const ParahoricData& to,
                         const TFunctorResult& tf_from, const TFunctorResult& tf_to) {
            const std::size_t nM = M.carrier.ambient;
            const std::size_t nf = from.X.carrier.ambient, nt = to.X.carrier.ambient;
            MatrixZm big(M.ring, nf * nM, nt * nM);
            MatrixZm om = M.act_weyl(M.gd.omega_elt(1));
            for (std::size_t c = 0; c < nf; ++c) {
                std::size_t rep = from.cosets[c].front();
                std::size_t conj = to.quo->id_of_mat(wbar_conj(from.quo->mats[rep]));
                std::size_t c2 = SIZE_MAX;
                for (std::size_t k = 0; k < to.cosets.size() && c2 == SIZE_MAX; ++k)
                    for (auto e : to.cosets[k])
                        if (e == conj) { c2 = k; break; }
                for (std::size_t j = 0; j < nM; ++j)
                    for (std::size_t l = 0; l < nM; ++l)
                        big.at(c * nM + j, c2 * nM + l) = om.at(j, l);
            }
            return tf_from.from_min.mul(big).mul(tf_to.to_min);
        };
        dia.c01 = cross(*dia.pd_x0, *dia.pd_x1, t0, t1);
        dia.c10 = cross(*dia.pd_x1, *dia.pd_x0, t1, t0);
    }
    auto rep = dia.validate();
    if (!rep.ok)
        throw std::logic_error("diagram_from_hecke_module: invalid diagram: " + rep.str());
    return out;
}

Diagram constant_diagram(const GroupData& gd, RingZm ring, const PresentedModule& value) {
    if (gd.kind == GroupKind::GL2)
        throw std::invalid_argument("constant_diagram: GL2 unsupported at diagram level");
    Diagram dia;
    dia.gd = gd;
    dia.ring = ring;
    const bool dagger_C = gd.kind == GroupKind::PGL2;
    dia.pd_x0 = std::make_shared<ParahoricData>(make_parahoric_data(gd, ring, FaceLabel::x0, false));
    dia.pd_x1 = std::make_shared<ParahoricData>(make_parahoric_data(gd, ring, FaceLabel::x1, false));
    dia.pd_C = std::make_shared<ParahoricData>(make_parahoric_data(gd, ring, FaceLabel::C, dagger_C));
    auto mk = [&](std::shared_ptr<FiniteQuotient> quo) {
        FiniteRep rep;
        rep.quo = quo;
        rep.ring = ring;
        rep.carrier = value;
        rep.action.assign(quo->size(), MatrixZm::identity(ring, value.ambient));
        return rep;
    };
    dia.d_x0 = mk(dia.pd_x0->quo);
    dia.d_x1 = mk(dia.pd_x1->quo);
    dia.d_C = mk(dia.pd_C->quo);
    dia.r0 = ModuleMap::identity(value);
    dia.r1 = ModuleMap::identity(value);
    if (dagger_C) {
        dia.c01 = MatrixZm::identity(ring, value.ambient);
        dia.c10 = MatrixZm::identity(ring, value.ambient);
    }
    auto rep = dia.validate();
    if (!rep.ok) throw std::logic_error("constant_diagram: invalid: " + rep.str());
    return dia;
}

const FiniteRep& CoeffSystem::face_value(const Face& f) const {
    if (f.chamber) return dia.d_C;
    return dia.vertex_value(region->vertices[f.id].type);
}

CoeffSystem spread(const Diagram& dia, std::shared_ptr<Region> region) {
    CoeffSystem out;
    out.region = region;
    out.dia = dia;
    const PadicCtx& ctx = region->pctx;
    const bool projective = dia.gd.kind == GroupKind::PGL2;
    for (const auto& ch : region->chambers) {
        auto twist = [&](std::size_t vid) {
            const auto& v = region->vertices[vid];
            GroupElt delta = ge_mul(ctx, v.transport, ge_inv(ctx, ch.transport));
            if (delta.eps != 0)
                throw std::logic_error("spread: transports produced an omega twist");
            auto mat = chart_reduce(ctx, delta.mat, v.type, projective);
            std::size_t id = dia.pd(v.type).quo->id_of_mat(mat);
            return dia.restriction(v.type).matrix.mul(dia.vertex_value(v.type).action[id]);
        };
        out.rmaps.push_back(CoeffSystem::ChamberMaps{twist(ch.v_near), twist(ch.v_far)});
    }
    return out;
}

std::optional<std::pair<Face, MatrixZm>> transport_operator(const CoeffSystem& csys,
                                                            const GroupElt& g_in, const Face& from) {
    const Region& reg = *csys.region;
    const PadicCtx& ctx = reg.pctx;
    // fold any explicit omega prefix into the matrix; parity is detected
    // from the face types below
    GroupElt g = g_in.eps ? ge_from_mat(ge_matrix(ctx, g_in)) : g_in;
    auto to = reg.act(g, from);
    if (!to) return std::nullopt;
    const bool projective = csys.dia.gd.kind == GroupKind::PGL2;
    Mat2P omega_inv = m2_inv(ctx, lift_omega_mat(ctx));

    if (!from.chamber) {
        const auto& v = reg.vertices[from.id];
        const auto& w = reg.vertices[to->id];
        Mat2P elt = m2_mul(ctx, m2_mul(ctx, ge_matrix(ctx, w.transport), g.mat),
                           m2_inv(ctx, ge_matrix(ctx, v.transport)));
        if (v.type == w.type) {
            auto mat = chart_reduce(ctx, elt, v.type, projective);
            return std::make_pair(*to, csys.dia.vertex_value(v.type)
                                            .action[csys.dia.pd(v.type).quo->id_of_mat(mat)]);
        }
        // type swap: peel one omega factor, then use the diagram cross map
        if (!csys.dia.c01) throw std::logic_error("transport_operator: type swap without omega");
        Mat2P b = m2_mul(ctx, omega_inv, elt);
        auto matb = chart_reduce(ctx, b, v.type, projective);
        MatrixZm act_b =
            csys.dia.vertex_value(v.type).action[csys.dia.pd(v.type).quo->id_of_mat(matb)];
        const MatrixZm& cross = v.type == 0 ? *csys.dia.c01 : *csys.dia.c10;
        return std::make_pair(*to, act_b.mul(cross));
    }
    const auto& c = reg.chambers[from.id];
    const auto& c2 = reg.chambers[to->id];
    Mat2P elt = m2_mul(ctx, m2_mul(ctx, ge_matrix(ctx, c2.transport), g.mat),
                       m2_inv(ctx, ge_matrix(ctx, c.transport)));
    // parity: does the residual element swap the two base vertices?
    bool swapped = vertex_act(ctx, elt, base_vertex_x0()) != base_vertex_x0();
    Mat2P m = swapped ? m2_mul(ctx, omega_inv, elt) : elt;
    TorusElt t = iwahori_torus_class(ctx, csys.dia.gd, m);
    std::size_t id = csys.dia.pd_C->quo->id_of_celt(t, swapped ? 1 : 0);
    return std::make_pair(*to, csys.dia.d_C.action[id]);
}

FaceInvariants face_invariants(const Diagram& dia) {
    FaceInvariants out;
    out.x0 = invariants_module(*dia.pd_x0, dia.d_x0);
    out.x1 = invariants_module(*dia.pd_x1, dia.d_x1);
    out.C = invariants_module(*dia.pd_C, dia.d_C);
    return out;
}

ApartmentSystem apartment_system(const CoeffSystem& csys) {
    ApartmentSystem out;
    out.csys = &csys;
    out.inv = face_invariants(csys.dia);
    const Region& reg = *csys.region;
    const RingZm ring = csys.dia.ring;
    for (std::size_t cid = 0; cid < reg.chambers.size(); ++cid) {
        const auto& ch = reg.chambers[cid];
        auto make = [&](std::size_t vid, const MatrixZm& base) {
            const auto& v = reg.vertices[vid];
            const InvariantsModule& inv = out.inv.vertex(v.type);
            bool plain = v.nearest_chamber == cid;
            MatrixZm full = base;
            if (!plain) {
                // coset sum over the full pro-p image
                const auto& V = csys.dia.vertex_value(v.type);
                MatrixZm s = MatrixZm::zero(ring, V.carrier.ambient, V.carrier.ambient);
                for (auto u : csys.dia.pd(v.type).quo->subgroup(SubgroupTag::ProP))
                    s = s.add(V.action[u]);
                full = base.mul(s);
            }
            // corestrict to invariant coordinates
            MatrixZm mat(ring, csys.dia.d_C.carrier.ambient, inv.module.carrier.ambient);
            for (std::size_t r = 0; r < mat.rows; ++r) {
                auto sol = solve_mod(inv.generators,
                                     csys.dia.vertex_value(v.type).carrier.relations, full.row(r));
                if (!sol)
                    throw std::logic_error("apartment_system: transition escapes the invariants");
                mat.set_row(r, *sol);
            }
            return std::make_pair(mat, plain);
        };
        auto [mn, pn] = make(ch.v_near, csys.rmaps[cid].to_near);
        auto [mf, pf] = make(ch.v_far, csys.rmaps[cid].to_far);
        out.tmaps.push_back(ApartmentSystem::T{mn, mf, pn, pf});
    }
    return out;
}

CategoryCReport check_category_C(const CoeffSystem& csys) {
    CategoryCReport rep;
    rep.condition_h_x0 = check_condition_H(*csys.dia.pd_x0, csys.dia.d_x0).holds;
    rep.condition_h_x1 = check_condition_H(*csys.dia.pd_x1, csys.dia.d_x1).holds;
    rep.condition_h_C = check_condition_H(*csys.dia.pd_C, csys.dia.d_C).holds;
    if (!rep.condition_h_x0) rep.failures.push_back("condition (H) fails at x0");
    if (!rep.condition_h_x1) rep.failures.push_back("condition (H) fails at x1");
    if (!rep.condition_h_C) rep.failures.push_back("condition (H) fails at C");

    ApartmentSystem asys = apartment_system(csys);
    rep.transitions_bijective = true;
    const Region& reg = *csys.region;
    for (std::size_t cid = 0; cid < reg.chambers.size(); ++cid) {
        auto checkside = [&](std::size_t vid, const MatrixZm& mat, bool plain) {
            if (!plain) return;
            const auto& v = reg.vertices[vid];
            ModuleMap t(csys.dia.d_C.carrier, asys.inv.vertex(v.type).module.carrier, mat);
            if (!t.bijective()) {
                rep.transitions_bijective = false;
                rep.failures.push_back("plain transition not bijective");
            }
        };
        checkside(reg.chambers[cid].v_near, asys.tmaps[cid].to_near, asys.tmaps[cid].near_plain);
        checkside(reg.chambers[cid].v_far, asys.tmaps[cid].to_far, asys.tmaps[cid].far_plain);
    }
    rep.holds = rep.condition_h_x0 && rep.condition_h_x1 && rep.condition_h_C &&
                rep.transitions_bijective;
    return rep;
}

}  // namespace hkcoeff
