#include "hkcoeff/chains.hpp"

#include <limits>
#include <stdexcept>

namespace hkcoeff {

namespace {

// separation matrix of a block-diagonal relation matrix, block by block
MatrixZm block_separation(const std::vector<PresentedModule>& parts, const RingZm& ring) {
    std::vector<MatrixZm> seps;
    std::size_t total_rows = 0, total_cols = 0;
    for (const auto& p : parts) {
        seps.push_back(separation_matrix(p.relations, p.ambient));
        total_rows += p.ambient;
        total_cols += seps.back().cols;
    }
    MatrixZm out(ring, total_rows, total_cols);
    std::size_t ro = 0, co = 0;
    for (const auto& s : seps) {
        for (std::size_t i = 0; i < s.rows; ++i)
            for (std::size_t j = 0; j < s.cols; ++j) out.at(ro + i, co + j) = s.at(i, j);
        ro += s.rows;
        co += s.cols;
    }
    return out;
}

void put_block(MatrixZm& big, std::size_t r0, std::size_t c0, const MatrixZm& blk, bool negate) {
    u64 m = big.ring.m;
    for (std::size_t i = 0; i < blk.rows; ++i)
        for (std::size_t j = 0; j < blk.cols; ++j) {
            u64 v = blk.at(i, j) % m;
            if (negate) v = (m - v) % m;
            big.at(r0 + i, c0 + j) = (big.at(r0 + i, c0 + j) + v) % m;
        }
}

}  // namespace

ChainComplex chain_complex(const CoeffSystem& csys) {
    const Region& reg = *csys.region;
    const RingZm ring = csys.dia.ring;
    ChainComplex cc;
    cc.cblock.assign(reg.chambers.size(), SIZE_MAX);
    cc.vblock.assign(reg.vertices.size(), SIZE_MAX);
    // leaf-first block order keeps the boundary matrix near echelon form
    std::vector<std::size_t> corder(reg.chambers.size()), vorder(reg.vertices.size());
    for (std::size_t i = 0; i < corder.size(); ++i) corder[i] = i;
    for (std::size_t i = 0; i < vorder.size(); ++i) vorder[i] = i;
    std::sort(corder.begin(), corder.end(), [&](std::size_t a, std::size_t b) {
        return reg.chambers[a].depth > reg.chambers[b].depth ||
               (reg.chambers[a].depth == reg.chambers[b].depth && a < b);
    });
    std::sort(vorder.begin(), vorder.end(), [&](std::size_t a, std::size_t b) {
        return reg.vertices[a].key.k > reg.vertices[b].key.k ||
               (reg.vertices[a].key.k == reg.vertices[b].key.k && a < b);
    });
    for (std::size_t c : corder) {
        cc.cblock[c] = cc.parts1.size();
        cc.parts1.push_back(csys.dia.d_C.carrier);
    }
    for (std::size_t v : vorder) {
        cc.vblock[v] = cc.parts0.size();
        cc.parts0.push_back(csys.dia.vertex_value(reg.vertices[v].type).carrier);
    }
    cc.deg1 = DirectSum::of(cc.parts1);
    cc.deg0 = DirectSum::of(cc.parts0);
    cc.boundary = MatrixZm(ring, cc.deg1.total.ambient, cc.deg0.total.ambient);
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        const auto& ch = reg.chambers[c];
        put_block(cc.boundary, cc.deg1.offsets[cc.cblock[c]],
                  cc.deg0.offsets[cc.vblock[ch.v_near]], csys.rmaps[c].to_near, false);
        put_block(cc.boundary, cc.deg1.offsets[cc.cblock[c]],
                  cc.deg0.offsets[cc.vblock[ch.v_far]], csys.rmaps[c].to_far, true);
    }
    return cc;
}

ChainComplex invariants_complex(const ApartmentSystem& asys, bool ray_only) {
    const CoeffSystem& csys = *asys.csys;
    const Region& reg = *csys.region;
    if (reg.kind != RegionKind::Apartment)
        throw std::invalid_argument("invariants_complex: needs an apartment region");
    const RingZm ring = csys.dia.ring;
    ChainComplex cc;
    cc.cblock.assign(reg.chambers.size(), SIZE_MAX);
    cc.vblock.assign(reg.vertices.size(), SIZE_MAX);
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        const auto& ch = reg.chambers[c];
        i64 lo = std::min(reg.vertices[ch.v_near].coord, reg.vertices[ch.v_far].coord);
        if (ray_only && lo < 0) continue;
        cc.cblock[c] = cc.parts1.size();
        cc.parts1.push_back(csys.dia.d_C.carrier);
    }
    for (std::size_t v = 0; v < reg.vertices.size(); ++v) {
        if (ray_only && reg.vertices[v].coord < 0) continue;
        cc.vblock[v] = cc.parts0.size();
        cc.parts0.push_back(asys.inv.vertex(reg.vertices[v].type).module.carrier);
    }
    cc.deg1 = DirectSum::of(cc.parts1);
    cc.deg0 = DirectSum::of(cc.parts0);
    cc.boundary = MatrixZm(ring, cc.deg1.total.ambient, cc.deg0.total.ambient);
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        if (cc.cblock[c] == SIZE_MAX) continue;
        const auto& ch = reg.chambers[c];
        put_block(cc.boundary, cc.deg1.offsets[cc.cblock[c]],
                  cc.deg0.offsets[cc.vblock[ch.v_near]], asys.tmaps[c].to_near, false);
        put_block(cc.boundary, cc.deg1.offsets[cc.cblock[c]],
                  cc.deg0.offsets[cc.vblock[ch.v_far]], asys.tmaps[c].to_far, true);
    }
    return cc;
}

PresentedModule homology0(const ChainComplex& cc) {
    return PresentedModule(cc.deg0.total.ring, cc.deg0.total.ambient,
                           cc.boundary.vstack(cc.deg0.total.relations));
}

ModuleMap::Sub homology1(const ChainComplex& cc) {
    return ModuleMap(cc.deg1.total, cc.deg0.total, cc.boundary).kernel();
}

bool boundary_injective(const CoeffSystem& csys, const ChainComplex& cc) {
    const Region& reg = *csys.region;
    // keep only chambers of depth < radius so the differential sees the
    // complete star of every vertex it hits
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        if (cc.cblock[c] == SIZE_MAX) continue;
        if (reg.chambers[c].depth + 1 <= reg.radius) keep.push_back(c);
    }
    // feed rows deepest-first, matching the leaf-first column order
    std::sort(keep.begin(), keep.end(),
              [&](std::size_t a, std::size_t b) { return cc.cblock[a] < cc.cblock[b]; });
    std::vector<PresentedModule> parts;
    for (std::size_t c : keep) parts.push_back(cc.parts1[cc.cblock[c]]);
    if (keep.empty()) return true;
    DirectSum sub = DirectSum::of(parts);
    MatrixZm restricted(cc.boundary.ring, sub.total.ambient, cc.deg0.total.ambient);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        std::size_t blk = cc.cblock[keep[k]];
        for (std::size_t i = 0; i < cc.deg1.dims[blk]; ++i)
            for (std::size_t j = 0; j < cc.deg0.total.ambient; ++j)
                restricted.at(sub.offsets[k] + i, j) =
                    cc.boundary.at(cc.deg1.offsets[blk] + i, j);
    }
    MatrixZm sep = block_separation(cc.parts0, cc.boundary.ring);
    MatrixZm ker = left_kernel(restricted.mul(sep));
    for (std::size_t i = 0; i < ker.rows; ++i)
        if (!sub.total.is_zero_element(ker.row(i))) return false;
    return true;
}

MFunctorResult m_functor(const CoeffSystem& csys) {
    const Region& reg = *csys.region;
    if (reg.kind != RegionKind::Apartment)
        throw std::invalid_argument("m_functor: needs an apartment region");
    const RingZm ring = csys.dia.ring;
    const GroupData& gd = csys.dia.gd;
    ApartmentSystem asys = apartment_system(csys);
    ChainComplex cc = invariants_complex(asys, false);

    PresentedModule h0full = homology0(cc);
    MinimizedModule mini = minimize(h0full);

    auto vertex_at = [&](i64 coord) {
        for (std::size_t v = 0; v < reg.vertices.size(); ++v)
            if (reg.vertices[v].coord == coord) return v;
        throw std::logic_error("m_functor: apartment vertex missing");
    };
    auto iota_of = [&](std::size_t vid) {
        std::size_t blk = cc.vblock[vid];
        const auto& inv = asys.inv.vertex(reg.vertices[vid].type);
        MatrixZm inject(ring, inv.module.carrier.ambient, cc.deg0.total.ambient);
        for (std::size_t i = 0; i < inv.module.carrier.ambient; ++i)
            inject.at(i, cc.deg0.offsets[blk] + i) = 1 % ring.m;
        return inject.mul(mini.to_min);
    };

    MFunctorResult out;
    out.inv = asys.inv;
    std::size_t v0 = vertex_at(0), v1 = vertex_at(1);
    out.iota_x0 = iota_of(v0);
    out.iota_x1 = iota_of(v1);

    ModuleMap i0(out.inv.x0.module.carrier, mini.module, out.iota_x0);
    ModuleMap i1(out.inv.x1.module.carrier, mini.module, out.iota_x1);
    auto i0inv = i0.inverse(), i1inv = i1.inverse();
    if (!i0inv || !i1inv)
        throw std::logic_error("m_functor: iota is not bijective at a base vertex");

    // iota_C through the base chamber's transition to x0
    std::size_t base_chamber = *reg.chamber_id(v0, v1);
    const auto& tC = asys.tmaps[base_chamber];
    MatrixZm tC_x0 = reg.chambers[base_chamber].v_near == v0 ? tC.to_near : tC.to_far;
    out.iota_C = tC_x0.mul(out.iota_x0);

    auto act_on_h0 = [&](const InvariantsModule& inv, const MatrixZm& iota,
                         const ModuleMap& iota_inv, const WeylElt& w) {
        std::size_t idx = inv.module.algebra->index.at(w);
        return iota_inv.matrix.mul(inv.module.action[idx]).mul(iota);
    };

    MatrixZm s0 = act_on_h0(out.inv.x0, out.iota_x0, *i0inv, gd.simple(0));
    MatrixZm s1 = act_on_h0(out.inv.x1, out.iota_x1, *i1inv, gd.simple(1));
    std::vector<MatrixZm> torus;
    for (const auto& t : gd.torus_generators()) {
        MatrixZm from_x0 = act_on_h0(out.inv.x0, out.iota_x0, *i0inv, gd.torus_elt(t));
        MatrixZm from_x1 = act_on_h0(out.inv.x1, out.iota_x1, *i1inv, gd.torus_elt(t));
        ModuleMap a(mini.module, mini.module, from_x0), b(mini.module, mini.module, from_x1);
        if (!a.equals(b))
            throw std::logic_error("m_functor: overlapping torus actions disagree");
        torus.push_back(from_x0);
    }
    std::optional<MatrixZm> omega;
    if (gd.kind == GroupKind::PGL2) {
        // the chamber-level dagger algebra carries tau_omega; transport via iota_C
        ModuleMap iC(out.inv.C.module.carrier, mini.module, out.iota_C);
        auto iCinv = iC.inverse();
        if (!iCinv) throw std::logic_error("m_functor: iota_C not bijective");
        omega = act_on_h0(out.inv.C, out.iota_C, *iCinv, gd.omega_elt(1));
        // torus consistency through the chamber as well
        auto gens = gd.torus_generators();
        for (std::size_t f = 0; f < gens.size(); ++f) {
            MatrixZm from_c = act_on_h0(out.inv.C, out.iota_C, *iCinv, gd.torus_elt(gens[f]));
            ModuleMap a(mini.module, mini.module, from_c);
            ModuleMap b(mini.module, mini.module, torus[f]);
            if (!a.equals(b))
                throw std::logic_error("m_functor: chamber and vertex torus actions disagree");
        }
    } else if (gd.kind == GroupKind::GL2) {
        throw std::invalid_argument("m_functor: GL2 systems are not constructed");
    }

    auto [mod, rep] = make_hmodule(gd, ring, mini.module, s0, s1, torus, omega);
    if (!mod) throw std::logic_error("m_functor: assembled module invalid: " + rep.str());
    out.module = *mod;
    return out;
}

bool main_roundtrip(const ModuleDiagram& md, std::size_t radius) {
    auto region = build_region(RegionKind::Apartment, md.M.gd, radius);
    CoeffSystem csys = spread(md.dia, region);
    if (!check_category_C(csys).holds) return false;
    MFunctorResult mf = m_functor(csys);

    // canonical comparison M -> H0 through the chamber identification
    // M -> D_C carrier (= its own invariants coordinates) -> H0
    MatrixZm mat = md.can_C.matrix.mul(mf.iota_C);
    ModuleMap can(md.M.carrier, mf.module.carrier, mat);
    if (!can.well_defined() || !can.bijective()) return false;

    auto intertwines = [&](const MatrixZm& a_m, const MatrixZm& a_h0) {
        ModuleMap lhs(md.M.carrier, mf.module.carrier, a_m.mul(mat));
        ModuleMap rhs(md.M.carrier, mf.module.carrier, mat.mul(a_h0));
        return lhs.equals(rhs);
    };
    if (!intertwines(md.M.act_s0, mf.module.act_s0)) return false;
    if (!intertwines(md.M.act_s1, mf.module.act_s1)) return false;
    for (std::size_t f = 0; f < md.M.act_torus_gen.size(); ++f)
        if (!intertwines(md.M.act_torus_gen[f], mf.module.act_torus_gen[f])) return false;
    if (md.M.act_omega && !intertwines(*md.M.act_omega, *mf.module.act_omega)) return false;
    return true;
}

AcyclicityReport check_acyclicity(const ModuleDiagram& md, std::size_t radius) {
    AcyclicityReport rep;
    auto region = build_region(RegionKind::Apartment, md.M.gd, radius);
    CoeffSystem csys = spread(md.dia, region);
    ApartmentSystem asys = apartment_system(csys);
    ChainComplex cc = invariants_complex(asys, false);
    rep.h1_zero = homology1(cc).module.invariant_factors().empty();

    PresentedModule h0full = homology0(cc);
    MinimizedModule mini = minimize(h0full);
    auto vertex_at = [&](i64 coord) {
        for (std::size_t v = 0; v < region->vertices.size(); ++v)
            if (region->vertices[v].coord == coord) return v;
        throw std::logic_error("missing apartment vertex");
    };
    auto iota_of = [&](std::size_t vid) {
        std::size_t blk = cc.vblock[vid];
        const auto& inv = asys.inv.vertex(region->vertices[vid].type);
        MatrixZm inject(md.M.ring, inv.module.carrier.ambient, cc.deg0.total.ambient);
        for (std::size_t i = 0; i < inv.module.carrier.ambient; ++i)
            inject.at(i, cc.deg0.offsets[blk] + i) = 1 % md.M.ring.m;
        return inject.mul(mini.to_min);
    };
    std::size_t v0 = vertex_at(0), v1 = vertex_at(1);
    ModuleMap i0(asys.inv.x0.module.carrier, mini.module, iota_of(v0));
    ModuleMap i1(asys.inv.x1.module.carrier, mini.module, iota_of(v1));
    rep.iota_x0_bijective = i0.bijective();
    rep.iota_x1_bijective = i1.bijective();

    std::size_t base = *region->chamber_id(v0, v1);
    const auto& t = asys.tmaps[base];
    MatrixZm t0 = region->chambers[base].v_near == v0 ? t.to_near : t.to_far;
    MatrixZm t1 = region->chambers[base].v_near == v0 ? t.to_far : t.to_near;
    ModuleMap viaX0(csys.dia.d_C.carrier, mini.module, t0.mul(i0.matrix));
    ModuleMap viaX1(csys.dia.d_C.carrier, mini.module, t1.mul(i1.matrix));
    rep.iota_compatible = viaX0.equals(viaX1);
    return rep;
}

RankOneReport check_rank_one_exactness(const HModule& M, std::size_t radius) {
    RankOneReport rep;
    auto f = M.ring.factorization();
    if (f.size() != 1 || f[0].first != M.gd.q)
        throw std::invalid_argument("check_rank_one_exactness: p must be nilpotent in R");
    ModuleDiagram md = diagram_from_hecke_module(M);
    auto region = build_region(RegionKind::Tree, M.gd, radius);
    CoeffSystem csys = spread(md.dia, region);
    ChainComplex cc = chain_complex(csys);
    rep.boundary_injective = boundary_injective(csys, cc);

    // M into H0 through the canonical x0 identification
    PresentedModule h0full = homology0(cc);
    MinimizedModule mini = minimize(h0full);
    std::size_t v0 = *region->vertex_id(base_vertex_x0());
    MatrixZm inject(M.ring, md.dia.d_x0.carrier.ambient, cc.deg0.total.ambient);
    for (std::size_t i = 0; i < md.dia.d_x0.carrier.ambient; ++i)
        inject.at(i, cc.deg0.offsets[cc.vblock[v0]] + i) = 1 % M.ring.m;
    MatrixZm mat = md.can_x0.matrix.mul(inject).mul(mini.to_min);
    ModuleMap emb(M.carrier, mini.module, mat);
    rep.embedding_injective = emb.well_defined() && emb.injective();
    return rep;
}

bool check_tau_injective(const HModule& M) {
    if (M.gd.kind == GroupKind::GL2)
        throw std::invalid_argument("check_tau_injective: GL2 unsupported at diagram level");
    auto f = M.ring.factorization();
    if (f.size() != 1 || f[0].first != M.gd.q)
        throw std::invalid_argument("check_tau_injective: p must be nilpotent in R");
    for (auto face : {FaceLabel::x0, FaceLabel::x1, FaceLabel::C}) {
        bool dagger = M.gd.kind == GroupKind::PGL2 && face == FaceLabel::C;
        auto pd = make_parahoric_data(M.gd, M.ring, face, dagger);
        AlgebraModule rest = restrict_module(M, *pd.alg);
        TFunctorResult tf = t_functor(pd, rest);
        // the kernel of tau always contains the balancing span, so tau is
        // injective on X (x)_S M iff the two quotients have equal size
        PresentedModule bal = module_tensor(*pd.alg, pd.X.carrier, pd.X_right, rest);
        if (tf.rep.carrier.invariant_factors() != bal.invariant_factors()) return false;
    }
    return true;
}

Contraction standard_contraction(const GroupData& gd, const PadicCtx& ctx) {
    Contraction out;
    if (gd.kind == GroupKind::SL2) {
        Mat2P t = Mat2P::identity(ctx);
        t.e[0] = zp_shift(t.e[0], -1);
        t.e[3] = zp_shift(t.e[3], 1);
        out.t = ge_from_mat(t);
        out.pairing = 2;
    } else if (gd.kind == GroupKind::PGL2) {
        Mat2P t = Mat2P::identity(ctx);
        t.e[0] = zp_shift(t.e[0], -1);  // diag(1/p, 1)
        out.t = ge_from_mat(t);
        out.pairing = 1;
    } else {
        throw std::invalid_argument("standard_contraction: GL2 unsupported");
    }
    // representatives of U1bar / t U1bar t^{-1}: lower digits p*(c0 + c1 p + ...)
    std::size_t count = 1;
    for (std::size_t i = 0; i < out.pairing; ++i) count *= gd.q;
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t rem = n;
        u64 digits = 0, pw = 1;
        for (std::size_t i = 0; i < out.pairing; ++i) {
            digits += pw * (rem % gd.q);
            rem /= gd.q;
            pw *= gd.q;
        }
        out.cosets.push_back(ge_from_mat(digit_lower1(ctx, digits)));
    }
    return out;
}

namespace {

int orientation_sign(const Region& reg, const GroupElt& g, std::size_t from_chamber,
                     std::size_t to_chamber) {
    const auto& cf = reg.chambers[from_chamber];
    const auto& ct = reg.chambers[to_chamber];
    VertexKey moved = vertex_act(reg.pctx, g, reg.vertices[cf.v_near].key);
    if (moved == reg.vertices[ct.v_near].key) return 1;
    if (moved == reg.vertices[ct.v_far].key) return -1;
    throw std::logic_error("orientation_sign: moved source is not an endpoint");
}

}  // namespace

ChainOperator phi_op(const CoeffSystem& csys, const ChainComplex& cc, const GroupElt& g) {
    const Region& reg = *csys.region;
    const RingZm ring = csys.dia.ring;
    ChainOperator op;
    op.deg1 = MatrixZm(ring, cc.deg1.total.ambient, cc.deg1.total.ambient);
    op.deg0 = MatrixZm(ring, cc.deg0.total.ambient, cc.deg0.total.ambient);
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        if (cc.cblock[c] == SIZE_MAX) continue;
        auto moved = transport_operator(csys, g, Face{true, c});
        if (!moved || cc.cblock[moved->first.id] == SIZE_MAX) continue;
        int sign = orientation_sign(reg, g, c, moved->first.id);
        put_block(op.deg1, cc.deg1.offsets[cc.cblock[c]],
                  cc.deg1.offsets[cc.cblock[moved->first.id]], moved->second, sign < 0);
    }
    for (std::size_t v = 0; v < reg.vertices.size(); ++v) {
        if (cc.vblock[v] == SIZE_MAX) continue;
        auto moved = transport_operator(csys, g, Face{false, v});
        if (!moved || cc.vblock[moved->first.id] == SIZE_MAX) continue;
        put_block(op.deg0, cc.deg0.offsets[cc.vblock[v]],
                  cc.deg0.offsets[cc.vblock[moved->first.id]], moved->second, false);
    }
    return op;
}

ChainOperator psi_op(const CoeffSystem& csys, const ChainComplex& cc, const GroupElt& g) {
    return phi_op(csys, cc, ge_inv(csys.region->pctx, g));
}

EtaleReport check_etale(const HModule& M, std::size_t radius) {
    EtaleReport rep;
    ModuleDiagram md = diagram_from_hecke_module(M);
    auto region = build_region(RegionKind::HalfTree, M.gd, radius);
    CoeffSystem csys = spread(md.dia, region);
    ChainComplex cc = chain_complex(csys);
    Contraction con = standard_contraction(M.gd, region->pctx);

    ChainOperator phi = phi_op(csys, cc, con.t);
    ChainOperator psi = psi_op(csys, cc, con.t);

    // psi_t phi_t = id on chains supported at depth <= radius - pairing
    rep.psi_phi_identity = true;
    auto check_idblock = [&](const MatrixZm& comp, bool deg1, std::size_t max_depth,
                             std::size_t min_depth) {
        const Region& reg = *region;
        const auto& ds = deg1 ? cc.deg1 : cc.deg0;
        const auto& blocks = deg1 ? cc.cblock : cc.vblock;
        std::size_t nfaces = deg1 ? reg.chambers.size() : reg.vertices.size();
        for (std::size_t f = 0; f < nfaces; ++f) {
            if (blocks[f] == SIZE_MAX) continue;
            std::size_t depth = reg.face_depth(Face{deg1, f});
            if (depth > max_depth || depth < min_depth) continue;
            for (std::size_t i = 0; i < ds.dims[blocks[f]]; ++i) {
                std::vector<u64> e(ds.total.ambient, 0);
                e[ds.offsets[blocks[f]] + i] = 1 % M.ring.m;
                auto img = row_times_matrix(e, comp);
                for (std::size_t j = 0; j < img.size(); ++j)
                    img[j] = (img[j] + M.ring.m - e[j]) % M.ring.m;
                // compare as elements of the block module
                if (!ds.total.is_zero_element(img)) return false;
            }
        }
        return true;
    };

    std::size_t safe = radius >= con.pairing ? radius - con.pairing : 0;
    MatrixZm pf1 = phi.deg1.mul(psi.deg1), pf0 = phi.deg0.mul(psi.deg0);
    rep.psi_phi_identity =
        check_idblock(pf1, true, safe, 0) && check_idblock(pf0, false, safe, 0);

    // sum over cosets of u phi_t psi_t u^{-1} = id on the shrunken half-tree
    MatrixZm acc1(M.ring, cc.deg1.total.ambient, cc.deg1.total.ambient);
    MatrixZm acc0(M.ring, cc.deg0.total.ambient, cc.deg0.total.ambient);
    for (const auto& u : con.cosets) {
        ChainOperator phiu = phi_op(csys, cc, u);
        ChainOperator phiu_inv = phi_op(csys, cc, ge_inv(region->pctx, u));
        // first u^{-1}, then psi_t, then phi_t, then u
        acc1 = acc1.add(phiu_inv.deg1.mul(psi.deg1).mul(phi.deg1).mul(phiu.deg1));
        acc0 = acc0.add(phiu_inv.deg0.mul(psi.deg0).mul(phi.deg0).mul(phiu.deg0));
    }
    // the identity is guaranteed on BT+(t s C0) with s strictly dominant;
    // the minimal choice s = t shrinks by twice the pairing
    std::size_t shrink = 2 * con.pairing;
    rep.etale_identity = check_idblock(acc1, true, radius + 1, shrink) &&
                         check_idblock(acc0, false, radius + 1, shrink);
    return rep;
}

HalfTreeReport halftree_h0(const HModule& M, std::size_t radius) {
    HalfTreeReport rep;
    ModuleDiagram md = diagram_from_hecke_module(M);
    Contraction con_probe = standard_contraction(
        M.gd, PadicCtx{M.gd.q, precision_from_env(radius)});
    const std::size_t d = con_probe.pairing;
    if (radius <= d) throw std::invalid_argument("halftree_h0: radius too small");

    // ray invariants complex for iota_x0 and the scalar-restriction comparison
    auto apreg = build_region(RegionKind::Apartment, M.gd, radius);
    CoeffSystem apcs = spread(md.dia, apreg);
    ApartmentSystem asys = apartment_system(apcs);
    ChainComplex ray = invariants_complex(asys, true);
    ChainComplex line = invariants_complex(asys, false);
    PresentedModule h0ray_full = homology0(ray);
    MinimizedModule h0ray = minimize(h0ray_full);
    rep.h0_ray = h0ray.module;

    std::size_t v0 = SIZE_MAX;
    for (std::size_t v = 0; v < apreg->vertices.size(); ++v)
        if (apreg->vertices[v].coord == 0) v0 = v;
    MatrixZm inject(M.ring, asys.inv.x0.module.carrier.ambient, ray.deg0.total.ambient);
    for (std::size_t i = 0; i < inject.rows; ++i)
        inject.at(i, ray.deg0.offsets[ray.vblock[v0]] + i) = 1 % M.ring.m;
    ModuleMap iota(asys.inv.x0.module.carrier, h0ray.module, inject.mul(h0ray.to_min));
    rep.iota_x0_bijective = iota.bijective();

    // extension by zero: ray H0 -> line H0, then compare with M
    PresentedModule h0line_full = homology0(line);
    MinimizedModule h0line = minimize(h0line_full);
    MatrixZm ext(M.ring, ray.deg0.total.ambient, line.deg0.total.ambient);
    for (std::size_t v = 0; v < apreg->vertices.size(); ++v) {
        if (ray.vblock[v] == SIZE_MAX) continue;
        for (std::size_t i = 0; i < ray.deg0.dims[ray.vblock[v]]; ++i)
            ext.at(ray.deg0.offsets[ray.vblock[v]] + i,
                   line.deg0.offsets[line.vblock[v]] + i) = 1 % M.ring.m;
    }
    ModuleMap cmp(h0ray.module, h0line.module,
                  h0ray.from_min.mul(ext).mul(h0line.to_min));
    rep.scalar_restriction_iso = cmp.well_defined() && cmp.bijective();

    // phi_t between truncations of the full half-tree complex
    auto big = build_region(RegionKind::HalfTree, M.gd, radius);
    auto small = build_region(RegionKind::HalfTree, M.gd, radius - d);
    CoeffSystem cbig = spread(md.dia, big);
    CoeffSystem csmall = spread(md.dia, small);
    ChainComplex ccb = chain_complex(cbig);
    ChainComplex ccs = chain_complex(csmall);
    Contraction con = standard_contraction(M.gd, big->pctx);

    MatrixZm map0(M.ring, ccs.deg0.total.ambient, ccb.deg0.total.ambient);
    for (std::size_t v = 0; v < small->vertices.size(); ++v) {
        // act by t on the small-region vertex, land in the big region
        const auto& sv = small->vertices[v];
        VertexKey kv = vertex_act(big->pctx, con.t, sv.key);
        auto bid = big->vertex_id(kv);
        if (!bid) throw std::logic_error("halftree_h0: contraction leaves the big region");
        const auto& bv = big->vertices[*bid];
        const PadicCtx& pc = big->pctx;
        Mat2P elt = m2_mul(pc, m2_mul(pc, ge_matrix(pc, bv.transport), ge_matrix(pc, con.t)),
                           m2_inv(pc, ge_matrix(pc, sv.transport)));
        MatrixZm matrix;
        if (sv.type == bv.type) {
            auto mat = chart_reduce(pc, elt, sv.type, M.gd.kind == GroupKind::PGL2);
            matrix = md.dia.vertex_value(sv.type)
                         .action[md.dia.pd(sv.type).quo->id_of_mat(mat)];
        } else {
            Mat2P b = m2_mul(pc, m2_inv(pc, lift_omega_mat(pc)), elt);
            auto matb = chart_reduce(pc, b, sv.type, true);
            MatrixZm act_b =
                md.dia.vertex_value(sv.type).action[md.dia.pd(sv.type).quo->id_of_mat(matb)];
            matrix = act_b.mul(sv.type == 0 ? *md.dia.c01 : *md.dia.c10);
        }
        put_block(map0, ccs.deg0.offsets[ccs.vblock[v]], ccb.deg0.offsets[ccb.vblock[*bid]],
                  matrix, false);
    }
    PresentedModule h0small_full = homology0(ccs);
    MinimizedModule h0small = minimize(h0small_full);
    PresentedModule h0big_full = homology0(ccb);
    MinimizedModule h0big = minimize(h0big_full);
    ModuleMap phi_t(h0small.module, h0big.module,
                    h0small.from_min.mul(map0).mul(h0big.to_min));
    rep.phi_t_injective = phi_t.well_defined() && phi_t.injective();
    if (!M.carrier.is_zero_module() && h0small.module.is_zero_module())
        rep.phi_t_injective = false;
    return rep;
}

LocallyConstantReport check_locally_constant(const HModule& M, std::size_t radius) {
    LocallyConstantReport rep;
    ModuleDiagram md = diagram_from_hecke_module(M);
    auto region = build_region(RegionKind::Apartment, M.gd, radius);
    CoeffSystem csys = spread(md.dia, region);
    ApartmentSystem asys = apartment_system(csys);

    rep.transitions_bijective = true;
    for (std::size_t c = 0; c < region->chambers.size(); ++c) {
        const auto& ch = region->chambers[c];
        auto check = [&](std::size_t vid, const MatrixZm& mat) {
            int type = region->vertices[vid].type;
            ModuleMap t(csys.dia.d_C.carrier, asys.inv.vertex(type).module.carrier, mat);
            if (!t.bijective()) rep.transitions_bijective = false;
        };
        check(ch.v_near, asys.tmaps[c].to_near);
        check(ch.v_far, asys.tmaps[c].to_far);
    }

    // tau_s units in the parahoric algebras on the invariants modules
    rep.tau_units = true;
    for (int type = 0; type < 2; ++type) {
        const auto& inv = asys.inv.vertex(type);
        std::size_t idx = inv.module.algebra->index.at(M.gd.simple(type));
        ModuleMap act(inv.module.carrier, inv.module.carrier, inv.module.action[idx]);
        if (!act.bijective()) rep.tau_units = false;
    }

    // the commuting square: t^{gamma C}_x o c_{gamma,C} = tau_gamma o t^C_x
    rep.square_commutes = true;
    const PadicCtx& ctx = region->pctx;
    for (int type = 0; type < 2; ++type) {
        GroupElt gamma = ge_from_mat(lift_simple_mat(ctx, type));
        std::size_t v = type == 0 ? *region->vertex_id(base_vertex_x0())
                                  : *region->vertex_id(base_vertex_x1());
        std::size_t baseC = 0;  // the base chamber is built first
        auto movedC = region->act(gamma, Face{true, baseC});
        if (!movedC) continue;
        auto cop = transport_operator(csys, gamma, Face{true, baseC});
        if (!cop) continue;
        std::size_t gc = movedC->id;
        const auto& tg = asys.tmaps[gc];
        MatrixZm t_gc_x = region->chambers[gc].v_near == v ? tg.to_near : tg.to_far;
        const auto& tb = asys.tmaps[baseC];
        MatrixZm t_c_x = region->chambers[baseC].v_near == v ? tb.to_near : tb.to_far;
        const auto& inv = asys.inv.vertex(type);
        std::size_t idx = inv.module.algebra->index.at(M.gd.simple(type));
        MatrixZm lhs = cop->second.mul(t_gc_x);
        MatrixZm rhs = t_c_x.mul(inv.module.action[idx]);
        ModuleMap l(csys.dia.d_C.carrier, inv.module.carrier, lhs);
        ModuleMap r(csys.dia.d_C.carrier, inv.module.carrier, rhs);
        if (!l.equals(r)) rep.square_commutes = false;
    }
    return rep;
}

}  // namespace hkcoeff
