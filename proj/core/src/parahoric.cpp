#include "hkcoeff/parahoric.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hkcoeff {

namespace {

std::array<u64, 4> canonical_mat(GroupKind kind, std::array<u64, 4> m, u64 q) {
    for (auto& x : m) x %= q;
    if (kind != GroupKind::PGL2) return m;
    for (std::size_t k = 0; k < 4; ++k) {
        if (m[k] != 0) {
            i64 g, s, t;
            xgcd_i64(static_cast<i64>(m[k]), static_cast<i64>(q), g, s, t);
            u64 inv = static_cast<u64>(((s % (i64)q) + (i64)q) % (i64)q);
            for (auto& x : m) x = x * inv % q;
            return m;
        }
    }
    throw std::logic_error("canonical_mat: zero matrix");
}

std::array<u64, 4> mat_mul_modq(const std::array<u64, 4>& a, const std::array<u64, 4>& b, u64 q) {
    return {(a[0] * b[0] + a[1] * b[2]) % q, (a[0] * b[1] + a[1] * b[3]) % q,
            (a[2] * b[0] + a[3] * b[2]) % q, (a[2] * b[1] + a[3] * b[3]) % q};
}

u64 det_modq(const std::array<u64, 4>& a, u64 q) {
    return (a[0] * a[3] % q + q - a[1] * a[2] % q) % q;
}

u64 inv_modq(u64 a, u64 q) {
    i64 g, s, t;
    xgcd_i64(static_cast<i64>(a % q), static_cast<i64>(q), g, s, t);
    return static_cast<u64>(((s % (i64)q) + (i64)q) % (i64)q);
}

// torus class of a triangular matrix in the vertex chart
TorusElt torus_class_of_diag(GroupKind kind, u64 a, u64 d, u64 q) {
    switch (kind) {
        case GroupKind::SL2: return TorusElt{a % q};
        case GroupKind::PGL2: return TorusElt{a % q * inv_modq(d, q) % q};
        case GroupKind::GL2: return TorusElt{a % q, d % q};
    }
    throw std::logic_error("torus_class_of_diag");
}

MatrixZm kron_with_identity(const MatrixZm& A, std::size_t nM) {
    MatrixZm out(A.ring, A.rows * nM, A.cols * nM);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            u64 v = A.at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < nM; ++j) out.at(i * nM + j, k * nM + j) = v;
        }
    return out;
}

}  // namespace

std::size_t FiniteQuotient::id_of_mat(std::array<u64, 4> m) const {
    m = canonical_mat(gd.kind, m, gd.q);
    for (std::size_t i = 0; i < mats.size(); ++i)
        if (mats[i] == m) return i;
    throw std::logic_error("FiniteQuotient::id_of_mat: not a group element");
}

std::size_t FiniteQuotient::id_of_celt(const TorusElt& t, i64 omega) const {
    i64 e = dagger && gd.kind == GroupKind::PGL2 ? ((omega % 2) + 2) % 2 : 0;
    for (std::size_t i = 0; i < celts.size(); ++i)
        if (celts[i].first == t && celts[i].second == e) return i;
    throw std::logic_error("FiniteQuotient::id_of_celt: not found");
}

std::size_t FiniteQuotient::from_torus(const TorusElt& t) const {
    if (!is_vertex()) return id_of_celt(t, 0);
    u64 q = gd.q;
    switch (gd.kind) {
        case GroupKind::SL2: return id_of_mat({t[0], 0, 0, inv_modq(t[0], q)});
        case GroupKind::PGL2: return id_of_mat({t[0], 0, 0, 1});
        case GroupKind::GL2: return id_of_mat({t[0], 0, 0, t[1]});
    }
    throw std::logic_error("from_torus");
}

std::size_t FiniteQuotient::from_weyl(const WeylElt& w) const {
    if (!is_vertex()) {
        if (w.word.len != 0) throw std::invalid_argument("from_weyl: chamber level has no letters");
        return id_of_celt(w.torus, w.omega);
    }
    if (w.omega != 0) throw std::invalid_argument("from_weyl: omega does not stabilize a vertex");
    std::size_t id = from_torus(w.torus);
    u64 q = gd.q;
    for (std::size_t k = 0; k < w.word.len; ++k) {
        int l = w.word.letter(k);
        std::array<u64, 4> nmat;
        if (face == FaceLabel::x0) {
            if (l != 0) throw std::invalid_argument("from_weyl: s1 does not stabilize x0");
            nmat = {0, 1, q - 1, 0};  // reduction of n_{s0}
        } else {
            if (l != 1) throw std::invalid_argument("from_weyl: s0 does not stabilize x1");
            nmat = {0, q - 1, 1, 0};  // reduction of n_{s1} in the x1 chart
        }
        id = mul(id, id_of_mat(nmat));
    }
    return id;
}

std::vector<std::size_t> FiniteQuotient::subgroup(SubgroupTag tag) const {
    std::vector<std::size_t> out;
    if (!is_vertex()) {
        switch (tag) {
            case SubgroupTag::ProP:
            case SubgroupTag::OppUnipotent:
                out.push_back(e_id);
                break;
            case SubgroupTag::Iwahori:
            case SubgroupTag::Torus:
                for (std::size_t i = 0; i < celts.size(); ++i)
                    if (celts[i].second == 0) out.push_back(i);
                break;
        }
        return out;
    }
    const bool upper_is_prop = face == FaceLabel::x0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const auto& m = mats[i];
        bool upper_tri = m[2] == 0, lower_tri = m[1] == 0;
        // canonical forms put the leading entry of a unipotent class at 1
        bool upper_uni = upper_tri && m[0] == 1 && m[3] == 1;
        bool lower_uni = lower_tri && m[0] == 1 && m[3] == 1;
        bool diag = m[1] == 0 && m[2] == 0;
        switch (tag) {
            case SubgroupTag::ProP:
                if (upper_is_prop ? upper_uni : lower_uni) out.push_back(i);
                break;
            case SubgroupTag::Iwahori:
                if (upper_is_prop ? upper_tri : lower_tri) out.push_back(i);
                break;
            case SubgroupTag::OppUnipotent:
                if (upper_is_prop ? lower_uni : upper_uni) out.push_back(i);
                break;
            case SubgroupTag::Torus:
                if (diag) out.push_back(i);
                break;
        }
    }
    return out;
}

std::shared_ptr<FiniteQuotient> finite_quotient(const GroupData& gd, FaceLabel face, bool dagger) {
    if (dagger && gd.kind == GroupKind::GL2)
        throw std::invalid_argument("finite_quotient: GL2 dagger level rejected");
    auto quo = std::make_shared<FiniteQuotient>();
    quo->gd = gd;
    quo->face = face;
    quo->dagger = dagger;
    const u64 q = gd.q;

    if (face == FaceLabel::C) {
        std::vector<i64> omegas{0};
        if (dagger && gd.kind == GroupKind::PGL2) omegas = {0, 1};
        for (const auto& t : gd.torus_elements())
            for (i64 e : omegas) quo->celts.emplace_back(t, e);
        std::size_t n = quo->celts.size();
        quo->mul_table.assign(n, std::vector<std::size_t>(n));
        quo->inv_table.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto& [t1, e1] = quo->celts[i];
                const auto& [t2, e2] = quo->celts[j];
                TorusElt t = gd.torus_mul(t1, e1 % 2 ? gd.conj_omega(t2) : t2);
                quo->mul_table[i][j] = quo->id_of_celt(t, e1 + e2);
            }
        }
        quo->e_id = quo->id_of_celt(gd.torus_identity(), 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (quo->mul_table[i][j] == quo->e_id) quo->inv_table[i] = j;
        for (std::size_t i = 0; i < n; ++i) quo->gens.push_back(i);
        return quo;
    }

    // vertex quotient: matrices over F_q
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b)
            for (u64 c = 0; c < q; ++c)
                for (u64 d = 0; d < q; ++d) {
                    std::array<u64, 4> m{a, b, c, d};
                    u64 det = det_modq(m, q);
                    if (det == 0) continue;
                    if (gd.kind == GroupKind::SL2 && det != 1) continue;
                    m = canonical_mat(gd.kind, m, q);
                    if (std::find(quo->mats.begin(), quo->mats.end(), m) == quo->mats.end())
                        quo->mats.push_back(m);
                }
    std::sort(quo->mats.begin(), quo->mats.end());
    std::size_t n = quo->mats.size();
    quo->mul_table.assign(n, std::vector<std::size_t>(n));
    quo->inv_table.assign(n, 0);
    std::map<std::array<u64, 4>, std::size_t> lookup;
    for (std::size_t i = 0; i < n; ++i) lookup[quo->mats[i]] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            quo->mul_table[i][j] =
                lookup.at(canonical_mat(gd.kind, mat_mul_modq(quo->mats[i], quo->mats[j], q), q));
    quo->e_id = lookup.at(canonical_mat(gd.kind, {1, 0, 0, 1}, q));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (quo->mul_table[i][j] == quo->e_id) quo->inv_table[i] = j;

    // generating set: the two unipotents plus a torus generator
    quo->gens.push_back(lookup.at(canonical_mat(gd.kind, {1, 1, 0, 1}, q)));
    quo->gens.push_back(lookup.at(canonical_mat(gd.kind, {1, 0, 1, 1}, q)));
    if (q > 2 && gd.kind != GroupKind::SL2)
        quo->gens.push_back(lookup.at(canonical_mat(gd.kind, {q - 1, 0, 0, 1}, q)));
    if (q > 2 && gd.kind == GroupKind::SL2)
        quo->gens.push_back(lookup.at(canonical_mat(gd.kind, {q - 1, 0, 0, q - 1}, q)));
    // check connectivity: the generators reach the whole group
    std::set<std::size_t> reached{quo->e_id};
    std::vector<std::size_t> frontier{quo->e_id};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (auto x : frontier)
            for (auto g : quo->gens) {
                std::size_t y = quo->mul(g, x);
                if (reached.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    if (reached.size() != n) throw std::logic_error("finite_quotient: generators do not generate");
    return quo;
}

ValidationReport FiniteRep::validate() const {
    ValidationReport rep;
    const auto& Q = *quo;
    if (action.size() != Q.size()) {
        rep.fail("action table size mismatch");
        return rep;
    }
    for (std::size_t g = 0; g < Q.size(); ++g)
        if (!ModuleMap(carrier, carrier, action[g]).well_defined()) {
            rep.fail("group action does not preserve the relations");
            return rep;
        }
    ModuleMap ident(carrier, carrier, MatrixZm::identity(ring, carrier.ambient));
    if (!ModuleMap(carrier, carrier, action[Q.e_id]).equals(ident))
        rep.fail("identity does not act trivially");
    for (auto g : Q.gens)
        for (std::size_t h = 0; h < Q.size(); ++h) {
            MatrixZm lhs = action[Q.mul(g, h)];
            MatrixZm rhs = action[h].mul(action[g]);
            if (!ModuleMap(carrier, carrier, lhs).equals(ModuleMap(carrier, carrier, rhs))) {
                std::ostringstream os;
                os << "homomorphism property fails at generator pair (" << g << "," << h << ")";
                rep.fail(os.str());
                return rep;
            }
        }
    return rep;
}

FiniteRep FiniteRep::dual() const {
    DualModule d = module_dual(carrier);
    FiniteRep out;
    out.quo = quo;
    out.ring = ring;
    out.carrier = d.module;
    const MatrixZm& N = d.functionals;
    for (std::size_t g = 0; g < quo->size(); ++g) {
        MatrixZm MgT = action[quo->inv(g)].transpose();
        MatrixZm mat(ring, N.rows, N.rows);
        for (std::size_t k = 0; k < N.rows; ++k) {
            auto img = row_times_matrix(N.row(k), MgT);
            auto sol = solve_linear(N, img);
            if (!sol) throw std::logic_error("FiniteRep::dual: image escapes the functional span");
            mat.set_row(k, sol->particular);
        }
        out.action.push_back(std::move(mat));
    }
    return out;
}

FiniteRep trivial_rep(std::shared_ptr<const FiniteQuotient> quo, RingZm ring) {
    FiniteRep out;
    out.quo = quo;
    out.ring = ring;
    out.carrier = PresentedModule::free_module(ring, 1);
    out.action.assign(quo->size(), MatrixZm::identity(ring, 1));
    return out;
}

ParahoricData make_parahoric_data(const GroupData& gd, RingZm ring, FaceLabel face, bool dagger) {
    ParahoricData pd;
    pd.gd = gd;
    pd.ring = ring;
    pd.face = face;
    pd.dagger = dagger;
    pd.quo = finite_quotient(gd, face, dagger);
    HeckeContext ctx(gd, ring);
    pd.alg = std::make_shared<FiniteAlgebra>(parahoric_algebra(ctx, face, dagger));

    const auto& Q = *pd.quo;
    auto uprime = Q.subgroup(SubgroupTag::ProP);
    std::set<std::size_t> uset(uprime.begin(), uprime.end());

    // cosets of the pro-p image
    std::vector<std::size_t> coset_of(Q.size(), SIZE_MAX);
    std::vector<std::size_t> reps;
    for (std::size_t g = 0; g < Q.size(); ++g) {
        if (coset_of[g] != SIZE_MAX) continue;
        std::size_t c = reps.size();
        reps.push_back(g);
        pd.cosets.push_back({});
        for (auto u : uprime) {
            std::size_t gu = Q.mul(g, u);
            coset_of[gu] = c;
            pd.cosets.back().push_back(gu);
        }
    }
    const std::size_t ncos = reps.size();
    pd.unit_coset = coset_of[Q.e_id];

    pd.X.quo = pd.quo;
    pd.X.ring = ring;
    pd.X.carrier = PresentedModule::free_module(ring, ncos);
    for (std::size_t g = 0; g < Q.size(); ++g) {
        MatrixZm P(ring, ncos, ncos);
        for (std::size_t c = 0; c < ncos; ++c) P.at(c, coset_of[Q.mul(g, reps[c])]) = 1 % ring.m;
        pd.X.action.push_back(std::move(P));
    }

    // right action of the algebra basis by double-coset operators
    for (const auto& w : pd.alg->basis) {
        std::size_t wid = Q.from_weyl(w);
        MatrixZm R(ring, ncos, ncos);
        for (std::size_t c = 0; c < ncos; ++c) {
            std::set<std::size_t> hit;
            for (auto u1 : uprime)
                for (auto u2 : uprime)
                    hit.insert(coset_of[Q.mul(Q.mul(reps[c], Q.mul(u1, wid)), u2)]);
            for (auto h : hit) R.at(c, h) = 1 % ring.m;
        }
        pd.X_right.push_back(std::move(R));
    }

    // certificate: the double-coset operators realize the structure constants
    for (std::size_t i = 0; i < pd.alg->rank(); ++i)
        for (std::size_t j = 0; j < pd.alg->rank(); ++j) {
            MatrixZm lhs = pd.X_right[i].mul(pd.X_right[j]);
            MatrixZm rhs = MatrixZm::zero(ring, ncos, ncos);
            for (std::size_t k = 0; k < pd.alg->rank(); ++k)
                if (pd.alg->constants[i][j][k])
                    rhs = rhs.add(pd.X_right[k].scale(pd.alg->constants[i][j][k]));
            if (!(lhs == rhs))
                throw std::logic_error(
                    "make_parahoric_data: double-coset operators violate the structure constants");
        }
    // left and right actions commute
    for (auto g : Q.gens)
        for (std::size_t j = 0; j < pd.alg->rank(); ++j)
            if (!(pd.X.action[g].mul(pd.X_right[j]) == pd.X_right[j].mul(pd.X.action[g])))
                throw std::logic_error("make_parahoric_data: left/right actions do not commute");
    return pd;
}

InvariantSpace invariants(const FiniteRep& V, const std::vector<std::size_t>& subgroup_elts) {
    const RingZm ring = V.ring;
    const std::size_t n = V.carrier.ambient;
    MatrixZm sep = separation_matrix(V.carrier.relations, n);
    MatrixZm big(ring, n, 0);
    for (auto u : subgroup_elts) {
        MatrixZm diff = V.action[u].sub(MatrixZm::identity(ring, n));
        big = big.hstack(diff.mul(sep));
    }
    MatrixZm K = big.cols == 0 ? MatrixZm::identity(ring, n) : left_kernel(big);
    InvariantSpace out;
    out.generators = K;
    out.module = PresentedModule(ring, K.rows, kernel_mod(K, V.carrier.relations));
    return out;
}

InvariantSpace invariants(const FiniteRep& V, SubgroupTag tag) {
    return invariants(V, V.quo->subgroup(tag));
}

InvariantsModule invariants_module(const ParahoricData& pd, const FiniteRep& V) {
    const auto& Q = *pd.quo;
    auto uprime = Q.subgroup(SubgroupTag::ProP);
    InvariantSpace inv = invariants(V, uprime);
    const MatrixZm& K = inv.generators;

    InvariantsModule out;
    out.generators = K;
    out.module.algebra = pd.alg;
    out.module.carrier = inv.module;
    for (const auto& w : pd.alg->basis) {
        std::size_t wid = Q.from_weyl(w);
        // transversal of U' / (U' cap w U' w^{-1})
        std::set<std::size_t> small;
        for (auto u : uprime) {
            std::size_t c = Q.mul(Q.mul(Q.inv(wid), u), wid);
            if (std::find(uprime.begin(), uprime.end(), c) != uprime.end()) small.insert(u);
        }
        std::vector<std::size_t> transversal;
        std::set<std::size_t> covered;
        for (auto u : uprime) {
            if (covered.count(u)) continue;
            transversal.push_back(u);
            for (auto h : small) covered.insert(Q.mul(u, h));
        }
        // tau_w * v = sum over transversal of g' w v
        MatrixZm op = MatrixZm::zero(V.ring, V.carrier.ambient, V.carrier.ambient);
        for (auto g : transversal) op = op.add(V.action[wid].mul(V.action[g]));
        MatrixZm mat(V.ring, K.rows, K.rows);
        for (std::size_t k = 0; k < K.rows; ++k) {
            auto img = row_times_matrix(K.row(k), op);
            auto sol = solve_mod(K, V.carrier.relations, img);
            if (!sol)
                throw std::logic_error("invariants_module: operator leaves the fixed space");
            mat.set_row(k, *sol);
        }
        out.module.action.push_back(std::move(mat));
    }
    auto rep = out.module.validate();
    if (!rep.ok)
        throw std::logic_error("invariants_module: induced module invalid: " + rep.str());
    return out;
}

namespace {

// span of the orbit of the given row vectors under the full group action
MatrixZm generated_subrep(const FiniteRep& V, const MatrixZm& rows) {
    std::vector<std::vector<u64>> gen;
    for (std::size_t r = 0; r < rows.rows; ++r)
        for (std::size_t g = 0; g < V.quo->size(); ++g)
            gen.push_back(row_times_matrix(rows.row(r), V.action[g]));
    for (std::size_t r = 0; r < V.carrier.relations.rows; ++r)
        gen.push_back(V.carrier.relations.row(r));
    if (gen.empty()) return MatrixZm(V.ring, 0, V.carrier.ambient);
    return howell_form(MatrixZm::from_rows(V.ring, gen));
}

}  // namespace

ConditionHReport check_condition_H(const ParahoricData& pd, const FiniteRep& V) {
    ConditionHReport rep;
    auto uprime = pd.quo->subgroup(SubgroupTag::ProP);
    MatrixZm I = MatrixZm::identity(V.ring, V.carrier.ambient);

    InvariantSpace inv = invariants(V, uprime);
    MatrixZm spanV = generated_subrep(V, inv.generators);
    rep.rep_generated = spanV == I || V.carrier.size() == 1;
    if (!rep.rep_generated) {
        for (std::size_t j = 0; j < V.carrier.ambient; ++j) {
            std::vector<u64> e(V.carrier.ambient, 0);
            e[j] = 1 % V.ring.m;
            if (!in_span(spanV, e)) {
                rep.witness = e;
                break;
            }
        }
    }

    FiniteRep Vd = V.dual();
    InvariantSpace invd = invariants(Vd, uprime);
    MatrixZm spanD = generated_subrep(Vd, invd.generators);
    rep.dual_generated = spanD == MatrixZm::identity(V.ring, Vd.carrier.ambient) ||
                         Vd.carrier.size() == 1;
    rep.holds = rep.rep_generated && rep.dual_generated;
    return rep;
}

TFunctorResult t_functor(const ParahoricData& pd, const AlgebraModule& M) {
    const RingZm ring = pd.ring;
    const std::size_t r = pd.alg->rank();
    const std::size_t nX = pd.X.carrier.ambient;
    const std::size_t nM = M.carrier.ambient;
    const std::size_t dim = nX * nM;

    // D = Hom_S(X, S) (right-linear maps; X and S are free over R)
    std::vector<std::pair<MatrixZm, MatrixZm>> pairs;
    for (std::size_t b = 0; b < r; ++b)
        pairs.emplace_back(pd.X_right[b], pd.alg->right_regular(b));
    HomSpace D = hom_space(PresentedModule::free_module(ring, nX),
                           PresentedModule::free_module(ring, r), pairs);

    // kernel of tau_{M}: X (x) M -> Hom_S(D, M)
    MatrixZm sepM = separation_matrix(M.carrier.relations, nM);
    MatrixZm big(ring, dim, 0);
    for (const auto& Phi : D.generators) {
        MatrixZm T(ring, dim, nM);
        for (std::size_t i = 0; i < nX; ++i) {
            // phi(e_i) in S-coordinates is row i of Phi
            MatrixZm acting = M.act(Phi.row(i));
            for (std::size_t j = 0; j < nM; ++j) {
                auto val = acting.row(j);  // (e_j) * act = action on the basis vector
                for (std::size_t l = 0; l < nM; ++l) T.at(i * nM + j, l) = val[l];
            }
        }
        big = big.hstack(T.mul(sepM));
    }
    MatrixZm rel = big.cols == 0 ? MatrixZm(ring, 0, dim) : left_kernel(big);

    // shrink the presentation: the tensor coordinates are highly redundant
    PresentedModule full(ring, dim, rel);
    MinimizedModule mini = minimize(full);

    TFunctorResult out;
    out.rep.quo = pd.quo;
    out.rep.ring = ring;
    out.rep.carrier = mini.module;
    for (std::size_t g = 0; g < pd.quo->size(); ++g) {
        MatrixZm big_act = kron_with_identity(pd.X.action[g], nM);
        out.rep.action.push_back(mini.from_min.mul(big_act).mul(mini.to_min));
    }

    MatrixZm C(ring, nM, dim);
    for (std::size_t j = 0; j < nM; ++j) C.at(j, pd.unit_coset * nM + j) = 1 % ring.m;
    out.canonical = ModuleMap(M.carrier, out.rep.carrier, C.mul(mini.to_min));
    out.to_min = mini.to_min;
    out.from_min = mini.from_min;
    if (!out.canonical.well_defined())
        throw std::logic_error("t_functor: canonical map not well defined");
    for (auto g : pd.quo->gens)
        if (!ModuleMap(out.rep.carrier, out.rep.carrier, out.rep.action[g]).well_defined())
            throw std::logic_error("t_functor: group action does not descend to the image");
    return out;
}

bool cabanes_roundtrip(const ParahoricData& pd, const AlgebraModule& M) {
    TFunctorResult tf = t_functor(pd, M);
    InvariantsModule IM = invariants_module(pd, tf.rep);
    const std::size_t nM = M.carrier.ambient;
    MatrixZm C2(pd.ring, nM, IM.module.carrier.ambient);
    for (std::size_t j = 0; j < nM; ++j) {
        auto v = tf.canonical.matrix.row(j);
        auto sol = solve_mod(IM.generators, tf.rep.carrier.relations, v);
        if (!sol) return false;  // canonical image not invariant
        C2.set_row(j, *sol);
    }
    ModuleMap can(M.carrier, IM.module.carrier, C2);
    if (!can.well_defined() || !can.bijective()) return false;
    for (std::size_t b = 0; b < pd.alg->rank(); ++b) {
        ModuleMap lhs(M.carrier, IM.module.carrier, M.action[b].mul(C2));
        ModuleMap rhs(M.carrier, IM.module.carrier, C2.mul(IM.module.action[b]));
        if (!lhs.equals(rhs)) return false;
    }
    return true;
}

FrobeniusMatrix frobenius_matrix(const HeckeContext& ctx, FaceLabel face) {
    const GroupData& gd = ctx.gd;
    const RingZm ring = ctx.ring;
    std::vector<WeylElt> wf{gd.identity()};
    WeylElt w0 = gd.identity();
    if (face != FaceLabel::C) {
        int i = face == FaceLabel::x0 ? 0 : 1;
        wf.push_back(gd.simple(i));
        w0 = gd.simple(i);
    }
    auto torus = gd.torus_elements();
    const u64 o = torus.size();
    auto torus_index = [&](const TorusElt& t) {
        for (std::size_t k = 0; k < o; ++k)
            if (torus[k] == t) return k;
        throw std::logic_error("frobenius_matrix: torus element missing");
    };

    // theta extraction: coefficients along the coset (T0/T1) * w0
    auto theta = [&](const HeckeElt& h) {
        std::vector<u64> out(o, 0);
        for (const auto& [w, c] : h) {
            if (w.word == w0.word && w.omega == 0) out[torus_index(w.torus)] = c;
        }
        return out;
    };

    FrobeniusMatrix fm;
    fm.wf_size = wf.size();
    fm.torus_order = o;
    fm.block = MatrixZm(ring, wf.size() * o, wf.size() * o);
    for (std::size_t vi = 0; vi < wf.size(); ++vi)
        for (std::size_t wi = 0; wi < wf.size(); ++wi) {
            WeylElt rhs = gd.multiply(gd.inverse(wf[wi]), w0);
            HeckeElt prod = ctx.tau_multiply(ctx.tau(wf[vi]), ctx.tau(rhs));
            std::vector<u64> entry = theta(prod);
            // regular representation of the group-algebra entry
            for (std::size_t a = 0; a < o; ++a)
                for (std::size_t b = 0; b < o; ++b) {
                    // coefficient of (xi * torus_a = torus_b)
                    TorusElt need = gd.torus_mul(torus[b], gd.torus_inv(torus[a]));
                    fm.block.at(vi * o + a, wi * o + b) = entry[torus_index(need)];
                }
        }
    fm.invertible = matrix_inverse(fm.block).has_value();
    return fm;
}

FiniteRep induce_rep(const ParahoricData& pd, const FiniteRep& V_at_C) {
    if (pd.face == FaceLabel::C)
        throw std::invalid_argument("induce_rep: target must be a vertex");
    const auto& Q = *pd.quo;
    const RingZm ring = pd.ring;
    auto borel = Q.subgroup(SubgroupTag::Iwahori);
    std::set<std::size_t> bset(borel.begin(), borel.end());

    std::vector<std::size_t> reps;
    std::vector<std::size_t> coset_of(Q.size(), SIZE_MAX);
    for (std::size_t g = 0; g < Q.size(); ++g) {
        if (coset_of[g] != SIZE_MAX) continue;
        reps.push_back(g);
        for (auto b : borel) coset_of[Q.mul(g, b)] = reps.size() - 1;
    }
    const std::size_t ncos = reps.size();
    const std::size_t nV = V_at_C.carrier.ambient;

    // torus class of a Borel element in this chart
    auto borel_class = [&](std::size_t b) {
        const auto& m = Q.mats[b];
        return torus_class_of_diag(pd.gd.kind, m[0], m[3], pd.gd.q);
    };

    std::vector<PresentedModule> parts(ncos, V_at_C.carrier);
    DirectSum ds = DirectSum::of(parts);
    FiniteRep out;
    out.quo = pd.quo;
    out.ring = ring;
    out.carrier = ds.total;
    for (std::size_t g = 0; g < Q.size(); ++g) {
        MatrixZm mat(ring, ds.total.ambient, ds.total.ambient);
        for (std::size_t c = 0; c < ncos; ++c) {
            std::size_t gi = Q.mul(g, reps[c]);
            std::size_t c2 = coset_of[gi];
            std::size_t b = Q.mul(Q.inv(reps[c2]), gi);
            if (!bset.count(b)) throw std::logic_error("induce_rep: coset bookkeeping broke");
            const MatrixZm& act = V_at_C.action[V_at_C.quo->from_torus(borel_class(b))];
            for (std::size_t i = 0; i < nV; ++i)
                for (std::size_t j = 0; j < nV; ++j)
                    mat.at(ds.offsets[c] + i, ds.offsets[c2] + j) = act.at(i, j);
        }
        out.action.push_back(std::move(mat));
    }
    return out;
}

FiniteRep change_ring(const FiniteRep& V, RingZm target) {
    if (V.ring.m % target.m != 0)
        throw std::invalid_argument("change_ring: no ring map Z/m -> Z/m'");
    FiniteRep out;
    out.quo = V.quo;
    out.ring = target;
    MatrixZm rels(target, V.carrier.relations.rows, V.carrier.ambient);
    for (std::size_t i = 0; i < rels.rows; ++i)
        for (std::size_t j = 0; j < rels.cols; ++j)
            rels.at(i, j) = V.carrier.relations.at(i, j) % target.m;
    out.carrier = PresentedModule(target, V.carrier.ambient, rels);
    for (const auto& A : V.action) {
        MatrixZm B(target, A.rows, A.cols);
        for (std::size_t k = 0; k < A.a.size(); ++k) B.a[k] = A.a[k] % target.m;
        out.action.push_back(std::move(B));
    }
    return out;
}

AlgebraModule change_ring_module(const HeckeContext& target_ctx, const AlgebraModule& M,
                                 RingZm target) {
    if (M.carrier.ring.m % target.m != 0)
        throw std::invalid_argument("change_ring_module: no ring map");
    AlgebraModule out;
    out.algebra = std::make_shared<FiniteAlgebra>(
        parahoric_algebra(target_ctx, M.algebra->face, M.algebra->dagger));
    MatrixZm rels(target, M.carrier.relations.rows, M.carrier.ambient);
    for (std::size_t i = 0; i < rels.rows; ++i)
        for (std::size_t j = 0; j < rels.cols; ++j)
            rels.at(i, j) = M.carrier.relations.at(i, j) % target.m;
    out.carrier = PresentedModule(target, M.carrier.ambient, rels);
    for (const auto& A : M.action) {
        MatrixZm B(target, A.rows, A.cols);
        for (std::size_t k = 0; k < A.a.size(); ++k) B.a[k] = A.a[k] % target.m;
        out.action.push_back(std::move(B));
    }
    return out;
}

}  // namespace hkcoeff
