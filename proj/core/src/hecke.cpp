#include "hkcoeff/hecke.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hkcoeff {

void HeckeContext::add_term(HeckeElt& acc, const WeylElt& w, u64 c) const {
    c %= ring.m;
    if (c == 0) return;
    auto it = acc.find(w);
    if (it == acc.end()) {
        acc.emplace(w, c);
    } else {
        it->second = (it->second + c) % ring.m;
        if (it->second == 0) acc.erase(it);
    }
}

HeckeElt HeckeContext::tau(const WeylElt& w) const {
    HeckeElt h;
    h.emplace(w, 1 % ring.m);
    return h;
}

HeckeElt HeckeContext::add(const HeckeElt& a, const HeckeElt& b) const {
    HeckeElt out = a;
    for (const auto& [w, c] : b) add_term(out, w, c);
    return out;
}

HeckeElt HeckeContext::scale(const HeckeElt& a, u64 c) const {
    HeckeElt out;
    for (const auto& [w, v] : a) add_term(out, w, v * (c % ring.m));
    return out;
}

bool HeckeContext::equal(const HeckeElt& a, const HeckeElt& b) const { return a == b; }

HeckeElt HeckeContext::theta_element(int s) const {
    HeckeElt out;
    for (const auto& cls : gd.theta_classes[static_cast<std::size_t>(s)])
        add_term(out, gd.torus_elt(cls), 1);
    return out;
}

HeckeElt HeckeContext::right_by_torus(const HeckeElt& a, const TorusElt& t) const {
    HeckeElt out;
    WeylElt te = gd.torus_elt(t);
    for (const auto& [w, c] : a) add_term(out, gd.multiply(w, te), c);
    return out;
}

HeckeElt HeckeContext::right_by_omega(const HeckeElt& a, i64 e) const {
    if (e == 0) return a;
    HeckeElt out;
    WeylElt om = gd.omega_elt(e);
    for (const auto& [w, c] : a) add_term(out, gd.multiply(w, om), c);
    return out;
}

HeckeElt HeckeContext::right_by_letter(const HeckeElt& a, int i) const {
    HeckeElt out;
    WeylElt n = gd.simple(i);
    u64 qval = gd.q % ring.m;
    for (const auto& [v, c] : a) {
        WeylElt vn = gd.multiply(v, n);
        if (vn.length() == v.length() + 1) {
            add_term(out, vn, c);
        } else {
            // tau_v tau_n = q tau_{u sigma} + sum_x tau_{v h_x},  u = v n^{-1}
            WeylElt u = gd.multiply(v, gd.inverse(n));
            WeylElt us = gd.multiply(u, gd.torus_elt(gd.square[static_cast<std::size_t>(i)]));
            add_term(out, us, c * qval);
            for (const auto& cls : gd.theta_classes[static_cast<std::size_t>(i)])
                add_term(out, gd.multiply(v, gd.torus_elt(cls)), c);
        }
    }
    return out;
}

HeckeElt HeckeContext::tau_multiply(const HeckeElt& a, const HeckeElt& b) const {
    HeckeElt out;
    for (const auto& [w, c] : b) {
        // peel the normal form of w: torus, letters, omega
        HeckeElt cur = scale(a, c);
        cur = right_by_torus(cur, w.torus);
        for (std::size_t k = 0; k < w.word.len; ++k)
            cur = right_by_letter(cur, w.word.letter(k));
        cur = right_by_omega(cur, w.omega);
        for (const auto& [u, cv] : cur) add_term(out, u, cv);
    }
    return out;
}

std::string HeckeContext::str(const HeckeElt& a) const {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : a) {
        if (!first) os << " + ";
        first = false;
        if (c != 1) os << c << "*";
        os << "tau[" << weyl_str(gd, w) << "]";
    }
    return os.str();
}

std::vector<u64> FiniteAlgebra::multiply(const std::vector<u64>& x,
                                         const std::vector<u64>& y) const {
    std::vector<u64> out(rank(), 0);
    for (std::size_t i = 0; i < rank(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < rank(); ++j) {
            if (y[j] == 0) continue;
            u64 c = x[i] * y[j] % ring.m;
            for (std::size_t k = 0; k < rank(); ++k)
                out[k] = (out[k] + c * constants[i][j][k]) % ring.m;
        }
    }
    return out;
}

MatrixZm FiniteAlgebra::left_regular(std::size_t i) const {
    MatrixZm L(ring, rank(), rank());
    for (std::size_t j = 0; j < rank(); ++j)
        for (std::size_t k = 0; k < rank(); ++k) L.at(j, k) = constants[i][j][k];
    return L;
}

MatrixZm FiniteAlgebra::right_regular(std::size_t j) const {
    MatrixZm R(ring, rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t k = 0; k < rank(); ++k) R.at(i, k) = constants[i][j][k];
    return R;
}

std::vector<u64> FiniteAlgebra::coefficients(const HeckeElt& h) const {
    std::vector<u64> out(rank(), 0);
    for (const auto& [w, c] : h) {
        auto it = index.find(w);
        if (it == index.end())
            throw std::runtime_error("FiniteAlgebra::coefficients: support escapes the basis");
        out[it->second] = c % ring.m;
    }
    return out;
}

FiniteAlgebra parahoric_algebra(const HeckeContext& ctx, FaceLabel face, bool dagger) {
    FiniteAlgebra alg;
    alg.gd = ctx.gd;
    alg.ring = ctx.ring;
    alg.face = face;
    alg.dagger = dagger;
    alg.basis = ctx.gd.finite_weyl_group(face, dagger);
    for (std::size_t i = 0; i < alg.basis.size(); ++i) alg.index.emplace(alg.basis[i], i);
    alg.unit_index = alg.index.at(ctx.gd.identity());

    std::size_t r = alg.rank();
    alg.constants.assign(r, std::vector<std::vector<u64>>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            HeckeElt prod = ctx.tau_multiply(ctx.tau(alg.basis[i]), ctx.tau(alg.basis[j]));
            alg.constants[i][j] = alg.coefficients(prod);  // throws if not closed
        }
    // associativity certificate on the full basis
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                std::vector<u64> ei(r, 0), ej(r, 0), ek(r, 0);
                ei[i] = 1 % ctx.ring.m; ej[j] = 1 % ctx.ring.m; ek[k] = 1 % ctx.ring.m;
                auto lhs = alg.multiply(alg.multiply(ei, ej), ek);
                auto rhs = alg.multiply(ei, alg.multiply(ej, ek));
                if (lhs != rhs)
                    throw std::logic_error("parahoric_algebra: associativity failure");
            }
    return alg;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    os << (ok ? "ok" : "invalid");
    for (const auto& v : violations) os << "; " << v;
    return os.str();
}

namespace {

u64 dlog(u64 value, u64 base, u64 p) {
    u64 x = 1;
    for (u64 e = 0; e < p; ++e) {
        if (x == value % p) return e;
        x = x * base % p;
    }
    throw std::logic_error("dlog: not a power of the base");
}

std::string matrix_diff_witness(const MatrixZm& A, const MatrixZm& B) {
    for (std::size_t i = 0; i < A.rows; ++i)
        if (A.row(i) != B.row(i)) {
            std::ostringstream os;
            os << "generator row " << i;
            return os.str();
        }
    return "no witness";
}

}  // namespace

MatrixZm HModule::act_torus(const TorusElt& t) const {
    MatrixZm out = MatrixZm::identity(ring, carrier.ambient);
    if (gd.q == 2) return out;  // trivial torus
    auto gens = gd.torus_generators();
    u64 base = gens[0][0] != 1 ? gens[0][0] : gens[0][1];
    for (std::size_t f = 0; f < gd.torus_factors; ++f) {
        u64 e = dlog(t[f], base, gd.q);
        for (u64 k = 0; k < e; ++k) out = out.mul(act_torus_gen[f]);
    }
    return out;
}

MatrixZm HModule::act_weyl(const WeylElt& w) const {
    // mat(a*b) = mat(b)*mat(a): left factors apply last
    MatrixZm out = act_torus(w.torus);
    for (std::size_t k = 0; k < w.word.len; ++k) {
        const MatrixZm& L = w.word.letter(k) == 0 ? act_s0 : act_s1;
        out = L.mul(out);
    }
    if (w.omega != 0) {
        const MatrixZm& W = w.omega > 0 ? *act_omega : *act_omega_inv;
        i64 e = w.omega > 0 ? w.omega : -w.omega;
        for (i64 k = 0; k < e; ++k) out = W.mul(out);
    }
    return out;
}

MatrixZm HModule::act_hecke(const HeckeElt& h) const {
    MatrixZm out = MatrixZm::zero(ring, carrier.ambient, carrier.ambient);
    for (const auto& [w, c] : h) out = out.add(act_weyl(w).scale(c));
    return out;
}

ValidationReport HModule::validate() const {
    ValidationReport rep;
    const std::size_t n = carrier.ambient;
    auto expect = [&](const MatrixZm& A, const MatrixZm& B, const std::string& what) {
        ModuleMap fa(carrier, carrier, A), fb(carrier, carrier, B);
        if (!fa.sub(fb).is_zero()) rep.fail(what + " (" + matrix_diff_witness(A, B) + ")");
    };
    auto well_defined = [&](const MatrixZm& A, const std::string& what) {
        if (!ModuleMap(carrier, carrier, A).well_defined())
            rep.fail(what + ": does not preserve the relations");
    };

    well_defined(act_s0, "tau_s0");
    well_defined(act_s1, "tau_s1");
    for (const auto& T : act_torus_gen) well_defined(T, "torus generator");
    if (act_omega) well_defined(*act_omega, "tau_omega");

    // torus matrices: group relations of the torus quotient
    auto gens = gd.torus_generators();
    if (gens.size() != act_torus_gen.size()) {
        rep.fail("torus generator count mismatch");
        return rep;
    }
    MatrixZm I = MatrixZm::identity(ring, n);
    for (std::size_t f = 0; f < gens.size(); ++f) {
        MatrixZm pw = I;
        for (u64 k = 0; k < gd.q - 1; ++k) pw = pw.mul(act_torus_gen[f]);
        expect(pw, I, "torus generator order");
    }
    if (gens.size() == 2)
        expect(act_torus_gen[0].mul(act_torus_gen[1]), act_torus_gen[1].mul(act_torus_gen[0]),
               "torus commutativity");

    // conjugation relations tau_s tau_t = tau_{s(t)} tau_s
    for (const auto& t : gd.torus_elements()) {
        MatrixZm Tt = act_torus(t);
        for (int i = 0; i < 2; ++i) {
            const MatrixZm& As = i == 0 ? act_s0 : act_s1;
            MatrixZm Tst = act_torus(gd.conj_s(i, t));
            expect(Tt.mul(As), As.mul(Tst), "torus conjugation through tau_s");
        }
    }

    // quadratic relations
    u64 qval = gd.q % ring.m;
    for (int i = 0; i < 2; ++i) {
        const MatrixZm& As = i == 0 ? act_s0 : act_s1;
        MatrixZm S = act_torus(gd.square[static_cast<std::size_t>(i)]);
        MatrixZm rhs = S.scale(qval);
        for (const auto& cls : gd.theta_classes[static_cast<std::size_t>(i)])
            rhs = rhs.add(act_torus(cls).mul(As));
        expect(As.mul(As), rhs, std::string("quadratic relation for s") + (i == 0 ? "0" : "1"));
    }

    // omega relations
    if (gd.has_omega()) {
        if (!act_omega) {
            rep.fail("tau_omega action missing");
            return rep;
        }
        if (!act_omega_inv) {
            rep.fail("tau_omega not invertible");
            return rep;
        }
        expect(act_omega->mul(*act_omega_inv), I, "tau_omega inverse");
        if (gd.kind == GroupKind::PGL2) expect(act_omega->mul(*act_omega), I, "tau_omega^2 = 1");
        // omega n_0 omega^{-1} = n_1: A0 W = W A1
        expect(act_s0.mul(*act_omega), act_omega->mul(act_s1), "omega conjugation of tau_s0");
        for (const auto& t : gd.torus_elements()) {
            expect(act_torus(t).mul(*act_omega), act_omega->mul(act_torus(gd.conj_omega(t))),
                   "omega conjugation of the torus");
        }
    } else if (act_omega) {
        rep.fail("unexpected tau_omega action for SL2");
    }
    return rep;
}

std::pair<std::optional<HModule>, ValidationReport> make_hmodule(
    const GroupData& gd, RingZm ring, PresentedModule carrier, MatrixZm s0, MatrixZm s1,
    std::vector<MatrixZm> torus, std::optional<MatrixZm> omega) {
    HModule M;
    M.gd = gd;
    M.ring = ring;
    M.carrier = std::move(carrier);
    M.act_s0 = std::move(s0);
    M.act_s1 = std::move(s1);
    M.act_torus_gen = std::move(torus);
    if (omega) {
        M.act_omega = std::move(omega);
        // invert as a map of the presented carrier, not as a raw matrix
        auto inv = ModuleMap(M.carrier, M.carrier, *M.act_omega).inverse();
        if (inv) M.act_omega_inv = inv->matrix;
    }
    ValidationReport rep = M.validate();
    if (!rep.ok) return {std::nullopt, rep};
    return {M, rep};
}

MatrixZm AlgebraModule::act(const std::vector<u64>& coeffs) const {
    MatrixZm out = MatrixZm::zero(carrier.ring, carrier.ambient, carrier.ambient);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] % carrier.ring.m) out = out.add(action[i].scale(coeffs[i]));
    return out;
}

ValidationReport AlgebraModule::validate() const {
    ValidationReport rep;
    const auto& A = *algebra;
    if (action.size() != A.rank()) {
        rep.fail("action matrix count mismatch");
        return rep;
    }
    for (std::size_t i = 0; i < A.rank(); ++i)
        if (!ModuleMap(carrier, carrier, action[i]).well_defined())
            rep.fail("basis action does not preserve the relations");
    if (!rep.ok) return rep;
    MatrixZm I = MatrixZm::identity(carrier.ring, carrier.ambient);
    ModuleMap unit(carrier, carrier, action[A.unit_index]);
    if (!unit.sub(ModuleMap(carrier, carrier, I)).is_zero()) rep.fail("unit does not act as identity");
    for (std::size_t i = 0; i < A.rank(); ++i)
        for (std::size_t j = 0; j < A.rank(); ++j) {
            // mat(b_i b_j) = mat(b_j) * mat(b_i)
            MatrixZm lhs = action[j].mul(action[i]);
            MatrixZm rhs = MatrixZm::zero(carrier.ring, carrier.ambient, carrier.ambient);
            for (std::size_t k = 0; k < A.rank(); ++k)
                if (A.constants[i][j][k]) rhs = rhs.add(action[k].scale(A.constants[i][j][k]));
            if (!ModuleMap(carrier, carrier, lhs).sub(ModuleMap(carrier, carrier, rhs)).is_zero()) {
                std::ostringstream os;
                os << "structure constants violated at basis pair (" << i << "," << j << ")";
                rep.fail(os.str());
            }
        }
    return rep;
}

AlgebraModule restrict_module(const HModule& M, const FiniteAlgebra& alg) {
    AlgebraModule out;
    out.algebra = std::make_shared<FiniteAlgebra>(alg);
    out.carrier = M.carrier;
    for (const auto& w : alg.basis) out.action.push_back(M.act_weyl(w));
    return out;
}

AlgebraModule restrict_module(const HModule& M, FaceLabel face, bool dagger) {
    HeckeContext ctx(M.gd, M.ring);
    return restrict_module(M, parahoric_algebra(ctx, face, dagger));
}

AlgebraModule regular_module(std::shared_ptr<const FiniteAlgebra> alg) {
    AlgebraModule out;
    out.algebra = alg;
    out.carrier = PresentedModule::free_module(alg->ring, alg->rank());
    for (std::size_t i = 0; i < alg->rank(); ++i) out.action.push_back(alg->left_regular(i));
    return out;
}

HomSpace algebra_hom(const AlgebraModule& M, const AlgebraModule& N) {
    if (!(M.algebra->gd == N.algebra->gd) || M.algebra->basis != N.algebra->basis)
        throw std::invalid_argument("algebra_hom: algebra mismatch");
    std::vector<std::pair<MatrixZm, MatrixZm>> pairs;
    for (std::size_t i = 0; i < M.action.size(); ++i)
        pairs.emplace_back(M.action[i], N.action[i]);
    return hom_space(M.carrier, N.carrier, pairs);
}

bool algebra_isomorphic(const AlgebraModule& M, const AlgebraModule& N, u64 scan_limit) {
    if (M.carrier.size() != N.carrier.size()) return false;
    if (M.carrier.invariant_factors() != N.carrier.invariant_factors()) return false;
    if (M.carrier.size() == 1) return true;
    HomSpace hom = algebra_hom(M, N);
    if (hom.generators.empty()) return false;
    if (hom.presentation.size() > scan_limit)
        throw std::runtime_error("algebra_isomorphic: hom space too large to scan");
    for (const auto& coeffs : hom.presentation.elements(scan_limit)) {
        MatrixZm F = hom.combination(coeffs);
        ModuleMap f(M.carrier, N.carrier, F);
        if (f.bijective()) return true;
    }
    return false;
}

PresentedModule module_tensor(const FiniteAlgebra& alg, const PresentedModule& X,
                              const std::vector<MatrixZm>& right_action,
                              const AlgebraModule& M) {
    if (right_action.size() != alg.rank())
        throw std::invalid_argument("module_tensor: right action size mismatch");
    const RingZm ring = alg.ring;
    const std::size_t nx = X.ambient, nm = M.carrier.ambient;
    const std::size_t dim = nx * nm;
    std::vector<std::vector<u64>> rels;
    // relations of the factors
    for (std::size_t r = 0; r < X.relations.rows; ++r)
        for (std::size_t j = 0; j < nm; ++j) {
            std::vector<u64> row(dim, 0);
            for (std::size_t i = 0; i < nx; ++i) row[i * nm + j] = X.relations.at(r, i);
            rels.push_back(std::move(row));
        }
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t r = 0; r < M.carrier.relations.rows; ++r) {
            std::vector<u64> row(dim, 0);
            for (std::size_t j = 0; j < nm; ++j) row[i * nm + j] = M.carrier.relations.at(r, j);
            rels.push_back(std::move(row));
        }
    // balancing: (e_i . b) (x) f_j - e_i (x) (b . f_j) for each basis element
    for (std::size_t bidx = 0; bidx < alg.rank(); ++bidx) {
        const MatrixZm& RB = right_action[bidx];
        const MatrixZm& LB = M.action[bidx];
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < nm; ++j) {
                std::vector<u64> row(dim, 0);
                for (std::size_t k = 0; k < nx; ++k)
                    row[k * nm + j] = (row[k * nm + j] + RB.at(i, k)) % ring.m;
                for (std::size_t l = 0; l < nm; ++l)
                    row[i * nm + l] = (row[i * nm + l] + ring.neg(LB.at(j, l))) % ring.m;
                rels.push_back(std::move(row));
            }
    }
    MatrixZm R = rels.empty() ? MatrixZm(ring, 0, dim) : MatrixZm::from_rows(ring, rels);
    return PresentedModule(ring, dim, R);
}

}  // namespace hkcoeff
