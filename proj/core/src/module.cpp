#include "hkcoeff/module.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hkcoeff {

PresentedModule::PresentedModule(RingZm r, std::size_t n)
    : ring(r), ambient(n), relations(MatrixZm(r, 0, n)) {}

PresentedModule::PresentedModule(RingZm r, std::size_t n, const MatrixZm& rels)
    : ring(r), ambient(n), relations(howell_form(rels)) {
    if (rels.cols != n && rels.rows > 0)
        throw std::invalid_argument("PresentedModule: relation width mismatch");
    if (relations.cols != n) relations = MatrixZm(r, 0, n);
}

PresentedModule PresentedModule::free_module(RingZm r, std::size_t n) {
    return PresentedModule(r, n);
}

PresentedModule PresentedModule::zero(RingZm r) { return PresentedModule(r, 0); }

std::vector<u64> PresentedModule::reduce(const std::vector<u64>& v) const {
    if (v.size() != ambient) throw std::invalid_argument("PresentedModule::reduce: size");
    return howell_reduce(relations, v);
}

bool PresentedModule::is_zero_element(const std::vector<u64>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
}

bool PresentedModule::is_zero_module() const {
    if (ambient == 0) return true;
    return relations == MatrixZm::identity(ring, ambient);
}

u64 PresentedModule::size() const {
    // product of the per-column ranges; overflow-checked
    std::vector<u64> range(ambient, ring.m);
    for (std::size_t i = 0; i < relations.rows; ++i) {
        for (std::size_t j = 0; j < ambient; ++j)
            if (relations.at(i, j) != 0) { range[j] = relations.at(i, j); break; }
    }
    u64 total = 1;
    for (u64 r : range) {
        if (r == 0) continue;
        if (total > (~0ull) / r) throw std::overflow_error("PresentedModule::size: overflow");
        total *= r;
    }
    return total;
}

std::vector<std::vector<u64>> PresentedModule::elements(u64 limit) const {
    // per-column ranges: pivot columns range over [0, pivot), others [0, m)
    std::vector<u64> range(ambient, ring.m);
    for (std::size_t i = 0; i < relations.rows; ++i) {
        for (std::size_t j = 0; j < ambient; ++j)
            if (relations.at(i, j) != 0) { range[j] = relations.at(i, j); break; }
    }
    u64 count = 1;
    for (u64 r : range) {
        count *= r ? r : 1;
        if (count > limit) throw std::runtime_error("PresentedModule::elements: module too large");
    }
    std::vector<std::vector<u64>> out;
    std::vector<u64> cur(ambient, 0);
    while (true) {
        out.push_back(cur);
        std::size_t j = 0;
        while (j < ambient) {
            if (++cur[j] < range[j]) break;
            cur[j] = 0;
            ++j;
        }
        if (j == ambient) break;
    }
    return out;
}

namespace {

// Invariant factors of Z^n / (rowspan(S) + m Z^n). Entries stay below m.
std::vector<u64> smith_factors(const MatrixZm& S, std::size_t n, u64 m) {
    std::size_t rows = S.rows;
    std::vector<std::vector<i64>> a(rows, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<i64>(S.at(i, j));

    auto mod_m = [&](i64 x) {
        i64 r = x % static_cast<i64>(m);
        if (r < 0) r += static_cast<i64>(m);
        return r;
    };
    for (auto& row : a)
        for (auto& x : row) x = mod_m(x);

    std::vector<u64> diag;
    std::size_t top = 0;
    std::vector<char> col_done(n, 0);
    while (top < n) {
        // find smallest nonzero entry in the remaining block (including the
        // implicit m*e_j rows, which bound every pivot by m)
        std::size_t pi = rows, pj = n;
        i64 best = static_cast<i64>(m);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!col_done[j] && a[i][j] != 0 && a[i][j] < best) {
                    best = a[i][j]; pi = i; pj = j;
                }
        if (pj == n) {
            // all remaining entries zero: remaining columns contribute Z/m
            for (std::size_t j = 0; j < n; ++j)
                if (!col_done[j]) diag.push_back(m);
            break;
        }
        bool clean = true;
        // clear the pivot column
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == pi || a[i][pj] == 0) continue;
            i64 q = a[i][pj] / best;
            for (std::size_t j = 0; j < n; ++j)
                if (!col_done[j]) a[i][j] = mod_m(a[i][j] - q * a[pi][j]);
            if (a[i][pj] != 0) clean = false;
        }
        // clear the pivot row by column ops (unimodular; preserves mZ^n)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == pj || col_done[j] || a[pi][j] == 0) continue;
            i64 q = a[pi][j] / best;
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i][j] = mod_m(a[i][j] - q * a[i][pj]);
            if (a[pi][j] != 0) clean = false;
        }
        if (!clean) continue;  // remainders appeared; pick a new pivot
        u64 d = static_cast<u64>(gcd_i64(best, static_cast<i64>(m)));
        diag.push_back(d);
        col_done[pj] = 1;
        a[pi].assign(n, 0);
        ++top;
        if (std::all_of(col_done.begin(), col_done.end(), [](char c) { return c != 0; })) break;
    }
    // enforce the divisibility chain with gcd/lcm passes
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < diag.size(); ++i)
            for (std::size_t j = i + 1; j < diag.size(); ++j) {
                u64 g = static_cast<u64>(gcd_i64(static_cast<i64>(diag[i]), static_cast<i64>(diag[j])));
                u64 l = diag[i] / g * diag[j];
                if (g != diag[i]) { diag[i] = g; diag[j] = l; changed = true; }
            }
    }
    std::vector<u64> out;
    for (u64 d : diag)
        if (d > 1) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<u64> PresentedModule::invariant_factors() const {
    return smith_factors(relations, ambient, ring.m);
}

bool PresentedModule::isomorphic_as_rmodule(const PresentedModule& other) const {
    return ring.m == other.ring.m && invariant_factors() == other.invariant_factors();
}

ModuleMap::ModuleMap(PresentedModule dom, PresentedModule cod, MatrixZm mat)
    : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(mat)) {
    if (matrix.rows != domain.ambient || matrix.cols != codomain.ambient)
        throw std::invalid_argument("ModuleMap: matrix shape mismatch");
}

ModuleMap ModuleMap::identity(const PresentedModule& M) {
    return ModuleMap(M, M, MatrixZm::identity(M.ring, M.ambient));
}

ModuleMap ModuleMap::zero_map(const PresentedModule& dom, const PresentedModule& cod) {
    return ModuleMap(dom, cod, MatrixZm::zero(dom.ring, dom.ambient, cod.ambient));
}

bool ModuleMap::well_defined() const {
    for (std::size_t i = 0; i < domain.relations.rows; ++i) {
        auto img = row_times_matrix(domain.relations.row(i), matrix);
        if (!codomain.is_zero_element(img)) return false;
    }
    return true;
}

std::vector<u64> ModuleMap::apply(const std::vector<u64>& v) const {
    return codomain.reduce(row_times_matrix(v, matrix));
}

ModuleMap ModuleMap::compose(const ModuleMap& then) const {
    return ModuleMap(domain, then.codomain, matrix.mul(then.matrix));
}

ModuleMap ModuleMap::add(const ModuleMap& other) const {
    return ModuleMap(domain, codomain, matrix.add(other.matrix));
}

ModuleMap ModuleMap::sub(const ModuleMap& other) const {
    return ModuleMap(domain, codomain, matrix.sub(other.matrix));
}

ModuleMap ModuleMap::scale(u64 c) const { return ModuleMap(domain, codomain, matrix.scale(c)); }

bool ModuleMap::is_zero() const {
    for (std::size_t i = 0; i < matrix.rows; ++i)
        if (!codomain.is_zero_element(matrix.row(i))) return false;
    return true;
}

bool ModuleMap::equals(const ModuleMap& other) const {
    return domain == other.domain && codomain == other.codomain && sub(other).is_zero();
}

bool ModuleMap::injective() const {
    MatrixZm K = kernel_mod(matrix, codomain.relations);
    for (std::size_t i = 0; i < K.rows; ++i)
        if (!domain.is_zero_element(K.row(i))) return false;
    return true;
}

bool ModuleMap::surjective() const {
    MatrixZm span = howell_form(matrix.vstack(codomain.relations));
    return span == MatrixZm::identity(codomain.ring, codomain.ambient);
}

bool ModuleMap::bijective() const { return injective() && surjective(); }

ModuleMap::Sub ModuleMap::kernel() const {
    MatrixZm K = kernel_mod(matrix, codomain.relations);
    // generators of the kernel inside the domain; present it abstractly
    MatrixZm rels = kernel_mod(K, domain.relations);
    PresentedModule ker(domain.ring, K.rows, rels);
    return Sub{ker, K};
}

ModuleMap::Sub ModuleMap::image() const {
    MatrixZm rels = kernel_mod(matrix, codomain.relations);
    PresentedModule img(domain.ring, matrix.rows, rels);
    return Sub{img, matrix};
}

PresentedModule ModuleMap::cokernel() const {
    return PresentedModule(codomain.ring, codomain.ambient,
                           matrix.vstack(codomain.relations));
}

std::optional<ModuleMap> ModuleMap::inverse() const {
    MatrixZm G(domain.ring, codomain.ambient, domain.ambient);
    for (std::size_t i = 0; i < codomain.ambient; ++i) {
        std::vector<u64> e(codomain.ambient, 0);
        e[i] = 1 % domain.ring.m;
        auto x = solve_mod(matrix, codomain.relations, e);
        if (!x) return std::nullopt;
        G.set_row(i, *x);
    }
    ModuleMap inv(codomain, domain, G);
    if (!inv.well_defined()) return std::nullopt;
    if (!compose(inv).equals(ModuleMap::identity(domain))) return std::nullopt;
    if (!inv.compose(*this).equals(ModuleMap::identity(codomain))) return std::nullopt;
    return inv;
}

MatrixZm HomSpace::combination(const std::vector<u64>& coeffs) const {
    if (generators.empty()) throw std::runtime_error("HomSpace::combination: no generators");
    MatrixZm out = MatrixZm::zero(generators[0].ring, generators[0].rows, generators[0].cols);
    for (std::size_t i = 0; i < generators.size(); ++i)
        out = out.add(generators[i].scale(coeffs.at(i)));
    return out;
}

HomSpace hom_space(const PresentedModule& P, const PresentedModule& Q,
                   const std::vector<std::pair<MatrixZm, MatrixZm>>& intertwine) {
    const RingZm ring = P.ring;
    const std::size_t nP = P.ambient, nQ = Q.ambient;
    const std::size_t dim = nP * nQ;
    MatrixZm K = separation_matrix(Q.relations, nQ);  // nQ x t
    const std::size_t t = K.cols;

    // constraint columns: one block of width t per (well-definedness or
    // intertwining) condition, all exact equations after separation
    std::size_t n_wd = P.relations.rows;
    std::size_t n_tw = intertwine.size() * nP;
    MatrixZm M(ring, dim, (n_wd + n_tw) * t);

    auto emit = [&](std::size_t block, std::size_t i, std::size_t j, u64 coef) {
        // constraint `block`, quotient coordinate j, unknown F_{i,j}:
        // contributes coef * K[j, :] to the block columns
        if (coef == 0) return;
        for (std::size_t c = 0; c < t; ++c) {
            u64& slot = M.at(i * nQ + j, block * t + c);
            slot = (slot + coef * K.at(j, c)) % ring.m;
        }
    };

    std::size_t block = 0;
    for (std::size_t r = 0; r < P.relations.rows; ++r, ++block) {
        for (std::size_t i = 0; i < nP; ++i) {
            u64 ri = P.relations.at(r, i);
            if (ri == 0) continue;
            for (std::size_t j = 0; j < nQ; ++j) emit(block, i, j, ri);
        }
    }
    for (const auto& [A, B] : intertwine) {
        if (A.rows != nP || A.cols != nP || B.rows != nQ || B.cols != nQ)
            throw std::invalid_argument("hom_space: intertwining pair shape mismatch");
        for (std::size_t i = 0; i < nP; ++i, ++block) {
            // constraint: (e_i A) F - F_{i,:} B == 0 in Q.
            // The quotient coordinate j receives sum_k A_{ik} F_{kj} - sum_l F_{il} B_{lj}.
            for (std::size_t k = 0; k < nP; ++k) {
                u64 aik = A.at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < nQ; ++j) {
                    // contribution of F_{kj} to coordinate j
                    for (std::size_t c = 0; c < t; ++c) {
                        u64& slot = M.at(k * nQ + j, block * t + c);
                        slot = (slot + aik * K.at(j, c)) % ring.m;
                    }
                }
            }
            for (std::size_t l = 0; l < nQ; ++l) {
                for (std::size_t j = 0; j < nQ; ++j) {
                    u64 blj = B.at(l, j);
                    if (blj == 0) continue;
                    u64 coef = ring.neg(blj);
                    for (std::size_t c = 0; c < t; ++c) {
                        u64& slot = M.at(i * nQ + l, block * t + c);
                        slot = (slot + coef * K.at(j, c)) % ring.m;
                    }
                }
            }
        }
    }

    MatrixZm sol = left_kernel(M);  // rows = generating solutions in R^dim

    // throw away solutions that are trivial maps and present the quotient
    std::vector<std::vector<u64>> triv_rows;
    for (std::size_t i = 0; i < nP; ++i)
        for (std::size_t r = 0; r < Q.relations.rows; ++r) {
            std::vector<u64> v(dim, 0);
            for (std::size_t j = 0; j < nQ; ++j) v[i * nQ + j] = Q.relations.at(r, j);
            triv_rows.push_back(std::move(v));
        }
    MatrixZm triv = triv_rows.empty() ? MatrixZm(ring, 0, dim)
                                      : howell_form(MatrixZm::from_rows(ring, triv_rows));

    MatrixZm rels = kernel_mod(sol, triv);
    HomSpace out;
    out.presentation = PresentedModule(ring, sol.rows, rels);
    for (std::size_t i = 0; i < sol.rows; ++i) {
        MatrixZm F(ring, nP, nQ);
        for (std::size_t k = 0; k < dim; ++k) F.a[k] = sol.at(i, k);
        out.generators.push_back(std::move(F));
    }
    return out;
}

DualModule module_dual(const PresentedModule& M) {
    // functionals on the quotient = right kernel of the relations
    MatrixZm N = left_kernel(M.relations.transpose());
    MatrixZm rels = left_kernel(N);  // exact syzygies c with c*N = 0
    DualModule out;
    out.functionals = N;
    out.module = PresentedModule(M.ring, N.rows, rels);
    return out;
}

ModuleMap double_dual_map(const PresentedModule& M, const DualModule& dual,
                          const DualModule& bidual) {
    // v -> the functional (c -> sum_i c_i <d_i, v>) on the dual module
    MatrixZm mat(M.ring, M.ambient, bidual.module.ambient);
    for (std::size_t vj = 0; vj < M.ambient; ++vj) {
        std::vector<u64> evals(dual.module.ambient, 0);
        for (std::size_t i = 0; i < dual.functionals.rows; ++i)
            evals[i] = dual.functionals.at(i, vj);
        auto sol = solve_linear(bidual.functionals, evals);
        if (!sol) throw std::runtime_error("double_dual_map: evaluation not in bidual span");
        mat.set_row(vj, sol->particular);
    }
    return ModuleMap(M, bidual.module, mat);
}

MinimizedModule minimize(const PresentedModule& M) {
    // The relations are in canonical Howell form: entries at any unit-pivot
    // column of other rows are reduced modulo 1, hence zero. Eliminating all
    // unit-pivot generators is therefore a single substitution pass, and the
    // surviving relation rows are supported on the kept columns only.
    const RingZm ring = M.ring;
    const MatrixZm& S = M.relations;
    const std::size_t n = M.ambient;

    std::vector<std::size_t> pivot_row(n, SIZE_MAX);
    std::vector<char> eliminated(n, 0);
    std::vector<std::size_t> unit_rows;
    for (std::size_t i = 0; i < S.rows; ++i) {
        std::size_t piv = n;
        for (std::size_t j = 0; j < n; ++j)
            if (S.at(i, j) != 0) { piv = j; break; }
        if (piv == n) continue;
        if (ring.is_unit(S.at(i, piv))) {
            pivot_row[piv] = i;
            eliminated[piv] = 1;
            unit_rows.push_back(i);
        }
    }
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < n; ++j)
        if (!eliminated[j]) kept.push_back(j);
    std::vector<std::size_t> newcol(n, SIZE_MAX);
    for (std::size_t k = 0; k < kept.size(); ++k) newcol[kept[k]] = k;

    MatrixZm to(ring, n, kept.size());
    for (std::size_t j = 0; j < n; ++j) {
        if (!eliminated[j]) {
            to.at(j, newcol[j]) = 1 % ring.m;
            continue;
        }
        std::size_t r = pivot_row[j];
        u64 inv = ring.inv(S.at(r, j));
        for (std::size_t k = j + 1; k < n; ++k) {
            if (S.at(r, k) == 0 || eliminated[k]) continue;
            to.at(j, newcol[k]) = ring.neg(ring.mul(inv, S.at(r, k)));
        }
    }
    MatrixZm from(ring, kept.size(), n);
    for (std::size_t k = 0; k < kept.size(); ++k) from.at(k, kept[k]) = 1 % ring.m;

    std::vector<std::vector<u64>> rest;
    for (std::size_t i = 0; i < S.rows; ++i) {
        if (std::find(unit_rows.begin(), unit_rows.end(), i) != unit_rows.end()) continue;
        std::vector<u64> row(kept.size(), 0);
        for (std::size_t k = 0; k < kept.size(); ++k) row[k] = S.at(i, kept[k]);
        rest.push_back(std::move(row));
    }
    MatrixZm rels = rest.empty() ? MatrixZm(ring, 0, kept.size())
                                 : MatrixZm::from_rows(ring, rest);

    MinimizedModule out;
    out.module = PresentedModule(ring, kept.size(), rels);
    out.to_min = to;
    out.from_min = from;
    return out;
}

DirectSum DirectSum::of(const std::vector<PresentedModule>& parts) {
    if (parts.empty()) throw std::invalid_argument("DirectSum::of: no parts");
    RingZm ring = parts.front().ring;
    DirectSum ds;
    std::size_t total = 0;
    for (const auto& p : parts) {
        ds.offsets.push_back(total);
        ds.dims.push_back(p.ambient);
        total += p.ambient;
    }
    std::vector<std::vector<u64>> rels;
    for (std::size_t b = 0; b < parts.size(); ++b) {
        for (std::size_t i = 0; i < parts[b].relations.rows; ++i) {
            std::vector<u64> row(total, 0);
            for (std::size_t j = 0; j < parts[b].ambient; ++j)
                row[ds.offsets[b] + j] = parts[b].relations.at(i, j);
            rels.push_back(std::move(row));
        }
    }
    MatrixZm R = rels.empty() ? MatrixZm(ring, 0, total)
                              : MatrixZm::from_rows(ring, rels);
    ds.total = PresentedModule(ring, total, R);
    return ds;
}

std::vector<u64> DirectSum::inject(std::size_t block, const std::vector<u64>& v) const {
    std::vector<u64> out(total.ambient, 0);
    for (std::size_t j = 0; j < dims[block]; ++j) out[offsets[block] + j] = v[j];
    return out;
}

std::vector<u64> DirectSum::project(std::size_t block, const std::vector<u64>& v) const {
    std::vector<u64> out(dims[block], 0);
    for (std::size_t j = 0; j < dims[block]; ++j) out[j] = v[offsets[block] + j];
    return out;
}

}  // namespace hkcoeff
