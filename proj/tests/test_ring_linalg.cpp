#include "doctest.h"

#include "hkcoeff/module.hpp"
#include "hkcoeff/zmatrix.hpp"

#include <algorithm>
#include <set>

using namespace hkcoeff;

namespace {

// Independent oracle: enumerate the full row span, then rebuild the canonical
// generating rows column by column from the span alone.
std::set<std::vector<u64>> enumerate_span(const MatrixZm& A) {
    std::set<std::vector<u64>> span;
    span.insert(std::vector<u64>(A.cols, 0));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<u64>> cur(span.begin(), span.end());
        for (const auto& v : cur) {
            for (std::size_t i = 0; i < A.rows; ++i) {
                std::vector<u64> w(A.cols);
                for (std::size_t j = 0; j < A.cols; ++j)
                    w[j] = (v[j] + A.at(i, j)) % A.ring.m;
                if (span.insert(w).second) grew = true;
            }
        }
    }
    return span;
}

MatrixZm howell_oracle(const MatrixZm& A) {
    auto span = enumerate_span(A);
    u64 m = A.ring.m;
    std::size_t n = A.cols;
    std::vector<std::size_t> pivcols;
    std::vector<u64> pivots(n, 0);
    std::vector<std::vector<u64>> rows;
    for (std::size_t j = 0; j < n; ++j) {
        u64 g = m;
        for (const auto& v : span) {
            bool zeros = true;
            for (std::size_t k = 0; k < j && zeros; ++k) zeros = v[k] == 0;
            if (zeros && v[j] != 0) g = static_cast<u64>(gcd_i64((i64)g, (i64)v[j]));
        }
        if (g == m) continue;
        for (const auto& v : span) {
            bool zeros = true;
            for (std::size_t k = 0; k < j && zeros; ++k) zeros = v[k] == 0;
            if (zeros && v[j] == g) { rows.push_back(v); break; }
        }
        pivcols.push_back(j);
        pivots[j] = g;
    }
    // reduce each row at the later pivot columns
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            std::size_t j = pivcols[b];
            u64 g = pivots[j];
            u64 c = rows[a][j] / g;
            if (!c) continue;
            for (std::size_t k = 0; k < n; ++k)
                rows[a][k] = (rows[a][k] + (m - c % m) * rows[b][k]) % m;
        }
    }
    if (rows.empty()) return MatrixZm(A.ring, 0, n);
    return MatrixZm::from_rows(A.ring, rows);
}

struct TinyRng {
    u64 s;
    explicit TinyRng(u64 seed) : s(seed) {}
    u64 next() {
        s += 0x9e3779b97f4a7c15ull;
        u64 z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) { return next() % n; }
};

MatrixZm random_matrix(TinyRng& rng, RingZm ring, std::size_t r, std::size_t c) {
    MatrixZm A(ring, r, c);
    for (auto& x : A.a) x = rng.below(ring.m);
    return A;
}

}  // namespace

TEST_CASE("howell form: fixed examples") {
    RingZm z4(4);
    SUBCASE("zero matrix stays zero") {
        MatrixZm Z(z4, 2, 2);
        CHECK(howell_form(Z).rows == 0);
    }
    SUBCASE("[[2]] over Z/4 is canonical") {
        auto A = MatrixZm::from_rows(z4, {{2}});
        CHECK(howell_form(A) == A);
    }
    SUBCASE("span example over Z/4 matches the enumeration oracle") {
        auto A = MatrixZm::from_rows(z4, {{2, 0}, {0, 2}, {1, 1}});
        auto H = howell_form(A);
        CHECK(H == howell_oracle(A));
        CHECK(H == MatrixZm::from_rows(z4, {{1, 1}, {0, 2}}));
    }
}

TEST_CASE("howell form: canonical for the row span") {
    for (u64 m : {4ull, 8ull, 9ull}) {
        RingZm ring(m);
        TinyRng rng(1000 + m);
        for (int iter = 0; iter < 40; ++iter) {
            std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
            MatrixZm A = random_matrix(rng, ring, r, c);
            MatrixZm H = howell_form(A);
            CHECK(howell_form(H) == H);
            CHECK(H == howell_oracle(A));

            // a row-equivalent partner: unit scalings, row adds, extra span rows
            MatrixZm B = A;
            for (int k = 0; k < 6; ++k) {
                std::size_t i = rng.below(B.rows), j = rng.below(B.rows);
                u64 op = rng.below(3);
                if (op == 0 && i != j) {
                    u64 cmul = rng.below(m);
                    for (std::size_t cc = 0; cc < B.cols; ++cc)
                        B.at(i, cc) = (B.at(i, cc) + cmul * B.at(j, cc)) % m;
                } else if (op == 1) {
                    auto units = ring.units();
                    u64 u = units[rng.below(units.size())];
                    for (std::size_t cc = 0; cc < B.cols; ++cc)
                        B.at(i, cc) = B.at(i, cc) * u % m;
                } else {
                    for (std::size_t cc = 0; cc < B.cols; ++cc)
                        std::swap(B.at(i, cc), B.at(j, cc));
                }
            }
            // append a random span combination
            std::vector<u64> extra(B.cols, 0);
            for (std::size_t i = 0; i < A.rows; ++i) {
                u64 cmul = rng.below(m);
                for (std::size_t cc = 0; cc < A.cols; ++cc)
                    extra[cc] = (extra[cc] + cmul * A.at(i, cc)) % m;
            }
            B = B.vstack(MatrixZm::from_rows(ring, {extra}));
            CHECK(howell_form(B) == H);
        }
    }
}

TEST_CASE("solve_linear: fixed examples over Z/9") {
    RingZm z9(9);
    SUBCASE("identity system") {
        auto I = MatrixZm::identity(z9, 3);
        std::vector<u64> b{2, 5, 7};
        auto sol = solve_linear(I, b);
        REQUIRE(sol.has_value());
        CHECK(sol->particular == b);
        CHECK(sol->kernel.rows == 0);
    }
    SUBCASE("3x = 6 has solutions, kernel generated by 3") {
        auto A = MatrixZm::from_rows(z9, {{3}});
        auto sol = solve_linear(A, {6});
        REQUIRE(sol.has_value());
        CHECK(row_times_matrix(sol->particular, A) == std::vector<u64>{6});
        REQUIRE(sol->kernel.rows == 1);
        CHECK(sol->kernel.at(0, 0) == 3);
    }
    SUBCASE("3x = 1 has no solution") {
        auto A = MatrixZm::from_rows(z9, {{3}});
        CHECK_FALSE(solve_linear(A, {1}).has_value());
    }
}

TEST_CASE("solve_linear: round trip and kernel completeness") {
    for (u64 m : {4ull, 9ull}) {
        RingZm ring(m);
        TinyRng rng(77 + m);
        for (int iter = 0; iter < 30; ++iter) {
            std::size_t r = 1 + rng.below(3), c = 1 + rng.below(3);
            MatrixZm A = random_matrix(rng, ring, r, c);
            std::vector<u64> x(r);
            for (auto& v : x) v = rng.below(m);
            auto b = row_times_matrix(x, A);
            auto sol = solve_linear(A, b);
            REQUIRE(sol.has_value());
            CHECK(row_times_matrix(sol->particular, A) == b);
            for (std::size_t i = 0; i < sol->kernel.rows; ++i) {
                auto kv = row_times_matrix(sol->kernel.row(i), A);
                CHECK(std::all_of(kv.begin(), kv.end(), [](u64 v) { return v == 0; }));
            }
            // every brute-force kernel vector lies in the returned span
            if (r <= 2) {
                std::vector<u64> v(r, 0);
                while (true) {
                    auto img = row_times_matrix(v, A);
                    if (std::all_of(img.begin(), img.end(), [](u64 t) { return t == 0; }))
                        CHECK(in_span(sol->kernel, v));
                    std::size_t j = 0;
                    while (j < r && ++v[j] == m) v[j++] = 0;
                    if (j == r) break;
                }
            }
        }
    }
}

TEST_CASE("presented modules: sizes and element counting") {
    RingZm z4(4);
    PresentedModule M(z4, 2, MatrixZm::from_rows(z4, {{2, 0}}));
    CHECK(M.size() == 8);  // Z/2 x Z/4
    CHECK(M.elements().size() == 8);
    CHECK(M.invariant_factors() == std::vector<u64>{2, 4});

    PresentedModule F(z4, 1);
    CHECK(F.invariant_factors() == std::vector<u64>{4});
    CHECK(PresentedModule::zero(z4).size() == 1);
}

TEST_CASE("module maps: counting |dom| = |ker| * |im|") {
    for (u64 m : {4ull, 8ull, 9ull}) {
        RingZm ring(m);
        TinyRng rng(31 + m);
        for (int iter = 0; iter < 25; ++iter) {
            std::size_t nd = 1 + rng.below(2), nc = 1 + rng.below(2);
            PresentedModule d(ring, nd, random_matrix(rng, ring, rng.below(3), nd));
            PresentedModule c(ring, nc, random_matrix(rng, ring, rng.below(3), nc));
            if (d.size() > 256 || c.size() > 256) continue;
            auto hom = hom_space(d, c, {});
            if (hom.generators.empty()) continue;
            std::vector<u64> coeffs(hom.generators.size());
            for (auto& x : coeffs) x = rng.below(m);
            ModuleMap f(d, c, hom.combination(coeffs));
            REQUIRE(f.well_defined());
            CHECK(d.size() == f.kernel().module.size() * f.image().module.size());

            // enumeration cross-check of the kernel size
            u64 count = 0;
            for (const auto& v : d.elements())
                if (c.is_zero_element(row_times_matrix(v, f.matrix))) ++count;
            CHECK(count == f.kernel().module.size());
        }
    }
}

TEST_CASE("duals: fixed examples") {
    RingZm z4(4);
    SUBCASE("free rank one is self-dual") {
        PresentedModule M(z4, 1);
        auto d = module_dual(M);
        CHECK(d.module.invariant_factors() == std::vector<u64>{4});
    }
    SUBCASE("(Z/2)* over Z/4 is Z/2") {
        PresentedModule M(z4, 1, MatrixZm::from_rows(z4, {{2}}));
        auto d = module_dual(M);
        CHECK(d.module.invariant_factors() == std::vector<u64>{2});
    }
    SUBCASE("zero module") {
        auto d = module_dual(PresentedModule::zero(z4));
        CHECK(d.module.size() == 1);
    }
}

TEST_CASE("duals: |M*| = |M| and double dual is canonical") {
    for (u64 m : {4ull, 9ull, 8ull}) {
        RingZm ring(m);
        TinyRng rng(5 + m);
        for (int iter = 0; iter < 20; ++iter) {
            std::size_t n = 1 + rng.below(2);
            PresentedModule M(ring, n, random_matrix(rng, ring, rng.below(3), n));
            if (M.size() > 256) continue;
            auto d = module_dual(M);
            CHECK(d.module.size() == M.size());
            auto dd = module_dual(d.module);
            auto ev = double_dual_map(M, d, dd);
            CHECK(ev.well_defined());
            CHECK(ev.bijective());
        }
    }
}

TEST_CASE("minimize keeps the isomorphism class") {
    for (u64 m : {4ull, 9ull}) {
        RingZm ring(m);
        TinyRng rng(400 + m);
        for (int iter = 0; iter < 20; ++iter) {
            std::size_t n = 1 + rng.below(3);
            PresentedModule M(ring, n, random_matrix(rng, ring, 1 + rng.below(3), n));
            auto mini = minimize(M);
            CHECK(mini.module.invariant_factors() == M.invariant_factors());
            ModuleMap to(M, mini.module, mini.to_min);
            ModuleMap from(mini.module, M, mini.from_min);
            CHECK(to.well_defined());
            CHECK(from.well_defined());
            CHECK(from.compose(to).equals(ModuleMap::identity(mini.module)));
            CHECK(to.compose(from).equals(ModuleMap::identity(M)));
        }
    }
}
