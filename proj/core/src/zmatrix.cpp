#include "hkcoeff/zmatrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hkcoeff {

RingZm::RingZm(u64 modulus) : m(modulus) {
    if (m < 2) throw std::invalid_argument("RingZm: modulus must be >= 2");
    // products of residues must fit in u64
    if (m > (1ull << 31)) throw std::invalid_argument("RingZm: modulus too large");
}

u64 RingZm::reduce(i64 x) const {
    i64 mm = static_cast<i64>(m);
    i64 r = x % mm;
    if (r < 0) r += mm;
    return static_cast<u64>(r);
}

bool RingZm::is_unit(u64 a) const { return gcd_i64(static_cast<i64>(a % m), static_cast<i64>(m)) == 1; }

u64 RingZm::inv(u64 a) const {
    i64 g, s, t;
    xgcd_i64(static_cast<i64>(a % m), static_cast<i64>(m), g, s, t);
    if (g != 1) throw std::invalid_argument("RingZm::inv: not a unit");
    return reduce(s);
}

u64 RingZm::unit_for(u64 a) const {
    a %= m;
    if (a == 0) return 1;
    u64 g = static_cast<u64>(gcd_i64(static_cast<i64>(a), static_cast<i64>(m)));
    u64 b = a / g, n = m / g;
    u64 u = 1;
    if (n > 1) {
        i64 gg, s, t;
        xgcd_i64(static_cast<i64>(b % n), static_cast<i64>(n), gg, s, t);
        u = static_cast<u64>(((s % static_cast<i64>(n)) + static_cast<i64>(n)) % static_cast<i64>(n));
    }
    if (u == 0) u = 1;
    // u*b == 1 mod n already makes u*a == g mod m; bump u by multiples of n
    // until it is a unit of Z/m so the row operation stays invertible.
    while (!is_unit(u)) u += n;
    return u % m;
}

std::vector<u64> RingZm::units() const {
    std::vector<u64> out;
    for (u64 x = 1; x < m; ++x)
        if (is_unit(x)) out.push_back(x);
    return out;
}

std::vector<std::pair<u64, int>> RingZm::factorization() const {
    std::vector<std::pair<u64, int>> f;
    u64 n = m;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

void xgcd_i64(i64 a, i64 b, i64& g, i64& s, i64& t) {
    i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 tmp = r0 - q * r1; r0 = r1; r1 = tmp;
        tmp = s0 - q * s1; s0 = s1; s1 = tmp;
        tmp = t0 - q * t1; t0 = t1; t1 = tmp;
    }
    if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
    g = r0; s = s0; t = t0;
}

MatrixZm MatrixZm::identity(RingZm r, std::size_t n) {
    MatrixZm I(r, n, n);
    for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1 % r.m;
    return I;
}

MatrixZm MatrixZm::zero(RingZm r, std::size_t nrows, std::size_t ncols) {
    return MatrixZm(r, nrows, ncols);
}

MatrixZm MatrixZm::from_rows(RingZm r, const std::vector<std::vector<u64>>& rows_in) {
    std::size_t nc = rows_in.empty() ? 0 : rows_in.front().size();
    MatrixZm A(r, rows_in.size(), nc);
    for (std::size_t i = 0; i < rows_in.size(); ++i) {
        if (rows_in[i].size() != nc) throw std::invalid_argument("from_rows: ragged rows");
        for (std::size_t j = 0; j < nc; ++j) A.at(i, j) = rows_in[i][j] % r.m;
    }
    return A;
}

std::vector<u64> MatrixZm::row(std::size_t i) const {
    return std::vector<u64>(a.begin() + static_cast<std::ptrdiff_t>(i * cols),
                            a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
}

void MatrixZm::set_row(std::size_t i, const std::vector<u64>& v) {
    if (v.size() != cols) throw std::invalid_argument("set_row: size mismatch");
    std::copy(v.begin(), v.end(), a.begin() + static_cast<std::ptrdiff_t>(i * cols));
}

MatrixZm MatrixZm::transpose() const {
    MatrixZm T(ring, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) T.at(j, i) = at(i, j);
    return T;
}

MatrixZm MatrixZm::mul(const MatrixZm& other) const {
    if (cols != other.rows || ring.m != other.ring.m)
        throw std::invalid_argument("MatrixZm::mul: shape or ring mismatch");
    MatrixZm C(ring, rows, other.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            u64 aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < other.cols; ++j)
                C.at(i, j) = (C.at(i, j) + aik * other.at(k, j)) % ring.m;
        }
    return C;
}

MatrixZm MatrixZm::add(const MatrixZm& other) const {
    if (rows != other.rows || cols != other.cols)
        throw std::invalid_argument("MatrixZm::add: shape mismatch");
    MatrixZm C(ring, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = (a[i] + other.a[i]) % ring.m;
    return C;
}

MatrixZm MatrixZm::sub(const MatrixZm& other) const {
    if (rows != other.rows || cols != other.cols)
        throw std::invalid_argument("MatrixZm::sub: shape mismatch");
    MatrixZm C(ring, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = (a[i] + ring.m - other.a[i]) % ring.m;
    return C;
}

MatrixZm MatrixZm::scale(u64 c) const {
    MatrixZm C(ring, rows, cols);
    c %= ring.m;
    for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = (a[i] * c) % ring.m;
    return C;
}

MatrixZm MatrixZm::vstack(const MatrixZm& other) const {
    if (rows == 0 && cols == 0) return other;
    if (other.rows == 0) return *this;
    if (cols != other.cols) throw std::invalid_argument("vstack: column mismatch");
    MatrixZm C(ring, rows + other.rows, cols);
    std::copy(a.begin(), a.end(), C.a.begin());
    std::copy(other.a.begin(), other.a.end(), C.a.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return C;
}

MatrixZm MatrixZm::hstack(const MatrixZm& other) const {
    if (rows != other.rows) throw std::invalid_argument("hstack: row mismatch");
    MatrixZm C(ring, rows, cols + other.cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) C.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < other.cols; ++j) C.at(i, cols + j) = other.at(i, j);
    }
    return C;
}

MatrixZm MatrixZm::slice_cols(std::size_t c0, std::size_t c1) const {
    MatrixZm C(ring, rows, c1 - c0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = c0; j < c1; ++j) C.at(i, j - c0) = at(i, j);
    return C;
}

bool MatrixZm::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
}

std::string MatrixZm::str() const {
    std::ostringstream os;
    os << rows << "x" << cols << " mod " << ring.m << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        os << "[";
        for (std::size_t j = 0; j < cols; ++j) os << (j ? " " : "") << at(i, j);
        os << "]\n";
    }
    return os.str();
}

std::vector<u64> row_times_matrix(const std::vector<u64>& x, const MatrixZm& A) {
    if (x.size() != A.rows) throw std::invalid_argument("row_times_matrix: size mismatch");
    std::vector<u64> out(A.cols, 0);
    for (std::size_t k = 0; k < A.rows; ++k) {
        u64 xk = x[k] % A.ring.m;
        if (xk == 0) continue;
        for (std::size_t j = 0; j < A.cols; ++j)
            out[j] = (out[j] + xk * A.at(k, j)) % A.ring.m;
    }
    return out;
}

namespace {

struct HowellBuilder {
    RingZm ring;
    std::size_t cols;
    // basis[j] = row with first nonzero entry at column j
    std::vector<std::vector<u64>> basis;
    std::vector<char> occupied;

    HowellBuilder(RingZm r, std::size_t c) : ring(r), cols(c), basis(c), occupied(c, 0) {}

    void scale_row(std::vector<u64>& v, u64 c, std::size_t from) {
        for (std::size_t j = from; j < cols; ++j) v[j] = (v[j] * c) % ring.m;
    }

    // v -= c*h, touching only columns >= from (h vanishes before its pivot)
    void axpy(std::vector<u64>& v, u64 c, const std::vector<u64>& h, std::size_t from) {
        u64 nc = (ring.m - c % ring.m) % ring.m;
        if (nc == 0) return;
        for (std::size_t j = from; j < cols; ++j)
            v[j] = (v[j] + nc * h[j]) % ring.m;
    }

    void insert(std::vector<u64> v) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (v[j] == 0) continue;
            if (!occupied[j]) {
                u64 u = ring.unit_for(v[j]);
                scale_row(v, u, j);
                u64 g = v[j];  // divides m now
                basis[j] = v;
                occupied[j] = 1;
                u64 ann = ring.m / g;
                if (ann != 1 && ann != ring.m) {
                    std::vector<u64> w = basis[j];
                    scale_row(w, ann, j);
                    insert(std::move(w));
                }
                return;
            }
            std::vector<u64>& h = basis[j];
            u64 g = h[j];
            if (v[j] % g == 0) {
                axpy(v, v[j] / g, h, j);
                continue;
            }
            // Unimodular 2x2 combine: rows (s,t) and (-v_j/d, h_j/d).
            i64 d, s, t;
            xgcd_i64(static_cast<i64>(g), static_cast<i64>(v[j]), d, s, t);
            u64 hj = g, vj = v[j];
            std::vector<u64> new_h(cols, 0), new_v(cols, 0);
            u64 su = ring.reduce(s), tu = ring.reduce(t);
            u64 p = static_cast<u64>(static_cast<i64>(hj) / d);
            u64 q = ring.reduce(-(static_cast<i64>(vj) / d));
            for (std::size_t k = j; k < cols; ++k) {
                new_h[k] = (su * h[k] + tu * v[k]) % ring.m;
                new_v[k] = (q * h[k] + p * v[k]) % ring.m;
            }
            // normalize the replacement pivot and reinstall
            u64 u = ring.unit_for(new_h[j]);
            scale_row(new_h, u, j);
            u64 g2 = new_h[j];
            basis[j] = std::move(new_h);
            u64 ann = ring.m / g2;
            if (ann != 1 && ann != ring.m) {
                std::vector<u64> w = basis[j];
                scale_row(w, ann, j);
                insert(std::move(w));
            }
            v = std::move(new_v);
            // v now has a zero at column j; keep scanning
        }
    }

    MatrixZm finish() {
        // canonicalize: reduce each row at every later pivot column
        std::vector<std::size_t> pivots;
        for (std::size_t j = 0; j < cols; ++j)
            if (occupied[j]) pivots.push_back(j);
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
            for (std::size_t pj = pi + 1; pj < pivots.size(); ++pj) {
                std::size_t j = pivots[pj];
                u64 g = basis[j][j];
                u64 e = basis[pivots[pi]][j];
                if (e / g != 0) axpy(basis[pivots[pi]], e / g, basis[j], j);
            }
        }
        MatrixZm H(ring, pivots.size(), cols);
        for (std::size_t i = 0; i < pivots.size(); ++i) H.set_row(i, basis[pivots[i]]);
        return H;
    }
};

}  // namespace

MatrixZm howell_form(const MatrixZm& A) {
    HowellBuilder hb(A.ring, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i) hb.insert(A.row(i));
    return hb.finish();
}

std::vector<u64> howell_reduce(const MatrixZm& H, std::vector<u64> v) {
    if (v.size() != H.cols) throw std::invalid_argument("howell_reduce: size mismatch");
    u64 m = H.ring.m;
    for (auto& x : v) x %= m;
    for (std::size_t r = 0; r < H.rows; ++r) {
        std::size_t piv = H.cols;
        for (std::size_t j = 0; j < H.cols; ++j)
            if (H.at(r, j) != 0) { piv = j; break; }
        if (piv == H.cols) continue;
        u64 g = H.at(r, piv);
        u64 c = (v[piv] / g) % m;
        if (c) {
            for (std::size_t k = piv; k < H.cols; ++k)
                v[k] = (v[k] + (m - c) * H.at(r, k)) % m;
        }
    }
    return v;
}

bool in_span(const MatrixZm& H, const std::vector<u64>& v) {
    auto r = howell_reduce(H, v);
    return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
}

namespace {

// Howell form of [A | I] used for kernels and solving.
MatrixZm howell_augmented(const MatrixZm& A) {
    MatrixZm aug(A.ring, A.rows, A.cols + A.rows);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols + i) = 1 % A.ring.m;
    }
    return howell_form(aug);
}

}  // namespace

MatrixZm left_kernel(const MatrixZm& A) {
    MatrixZm H = howell_augmented(A);
    std::vector<std::vector<u64>> ker;
    for (std::size_t i = 0; i < H.rows; ++i) {
        bool zero_a = true;
        for (std::size_t j = 0; j < A.cols && zero_a; ++j)
            if (H.at(i, j) != 0) zero_a = false;
        if (zero_a) {
            std::vector<u64> t(A.rows);
            for (std::size_t j = 0; j < A.rows; ++j) t[j] = H.at(i, A.cols + j);
            ker.push_back(std::move(t));
        }
    }
    if (ker.empty()) return MatrixZm(A.ring, 0, A.rows);
    return howell_form(MatrixZm::from_rows(A.ring, ker));
}

std::optional<SolveResult> solve_linear(const MatrixZm& A, const std::vector<u64>& b) {
    if (b.size() != A.cols) throw std::invalid_argument("solve_linear: dimension mismatch");
    MatrixZm H = howell_augmented(A);
    u64 m = A.ring.m;
    std::vector<u64> r = b;
    for (auto& x : r) x %= m;
    std::vector<u64> coeff(A.rows, 0);
    for (std::size_t i = 0; i < H.rows; ++i) {
        std::size_t piv = H.cols;
        for (std::size_t j = 0; j < A.cols; ++j)
            if (H.at(i, j) != 0) { piv = j; break; }
        if (piv == H.cols) break;  // remaining rows have zero A-part
        u64 g = H.at(i, piv);
        if (r[piv] % g != 0) continue;  // this pivot cannot help; move on
        u64 c = r[piv] / g;
        if (c % m == 0) continue;
        for (std::size_t j = 0; j < A.cols; ++j)
            r[j] = (r[j] + (m - c % m) * H.at(i, j)) % m;
        for (std::size_t j = 0; j < A.rows; ++j)
            coeff[j] = (coeff[j] + c * H.at(i, A.cols + j)) % m;
    }
    if (!std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; })) return std::nullopt;
    SolveResult out;
    out.particular = std::move(coeff);
    out.kernel = left_kernel(A);
    return out;
}

MatrixZm separation_matrix(const MatrixZm& S, std::size_t ambient) {
    if (S.rows == 0) return MatrixZm::identity(S.ring, ambient);
    if (S.cols != ambient) throw std::invalid_argument("separation_matrix: width mismatch");
    MatrixZm N = left_kernel(S.transpose());
    return N.transpose();
}

MatrixZm kernel_mod(const MatrixZm& A, const MatrixZm& Rel) {
    if (Rel.rows > 0 && Rel.cols != A.cols)
        throw std::invalid_argument("kernel_mod: column mismatch");
    MatrixZm K = separation_matrix(Rel.rows ? Rel : MatrixZm(A.ring, 0, A.cols), A.cols);
    return left_kernel(A.mul(K));
}

std::optional<std::vector<u64>> solve_mod(const MatrixZm& A, const MatrixZm& Rel,
                                          const std::vector<u64>& b) {
    MatrixZm stacked = A.vstack(Rel.rows ? Rel : MatrixZm(A.ring, 0, A.cols));
    auto sol = solve_linear(stacked, b);
    if (!sol) return std::nullopt;
    return std::vector<u64>(sol->particular.begin(),
                            sol->particular.begin() + static_cast<std::ptrdiff_t>(A.rows));
}

std::optional<MatrixZm> matrix_inverse(const MatrixZm& A) {
    if (A.rows != A.cols) return std::nullopt;
    MatrixZm X(A.ring, A.rows, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i) {
        std::vector<u64> e(A.rows, 0);
        e[i] = 1 % A.ring.m;
        auto sol = solve_linear(A, e);
        if (!sol) return std::nullopt;
        X.set_row(i, sol->particular);
    }
    // over a finite ring a one-sided inverse of a square matrix is two-sided
    if (!(X.mul(A) == MatrixZm::identity(A.ring, A.rows))) return std::nullopt;
    return X;
}

}  // namespace hkcoeff
