#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hkcoeff {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// The coefficient ring Z/m. Elements are canonical residues in [0, m).
struct RingZm {
    u64 m = 2;

    explicit RingZm(u64 modulus = 2);

    u64 reduce(i64 x) const;
    u64 add(u64 a, u64 b) const { return (a + b) % m; }
    u64 sub(u64 a, u64 b) const { return (a + m - b) % m; }
    u64 neg(u64 a) const { return a == 0 ? 0 : m - a; }
    u64 mul(u64 a, u64 b) const { return (a * b) % m; }

    bool is_unit(u64 a) const;
    /// Multiplicative inverse; a must be a unit.
    u64 inv(u64 a) const;
    /// A unit u with u*a == gcd(a, m) mod m.
    u64 unit_for(u64 a) const;

    /// All units of Z/m (enumerated; m is desk-scale).
    std::vector<u64> units() const;
    /// The prime factorization of m as (prime, exponent) pairs.
    std::vector<std::pair<u64, int>> factorization() const;

    bool operator==(const RingZm&) const = default;
};

i64 gcd_i64(i64 a, i64 b);
/// g = gcd(a,b) with s*a + t*b = g.
void xgcd_i64(i64 a, i64 b, i64& g, i64& s, i64& t);

/// Dense row-major matrix over Z/m. Row vectors act on the left:
/// a linear map is x -> x * A.
struct MatrixZm {
    RingZm ring{2};
    std::size_t rows = 0, cols = 0;
    std::vector<u64> a;

    MatrixZm() = default;
    MatrixZm(RingZm r, std::size_t nrows, std::size_t ncols)
        : ring(r), rows(nrows), cols(ncols), a(nrows * ncols, 0) {}

    u64& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    u64 at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static MatrixZm identity(RingZm r, std::size_t n);
    static MatrixZm zero(RingZm r, std::size_t nrows, std::size_t ncols);
    static MatrixZm from_rows(RingZm r, const std::vector<std::vector<u64>>& rows);

    std::vector<u64> row(std::size_t i) const;
    void set_row(std::size_t i, const std::vector<u64>& v);

    MatrixZm transpose() const;
    MatrixZm mul(const MatrixZm& other) const;
    MatrixZm add(const MatrixZm& other) const;
    MatrixZm sub(const MatrixZm& other) const;
    MatrixZm scale(u64 c) const;
    /// Vertical stack [this; other].
    MatrixZm vstack(const MatrixZm& other) const;
    /// Horizontal concatenation [this | other].
    MatrixZm hstack(const MatrixZm& other) const;
    /// Keep columns [c0, c1).
    MatrixZm slice_cols(std::size_t c0, std::size_t c1) const;
    bool is_zero() const;

    bool operator==(const MatrixZm&) const = default;
    std::string str() const;
};

std::vector<u64> row_times_matrix(const std::vector<u64>& x, const MatrixZm& A);

/// Canonical Howell normal form of the row span of A. Rows have strictly
/// increasing pivot columns, each pivot divides m, entries above a pivot are
/// reduced modulo it, and no zero rows are kept. Two matrices have equal row
/// spans over Z/m iff their Howell forms are identical.
MatrixZm howell_form(const MatrixZm& A);

/// Reduce v against the rows of a Howell-form matrix H. The result is the
/// canonical representative of v modulo the row span of H.
std::vector<u64> howell_reduce(const MatrixZm& H, std::vector<u64> v);

/// True iff v lies in the row span of the Howell-form matrix H.
bool in_span(const MatrixZm& H, const std::vector<u64>& v);

/// Howell basis of the left kernel {x : x*A = 0}.
MatrixZm left_kernel(const MatrixZm& A);

/// ambient x t matrix K with { w : w*K = 0 } = rowspan(S). Linearizes
/// membership in a submodule; exists because Z/m is self-injective, so
/// functionals separate points of the quotient.
MatrixZm separation_matrix(const MatrixZm& S, std::size_t ambient);

struct SolveResult {
    std::vector<u64> particular;  // one x with x*A = b
    MatrixZm kernel;              // Howell basis of {x : x*A = 0}
};

/// Solve x*A = b together with the left kernel of A; nullopt when no solution.
std::optional<SolveResult> solve_linear(const MatrixZm& A, const std::vector<u64>& b);

/// Howell basis of {x in R^k : x*A lies in the row span of Rel}, where A is
/// k x n and Rel has n columns. Rel may be empty (rows = 0).
MatrixZm kernel_mod(const MatrixZm& A, const MatrixZm& Rel);

/// One x with x*A = b modulo the row span of Rel; nullopt when no solution.
std::optional<std::vector<u64>> solve_mod(const MatrixZm& A, const MatrixZm& Rel,
                                          const std::vector<u64>& b);

/// Inverse of a square matrix, if it is invertible over Z/m.
std::optional<MatrixZm> matrix_inverse(const MatrixZm& A);

}  // namespace hkcoeff
