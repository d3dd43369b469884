#pragma once

#include "hkcoeff/weyl.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace hkcoeff {

struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Working precision for transport matrices; raised via HKCOEFF_PRECISION.
struct PadicCtx {
    u64 p = 2;
    int digits = 8;  // number of significant p-adic digits kept

    u64 pow(int e) const {
        u64 out = 1;
        for (int i = 0; i < e; ++i) out *= p;
        return out;
    }
};

/// p-adic number p^val * man with man a unit (or exactly zero), tracked to
/// `prec` significant digits. Arithmetic throws PrecisionError when
/// cancellation eats the whole window.
struct Zp {
    i64 val = 0;
    u64 man = 0;  // 0 encodes exact zero
    int prec = 0;

    bool is_zero() const { return man == 0; }
};

Zp zp_from_int(const PadicCtx& ctx, i64 n);
Zp zp_zero();
/// p^val * (unit lift of m)
Zp zp_make(const PadicCtx& ctx, i64 val, i64 man);

Zp zp_add(const PadicCtx& ctx, const Zp& a, const Zp& b);
Zp zp_neg(const PadicCtx& ctx, const Zp& a);
Zp zp_mul(const PadicCtx& ctx, const Zp& a, const Zp& b);
Zp zp_inv(const PadicCtx& ctx, const Zp& a);
/// multiply by p^e
Zp zp_shift(const Zp& a, i64 e);
/// residue of a p-adic integer modulo p (requires val >= 0 or zero)
u64 zp_mod_p(const PadicCtx& ctx, const Zp& a);
/// residue modulo p^k
u64 zp_mod_pk(const PadicCtx& ctx, const Zp& a, int k);

/// 2x2 matrix over the p-adic approximation ring.
struct Mat2P {
    std::array<Zp, 4> e;  // row major a b / c d

    static Mat2P identity(const PadicCtx& ctx);
    static Mat2P from_ints(const PadicCtx& ctx, i64 a, i64 b, i64 c, i64 d);
};

Mat2P m2_mul(const PadicCtx& ctx, const Mat2P& a, const Mat2P& b);
Mat2P m2_inv(const PadicCtx& ctx, const Mat2P& a);
Mat2P m2_scale_pow(const Mat2P& a, i64 e);  // multiply by p^e

/// standard lifts used for transports
Mat2P lift_simple_mat(const PadicCtx& ctx, int i);   // n_{s0}, n_{s1}
Mat2P lift_omega_mat(const PadicCtx& ctx);           // [[0,1],[p,0]]
Mat2P digit_upper(const PadicCtx& ctx, u64 c);       // [[1,c],[0,1]]
Mat2P digit_lower1(const PadicCtx& ctx, u64 c);      // [[1,0],[p c,1]]

/// Group element for transports: omega^eps * mat, eps in {0,1} (always 0
/// for SL2). The PGL2 matrix part is taken up to powers of p.
struct GroupElt {
    int eps = 0;
    Mat2P mat;
};

GroupElt ge_identity(const PadicCtx& ctx);
GroupElt ge_from_mat(const Mat2P& m);
GroupElt ge_omega(const PadicCtx& ctx);
GroupElt ge_mul(const PadicCtx& ctx, const GroupElt& a, const GroupElt& b);
GroupElt ge_inv(const PadicCtx& ctx, const GroupElt& a);
/// full matrix omega^eps * mat (for lattice actions)
Mat2P ge_matrix(const PadicCtx& ctx, const GroupElt& g);

/// Vertex of the tree: lattice class at distance k from the base vertex,
/// labelled by a point of P^1(Z/p^k).
struct VertexKey {
    u64 k = 0;
    bool upper = false;  // true: line (1 : b) with b = 0 mod p; false: (a : 1)
    u64 a = 0;           // residue mod p^k

    auto operator<=>(const VertexKey&) const = default;
};

VertexKey base_vertex_x0();
VertexKey base_vertex_x1();

/// Act by a matrix on a lattice class. Throws PrecisionError if the result
/// cannot be resolved within the precision window.
VertexKey vertex_act(const PadicCtx& ctx, const Mat2P& g, const VertexKey& v);
VertexKey vertex_act(const PadicCtx& ctx, const GroupElt& g, const VertexKey& v);

/// Reduce an integral matrix modulo p in the chart of a type-0 or type-1
/// vertex; throws when the valuation pattern violates chart integrality.
std::array<u64, 4> chart_reduce(const PadicCtx& ctx, const Mat2P& g, int vertex_type,
                                bool projective);

/// Extract the Iwahori torus class of an element stabilizing the base
/// chamber (upper-triangular reduction pattern after projective scaling).
TorusElt iwahori_torus_class(const PadicCtx& ctx, const GroupData& gd, const Mat2P& g);

}  // namespace hkcoeff
