#include "hkcoeff/padic.hpp"

#include <algorithm>
#include <limits>

namespace hkcoeff {

namespace {

u64 inv_mod(u64 a, u64 n) {
    i64 g, s, t;
    xgcd_i64(static_cast<i64>(a % n), static_cast<i64>(n), g, s, t);
    if (g != 1) throw std::logic_error("inv_mod: not a unit");
    return static_cast<u64>(((s % (i64)n) + (i64)n) % (i64)n);
}

Zp normalize(const PadicCtx& ctx, Zp z) {
    if (z.man == 0) return zp_zero();
    while (z.man % ctx.p == 0) {
        z.man /= ctx.p;
        z.val += 1;
        z.prec -= 1;
        if (z.man == 0) return zp_zero();
        if (z.prec <= 0)
            throw PrecisionError("p-adic cancellation exhausted the precision window");
    }
    u64 win = ctx.pow(z.prec);
    z.man %= win;
    if (z.man == 0) return zp_zero();
    return z;
}

}  // namespace

Zp zp_zero() { return Zp{0, 0, 0}; }

Zp zp_from_int(const PadicCtx& ctx, i64 n) {
    if (n == 0) return zp_zero();
    u64 win = ctx.pow(ctx.digits);
    i64 r = n % static_cast<i64>(win);
    if (r < 0) r += static_cast<i64>(win);
    return normalize(ctx, Zp{0, static_cast<u64>(r), ctx.digits});
}

Zp zp_make(const PadicCtx& ctx, i64 val, i64 man) {
    Zp z = zp_from_int(ctx, man);
    if (z.is_zero()) return z;
    z.val += val;
    return z;
}

Zp zp_shift(const Zp& a, i64 e) {
    if (a.is_zero()) return a;
    Zp z = a;
    z.val += e;
    return z;
}

Zp zp_neg(const PadicCtx& ctx, const Zp& a) {
    if (a.is_zero()) return a;
    Zp z = a;
    z.man = ctx.pow(z.prec) - z.man;
    return normalize(ctx, z);
}

Zp zp_add(const PadicCtx& ctx, const Zp& a, const Zp& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const Zp& lo = a.val <= b.val ? a : b;
    const Zp& hi = a.val <= b.val ? b : a;
    i64 d = hi.val - lo.val;
    int prec = std::min<i64>(lo.prec, hi.prec + d);
    if (prec <= 0) throw PrecisionError("zp_add: no overlapping precision");
    u64 win = ctx.pow(prec);
    u64 shifted = d >= prec ? 0 : hi.man % ctx.pow(prec - static_cast<int>(d)) * ctx.pow(static_cast<int>(d));
    Zp z{lo.val, (lo.man % win + shifted) % win, prec};
    if (z.man == 0) return zp_zero();
    return normalize(ctx, z);
}

Zp zp_mul(const PadicCtx& ctx, const Zp& a, const Zp& b) {
    if (a.is_zero() || b.is_zero()) return zp_zero();
    int prec = std::min(a.prec, b.prec);
    u64 win = ctx.pow(prec);
    Zp z{a.val + b.val, (a.man % win) * (b.man % win) % win, prec};
    return normalize(ctx, z);
}

Zp zp_inv(const PadicCtx& ctx, const Zp& a) {
    if (a.is_zero()) throw std::logic_error("zp_inv: zero");
    u64 win = ctx.pow(a.prec);
    return Zp{-a.val, inv_mod(a.man, win), a.prec};
}

u64 zp_mod_p(const PadicCtx& ctx, const Zp& a) {
    if (a.is_zero()) return 0;
    if (a.val < 0) throw PrecisionError("zp_mod_p: negative valuation");
    if (a.val > 0) return 0;
    return a.man % ctx.p;
}

u64 zp_mod_pk(const PadicCtx& ctx, const Zp& a, int k) {
    if (k == 0) return 0;
    if (a.is_zero()) return 0;
    if (a.val < 0) throw PrecisionError("zp_mod_pk: negative valuation");
    if (a.val >= k) return 0;
    if (a.prec + a.val < k) throw PrecisionError("zp_mod_pk: not enough digits");
    return a.man % ctx.pow(k - static_cast<int>(a.val)) * ctx.pow(static_cast<int>(a.val));
}

Mat2P Mat2P::identity(const PadicCtx& ctx) {
    return Mat2P{{zp_from_int(ctx, 1), zp_zero(), zp_zero(), zp_from_int(ctx, 1)}};
}

Mat2P Mat2P::from_ints(const PadicCtx& ctx, i64 a, i64 b, i64 c, i64 d) {
    return Mat2P{{zp_from_int(ctx, a), zp_from_int(ctx, b), zp_from_int(ctx, c),
                  zp_from_int(ctx, d)}};
}

Mat2P m2_mul(const PadicCtx& ctx, const Mat2P& a, const Mat2P& b) {
    auto mul = [&](const Zp& x, const Zp& y) { return zp_mul(ctx, x, y); };
    auto add = [&](const Zp& x, const Zp& y) { return zp_add(ctx, x, y); };
    return Mat2P{{add(mul(a.e[0], b.e[0]), mul(a.e[1], b.e[2])),
                  add(mul(a.e[0], b.e[1]), mul(a.e[1], b.e[3])),
                  add(mul(a.e[2], b.e[0]), mul(a.e[3], b.e[2])),
                  add(mul(a.e[2], b.e[1]), mul(a.e[3], b.e[3]))}};
}

Mat2P m2_inv(const PadicCtx& ctx, const Mat2P& a) {
    Zp det = zp_add(ctx, zp_mul(ctx, a.e[0], a.e[3]),
                    zp_neg(ctx, zp_mul(ctx, a.e[1], a.e[2])));
    Zp idet = zp_inv(ctx, det);
    return Mat2P{{zp_mul(ctx, a.e[3], idet), zp_mul(ctx, zp_neg(ctx, a.e[1]), idet),
                  zp_mul(ctx, zp_neg(ctx, a.e[2]), idet), zp_mul(ctx, a.e[0], idet)}};
}

Mat2P m2_scale_pow(const Mat2P& a, i64 e) {
    Mat2P out = a;
    for (auto& x : out.e) x = zp_shift(x, e);
    return out;
}

Mat2P lift_simple_mat(const PadicCtx& ctx, int i) {
    if (i == 0) return Mat2P::from_ints(ctx, 0, 1, -1, 0);
    Mat2P m = Mat2P::from_ints(ctx, 0, -1, 1, 0);
    m.e[1] = zp_shift(m.e[1], -1);  // -1/p
    m.e[2] = zp_shift(m.e[2], 1);   // p
    return m;
}

Mat2P lift_omega_mat(const PadicCtx& ctx) {
    Mat2P m = Mat2P::from_ints(ctx, 0, 1, 1, 0);
    m.e[2] = zp_shift(m.e[2], 1);  // p
    return m;
}

Mat2P digit_upper(const PadicCtx& ctx, u64 c) {
    return Mat2P::from_ints(ctx, 1, static_cast<i64>(c), 0, 1);
}

Mat2P digit_lower1(const PadicCtx& ctx, u64 c) {
    Mat2P m = Mat2P::from_ints(ctx, 1, 0, static_cast<i64>(c), 1);
    m.e[2] = zp_shift(m.e[2], 1);  // p*c
    return m;
}

GroupElt ge_identity(const PadicCtx& ctx) { return GroupElt{0, Mat2P::identity(ctx)}; }

GroupElt ge_from_mat(const Mat2P& m) { return GroupElt{0, m}; }

GroupElt ge_omega(const PadicCtx& ctx) { return GroupElt{1, Mat2P::identity(ctx)}; }

namespace {

Mat2P conj_by_omega(const Mat2P& m) {
    // omega [[a,b],[c,d]] omega^{-1} = [[d, c/p],[p b, a]]
    return Mat2P{{m.e[3], zp_shift(m.e[2], -1), zp_shift(m.e[1], 1), m.e[0]}};
}

}  // namespace

GroupElt ge_mul(const PadicCtx& ctx, const GroupElt& a, const GroupElt& b) {
    // (om^e1 M1)(om^e2 M2) = om^{e1+e2} (om^{-e2} M1 om^{e2}) M2
    Mat2P m1 = a.mat;
    if (b.eps) m1 = conj_by_omega(m1);  // omega is an involution mod scalars
    GroupElt out;
    out.eps = (a.eps + b.eps) % 2;
    out.mat = m2_mul(ctx, m1, b.mat);
    if (a.eps && b.eps) out.mat = m2_scale_pow(out.mat, 1);  // omega^2 = p
    return out;
}

GroupElt ge_inv(const PadicCtx& ctx, const GroupElt& a) {
    Mat2P minv = m2_inv(ctx, a.mat);
    if (a.eps == 0) return GroupElt{0, minv};
    // (om M)^{-1} = M^{-1} om^{-1} = om^{-1} (om M^{-1} om^{-1}) = om (conj)(scaled)
    Mat2P conj = conj_by_omega(minv);
    return GroupElt{1, m2_scale_pow(conj, -1)};
}

Mat2P ge_matrix(const PadicCtx& ctx, const GroupElt& g) {
    if (g.eps == 0) return g.mat;
    return m2_mul(ctx, lift_omega_mat(ctx), g.mat);
}

VertexKey base_vertex_x0() { return VertexKey{0, false, 0}; }
VertexKey base_vertex_x1() { return VertexKey{1, true, 0}; }

namespace {

// the lattice of a key as two column generators (w | p^k e2) or similar
std::array<Zp, 4> key_columns(const PadicCtx& ctx, const VertexKey& v) {
    // columns of [[x, p^k],[y, 0]] variants: lattice = Zp w + p^k L0 with a
    // second generator chosen so the two columns already span
    if (!v.upper) {
        // w = (a, 1): lattice = span{(a,1),(p^k,0)}
        return {zp_from_int(ctx, static_cast<i64>(v.a)), zp_make(ctx, static_cast<i64>(v.k), 1),
                zp_from_int(ctx, 1), zp_zero()};
    }
    // w = (1, b) with b = 0 mod p: lattice = span{(1,b),(0,p^k)}
    return {zp_from_int(ctx, 1), zp_zero(), zp_from_int(ctx, static_cast<i64>(v.a)),
            zp_make(ctx, static_cast<i64>(v.k), 1)};
}

}  // namespace

VertexKey vertex_act(const PadicCtx& ctx, const Mat2P& g, const VertexKey& v) {
    auto cols = key_columns(ctx, v);
    // apply g to both column generators
    Mat2P L{{cols[0], cols[1], cols[2], cols[3]}};
    Mat2P gl = m2_mul(ctx, g, L);
    // column Hermite: bring to span{(p^alpha, y), (0, p^delta)}
    Zp top0 = gl.e[0], top1 = gl.e[1];
    Zp bot0 = gl.e[2], bot1 = gl.e[3];
    auto valof = [&](const Zp& z) { return z.is_zero() ? std::numeric_limits<i64>::max() : z.val; };
    if (valof(top1) < valof(top0)) {
        std::swap(top0, top1);
        std::swap(bot0, bot1);
    }
    if (!top0.is_zero()) {
        if (!top1.is_zero()) {
            // kill the top of column 1: c1 -= (top1/top0) c0
            Zp f = zp_mul(ctx, top1, zp_inv(ctx, top0));
            top1 = zp_add(ctx, top1, zp_neg(ctx, zp_mul(ctx, f, top0)));
            bot1 = zp_add(ctx, bot1, zp_neg(ctx, zp_mul(ctx, f, bot0)));
        }
        if (!top1.is_zero()) throw PrecisionError("vertex_act: column elimination failed");
    } else {
        throw PrecisionError("vertex_act: degenerate lattice");
    }
    if (bot1.is_zero()) throw PrecisionError("vertex_act: rank collapse");
    // columns are now (top0, bot0), (0, bot1); scale both to clean powers
    i64 alpha = top0.val, delta = bot1.val;
    Zp y = bot0.is_zero() ? zp_zero()
                          : zp_mul(ctx, bot0, zp_inv(ctx, Zp{0, top0.man, top0.prec}));
    // homothety normalization
    i64 yval = y.is_zero() ? std::numeric_limits<i64>::max() : y.val;
    i64 mu = std::min({alpha, delta, yval});
    alpha -= mu;
    delta -= mu;
    if (!y.is_zero()) y = zp_shift(y, -mu);
    u64 kk = static_cast<u64>(alpha + delta);
    // reduce y modulo p^delta (column op against the second generator)
    u64 yred = y.is_zero() ? 0 : zp_mod_pk(ctx, y, static_cast<int>(delta));

    VertexKey out;
    out.k = kk;
    u64 win = kk == 0 ? 1 : ctx.pow(static_cast<int>(kk));
    if (kk == 0) {
        out.upper = false;
        out.a = 0;
        return out;
    }
    if (alpha == 0) {
        // w = (1, yred) with yred mod p^k
        if (yred % ctx.p == 0) {
            out.upper = true;
            out.a = yred % win;
        } else {
            out.upper = false;
            out.a = inv_mod(yred % win, win);
        }
    } else if (delta == 0) {
        // w = (0, 1): the line (0 : 1)
        out.upper = false;
        out.a = 0;
    } else {
        // alpha > 0, delta > 0: the normalization forces yred to be a unit
        if (yred % ctx.p == 0) throw PrecisionError("vertex_act: unexpected valuations");
        out.upper = false;
        out.a = ctx.pow(static_cast<int>(alpha)) % win * inv_mod(yred % win, win) % win;
    }
    return out;
}

VertexKey vertex_act(const PadicCtx& ctx, const GroupElt& g, const VertexKey& v) {
    return vertex_act(ctx, ge_matrix(ctx, g), v);
}

std::array<u64, 4> chart_reduce(const PadicCtx& ctx, const Mat2P& g, int vertex_type,
                                bool projective) {
    Mat2P m = g;
    if (projective) {
        // scale so the minimal valuation is zero
        i64 mu = std::numeric_limits<i64>::max();
        for (const auto& z : m.e)
            if (!z.is_zero()) mu = std::min(mu, z.val);
        if (mu == std::numeric_limits<i64>::max())
            throw PrecisionError("chart_reduce: zero matrix");
        m = m2_scale_pow(m, -mu);
    }
    if (vertex_type == 1) {
        // conjugate by diag(1, p): [[a, p b],[c/p, d]]
        m.e[1] = zp_shift(m.e[1], 1);
        m.e[2] = zp_shift(m.e[2], -1);
        if (projective) {
            i64 mu = std::numeric_limits<i64>::max();
            for (const auto& z : m.e)
                if (!z.is_zero()) mu = std::min(mu, z.val);
            m = m2_scale_pow(m, -mu);
        }
    }
    std::array<u64, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = zp_mod_p(ctx, m.e[static_cast<std::size_t>(i)]);
    u64 det = (out[0] * out[3] % ctx.p + ctx.p - out[1] * out[2] % ctx.p) % ctx.p;
    if (det == 0) throw PrecisionError("chart_reduce: reduction not invertible");
    return out;
}

TorusElt iwahori_torus_class(const PadicCtx& ctx, const GroupData& gd, const Mat2P& g) {
    Mat2P m = g;
    if (gd.kind == GroupKind::PGL2) {
        i64 mu = std::numeric_limits<i64>::max();
        for (const auto& z : m.e)
            if (!z.is_zero()) mu = std::min(mu, z.val);
        m = m2_scale_pow(m, -mu);
    }
    u64 a = zp_mod_p(ctx, m.e[0]), b = zp_mod_p(ctx, m.e[2]), d = zp_mod_p(ctx, m.e[3]);
    if (b != 0 || a == 0 || d == 0)
        throw PrecisionError("iwahori_torus_class: not an Iwahori reduction pattern");
    u64 q = gd.q;
    switch (gd.kind) {
        case GroupKind::SL2: return TorusElt{a % q};
        case GroupKind::PGL2: return TorusElt{a % q * inv_mod(d % q, q) % q};
        case GroupKind::GL2: return TorusElt{a % q, d % q};
    }
    throw std::logic_error("iwahori_torus_class");
}

}  // namespace hkcoeff
