#include "hkcoeff/weyl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hkcoeff {

namespace {

bool is_prime(u64 q) {
    if (q < 2) return false;
    for (u64 d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// Exact rationals and 2x2 matrices over Q, used once to derive and validate
// the group tables from the fixed matrix lifts.
struct Rat {
    i64 num = 0, den = 1;
    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i64 n, i64 d) : num(n), den(d) { normalize(); }
    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        i64 g = gcd_i64(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    Rat operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
    Rat operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
    Rat operator-() const { return Rat(-num, den); }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
};

struct Mat2Q {
    Rat a, b, c, d;
    Mat2Q mul(const Mat2Q& o) const {
        return Mat2Q{a * o.a + b * o.c, a * o.b + b * o.d,
                     c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2Q inv() const {
        Rat det = a * d + (-(b * c));
        if (det.num == 0) throw std::logic_error("Mat2Q: singular");
        Rat idet(det.den, det.num);
        return Mat2Q{d * idet, (-b) * idet, (-c) * idet, a * idet};
    }
    bool operator==(const Mat2Q& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

u64 mod_p(const Rat& r, u64 p) {
    i64 num = r.num % static_cast<i64>(p);
    if (num < 0) num += static_cast<i64>(p);
    i64 den = r.den % static_cast<i64>(p);
    if (den < 0) den += static_cast<i64>(p);
    if (den == 0) throw std::logic_error("mod_p: denominator divisible by p");
    i64 g, s, t;
    xgcd_i64(den, static_cast<i64>(p), g, s, t);
    i64 inv = ((s % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p);
    return static_cast<u64>(num) * static_cast<u64>(inv) % p;
}

// matrix lifts, with pi realized as the prime q itself inside Q
Mat2Q lift_simple(int i, u64 q) {
    i64 p = static_cast<i64>(q);
    if (i == 0) return Mat2Q{0, 1, -1, 0};
    return Mat2Q{0, Rat(-1, p), Rat(p), 0};
}

Mat2Q lift_omega(u64 q) { return Mat2Q{0, 1, Rat(static_cast<i64>(q)), 0}; }

Mat2Q torus_lift(GroupKind kind, const TorusElt& t) {
    i64 v0 = static_cast<i64>(t[0]);
    switch (kind) {
        case GroupKind::SL2: return Mat2Q{Rat(v0), 0, 0, Rat(1, v0)};
        case GroupKind::PGL2: return Mat2Q{Rat(v0), 0, 0, 1};
        case GroupKind::GL2: return Mat2Q{Rat(v0), 0, 0, Rat(static_cast<i64>(t[1]))};
    }
    throw std::logic_error("torus_lift");
}

u64 prim_root(u64 p) {
    if (p == 2) return 1;
    for (u64 g = 2; g < p; ++g) {
        u64 x = g % p;
        std::size_t ord = 1;
        while (x != 1) { x = x * g % p; ++ord; }
        if (ord == p - 1) return g;
    }
    throw std::logic_error("prim_root: none found");
}

}  // namespace

std::string kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::SL2: return "sl2";
        case GroupKind::PGL2: return "pgl2";
        case GroupKind::GL2: return "gl2";
    }
    return "?";
}

GroupKind kind_from_name(const std::string& s) {
    if (s == "sl2" || s == "SL2") return GroupKind::SL2;
    if (s == "pgl2" || s == "PGL2") return GroupKind::PGL2;
    if (s == "gl2" || s == "GL2") return GroupKind::GL2;
    throw std::invalid_argument("unknown group kind: " + s);
}

std::string face_name(FaceLabel f) {
    switch (f) {
        case FaceLabel::x0: return "x0";
        case FaceLabel::x1: return "x1";
        case FaceLabel::C: return "C";
    }
    return "?";
}

FaceLabel face_from_name(const std::string& s) {
    if (s == "x0") return FaceLabel::x0;
    if (s == "x1") return FaceLabel::x1;
    if (s == "C" || s == "c") return FaceLabel::C;
    throw std::invalid_argument("unknown face: " + s);
}

TorusElt GroupData::torus_identity() const { return TorusElt(torus_factors, 1); }

bool GroupData::torus_is_identity(const TorusElt& t) const {
    return std::all_of(t.begin(), t.end(), [](u64 v) { return v == 1; });
}

TorusElt GroupData::torus_mul(const TorusElt& a, const TorusElt& b) const {
    TorusElt out(torus_factors);
    for (std::size_t i = 0; i < torus_factors; ++i) out[i] = a[i] * b[i] % q;
    return out;
}

TorusElt GroupData::torus_inv(const TorusElt& a) const {
    TorusElt out(torus_factors);
    for (std::size_t i = 0; i < torus_factors; ++i) {
        i64 g, s, t;
        xgcd_i64(static_cast<i64>(a[i]), static_cast<i64>(q), g, s, t);
        out[i] = static_cast<u64>(((s % static_cast<i64>(q)) + static_cast<i64>(q)) %
                                  static_cast<i64>(q));
    }
    return out;
}

std::vector<TorusElt> GroupData::torus_elements() const {
    std::vector<TorusElt> out;
    TorusElt cur(torus_factors, 1);
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < torus_factors) {
            if (++cur[i] < q) break;
            cur[i] = 1;
            ++i;
        }
        if (i == torus_factors) break;
    }
    return out;
}

std::vector<TorusElt> GroupData::torus_generators() const {
    if (q == 2) return {};
    u64 g = prim_root(q);
    std::vector<TorusElt> out;
    for (std::size_t i = 0; i < torus_factors; ++i) {
        TorusElt t(torus_factors, 1);
        t[i] = g;
        out.push_back(t);
    }
    return out;
}

u64 GroupData::torus_order() const {
    u64 o = 1;
    for (std::size_t i = 0; i < torus_factors; ++i) o *= (q - 1);
    return o;
}

TorusElt GroupData::conj_s(int, const TorusElt& t) const {
    if (kind == GroupKind::GL2) return TorusElt{t[1], t[0]};
    return torus_inv(t);
}

TorusElt GroupData::conj_omega(const TorusElt& t) const {
    if (kind == GroupKind::GL2) return TorusElt{t[1], t[0]};
    return torus_inv(t);
}

TorusElt GroupData::conj_word(const AffWord& w, const TorusElt& t) const {
    TorusElt out = t;
    for (std::size_t k = w.len; k-- > 0;) out = conj_s(w.letter(k), out);
    return out;
}

WeylElt GroupData::identity() const { return WeylElt{torus_identity(), AffWord{}, 0}; }

WeylElt GroupData::torus_elt(const TorusElt& t) const { return WeylElt{t, AffWord{}, 0}; }

WeylElt GroupData::simple(int i) const {
    return WeylElt{torus_identity(), AffWord{i, 1}, 0};
}

i64 GroupData::normalize_omega(i64 e) const {
    switch (kind) {
        case GroupKind::SL2:
            if (e != 0) throw std::invalid_argument("SL2 has trivial Omega");
            return 0;
        case GroupKind::PGL2: return ((e % 2) + 2) % 2;
        case GroupKind::GL2: return e;
    }
    return 0;
}

WeylElt GroupData::omega_elt(i64 e) const {
    return WeylElt{torus_identity(), AffWord{}, normalize_omega(e)};
}

WeylElt GroupData::multiply(const WeylElt& a, const WeylElt& b) const {
    TorusElt t2 = (a.omega % 2 != 0) ? conj_omega(b.torus) : b.torus;
    AffWord ub = b.word;
    if (a.omega % 2 != 0 && ub.len > 0) ub.first ^= 1;
    TorusElt t = torus_mul(a.torus, conj_word(a.word, t2));

    AffWord u1 = a.word, u2 = ub;
    while (u1.len > 0 && u2.len > 0 && u1.last() == u2.first) {
        int l = u1.last();
        AffWord prefix{u1.first, u1.len - 1};
        t = torus_mul(t, conj_word(prefix, square[static_cast<std::size_t>(l)]));
        u1 = prefix;
        u2 = AffWord{u2.first ^ 1, u2.len - 1};
    }
    AffWord w;
    if (u1.len == 0) w = u2;
    else if (u2.len == 0) w = u1;
    else w = AffWord{u1.first, u1.len + u2.len};
    return WeylElt{t, w, normalize_omega(a.omega + b.omega)};
}

WeylElt GroupData::inverse(const WeylElt& a) const {
    WeylElt r = omega_elt(kind == GroupKind::GL2 ? -a.omega : a.omega);
    for (std::size_t k = a.word.len; k-- > 0;) {
        int l = a.word.letter(k);
        // n^{-1} = sigma^{-1} * n with sigma = n^2 central
        WeylElt inv_letter{torus_inv(square[static_cast<std::size_t>(l)]), AffWord{l, 1}, 0};
        r = multiply(r, inv_letter);
    }
    r = multiply(r, torus_elt(torus_inv(a.torus)));
    return r;
}

WeylElt GroupData::conjugate(const WeylElt& g, const WeylElt& x) const {
    return multiply(multiply(g, x), inverse(g));
}

std::vector<WeylElt> GroupData::elements_up_to(std::size_t maxlen) const {
    std::vector<AffWord> words{AffWord{}};
    for (std::size_t l = 1; l <= maxlen; ++l) {
        words.push_back(AffWord{0, l});
        words.push_back(AffWord{1, l});
    }
    std::vector<i64> omegas;
    switch (kind) {
        case GroupKind::SL2: omegas = {0}; break;
        case GroupKind::PGL2: omegas = {0, 1}; break;
        case GroupKind::GL2:
            for (i64 e = -static_cast<i64>(maxlen); e <= static_cast<i64>(maxlen); ++e)
                omegas.push_back(e);
            break;
    }
    std::vector<WeylElt> out;
    for (const auto& t : torus_elements())
        for (const auto& w : words)
            for (i64 e : omegas) out.push_back(WeylElt{t, w, e});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<WeylElt> GroupData::finite_weyl_group(FaceLabel f, bool dagger) const {
    std::vector<WeylElt> out;
    const bool vertex = f != FaceLabel::C;
    const int i = (f == FaceLabel::x0) ? 0 : 1;
    std::vector<i64> omegas{0};
    if (dagger) {
        if (kind == GroupKind::GL2)
            throw std::invalid_argument("GL2 dagger level: Omega_F is infinite");
        if (kind == GroupKind::PGL2 && f == FaceLabel::C) omegas = {0, 1};
        // Omega_{x_i} is trivial for PGL2: omega swaps the two vertices
    }
    for (const auto& t : torus_elements()) {
        for (i64 e : omegas) {
            out.push_back(WeylElt{t, AffWord{}, e});
            if (vertex) out.push_back(WeylElt{t, AffWord{i, 1}, e});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool GroupData::minimal_in_coset(const WeylElt& d, FaceLabel f) const {
    if (f == FaceLabel::C) return true;
    int i = (f == FaceLabel::x0) ? 0 : 1;
    return multiply(d, simple(i)).length() > d.length();
}

std::vector<WeylElt> GroupData::enum_DF(FaceLabel f, std::size_t maxlen) const {
    std::vector<WeylElt> out;
    for (const auto& w : elements_up_to(maxlen))
        if (minimal_in_coset(w, f)) out.push_back(w);
    return out;
}

bool GroupData::is_length_additive(const WeylElt& d, const WeylElt& w) const {
    return multiply(d, w).length() == d.length() + w.length();
}

std::pair<WeylElt, WeylElt> GroupData::parahoric_factor(const WeylElt& w, FaceLabel f) const {
    if (f == FaceLabel::C || minimal_in_coset(w, f)) return {w, identity()};
    int i = (f == FaceLabel::x0) ? 0 : 1;
    WeylElt s = simple(i);
    WeylElt d = multiply(w, inverse(s));
    return {d, s};
}

GroupData make_group_data(GroupKind kind, u64 q) {
    if (!is_prime(q)) throw std::invalid_argument("make_group_data: q must be prime");
    GroupData gd;
    gd.kind = kind;
    gd.q = q;
    gd.torus_factors = (kind == GroupKind::GL2) ? 2 : 1;

    auto classify = [&](const Mat2Q& M) -> TorusElt {
        if (!(M.b == Rat(0)) || !(M.c == Rat(0)))
            throw std::logic_error("classify: matrix not diagonal");
        switch (kind) {
            case GroupKind::SL2: return TorusElt{mod_p(M.a, q)};
            case GroupKind::PGL2: {
                u64 a = mod_p(M.a, q), d = mod_p(M.d, q);
                i64 g, s, t;
                xgcd_i64(static_cast<i64>(d), static_cast<i64>(q), g, s, t);
                u64 dinv = static_cast<u64>(((s % (i64)q) + (i64)q) % (i64)q);
                return TorusElt{a * dinv % q};
            }
            case GroupKind::GL2: return TorusElt{mod_p(M.a, q), mod_p(M.d, q)};
        }
        throw std::logic_error("classify");
    };

    for (int i = 0; i < 2; ++i) {
        Mat2Q n = lift_simple(i, q);
        gd.square[static_cast<std::size_t>(i)] = classify(n.mul(n));
    }
    // quadratic-relation classes: images of diag(x, 1/x) under the root SL2
    for (int i = 0; i < 2; ++i) {
        std::vector<TorusElt> cls;
        for (u64 x = 1; x < q; ++x) {
            Mat2Q d{Rat(static_cast<i64>(x)), 0, 0, Rat(1, static_cast<i64>(x))};
            cls.push_back(classify(d));
        }
        gd.theta_classes[static_cast<std::size_t>(i)] = cls;
    }

    auto check = [](bool ok, const char* what) {
        if (!ok) throw std::logic_error(std::string("make_group_data: ") + what);
    };
    for (const auto& t : gd.torus_elements()) {
        Mat2Q tm = torus_lift(kind, t);
        for (int i = 0; i < 2; ++i) {
            Mat2Q n = lift_simple(i, q);
            TorusElt via_matrix = classify(n.mul(tm).mul(n.inv()));
            check(via_matrix == gd.conj_s(i, t), "conj_s disagrees with matrices");
        }
        if (gd.has_omega()) {
            Mat2Q om = lift_omega(q);
            TorusElt via_matrix = classify(om.mul(tm).mul(om.inv()));
            check(via_matrix == gd.conj_omega(t), "conj_omega disagrees with matrices");
        }
    }
    for (const auto& a : gd.torus_elements())
        for (const auto& b : gd.torus_elements()) {
            check(gd.conj_s(0, gd.torus_mul(a, b)) ==
                      gd.torus_mul(gd.conj_s(0, a), gd.conj_s(0, b)),
                  "conj_s not multiplicative");
        }
    if (gd.has_omega()) {
        Mat2Q om = lift_omega(q);
        check(om.mul(lift_simple(0, q)).mul(om.inv()) == lift_simple(1, q),
              "omega conjugation of n_s0");
        check(om.mul(lift_simple(1, q)).mul(om.inv()) == lift_simple(0, q),
              "omega conjugation of n_s1");
        if (kind == GroupKind::PGL2) {
            // omega^2 = pi * identity, trivial in PGL2
            Mat2Q sq = om.mul(om);
            check(sq.b == Rat(0) && sq.c == Rat(0) && sq.a == sq.d, "omega^2 not scalar");
        }
    }
    for (int i = 0; i < 2; ++i) {
        check(gd.conj_s(0, gd.square[static_cast<std::size_t>(i)]) ==
                  gd.square[static_cast<std::size_t>(i)],
              "square class not central");
    }
    for (int i = 0; i < 2; ++i) {
        auto cls = gd.theta_classes[static_cast<std::size_t>(i)];
        auto conj = cls;
        for (auto& c : conj) c = gd.conj_s(i, c);
        std::sort(cls.begin(), cls.end());
        std::sort(conj.begin(), conj.end());
        check(cls == conj, "theta classes not conjugation stable");
    }
    return gd;
}

std::string weyl_str(const GroupData& gd, const WeylElt& w) {
    std::ostringstream os;
    os << "t(";
    for (std::size_t i = 0; i < w.torus.size(); ++i) os << (i ? "," : "") << w.torus[i];
    os << ")";
    for (std::size_t k = 0; k < w.word.len; ++k) os << ".s" << w.word.letter(k);
    if (gd.has_omega() && w.omega != 0) os << ".w^" << w.omega;
    return os.str();
}

}  // namespace hkcoeff
