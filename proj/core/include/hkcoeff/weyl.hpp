#pragma once

#include "hkcoeff/zmatrix.hpp"

#include <array>
#include <compare>
#include <string>
#include <vector>

namespace hkcoeff {

enum class GroupKind { SL2, PGL2, GL2 };

std::string kind_name(GroupKind k);
GroupKind kind_from_name(const std::string& s);

/// Element of the finite torus quotient T0/T1, stored as multiplicative
/// residues mod q, one per cyclic factor (1 factor for SL2/PGL2, 2 for GL2).
using TorusElt = std::vector<u64>;

/// Alternating word in the affine generators s0, s1; automatically reduced.
struct AffWord {
    int first = 0;        // 0 or 1; meaningless when len == 0
    std::size_t len = 0;

    int letter(std::size_t k) const { return (first + static_cast<int>(k % 2)) % 2; }
    int last() const { return letter(len - 1); }
    auto operator<=>(const AffWord& o) const {
        if (len != o.len) return len <=> o.len;
        if (len == 0) return std::strong_ordering::equal;
        return first <=> o.first;
    }
    bool operator==(const AffWord& o) const { return len == o.len && (len == 0 || first == o.first); }
};

/// Normal form t * n_{i1}...n_{il} * omega^e of an element of the extended
/// Weyl group. The length is the word length; torus and omega parts have
/// length zero.
struct WeylElt {
    TorusElt torus;
    AffWord word;
    i64 omega = 0;

    std::size_t length() const { return word.len; }
    auto operator<=>(const WeylElt&) const = default;
};

enum class FaceLabel { x0, x1, C };

std::string face_name(FaceLabel f);
FaceLabel face_from_name(const std::string& s);

/// Rank-one root data: torus quotient tables, squares of the chosen lifts,
/// conjugation actions and the quadratic-relation torus classes, all derived
/// from fixed matrix lifts and validated on construction.
struct GroupData {
    GroupKind kind;
    u64 q = 2;  // prime residue cardinality
    std::size_t torus_factors = 1;

    // class of n_{s_i}^2 (both equal the class of -1)
    std::array<TorusElt, 2> square;
    // torus classes appearing in the quadratic relation, per generator
    std::array<std::vector<TorusElt>, 2> theta_classes;

    bool has_omega() const { return kind != GroupKind::SL2; }
    bool omega_finite() const { return kind != GroupKind::GL2; }

    // ---- torus quotient -------------------------------------------------
    TorusElt torus_identity() const;
    bool torus_is_identity(const TorusElt& t) const;
    TorusElt torus_mul(const TorusElt& a, const TorusElt& b) const;
    TorusElt torus_inv(const TorusElt& a) const;
    std::vector<TorusElt> torus_elements() const;
    /// Generators of the torus quotient (empty when q = 2).
    std::vector<TorusElt> torus_generators() const;
    u64 torus_order() const;
    /// conjugation by the lift n_{s_i}; independent of i for rank one
    TorusElt conj_s(int i, const TorusElt& t) const;
    TorusElt conj_omega(const TorusElt& t) const;
    /// conjugation by a reduced word (left to right composition of lifts)
    TorusElt conj_word(const AffWord& w, const TorusElt& t) const;

    // ---- extended Weyl group --------------------------------------------
    WeylElt identity() const;
    WeylElt torus_elt(const TorusElt& t) const;
    WeylElt simple(int i) const;        // the lift n_{s_i}
    WeylElt omega_elt(i64 e) const;     // omega^e
    i64 normalize_omega(i64 e) const;

    WeylElt multiply(const WeylElt& a, const WeylElt& b) const;
    WeylElt inverse(const WeylElt& a) const;
    WeylElt conjugate(const WeylElt& g, const WeylElt& x) const;  // g x g^{-1}

    /// All elements with length <= maxlen; for GL2 the omega exponent is
    /// windowed to |e| <= maxlen (the group is infinite).
    std::vector<WeylElt> elements_up_to(std::size_t maxlen) const;

    /// W~_F (dagger = extend by Omega_F). For GL2 with dagger this is
    /// infinite and rejected.
    std::vector<WeylElt> finite_weyl_group(FaceLabel f, bool dagger) const;

    /// Minimal-length test of d inside d * W~_F.
    bool minimal_in_coset(const WeylElt& d, FaceLabel f) const;

    /// All d in the preimage of D_F with length <= maxlen (omega windowed
    /// for GL2).
    std::vector<WeylElt> enum_DF(FaceLabel f, std::size_t maxlen) const;

    bool is_length_additive(const WeylElt& d, const WeylElt& w) const;

    /// Factor w = d * w_F with w_F in {1, n_{s_i}} and d of minimal length
    /// in its coset; F = C always gives w_F = 1.
    std::pair<WeylElt, WeylElt> parahoric_factor(const WeylElt& w, FaceLabel f) const;

    bool operator==(const GroupData& o) const { return kind == o.kind && q == o.q; }
};

/// Build and validate the rank-one group tables. q must be prime.
GroupData make_group_data(GroupKind kind, u64 q);

std::string weyl_str(const GroupData& gd, const WeylElt& w);

}  // namespace hkcoeff
