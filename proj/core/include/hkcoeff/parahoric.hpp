#pragma once

#include "hkcoeff/hecke.hpp"

#include <array>
#include <memory>
#include <optional>

namespace hkcoeff {

enum class SubgroupTag { ProP, Iwahori, Torus, OppUnipotent };

/// Finite quotient P_F / I_F: a matrix group over F_q at the vertices
/// (SL2(F_q), PGL2(F_q), GL2(F_q) in the chart of the vertex), and the
/// torus quotient (extended by omega at dagger level) at the chamber.
/// Elements are opaque ids with a multiplication table and tagged subgroups.
struct FiniteQuotient {
    GroupData gd;
    FaceLabel face = FaceLabel::C;
    bool dagger = false;

    std::vector<std::array<u64, 4>> mats;            // vertex case
    std::vector<std::pair<TorusElt, i64>> celts;     // chamber case
    std::vector<std::vector<std::size_t>> mul_table;
    std::vector<std::size_t> inv_table;
    std::size_t e_id = 0;
    std::vector<std::size_t> gens;

    std::size_t size() const { return mul_table.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return mul_table[a][b]; }
    std::size_t inv(std::size_t a) const { return inv_table[a]; }

    bool is_vertex() const { return face != FaceLabel::C; }
    /// canonicalize + look up a matrix mod q (vertex quotients)
    std::size_t id_of_mat(std::array<u64, 4> m) const;
    std::size_t id_of_celt(const TorusElt& t, i64 omega) const;
    /// image of an element of the finite Weyl group W~_F^(dagger)
    std::size_t from_weyl(const WeylElt& w) const;
    /// image of a torus class in the quotient
    std::size_t from_torus(const TorusElt& t) const;

    std::vector<std::size_t> subgroup(SubgroupTag tag) const;
};

std::shared_ptr<FiniteQuotient> finite_quotient(const GroupData& gd, FaceLabel face, bool dagger);

/// A representation of a finite quotient on a presented module: one action
/// matrix per group element (matrices act on row vectors).
struct FiniteRep {
    std::shared_ptr<const FiniteQuotient> quo;
    RingZm ring{2};
    PresentedModule carrier;
    std::vector<MatrixZm> action;

    MatrixZm act(std::size_t g) const { return action[g]; }
    /// full homomorphism check (products against generators)
    ValidationReport validate() const;
    FiniteRep dual() const;
};

/// Trivial representation of rank one.
FiniteRep trivial_rep(std::shared_ptr<const FiniteQuotient> quo, RingZm ring);

/// Everything the face-level theory needs in one bundle: quotient group,
/// parahoric algebra, the universal representation X_F with its right
/// algebra action, and the index of the distinguished invariant coset.
struct ParahoricData {
    GroupData gd;
    RingZm ring{2};
    FaceLabel face = FaceLabel::C;
    bool dagger = false;
    std::shared_ptr<FiniteQuotient> quo;
    std::shared_ptr<const FiniteAlgebra> alg;
    FiniteRep X;
    std::vector<MatrixZm> X_right;  // right action of each algebra basis element
    std::size_t unit_coset = 0;     // index of the coset [U'] in the X basis
    std::vector<std::vector<std::size_t>> cosets;  // element ids per X basis coset
};

ParahoricData make_parahoric_data(const GroupData& gd, RingZm ring, FaceLabel face, bool dagger);

/// Invariants of a representation under a tagged subgroup, as a submodule
/// of the carrier: rows of `generators` span the fixed space.
struct InvariantSpace {
    PresentedModule module;   // abstract presentation on the generators
    MatrixZm generators;      // rows in carrier-ambient coordinates
};

InvariantSpace invariants(const FiniteRep& V, const std::vector<std::size_t>& subgroup_elts);
InvariantSpace invariants(const FiniteRep& V, SubgroupTag tag);

/// V^{U'} with its module structure over the parahoric algebra, through the
/// double-coset sums. Also returns the inclusion data of the fixed space.
struct InvariantsModule {
    AlgebraModule module;
    MatrixZm generators;  // rows: fixed vectors in carrier coordinates
};

InvariantsModule invariants_module(const ParahoricData& pd, const FiniteRep& V);

struct ConditionHReport {
    bool holds = false;
    bool rep_generated = false;
    bool dual_generated = false;
    // a carrier element outside the generated subrepresentation, when any
    std::optional<std::vector<u64>> witness;
};

/// Condition (H) for finite carriers: V and V* are generated by their
/// invariants under the pro-p image.
ConditionHReport check_condition_H(const ParahoricData& pd, const FiniteRep& V);

struct TFunctorResult {
    FiniteRep rep;           // image representation, carrier minimized
    ModuleMap canonical;     // M -> carrier, m -> [unit (x) m]
    // conversion between the X (x) M tensor coordinates and the carrier
    MatrixZm to_min, from_min;
};

/// Face-level quasi-inverse: image of X (x)_S M -> Hom_S(Hom_S(X,S), M).
TFunctorResult t_functor(const ParahoricData& pd, const AlgebraModule& M);

/// Round-trip check: the canonical map identifies M with the invariants of
/// t_functor(M) as modules over the parahoric algebra.
bool cabanes_roundtrip(const ParahoricData& pd, const AlgebraModule& M);

/// Frobenius-extension matrix over R[T0/T1] and its invertibility.
struct FrobeniusMatrix {
    std::size_t wf_size = 0;
    u64 torus_order = 0;
    MatrixZm block;  // realized over R via the regular representation
    bool invertible = false;
};

FrobeniusMatrix frobenius_matrix(const HeckeContext& ctx, FaceLabel face);

/// Compact induction of a chamber-level representation to a vertex quotient.
FiniteRep induce_rep(const ParahoricData& target_vertex, const FiniteRep& V_at_C);

/// Scalar extension along Z/m -> Z/m' (m' divides m).
FiniteRep change_ring(const FiniteRep& V, RingZm target);
AlgebraModule change_ring_module(const HeckeContext& target_ctx, const AlgebraModule& M,
                                 RingZm target);

}  // namespace hkcoeff
