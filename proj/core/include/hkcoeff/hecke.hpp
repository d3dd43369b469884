#pragma once

#include "hkcoeff/module.hpp"
#include "hkcoeff/weyl.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hkcoeff {

/// Finitely supported coefficient map WeylElt -> nonzero residue.
using HeckeElt = std::map<WeylElt, u64>;

/// Arithmetic in H = R[I\G/I] through the tau_w presentation. Elements are
/// plain support maps; the context carries group tables and the ring.
struct HeckeContext {
    GroupData gd;
    RingZm ring;

    HeckeContext(GroupData g, RingZm r) : gd(std::move(g)), ring(r) {}

    HeckeElt zero() const { return {}; }
    HeckeElt tau(const WeylElt& w) const;
    HeckeElt unit() const { return tau(gd.identity()); }
    HeckeElt add(const HeckeElt& a, const HeckeElt& b) const;
    HeckeElt scale(const HeckeElt& a, u64 c) const;
    bool equal(const HeckeElt& a, const HeckeElt& b) const;

    /// theta_s = sum of torus Hecke operators attached to the generator.
    HeckeElt theta_element(int s) const;

    /// Product in H, expanding letters of b through the braid and quadratic
    /// relations.
    HeckeElt tau_multiply(const HeckeElt& a, const HeckeElt& b) const;

    std::string str(const HeckeElt& a) const;

private:
    void add_term(HeckeElt& acc, const WeylElt& w, u64 c) const;
    HeckeElt right_by_torus(const HeckeElt& a, const TorusElt& t) const;
    HeckeElt right_by_letter(const HeckeElt& a, int i) const;
    HeckeElt right_by_omega(const HeckeElt& a, i64 e) const;
};

/// Structure constants of a parahoric subalgebra H_F (or H_F^dagger) on the
/// tau basis indexed by the finite Weyl group of the face.
struct FiniteAlgebra {
    GroupData gd;
    RingZm ring;
    FaceLabel face = FaceLabel::C;
    bool dagger = false;
    std::vector<WeylElt> basis;
    std::map<WeylElt, std::size_t> index;
    std::size_t unit_index = 0;
    // c[i][j] = coefficients of tau_{b_i} tau_{b_j} on the basis
    std::vector<std::vector<std::vector<u64>>> constants;

    std::size_t rank() const { return basis.size(); }
    std::vector<u64> multiply(const std::vector<u64>& x, const std::vector<u64>& y) const;
    /// matrix of left multiplication by basis element i on row coefficient
    /// vectors (the left regular representation in this convention)
    MatrixZm left_regular(std::size_t i) const;
    MatrixZm right_regular(std::size_t j) const;
    /// coefficients of a Hecke element supported on the basis
    std::vector<u64> coefficients(const HeckeElt& h) const;
};

/// Extract H_F or H_F^dagger; throws for GL2 dagger (Omega_F infinite).
FiniteAlgebra parahoric_algebra(const HeckeContext& ctx, FaceLabel face, bool dagger);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(std::string what) { ok = false; violations.push_back(std::move(what)); }
    std::string str() const;
};

/// Finite module over the full Hecke algebra H, given by generator action
/// matrices. Matrices act on row vectors, so mat(a*b) = mat(b)*mat(a).
struct HModule {
    GroupData gd;
    RingZm ring;
    PresentedModule carrier;
    MatrixZm act_s0, act_s1;
    std::vector<MatrixZm> act_torus_gen;   // one per GroupData::torus_generators()
    std::optional<MatrixZm> act_omega;     // PGL2 / GL2
    std::optional<MatrixZm> act_omega_inv; // cached inverse

    MatrixZm act_torus(const TorusElt& t) const;
    MatrixZm act_weyl(const WeylElt& w) const;
    MatrixZm act_hecke(const HeckeElt& h) const;

    ValidationReport validate() const;
};

/// Build and validate an H-module; the report lists violated relations with
/// a witness row when validation fails.
std::pair<std::optional<HModule>, ValidationReport> make_hmodule(
    const GroupData& gd, RingZm ring, PresentedModule carrier, MatrixZm s0, MatrixZm s1,
    std::vector<MatrixZm> torus, std::optional<MatrixZm> omega);

/// Module over a parahoric algebra: one action matrix per basis element.
struct AlgebraModule {
    std::shared_ptr<const FiniteAlgebra> algebra;
    PresentedModule carrier;
    std::vector<MatrixZm> action;  // per basis element

    MatrixZm act(const std::vector<u64>& coeffs) const;
    ValidationReport validate() const;
};

/// Scalar restriction of an H-module along H_F^(dagger) inside H.
AlgebraModule restrict_module(const HModule& M, const FiniteAlgebra& alg);
AlgebraModule restrict_module(const HModule& M, FaceLabel face, bool dagger);

/// Left regular module of a parahoric algebra.
AlgebraModule regular_module(std::shared_ptr<const FiniteAlgebra> alg);

/// Hom_A(M, N): R-linear maps commuting with every basis action.
HomSpace algebra_hom(const AlgebraModule& M, const AlgebraModule& N);

/// Isomorphism test by scanning the hom space for a bijective element.
bool algebra_isomorphic(const AlgebraModule& M, const AlgebraModule& N, u64 scan_limit = 200000);

/// X (x)_A M for a right module X (action matrices per basis element) and a
/// left module M over the same algebra: cokernel of the balancing relations
/// inside the flattened tensor square.
PresentedModule module_tensor(const FiniteAlgebra& alg, const PresentedModule& X,
                              const std::vector<MatrixZm>& right_action,
                              const AlgebraModule& M);

}  // namespace hkcoeff
