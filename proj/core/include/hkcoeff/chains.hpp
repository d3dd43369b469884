#pragma once

#include "hkcoeff/coeff.hpp"

namespace hkcoeff {

/// Two-term oriented chain complex over a truncated region. Degree-one
/// blocks are chambers (canonical orientation: source = near vertex),
/// degree-zero blocks are vertices. Values live in transported coordinates.
struct ChainComplex {
    DirectSum deg1, deg0;
    std::vector<PresentedModule> parts1, parts0;
    MatrixZm boundary;  // deg1 ambient x deg0 ambient
    // region face id -> block index
    std::vector<std::size_t> cblock, vblock;  // SIZE_MAX when excluded
};

/// Full complex of the spread system over its region.
ChainComplex chain_complex(const CoeffSystem& csys);

/// I-invariants complex, realized on the apartment (or its non-negative
/// ray): vertex blocks are pro-p invariants, chamber blocks full values.
ChainComplex invariants_complex(const ApartmentSystem& asys, bool ray_only);

PresentedModule homology0(const ChainComplex& cc);
ModuleMap::Sub homology1(const ChainComplex& cc);
/// kernel triviality of the boundary restricted to chambers of depth < the
/// region radius (boundary-safe truncation)
bool boundary_injective(const CoeffSystem& csys, const ChainComplex& cc);

/// H_0 of the invariants complex with its Hecke-module structure, assembled
/// through the face isomorphisms iota_F and validated.
struct MFunctorResult {
    HModule module;       // carrier = minimized H_0
    FaceInvariants inv;
    MatrixZm iota_x0, iota_x1, iota_C;  // invariant coords -> carrier coords
};

MFunctorResult m_functor(const CoeffSystem& csys_apartment);

/// Canonical comparison M -> M(F(M)): bijective and H-linear.
bool main_roundtrip(const ModuleDiagram& md, std::size_t radius);

struct AcyclicityReport {
    bool h1_zero = false;
    bool iota_x0_bijective = false, iota_x1_bijective = false;
    bool iota_compatible = false;  // iota_C = iota_x o t^C_x for both vertices
    bool holds() const {
        return h1_zero && iota_x0_bijective && iota_x1_bijective && iota_compatible;
    }
};

AcyclicityReport check_acyclicity(const ModuleDiagram& md, std::size_t radius);

struct RankOneReport {
    bool boundary_injective = false;
    bool embedding_injective = false;  // M into H_0 of the tree ball
    bool holds() const { return boundary_injective && embedding_injective; }
};

/// Exactness of the full tree-ball complex (p nilpotent in R).
RankOneReport check_rank_one_exactness(const HModule& M, std::size_t radius);

/// tau_{M,F} injective at every base face (the flatness criterion).
bool check_tau_injective(const HModule& M);

/// Chain operators on a region complex, as matrices acting on block row
/// vectors (degree-wise).
struct ChainOperator {
    MatrixZm deg1, deg0;
};

/// phi_g: f -> c_g(f(g^{-1} .)), extension by zero off the truncation.
ChainOperator phi_op(const CoeffSystem& csys, const ChainComplex& cc, const GroupElt& g);
/// psi_g: f -> c_{g^{-1}}(f(g .)).
ChainOperator psi_op(const CoeffSystem& csys, const ChainComplex& cc, const GroupElt& g);

/// The contraction element of the half-tree theory and its coset data.
struct Contraction {
    GroupElt t;
    std::size_t pairing = 2;       // <alpha, nu(t)>
    std::vector<GroupElt> cosets;  // representatives of U1bar / t U1bar t^{-1}
};

Contraction standard_contraction(const GroupData& gd, const PadicCtx& ctx);

struct EtaleReport {
    bool psi_phi_identity = false;   // psi_t phi_t = id on safe supports
    bool etale_identity = false;     // sum_u u phi_t psi_t u^{-1} = id on the shrunken region
    bool holds() const { return psi_phi_identity && etale_identity; }
};

EtaleReport check_etale(const HModule& M, std::size_t radius);

struct HalfTreeReport {
    PresentedModule h0_ray;        // H_0 of the ray invariants complex
    bool iota_x0_bijective = false;
    bool phi_t_injective = false;  // stable-range map between truncations
    bool scalar_restriction_iso = false;
    bool holds() const { return iota_x0_bijective && phi_t_injective && scalar_restriction_iso; }
};

HalfTreeReport halftree_h0(const HModule& M, std::size_t radius);

struct LocallyConstantReport {
    bool transitions_bijective = false;  // every transition map of F(M)^I
    bool tau_units = false;              // tau_s invertible in the parahoric algebras
    bool square_commutes = false;        // t^{gamma C}_x o c_gamma = tau_gamma o t^C_x
    bool holds() const { return transitions_bijective && tau_units && square_commutes; }
};

/// p-invertible sanity checks (q invertible in R).
LocallyConstantReport check_locally_constant(const HModule& M, std::size_t radius);

}  // namespace hkcoeff
