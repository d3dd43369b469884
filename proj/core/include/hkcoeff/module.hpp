#pragma once

#include "hkcoeff/zmatrix.hpp"

#include <optional>
#include <vector>

namespace hkcoeff {

/// A finitely presented Z/m-module R^n / rowspan(relations). The relation
/// matrix is kept in canonical Howell form, so two presentations with equal
/// relation spans compare equal. Elements are row vectors of length n,
/// canonicalized by howell_reduce against the relations.
struct PresentedModule {
    RingZm ring{2};
    std::size_t ambient = 0;
    MatrixZm relations;  // Howell form, `ambient` columns

    PresentedModule() = default;
    PresentedModule(RingZm r, std::size_t n);
    PresentedModule(RingZm r, std::size_t n, const MatrixZm& rels);

    static PresentedModule free_module(RingZm r, std::size_t n);
    static PresentedModule zero(RingZm r);

    std::vector<u64> reduce(const std::vector<u64>& v) const;
    bool is_zero_element(const std::vector<u64>& v) const;
    bool is_zero_module() const;

    /// Cardinality of the module.
    u64 size() const;

    /// All canonical element representatives; throws when size() > limit.
    std::vector<std::vector<u64>> elements(u64 limit = 100000) const;

    /// Invariant factors (divisors of m, each > 1, divisibility-sorted).
    std::vector<u64> invariant_factors() const;

    bool isomorphic_as_rmodule(const PresentedModule& other) const;

    bool operator==(const PresentedModule&) const = default;
};

/// An R-linear map between presented modules, given on ambient generators.
/// Acts as x -> x * matrix on row vectors.
struct ModuleMap {
    PresentedModule domain, codomain;
    MatrixZm matrix;  // domain.ambient x codomain.ambient

    ModuleMap() = default;
    ModuleMap(PresentedModule dom, PresentedModule cod, MatrixZm mat);

    static ModuleMap identity(const PresentedModule& M);
    static ModuleMap zero_map(const PresentedModule& dom, const PresentedModule& cod);

    /// Relations of the domain must land in relations of the codomain.
    bool well_defined() const;

    std::vector<u64> apply(const std::vector<u64>& v) const;
    ModuleMap compose(const ModuleMap& then) const;  // this, then `then`
    ModuleMap add(const ModuleMap& other) const;
    ModuleMap sub(const ModuleMap& other) const;
    ModuleMap scale(u64 c) const;

    bool is_zero() const;  // zero as a map of quotients
    bool equals(const ModuleMap& other) const;

    bool injective() const;
    bool surjective() const;
    bool bijective() const;

    /// Kernel as an abstract module plus its inclusion into the domain.
    struct Sub { PresentedModule module; MatrixZm generators; };
    Sub kernel() const;
    Sub image() const;
    PresentedModule cokernel() const;

    std::optional<ModuleMap> inverse() const;
};

/// Hom over R subject to intertwining constraints: all matrices F with
/// S_P * F inside span(S_Q) and A_i * F == F * B_i in the quotient, for the
/// given pairs. Returns generating matrices and a presentation of the hom
/// module (coordinates relative to the generators).
struct HomSpace {
    std::vector<MatrixZm> generators;
    PresentedModule presentation;

    MatrixZm combination(const std::vector<u64>& coeffs) const;
};

HomSpace hom_space(const PresentedModule& P, const PresentedModule& Q,
                   const std::vector<std::pair<MatrixZm, MatrixZm>>& intertwine);

/// Hom_R(M, R): generators returned as functional row vectors.
struct DualModule {
    PresentedModule module;   // presentation of the dual
    MatrixZm functionals;     // rows = generating functionals in R^ambient
};

DualModule module_dual(const PresentedModule& M);

/// Canonical evaluation M -> M**; bijective for finite modules over Z/m.
ModuleMap double_dual_map(const PresentedModule& M, const DualModule& dual,
                          const DualModule& bidual);

/// Eliminate generators hit by unit relation entries. For m = p^e this
/// reaches a minimal presentation. Maps convert between coordinates.
struct MinimizedModule {
    PresentedModule module;
    MatrixZm to_min;    // old ambient x new ambient
    MatrixZm from_min;  // new ambient x old ambient
};

MinimizedModule minimize(const PresentedModule& M);

/// Block direct sum bookkeeping for chain modules.
struct DirectSum {
    PresentedModule total;
    std::vector<std::size_t> offsets;  // block start columns
    std::vector<std::size_t> dims;     // block ambient sizes

    static DirectSum of(const std::vector<PresentedModule>& parts);
    std::size_t blocks() const { return dims.size(); }
    /// Embed a block vector into total coordinates.
    std::vector<u64> inject(std::size_t block, const std::vector<u64>& v) const;
    std::vector<u64> project(std::size_t block, const std::vector<u64>& v) const;
};

}  // namespace hkcoeff
