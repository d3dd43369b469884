#pragma once

#include "hkcoeff/parahoric.hpp"
#include "hkcoeff/region.hpp"

#include <memory>
#include <optional>

namespace hkcoeff {

/// Per-face data on the closed base chamber: representations of the three
/// finite quotients, restriction maps into the pro-p invariants of the
/// vertex values, and (PGL2) the omega cross maps between the vertices.
/// The chamber value carries the dagger-level action when omega exists.
struct Diagram {
    GroupData gd;
    RingZm ring{2};
    std::shared_ptr<ParahoricData> pd_x0, pd_x1, pd_C;
    FiniteRep d_x0, d_x1, d_C;
    ModuleMap r0, r1;                    // D_C -> D_{x_i}
    std::optional<MatrixZm> c01, c10;    // PGL2: D_{x0} <-> D_{x1}

    const ParahoricData& pd(int type) const { return type == 0 ? *pd_x0 : *pd_x1; }
    const FiniteRep& vertex_value(int type) const { return type == 0 ? d_x0 : d_x1; }
    const ModuleMap& restriction(int type) const { return type == 0 ? r0 : r1; }

    ValidationReport validate() const;
};

/// The diagram of the coefficient system attached to a validated H-module,
/// together with the canonical identifications of M with the invariants of
/// the face values.
struct ModuleDiagram {
    Diagram dia;
    HModule M;
    ModuleMap can_x0, can_x1, can_C;  // M.carrier -> D_F carrier
};

ModuleDiagram diagram_from_hecke_module(const HModule& M);

/// Constant diagram attached to an R-module carrier (trivial actions,
/// identity restrictions).
Diagram constant_diagram(const GroupData& gd, RingZm ring, const PresentedModule& value);

/// A diagram spread over a truncated region: face values are the diagram
/// values of the face types, and each chamber carries twisted restriction
/// matrices to its two endpoint vertices.
struct CoeffSystem {
    std::shared_ptr<Region> region;
    Diagram dia;

    struct ChamberMaps {
        MatrixZm to_near, to_far;
    };
    std::vector<ChamberMaps> rmaps;

    const FiniteRep& face_value(const Face& f) const;
    int vertex_type(std::size_t vid) const { return region->vertices[vid].type; }
};

CoeffSystem spread(const Diagram& dia, std::shared_ptr<Region> region);

/// The transported action operator c_{g,F}: value(F) -> value(gF) of the
/// spread system; nullopt when gF leaves the truncation.
std::optional<std::pair<Face, MatrixZm>> transport_operator(const CoeffSystem& csys,
                                                            const GroupElt& g, const Face& from);

/// Invariant-level values of the three base faces, with their parahoric
/// module structures.
struct FaceInvariants {
    InvariantsModule x0, x1, C;
    const InvariantsModule& vertex(int type) const { return type == 0 ? x0 : x1; }
};

FaceInvariants face_invariants(const Diagram& dia);

/// Transition maps of the apartment system in invariant coordinates: one
/// pair per chamber of the region.
struct ApartmentSystem {
    const CoeffSystem* csys = nullptr;
    FaceInvariants inv;
    struct T {
        MatrixZm to_near, to_far;
        bool near_plain = false, far_plain = false;  // plain restriction vs coset sum
    };
    std::vector<T> tmaps;
};

ApartmentSystem apartment_system(const CoeffSystem& csys);

struct CategoryCReport {
    bool holds = false;
    bool condition_h_x0 = false, condition_h_x1 = false, condition_h_C = false;
    bool transitions_bijective = false;
    std::vector<std::string> failures;
};

/// Category membership: condition (H) at the three base faces and
/// bijectivity of all plain (same nearest chamber) transitions in radius.
CategoryCReport check_category_C(const CoeffSystem& csys);

}  // namespace hkcoeff
