#pragma once

#include "hkcoeff/padic.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace hkcoeff {

enum class RegionKind { Apartment, Tree, HalfTree };

/// A face of a truncated region: either a vertex or a chamber.
struct Face {
    bool chamber = false;
    std::size_t id = 0;
    auto operator<=>(const Face&) const = default;
};

/// Truncated piece of the rank-one building: the standard apartment, a tree
/// ball, or the positive half-tree, all within gallery radius N of the base
/// chamber. Faces carry canonical transports into the closed base chamber.
struct Region {
    RegionKind kind = RegionKind::Tree;
    GroupData gd;
    PadicCtx pctx;
    std::size_t radius = 1;

    struct Vertex {
        VertexKey key;
        int type = 0;                  // 0 or 1: which standard vertex it maps to
        GroupElt transport;            // gamma with gamma * vertex = x_type
        std::size_t nearest_chamber = 0;
        i64 coord = 0;                 // apartment coordinate (line regions)
        std::vector<std::size_t> chambers;
    };
    struct Chamber {
        std::size_t v_near = 0, v_far = 0;  // near = towards the base chamber
        GroupElt transport;                  // gamma with gamma * chamber = C
        std::size_t depth = 0;               // gallery distance to C
    };

    std::vector<Vertex> vertices;
    std::vector<Chamber> chambers;
    std::map<VertexKey, std::size_t> vindex;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cindex;

    std::optional<std::size_t> vertex_id(const VertexKey& k) const;
    std::optional<std::size_t> chamber_id(std::size_t va, std::size_t vb) const;

    /// Apply a group element to a face; nullopt when the image leaves the
    /// stored truncation.
    std::optional<Face> act(const GroupElt& g, const Face& f) const;

    /// depth of a face: chamber gallery distance, or distance of a vertex
    /// from the base vertex x0
    std::size_t face_depth(const Face& f) const;
};

/// Build a truncated region. The precision defaults to radius + 6 digits and
/// can be overridden (HKCOEFF_PRECISION is applied by callers that read the
/// environment).
std::shared_ptr<Region> build_region(RegionKind kind, const GroupData& gd, std::size_t radius,
                                     int precision_digits = 0);

/// Environment override for the p-adic precision (HKCOEFF_PRECISION).
int precision_from_env(std::size_t radius);

}  // namespace hkcoeff
