#include "hkcoeff/region.hpp"

#include <cstdlib>
#include <deque>
#include <stdexcept>

namespace hkcoeff {

std::optional<std::size_t> Region::vertex_id(const VertexKey& k) const {
    auto it = vindex.find(k);
    if (it == vindex.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Region::chamber_id(std::size_t va, std::size_t vb) const {
    auto it = cindex.find({std::min(va, vb), std::max(va, vb)});
    if (it == cindex.end()) return std::nullopt;
    return it->second;
}

std::optional<Face> Region::act(const GroupElt& g, const Face& f) const {
    if (!f.chamber) {
        VertexKey k = vertex_act(pctx, g, vertices[f.id].key);
        auto id = vertex_id(k);
        if (!id) return std::nullopt;
        return Face{false, *id};
    }
    const Chamber& c = chambers[f.id];
    VertexKey ka = vertex_act(pctx, g, vertices[c.v_near].key);
    VertexKey kb = vertex_act(pctx, g, vertices[c.v_far].key);
    auto ia = vertex_id(ka), ib = vertex_id(kb);
    if (!ia || !ib) return std::nullopt;
    auto cid = chamber_id(*ia, *ib);
    if (!cid) return std::nullopt;
    return Face{true, *cid};
}

std::size_t Region::face_depth(const Face& f) const {
    if (f.chamber) return chambers[f.id].depth;
    return vertices[f.id].key.k;
}

int precision_from_env(std::size_t radius) {
    if (const char* s = std::getenv("HKCOEFF_PRECISION")) {
        int v = std::atoi(s);
        if (v > 0) return v;
    }
    return static_cast<int>(radius) + 6;
}

std::shared_ptr<Region> build_region(RegionKind kind, const GroupData& gd, std::size_t radius,
                                     int precision_digits) {
    if (radius < 1) throw std::invalid_argument("build_region: radius must be >= 1");
    auto reg = std::make_shared<Region>();
    reg->kind = kind;
    reg->gd = gd;
    reg->pctx = PadicCtx{gd.q, precision_digits > 0 ? precision_digits
                                                    : precision_from_env(radius)};
    reg->radius = radius;
    const PadicCtx& ctx = reg->pctx;

    auto add_vertex = [&](const VertexKey& key, int type, const GroupElt& transport,
                          std::size_t nearest, i64 coord) {
        // sanity: the transport maps the vertex onto its standard type
        VertexKey target = type == 0 ? base_vertex_x0() : base_vertex_x1();
        if (vertex_act(ctx, transport, key) != target)
            throw std::logic_error("build_region: transport does not normalize the vertex");
        reg->vertices.push_back(Region::Vertex{key, type, transport, nearest, coord, {}});
        reg->vindex.emplace(key, reg->vertices.size() - 1);
        return reg->vertices.size() - 1;
    };
    auto add_chamber = [&](std::size_t vn, std::size_t vf, const GroupElt& transport,
                           std::size_t depth) {
        reg->chambers.push_back(Region::Chamber{vn, vf, transport, depth});
        std::size_t cid = reg->chambers.size() - 1;
        reg->cindex.emplace(std::make_pair(std::min(vn, vf), std::max(vn, vf)), cid);
        reg->vertices[vn].chambers.push_back(cid);
        reg->vertices[vf].chambers.push_back(cid);
        return cid;
    };

    GroupElt one = ge_identity(ctx);
    std::size_t v0 = add_vertex(base_vertex_x0(), 0, one, 0, 0);
    std::size_t v1 = add_vertex(base_vertex_x1(), 1, one, 0, 1);
    std::size_t c0 = add_chamber(v0, v1, one, 0);
    reg->vertices[v0].nearest_chamber = c0;
    reg->vertices[v1].nearest_chamber = c0;

    struct Task {
        std::size_t chamber, far_vertex;
    };
    std::deque<Task> queue;
    if (kind == RegionKind::HalfTree) {
        queue.push_back({c0, v1});
    } else {
        queue.push_back({c0, v0});
        queue.push_back({c0, v1});
    }

    while (!queue.empty()) {
        auto [cid, vid] = queue.front();
        queue.pop_front();
        if (reg->chambers[cid].depth >= radius) continue;
        int type = reg->vertices[vid].type;
        const GroupElt gamma_d = reg->chambers[cid].transport;
        GroupElt gamma_d_inv = ge_inv(ctx, gamma_d);

        std::vector<u64> digits;
        if (kind == RegionKind::Apartment) digits = {0};
        else
            for (u64 c = 0; c < gd.q; ++c) digits.push_back(c);

        for (u64 c : digits) {
            Mat2P move = type == 0
                             ? m2_mul(ctx, digit_upper(ctx, c), lift_simple_mat(ctx, 0))
                             : m2_mul(ctx, digit_lower1(ctx, c), lift_simple_mat(ctx, 1));
            GroupElt g_c = ge_from_mat(move);
            GroupElt h = ge_mul(ctx, gamma_d_inv, g_c);
            // shared vertex must come back to vid
            VertexKey shared = vertex_act(ctx, h, type == 0 ? base_vertex_x0() : base_vertex_x1());
            if (shared != reg->vertices[vid].key)
                throw std::logic_error("build_region: expansion does not fix the pivot vertex");
            VertexKey other =
                vertex_act(ctx, h, type == 0 ? base_vertex_x1() : base_vertex_x0());
            if (reg->vindex.count(other))
                throw std::logic_error("build_region: revisited a vertex (not a tree?)");

            GroupElt gamma_new = ge_mul(ctx, ge_inv(ctx, g_c), gamma_d);
            i64 coord = reg->vertices[vid].coord;
            // apartment coordinate of the new vertex: reflect past the pivot
            i64 other_coord = 0;
            {
                const auto& ch = reg->chambers[cid];
                std::size_t other_end = ch.v_near == vid ? ch.v_far : ch.v_near;
                i64 from = reg->vertices[other_end].coord;
                other_coord = coord + (coord > from ? 1 : -1);
            }
            std::size_t w =
                add_vertex(other, 1 - type, gamma_new, 0, other_coord);
            std::size_t nc = add_chamber(vid, w, gamma_new, reg->chambers[cid].depth + 1);
            reg->vertices[w].nearest_chamber = nc;
            queue.push_back({nc, w});
        }
    }
    return reg;
}

}  // namespace hkcoeff
