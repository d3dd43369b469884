#include "hkcoeff/json_io.hpp"

#include <sstream>

namespace hkcoeff {

json matrix_to_json(const MatrixZm& A) {
    json j;
    j["m"] = A.ring.m;
    j["rows"] = A.rows;
    j["cols"] = A.cols;
    j["entries"] = A.a;
    return j;
}

MatrixZm matrix_from_json(const json& j) {
    RingZm ring(j.at("m").get<u64>());
    MatrixZm A(ring, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto entries = j.at("entries").get<std::vector<u64>>();
    if (entries.size() != A.a.size()) throw std::invalid_argument("matrix_from_json: entry count");
    for (std::size_t i = 0; i < entries.size(); ++i) A.a[i] = entries[i] % ring.m;
    return A;
}

json module_to_json(const PresentedModule& M) {
    json j;
    j["m"] = M.ring.m;
    j["ambient"] = M.ambient;
    j["relations"] = matrix_to_json(M.relations);
    return j;
}

PresentedModule module_from_json(const json& j) {
    RingZm ring(j.at("m").get<u64>());
    std::size_t n = j.at("ambient").get<std::size_t>();
    MatrixZm rel = matrix_from_json(j.at("relations"));
    if (rel.rows == 0) rel = MatrixZm(ring, 0, n);
    return PresentedModule(ring, n, rel);
}

json weyl_to_json(const GroupData& gd, const WeylElt& w) {
    json j;
    j["t"] = w.torus;
    j["word"] = {{"first", w.word.len && w.word.first == 1 ? "s1" : "s0"},
                 {"len", w.word.len}};
    j["omega"] = gd.has_omega() ? w.omega : 0;
    return j;
}

WeylElt weyl_from_json(const GroupData& gd, const json& j) {
    WeylElt w;
    w.torus = j.at("t").get<TorusElt>();
    if (w.torus.size() != gd.torus_factors)
        throw std::invalid_argument("weyl_from_json: torus factor count");
    w.word.len = j.at("word").at("len").get<std::size_t>();
    w.word.first = j.at("word").at("first").get<std::string>() == "s1" ? 1 : 0;
    w.omega = gd.normalize_omega(j.value("omega", 0));
    return w;
}

namespace {

json dense_rows(const MatrixZm& A) {
    json rows = json::array();
    for (std::size_t i = 0; i < A.rows; ++i) rows.push_back(A.row(i));
    return rows;
}

MatrixZm rows_to_matrix(RingZm ring, const json& j, std::size_t expect) {
    auto rows = j.get<std::vector<std::vector<u64>>>();
    if (rows.size() != expect) throw std::invalid_argument("action matrix has wrong row count");
    for (const auto& r : rows)
        if (r.size() != expect) throw std::invalid_argument("action matrix not square");
    if (expect == 0) return MatrixZm(ring, 0, 0);
    return MatrixZm::from_rows(ring, rows);
}

}  // namespace

json hmodule_to_json(const HModule& M) {
    json j;
    j["ring"] = "zmod:" + std::to_string(M.ring.m);
    j["group"] = {{"kind", kind_name(M.gd.kind)}, {"q", M.gd.q}};
    j["rank"] = M.carrier.ambient;
    if (M.carrier.relations.rows > 0) j["relations"] = matrix_to_json(M.carrier.relations);
    json action;
    action["s0"] = dense_rows(M.act_s0);
    action["s1"] = dense_rows(M.act_s1);
    for (std::size_t f = 0; f < M.act_torus_gen.size(); ++f)
        action["t" + std::to_string(f)] = dense_rows(M.act_torus_gen[f]);
    if (M.act_omega) action["omega"] = dense_rows(*M.act_omega);
    j["action"] = action;
    return j;
}

HModule hmodule_from_json(const json& j) {
    std::string ringspec = j.at("ring").get<std::string>();
    if (ringspec.rfind("zmod:", 0) != 0)
        throw std::invalid_argument("hmodule_from_json: ring must be zmod:<m>");
    RingZm ring(std::stoull(ringspec.substr(5)));
    GroupData gd = make_group_data(kind_from_name(j.at("group").at("kind").get<std::string>()),
                                   j.at("group").at("q").get<u64>());
    std::size_t rank = j.at("rank").get<std::size_t>();
    PresentedModule carrier = PresentedModule::free_module(ring, rank);
    if (j.contains("relations")) {
        MatrixZm rel = matrix_from_json(j.at("relations"));
        carrier = PresentedModule(ring, rank, rel);
    }
    const json& action = j.at("action");
    MatrixZm s0 = rows_to_matrix(ring, action.at("s0"), rank);
    MatrixZm s1 = rows_to_matrix(ring, action.at("s1"), rank);
    std::vector<MatrixZm> torus;
    for (std::size_t f = 0; f < gd.torus_generators().size(); ++f) {
        std::string key = "t" + std::to_string(f);
        if (!action.contains(key))
            throw std::invalid_argument("hmodule_from_json: missing torus generator " + key);
        torus.push_back(rows_to_matrix(ring, action.at(key), rank));
    }
    std::optional<MatrixZm> omega;
    if (gd.has_omega()) {
        if (!action.contains("omega"))
            throw std::invalid_argument("hmodule_from_json: omega action required");
        omega = rows_to_matrix(ring, action.at("omega"), rank);
    }
    auto [mod, rep] = make_hmodule(gd, ring, carrier, s0, s1, torus, omega);
    if (!mod) throw std::invalid_argument("hmodule_from_json: invalid module: " + rep.str());
    return *mod;
}

json finite_rep_to_json(const FiniteRep& V) {
    json j;
    j["carrier"] = module_to_json(V.carrier);
    json elems = json::array();
    for (std::size_t g = 0; g < V.quo->size(); ++g) {
        json e;
        if (V.quo->is_vertex()) e["mat"] = V.quo->mats[g];
        else
            e["celt"] = {{"t", V.quo->celts[g].first}, {"omega", V.quo->celts[g].second}};
        e["action"] = dense_rows(V.action[g]);
        elems.push_back(e);
    }
    j["elements"] = elems;
    return j;
}

json algebra_to_json(const FiniteAlgebra& alg) {
    json j;
    j["ring"] = "zmod:" + std::to_string(alg.ring.m);
    j["group"] = {{"kind", kind_name(alg.gd.kind)}, {"q", alg.gd.q}};
    j["face"] = face_name(alg.face);
    j["dagger"] = alg.dagger;
    j["rank"] = alg.rank();
    json basis = json::array();
    for (const auto& w : alg.basis) basis.push_back(weyl_to_json(alg.gd, w));
    j["basis"] = basis;
    json table = json::array();
    for (std::size_t i = 0; i < alg.rank(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < alg.rank(); ++k) row.push_back(alg.constants[i][k]);
        table.push_back(row);
    }
    j["constants"] = table;
    return j;
}

namespace {

json zp_to_json(const Zp& z) {
    if (z.is_zero()) return {{"zero", true}};
    return {{"val", z.val}, {"man", z.man}, {"prec", z.prec}};
}

json transport_to_json(const GroupElt& g) {
    json j;
    j["omega"] = g.eps;
    json mat = json::array();
    for (const auto& e : g.mat.e) mat.push_back(zp_to_json(e));
    j["mat"] = mat;
    return j;
}

}  // namespace

json coeff_system_to_json(const CoeffSystem& csys) {
    const Region& reg = *csys.region;
    json j;
    j["schema"] = 1;
    j["region"] = {{"kind", reg.kind == RegionKind::Apartment
                                ? "apartment"
                                : reg.kind == RegionKind::Tree ? "tree" : "halftree"},
                   {"radius", reg.radius},
                   {"precision", reg.pctx.digits}};
    j["group"] = {{"kind", kind_name(csys.dia.gd.kind)}, {"q", csys.dia.gd.q}};
    json values;
    values["x0"] = finite_rep_to_json(csys.dia.d_x0);
    values["x1"] = finite_rep_to_json(csys.dia.d_x1);
    values["C"] = finite_rep_to_json(csys.dia.d_C);
    values["r0"] = dense_rows(csys.dia.r0.matrix);
    values["r1"] = dense_rows(csys.dia.r1.matrix);
    j["base_values"] = values;

    json verts = json::array();
    for (const auto& v : reg.vertices) {
        verts.push_back({{"k", v.key.k},
                         {"branch", v.key.upper ? "upper" : "lower"},
                         {"a", v.key.a},
                         {"type", v.type},
                         {"coord", v.coord},
                         {"transport", transport_to_json(v.transport)}});
    }
    j["vertices"] = verts;
    json chambers = json::array();
    for (std::size_t c = 0; c < reg.chambers.size(); ++c) {
        const auto& ch = reg.chambers[c];
        chambers.push_back({{"near", ch.v_near},
                            {"far", ch.v_far},
                            {"depth", ch.depth},
                            {"transport", transport_to_json(ch.transport)},
                            {"restriction_near", dense_rows(csys.rmaps[c].to_near)},
                            {"restriction_far", dense_rows(csys.rmaps[c].to_far)}});
    }
    j["chambers"] = chambers;
    return j;
}

json homology_report(const CoeffSystem& csys, const ChainComplex& cc) {
    json j;
    j["schema"] = 1;
    j["region"] = {{"kind", csys.region->kind == RegionKind::Apartment
                                ? "apartment"
                                : csys.region->kind == RegionKind::Tree ? "tree" : "halftree"},
                   {"radius", csys.region->radius}};
    PresentedModule h0 = minimize(homology0(cc)).module;
    PresentedModule h1 = minimize(homology1(cc).module).module;
    j["H0"] = module_to_json(h0);
    j["H0_invariant_factors"] = h0.invariant_factors();
    j["H1"] = module_to_json(h1);
    j["H1_invariant_factors"] = h1.invariant_factors();
    return j;
}

}  // namespace hkcoeff
