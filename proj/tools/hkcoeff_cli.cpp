#include "hkcoeff/json_io.hpp"
#include "hkcoeff/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace hkcoeff;

namespace {

u64 parse_ring(const std::string& spec) {
    if (spec.rfind("zmod:", 0) == 0) return std::stoull(spec.substr(5));
    return std::stoull(spec);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        f << j.dump(2) << "\n";
    }
}

HModule load_module(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open module file: " + path);
    json j = json::parse(f);
    return hmodule_from_json(j);
}

json report_to_json(const SuiteReport& rep) {
    json j;
    j["schema"] = 1;
    j["suite"] = rep.config.suite;
    j["group"] = {{"kind", kind_name(rep.config.kind)}, {"q", rep.config.q}};
    j["ring"] = "zmod:" + std::to_string(rep.config.modulus);
    j["radius"] = rep.config.radius;
    j["seed"] = rep.config.seed;
    j["cases"] = rep.config.cases;
    // excluded from determinism comparisons
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json e = {{"name", c.name}, {"anchor", c.anchor}, {"pass", c.pass}};
        if (!c.witness.empty()) e["witness"] = c.witness;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["ok"] = rep.ok();
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification toolkit for rank-one Hecke modules and "
                 "coefficient systems on the tree"};
    app.require_subcommand(1);

    std::string group = "sl2", ring = "zmod:4", face = "x0", suite = "all";
    std::string module_path, region_kind = "tree", out_path;
    bool dagger = false;
    u64 q = 2, seed = 1;
    std::size_t radius = 3, cases = 20;

    auto add_group_opts = [&](CLI::App* cmd) {
        cmd->add_option("--group", group, "sl2, pgl2 or gl2");
        cmd->add_option("--q", q, "residue cardinality (prime)");
        cmd->add_option("--ring", ring, "coefficient ring, zmod:<m>");
        cmd->add_option("--out", out_path, "write the JSON artifact to a file");
    };

    auto* alg_cmd = app.add_subcommand("algebra", "structure constants of a parahoric algebra");
    add_group_opts(alg_cmd);
    alg_cmd->add_option("--face", face, "x0, x1 or C");
    alg_cmd->add_flag("--dagger", dagger, "extend by Omega_F");

    auto* ver_cmd = app.add_subcommand("verify", "run a named verification suite");
    add_group_opts(ver_cmd);
    ver_cmd->add_option("--suite", suite, "braid|parahoric|cabanes|frobenius|roundtrip|"
                                          "acyclic|rank1|flat|etale|all");
    ver_cmd->add_option("--radius", radius, "truncation radius");
    ver_cmd->add_option("--seed", seed, "PRNG seed (determines every case)");
    ver_cmd->add_option("--cases", cases, "number of sampled cases");

    auto* fm_cmd = app.add_subcommand("fm", "diagram and coefficient system of a module file");
    fm_cmd->add_option("--module", module_path, "module JSON file")->required();
    fm_cmd->add_option("--radius", radius, "truncation radius");
    fm_cmd->add_option("--out", out_path, "write the JSON artifact to a file");

    auto* hom_cmd = app.add_subcommand("homology", "homology of the spread system");
    hom_cmd->add_option("--module", module_path, "module JSON file")->required();
    hom_cmd->add_option("--radius", radius, "truncation radius");
    hom_cmd->add_option("--region", region_kind, "apartment, tree or halftree");
    hom_cmd->add_option("--out", out_path, "write the JSON artifact to a file");

    auto* half_cmd = app.add_subcommand("halftree", "half-tree H0 and the contraction matrix");
    half_cmd->add_option("--module", module_path, "module JSON file")->required();
    half_cmd->add_option("--radius", radius, "truncation radius");
    half_cmd->add_option("--out", out_path, "write the JSON artifact to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*alg_cmd) {
            auto gd = make_group_data(kind_from_name(group), q);
            HeckeContext ctx(gd, RingZm(parse_ring(ring)));
            auto alg = parahoric_algebra(ctx, face_from_name(face), dagger);
            emit(algebra_to_json(alg), out_path);
            return 0;
        }
        if (*ver_cmd) {
            SuiteConfig cfg;
            cfg.suite = suite;
            cfg.kind = kind_from_name(group);
            cfg.q = q;
            cfg.modulus = parse_ring(ring);
            cfg.radius = radius;
            cfg.seed = seed;
            cfg.cases = cases;
            SuiteReport rep = run_suite(cfg);
            emit(report_to_json(rep), out_path);
            return rep.ok() ? 0 : 1;
        }
        if (*fm_cmd) {
            HModule M = load_module(module_path);
            ModuleDiagram md = diagram_from_hecke_module(M);
            auto region = build_region(RegionKind::Tree, M.gd, radius);
            CoeffSystem csys = spread(md.dia, region);
            emit(coeff_system_to_json(csys), out_path);
            return 0;
        }
        if (*hom_cmd) {
            HModule M = load_module(module_path);
            ModuleDiagram md = diagram_from_hecke_module(M);
            RegionKind rk = region_kind == "apartment"
                                ? RegionKind::Apartment
                                : region_kind == "halftree" ? RegionKind::HalfTree
                                                            : RegionKind::Tree;
            auto region = build_region(rk, M.gd, radius);
            CoeffSystem csys = spread(md.dia, region);
            ChainComplex cc = chain_complex(csys);
            json j = homology_report(csys, cc);
            if (rk == RegionKind::Apartment) {
                MFunctorResult mf = m_functor(csys);
                j["recovered_invariant_factors"] = mf.module.carrier.invariant_factors();
                j["checks"] = json::array(
                    {{{"name", "M(F(M)) = M"},
                      {"anchor", "equivalence"},
                      {"pass", main_roundtrip(md, radius)}}});
            }
            emit(j, out_path);
            return 0;
        }
        if (*half_cmd) {
            HModule M = load_module(module_path);
            auto rep = halftree_h0(M, radius);
            json j;
            j["schema"] = 1;
            j["radius"] = radius;
            j["H0_ray"] = module_to_json(rep.h0_ray);
            j["H0_ray_invariant_factors"] = rep.h0_ray.invariant_factors();
            j["checks"] = json::array(
                {{{"name", "iota_x0 bijective"},
                  {"anchor", "chain_complex_D(ii)"},
                  {"pass", rep.iota_x0_bijective}},
                 {{"name", "phi_t injective between truncations"},
                  {"anchor", "non_vanishing"},
                  {"pass", rep.phi_t_injective}},
                 {{"name", "half-tree H0 of invariants = M"},
                  {"anchor", "scalar_restriction"},
                  {"pass", rep.scalar_restriction_iso}}});
            emit(j, out_path);
            return rep.holds() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
