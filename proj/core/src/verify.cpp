#include "hkcoeff/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hkcoeff {

namespace {

bool p_nilpotent(const SuiteConfig& cfg) {
    u64 m = cfg.modulus;
    while (m % cfg.q == 0) m /= cfg.q;
    return m == 1;
}

void require_dagger_capable(const SuiteConfig& cfg) {
    if (cfg.kind == GroupKind::GL2)
        throw std::invalid_argument("suite '" + cfg.suite +
                                    "' needs the dagger level; GL2 has infinite Omega_F");
}

struct Collector {
    SuiteReport& rep;
    void add(const std::string& name, const std::string& anchor, bool pass,
             const std::string& witness = "") {
        rep.checks.push_back(CheckResult{name, anchor, pass, pass ? "" : witness});
    }
};

void suite_braid(const SuiteConfig& cfg, Collector& out) {
    auto gd = make_group_data(cfg.kind, cfg.q);
    HeckeContext ctx(gd, RingZm(cfg.modulus));
    auto all = gd.elements_up_to(6);
    Rng rng(cfg.seed);
    bool pass = true;
    std::string witness;
    for (std::size_t i = 0; i < cfg.cases && pass; ++i) {
        auto a = ctx.tau(all[rng.below(all.size())]);
        auto b = ctx.tau(all[rng.below(all.size())]);
        auto c = ctx.tau(all[rng.below(all.size())]);
        if (!ctx.equal(ctx.tau_multiply(ctx.tau_multiply(a, b), c),
                       ctx.tau_multiply(a, ctx.tau_multiply(b, c)))) {
            pass = false;
            witness = ctx.str(a) + " | " + ctx.str(b) + " | " + ctx.str(c);
        }
    }
    out.add("tau associativity on random basis triples", "braid_relations+quadratic_relations",
            pass, witness);
}

void suite_parahoric(const SuiteConfig& cfg, Collector& out) {
    auto gd = make_group_data(cfg.kind, cfg.q);
    HeckeContext ctx(gd, RingZm(cfg.modulus));
    for (auto f : {FaceLabel::C, FaceLabel::x0, FaceLabel::x1}) {
        auto alg = parahoric_algebra(ctx, f, false);
        out.add("rank H_" + face_name(f) + " = |W~_F|", "Bruhat_parahoric",
                alg.rank() == gd.finite_weyl_group(f, false).size());
    }
    if (gd.has_omega() && gd.omega_finite()) {
        auto dag = parahoric_algebra(ctx, FaceLabel::C, true);
        auto plain = parahoric_algebra(ctx, FaceLabel::C, false);
        out.add("rank H_C^dagger over H_C equals |Omega_C|", "free(i)",
                dag.rank() == 2 * plain.rank());
        std::size_t om = dag.index.at(gd.omega_elt(1));
        bool unit = dag.constants[om][om][dag.unit_index] == 1 % cfg.modulus;
        for (std::size_t k = 0; k < dag.rank(); ++k)
            if (k != dag.unit_index && dag.constants[om][om][k] != 0) unit = false;
        out.add("tau_omega^2 = tau_1", "group_ring", unit);
    }
    // factorization tau_w = tau_d tau_{w_F}
    bool fact = true;
    for (auto f : {FaceLabel::x0, FaceLabel::x1}) {
        for (const auto& w : gd.elements_up_to(6)) {
            auto [d, wf] = gd.parahoric_factor(w, f);
            if (!gd.minimal_in_coset(d, f) ||
                !ctx.equal(ctx.tau(w), ctx.tau_multiply(ctx.tau(d), ctx.tau(wf))))
                fact = false;
        }
    }
    out.add("parahoric factorization tau_w = tau_d tau_{w_F}", "free(ii)+additive_length", fact);
}

void suite_frobenius(const SuiteConfig& cfg, Collector& out) {
    auto gd = make_group_data(cfg.kind, cfg.q);
    HeckeContext ctx(gd, RingZm(cfg.modulus));
    for (auto f : {FaceLabel::C, FaceLabel::x0, FaceLabel::x1}) {
        auto fm = frobenius_matrix(ctx, f);
        out.add("Frobenius matrix invertible at " + face_name(f), "selfinjective",
                fm.invertible);
    }
}

void suite_cabanes(const SuiteConfig& cfg, Collector& out) {
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    HeckeContext ctx(gd, ring);
    Rng rng(cfg.seed);
    std::vector<std::pair<FaceLabel, bool>> faces{{FaceLabel::x0, false},
                                                  {FaceLabel::x1, false},
                                                  {FaceLabel::C, false}};
    if (gd.kind == GroupKind::PGL2) faces.emplace_back(FaceLabel::C, true);
    std::size_t per_face = (cfg.cases + faces.size() - 1) / faces.size();
    for (auto [f, dagger] : faces) {
        auto pd = make_parahoric_data(gd, ring, f, dagger);
        bool round = true, condh = true;
        std::string witness;
        for (std::size_t i = 0; i < per_face; ++i) {
            std::size_t rank = 1 + rng.below(3);
            auto M = random_parahoric_module(ctx, f, dagger, rank, rng);
            if (!M) {
                round = false;
                witness = "sampler failed";
                break;
            }
            if (!cabanes_roundtrip(pd, *M)) {
                round = false;
                witness = "roundtrip failure at rank " + std::to_string(rank);
            }
            auto tf = t_functor(pd, *M);
            if (!check_condition_H(pd, tf.rep).holds) condh = false;
        }
        std::string tag = face_name(f) + (dagger ? "^dagger" : "");
        out.add("invariants(t_F(M)) = M at " + tag, "Cabanes+quasi_inverse_OS", round, witness);
        out.add("t_F(M) satisfies condition (H) at " + tag, "condition_H", condh);
    }
}

void suite_roundtrip(const SuiteConfig& cfg, Collector& out) {
    require_dagger_capable(cfg);
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    Rng rng(cfg.seed);
    bool cat = true, rt_small = true, rt_big = true;
    std::string witness;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        std::size_t rank = 1 + rng.below(3);
        auto M = random_hmodule(gd, ring, rank, rng);
        if (!M) {
            cat = false;
            witness = "sampler failed";
            break;
        }
        ModuleDiagram md = diagram_from_hecke_module(*M);
        auto region = build_region(RegionKind::Apartment, gd, cfg.radius);
        CoeffSystem csys = spread(md.dia, region);
        if (!check_category_C(csys).holds) cat = false;
        if (!main_roundtrip(md, cfg.radius)) rt_small = false;
        if (!main_roundtrip(md, cfg.radius + 1)) rt_big = false;
    }
    out.add("check_category_C(spread(F(M)))", "quasi_inverse_coefficient_system", cat, witness);
    out.add("M(F(M)) = M at radius N", "equivalence", rt_small);
    out.add("M(F(M)) = M at radius N+1", "equivalence", rt_big);
}

void suite_acyclic(const SuiteConfig& cfg, Collector& out) {
    require_dagger_capable(cfg);
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    Rng rng(cfg.seed);
    bool h1 = true, iota = true, compat = true;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        std::size_t rank = 1 + rng.below(3);
        auto M = random_hmodule(gd, ring, rank, rng);
        if (!M) {
            h1 = false;
            break;
        }
        ModuleDiagram md = diagram_from_hecke_module(*M);
        auto rep = check_acyclicity(md, cfg.radius);
        h1 = h1 && rep.h1_zero;
        iota = iota && rep.iota_x0_bijective && rep.iota_x1_bijective;
        compat = compat && rep.iota_compatible;
    }
    out.add("H1 of the invariants complex vanishes", "acyclic(i)+restriction_chain_complexes", h1);
    out.add("iota_x bijective at the base vertices", "acyclic(ii)", iota);
    out.add("iota_C = iota_x o t^C_x", "acyclic(iii)", compat);

    if (!p_nilpotent(cfg)) {
        // p invertible: locally constant characterization
        bool trans = true, units = true, squares = true;
        Rng rng2(cfg.seed + 17);
        for (std::size_t i = 0; i < std::max<std::size_t>(cfg.cases / 4, 2); ++i) {
            auto M = random_hmodule(gd, ring, 1 + rng2.below(2), rng2);
            if (!M) continue;
            auto rep = check_locally_constant(*M, cfg.radius);
            trans = trans && rep.transitions_bijective;
            units = units && rep.tau_units;
            squares = squares && rep.square_commutes;
        }
        out.add("all F(M)^I transitions bijective (p invertible)", "acyclic_locally_constant",
                trans);
        out.add("tau_gamma units in H_F^dagger (p invertible)", "acyclic_locally_constant",
                units);
        out.add("restriction/Hecke-operator square commutes", "acyclic_locally_constant",
                squares);
    }
}

void suite_rank1(const SuiteConfig& cfg, Collector& out) {
    require_dagger_capable(cfg);
    if (!p_nilpotent(cfg))
        throw std::invalid_argument("rank1 suite requires p nilpotent in R");
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    Rng rng(cfg.seed);
    bool inj = true, emb = true;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        std::size_t rank = 1 + rng.below(2);
        auto M = random_hmodule(gd, ring, rank, rng);
        if (!M) {
            inj = false;
            break;
        }
        auto rep = check_rank_one_exactness(*M, cfg.radius);
        inj = inj && rep.boundary_injective;
        emb = emb && rep.embedding_injective;
    }
    out.add("boundary injective on the tree ball", "semisimple_rank_one", inj);
    out.add("M embeds into H0 of the ball", "semisimple_rank_one", emb);
}

void suite_flat(const SuiteConfig& cfg, Collector& out) {
    require_dagger_capable(cfg);
    if (!p_nilpotent(cfg))
        throw std::invalid_argument("flat suite requires p nilpotent in R");
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    Rng rng(cfg.seed);
    bool pass = true;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        std::size_t rank = 1 + rng.below(3);
        auto M = random_hmodule(gd, ring, rank, rng);
        if (!M) {
            pass = false;
            break;
        }
        if (!check_tau_injective(*M)) pass = false;
    }
    out.add("tau_{M,F} injective at every base face", "exceptional_flat", pass);
}

void suite_etale(const SuiteConfig& cfg, Collector& out) {
    require_dagger_capable(cfg);
    if (!p_nilpotent(cfg))
        throw std::invalid_argument("etale suite requires p nilpotent in R");
    auto gd = make_group_data(cfg.kind, cfg.q);
    RingZm ring(cfg.modulus);
    Rng rng(cfg.seed);
    bool psiphi = true, sum = true, iota = true, phiinj = true, scalar = true;
    std::size_t ncases = std::max<std::size_t>(cfg.cases / 4, 2);
    for (std::size_t i = 0; i < ncases; ++i) {
        std::size_t rank = 1 + rng.below(2);
        auto M = random_hmodule(gd, ring, rank, rng);
        if (!M) {
            sum = false;
            break;
        }
        auto et = check_etale(*M, cfg.radius);
        psiphi = psiphi && et.psi_phi_identity;
        sum = sum && et.etale_identity;
        auto ht = halftree_h0(*M, cfg.radius);
        iota = iota && ht.iota_x0_bijective;
        phiinj = phiinj && ht.phi_t_injective;
        scalar = scalar && ht.scalar_restriction_iso;
    }
    out.add("psi_t phi_t = id", "etale", psiphi);
    out.add("sum over cosets of u phi_t psi_t u^{-1} = id on the shrunken half-tree", "etale",
            sum);
    out.add("iota_x0 bijective on half-tree H0", "chain_complex_D(ii)", iota);
    out.add("phi_t injective between truncations", "non_vanishing", phiinj);
    out.add("half-tree H0 of invariants = M", "scalar_restriction", scalar);
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"braid",     "parahoric", "cabanes",
                                                "frobenius", "roundtrip", "acyclic",
                                                "rank1",     "flat",      "etale",
                                                "all"};
    return names;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
    if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) == suite_names().end())
        throw std::invalid_argument("unknown suite: " + cfg.suite);
    SuiteReport rep;
    rep.config = cfg;
    Collector out{rep};
    auto run_one = [&](const std::string& name) {
        if (name == "braid") suite_braid(cfg, out);
        else if (name == "parahoric") suite_parahoric(cfg, out);
        else if (name == "cabanes") suite_cabanes(cfg, out);
        else if (name == "frobenius") suite_frobenius(cfg, out);
        else if (name == "roundtrip") suite_roundtrip(cfg, out);
        else if (name == "acyclic") suite_acyclic(cfg, out);
        else if (name == "rank1") suite_rank1(cfg, out);
        else if (name == "flat") suite_flat(cfg, out);
        else if (name == "etale") suite_etale(cfg, out);
    };
    if (cfg.suite == "all") {
        run_one("braid");
        run_one("parahoric");
        run_one("frobenius");
        run_one("cabanes");
        if (cfg.kind != GroupKind::GL2) {
            run_one("roundtrip");
            run_one("acyclic");
            if (p_nilpotent(cfg)) {
                run_one("rank1");
                run_one("flat");
                run_one("etale");
            }
        }
    } else {
        run_one(cfg.suite);
    }
    return rep;
}

}  // namespace hkcoeff
