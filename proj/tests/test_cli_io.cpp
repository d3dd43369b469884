#include "doctest.h"

#include "hkcoeff/json_io.hpp"
#include "hkcoeff/sampling.hpp"
#include "hkcoeff/verify.hpp"

using namespace hkcoeff;

TEST_CASE("matrix and module JSON round trips") {
    RingZm r(9);
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        MatrixZm A(r, 2 + rng.below(3), 1 + rng.below(4));
        for (auto& x : A.a) x = rng.below(9);
        CHECK(matrix_from_json(matrix_to_json(A)) == A);
        PresentedModule M(r, A.cols, A);
        CHECK(module_from_json(module_to_json(M)) == M);
    }
}

TEST_CASE("weyl element JSON round trip") {
    auto gd = make_group_data(GroupKind::PGL2, 3);
    for (const auto& w : gd.elements_up_to(3))
        CHECK(weyl_from_json(gd, weyl_to_json(gd, w)) == w);
}

TEST_CASE("hecke module JSON: round trip and validation at load") {
    auto gd = make_group_data(GroupKind::PGL2, 3);
    RingZm r(9);
    Rng rng(77);
    auto M = random_hmodule(gd, r, 2, rng);
    REQUIRE(M.has_value());
    json j = hmodule_to_json(*M);
    HModule back = hmodule_from_json(j);
    CHECK(back.act_s0 == M->act_s0);
    CHECK(back.act_s1 == M->act_s1);
    CHECK(back.carrier == M->carrier);
    // corrupting the action must be rejected by validation
    json bad = j;
    bad["action"]["s0"][0][0] = (bad["action"]["s0"][0][0].get<u64>() + 1) % 9;
    bool threw = false;
    try {
        hmodule_from_json(bad);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("suite reports are deterministic given the seed") {
    SuiteConfig cfg;
    cfg.suite = "cabanes";
    cfg.kind = GroupKind::SL2;
    cfg.q = 2;
    cfg.modulus = 4;
    cfg.seed = 42;
    cfg.cases = 6;
    SuiteReport a = run_suite(cfg), b = run_suite(cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].pass == b.checks[i].pass);
    }
    CHECK(a.ok());
}

TEST_CASE("suite guards: GL2 rejected where the dagger level is needed") {
    SuiteConfig cfg;
    cfg.suite = "rank1";
    cfg.kind = GroupKind::GL2;
    cfg.q = 2;
    cfg.modulus = 4;
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
    cfg.suite = "roundtrip";
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
    cfg.suite = "nonsense";
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
    // p invertible rejected for the nilpotent-only suites
    cfg.suite = "rank1";
    cfg.kind = GroupKind::SL2;
    cfg.modulus = 3;
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
}

TEST_CASE("braid and frobenius suites pass on a small configuration") {
    SuiteConfig cfg;
    cfg.suite = "braid";
    cfg.kind = GroupKind::GL2;
    cfg.q = 3;
    cfg.modulus = 9;
    cfg.seed = 9;
    cfg.cases = 40;
    CHECK(run_suite(cfg).ok());
    cfg.suite = "frobenius";
    CHECK(run_suite(cfg).ok());
    cfg.suite = "parahoric";
    CHECK(run_suite(cfg).ok());
}
