#include "doctest.h"

#include "hkcoeff/weyl.hpp"

#include <algorithm>
#include <set>

using namespace hkcoeff;

namespace {

struct TinyRng {
    u64 s;
    explicit TinyRng(u64 seed) : s(seed) {}
    u64 next() {
        s += 0x9e3779b97f4a7c15ull;
        u64 z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) { return next() % n; }
};

WeylElt random_elt(TinyRng& rng, const GroupData& gd, std::size_t maxlen) {
    auto all = gd.elements_up_to(maxlen);
    return all[rng.below(all.size())];
}

std::vector<GroupData> all_groups() {
    std::vector<GroupData> out;
    for (auto kind : {GroupKind::SL2, GroupKind::PGL2, GroupKind::GL2})
        for (u64 q : {2ull, 3ull}) out.push_back(make_group_data(kind, q));
    return out;
}

}  // namespace

TEST_CASE("group data: fixed structural examples") {
    SUBCASE("SL2 q=2: trivial torus, trivial squares") {
        auto gd = make_group_data(GroupKind::SL2, 2);
        CHECK(gd.torus_order() == 1);
        CHECK(gd.torus_is_identity(gd.square[0]));
        CHECK(gd.torus_is_identity(gd.square[1]));
        CHECK_FALSE(gd.has_omega());
    }
    SUBCASE("SL2 q=3: torus Z/2, squares are the class of -1") {
        auto gd = make_group_data(GroupKind::SL2, 3);
        CHECK(gd.torus_order() == 2);
        CHECK(gd.square[0] == TorusElt{2});
        CHECK(gd.square[1] == TorusElt{2});
    }
    SUBCASE("PGL2 q=3: omega of order two") {
        auto gd = make_group_data(GroupKind::PGL2, 3);
        CHECK(gd.has_omega());
        CHECK(gd.omega_finite());
        auto w = gd.omega_elt(1);
        CHECK(gd.multiply(w, w) == gd.identity());
    }
    SUBCASE("GL2: torus (q-1)^2, omega infinite") {
        auto gd = make_group_data(GroupKind::GL2, 3);
        CHECK(gd.torus_order() == 4);
        CHECK_FALSE(gd.omega_finite());
        auto w = gd.omega_elt(1);
        auto w2 = gd.multiply(w, w);
        CHECK(w2.omega == 2);
        CHECK(w2.length() == 0);
    }
    SUBCASE("q must be prime") {
        CHECK_THROWS(make_group_data(GroupKind::SL2, 4));
    }
}

TEST_CASE("multiplication: fixed examples") {
    auto gd2 = make_group_data(GroupKind::SL2, 2);
    auto s0 = gd2.simple(0), s1 = gd2.simple(1);
    SUBCASE("identity acts trivially") {
        auto a = gd2.multiply(s0, s1);
        CHECK(gd2.multiply(a, gd2.identity()) == a);
        CHECK(gd2.multiply(gd2.identity(), a) == a);
    }
    SUBCASE("s0*s0 = 1 over SL2 q=2 (trivial square class)") {
        CHECK(gd2.multiply(s0, s0) == gd2.identity());
    }
    SUBCASE("s0*s1 is the length-two word") {
        auto a = gd2.multiply(s0, s1);
        CHECK(a.length() == 2);
        CHECK(a.word.first == 0);
    }
    SUBCASE("s0*s0 over SL2 q=3 is the nontrivial torus class") {
        auto gd3 = make_group_data(GroupKind::SL2, 3);
        auto sq = gd3.multiply(gd3.simple(0), gd3.simple(0));
        CHECK(sq.length() == 0);
        CHECK(sq.torus == TorusElt{2});
    }
}

TEST_CASE("multiplication is associative (500 random triples per group)") {
    for (const auto& gd : all_groups()) {
        TinyRng rng(17 + gd.q + (gd.kind == GroupKind::SL2 ? 0 : 100));
        for (int i = 0; i < 500; ++i) {
            auto a = random_elt(rng, gd, 6), b = random_elt(rng, gd, 6), c = random_elt(rng, gd, 6);
            CHECK(gd.multiply(gd.multiply(a, b), c) == gd.multiply(a, gd.multiply(b, c)));
        }
    }
}

TEST_CASE("inverse round trips") {
    for (const auto& gd : all_groups()) {
        TinyRng rng(29 + gd.q);
        for (int i = 0; i < 100; ++i) {
            auto a = random_elt(rng, gd, 5);
            CHECK(gd.multiply(a, gd.inverse(a)) == gd.identity());
            CHECK(gd.multiply(gd.inverse(a), a) == gd.identity());
        }
    }
}

TEST_CASE("length is a Coxeter length and Omega-bi-invariant") {
    for (const auto& gd : all_groups()) {
        for (const auto& w : gd.elements_up_to(4)) {
            for (int i = 0; i < 2; ++i) {
                auto ws = gd.multiply(w, gd.simple(i));
                i64 diff = static_cast<i64>(ws.length()) - static_cast<i64>(w.length());
                CHECK((diff == 1 || diff == -1));
            }
            if (gd.has_omega()) {
                auto om = gd.omega_elt(1);
                CHECK(gd.multiply(om, gd.multiply(w, om)).length() == w.length());
                CHECK(gd.multiply(om, w).length() == w.length());
            }
        }
    }
}

TEST_CASE("distinguished coset representatives") {
    auto gd = make_group_data(GroupKind::SL2, 2);
    SUBCASE("D_C is everything") {
        CHECK(gd.enum_DF(FaceLabel::C, 2).size() == gd.elements_up_to(2).size());
    }
    SUBCASE("(x0, 1) gives {1, s1}") {
        auto d = gd.enum_DF(FaceLabel::x0, 1);
        REQUIRE(d.size() == 2);
        CHECK(d[0] == gd.identity());
        CHECK(d[1] == gd.simple(1));
    }
    SUBCASE("(x0, 2) gives {1, s1, s0 s1}") {
        auto d = gd.enum_DF(FaceLabel::x0, 2);
        REQUIRE(d.size() == 3);
        auto s0s1 = gd.multiply(gd.simple(0), gd.simple(1));
        CHECK(std::count(d.begin(), d.end(), s0s1) == 1);
        // s1 s0 ends in s0, so it shares its coset with the shorter s1
        auto s1s0 = gd.multiply(gd.simple(1), gd.simple(0));
        CHECK(std::count(d.begin(), d.end(), s1s0) == 0);
    }
}

TEST_CASE("length additivity on D_F x W_F and parahoric factorization") {
    for (const auto& gd : all_groups()) {
        for (auto f : {FaceLabel::x0, FaceLabel::x1, FaceLabel::C}) {
            auto wf = gd.finite_weyl_group(f, false);
            for (const auto& d : gd.enum_DF(f, 3))
                for (const auto& w : wf) CHECK(gd.is_length_additive(d, w));
            for (const auto& w : gd.elements_up_to(4)) {
                auto [d, s] = gd.parahoric_factor(w, f);
                CHECK(gd.minimal_in_coset(d, f));
                CHECK(gd.multiply(d, s) == w);
                CHECK(d.length() + s.length() == w.length());
            }
        }
    }
}

TEST_CASE("Omega lies in D_F and D_{x0} is contained in D_C") {
    auto gd = make_group_data(GroupKind::PGL2, 3);
    for (auto f : {FaceLabel::x0, FaceLabel::x1, FaceLabel::C}) {
        auto d = gd.enum_DF(f, 2);
        CHECK(std::count(d.begin(), d.end(), gd.omega_elt(1)) == 1);
    }
    auto dx0 = gd.enum_DF(FaceLabel::x0, 3);
    auto dc = gd.enum_DF(FaceLabel::C, 3);
    std::set<WeylElt> dcset(dc.begin(), dc.end());
    for (const auto& d : dx0) CHECK(dcset.count(d) == 1);
}

TEST_CASE("finite Weyl groups have the stated orders") {
    auto gd3 = make_group_data(GroupKind::SL2, 3);
    CHECK(gd3.finite_weyl_group(FaceLabel::C, false).size() == 2);
    CHECK(gd3.finite_weyl_group(FaceLabel::x0, false).size() == 4);
    auto pgl2 = make_group_data(GroupKind::PGL2, 2);
    CHECK(pgl2.finite_weyl_group(FaceLabel::C, true).size() == 2);
    CHECK(pgl2.finite_weyl_group(FaceLabel::x0, true).size() == 2);
    CHECK_THROWS(make_group_data(GroupKind::GL2, 2).finite_weyl_group(FaceLabel::C, true));
}
