#include <catch2/catch_amalgamated.hpp>

#include "gtiv/systems.hpp"

using namespace gtiv;

TEST_CASE("anisotropic family: window counts are exactly j + 1") {
    auto s = build_fail_uce<Rat>(Rat(2), Rat(1), 40);
    Box<Rat> K = Box<Rat>::cube(2, Rat(0), Rat(1));
    Vec<Rat> zero{Rat(0), Rat(0)};
    for (const auto& e : s.entries) {
        if (e.label < 2) continue;
        auto L = annihilator(e.subgroup);
        CHECK(count_in_translate(L, Region<Rat>{{K}}, zero) == e.label + 1);
    }
}

TEST_CASE("anisotropic family: normalised sum is a closed-form geometric series") {
    auto s = build_fail_uce<Rat>(Rat(2), Rat(1), 16);
    auto rep = calderon_partial(s, Box<Rat>::cube(2, Rat(0), Rat(1)));
    // 4 * sum_{j=1..16} 2^-j / 4 = 1 - 2^-16.
    CHECK(rep.total == Rat(1) - Rat(1, 65536));
    CHECK(rep.verdict == Verdict::BoundCertified);
}

TEST_CASE("anisotropic family: local sums stay bounded while counts grow") {
    auto s = build_fail_uce<Rat>(Rat(2), Rat(1), 40);
    Box<Rat> K = Box<Rat>::cube(2, Rat(0), Rat(1));
    auto lic = lic_partial(s, K);
    CHECK(lic.verdict == Verdict::BoundCertified);
    // Independent envelope sum: 4 * sum (4/j + 1)(4j + 1) 2^-j (computed elsewhere) ~ 76.9.
    CHECK(static_cast<double>(lic.total) < 80.0);
    std::vector<CoCompactSubgroup<Rat>> family;
    std::vector<long> labels;
    for (const auto& e : s.entries) {
        family.push_back(e.subgroup);
        labels.push_back(e.label);
    }
    auto uce = uce_check(family, K, labels, 8);
    CHECK(uce.verdict == Verdict::GrowthEvidence);
}

TEST_CASE("mixed-density family: moderate sum equals the truncation depth plus one") {
    auto s = build_main_example<Rat>(Rat(1, 20), 4);
    auto rep = temperate_partial(s, s.working_box);
    CHECK(rep.total == Rat(5));
    CHECK(rep.verdict == Verdict::GrowthEvidence);
}

TEST_CASE("mixed-density family: local sum certified under its geometric envelope") {
    auto s = build_main_example<Rat>(Rat(1, 20), 6);
    auto rep = lic_partial(s, s.working_box);
    CHECK(rep.verdict == Verdict::BoundCertified);
    CHECK(static_cast<double>(rep.certified_total) < 200.0);
}

TEST_CASE("mixed-density family: sampled window counts obey the fine-direction law") {
    auto s = build_main_example<Rat>(Rat(1, 20), 5);
    // For entry n with index j, any unit-square window translate captures at
    // most 4 j 2^{1-n} + 1 annihilator points within the level-n square.
    for (std::size_t n = 1; n < s.entries.size(); ++n) {
        const auto& e = s.entries[n];
        long j = 1;
        for (std::size_t i = 0; i < n; ++i) j *= 4;
        j += 1;
        auto L = annihilator(e.subgroup);
        Box<Rat> In = DyadicStaircase2<Rat>::square(static_cast<int>(n));
        auto sampled = sup_count_sampled(L, In, 12);
        Rat bound = Rat(4 * j) * Rat(2) / scalar_pow(Rat(2), static_cast<long>(n)) + Rat(1);
        CHECK(Rat(sampled.count) <= bound);
    }
}

TEST_CASE("dilation system: telescoping sum over an octave is the band count") {
    // psi^2 = indicator of [1,2] and [-2,-1]; octave [1,4] with |j| <= 10.
    Mat<Rat> A({{Rat(2)}});
    auto G = make_subgroup(Mat<Rat>::identity(1), 1);
    EnergyProfile<Rat> psi;
    psi.pieces.push_back(ProfilePiece<Rat>{Box<Rat>(Vec<Rat>{Rat(1)}, Vec<Rat>{Rat(2)}), Rat(1)});
    psi.pieces.push_back(ProfilePiece<Rat>{Box<Rat>(Vec<Rat>{Rat(-2)}, Vec<Rat>{Rat(-1)}), Rat(1)});
    std::vector<long> jr;
    for (long j = -10; j <= 10; ++j) jr.push_back(j);
    auto s = build_wavelet_system(A, G, psi, jr);
    Box<Rat> octave(Vec<Rat>{Rat(1)}, Vec<Rat>{Rat(4)});
    auto rep = calderon_partial(s, octave);
    CHECK(rep.total == Rat(3));
}

TEST_CASE("dilation system: covolume law holds by construction") {
    Mat<Rat> A = Mat<Rat>::identity(2);
    A(0, 0) = Rat(2); A(1, 1) = Rat(2);
    auto G = make_subgroup(Mat<Rat>::identity(2), 2);
    EnergyProfile<Rat> psi;
    psi.pieces.push_back(ProfilePiece<Rat>{Box<Rat>::cube(2, Rat(1), Rat(2)), Rat(1)});
    auto s = build_wavelet_system(A, G, psi, std::vector<long>{-2, -1, 0, 1, 2});
    for (const auto& e : s.entries) {
        CHECK(covolume(e.subgroup) == scalar_pow(Rat(4), -e.label));
        CHECK(total_mass(e.profile) == Rat(1));
    }
}

TEST_CASE("compact factor counts scale linearly in the index") {
    for (long j : {1L, 2L, 7L, 50L, 100L}) {
        auto c = compact_open_counts(j);
        CHECK(c.count == j);
        CHECK(c.covol == 1);
        CHECK(c.covol_sub == Rat(1, static_cast<long long>(j)));
    }
}

TEST_CASE("builders validate their parameter ranges") {
    CHECK_THROWS_AS(build_main_example<Rat>(Rat(1, 5), 3), std::invalid_argument);
    CHECK_THROWS_AS(build_main_example<Rat>(Rat(1, 20), 0), std::invalid_argument);
    CHECK_THROWS_AS(build_fail_uce<Rat>(Rat(1), Rat(1), 5), std::invalid_argument);
    CHECK_THROWS_AS(build_fail_uce<Rat>(Rat(2), Rat(0), 5), std::invalid_argument);
}
