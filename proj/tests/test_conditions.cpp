#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gtiv/conditions.hpp"
#include "gtiv/systems.hpp"

using namespace gtiv;

namespace {

GTISystem<Rat> two_lattice_system() {
    GTISystem<Rat> s;
    s.name = "toy";
    s.dim = 2;
    s.working_box = Box<Rat>::cube(2, Rat(-1), Rat(1));
    for (long j : {1L, 2L}) {
        SystemEntry<Rat> e;
        e.label = j;
        Mat<Rat> C = Mat<Rat>::identity(2);
        C(0, 0) = Rat(j);
        e.subgroup = make_subgroup(C, 2);
        e.profile = make_profile(
            std::vector<ProfilePiece<Rat>>{{Box<Rat>::cube(2, Rat(-1), Rat(1)), Rat(1, 2 * j)}});
        s.entries.push_back(std::move(e));
    }
    return s;
}

}  // namespace

TEST_CASE("single-term local sum has a bracketed value") {
    auto s = two_lattice_system();
    Box<Rat> K = Box<Rat>::cube(2, Rat(0), Rat(1, 2));
    for (const auto& e : s.entries) {
        auto [term, contributing] = lic_term(e.subgroup, e.profile, K);
        Rat covol = covolume(e.subgroup);
        Rat mass = integrate(e.profile, K);
        auto upper = sup_count_upper(annihilator(e.subgroup), K);
        CHECK(mass / covol <= term);
        CHECK(term <= Rat(upper) * mass / covol);
        CHECK(contributing >= 1);
    }
}

TEST_CASE("local sum report totals the per-entry terms exactly") {
    auto s = two_lattice_system();
    Box<Rat> K = Box<Rat>::cube(2, Rat(0), Rat(1, 2));
    auto rep = lic_partial(s, K);
    Rat manual(0);
    for (const auto& e : s.entries) manual += lic_term(e.subgroup, e.profile, K).first;
    CHECK(rep.total == manual);
    CHECK(rep.verdict == Verdict::SatisfiedAtTruncation);
}

TEST_CASE("window validation rejects bad dimensions and stray windows") {
    auto s = two_lattice_system();
    CHECK_THROWS_AS(lic_partial(s, Box<Rat>::cube(3, Rat(0), Rat(1))), std::invalid_argument);
    CHECK_THROWS_AS(lic_partial(s, Box<Rat>::cube(2, Rat(5), Rat(6))), std::invalid_argument);
}

TEST_CASE("normalised sum and weighted sum agree on matching windows") {
    auto s = two_lattice_system();
    Box<Rat> K = Box<Rat>::cube(2, Rat(-1), Rat(1));
    auto cal = calderon_partial(s, K);
    // Each term is mass / covol: (4 * 1/(2j)) / j.
    CHECK(cal.total == Rat(2) + Rat(1, 2));
    auto tem = temperate_partial(s, K);
    // Each term is the window mass: 2/j.
    CHECK(tem.total == Rat(3));
}

TEST_CASE("split comparison bounds the moderate sum by its two components") {
    auto s = two_lattice_system();
    Box<Rat> K = Box<Rat>::cube(2, Rat(-1), Rat(1));
    auto rep = split_temperate_check(s, K, Rat(1));
    CHECK((rep.verdict == Verdict::SatisfiedAtTruncation || rep.verdict == Verdict::BoundCertified));
}

TEST_CASE("counting probe flags linearly growing families") {
    std::vector<CoCompactSubgroup<Rat>> family;
    std::vector<long> labels;
    for (long j = 1; j <= 30; ++j) {
        Mat<Rat> C(2, 2);
        C(0, 0) = Rat(1, j); C(0, 1) = Rat(0);
        C(1, 0) = Rat(0);    C(1, 1) = Rat(j);
        family.push_back(make_subgroup(C, 2));
        labels.push_back(j);
    }
    auto rep = uce_check(family, Box<Rat>::cube(2, Rat(0), Rat(1)), labels, 8);
    CHECK(rep.verdict == Verdict::GrowthEvidence);
}

TEST_CASE("counting probe passes a fixed lattice family") {
    std::vector<CoCompactSubgroup<Rat>> family(10, make_subgroup(Mat<Rat>::identity(2), 2));
    std::vector<long> labels;
    for (long j = 1; j <= 10; ++j) labels.push_back(j);
    auto rep = uce_check(family, Box<Rat>::cube(2, Rat(0), Rat(1)), labels, 8);
    CHECK(rep.verdict == Verdict::SatisfiedAtTruncation);
}

TEST_CASE("ball covering probe reports a feasible constant") {
    auto G = make_subgroup(Mat<Rat>::identity(2), 2);
    auto rep = round_check(G, Rat(2), 8);
    CHECK(rep.sup >= 9);  // a radius-2 ball around a lattice point holds >= 9 points
    CHECK(rep.feasible_constant > 0);
    CHECK(rep.ball_volume == Catch::Approx(4 * M_PI));
}

TEST_CASE("dilation lattice counts grow like the determinant for expanding maps") {
    Mat<Rat> A = Mat<Rat>::identity(2);
    A(0, 0) = Rat(2); A(1, 1) = Rat(2);
    auto G = make_subgroup(Mat<Rat>::identity(2), 2);
    std::vector<long> jr{5, 6, 7, 8, 9, 10};
    auto rep = lce_check(A, G, Rat(1), jr);
    REQUIRE(rep.rows.size() == jr.size());
    for (const auto& row : rep.rows) {
        CHECK(row.ratio > 2.8);
        CHECK(row.ratio < 3.5);
    }
}

TEST_CASE("lattice counts certify nothing for non-expanding dilations") {
    Mat<Rat> A = Mat<Rat>::identity(2);  // |det| = 1
    auto G = make_subgroup(Mat<Rat>::identity(2), 2);
    auto rep = lce_check(A, G, Rat(1), std::vector<long>{1, 2, 3});
    bool warned = false;
    for (const auto& n : rep.notes) warned = warned || n.find("do not expand") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("diagnose runs all four checks and the per-term bracketing") {
    auto s = two_lattice_system();
    auto d = diagnose(s, s.working_box, 8);
    CHECK(d.per_term_domination);
    CHECK(d.per_term_counting_bound);
    CHECK(d.lic.kind == ConditionKind::LocalIntegrability);
    CHECK(d.counting.kind == ConditionKind::Counting);
}

TEST_CASE("diagonal families report the boundedness equivalence") {
    auto s = build_fail_uce<Rat>(Rat(2), Rat(1), 12);
    auto d = diagnose(s, Box<Rat>::cube(2, Rat(0), Rat(1)), 8);
    CHECK(d.diagonal_equivalence);
}
