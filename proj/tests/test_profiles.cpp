#include <catch2/catch_amalgamated.hpp>

#include "gtiv/profiles.hpp"

using namespace gtiv;

namespace {

EnergyProfile<Rat> box_profile(const Box<Rat>& b, Rat v) {
    return make_profile(std::vector<ProfilePiece<Rat>>{{b, v}});
}

}  // namespace

TEST_CASE("integration over a box is value times overlap") {
    auto p = box_profile(Box<Rat>::cube(2, Rat(0), Rat(2)), Rat(3, 2));
    CHECK(integrate(p, Box<Rat>::cube(2, Rat(0), Rat(2))) == Rat(6));
    CHECK(integrate(p, Box<Rat>::cube(2, Rat(1), Rat(3))) == Rat(3, 2));
    CHECK(integrate(p, Box<Rat>::cube(2, Rat(5), Rat(6))) == Rat(0));
    CHECK(total_mass(p) == Rat(6));
}

TEST_CASE("pieces aggregate additively, signed layers allowed via separate pieces") {
    std::vector<ProfilePiece<Rat>> pieces;
    pieces.push_back({Box<Rat>::cube(2, Rat(-1), Rat(1)), Rat(3, 11)});
    pieces.push_back({DyadicStaircase2<Rat>{}, Rat(2)});
    auto p = make_profile(std::move(pieces));
    // Staircase inside [-1,1]^2 has area 1/3.
    CHECK(integrate(p, Box<Rat>::cube(2, Rat(-1), Rat(1))) == Rat(12, 11) + Rat(2, 3));
    CHECK(p(Vec<Rat>{Rat(-1, 4), Rat(-1, 4)}) == Rat(3, 11) + Rat(2));
    CHECK(p(Vec<Rat>{Rat(1, 2), Rat(1, 2)}) == Rat(3, 11));
}

TEST_CASE("negative piece values are rejected") {
    std::vector<ProfilePiece<Rat>> pieces;
    pieces.push_back({Box<Rat>::cube(1, Rat(0), Rat(1)), Rat(-1)});
    CHECK_THROWS_AS(make_profile(std::move(pieces)), std::invalid_argument);
}

TEST_CASE("polytope pieces integrate exactly") {
    std::vector<Halfspace<Rat>> hs{
        {Vec<Rat>{Rat(-1), Rat(0)}, Rat(0)},
        {Vec<Rat>{Rat(0), Rat(-1)}, Rat(0)},
        {Vec<Rat>{Rat(1), Rat(1)}, Rat(1)},
    };
    auto tri = ConvexPolytope<Rat>::from_halfspaces(2, hs);  // area 1/2
    auto p = make_profile(std::vector<ProfilePiece<Rat>>{{tri, Rat(4)}});
    CHECK(total_mass(p) == Rat(2));
    // [0,3/4]^2 minus the corner triangle above x + y = 1: area 7/16.
    CHECK(integrate(p, Box<Rat>(Vec<Rat>{Rat(0), Rat(0)}, Vec<Rat>{Rat(3, 4), Rat(3, 4)})) == Rat(7, 4));
}

TEST_CASE("dilation preserves total mass") {
    Mat<Rat> A(2, 2);
    A(0, 0) = Rat(2); A(0, 1) = Rat(1); A(1, 0) = Rat(0); A(1, 1) = Rat(2);
    auto p = box_profile(Box<Rat>::cube(2, Rat(-1), Rat(1)), Rat(5));
    for (long j : {-2L, -1L, 0L, 1L, 2L, 3L}) {
        auto q = dilate_profile(p, A, j);
        CHECK(total_mass(q) == total_mass(p));
    }
}

TEST_CASE("dilation composes: one step twice equals two steps") {
    Mat<Rat> A(2, 2);
    A(0, 0) = Rat(3); A(0, 1) = Rat(0); A(1, 0) = Rat(1); A(1, 1) = Rat(2);
    auto p = box_profile(Box<Rat>::cube(2, Rat(0), Rat(1)), Rat(1));
    auto two = dilate_profile(p, A, 2);
    auto onetwice = dilate_profile(dilate_profile(p, A, 1), A, 1);
    Vec<Rat> probe{Rat(7, 3), Rat(5, 2)};
    CHECK(two(probe) == onetwice(probe));
    CHECK(total_mass(two) == total_mass(onetwice));
}

TEST_CASE("scalar powers handle negative exponents") {
    CHECK(scalar_pow(Rat(2), 10) == Rat(1024));
    CHECK(scalar_pow(Rat(2), -3) == Rat(1, 8));
    CHECK(scalar_pow(Rat(5), 0) == Rat(1));
}

TEST_CASE("geometric tails validate envelopes and bound remainders") {
    auto t = TailDescriptor<Rat>::geometric(Rat(1, 2), Rat(8));
    // Terms indexed by label l must sit under 8 * (1/2)^l.
    std::vector<std::pair<long, Rat>> good{{0, Rat(8)}, {1, Rat(3)}, {2, Rat(2)}, {3, Rat(1)}};
    CHECK(t.validates(good));
    std::vector<std::pair<long, Rat>> bad{{0, Rat(8)}, {1, Rat(5)}};
    CHECK(!t.validates(bad));
    // Tail after label 3: 8 * (1/2)^4 / (1 - 1/2) = 1.
    CHECK(t.tail_bound(3) == Rat(1));
}

TEST_CASE("user bounds validate via a per-label envelope when provided") {
    auto t = TailDescriptor<Rat>::user_bound(
        [](long L) { return Rat(1) / Rat(static_cast<long long>(L + 1)); },
        [](long l) { return Rat(1) / Rat(static_cast<long long>(l * l + 1)); });
    std::vector<std::pair<long, Rat>> terms{{1, Rat(1, 2)}, {2, Rat(1, 5)}, {3, Rat(1, 10)}};
    CHECK(t.validates(terms));
    terms.push_back({4, Rat(1)});
    CHECK(!t.validates(terms));
    CHECK(t.tail_bound(9) == Rat(1, 10));
}
