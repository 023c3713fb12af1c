#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gtiv/lattice.hpp"

using namespace gtiv;

namespace {

Mat<Rat> random_invertible(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    for (;;) {
        Mat<Rat> C(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) C(i, j) = Rat(num(rng), den(rng));
        if (determinant(C) != 0) return C;
    }
}

}  // namespace

TEST_CASE("annihilator pairings are integral") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 2 + static_cast<int>(trial % 2);
        Mat<Rat> C = random_invertible(rng, d);
        auto G = make_subgroup(C, d);
        auto Gp = annihilator(G);
        auto Lp = enumerate_in_region(Gp, Region<Rat>{{Box<Rat>::cube(d, Rat(-5), Rat(5))}});
        auto L = enumerate_in_region(point_lattice(G), Region<Rat>{{Box<Rat>::cube(d, Rat(-5), Rat(5))}});
        for (const auto& a : Lp)
            for (const auto& g : L) {
                Rat dot(0);
                for (int i = 0; i < d; ++i) dot += a.point[i] * g.point[i];
                CHECK(denominator(dot) == 1);
            }
    }
}

TEST_CASE("double annihilator returns the original lattice") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        Mat<Rat> C = random_invertible(rng, 2);
        auto G = make_subgroup(C, 2);
        auto Gp = annihilator(G);
        // Annihilator of the annihilator: columns of ((B^T)^-1) where B is
        // the annihilator basis; must span the same set of points.
        Mat<Rat> back = inverse(Gp.basis.transpose());
        auto inner = enumerate_in_region(point_lattice(G), Region<Rat>{{Box<Rat>::cube(2, Rat(-3), Rat(3))}});
        // Each original point must have integer coordinates in the back basis.
        Mat<Rat> back_inv = inverse(back);
        for (const auto& g : inner) {
            for (int i = 0; i < 2; ++i) {
                Rat coord(0);
                for (int j = 0; j < 2; ++j) coord += back_inv(i, j) * g.point[j];
                CHECK(denominator(coord) == 1);
            }
        }
    }
}

TEST_CASE("counting density approaches inverse covolume") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Mat<Rat> C = random_invertible(rng, 2);
        auto G = make_subgroup(C, 2);
        Rat R1(30);
        auto pts = enumerate_in_region(point_lattice(G), Region<Rat>{{Box<Rat>::cube(2, -R1, R1)}});
        double density = static_cast<double>(pts.size()) / static_cast<double>((2 * R1) * (2 * R1));
        double expected = 1.0 / static_cast<double>(covolume(G));
        CHECK(std::abs(density / expected - 1.0) < 0.25);
    }
}

TEST_CASE("fast translate counting matches enumeration") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        Mat<Rat> C = random_invertible(rng, 2);
        auto L = point_lattice(make_subgroup(C, 2));
        Vec<Rat> lo{Rat(num(rng)), Rat(num(rng))};
        Box<Rat> K(lo, Vec<Rat>{lo[0] + Rat(num(rng) + 4), lo[1] + Rat(num(rng) + 4)});
        Vec<Rat> omega{Rat(num(rng), 2), Rat(num(rng), 2)};
        auto fast = count_in_translate(L, Region<Rat>{{K}}, omega);
        Vec<Rat> shift{-omega[0], -omega[1]};
        auto slow = enumerate_in_region(L, Region<Rat>{{K.translated(shift)}}).size();
        CHECK(fast == static_cast<std::int64_t>(slow));
    }
}

TEST_CASE("counting convention: translate is subtracted") {
    // Z intersect ([0, 1/2] - 3/4) is empty.
    auto L = point_lattice(make_subgroup(Mat<Rat>::identity(1), 1));
    Box<Rat> K(Vec<Rat>{Rat(0)}, Vec<Rat>{Rat(1, 2)});
    CHECK(count_in_translate(L, Region<Rat>{{K}}, Vec<Rat>{Rat(3, 4)}) == 0);
    CHECK(count_in_translate(L, Region<Rat>{{K}}, Vec<Rat>{Rat(0)}) == 1);
}

TEST_CASE("sampled infimum can reach zero on short windows") {
    auto L = point_lattice(make_subgroup(Mat<Rat>::identity(1), 1));
    Box<Rat> K(Vec<Rat>{Rat(0)}, Vec<Rat>{Rat(1, 2)});
    CHECK(inf_count_sampled(L, K, 4).count == 0);
}

TEST_CASE("sup bound dominates sampled sup") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Mat<Rat> C = random_invertible(rng, 2);
        auto L = point_lattice(make_subgroup(C, 2));
        Box<Rat> V = Box<Rat>::cube(2, Rat(0), Rat(1));
        auto upper = sup_count_upper(L, V);
        auto sampled = sup_count_sampled(L, V, 6);
        CHECK(sampled.count <= upper);
    }
}

TEST_CASE("rank deficit subgroups enumerate along the sublattice only") {
    // Split rank 1 in dimension 2: annihilator is spanned by one column.
    Mat<Rat> C(2, 2);
    C(0, 0) = Rat(1); C(0, 1) = Rat(0);
    C(1, 0) = Rat(0); C(1, 1) = Rat(1);
    auto G = make_subgroup(C, 1);
    auto L = annihilator(G);
    CHECK(L.rank() == 1);
    auto pts = enumerate_in_region(L, Region<Rat>{{Box<Rat>::cube(2, Rat(-2), Rat(2))}});
    CHECK(pts.size() == 5);  // (m, 0) for m = -2..2
}

TEST_CASE("csv export includes coordinates and points") {
    auto L = point_lattice(make_subgroup(Mat<Rat>::identity(2), 2));
    auto pts = enumerate_in_region(L, Region<Rat>{{Box<Rat>::cube(2, Rat(0), Rat(1))}});
    auto csv = points_to_csv(pts, L.rank(), L.dim());
    CHECK(csv.find("m0,m1,x0,x1") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(pts.size()));
}
