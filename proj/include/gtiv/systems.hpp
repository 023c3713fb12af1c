#pragma once

// Builders for the concrete systems used throughout the test suite and CLI:
// a two-parameter family carried by a dyadic staircase partition of
// [-1,1]^2, a diagonal family with geometrically decaying mass, a generic
// wavelet-style dilation system, and closed-form counts for a compact-open
// index family.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtiv/conditions.hpp"

namespace gtiv {

// Family with lattices C_j Z^2 for C_j = [[a, j], [-a, j]] (covolume 2aj)
// whose energy tiles are the dyadic squares I_n: the label-n entry carries
// the source index j = 4^n + 1 with density 4^n on I_n, and the label-0
// entry carries j = 1 with density 3/11 on the complement I_0 of the
// staircase inside [-1,1]^2.  Satisfies the local integrability condition
// while the temperateness sum diverges linearly.
template <typename R>
GTISystem<R> build_main_example(const R& a, long n_max) {
    if (!(scalar_traits<R>::lt(R(0), a) && scalar_traits<R>::lt(a, R(1) / R(10))))
        throw std::invalid_argument("build_main_example: need 0 < a < 1/10");
    if (n_max < 1) throw std::invalid_argument("build_main_example: n_max must be >= 1");

    GTISystem<R> s;
    s.name = "main_example";
    s.dim = 2;
    s.working_box = Box<R>::cube(2, R(-1), R(1));
    DyadicStaircase2<R> staircase;

    for (long n = 0; n <= n_max; ++n) {
        long j = 1;
        for (long i = 0; i < n; ++i) j *= 4;
        if (n > 0) j += 1;
        SystemEntry<R> e;
        e.label = n;
        std::ostringstream os;
        os << "j=" << j << " (I_" << n << ")";
        e.note = os.str();
        // The annihilator of C Z^2 is spanned by (1,1)/(2a) and (1,-1)/(2j):
        // the fine direction is anti-diagonal, which is what makes the
        // per-tile counting estimate collapse like 2^-n.
        Mat<R> C(2, 2);
        C(0, 0) = a; C(0, 1) = R(static_cast<long long>(j));
        C(1, 0) = a; C(1, 1) = R(static_cast<long long>(-j));
        e.subgroup = make_subgroup(C, 2);
        if (n == 0) {
            // Density 3/11 on I_0 = [-1,1]^2 minus the staircase: a full box
            // piece with the staircase subtracted.
            R eta = R(3) / R(11);
            e.profile.pieces.push_back(ProfilePiece<R>{s.working_box, eta});
            e.profile.pieces.push_back(ProfilePiece<R>{staircase, -eta});
        } else {
            e.profile.pieces.push_back(
                ProfilePiece<R>{staircase.square(static_cast<int>(n)), scalar_pow(R(4), n)});
        }
        s.entries.push_back(std::move(e));
    }

    // Per-label envelopes from the example's own bound chain: the local
    // term at label n is at most (2a)^-1 (2^(3-n) + 1/(4^n+1)) <= (9/2a) 2^-n,
    // and the Calderon term is (2a(4^n+1))^-1 <= (1/2a) 2^-n.
    s.tails[ConditionKind::LocalIntegrability] =
        TailDescriptor<R>::geometric(R(1) / R(2), R(9) / (R(2) * a));
    s.tails[ConditionKind::Calderon] = TailDescriptor<R>::geometric(R(1) / R(2), R(1) / (R(2) * a));
    return s;
}

// Diagonal family diag(1/j, j) with covolume 1 and aggregated density N^-j
// on the working box [-r, r]^2.  Satisfies the local integrability
// condition but fails the uniform counting estimate (the annihilator packs
// j + 1 points into a unit window).
template <typename R>
GTISystem<R> build_fail_uce(const R& N, const R& r, long j_max) {
    if (!scalar_traits<R>::lt(R(1), N)) throw std::invalid_argument("build_fail_uce: need N > 1");
    if (!scalar_traits<R>::lt(R(0), r)) throw std::invalid_argument("build_fail_uce: need r > 0");
    if (j_max < 0) throw std::invalid_argument("build_fail_uce: j_max must be >= 0");

    GTISystem<R> s;
    s.name = "fail_uce";
    s.dim = 2;
    s.working_box = Box<R>::cube(2, -r, r);
    for (long j = 1; j <= j_max; ++j) {
        SystemEntry<R> e;
        e.label = j;
        std::ostringstream os;
        os << "j=" << j;
        e.note = os.str();
        Vec<R> diag{R(1) / R(static_cast<long long>(j)), R(static_cast<long long>(j))};
        e.subgroup = make_subgroup(Mat<R>::diagonal(diag), 2);
        e.profile.pieces.push_back(ProfilePiece<R>{s.working_box, scalar_pow(N, -j)});
        s.entries.push_back(std::move(e));
    }

    R muK = s.working_box.volume();  // (2r)^2
    R x = R(1) / N;
    // Calderon and temperateness terms are exactly muK * N^-j.
    s.tails[ConditionKind::Calderon] = TailDescriptor<R>::geometric(x, muK);
    s.tails[ConditionKind::Temperate] = TailDescriptor<R>::geometric(x, muK);
    // Local terms obey the per-j envelope (4r/j + 1)(4rj + 1) N^-j muK;
    // the remainder relaxes 4r/j <= 4r and sums the arithmetic-geometric
    // series in closed form.
    R rr = r;
    auto envelope = [rr, muK, x](long j) {
        R jj(static_cast<long long>(j));
        return (R(4) * rr / jj + R(1)) * (R(4) * rr * jj + R(1)) * scalar_pow(x, j) * muK;
    };
    auto remainder = [rr, muK, x](long J) {
        R xJ = scalar_pow(x, J + 1);
        R s0 = xJ / (R(1) - x);
        R s1 = xJ * (R(static_cast<long long>(J + 1)) - R(static_cast<long long>(J)) * x) /
               ((R(1) - x) * (R(1) - x));
        return muK * ((R(16) * rr * rr + R(4) * rr + R(1)) * s0 + R(4) * rr * s1);
    };
    s.tails[ConditionKind::LocalIntegrability] = TailDescriptor<R>::user_bound(remainder, envelope);
    return s;
}

// Wavelet-style dilation system: entry j has translation subgroup A^-j C
// and density pushed through the dilation, so that total mass is preserved
// and covol(Gamma_j) = |det A|^-j covol(Gamma).
template <typename R>
GTISystem<R> build_wavelet_system(const Mat<R>& A, const CoCompactSubgroup<R>& G,
                                  const EnergyProfile<R>& psi_sq, const std::vector<long>& j_range) {
    R det = determinant(A);
    if (scalar_traits<R>::eq(det, R(0))) throw std::invalid_argument("build_wavelet_system: singular matrix");
    R absdet = scalar_traits<R>::lt(det, R(0)) ? R(-det) : det;

    GTISystem<R> s;
    s.name = "wavelet";
    s.dim = G.dim();
    R base_covol = covolume(G);
    std::optional<Box<R>> hull;
    for (long j : j_range) {
        SystemEntry<R> e;
        e.label = j;
        std::ostringstream os;
        os << "j=" << j;
        e.note = os.str();
        e.subgroup = CoCompactSubgroup<R>{matrix_power(A, -j) * G.C, G.n};
        e.profile = dilate_profile(psi_sq, A, j);
        // Covolume law, verified on construction.
        R expected = scalar_pow(absdet, -j) * base_covol;
        if (!scalar_traits<R>::eq(covolume(e.subgroup), expected))
            throw std::logic_error("build_wavelet_system: covolume law violated");
        for (const auto& piece : e.profile.pieces) {
            Box<R> bb = std::visit(
                [](const auto& shape) -> Box<R> {
                    using T = std::decay_t<decltype(shape)>;
                    if constexpr (std::is_same_v<T, Box<R>>) return shape;
                    else if constexpr (std::is_same_v<T, ConvexPolytope<R>>) return shape.bounding_box();
                    else throw std::invalid_argument("wavelet profile: unsupported piece");
                },
                piece.shape);
            if (!hull) hull = bb;
            else {
                for (std::size_t i = 0; i < hull->lo.size(); ++i) {
                    if (scalar_traits<R>::lt(bb.lo[i], hull->lo[i])) hull->lo[i] = bb.lo[i];
                    if (scalar_traits<R>::lt(hull->hi[i], bb.hi[i])) hull->hi[i] = bb.hi[i];
                }
            }
        }
        s.entries.push_back(std::move(e));
    }
    s.working_box = hull ? *hull : Box<R>::cube(static_cast<std::size_t>(s.dim), R(-1), R(1));
    return s;
}

// Closed-form counting data for the compact-open family on Z x T indexed
// by j: the annihilator meets the dual compactum in exactly j points while
// the covolume stays 1, so count / (1 + covol) = j / 2 grows without bound.
struct CompactOpenCounts {
    long long count = 0;
    Rat covol{1};
    Rat covol_sub{1};  // covolume of the compact factor's subgroup: 1/j
};

inline CompactOpenCounts compact_open_counts(long j) {
    if (j < 1) throw std::invalid_argument("compact_open_counts: j must be >= 1");
    CompactOpenCounts c;
    c.count = j;
    c.covol = 1;
    c.covol_sub = Rat(1) / Rat(static_cast<long long>(j));
    return c;
}

}  // namespace gtiv
