#pragma once

// Closed co-compact subgroups C(Z^n x R^{d-n}) of R^d, their annihilators,
// and enumeration / counting of weighted point lattices inside regions.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gtiv/geometry.hpp"
#include "gtiv/linalg.hpp"
#include "gtiv/scalar.hpp"

namespace gtiv {

// C(Z^n x R^{d-n}) for an invertible d x d matrix C.  n = d gives a full
// lattice, n = 0 the subgroup C({0} x R^d).
template <typename R>
struct CoCompactSubgroup {
    Mat<R> C;      // invertible generator matrix, d x d
    int n = 0;     // number of discrete directions

    int dim() const { return static_cast<int>(C.rows()); }
};

// A discrete subgroup B Z^k of R^d together with a weight attached to each
// point (the counting measures in use are weight * #).
template <typename R>
struct PointLattice {
    Mat<R> basis;  // d x k, columns linearly independent (k may be 0)
    R weight{1};

    int dim() const { return static_cast<int>(basis.rows()); }
    int rank() const { return static_cast<int>(basis.cols()); }

    Vec<R> point_at(const std::vector<long>& m) const {
        if (m.size() != basis.cols()) throw std::invalid_argument("lattice point: coordinate count mismatch");
        Vec<R> x(basis.rows(), R(0));
        for (std::size_t i = 0; i < basis.rows(); ++i)
            for (std::size_t j = 0; j < basis.cols(); ++j)
                x[i] += basis(i, j) * R(static_cast<long long>(m[j]));
        return x;
    }
};

template <typename R>
CoCompactSubgroup<R> make_subgroup(const Mat<R>& C, int n) {
    if (C.rows() != C.cols()) throw std::invalid_argument("subgroup: matrix must be square");
    if (n < 0 || n > static_cast<int>(C.rows())) throw std::invalid_argument("subgroup: invalid discrete rank");
    if (scalar_traits<R>::eq(determinant(C), R(0))) throw std::invalid_argument("subgroup: matrix must be invertible");
    return CoCompactSubgroup<R>{C, n};
}

// Covolume of C(Z^n x R^{d-n}) with respect to the Haar normalisation that
// gives Z^n x R^{d-n} covolume one: |det C|.
template <typename R>
R covolume(const CoCompactSubgroup<R>& G) {
    R d = determinant(G.C);
    return scalar_traits<R>::lt(d, R(0)) ? -d : d;
}

// The point lattice underlying a full-rank subgroup (n = d), with weight 1.
template <typename R>
PointLattice<R> point_lattice(const CoCompactSubgroup<R>& G) {
    if (G.n != G.dim()) throw std::invalid_argument("point_lattice: subgroup has non-discrete directions");
    return PointLattice<R>{G.C, R(1)};
}

// Annihilator of C(Z^n x R^{d-n}): the first n columns of (C^T)^{-1} span it
// as a rank-n point lattice; its natural weight is 1/|det C|.
template <typename R>
PointLattice<R> annihilator(const CoCompactSubgroup<R>& G) {
    Mat<R> Cti = inverse(G.C.transpose());
    PointLattice<R> L;
    L.basis = Mat<R>(G.C.rows(), static_cast<std::size_t>(G.n));
    for (std::size_t i = 0; i < G.C.rows(); ++i)
        for (int j = 0; j < G.n; ++j)
            L.basis(i, static_cast<std::size_t>(j)) = Cti(i, static_cast<std::size_t>(j));
    L.weight = R(1) / covolume(G);
    return L;
}

template <typename R>
struct LatticePoint {
    std::vector<long> coords;  // integer coordinates in the lattice basis
    Vec<R> point;              // basis * coords
};

namespace detail {

constexpr std::int64_t kEnumerationCap = 100000000;  // 10^8 candidate tuples

// Integer range for each lattice coordinate whose image can meet [lo, hi]:
// propagate the interval through a left inverse of the basis.
template <typename R>
std::vector<std::pair<long, long>> coordinate_ranges(const Mat<R>& basis, const Vec<R>& lo, const Vec<R>& hi) {
    std::vector<std::pair<long, long>> ranges;
    if (basis.cols() == 0) return ranges;
    Mat<R> P = left_inverse(basis);  // k x d
    for (std::size_t i = 0; i < P.rows(); ++i) {
        R a(0), b(0);
        for (std::size_t j = 0; j < P.cols(); ++j) {
            const R& p = P(i, j);
            if (scalar_traits<R>::lt(p, R(0))) { a += p * hi[j]; b += p * lo[j]; }
            else { a += p * lo[j]; b += p * hi[j]; }
        }
        ranges.emplace_back(ceil_long<R>(a), floor_long<R>(b));
    }
    return ranges;
}

inline std::int64_t range_count(const std::vector<std::pair<long, long>>& ranges) {
    std::int64_t total = 1;
    for (auto& [a, b] : ranges) {
        if (b < a) return 0;
        std::int64_t len = static_cast<std::int64_t>(b) - a + 1;
        if (total > kEnumerationCap / len + 1) return kEnumerationCap + 1;
        total *= len;
        if (total > kEnumerationCap) return kEnumerationCap + 1;
    }
    return total;
}

}  // namespace detail

// All lattice points inside a region, with their integer coordinates, sorted
// lexicographically by coordinates.  Throws if the candidate box from the
// region's bounding box exceeds the enumeration cap.
template <typename R>
std::vector<LatticePoint<R>> enumerate_in_region(const PointLattice<R>& L, const Region<R>& region) {
    std::vector<LatticePoint<R>> out;
    Box<R> bb = region.bounding_box();
    if (L.rank() == 0) {
        Vec<R> origin(static_cast<std::size_t>(L.dim()), R(0));
        if (region.contains(origin)) out.push_back(LatticePoint<R>{{}, origin});
        return out;
    }
    auto ranges = detail::coordinate_ranges(L.basis, bb.lo, bb.hi);
    if (detail::range_count(ranges) > detail::kEnumerationCap)
        throw std::runtime_error("enumerate_in_region: candidate count exceeds enumeration cap");
    std::vector<long> m(ranges.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == ranges.size()) {
            Vec<R> x = L.point_at(m);
            if (region.contains(x)) out.push_back(LatticePoint<R>{m, x});
            return;
        }
        for (long v = ranges[i].first; v <= ranges[i].second; ++v) { m[i] = v; rec(i + 1); }
    };
    rec(0);
    return out;
}

namespace detail {

// A linear constraint g . m <= c on integer lattice coordinates.
template <typename R>
struct CoordConstraint {
    Vec<R> g;
    R c;
};

// Pull the region's facet inequalities n . x <= c back to coordinate space
// via x = B m: (B^T n) . m <= c.  Only single-part box/polytope regions
// admit this representation.
template <typename R>
std::optional<std::vector<CoordConstraint<R>>> coordinate_constraints(const Mat<R>& basis, const Region<R>& region,
                                                                      const Vec<R>& shift) {
    if (region.parts.size() != 1) return std::nullopt;
    std::vector<Halfspace<R>> hs;
    if (const auto* box = std::get_if<Box<R>>(&region.parts[0])) {
        for (std::size_t i = 0; i < box->lo.size(); ++i) {
            Vec<R> n(box->lo.size(), R(0));
            n[i] = R(1);
            hs.push_back(Halfspace<R>{n, box->hi[i]});
            n[i] = R(-1);
            hs.push_back(Halfspace<R>{n, -box->lo[i]});
        }
    } else if (const auto* poly = std::get_if<ConvexPolytope<R>>(&region.parts[0])) {
        hs = poly->halfspaces();
    } else {
        return std::nullopt;
    }
    std::vector<CoordConstraint<R>> out;
    for (const auto& h : hs) {
        CoordConstraint<R> cc;
        cc.g.assign(basis.cols(), R(0));
        cc.c = h.offset;
        for (std::size_t j = 0; j < basis.cols(); ++j)
            for (std::size_t i = 0; i < basis.rows(); ++i)
                cc.g[j] += basis(i, j) * h.normal[i];
        // shift the region by -shift: n . (x + shift) <= c
        for (std::size_t i = 0; i < basis.rows(); ++i) cc.c -= h.normal[i] * shift[i];
        out.push_back(std::move(cc));
    }
    return out;
}

// Count integer solutions of a constraint system by enumerating all but the
// last coordinate and intersecting exact intervals for the last one.
template <typename R>
std::int64_t count_constraint_solutions(const std::vector<CoordConstraint<R>>& cons,
                                        const std::vector<std::pair<long, long>>& ranges) {
    const std::size_t k = ranges.size();
    std::int64_t outer = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        if (ranges[i].second < ranges[i].first) return 0;
        std::int64_t len = static_cast<std::int64_t>(ranges[i].second) - ranges[i].first + 1;
        if (outer > kEnumerationCap / len + 1) throw std::runtime_error("count: candidate count exceeds enumeration cap");
        outer *= len;
        if (outer > kEnumerationCap) throw std::runtime_error("count: candidate count exceeds enumeration cap");
    }
    if (ranges.back().second < ranges.back().first) return 0;

    std::vector<long> m(k, 0);
    std::int64_t total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i + 1 == k) {
            // Exact interval for the last coordinate.
            R lo_b(0), hi_b(0);
            bool lo_set = false, hi_set = false;
            for (const auto& cc : cons) {
                R rest = cc.c;
                for (std::size_t j = 0; j + 1 < k; ++j) rest -= cc.g[j] * R(static_cast<long long>(m[j]));
                const R& gk = cc.g[k - 1];
                if (scalar_traits<R>::eq(gk, R(0))) {
                    if (scalar_traits<R>::lt(rest, R(0))) return;  // infeasible at this prefix
                } else if (scalar_traits<R>::lt(R(0), gk)) {
                    R b = rest / gk;
                    if (!hi_set || scalar_traits<R>::lt(b, hi_b)) { hi_b = b; hi_set = true; }
                } else {
                    R b = rest / gk;
                    if (!lo_set || scalar_traits<R>::lt(lo_b, b)) { lo_b = b; lo_set = true; }
                }
            }
            long lo = lo_set ? ceil_long<R>(lo_b) : ranges[k - 1].first;
            long hi = hi_set ? floor_long<R>(hi_b) : ranges[k - 1].second;
            lo = std::max(lo, ranges[k - 1].first);
            hi = std::min(hi, ranges[k - 1].second);
            if (hi >= lo) total += static_cast<std::int64_t>(hi) - lo + 1;
            return;
        }
        for (long v = ranges[i].first; v <= ranges[i].second; ++v) { m[i] = v; rec(i + 1); }
    };
    rec(0);
    return total;
}

template <typename R>
Region<R> translated_region(const Region<R>& region, const Vec<R>& t) {
    Region<R> out;
    for (const auto& part : region.parts) {
        if (const auto* box = std::get_if<Box<R>>(&part)) {
            out.parts.push_back(box->translated(t));
        } else if (const auto* ball = std::get_if<Ball<R>>(&part)) {
            Ball<R> b = *ball;
            for (std::size_t i = 0; i < b.center.size(); ++i) b.center[i] += t[i];
            out.parts.push_back(b);
        } else {
            const auto& poly = std::get<ConvexPolytope<R>>(part);
            out.parts.push_back(poly.translated(t));
        }
    }
    return out;
}

}  // namespace detail

// #(L intersect (R - omega)), unweighted.  Box and single-polytope regions
// are counted without enumerating the last lattice coordinate; other region
// shapes fall back to full enumeration of the shifted region.
template <typename R>
std::int64_t count_in_translate(const PointLattice<R>& L, const Region<R>& region, const Vec<R>& omega) {
    if (static_cast<int>(omega.size()) != L.dim()) throw std::invalid_argument("count_in_translate: dimension mismatch");
    if (L.rank() == 0) {
        Vec<R> p = omega;  // need 0 in R - omega, i.e. omega in R
        return region.contains(p) ? 1 : 0;
    }
    Box<R> bb = region.bounding_box();
    Vec<R> lo = bb.lo, hi = bb.hi;
    for (std::size_t i = 0; i < lo.size(); ++i) { lo[i] -= omega[i]; hi[i] -= omega[i]; }
    auto ranges = detail::coordinate_ranges(L.basis, lo, hi);
    if (ranges.empty()) return 0;
    auto cons = detail::coordinate_constraints(L.basis, region, omega);
    if (cons) return detail::count_constraint_solutions(*cons, ranges);
    Vec<R> neg(omega.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -omega[i];
    return static_cast<std::int64_t>(enumerate_in_region(L, detail::translated_region(region, neg)).size());
}

// Rigorous upper bound for sup_omega #(L intersect (V - omega)) over all
// translates: every translate of V that meets L embeds, after recentring at
// one of its lattice points, into the difference set V - V.
template <typename R>
std::int64_t sup_count_upper(const PointLattice<R>& L, const Box<R>& V) {
    Region<R> diff;
    diff.parts.push_back(difference_set(V));
    Vec<R> zero(V.lo.size(), R(0));
    return count_in_translate(L, diff, zero);
}

template <typename R>
struct SampledCount {
    std::int64_t count = 0;
    Vec<R> argmax;  // the translate realising the sampled extremum
};

// Sampled lower bound for the same supremum: max over a grid of omega in one
// fundamental cell of L together with a grid over V itself.
template <typename R>
SampledCount<R> sup_count_sampled(const PointLattice<R>& L, const Box<R>& V, int grid) {
    if (grid < 1) throw std::invalid_argument("sup_count_sampled: grid must be positive");
    const std::size_t d = V.lo.size();
    std::vector<Vec<R>> samples;
    // Grid over a fundamental cell spanned by the basis columns.
    const int k = L.rank();
    std::vector<int> t(static_cast<std::size_t>(std::max(k, 0)), 0);
    if (k > 0) {
        bool done = false;
        while (!done) {
            Vec<R> w(d, R(0));
            for (std::size_t i = 0; i < d; ++i)
                for (int j = 0; j < k; ++j)
                    w[i] += L.basis(i, static_cast<std::size_t>(j)) * R(t[static_cast<std::size_t>(j)]) / R(grid);
            samples.push_back(std::move(w));
            int pos = 0;
            while (pos < k && ++t[static_cast<std::size_t>(pos)] == grid) { t[static_cast<std::size_t>(pos)] = 0; ++pos; }
            done = (pos == k);
        }
    } else {
        samples.emplace_back(d, R(0));
    }
    // Grid over V.
    std::vector<int> s(d, 0);
    bool done = false;
    while (!done) {
        Vec<R> w(d);
        for (std::size_t i = 0; i < d; ++i)
            w[i] = V.lo[i] + (V.hi[i] - V.lo[i]) * R(s[i]) / R(grid);
        samples.push_back(std::move(w));
        std::size_t pos = 0;
        while (pos < d && ++s[pos] > grid) { s[pos] = 0; ++pos; }
        done = (pos == d);
    }
    Region<R> reg;
    reg.parts.push_back(V);
    SampledCount<R> best;
    best.argmax.assign(d, R(0));
    for (const auto& w : samples) {
        std::int64_t c = count_in_translate(L, reg, w);
        if (c > best.count) { best.count = c; best.argmax = w; }
    }
    return best;
}

// Sampled upper bound for inf over window placements of #(L intersect
// (Q + omega)): min over a grid of placements omega spanning Q.  Advisory.
template <typename R>
SampledCount<R> inf_count_sampled(const PointLattice<R>& L, const Box<R>& Q, int grid) {
    if (grid < 1) throw std::invalid_argument("inf_count_sampled: grid must be positive");
    const std::size_t d = Q.lo.size();
    Region<R> reg;
    reg.parts.push_back(Q);
    SampledCount<R> best;
    best.count = -1;
    std::vector<int> s(d, 0);
    bool done = false;
    while (!done) {
        Vec<R> w(d), neg(d);
        for (std::size_t i = 0; i < d; ++i) {
            w[i] = (Q.hi[i] - Q.lo[i]) * R(s[i]) / R(grid);
            neg[i] = -w[i];
        }
        // #(L intersect (Q + omega)) = count_in_translate with shift -omega.
        std::int64_t c = count_in_translate(L, reg, neg);
        if (best.count < 0 || c < best.count) { best.count = c; best.argmax = w; }
        std::size_t pos = 0;
        while (pos < d && ++s[pos] > grid) { s[pos] = 0; ++pos; }
        done = (pos == d);
    }
    return best;
}

// CSV rendering of an enumeration: integer coordinates then the point.
template <typename R>
std::string points_to_csv(const std::vector<LatticePoint<R>>& pts, int rank, int dim) {
    std::ostringstream os;
    for (int j = 0; j < rank; ++j) os << "m" << j << ",";
    for (int i = 0; i < dim; ++i) os << "x" << i << (i + 1 < dim ? "," : "");
    os << "\n";
    for (const auto& p : pts) {
        for (long c : p.coords) os << c << ",";
        for (std::size_t i = 0; i < p.point.size(); ++i)
            os << format_scalar(p.point[i]) << (i + 1 < p.point.size() ? "," : "");
        os << "\n";
    }
    return os.str();
}

}  // namespace gtiv
