#pragma once

// Piecewise-constant energy densities on the Fourier domain: construction,
// exact integration over boxes and polytopes, dilation by matrix powers, and
// tail descriptors used to certify truncated infinite sums.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gtiv/geometry.hpp"
#include "gtiv/linalg.hpp"
#include "gtiv/scalar.hpp"

namespace gtiv {

template <typename R>
R scalar_pow(R base, long e) {
    if (e < 0) return R(1) / scalar_pow(base, -e);
    R out(1);
    while (e > 0) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

// One constant piece of a density.  Signed coefficients are allowed
// internally so that staircase-shaped supports can be expressed as a box
// minus a staircase; the public builder checks that stated values are >= 0.
template <typename R>
struct ProfilePiece {
    std::variant<Box<R>, ConvexPolytope<R>, DyadicStaircase2<R>> shape;
    R value;
};

template <typename R>
struct EnergyProfile {
    std::vector<ProfilePiece<R>> pieces;

    // Density at a point: sum of coefficients of the pieces containing it.
    R operator()(const Vec<R>& x) const {
        R s(0);
        for (const auto& p : pieces)
            std::visit([&](const auto& shape) { if (shape.contains(x)) s += p.value; }, p.shape);
        return s;
    }
};

template <typename R>
EnergyProfile<R> make_profile(std::vector<ProfilePiece<R>> pieces) {
    for (const auto& p : pieces) {
        if (scalar_traits<R>::lt(p.value, R(0)))
            throw std::invalid_argument("make_profile: piece values must be nonnegative");
        if (const auto* poly = std::get_if<ConvexPolytope<R>>(&p.shape)) {
            if (poly->empty()) throw std::invalid_argument("make_profile: empty polytope piece");
        }
    }
    return EnergyProfile<R>{std::move(pieces)};
}

namespace detail {

template <typename R>
R piece_box_volume(const ProfilePiece<R>& p, const Box<R>& b) {
    if (const auto* box = std::get_if<Box<R>>(&p.shape)) return box_overlap_volume(*box, b);
    if (const auto* poly = std::get_if<ConvexPolytope<R>>(&p.shape)) {
        auto clipped = poly->intersect_box(b);
        return clipped.empty() ? R(0) : clipped.volume();
    }
    return std::get<DyadicStaircase2<R>>(p.shape).intersection_volume(b);
}

template <typename R>
R piece_polytope_volume(const ProfilePiece<R>& p, const ConvexPolytope<R>& q) {
    if (const auto* box = std::get_if<Box<R>>(&p.shape)) {
        auto clipped = q.intersect_box(*box);
        return clipped.empty() ? R(0) : clipped.volume();
    }
    if (const auto* poly = std::get_if<ConvexPolytope<R>>(&p.shape)) {
        ConvexPolytope<R> c = q;
        for (const auto& h : poly->halfspaces()) {
            c = c.clipped(h);
            if (c.empty()) return R(0);
        }
        return c.volume();
    }
    throw std::invalid_argument("integrate: staircase pieces integrate against boxes only");
}

}  // namespace detail

// Exact integral of the density over a box.
template <typename R>
R integrate(const EnergyProfile<R>& p, const Box<R>& region) {
    R s(0);
    for (const auto& piece : p.pieces) s += piece.value * detail::piece_box_volume(piece, region);
    return s;
}

// Exact integral of the density over a convex polytope.
template <typename R>
R integrate(const EnergyProfile<R>& p, const ConvexPolytope<R>& region) {
    R s(0);
    for (const auto& piece : p.pieces) s += piece.value * detail::piece_polytope_volume(piece, region);
    return s;
}

template <typename R>
R total_mass(const EnergyProfile<R>& p) {
    R s(0);
    for (const auto& piece : p.pieces) {
        if (const auto* box = std::get_if<Box<R>>(&piece.shape)) s += piece.value * box->volume();
        else if (const auto* poly = std::get_if<ConvexPolytope<R>>(&piece.shape)) s += piece.value * poly->volume();
        else throw std::invalid_argument("total_mass: staircase pieces need an enclosing box integral");
    }
    return s;
}

// Pull the density through the dilation x -> A^j x on the time side:
// pieces map by (A^T)^j and values scale by |det A|^{-j}, preserving mass.
template <typename R>
EnergyProfile<R> dilate_profile(const EnergyProfile<R>& p, const Mat<R>& A, long j) {
    if (j == 0) return p;
    R det = determinant(A);
    if (scalar_traits<R>::eq(det, R(0))) throw std::invalid_argument("dilate_profile: singular matrix");
    Mat<R> M = matrix_power(A.transpose(), j);
    R scale = scalar_pow(det < R(0) ? R(-det) : det, -j);
    EnergyProfile<R> out;
    for (const auto& piece : p.pieces) {
        ProfilePiece<R> q;
        q.value = piece.value * scale;
        if (const auto* box = std::get_if<Box<R>>(&piece.shape))
            q.shape = ConvexPolytope<R>::from_box(*box).mapped(M);
        else if (const auto* poly = std::get_if<ConvexPolytope<R>>(&piece.shape))
            q.shape = poly->mapped(M);
        else
            throw std::invalid_argument("dilate_profile: staircase pieces cannot be dilated");
        out.pieces.push_back(std::move(q));
    }
    return out;
}

// Pointwise sum of finitely many densities (finite index aggregation).
template <typename R>
EnergyProfile<R> aggregate(const std::vector<EnergyProfile<R>>& parts) {
    EnergyProfile<R> out;
    for (const auto& p : parts)
        for (const auto& piece : p.pieces) out.pieces.push_back(piece);
    return out;
}

// ---------------------------------------------------------------------------
// Tail descriptors: upper bounds on the part of an infinite sum that a
// truncated evaluation leaves out.

enum class ConditionKind { LocalIntegrability, Calderon, Temperate, Counting, Round, LatticeCounting };

inline std::string to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::LocalIntegrability: return "lic";
        case ConditionKind::Calderon: return "calderon";
        case ConditionKind::Temperate: return "temperate";
        case ConditionKind::Counting: return "uce";
        case ConditionKind::Round: return "round";
        default: return "lce";
    }
}

template <typename R>
struct TailDescriptor {
    enum class Kind { None, Geometric, UserBound };
    Kind kind = Kind::None;

    // Geometric: term at label l is bounded by coefficient * ratio^l, so the
    // sum beyond label L is at most coefficient * ratio^(L+1) / (1 - ratio).
    R ratio{0};
    R coefficient{0};

    // UserBound: closed-form remainder after truncating at label L, with an
    // optional per-label envelope used to sanity-check computed terms.
    std::function<R(long)> remainder;
    std::function<R(long)> envelope;

    static TailDescriptor none() { return {}; }
    static TailDescriptor geometric(const R& q, const R& coeff) {
        if (!(scalar_traits<R>::lt(R(0), q) && scalar_traits<R>::lt(q, R(1))))
            throw std::invalid_argument("tail: geometric ratio must lie in (0, 1)");
        TailDescriptor t;
        t.kind = Kind::Geometric;
        t.ratio = q;
        t.coefficient = coeff;
        return t;
    }
    static TailDescriptor user_bound(std::function<R(long)> f, std::function<R(long)> env = nullptr) {
        TailDescriptor t;
        t.kind = Kind::UserBound;
        t.remainder = std::move(f);
        t.envelope = std::move(env);
        return t;
    }

    bool applicable() const { return kind != Kind::None; }

    // Envelope check for geometric tails: each observed (label, term) pair
    // must sit under coefficient * ratio^label.
    bool validates(const std::vector<std::pair<long, R>>& terms) const {
        if (kind == Kind::None) return false;
        for (const auto& [l, v] : terms) {
            if (kind == Kind::Geometric) {
                if (!scalar_traits<R>::le(v, coefficient * scalar_pow(ratio, l))) return false;
            } else if (envelope) {
                if (!scalar_traits<R>::le(v, envelope(l))) return false;
            }
        }
        return true;
    }

    R tail_bound(long last_label) const {
        switch (kind) {
            case Kind::Geometric:
                return coefficient * scalar_pow(ratio, last_label + 1) / (R(1) - ratio);
            case Kind::UserBound:
                return remainder(last_label);
            default:
                throw std::logic_error("tail_bound: no descriptor");
        }
    }
};

template <typename R>
using TailMap = std::map<ConditionKind, TailDescriptor<R>>;

}  // namespace gtiv
