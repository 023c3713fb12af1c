#pragma once

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "linalg.hpp"
#include "scalar.hpp"

namespace gtiv {

/// Closed axis-aligned box. Half-open sets from the source material are
/// stored closed; every integral here is insensitive to boundaries.
template <class R>
struct Box {
    Vec<R> lo, hi;

    Box() = default;
    Box(Vec<R> l, Vec<R> h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.size() != hi.size()) throw std::invalid_argument("box: lo/hi dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!scalar_traits<R>::le(lo[i], hi[i]))
                throw std::invalid_argument("box: lo > hi");
    }
    static Box cube(std::size_t d, const R& l, const R& h) {
        return Box(Vec<R>(d, l), Vec<R>(d, h));
    }

    std::size_t dim() const { return lo.size(); }

    R volume() const {
        R v(1);
        for (std::size_t i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    bool contains(const Vec<R>& x) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (!scalar_traits<R>::le(lo[i], x[i]) || !scalar_traits<R>::le(x[i], hi[i])) return false;
        return true;
    }

    bool contains_box(const Box& b) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (!scalar_traits<R>::le(lo[i], b.lo[i]) || !scalar_traits<R>::le(b.hi[i], hi[i]))
                return false;
        return true;
    }

    Box translated(const Vec<R>& t) const {
        Box b = *this;
        for (std::size_t i = 0; i < dim(); ++i) {
            b.lo[i] += t[i];
            b.hi[i] += t[i];
        }
        return b;
    }

    bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

/// Componentwise intersection; empty when any axis degenerates.
template <class R>
std::optional<Box<R>> intersect_boxes(const Box<R>& a, const Box<R>& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("intersect_boxes: dimension mismatch");
    Box<R> r = a;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        r.lo[i] = std::max(a.lo[i], b.lo[i], [](const R& x, const R& y) { return x < y; });
        r.hi[i] = std::min(a.hi[i], b.hi[i], [](const R& x, const R& y) { return x < y; });
        if (!scalar_traits<R>::le(r.lo[i], r.hi[i])) return std::nullopt;
    }
    return r;
}

/// The set K - K; controls which lattice translates can meet K at all.
template <class R>
Box<R> difference_set(const Box<R>& v) {
    Box<R> d = v;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        d.lo[i] = v.lo[i] - v.hi[i];
        d.hi[i] = v.hi[i] - v.lo[i];
    }
    return d;
}

template <class R>
R box_overlap_volume(const Box<R>& a, const Box<R>& b) {
    auto c = intersect_boxes(a, b);
    return c ? c->volume() : R(0);
}

template <class R>
struct Halfspace {
    Vec<R> normal;  // <normal, x> <= offset
    R offset;
};

/// Bounded convex polytope in dimension 1-3, kept as halfspaces plus the
/// derived vertex set. Vertices are recomputed on every clip; bodies stay
/// tiny here (a box image under a matrix, clipped a few times).
template <class R>
class ConvexPolytope {
public:
    static ConvexPolytope from_box(const Box<R>& b) {
        check_dim(b.dim());
        std::vector<Halfspace<R>> hs;
        for (std::size_t i = 0; i < b.dim(); ++i) {
            Vec<R> n(b.dim(), R(0));
            n[i] = R(1);
            hs.push_back({n, b.hi[i]});
            n[i] = R(-1);
            hs.push_back({n, -b.lo[i]});
        }
        ConvexPolytope p;
        p.dim_ = b.dim();
        p.halfspaces_ = std::move(hs);
        p.recompute_vertices();
        return p;
    }

    /// Builds from halfspaces; throws on unbounded input.
    static ConvexPolytope from_halfspaces(std::size_t dim, std::vector<Halfspace<R>> hs) {
        check_dim(dim);
        ConvexPolytope p;
        p.dim_ = dim;
        p.halfspaces_ = std::move(hs);
        if (!p.is_bounded()) throw std::domain_error("polytope: unbounded halfspace set");
        p.recompute_vertices();
        return p;
    }

    std::size_t dim() const { return dim_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<Vec<R>>& vertices() const { return vertices_; }
    const std::vector<Halfspace<R>>& halfspaces() const { return halfspaces_; }

    bool contains(const Vec<R>& x) const {
        for (const auto& h : halfspaces_)
            if (!scalar_traits<R>::le(dot(h.normal, x), h.offset)) return false;
        return true;
    }

    ConvexPolytope clipped(const Halfspace<R>& h) const {
        ConvexPolytope p = *this;
        p.halfspaces_.push_back(h);
        p.recompute_vertices();
        return p;
    }

    ConvexPolytope intersect_box(const Box<R>& b) const {
        ConvexPolytope p = *this;
        for (std::size_t i = 0; i < dim_; ++i) {
            Vec<R> n(dim_, R(0));
            n[i] = R(1);
            p.halfspaces_.push_back({n, b.hi[i]});
            n[i] = R(-1);
            p.halfspaces_.push_back({n, -b.lo[i]});
        }
        p.recompute_vertices();
        return p;
    }

    /// Image {Ax : x in p}. Halfspaces map by A^{-T}, vertices by A.
    ConvexPolytope mapped(const Mat<R>& a) const {
        Mat<R> aInvT = inverse(a).transpose();
        ConvexPolytope p;
        p.dim_ = dim_;
        for (const auto& h : halfspaces_) p.halfspaces_.push_back({aInvT * h.normal, h.offset});
        for (const auto& v : vertices_) p.vertices_.push_back(a * v);
        return p;
    }

    ConvexPolytope translated(const Vec<R>& t) const {
        ConvexPolytope p;
        p.dim_ = dim_;
        for (const auto& h : halfspaces_) {
            R shift(0);
            for (std::size_t i = 0; i < dim_; ++i) shift += h.normal[i] * t[i];
            p.halfspaces_.push_back({h.normal, h.offset + shift});
        }
        for (const auto& v : vertices_) {
            Vec<R> w = v;
            for (std::size_t i = 0; i < dim_; ++i) w[i] += t[i];
            p.vertices_.push_back(std::move(w));
        }
        return p;
    }

    Box<R> bounding_box() const {
        if (empty()) throw std::domain_error("bounding_box of empty polytope");
        Vec<R> lo = vertices_[0], hi = vertices_[0];
        for (const auto& v : vertices_)
            for (std::size_t i = 0; i < dim_; ++i) {
                if (v[i] < lo[i]) lo[i] = v[i];
                if (hi[i] < v[i]) hi[i] = v[i];
            }
        return Box<R>(lo, hi);
    }

    /// Exact Lebesgue volume via fan triangulation from the vertex centroid.
    /// Lower-dimensional bodies report zero.
    R volume() const {
        if (vertices_.size() < dim_ + 1) return R(0);
        Vec<R> c(dim_, R(0));
        for (const auto& v : vertices_)
            for (std::size_t i = 0; i < dim_; ++i) c[i] += v[i];
        for (std::size_t i = 0; i < dim_; ++i) c[i] /= R(static_cast<long>(vertices_.size()));

        if (dim_ == 1) {
            R lo = vertices_[0][0], hi = vertices_[0][0];
            for (const auto& v : vertices_) {
                if (v[0] < lo) lo = v[0];
                if (hi < v[0]) hi = v[0];
            }
            return hi - lo;
        }
        if (dim_ == 2) {
            auto ring = order_polygon(vertices_, c);
            R area(0);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const auto& p = ring[i];
                const auto& q = ring[(i + 1) % ring.size()];
                area += p[0] * q[1] - q[0] * p[1];
            }
            area /= R(2);
            return scalar_traits<R>::abs(area);
        }
        // d == 3: sum cones over facets, each facet fanned around its centroid.
        // Positively proportional halfspaces describe the same facet plane;
        // visit each plane once or its cone is counted twice.
        std::vector<Halfspace<R>> planes;
        for (const auto& h : halfspaces_) {
            std::size_t piv = 0;
            while (piv < 3 && scalar_traits<R>::is_zero(h.normal[piv])) ++piv;
            if (piv == 3) continue;
            R t = R(1) / scalar_traits<R>::abs(h.normal[piv]);
            Halfspace<R> canon{{h.normal[0] * t, h.normal[1] * t, h.normal[2] * t}, h.offset * t};
            bool dup = false;
            for (const auto& q : planes) {
                bool same = scalar_traits<R>::eq(q.offset, canon.offset);
                for (std::size_t i = 0; i < 3 && same; ++i)
                    same = scalar_traits<R>::eq(q.normal[i], canon.normal[i]);
                if (same) { dup = true; break; }
            }
            if (!dup) planes.push_back(canon);
        }
        R vol(0);
        for (const auto& h : planes) {
            std::vector<Vec<R>> face;
            for (const auto& v : vertices_)
                if (scalar_traits<R>::eq(dot(h.normal, v), h.offset)) face.push_back(v);
            dedupe(face);
            if (face.size() < 3) continue;
            Vec<R> fc(3, R(0));
            for (const auto& v : face)
                for (int i = 0; i < 3; ++i) fc[i] += v[i];
            for (int i = 0; i < 3; ++i) fc[i] /= R(static_cast<long>(face.size()));
            auto ring = order_face(face, fc, h.normal);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const auto& p = ring[i];
                const auto& q = ring[(i + 1) % ring.size()];
                // Signed volume of tetrahedron (c, fc, p, q).
                Vec<R> a{fc[0] - c[0], fc[1] - c[1], fc[2] - c[2]};
                Vec<R> b{p[0] - c[0], p[1] - c[1], p[2] - c[2]};
                Vec<R> d{q[0] - c[0], q[1] - c[1], q[2] - c[2]};
                R det = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) +
                        a[2] * (b[0] * d[1] - b[1] * d[0]);
                vol += scalar_traits<R>::abs(det);
            }
        }
        return vol / R(6);
    }

private:
    static void check_dim(std::size_t d) {
        if (d < 1 || d > 3) throw std::invalid_argument("polytope: dimension must be 1..3");
    }

    static void dedupe(std::vector<Vec<R>>& pts) {
        std::vector<Vec<R>> out;
        for (const auto& p : pts) {
            bool dup = false;
            for (const auto& q : out) {
                bool same = true;
                for (std::size_t i = 0; i < p.size(); ++i)
                    if (!scalar_traits<R>::eq(p[i], q[i])) { same = false; break; }
                if (same) { dup = true; break; }
            }
            if (!dup) out.push_back(p);
        }
        pts = std::move(out);
    }

    /// Orders coplanar points counterclockwise around centre, comparing by
    /// half-plane then cross product; no transcendental calls.
    static std::vector<Vec<R>> order_polygon(std::vector<Vec<R>> pts, const Vec<R>& centre) {
        dedupe(pts);
        auto cmp = [&](const Vec<R>& a, const Vec<R>& b) {
            R ax = a[0] - centre[0], ay = a[1] - centre[1];
            R bx = b[0] - centre[0], by = b[1] - centre[1];
            int ha = (ay > 0 || (ay == 0 && ax > 0)) ? 0 : 1;
            int hb = (by > 0 || (by == 0 && bx > 0)) ? 0 : 1;
            if (ha != hb) return ha < hb;
            return ax * by - ay * bx > 0;
        };
        std::sort(pts.begin(), pts.end(), cmp);
        return pts;
    }

    static std::vector<Vec<R>> order_face(std::vector<Vec<R>> pts, const Vec<R>& centre,
                                          const Vec<R>& normal) {
        // Project onto the two coordinate axes least aligned with the normal.
        int drop = 0;
        R best = scalar_traits<R>::abs(normal[0]);
        for (int i = 1; i < 3; ++i) {
            R a = scalar_traits<R>::abs(normal[i]);
            if (best < a) { best = a; drop = i; }
        }
        int u = (drop + 1) % 3, v = (drop + 2) % 3;
        std::vector<Vec<R>> flat;
        for (const auto& p : pts) flat.push_back({p[u], p[v], p[0], p[1], p[2]});
        Vec<R> c2{centre[u], centre[v]};
        auto cmp = [&](const Vec<R>& a, const Vec<R>& b) {
            R ax = a[0] - c2[0], ay = a[1] - c2[1];
            R bx = b[0] - c2[0], by = b[1] - c2[1];
            int ha = (ay > 0 || (ay == 0 && ax > 0)) ? 0 : 1;
            int hb = (by > 0 || (by == 0 && bx > 0)) ? 0 : 1;
            if (ha != hb) return ha < hb;
            return ax * by - ay * bx > 0;
        };
        std::sort(flat.begin(), flat.end(), cmp);
        std::vector<Vec<R>> out;
        for (const auto& f : flat) out.push_back({f[2], f[3], f[4]});
        return out;
    }

    /// Boundedness of the halfspace system: the recession cone
    /// {y : <n_i, y> <= 0} must be {0}. Normals of rank < d give a line;
    /// otherwise the cone is pointed and its extreme rays lie on (d-1)-subsets.
    bool is_bounded() const {
        const std::size_t m = halfspaces_.size();
        Mat<R> normals(m, dim_);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < dim_; ++j) normals(i, j) = halfspaces_[i].normal[j];
        if (rank(normals) < dim_) return false;
        auto feasible_ray = [&](Vec<R> y) {
            bool nonzero = false;
            for (const auto& v : y)
                if (!scalar_traits<R>::is_zero(v)) { nonzero = true; break; }
            if (!nonzero) return false;
            for (const auto& h : halfspaces_)
                if (scalar_traits<R>::lt(R(0), dot(h.normal, y))) return false;
            return true;
        };
        if (dim_ == 1) {
            Vec<R> plus{R(1)}, minus{R(-1)};
            return !feasible_ray(plus) && !feasible_ray(minus);
        }
        if (dim_ == 2) {
            for (const auto& h : halfspaces_) {
                Vec<R> y{h.normal[1], -h.normal[0]};
                Vec<R> yn{-h.normal[1], h.normal[0]};
                if (feasible_ray(y) || feasible_ray(yn)) return false;
            }
            return true;
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const auto& a = halfspaces_[i].normal;
                const auto& b = halfspaces_[j].normal;
                Vec<R> y{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                         a[0] * b[1] - a[1] * b[0]};
                Vec<R> yn{-y[0], -y[1], -y[2]};
                if (feasible_ray(y) || feasible_ray(yn)) return false;
            }
        return true;
    }

    void recompute_vertices() {
        vertices_.clear();
        const std::size_t m = halfspaces_.size();
        std::vector<std::size_t> idx(dim_);
        auto try_subset = [&](const std::vector<std::size_t>& sel) {
            Mat<R> a(dim_, dim_);
            Vec<R> b(dim_);
            for (std::size_t i = 0; i < dim_; ++i) {
                for (std::size_t j = 0; j < dim_; ++j) a(i, j) = halfspaces_[sel[i]].normal[j];
                b[i] = halfspaces_[sel[i]].offset;
            }
            auto x = solve(a, b);
            if (x && contains(*x)) vertices_.push_back(*x);
        };
        if (dim_ == 1) {
            for (std::size_t i = 0; i < m; ++i) try_subset({i});
        } else if (dim_ == 2) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j) try_subset({i, j});
        } else {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    for (std::size_t k = j + 1; k < m; ++k) try_subset({i, j, k});
        }
        dedupe(vertices_);
    }

    std::size_t dim_ = 0;
    std::vector<Halfspace<R>> halfspaces_;
    std::vector<Vec<R>> vertices_;
};

template <class R>
ConvexPolytope<R> map_body(const Mat<R>& a, const ConvexPolytope<R>& p) {
    return p.mapped(a);
}

template <class R>
struct Ball {
    Vec<R> center;
    R radius;

    std::size_t dim() const { return center.size(); }

    /// Membership only; balls are never integrated against.
    bool contains(const Vec<R>& x) const {
        R s(0);
        for (std::size_t i = 0; i < dim(); ++i) {
            R d = x[i] - center[i];
            s += d * d;
        }
        return scalar_traits<R>::le(s, radius * radius);
    }

    Box<R> bounding_box() const {
        Vec<R> lo = center, hi = center;
        for (std::size_t i = 0; i < dim(); ++i) {
            lo[i] -= radius;
            hi[i] += radius;
        }
        return Box<R>(lo, hi);
    }
};

/// The union of dyadic corner squares [-1+2^-n, -1+2^-(n-1)]^2 for n >= 1.
/// Its complement inside [-1,1]^2 is not a finite polytope union, but its
/// intersection volume with any box has a closed form: finitely many partial
/// squares plus a geometric tail once the squares fall fully inside.
template <class R>
struct DyadicStaircase2 {
    std::size_t dim() const { return 2; }

    static Box<R> square(int n) {
        R lo = R(-1) + pow2(-n);
        R hi = R(-1) + pow2(-(n - 1));
        return Box<R>({lo, lo}, {hi, hi});
    }

    bool contains(const Vec<R>& x) const {
        if (x.size() != 2) return false;
        if (!scalar_traits<R>::lt(R(-1), x[0]) || !scalar_traits<R>::lt(R(-1), x[1])) return false;
        if (scalar_traits<R>::lt(R(0), x[0]) || scalar_traits<R>::lt(R(0), x[1])) return false;
        for (int n = 1; n <= max_terms; ++n) {
            Box<R> s = square(n);
            if (s.contains(x)) return true;
            if (scalar_traits<R>::le(x[0], s.lo[0]) && scalar_traits<R>::le(x[1], s.lo[1]))
                continue;  // still closer to the corner than square n
            return false;
        }
        return false;
    }

    /// Exact Lebesgue measure of (staircase intersect b).
    R intersection_volume(const Box<R>& b) const {
        if (b.dim() != 2) throw std::invalid_argument("staircase volume: dimension mismatch");
        // The staircase lives in (-1, 0]^2; anything outside overlaps
        // in measure zero only.
        for (int i = 0; i < 2; ++i)
            if (!scalar_traits<R>::lt(R(-1), b.hi[i]) || !scalar_traits<R>::lt(b.lo[i], R(0)))
                return R(0);
        R total(0);
        for (int n = 1; n <= max_terms; ++n) {
            Box<R> s = square(n);
            // Everything from square n on lives inside this corner box.
            Box<R> rest({R(-1), R(-1)}, {s.hi[0], s.hi[1]});
            if (b.contains_box(rest)) {
                // Tail: sum_{m >= n} 4^-m = 4^-n * 4/3.
                total += pow4(-n) * Rfrac(4, 3);
                return total;
            }
            if (!intersect_boxes(b, rest)) return total;
            total += box_overlap_volume(s, b);
        }
        throw std::logic_error("staircase volume did not terminate");
    }

private:
    static constexpr int max_terms = 4096;
    static R pow2(int e) {
        R v(1), two(2);
        for (int i = 0; i < (e < 0 ? -e : e); ++i) v *= two;
        return e < 0 ? R(1) / v : v;
    }
    static R pow4(int e) { return pow2(2 * e); }
    static R Rfrac(long n, long d) { return R(n) / R(d); }
};

/// Finite union of membership-testable pieces; the shape every compact test
/// set in the checkers is allowed to take.
template <class R>
struct Region {
    using Part = std::variant<Box<R>, Ball<R>, ConvexPolytope<R>>;
    std::vector<Part> parts;

    Region() = default;
    Region(Box<R> b) { parts.emplace_back(std::move(b)); }
    Region(Ball<R> b) { parts.emplace_back(std::move(b)); }
    Region(ConvexPolytope<R> p) { parts.emplace_back(std::move(p)); }

    std::size_t dim() const {
        return std::visit([](const auto& p) { return p.dim(); }, parts.at(0));
    }

    bool contains(const Vec<R>& x) const {
        for (const auto& p : parts)
            if (std::visit([&](const auto& q) { return q.contains(x); }, p)) return true;
        return false;
    }

    Box<R> bounding_box() const {
        std::optional<Box<R>> out;
        for (const auto& p : parts) {
            Box<R> b = std::visit(
                [](const auto& q) -> Box<R> {
                    using T = std::decay_t<decltype(q)>;
                    if constexpr (std::is_same_v<T, Box<R>>)
                        return q;
                    else
                        return q.bounding_box();
                },
                p);
            if (!out) {
                out = b;
            } else {
                for (std::size_t i = 0; i < b.dim(); ++i) {
                    if (b.lo[i] < out->lo[i]) out->lo[i] = b.lo[i];
                    if (out->hi[i] < b.hi[i]) out->hi[i] = b.hi[i];
                }
            }
        }
        if (!out) throw std::domain_error("bounding_box of empty region");
        return *out;
    }
};

}  // namespace gtiv
