#pragma once

#include <algorithm>
#include <vector>

#include "linalg.hpp"
#include "scalar.hpp"

namespace gtiv {

/// Univariate polynomial over Q, coefficients stored low degree first.
/// Only the exact spectral path needs these, so the type is not templated.
struct Poly {
    std::vector<Rat> c;  // c[k] is the coefficient of x^k

    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const Rat& v) { return Poly({v}); }
    static Poly monomial_minus(const Rat& root) { return Poly({-root, Rat(1)}); }  // x - root

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c.empty(); }
    const Rat& lead() const { return c.back(); }

    Rat eval(const Rat& x) const {
        Rat v(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        return v;
    }

    Poly monic() const {
        Poly p = *this;
        if (p.is_zero()) return p;
        Rat l = p.lead();
        for (auto& v : p.c) v /= l;
        return p;
    }

    /// Coefficient reversal; roots map to their reciprocals.
    Poly reciprocal() const {
        Poly p = *this;
        std::reverse(p.c.begin(), p.c.end());
        p.trim();
        return p;
    }

    Poly derivative() const {
        Poly d;
        for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * Rat(static_cast<long>(k)));
        d.trim();
        return d;
    }

    bool operator==(const Poly& o) const { return c == o.c; }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    Poly s;
    s.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) s.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) s.c[i] += b.c[i];
    s.trim();
    return s;
}

inline Poly operator-(const Poly& a, const Poly& b) {
    Poly s;
    s.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) s.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) s.c[i] -= b.c[i];
    s.trim();
    return s;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly p;
    p.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) p.c[i + j] += a.c[i] * b.c[j];
    p.trim();
    return p;
}

inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly rem = a, quot;
    const int db = b.degree();
    if (a.degree() >= db) quot.c.assign(a.degree() - db + 1, Rat(0));
    while (!rem.is_zero() && rem.degree() >= db) {
        int shift = rem.degree() - db;
        Rat f = rem.lead() / b.lead();
        quot.c[shift] = f;
        for (int i = 0; i <= db; ++i) rem.c[shift + i] -= f * b.c[i];
        rem.trim();
    }
    quot.trim();
    return {quot, rem};
}

inline bool divides(const Poly& d, const Poly& a) { return divmod(a, d).second.is_zero(); }

/// Exponent of factor f in p (largest e with f^e | p).
inline int factor_exponent(const Poly& f, Poly p) {
    int e = 0;
    while (!p.is_zero() && p.degree() >= f.degree()) {
        auto [q, r] = divmod(p, f);
        if (!r.is_zero()) break;
        ++e;
        p = q;
    }
    return e;
}

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = b;
        b = r;
    }
    return a.monic();
}

inline Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 0) return p.monic();
    return divmod(p, poly_gcd(p, p.derivative())).first.monic();
}

namespace detail {
inline int sign_of(const Rat& v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }
}

/// Number of distinct real roots of p in the open interval (lo, hi),
/// counted by a Sturm sequence. Roots exactly at lo or hi are excluded.
inline int count_real_roots(const Poly& p, const Rat& lo, const Rat& hi) {
    Poly sq = squarefree_part(p);
    if (sq.degree() <= 0) return 0;
    // Divide out endpoint roots so the Sturm endpoints are regular.
    while (sq.degree() > 0 && sq.eval(lo) == 0) sq = divmod(sq, Poly::monomial_minus(lo)).first;
    while (sq.degree() > 0 && sq.eval(hi) == 0) sq = divmod(sq, Poly::monomial_minus(hi)).first;
    if (sq.degree() <= 0) return 0;
    std::vector<Poly> chain{sq, sq.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        Poly r = divmod(chain[chain.size() - 2], chain.back()).second;
        for (auto& v : r.c) v = -v;
        r.trim();
        if (r.is_zero()) break;
        chain.push_back(r);
    }
    auto variations = [&](const Rat& x) {
        int count = 0, last = 0;
        for (const auto& q : chain) {
            int s = detail::sign_of(q.eval(x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++count;
            last = s;
        }
        return count;
    };
    return variations(lo) - variations(hi);
}

/// Faddeev-LeVerrier characteristic polynomial det(xI - A), monic.
template <class R>
Poly characteristic_polynomial(const Mat<R>& a) {
    static_assert(std::is_same_v<R, Rat>, "characteristic polynomial requires exact scalars");
    const std::size_t n = a.rows();
    std::vector<Rat> coeff(n + 1, Rat(0));
    coeff[n] = 1;
    Mat<Rat> m = Mat<Rat>::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        Rat ck = -m.trace() / Rat(static_cast<long>(k));
        coeff[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += ck;
    }
    return Poly(coeff);
}

/// Minimal polynomial via the first linear dependency among vec(A^k).
inline Poly minimal_polynomial(const Mat<Rat>& a) {
    const std::size_t n = a.rows();
    const std::size_t dim = n * n;
    std::vector<std::vector<Rat>> powers;  // vec(A^k)
    Mat<Rat> p = Mat<Rat>::identity(n);
    for (std::size_t deg = 0; deg <= n; ++deg) {
        std::vector<Rat> v(dim);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v[i * n + j] = p(i, j);
        // Try to express v as a combination of the stored powers.
        if (!powers.empty()) {
            Mat<Rat> sys(dim, powers.size());
            for (std::size_t col = 0; col < powers.size(); ++col)
                for (std::size_t row = 0; row < dim; ++row) sys(row, col) = powers[col][row];
            // Least-squares-free exact solve: pick pivot rows by elimination.
            Mat<Rat> aug(dim, powers.size() + 1);
            for (std::size_t row = 0; row < dim; ++row) {
                for (std::size_t col = 0; col < powers.size(); ++col) aug(row, col) = sys(row, col);
                aug(row, powers.size()) = v[row];
            }
            // Row reduce; consistent iff no pivot appears in the last column.
            std::size_t r = 0;
            std::vector<long> pivot_col(powers.size(), -1);
            for (std::size_t col = 0; col < powers.size() && r < dim; ++col) {
                std::size_t piv = r;
                while (piv < dim && aug(piv, col) == 0) ++piv;
                if (piv == dim) continue;
                if (piv != r)
                    for (std::size_t j = 0; j <= powers.size(); ++j) std::swap(aug(r, j), aug(piv, j));
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i == r || aug(i, col) == 0) continue;
                    Rat f = aug(i, col) / aug(r, col);
                    for (std::size_t j = col; j <= powers.size(); ++j) aug(i, j) -= f * aug(r, j);
                }
                pivot_col[col] = static_cast<long>(r);
                ++r;
            }
            bool consistent = true;
            for (std::size_t i = r; i < dim; ++i)
                if (aug(i, powers.size()) != 0) { consistent = false; break; }
            if (consistent) {
                std::vector<Rat> coeffs(deg + 1, Rat(0));
                coeffs[deg] = 1;
                for (std::size_t col = 0; col < powers.size(); ++col)
                    if (pivot_col[col] >= 0)
                        coeffs[col] = -aug(static_cast<std::size_t>(pivot_col[col]), powers.size()) /
                                      aug(static_cast<std::size_t>(pivot_col[col]), col);
                return Poly(coeffs);
            }
        }
        powers.push_back(v);
        p = p * a;
    }
    throw std::logic_error("minimal_polynomial: no dependency up to degree n");
}

}  // namespace gtiv
