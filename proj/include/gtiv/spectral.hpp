#pragma once

// Classification of matrices as expanding / expanding on a subspace, plus
// singular-value diagnostics.  The exact path (rational matrices, d <= 3)
// never tests |lambda| = 1 numerically: unit-circle eigenvalues are located
// through the common factors of the minimal polynomial and its reciprocal,
// and root moduli are compared to 1 by Sturm counts on rational intervals.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtiv/linalg.hpp"
#include "gtiv/poly.hpp"
#include "gtiv/scalar.hpp"

namespace gtiv {

enum class Expansiveness { Expanding, ExpandingOnSubspaceOnly, NotExpandingOnSubspace };

inline std::string to_string(Expansiveness e) {
    switch (e) {
        case Expansiveness::Expanding: return "Expanding";
        case Expansiveness::ExpandingOnSubspaceOnly: return "ExpandingOnSubspaceOnly";
        default: return "NotExpandingOnSubspace";
    }
}

struct EigenvalueInfo {
    std::string description;   // exact value, or a conjugate-pair / factor description
    double modulus = 0;        // approximate modulus, for display only
    int multiplicity = 1;
    bool conjugate_pair = false;
};

struct FactorInfo {
    std::string factor;        // minimal-polynomial factor, exact mode only
    int exponent = 1;
    bool unit_circle = false;
};

struct SpectralReport {
    std::vector<EigenvalueInfo> eigenvalues;
    std::vector<FactorInfo> min_poly_factors;  // exact mode only
    Expansiveness classification = Expansiveness::NotExpandingOnSubspace;
    bool exact = false;        // certainty: exact vs tolerance-based
    bool cond_all_ge_one = false;
    bool cond_some_gt_one = false;
    bool cond_unit_semisimple = false;
};

namespace detail {

constexpr double kEpsSpec = 1e-8;

// All rational roots of a rational polynomial, with multiplicities.
inline std::vector<std::pair<Rat, int>> rational_roots(Poly p) {
    std::vector<std::pair<Rat, int>> out;
    if (p.degree() <= 0) return out;
    // Clear denominators to get integer coefficients.
    BigInt lcm = 1;
    for (const auto& c : p.c) {
        BigInt den = boost::multiprecision::denominator(c);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    std::vector<BigInt> ic;
    for (const auto& c : p.c) ic.push_back(boost::multiprecision::numerator(c * Rat(lcm)));
    auto divisors = [](BigInt n) {
        if (n < 0) n = -n;
        std::vector<BigInt> ds;
        for (BigInt i = 1; i * i <= n; ++i)
            if (n % i == 0) {
                ds.push_back(i);
                if (i * i != n) ds.push_back(n / i);
            }
        return ds;
    };
    BigInt a0 = ic.front(), an = ic.back();
    if (a0 == 0) out.emplace_back(Rat(0), 0);
    for (const BigInt& num : divisors(a0 == 0 ? BigInt(1) : a0))
        for (const BigInt& den : divisors(an))
            for (int s : {1, -1}) {
                Rat cand = Rat(num * s) / Rat(den);
                if (p.eval(cand) == 0) {
                    bool seen = false;
                    for (auto& [r, m] : out) seen = seen || r == cand;
                    if (!seen) out.emplace_back(cand, 0);
                }
            }
    for (auto& [r, m] : out) m = factor_exponent(Poly::monomial_minus(r), p);
    return out;
}

inline Rat abs_rat(const Rat& v) { return v < 0 ? Rat(-v) : v; }

// Cauchy bound on root moduli of a monic polynomial.
inline Rat cauchy_bound(const Poly& p) {
    Poly m = p.monic();
    Rat b(0);
    for (int i = 0; i < m.degree(); ++i) b = std::max(b, abs_rat(m.c[static_cast<std::size_t>(i)]));
    return b + 2;
}

inline std::string poly_string(const Poly& p) {
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const Rat& c = p.c[static_cast<std::size_t>(i)];
        if (c == 0 && p.degree() > 0) continue;
        Rat a = abs_rat(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        if (i == 0 || a != 1) os << format_scalar(a);
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

// Moduli placement of the roots of an irreducible-over-Q quadratic or cubic
// with no rational roots: returns (#roots with modulus < 1, #roots with
// modulus > 1, #roots with modulus = 1), counting a conjugate pair as one.
struct ModulusCount {
    int below = 0, above = 0, on = 0;
};

inline ModulusCount irreducible_modulus_count(const Poly& q) {
    ModulusCount mc;
    Poly m = q.monic();
    if (m.degree() == 2) {
        Rat b = m.c[1], c = m.c[0];
        if (b * b < 4 * c) {
            // Conjugate pair, |lambda|^2 = c.
            if (c < 1) mc.below = 1;
            else if (c > 1) mc.above = 1;
            else mc.on = 1;
        } else {
            // Two irrational real roots; no rational root, so none at +-1.
            int inside = count_real_roots(m, Rat(-1), Rat(1));
            Rat B = cauchy_bound(m);
            mc.below = inside;
            mc.above = count_real_roots(m, Rat(1), B) + count_real_roots(m, -B, Rat(-1));
        }
        return mc;
    }
    if (m.degree() != 3) throw std::logic_error("modulus count: unexpected degree");
    Rat B = cauchy_bound(m);
    int real_roots = count_real_roots(m, -B, B);
    int inside = count_real_roots(m, Rat(-1), Rat(1));
    mc.below = inside;
    mc.above = count_real_roots(m, Rat(1), B) + count_real_roots(m, -B, Rat(-1));
    if (real_roots == 1) {
        // One real root r and a conjugate pair with |mu|^2 = |c0| / |r|;
        // an irreducible cubic cannot have unit-circle roots, so comparing
        // |r| with |c0| decides the pair's side of the circle.
        Rat a0 = abs_rat(m.c[0]);
        int r_inside_a0 = count_real_roots(m, -a0, a0);
        if (r_inside_a0 > 0) mc.above += 1;  // |r| < |c0| => |mu| > 1
        else mc.below += 1;
    }
    return mc;
}

}  // namespace detail

// Exact path: rational matrix, dimension <= 3.
inline SpectralReport classify_expanding(const Mat<Rat>& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("classify_expanding: matrix must be square");
    if (A.rows() > 3) throw std::invalid_argument("classify_expanding: exact path supports dimension <= 3");
    if (determinant(A) == 0) throw std::invalid_argument("classify_expanding: matrix must be invertible");

    SpectralReport rep;
    rep.exact = true;
    Poly chi = characteristic_polynomial(A);
    Poly mu = minimal_polynomial(A);

    // --- unit-circle factors of the minimal polynomial -------------------
    // |lambda| = 1 forces lambda and 1/lambda to be roots together, so all
    // unit-circle factors divide gcd(mu, reciprocal(mu)).
    Poly rec = mu.reciprocal();
    Poly g = rec.degree() >= 1 ? poly_gcd(mu, rec) : Poly::constant(Rat(1));
    std::vector<Poly> unit_factors;
    for (int s : {1, -1}) {
        Poly lin = Poly::monomial_minus(Rat(s));
        if (divides(lin, mu)) {
            unit_factors.push_back(lin);
            while (divides(lin, g)) g = divmod(g, lin).first;
        }
    }
    if (g.degree() == 2) {
        Poly q = g.monic();
        // A reciprocal quadratic has constant term 1; it sits on the unit
        // circle exactly when its roots are non-real.
        if (q.c[0] == 1 && q.c[1] * q.c[1] < 4) unit_factors.push_back(q);
    }
    bool cond_c = true;
    for (const auto& f : unit_factors) cond_c = cond_c && factor_exponent(f, mu) == 1;

    // --- factor report for the minimal polynomial ------------------------
    auto is_unit_factor = [&](const Poly& f) {
        for (const auto& u : unit_factors) {
            Poly d = f.monic() - u.monic();
            if (d.is_zero()) return true;
        }
        return false;
    };
    {
        Poly rest = mu.monic();
        for (const auto& [r, m] : detail::rational_roots(mu)) {
            Poly lin = Poly::monomial_minus(r);
            FactorInfo fi{detail::poly_string(lin), m, is_unit_factor(lin)};
            rep.min_poly_factors.push_back(fi);
            for (int i = 0; i < m; ++i) rest = divmod(rest, lin).first;
        }
        if (rest.degree() >= 1)
            rep.min_poly_factors.push_back(FactorInfo{detail::poly_string(rest), 1, is_unit_factor(rest)});
    }

    // --- eigenvalue moduli from the characteristic polynomial ------------
    int below = 0, above = 0, on = 0;
    Poly rest = chi.monic();
    for (const auto& [r, m] : detail::rational_roots(chi)) {
        Poly lin = Poly::monomial_minus(r);
        for (int i = 0; i < m; ++i) rest = divmod(rest, lin).first;
        Rat a = detail::abs_rat(r);
        if (a < 1) ++below;
        else if (a > 1) ++above;
        else ++on;
        EigenvalueInfo ev;
        ev.description = format_scalar(r);
        ev.modulus = std::abs(static_cast<double>(r));
        ev.multiplicity = m;
        rep.eigenvalues.push_back(ev);
    }
    if (rest.degree() >= 2) {
        auto mc = detail::irreducible_modulus_count(rest);
        below += mc.below;
        above += mc.above;
        on += mc.on;
        EigenvalueInfo ev;
        ev.description = "roots of " + detail::poly_string(rest);
        ev.multiplicity = rest.degree();
        ev.conjugate_pair = true;
        ev.modulus = 0;
        rep.eigenvalues.push_back(ev);
    }

    // Unit-circle roots found via the factor analysis; real-root Sturm
    // counts in (-1, 1) exclude the endpoints, so "on" from rational roots
    // plus unit factors is authoritative.
    bool cond_a = below == 0;
    bool cond_b = above > 0;
    bool all_above = below == 0 && on == 0 && above > 0;

    rep.cond_all_ge_one = cond_a;
    rep.cond_some_gt_one = cond_b;
    rep.cond_unit_semisimple = cond_c;
    if (all_above)
        rep.classification = Expansiveness::Expanding;
    else if (cond_a && cond_b && cond_c)
        rep.classification = Expansiveness::ExpandingOnSubspaceOnly;
    else
        rep.classification = Expansiveness::NotExpandingOnSubspace;
    return rep;
}

// Float path: eigenvalues from a Schur decomposition, tolerance-based.
inline SpectralReport classify_expanding(const Mat<double>& A) {
    using CMat = Eigen::MatrixXcd;
    const auto n = static_cast<Eigen::Index>(A.rows());
    if (A.rows() != A.cols()) throw std::invalid_argument("classify_expanding: matrix must be square");
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            M(i, j) = A(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (std::abs(M.determinant()) < detail::kEpsSpec)
        throw std::invalid_argument("classify_expanding: matrix must be invertible");

    Eigen::ComplexEigenSolver<CMat> es(M.cast<std::complex<double>>());
    auto vals = es.eigenvalues();

    SpectralReport rep;
    rep.exact = true;  // downgraded below if anything is near the circle
    bool cond_a = true, cond_b = false, all_above = true, cond_c = true;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        std::complex<double> l = vals(i);
        int mult = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!used[static_cast<std::size_t>(j)] && std::abs(vals(j) - l) < 1e-6) {
                used[static_cast<std::size_t>(j)] = true;
                ++mult;
            }
        double m = std::abs(l);
        if (std::abs(m - 1.0) < detail::kEpsSpec) {
            rep.exact = false;
            // Treat as unit-modulus; Jordan order one <=> geometric
            // multiplicity equals algebraic multiplicity.
            CMat shifted = M.cast<std::complex<double>>() - l * CMat::Identity(n, n);
            Eigen::FullPivLU<CMat> lu(shifted);
            lu.setThreshold(1e-6);
            auto geo = n - lu.rank();
            if (geo < mult) cond_c = false;
            all_above = false;
        } else if (m < 1.0) {
            cond_a = false;
            all_above = false;
        } else {
            cond_b = true;
        }
        EigenvalueInfo ev;
        std::ostringstream os;
        if (std::abs(l.imag()) < detail::kEpsSpec) os << l.real();
        else os << l.real() << (l.imag() < 0 ? " - " : " + ") << std::abs(l.imag()) << "i";
        ev.description = os.str();
        ev.modulus = m;
        ev.multiplicity = mult;
        ev.conjugate_pair = std::abs(l.imag()) >= detail::kEpsSpec;
        rep.eigenvalues.push_back(ev);
    }
    rep.cond_all_ge_one = cond_a;
    rep.cond_some_gt_one = cond_b;
    rep.cond_unit_semisimple = cond_c;
    if (cond_a && cond_b && all_above)
        rep.classification = Expansiveness::Expanding;
    else if (cond_a && cond_b && cond_c)
        rep.classification = Expansiveness::ExpandingOnSubspaceOnly;
    else
        rep.classification = Expansiveness::NotExpandingOnSubspace;
    return rep;
}

// sigma_max(C) / sigma_min(C), from the eigenvalues of C^T C.
template <typename R>
double singular_ratio(const Mat<R>& C) {
    const auto n = static_cast<Eigen::Index>(C.rows());
    if (C.rows() != C.cols()) throw std::invalid_argument("singular_ratio: matrix must be square");
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            M(i, j) = static_cast<double>(C(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() * M);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0) throw std::invalid_argument("singular_ratio: matrix must be invertible");
    return std::sqrt(hi / lo);
}

template <typename R>
struct SingularFamilyReport {
    bool within_bound = false;
    double max_ratio = 0;
    std::size_t argmax = 0;
};

// True iff every matrix in the family has condition number at most `bound`;
// a true result certifies the uniform counting estimate for the induced
// subgroup family.
template <typename R>
SingularFamilyReport<R> uce_guarantee_by_singular(const std::vector<Mat<R>>& family, double bound) {
    SingularFamilyReport<R> rep;
    for (std::size_t i = 0; i < family.size(); ++i) {
        double r = singular_ratio(family[i]);
        if (r > rep.max_ratio) { rep.max_ratio = r; rep.argmax = i; }
    }
    rep.within_bound = !family.empty() && rep.max_ratio <= bound + 1e-12;
    return rep;
}

}  // namespace gtiv
