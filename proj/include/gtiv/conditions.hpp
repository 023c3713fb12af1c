#pragma once

// Evaluators for the six verifiable conditions on translation-invariant
// systems: local integrability, Calderon integrability, temperateness (plus
// its split-sum variant), the uniform counting estimate, roundedness, and
// the lattice counting estimate for matrix dilations.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtiv/geometry.hpp"
#include "gtiv/lattice.hpp"
#include "gtiv/profiles.hpp"
#include "gtiv/report.hpp"
#include "gtiv/spectral.hpp"

namespace gtiv {

template <typename R>
struct SystemEntry {
    long label = 0;        // index used for tails and growth plots
    std::string note;      // display mapping back to the source index
    CoCompactSubgroup<R> subgroup;
    EnergyProfile<R> profile;
};

template <typename R>
struct GTISystem {
    std::string name;
    int dim = 0;
    std::vector<SystemEntry<R>> entries;
    Box<R> working_box;
    TailMap<R> tails;
    std::vector<Box<R>> excluded;  // blind spot: window choices must avoid these
};

namespace detail {

template <typename R>
std::string box_string(const Box<R>& b) {
    std::ostringstream os;
    for (std::size_t i = 0; i < b.lo.size(); ++i)
        os << (i ? " x " : "") << "[" << format_scalar(b.lo[i]) << ", " << format_scalar(b.hi[i]) << "]";
    return os.str();
}

template <typename R>
void validate_window(const GTISystem<R>& s, const Box<R>& K) {
    if (static_cast<int>(K.lo.size()) != s.dim)
        throw std::invalid_argument("window: dimension mismatch");
    if (!s.working_box.contains_box(K))
        throw std::invalid_argument("window: K must lie inside the working box " + box_string(s.working_box));
    for (const auto& e : s.excluded)
        if (intersect_boxes(K, e)) throw std::invalid_argument("window: K intersects the excluded set");
}

template <typename R>
const TailDescriptor<R>& tail_for(const GTISystem<R>& s, ConditionKind k) {
    static const TailDescriptor<R> none{};
    auto it = s.tails.find(k);
    return it == s.tails.end() ? none : it->second;
}

}  // namespace detail

// Single local-integrability term: covol^{-1} * sum over annihilator points
// alpha in K - K of the density mass on K intersect (K - alpha).  Returns
// the term and the number of alpha contributing.
template <typename R>
std::pair<R, long long> lic_term(const CoCompactSubgroup<R>& G, const EnergyProfile<R>& p, const Box<R>& K) {
    PointLattice<R> L = annihilator(G);
    Region<R> diff;
    diff.parts.push_back(difference_set(K));
    auto alphas = enumerate_in_region(L, diff);
    R sum(0);
    long long contributing = 0;
    for (const auto& a : alphas) {
        Vec<R> neg(a.point.size());
        for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -a.point[i];
        auto overlap = intersect_boxes(K, K.translated(neg));
        if (!overlap) continue;
        R v = integrate(p, *overlap);
        if (!scalar_traits<R>::eq(v, R(0))) ++contributing;
        sum += v;
    }
    return {sum / covolume(G), contributing};
}

template <typename R>
ConditionReport<R> lic_partial(const GTISystem<R>& s, const Box<R>& K) {
    detail::validate_window(s, K);
    ConditionReport<R> rep;
    rep.kind = ConditionKind::LocalIntegrability;
    rep.test_set = detail::box_string(K);
    std::vector<std::pair<long, R>> terms;
    for (const auto& e : s.entries) {
        auto [term, cnt] = lic_term(e.subgroup, e.profile, K);
        rep.total += term;
        ConditionRow<R> row;
        row.label = e.label;
        row.note = e.note;
        row.term = term;
        row.partial = rep.total;
        row.count = cnt;
        row.ratio = static_cast<double>(rep.total);
        rep.rows.push_back(row);
        terms.emplace_back(e.label, term);
    }
    finalize_report(rep, detail::tail_for(s, ConditionKind::LocalIntegrability), terms, true);
    return rep;
}

template <typename R>
ConditionReport<R> calderon_partial(const GTISystem<R>& s, const Box<R>& K) {
    detail::validate_window(s, K);
    ConditionReport<R> rep;
    rep.kind = ConditionKind::Calderon;
    rep.test_set = detail::box_string(K);
    std::vector<std::pair<long, R>> terms;
    for (const auto& e : s.entries) {
        R term = integrate(e.profile, K) / covolume(e.subgroup);
        rep.total += term;
        ConditionRow<R> row;
        row.label = e.label;
        row.note = e.note;
        row.term = term;
        row.partial = rep.total;
        row.ratio = static_cast<double>(rep.total);
        rep.rows.push_back(row);
        terms.emplace_back(e.label, term);
    }
    finalize_report(rep, detail::tail_for(s, ConditionKind::Calderon), terms, true);
    return rep;
}

template <typename R>
ConditionReport<R> temperate_partial(const GTISystem<R>& s, const Box<R>& K) {
    detail::validate_window(s, K);
    ConditionReport<R> rep;
    rep.kind = ConditionKind::Temperate;
    rep.test_set = detail::box_string(K);
    std::vector<std::pair<long, R>> terms;
    for (const auto& e : s.entries) {
        R term = integrate(e.profile, K);
        rep.total += term;
        ConditionRow<R> row;
        row.label = e.label;
        row.note = e.note;
        row.term = term;
        row.partial = rep.total;
        row.ratio = static_cast<double>(rep.total);
        rep.rows.push_back(row);
        terms.emplace_back(e.label, term);
    }
    finalize_report(rep, detail::tail_for(s, ConditionKind::Temperate), terms, true);
    return rep;
}

// Split-sum variant of temperateness: the mass carried by entries whose
// covolume exceeds N, together with the reconstruction inequality
//   temperate <= N * (Calderon restricted to covol <= N) + split sum,
// checked exactly at truncation.
template <typename R>
ConditionReport<R> split_temperate_check(const GTISystem<R>& s, const Box<R>& K, const R& N) {
    if (!scalar_traits<R>::lt(R(0), N)) throw std::invalid_argument("split_temperate_check: N must be positive");
    detail::validate_window(s, K);
    ConditionReport<R> rep;
    rep.kind = ConditionKind::Temperate;
    rep.test_set = detail::box_string(K);
    R split_sum(0), calderon_low(0), temperate(0);
    for (const auto& e : s.entries) {
        R covol = covolume(e.subgroup);
        R mass = integrate(e.profile, K);
        temperate += mass;
        bool high = scalar_traits<R>::lt(N, covol);
        if (high) split_sum += mass;
        else calderon_low += mass / covol;
        ConditionRow<R> row;
        row.label = e.label;
        row.note = e.note + (high ? " [covol > N]" : " [covol <= N]");
        row.term = high ? mass : R(0);
        row.partial = split_sum;
        rep.rows.push_back(row);
    }
    rep.total = split_sum;
    bool holds = scalar_traits<R>::le(temperate, N * calderon_low + split_sum);
    std::ostringstream os;
    os << "temperate " << format_scalar(temperate) << " <= N*calderon_low + split = "
       << format_scalar(N * calderon_low + split_sum) << (holds ? " (holds)" : " (VIOLATED)");
    rep.notes.push_back(os.str());
    rep.verdict = holds ? Verdict::SatisfiedAtTruncation : Verdict::Inconclusive;
    return rep;
}

// Uniform counting estimate: for each subgroup, a certified upper bound and
// a sampled supremum of #(annihilator in K - omega), normalised against
// 1 + covol.  Growing normalised ratios are evidence of failure.
template <typename R>
ConditionReport<R> uce_check(const std::vector<CoCompactSubgroup<R>>& family, const Box<R>& K,
                             const std::vector<long>& labels, int grid = 16) {
    if (labels.size() != family.size()) throw std::invalid_argument("uce_check: label count mismatch");
    ConditionReport<R> rep;
    rep.kind = ConditionKind::Counting;
    rep.test_set = detail::box_string(K);
    for (std::size_t i = 0; i < family.size(); ++i) {
        PointLattice<R> L = annihilator(family[i]);
        std::int64_t upper = sup_count_upper(L, K);
        auto sampled = sup_count_sampled(L, K, grid);
        R covol = covolume(family[i]);
        ConditionRow<R> row;
        row.label = labels[i];
        row.term = R(static_cast<long long>(sampled.count));
        row.count = sampled.count;
        row.count_upper = upper;
        row.ratio = static_cast<double>(sampled.count) / (1.0 + static_cast<double>(covol));
        rep.rows.push_back(row);
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows) pts.emplace_back(static_cast<double>(row.label), row.ratio);
    rep.growth = evaluate_growth(pts);
    rep.verdict = rep.growth.growth ? Verdict::GrowthEvidence : Verdict::SatisfiedAtTruncation;
    if (!rep.growth.growth)
        rep.notes.push_back("a bounded verdict on one window extends to all compacts up to a constant");
    return rep;
}

template <typename R>
struct RoundReport {
    std::int64_t sup = 0;
    Vec<R> argmax;
    double feasible_constant = 0;  // smallest C with sup <= 1 + C * covol * vol(B_r)
    double ball_volume = 0;
};

// Roundedness probe: sampled supremum over ball translates of the number of
// annihilator points they capture, and the constant this forces.  Advisory.
template <typename R>
RoundReport<R> round_check(const CoCompactSubgroup<R>& G, const R& r, int grid = 16) {
    if (!scalar_traits<R>::lt(R(0), r)) throw std::invalid_argument("round_check: radius must be positive");
    PointLattice<R> L = annihilator(G);
    const int d = G.dim();
    Ball<R> ball{Vec<R>(static_cast<std::size_t>(d), R(0)), r};
    Region<R> reg;
    reg.parts.push_back(ball);
    RoundReport<R> out;
    out.argmax.assign(static_cast<std::size_t>(d), R(0));
    // Sample omega over a grid in one fundamental cell of the annihilator.
    const int k = L.rank();
    std::vector<int> t(static_cast<std::size_t>(std::max(k, 1)), 0);
    bool done = false;
    while (!done) {
        Vec<R> w(static_cast<std::size_t>(d), R(0));
        for (std::size_t i = 0; i < w.size(); ++i)
            for (int j = 0; j < k; ++j)
                w[i] += L.basis(i, static_cast<std::size_t>(j)) * R(t[static_cast<std::size_t>(j)]) / R(grid);
        std::int64_t c = count_in_translate(L, reg, w);
        if (c > out.sup) { out.sup = c; out.argmax = w; }
        if (k == 0) break;
        int pos = 0;
        while (pos < k && ++t[static_cast<std::size_t>(pos)] == grid) { t[static_cast<std::size_t>(pos)] = 0; ++pos; }
        done = (pos == k);
    }
    double rr = static_cast<double>(r);
    switch (d) {
        case 1: out.ball_volume = 2 * rr; break;
        case 2: out.ball_volume = M_PI * rr * rr; break;
        case 3: out.ball_volume = 4.0 / 3.0 * M_PI * rr * rr * rr; break;
        default: throw std::invalid_argument("round_check: dimension must be 1..3");
    }
    double denom = static_cast<double>(covolume(G)) * out.ball_volume;
    out.feasible_constant = out.sup > 1 ? static_cast<double>(out.sup - 1) / denom : 0.0;
    return out;
}

namespace detail {

// Upper bound on sqrt(v) as a rational: ceil on the integer square root of
// a scaled numerator.
inline Rat sqrt_upper(const Rat& v) {
    if (v < 0) throw std::invalid_argument("sqrt_upper: negative");
    const BigInt scale = 1000000;
    BigInt n = boost::multiprecision::numerator(v * Rat(scale * scale));
    BigInt d = boost::multiprecision::denominator(v * Rat(scale * scale));
    BigInt m = n / d + 1;
    BigInt r = boost::multiprecision::sqrt(m) + 1;
    return Rat(r) / Rat(scale);
}

inline double sqrt_upper(double v) { return std::sqrt(v) * (1 + 1e-12) + 1e-300; }

}  // namespace detail

// Lattice counting estimate: exact counts of Gamma's lattice part inside
// the dilated balls A^j B_r(0), with ratios against max(1, |det A|^j).
template <typename R>
ConditionReport<R> lce_check(const Mat<R>& A, const CoCompactSubgroup<R>& G, const R& r,
                             const std::vector<long>& j_range) {
    if (!scalar_traits<R>::lt(R(0), r)) throw std::invalid_argument("lce_check: radius must be positive");
    ConditionReport<R> rep;
    rep.kind = ConditionKind::LatticeCounting;
    rep.test_set = "A^j B_r(0), r = " + format_scalar(r);
    R det = determinant(A);
    R absdet = scalar_traits<R>::lt(det, R(0)) ? R(-det) : det;
    if (!scalar_traits<R>::lt(R(1), absdet))
        rep.notes.push_back("warning: |det A| <= 1, dilated balls do not expand");
    const std::size_t d = A.rows();
    const Mat<R>& C = G.C;
    for (long j : j_range) {
        // Membership: x = C m lies in A^j B_r  <=>  m^T Q m <= r^2 with
        // Q = (A^-j C)^T (A^-j C).
        Mat<R> AjinvC = matrix_power(A, -j) * C;
        Mat<R> Q = AjinvC.transpose() * AjinvC;
        // Coordinate bounds from rows of C^-1 A^j: |m_i| <= ||row_i|| * r.
        Mat<R> Minv = inverse(AjinvC);
        std::vector<long> hi(d);
        for (std::size_t i = 0; i < d; ++i) {
            R s(0);
            for (std::size_t l = 0; l < d; ++l) s += Minv(i, l) * Minv(i, l);
            hi[i] = floor_long<R>(detail::sqrt_upper(s) * r);
        }
        std::int64_t cand = 1;
        for (std::size_t i = 0; i < d; ++i) {
            cand *= 2 * static_cast<std::int64_t>(hi[i]) + 1;
            if (cand > detail::kEnumerationCap)
                throw std::runtime_error("lce_check: candidate count exceeds enumeration cap");
        }
        // Double-precision prefilter with an exact check near the boundary.
        std::vector<std::vector<double>> Qd(d, std::vector<double>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) Qd[i][l] = static_cast<double>(Q(i, l));
        double r2d = static_cast<double>(r) * static_cast<double>(r);
        R r2 = r * r;
        std::int64_t count = 0;
        std::vector<long> m(d, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == d) {
                double q = 0;
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) q += Qd[a][b] * m[a] * m[b];
                double margin = 1e-6 * (1 + std::abs(q));
                if (q > r2d + margin) return;
                if (q < r2d - margin) { ++count; return; }
                R qe(0);
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        qe += Q(a, b) * R(static_cast<long long>(m[a])) * R(static_cast<long long>(m[b]));
                if (scalar_traits<R>::le(qe, r2)) ++count;
                return;
            }
            for (long v = -hi[i]; v <= hi[i]; ++v) { m[i] = v; rec(i + 1); }
        };
        rec(0);
        double norm = std::max(1.0, std::pow(static_cast<double>(absdet), static_cast<double>(j)));
        ConditionRow<R> row;
        row.label = j;
        row.term = R(static_cast<long long>(count));
        row.count = count;
        row.ratio = static_cast<double>(count) / norm;
        rep.rows.push_back(row);
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows) pts.emplace_back(static_cast<double>(row.label), row.ratio);
    rep.growth = evaluate_growth(pts);
    rep.verdict = rep.growth.growth ? Verdict::GrowthEvidence : Verdict::SatisfiedAtTruncation;
    return rep;
}

template <typename R>
struct DilationCountingReport {
    ConditionReport<R> counting;
    SpectralReport spectral;
    bool classifier_guarantees = false;  // expanding-on-a-subspace hypothesis holds
};

// Uniform counting estimate for the dilation family Gamma_j = A^j Gamma,
// cross-checked against the spectral classification of A.
template <typename R>
DilationCountingReport<R> lce_to_uce(const Mat<R>& A, const CoCompactSubgroup<R>& G,
                                     const std::vector<long>& j_range, const Box<R>& K, int grid = 16) {
    std::vector<CoCompactSubgroup<R>> family;
    for (long j : j_range) family.push_back(CoCompactSubgroup<R>{matrix_power(A, j) * G.C, G.n});
    DilationCountingReport<R> out;
    out.counting = uce_check(family, K, j_range, grid);
    out.spectral = classify_expanding(A);
    out.classifier_guarantees = out.spectral.classification != Expansiveness::NotExpandingOnSubspace;
    if (out.classifier_guarantees && out.counting.verdict == Verdict::GrowthEvidence)
        out.counting.notes.push_back("warning: classifier guarantees the counting estimate, sampled growth contradicts");
    if (!out.classifier_guarantees && out.counting.verdict != Verdict::GrowthEvidence)
        out.counting.notes.push_back("classifier gives no guarantee; the implication is one-directional");
    return out;
}

template <typename R>
struct DiagnoseReport {
    ConditionReport<R> lic;
    ConditionReport<R> calderon;
    ConditionReport<R> temperate;
    ConditionReport<R> counting;
    bool per_term_domination = true;   // lic term >= covol^-1 * mass, per entry
    bool per_term_counting_bound = true;  // lic term <= covol^-1 * sup bound * mass
    std::optional<bool> diagonal_equivalence;  // only for diagonal families with bounded ratio
    std::vector<std::string> notes;
};

// Run all evaluators on a system and check the per-term inequality chain.
template <typename R>
DiagnoseReport<R> diagnose(const GTISystem<R>& s, const Box<R>& K, int grid = 16) {
    DiagnoseReport<R> out;
    out.lic = lic_partial(s, K);
    out.calderon = calderon_partial(s, K);
    out.temperate = temperate_partial(s, K);
    std::vector<CoCompactSubgroup<R>> family;
    std::vector<long> labels;
    for (const auto& e : s.entries) { family.push_back(e.subgroup); labels.push_back(e.label); }
    out.counting = uce_check(family, K, labels, grid);

    bool all_diagonal = true;
    double max_ratio = 1;
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        R covol = covolume(e.subgroup);
        R mass = integrate(e.profile, K);
        const R& lic_t = out.lic.rows[i].term;
        if (!scalar_traits<R>::le(mass / covol, lic_t)) out.per_term_domination = false;
        std::int64_t upper = sup_count_upper(annihilator(e.subgroup), K);
        if (!scalar_traits<R>::le(lic_t, R(static_cast<long long>(upper)) * mass / covol))
            out.per_term_counting_bound = false;
        for (std::size_t a = 0; a < e.subgroup.C.rows(); ++a)
            for (std::size_t b = 0; b < e.subgroup.C.cols(); ++b)
                if (a != b && !scalar_traits<R>::eq(e.subgroup.C(a, b), R(0))) all_diagonal = false;
        max_ratio = std::max(max_ratio, singular_ratio(e.subgroup.C));
    }
    if (all_diagonal) {
        // For diagonal families with uniformly bounded singular ratio, the
        // local condition is equivalent to Calderon + temperateness; any
        // finite ratio bound is compatible with a finite family, so record
        // the equivalence at truncation and the observed ratio bound.
        bool lic_ok = out.lic.verdict != Verdict::GrowthEvidence;
        bool both_ok = out.calderon.verdict != Verdict::GrowthEvidence &&
                       out.temperate.verdict != Verdict::GrowthEvidence;
        out.diagonal_equivalence = (lic_ok == both_ok);
        std::ostringstream os;
        os << "diagonal family, singular ratio bound " << max_ratio << ": equivalence "
           << (*out.diagonal_equivalence ? "consistent" : "VIOLATED") << " at truncation";
        out.notes.push_back(os.str());
    }
    return out;
}

}  // namespace gtiv
