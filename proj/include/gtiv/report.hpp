#pragma once

// Reporting types shared by all condition evaluators: per-index rows,
// truncation verdicts, growth detection, and a fixed-width text rendering.

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "gtiv/profiles.hpp"
#include "gtiv/scalar.hpp"

namespace gtiv {

enum class Verdict { SatisfiedAtTruncation, BoundCertified, GrowthEvidence, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::SatisfiedAtTruncation: return "SATISFIED_AT_TRUNCATION";
        case Verdict::BoundCertified: return "BOUND_CERTIFIED";
        case Verdict::GrowthEvidence: return "GROWTH_EVIDENCE";
        default: return "INCONCLUSIVE";
    }
}

struct GrowthVerdict {
    std::vector<double> labels;  // j values
    std::vector<double> ratios;  // rho_j
    double slope = 0;
    double r_squared = 0;
    double slope_min = 0.5;
    double r2_min = 0.9;
    bool ratio_doubling = false;
    bool growth = false;
};

// Log-log regression of rho_j against j; growth is declared when the slope
// clears slope_min with fit quality above r2_min, or when the ratios double
// from the first half of the index range to the second (fallback for
// staircase-like growth that fits a power law poorly).
inline GrowthVerdict evaluate_growth(const std::vector<std::pair<double, double>>& points,
                                     double slope_min = 0.5, double r2_min = 0.9) {
    GrowthVerdict g;
    g.slope_min = slope_min;
    g.r2_min = r2_min;
    std::vector<double> xs, ys;
    for (const auto& [j, rho] : points) {
        g.labels.push_back(j);
        g.ratios.push_back(rho);
        if (j > 0 && rho > 0) {
            xs.push_back(std::log(j));
            ys.push_back(std::log(rho));
        }
    }
    const std::size_t n = xs.size();
    if (n >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += xs[i]; sy += ys[i];
            sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i]; syy += ys[i] * ys[i];
        }
        double dn = static_cast<double>(n);
        double vxx = sxx - sx * sx / dn;
        double vxy = sxy - sx * sy / dn;
        double vyy = syy - sy * sy / dn;
        if (vxx > 0) {
            g.slope = vxy / vxx;
            g.r_squared = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
        }
    }
    if (g.ratios.size() >= 4) {
        double first = g.ratios[g.ratios.size() / 2 - 1];
        double last = g.ratios.back();
        g.ratio_doubling = first > 0 && last >= 2.0 * first;
    }
    g.growth = (g.slope > g.slope_min && g.r_squared > g.r2_min) || g.ratio_doubling;
    return g;
}

template <typename R>
struct ConditionRow {
    long label = 0;            // index label (the family's j where applicable)
    std::string note;          // extra labelling, e.g. the tile the entry carries
    R term{0};                 // per-index term value
    R partial{0};              // running sum through this row
    long long count = -1;      // lattice count data, when meaningful
    long long count_upper = -1;  // certified counting bound, when meaningful
    double ratio = 0;          // normalised ratio used for growth detection
};

template <typename R>
struct ConditionReport {
    ConditionKind kind = ConditionKind::Calderon;
    std::string test_set;      // description of the window used
    std::vector<ConditionRow<R>> rows;
    R total{0};
    bool tail_applicable = false;
    bool tail_validated = false;
    R tail_bound{0};
    R certified_total{0};      // total + tail bound when certified
    GrowthVerdict growth;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;
};

// Shared epilogue: fold a tail descriptor and growth data into a verdict.
template <typename R>
void finalize_report(ConditionReport<R>& rep, const TailDescriptor<R>& tail,
                     const std::vector<std::pair<long, R>>& tail_terms, bool use_growth) {
    rep.tail_applicable = tail.applicable();
    if (use_growth) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : rep.rows) pts.emplace_back(static_cast<double>(row.label), row.ratio);
        rep.growth = evaluate_growth(pts);
    }
    if (use_growth && rep.growth.growth) {
        rep.verdict = Verdict::GrowthEvidence;
        return;
    }
    if (rep.tail_applicable) {
        rep.tail_validated = tail.validates(tail_terms);
        if (rep.tail_validated && !rep.rows.empty()) {
            rep.tail_bound = tail.tail_bound(rep.rows.back().label);
            rep.certified_total = rep.total + rep.tail_bound;
            rep.verdict = Verdict::BoundCertified;
            return;
        }
        rep.notes.push_back("tail descriptor present but not validated by the computed terms");
        rep.verdict = Verdict::Inconclusive;
        return;
    }
    rep.verdict = Verdict::SatisfiedAtTruncation;
}

template <typename R>
std::string to_table(const ConditionReport<R>& rep) {
    std::ostringstream os;
    os << "condition: " << to_string(rep.kind) << "   window: " << rep.test_set << "\n";
    os << std::left << std::setw(10) << "label" << std::setw(18) << "note" << std::setw(24) << "term"
       << std::setw(24) << "partial" << std::setw(12) << "count" << std::setw(12) << "bound"
       << std::setw(12) << "ratio" << "\n";
    for (const auto& row : rep.rows) {
        os << std::left << std::setw(10) << row.label << std::setw(18) << row.note << std::setw(24)
           << format_scalar(row.term) << std::setw(24) << format_scalar(row.partial);
        os << std::setw(12) << (row.count >= 0 ? std::to_string(row.count) : std::string("-"));
        os << std::setw(12) << (row.count_upper >= 0 ? std::to_string(row.count_upper) : std::string("-"));
        std::ostringstream rs;
        rs << std::setprecision(4) << row.ratio;
        os << std::setw(12) << (row.ratio != 0 ? rs.str() : std::string("-")) << "\n";
    }
    os << "total: " << format_scalar(rep.total) << "\n";
    if (rep.tail_applicable) {
        os << "tail: " << (rep.tail_validated ? "validated" : "NOT validated");
        if (rep.tail_validated) os << ", bound " << format_scalar(rep.tail_bound) << ", certified total "
                                   << format_scalar(rep.certified_total);
        os << "\n";
    }
    if (!rep.growth.ratios.empty())
        os << "growth: slope " << rep.growth.slope << " (R^2 " << rep.growth.r_squared << ")"
           << (rep.growth.ratio_doubling ? ", ratio doubling" : "") << "\n";
    for (const auto& n : rep.notes) os << "note: " << n << "\n";
    os << "verdict: " << to_string(rep.verdict) << "\n";
    return os.str();
}

}  // namespace gtiv
