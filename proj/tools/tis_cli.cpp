// Command-line front end: reads a versioned JSON system document and runs
// lattice inspection, condition checks, dilation classification, or one of
// the built-in example families.
//
// Exit codes: 0 bounded (satisfied at truncation or tail-certified),
//             2 growth evidence, 3 inconclusive, 1 validation/usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtiv/document.hpp"

using namespace gtiv;

namespace {

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::SatisfiedAtTruncation:
        case Verdict::BoundCertified: return 0;
        case Verdict::GrowthEvidence: return 2;
        case Verdict::Inconclusive: return 3;
    }
    return 1;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

// "lo0,lo1,...,hi0,hi1,..." -> box; count must be 2*d.
template <typename R>
Box<R> parse_kbox(const std::string& text, int dim) {
    std::vector<R> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto p = parse_scalar(tok);
        if (!p) throw std::runtime_error("--kbox: bad scalar \"" + tok + "\"");
        vals.push_back(detail::scalar_as<R>(*p));
    }
    if (static_cast<int>(vals.size()) != 2 * dim)
        throw std::runtime_error("--kbox: expected " + std::to_string(2 * dim) + " comma-separated values");
    Vec<R> lo(vals.begin(), vals.begin() + dim), hi(vals.begin() + dim, vals.end());
    return Box<R>(lo, hi);
}

template <typename R>
Box<R> window_for(const SystemDocument& doc, const GTISystem<R>& s, const std::string& kbox) {
    if (!kbox.empty()) return parse_kbox<R>(kbox, s.dim);
    if (!doc.test_sets.empty()) return detail::box_as<R>(doc.test_sets.front());
    return s.working_box;
}

// "a,b;c,d" -> square matrix (rows separated by ';').
template <typename R>
Mat<R> parse_matrix(const std::string& text) {
    std::vector<std::vector<R>> rows;
    std::stringstream ss(text);
    std::string rowtext;
    while (std::getline(ss, rowtext, ';')) {
        std::vector<R> row;
        std::stringstream rs(rowtext);
        std::string tok;
        while (std::getline(rs, tok, ',')) {
            auto p = parse_scalar(tok);
            if (!p) throw std::runtime_error("--matrix: bad scalar \"" + tok + "\"");
            row.push_back(detail::scalar_as<R>(*p));
        }
        rows.push_back(std::move(row));
    }
    const std::size_t d = rows.size();
    Mat<R> M(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw std::runtime_error("--matrix: rows must be square");
        for (std::size_t j = 0; j < d; ++j) M(i, j) = rows[i][j];
    }
    return M;
}

std::vector<std::string> csv_rows;  // per-label rows collected for --csv

template <typename R>
void collect_csv(const ConditionReport<R>& rep) {
    csv_rows.clear();
    csv_rows.push_back("label,note,term,partial,count,count_upper,ratio");
    for (const auto& row : rep.rows) {
        std::ostringstream os;
        os << row.label << "," << row.note << "," << format_scalar(row.term) << ","
           << format_scalar(row.partial) << ",";
        if (row.count >= 0) os << row.count;
        os << ",";
        if (row.count_upper >= 0) os << row.count_upper;
        os << "," << row.ratio;
        csv_rows.push_back(os.str());
    }
}

void write_csv(const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    for (const auto& r : csv_rows) out << r << "\n";
    std::cerr << "wrote " << csv_rows.size() - 1 << " rows to " << path << "\n";
}

template <typename R>
int emit_report(const ConditionReport<R>& rep, bool as_json, const std::string& csv_path) {
    collect_csv(rep);
    write_csv(csv_path);
    if (as_json) std::cout << report_to_json(rep).dump(2) << "\n";
    else std::cout << to_table(rep);
    return verdict_exit(rep.verdict);
}

struct CommonOpts {
    std::string doc_path;
    std::string kbox;
    std::string csv_path;
    long j_max = 0;     // 0: use document value
    int grid = 0;       // 0: use document value
    double tol = 0;     // 0: keep defaults
    bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_doc = true) {
    if (needs_doc) cmd->add_option("document", o.doc_path, "system document (JSON)")->required();
    cmd->add_option("--kbox", o.kbox, "test window: lo0,..,lo{d-1},hi0,..,hi{d-1}");
    cmd->add_option("--jmax", o.j_max, "truncation level override");
    cmd->add_option("--grid", o.grid, "sampling grid resolution override");
    cmd->add_option("--tol", o.tol, "float-mode comparison tolerance");
    cmd->add_option("--csv", o.csv_path, "write per-label rows to a CSV file");
    cmd->add_flag("--json", o.as_json, "machine-readable output");
}

SystemDocument load_doc(const CommonOpts& o) {
    auto doc = parse_document(load_json(o.doc_path));
    if (o.j_max > 0) doc.params.j_max = o.j_max;
    if (o.grid > 0) doc.params.grid = o.grid;
    return doc;
}

// Dispatch on arithmetic mode: decimals anywhere force the float path.
template <typename F>
int with_mode(const SystemDocument& doc, double tol, F&& f) {
    if (document_uses_decimals(doc)) {
        std::cerr << "note: decimal scalars present; running in float mode\n";
        if (tol > 0) scalar_traits<double>::eps = tol;
        return f.template operator()<double>();
    }
    return f.template operator()<Rat>();
}

template <typename R>
int run_lattice_info(const SystemDocument& doc, const CommonOpts& o) {
    auto s = build_system<R>(doc);
    nlohmann::json out = nlohmann::json::array();
    csv_rows.clear();
    csv_rows.push_back("label,covol,spreadness");
    for (const auto& e : s.entries) {
        R covol = covolume(e.subgroup);
        auto L = annihilator(e.subgroup);
        auto spread = sup_count_sampled(L, s.working_box, doc.params.grid);
        if (o.as_json) {
            nlohmann::json b = nlohmann::json::array();
            for (std::size_t c = 0; c < static_cast<std::size_t>(L.rank()); ++c) {
                nlohmann::json col = nlohmann::json::array();
                for (std::size_t i = 0; i < static_cast<std::size_t>(L.dim()); ++i)
                    col.push_back(format_scalar(L.basis(i, c)));
                b.push_back(col);
            }
            out.push_back({{"label", e.label},
                           {"note", e.note},
                           {"covolume", format_scalar(covol)},
                           {"annihilator_basis", b},
                           {"annihilator_weight", format_scalar(L.weight)},
                           {"spreadness", spread.count}});
        } else {
            std::cout << "entry " << e.label << (e.note.empty() ? "" : "  (" + e.note + ")") << "\n";
            std::cout << "  covolume " << format_scalar(covol) << ", annihilator rank " << L.rank()
                      << ", weight " << format_scalar(L.weight) << "\n";
            for (std::size_t c = 0; c < static_cast<std::size_t>(L.rank()); ++c) {
                std::cout << "  basis[" << c << "] = (";
                for (std::size_t i = 0; i < static_cast<std::size_t>(L.dim()); ++i)
                    std::cout << (i ? ", " : "") << format_scalar(L.basis(i, c));
                std::cout << ")\n";
            }
            std::cout << "  spreadness over " << detail::box_string(s.working_box) << ": " << spread.count
                      << " points\n";
        }
        std::ostringstream cs;
        cs << e.label << "," << format_scalar(covol) << "," << spread.count;
        csv_rows.push_back(cs.str());
    }
    if (o.as_json) std::cout << out.dump(2) << "\n";
    write_csv(o.csv_path);
    return 0;
}

template <typename R>
int run_check(const std::string& cond, const SystemDocument& doc, const CommonOpts& o,
              const std::string& dilation, const std::string& radius) {
    auto s = build_system<R>(doc);
    Box<R> K = window_for(doc, s, o.kbox);
    if (cond == "lic") return emit_report(lic_partial(s, K), o.as_json, o.csv_path);
    if (cond == "calderon") return emit_report(calderon_partial(s, K), o.as_json, o.csv_path);
    if (cond == "temperate") return emit_report(temperate_partial(s, K), o.as_json, o.csv_path);
    if (cond == "uce") {
        std::vector<CoCompactSubgroup<R>> family;
        std::vector<long> labels;
        for (const auto& e : s.entries) {
            family.push_back(e.subgroup);
            labels.push_back(e.label);
        }
        return emit_report(uce_check(family, K, labels, doc.params.grid), o.as_json, o.csv_path);
    }
    auto need_radius = [&]() {
        auto p = parse_scalar(radius.empty() ? "1" : radius);
        if (!p) throw std::runtime_error("--radius: bad scalar");
        return detail::scalar_as<R>(*p);
    };
    if (cond == "round") {
        auto rep = round_check(s.entries.front().subgroup, need_radius(), doc.params.grid);
        if (o.as_json) {
            nlohmann::json j = {{"condition", "round"},
                                {"sup", rep.sup},
                                {"ball_volume", rep.ball_volume},
                                {"feasible_constant", rep.feasible_constant}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "condition: round (advisory)\n"
                      << "  sampled sup over ball translates: " << rep.sup << "\n"
                      << "  ball volume " << rep.ball_volume << ", feasible constant "
                      << rep.feasible_constant << "\n";
        }
        return 0;
    }
    if (cond == "lce") {
        if (dilation.empty()) throw std::runtime_error("check lce: --dilation required (e.g. \"2,0;0,2\")");
        Mat<R> A = parse_matrix<R>(dilation);
        std::vector<long> jr;
        for (long j = 1; j <= doc.params.j_max; ++j) jr.push_back(j);
        return emit_report(lce_check(A, s.entries.front().subgroup, need_radius(), jr), o.as_json,
                           o.csv_path);
    }
    throw std::runtime_error("unknown condition \"" + cond + "\" (lic|calderon|temperate|uce|round|lce)");
}

template <typename R>
int run_classify(const Mat<R>& A, bool as_json) {
    auto rep = classify_expanding(A);
    if (as_json) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& e : rep.eigenvalues)
            ev.push_back({{"value", e.description},
                          {"modulus", e.modulus},
                          {"multiplicity", e.multiplicity},
                          {"conjugate_pair", e.conjugate_pair}});
        nlohmann::json fa = nlohmann::json::array();
        for (const auto& f : rep.min_poly_factors)
            fa.push_back({{"factor", f.factor}, {"exponent", f.exponent}, {"unit_circle", f.unit_circle}});
        nlohmann::json j = {{"classification", to_string(rep.classification)},
                            {"exact", rep.exact},
                            {"all_moduli_ge_one", rep.cond_all_ge_one},
                            {"some_modulus_gt_one", rep.cond_some_gt_one},
                            {"unit_circle_semisimple", rep.cond_unit_semisimple},
                            {"eigenvalues", ev},
                            {"min_poly_factors", fa}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "classification: " << to_string(rep.classification)
                  << (rep.exact ? " (exact)" : " (tolerance-based)") << "\n";
        for (const auto& e : rep.eigenvalues)
            std::cout << "  eigenvalue " << e.description << "  |.| ~ " << e.modulus << "  mult "
                      << e.multiplicity << (e.conjugate_pair ? "  (conjugate pair)" : "") << "\n";
        for (const auto& f : rep.min_poly_factors)
            std::cout << "  min-poly factor (" << f.factor << ")^" << f.exponent
                      << (f.unit_circle ? "  [unit circle]" : "") << "\n";
    }
    return 0;
}

int run_example(const std::string& name, const CommonOpts& o,
                const std::map<std::string, std::string>& overrides) {
    SystemDocument doc;
    doc.dimension = 2;
    DocExample ex;
    std::map<std::string, std::string> canon{{"main", "main_example"},
                                             {"main_example", "main_example"},
                                             {"fail-uce", "fail_uce"},
                                             {"fail_uce", "fail_uce"},
                                             {"wavelet", "wavelet"},
                                             {"compact-open", "compact_open"},
                                             {"compact_open", "compact_open"}};
    auto it = canon.find(name);
    if (it == canon.end()) throw std::runtime_error("unknown example \"" + name + "\"");
    ex.name = it->second;
    for (const auto& [k, v] : overrides) {
        if (k == "j" || k == "j_max" || k == "n_max") ex.integers[k] = std::stol(v);
        else {
            auto p = parse_scalar(v);
            if (!p) throw std::runtime_error("example override " + k + ": bad scalar \"" + v + "\"");
            ex.scalars[k] = *p;
        }
    }
    if (ex.name == "compact_open") {
        long j = ex.integers.count("j") ? ex.integers.at("j") : 1;
        auto c = compact_open_counts(j);
        if (o.as_json) {
            nlohmann::json out = {{"j", j},
                                  {"count", c.count},
                                  {"covolume", format_scalar(c.covol)},
                                  {"subgroup_covolume", format_scalar(c.covol_sub)}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "(count, covol, subgroup covol) = (" << c.count << ", " << format_scalar(c.covol)
                      << ", " << format_scalar(c.covol_sub) << ")\n";
        }
        return 0;
    }
    doc.example = ex;
    if (ex.name == "wavelet") doc.dimension = 1;
    if (o.j_max > 0) doc.params.j_max = o.j_max;
    if (o.grid > 0) doc.params.grid = o.grid;
    auto s = build_system<Rat>(doc);
    Box<Rat> K = o.kbox.empty() ? s.working_box : parse_kbox<Rat>(o.kbox, s.dim);
    auto d = diagnose(s, K, doc.params.grid);
    int worst = 0;
    for (const auto* rep : {&d.lic, &d.calderon, &d.temperate, &d.counting}) {
        collect_csv(*rep);
        if (o.as_json) std::cout << report_to_json(*rep).dump(2) << "\n";
        else std::cout << to_table(*rep) << "\n";
        worst = std::max(worst, verdict_exit(rep->verdict));
    }
    if (!o.as_json) {
        std::cout << "per-term domination: " << (d.per_term_domination ? "holds" : "VIOLATED") << "\n";
        std::cout << "per-term counting bound: " << (d.per_term_counting_bound ? "holds" : "VIOLATED")
                  << "\n";
        for (const auto& n : d.notes) std::cout << "note: " << n << "\n";
    }
    write_csv(o.csv_path);
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"translation-invariant system checker"};
    app.require_subcommand(1);

    CommonOpts li, ck, ex;
    std::string cond, dilation, radius, matrix_text, example_name;
    std::vector<std::string> set_kv;
    bool classify_json = false;
    long j_override = 0;

    auto* cmd_li = app.add_subcommand("lattice-info", "covolume, annihilator basis, spreadness");
    add_common(cmd_li, li);

    auto* cmd_ck = app.add_subcommand("check", "run one condition check");
    cmd_ck->add_option("condition", cond, "lic|calderon|temperate|uce|round|lce")->required();
    add_common(cmd_ck, ck);
    cmd_ck->add_option("--dilation", dilation, "dilation matrix for lce, rows ';'-separated");
    cmd_ck->add_option("--radius", radius, "ball radius for round/lce (default 1)");

    auto* cmd_cl = app.add_subcommand("classify", "expansiveness of a dilation matrix");
    cmd_cl->add_option("--matrix", matrix_text, "square matrix, rows ';'-separated")->required();
    cmd_cl->add_flag("--json", classify_json, "machine-readable output");

    auto* cmd_ex = app.add_subcommand("example", "run a built-in example family");
    cmd_ex->add_option("name", example_name, "main|fail-uce|wavelet|compact-open")->required();
    cmd_ex->add_option("--set", set_kv, "override, key=value (repeatable)");
    cmd_ex->add_option("--j", j_override, "index override (compact-open)");
    add_common(cmd_ex, ex, /*needs_doc=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_li->parsed()) {
            auto doc = load_doc(li);
            return with_mode(doc, li.tol, [&]<typename R>() { return run_lattice_info<R>(doc, li); });
        }
        if (cmd_ck->parsed()) {
            auto doc = load_doc(ck);
            return with_mode(doc, ck.tol,
                             [&]<typename R>() { return run_check<R>(cond, doc, ck, dilation, radius); });
        }
        if (cmd_cl->parsed()) {
            bool decimal = matrix_text.find('.') != std::string::npos ||
                           matrix_text.find('e') != std::string::npos;
            if (decimal) return run_classify(parse_matrix<double>(matrix_text), classify_json);
            return run_classify(parse_matrix<Rat>(matrix_text), classify_json);
        }
        if (cmd_ex->parsed()) {
            std::map<std::string, std::string> overrides;
            for (const auto& kv : set_kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw std::runtime_error("--set expects key=value");
                overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            if (j_override > 0) overrides["j"] = std::to_string(j_override);
            return run_example(example_name, ex, overrides);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
