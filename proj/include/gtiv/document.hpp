#pragma once

// Versioned JSON schema for system documents: a dimension, either a named
// example with parameters or an explicit entry list (matrix, split rank,
// profile pieces), test windows, numeric parameters, and tail descriptors.
// Scalars are written as "p/q" rationals or decimal floats; a single decimal
// anywhere switches the whole document to floating-point mode.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtiv/conditions.hpp"
#include "gtiv/report.hpp"
#include "gtiv/systems.hpp"

namespace gtiv {

inline constexpr const char* kSchemaVersion = "tis-1";

struct DocBox {
    std::vector<ParsedScalar> lo, hi;
};

struct DocPiece {
    std::optional<DocBox> box;
    std::optional<std::vector<std::pair<std::vector<ParsedScalar>, ParsedScalar>>> halfspaces;
    ParsedScalar value;
};

struct DocEntry {
    long label = 0;
    std::string note;
    std::vector<std::vector<ParsedScalar>> matrix;
    int split_rank = 0;
    std::vector<DocPiece> profile;
};

struct DocTail {
    std::string kind;  // "geometric" only; builder tails are richer
    ParsedScalar ratio;
    ParsedScalar coefficient;
};

struct DocExample {
    std::string name;  // main_example | fail_uce | wavelet | compact_open
    std::map<std::string, ParsedScalar> scalars;   // a, N, r
    std::map<std::string, long> integers;          // j_max, n_max, j
};

struct DocParams {
    long j_max = 40;
    int grid = 16;
    double slope_min = 0.5;
    double r2_min = 0.9;
};

struct SystemDocument {
    std::string version = kSchemaVersion;
    int dimension = 0;
    std::optional<DocExample> example;
    std::vector<DocEntry> entries;
    std::optional<DocBox> working_box;
    std::vector<DocBox> test_sets;
    DocParams params;
    std::map<std::string, DocTail> tails;
};

namespace detail {

inline ParsedScalar parse_scalar_field(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer()) {
        Rat r(j.get<long long>());
        return ParsedScalar{r, r.convert_to<double>(), false};
    }
    if (j.is_number_float()) return ParsedScalar{Rat(0), j.get<double>(), true};
    if (j.is_string()) {
        auto p = parse_scalar(j.get<std::string>());
        if (!p) throw std::runtime_error(where + ": bad scalar \"" + j.get<std::string>() + "\"");
        return *p;
    }
    throw std::runtime_error(where + ": expected a scalar (\"p/q\", integer, or decimal)");
}

inline nlohmann::json scalar_to_json(const ParsedScalar& s) {
    if (s.is_decimal) return s.value;
    return format_scalar(s.rational);
}

inline DocBox parse_box_field(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
        throw std::runtime_error(where + ": expected {\"lo\": [...], \"hi\": [...]}");
    DocBox b;
    for (const auto& v : j.at("lo")) b.lo.push_back(parse_scalar_field(v, where + ".lo"));
    for (const auto& v : j.at("hi")) b.hi.push_back(parse_scalar_field(v, where + ".hi"));
    if (b.lo.size() != b.hi.size()) throw std::runtime_error(where + ": lo/hi length mismatch");
    return b;
}

inline nlohmann::json box_to_json(const DocBox& b) {
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (const auto& v : b.lo) lo.push_back(scalar_to_json(v));
    for (const auto& v : b.hi) hi.push_back(scalar_to_json(v));
    return {{"lo", lo}, {"hi", hi}};
}

}  // namespace detail

inline SystemDocument parse_document(const nlohmann::json& j) {
    SystemDocument doc;
    if (!j.is_object()) throw std::runtime_error("document: top level must be an object");
    if (!j.contains("version")) throw std::runtime_error("document: missing \"version\"");
    doc.version = j.at("version").get<std::string>();
    if (doc.version != kSchemaVersion)
        throw std::runtime_error("document: unsupported version \"" + doc.version + "\" (expected \"" +
                                 kSchemaVersion + "\")");
    if (j.contains("dimension")) doc.dimension = j.at("dimension").get<int>();

    if (j.contains("example")) {
        const auto& e = j.at("example");
        DocExample ex;
        ex.name = e.at("name").get<std::string>();
        for (const auto& [key, val] : e.items()) {
            if (key == "name") continue;
            if (val.is_number_integer() && (key == "j_max" || key == "n_max" || key == "j"))
                ex.integers[key] = val.get<long>();
            else
                ex.scalars[key] = detail::parse_scalar_field(val, "example." + key);
        }
        doc.example = std::move(ex);
    }

    if (j.contains("entries")) {
        std::size_t idx = 0;
        for (const auto& e : j.at("entries")) {
            std::string where = "entries[" + std::to_string(idx++) + "]";
            DocEntry de;
            de.label = e.contains("label") ? e.at("label").get<long>() : static_cast<long>(idx);
            if (e.contains("note")) de.note = e.at("note").get<std::string>();
            if (!e.contains("matrix")) throw std::runtime_error(where + ": missing \"matrix\"");
            for (const auto& row : e.at("matrix")) {
                std::vector<ParsedScalar> r;
                for (const auto& v : row) r.push_back(detail::parse_scalar_field(v, where + ".matrix"));
                de.matrix.push_back(std::move(r));
            }
            for (const auto& row : de.matrix)
                if (row.size() != de.matrix.size())
                    throw std::runtime_error(where + ".matrix: must be square");
            de.split_rank = e.contains("split_rank") ? e.at("split_rank").get<int>()
                                                     : static_cast<int>(de.matrix.size());
            if (e.contains("profile")) {
                for (const auto& p : e.at("profile")) {
                    DocPiece dp;
                    dp.value = detail::parse_scalar_field(p.at("value"), where + ".profile.value");
                    if (p.contains("box")) dp.box = detail::parse_box_field(p.at("box"), where + ".profile.box");
                    else if (p.contains("halfspaces")) {
                        std::vector<std::pair<std::vector<ParsedScalar>, ParsedScalar>> hs;
                        for (const auto& h : p.at("halfspaces")) {
                            std::vector<ParsedScalar> normal;
                            for (const auto& v : h.at("normal"))
                                normal.push_back(detail::parse_scalar_field(v, where + ".profile.halfspaces"));
                            hs.emplace_back(std::move(normal),
                                            detail::parse_scalar_field(h.at("offset"), where + ".profile.offset"));
                        }
                        dp.halfspaces = std::move(hs);
                    } else {
                        throw std::runtime_error(where + ".profile: piece needs \"box\" or \"halfspaces\"");
                    }
                    de.profile.push_back(std::move(dp));
                }
            }
            doc.entries.push_back(std::move(de));
        }
    }
    if (!doc.example && doc.entries.empty())
        throw std::runtime_error("document: needs \"example\" or \"entries\"");

    if (j.contains("working_box")) doc.working_box = detail::parse_box_field(j.at("working_box"), "working_box");
    if (j.contains("test_sets"))
        for (const auto& t : j.at("test_sets")) doc.test_sets.push_back(detail::parse_box_field(t, "test_sets"));
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (p.contains("j_max")) doc.params.j_max = p.at("j_max").get<long>();
        if (p.contains("grid")) doc.params.grid = p.at("grid").get<int>();
        if (p.contains("slope_min")) doc.params.slope_min = p.at("slope_min").get<double>();
        if (p.contains("r2_min")) doc.params.r2_min = p.at("r2_min").get<double>();
    }
    if (j.contains("tails")) {
        for (const auto& [key, val] : j.at("tails").items()) {
            DocTail t;
            t.kind = val.at("kind").get<std::string>();
            if (t.kind != "geometric")
                throw std::runtime_error("tails." + key + ": only \"geometric\" tails are expressible here");
            t.ratio = detail::parse_scalar_field(val.at("ratio"), "tails." + key + ".ratio");
            t.coefficient = detail::parse_scalar_field(val.at("coefficient"), "tails." + key + ".coefficient");
            doc.tails[key] = std::move(t);
        }
    }
    return doc;
}

inline nlohmann::json to_json(const SystemDocument& doc) {
    nlohmann::json j;
    j["version"] = doc.version;
    if (doc.dimension > 0) j["dimension"] = doc.dimension;
    if (doc.example) {
        nlohmann::json e;
        e["name"] = doc.example->name;
        for (const auto& [k, v] : doc.example->scalars) e[k] = detail::scalar_to_json(v);
        for (const auto& [k, v] : doc.example->integers) e[k] = v;
        j["example"] = e;
    }
    if (!doc.entries.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& de : doc.entries) {
            nlohmann::json e;
            e["label"] = de.label;
            if (!de.note.empty()) e["note"] = de.note;
            nlohmann::json m = nlohmann::json::array();
            for (const auto& row : de.matrix) {
                nlohmann::json r = nlohmann::json::array();
                for (const auto& v : row) r.push_back(detail::scalar_to_json(v));
                m.push_back(r);
            }
            e["matrix"] = m;
            e["split_rank"] = de.split_rank;
            if (!de.profile.empty()) {
                nlohmann::json arr2 = nlohmann::json::array();
                for (const auto& p : de.profile) {
                    nlohmann::json pj;
                    pj["value"] = detail::scalar_to_json(p.value);
                    if (p.box) pj["box"] = detail::box_to_json(*p.box);
                    if (p.halfspaces) {
                        nlohmann::json hs = nlohmann::json::array();
                        for (const auto& [normal, offset] : *p.halfspaces) {
                            nlohmann::json n = nlohmann::json::array();
                            for (const auto& v : normal) n.push_back(detail::scalar_to_json(v));
                            hs.push_back({{"normal", n}, {"offset", detail::scalar_to_json(offset)}});
                        }
                        pj["halfspaces"] = hs;
                    }
                    arr2.push_back(pj);
                }
                e["profile"] = arr2;
            }
            arr.push_back(e);
        }
        j["entries"] = arr;
    }
    if (doc.working_box) j["working_box"] = detail::box_to_json(*doc.working_box);
    if (!doc.test_sets.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : doc.test_sets) arr.push_back(detail::box_to_json(t));
        j["test_sets"] = arr;
    }
    j["params"] = {{"j_max", doc.params.j_max},
                   {"grid", doc.params.grid},
                   {"slope_min", doc.params.slope_min},
                   {"r2_min", doc.params.r2_min}};
    if (!doc.tails.empty()) {
        nlohmann::json t;
        for (const auto& [k, v] : doc.tails)
            t[k] = {{"kind", v.kind},
                    {"ratio", detail::scalar_to_json(v.ratio)},
                    {"coefficient", detail::scalar_to_json(v.coefficient)}};
        j["tails"] = t;
    }
    return j;
}

// True when any scalar in the document is written as a decimal.
inline bool document_uses_decimals(const SystemDocument& doc) {
    bool dec = false;
    auto probe = [&](const ParsedScalar& s) { dec = dec || s.is_decimal; };
    auto probe_box = [&](const DocBox& b) {
        for (const auto& v : b.lo) probe(v);
        for (const auto& v : b.hi) probe(v);
    };
    if (doc.example)
        for (const auto& [k, v] : doc.example->scalars) probe(v);
    for (const auto& e : doc.entries) {
        for (const auto& row : e.matrix)
            for (const auto& v : row) probe(v);
        for (const auto& p : e.profile) {
            probe(p.value);
            if (p.box) probe_box(*p.box);
            if (p.halfspaces)
                for (const auto& [normal, offset] : *p.halfspaces) {
                    for (const auto& v : normal) probe(v);
                    probe(offset);
                }
        }
    }
    if (doc.working_box) probe_box(*doc.working_box);
    for (const auto& t : doc.test_sets) probe_box(t);
    for (const auto& [k, v] : doc.tails) {
        probe(v.ratio);
        probe(v.coefficient);
    }
    return dec;
}

namespace detail {

template <typename R>
R scalar_as(const ParsedScalar& s) {
    if constexpr (std::is_same_v<R, Rat>) {
        if (s.is_decimal) throw std::runtime_error("decimal scalar in exact mode");
        return s.rational;
    } else {
        return s.is_decimal ? s.value : static_cast<double>(s.rational);
    }
}

template <typename R>
Box<R> box_as(const DocBox& b) {
    Vec<R> lo, hi;
    for (const auto& v : b.lo) lo.push_back(scalar_as<R>(v));
    for (const auto& v : b.hi) hi.push_back(scalar_as<R>(v));
    return Box<R>(lo, hi);
}

}  // namespace detail

// Materialise a document as a system in the requested arithmetic.
template <typename R>
GTISystem<R> build_system(const SystemDocument& doc) {
    if (doc.example) {
        const auto& ex = *doc.example;
        auto scalar_or = [&](const std::string& key, const R& dflt) {
            auto it = ex.scalars.find(key);
            return it == ex.scalars.end() ? dflt : detail::scalar_as<R>(it->second);
        };
        auto int_or = [&](const std::string& key, long dflt) {
            auto it = ex.integers.find(key);
            return it == ex.integers.end() ? dflt : it->second;
        };
        if (ex.name == "main_example")
            return build_main_example<R>(scalar_or("a", R(1) / R(20)), int_or("n_max", 6));
        if (ex.name == "fail_uce")
            return build_fail_uce<R>(scalar_or("N", R(2)), scalar_or("r", R(1)), int_or("j_max", doc.params.j_max));
        if (ex.name == "wavelet") {
            // Default 1D dyadic system; custom wavelet systems use entries.
            Mat<R> A({{scalar_or("scale", R(2))}});
            auto G = make_subgroup(Mat<R>::identity(1), 1);
            EnergyProfile<R> psi;
            psi.pieces.push_back(ProfilePiece<R>{Box<R>(Vec<R>{R(1)}, Vec<R>{R(2)}), R(1)});
            psi.pieces.push_back(ProfilePiece<R>{Box<R>(Vec<R>{R(-2)}, Vec<R>{R(-1)}), R(1)});
            long jm = int_or("j_max", 10);
            std::vector<long> jr;
            for (long j = -jm; j <= jm; ++j) jr.push_back(j);
            return build_wavelet_system(A, G, psi, jr);
        }
        throw std::runtime_error("unknown example \"" + ex.name + "\"");
    }

    GTISystem<R> s;
    s.name = "document";
    s.dim = doc.dimension > 0 ? doc.dimension : static_cast<int>(doc.entries.front().matrix.size());
    for (const auto& de : doc.entries) {
        SystemEntry<R> e;
        e.label = de.label;
        e.note = de.note;
        const std::size_t d = de.matrix.size();
        Mat<R> C(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) C(i, l) = detail::scalar_as<R>(de.matrix[i][l]);
        e.subgroup = make_subgroup(C, de.split_rank);
        for (const auto& p : de.profile) {
            ProfilePiece<R> piece;
            piece.value = detail::scalar_as<R>(p.value);
            if (p.box) piece.shape = detail::box_as<R>(*p.box);
            else {
                std::vector<Halfspace<R>> hs;
                for (const auto& [normal, offset] : *p.halfspaces) {
                    Vec<R> n;
                    for (const auto& v : normal) n.push_back(detail::scalar_as<R>(v));
                    hs.push_back(Halfspace<R>{n, detail::scalar_as<R>(offset)});
                }
                piece.shape = ConvexPolytope<R>::from_halfspaces(d, std::move(hs));
            }
            e.profile.pieces.push_back(std::move(piece));
        }
        e.profile = make_profile(std::move(e.profile.pieces));
        s.entries.push_back(std::move(e));
    }
    if (doc.working_box) s.working_box = detail::box_as<R>(*doc.working_box);
    else {
        // Hull of all profile bounding boxes.
        std::optional<Box<R>> hull;
        for (const auto& e : s.entries)
            for (const auto& piece : e.profile.pieces) {
                Box<R> bb = std::visit(
                    [](const auto& shape) -> Box<R> {
                        using T = std::decay_t<decltype(shape)>;
                        if constexpr (std::is_same_v<T, Box<R>>) return shape;
                        else if constexpr (std::is_same_v<T, ConvexPolytope<R>>) return shape.bounding_box();
                        else return Box<R>::cube(2, R(-1), R(0));
                    },
                    piece.shape);
                if (!hull) hull = bb;
                else
                    for (std::size_t i = 0; i < hull->lo.size(); ++i) {
                        if (scalar_traits<R>::lt(bb.lo[i], hull->lo[i])) hull->lo[i] = bb.lo[i];
                        if (scalar_traits<R>::lt(hull->hi[i], bb.hi[i])) hull->hi[i] = bb.hi[i];
                    }
            }
        if (hull) s.working_box = *hull;
        else s.working_box = Box<R>::cube(static_cast<std::size_t>(s.dim), R(-1), R(1));
    }
    for (const auto& [key, t] : doc.tails) {
        ConditionKind k;
        if (key == "lic") k = ConditionKind::LocalIntegrability;
        else if (key == "calderon") k = ConditionKind::Calderon;
        else if (key == "temperate") k = ConditionKind::Temperate;
        else if (key == "uce") k = ConditionKind::Counting;
        else if (key == "round") k = ConditionKind::Round;
        else if (key == "lce") k = ConditionKind::LatticeCounting;
        else throw std::runtime_error("tails: unknown condition \"" + key + "\"");
        s.tails[k] = TailDescriptor<R>::geometric(detail::scalar_as<R>(t.ratio),
                                                  detail::scalar_as<R>(t.coefficient));
    }
    return s;
}

// Machine-readable rendering of a condition report.
template <typename R>
nlohmann::json report_to_json(const ConditionReport<R>& rep) {
    nlohmann::json j;
    j["condition"] = to_string(rep.kind);
    j["window"] = rep.test_set;
    j["mode"] = scalar_traits<R>::mode_name;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows) {
        nlohmann::json r;
        r["label"] = row.label;
        if (!row.note.empty()) r["note"] = row.note;
        r["term"] = format_scalar(row.term);
        r["partial"] = format_scalar(row.partial);
        if (row.count >= 0) r["count"] = row.count;
        if (row.count_upper >= 0) r["count_upper"] = row.count_upper;
        if (row.ratio != 0) r["ratio"] = row.ratio;
        rows.push_back(r);
    }
    j["rows"] = rows;
    j["total"] = format_scalar(rep.total);
    j["tail"] = {{"applicable", rep.tail_applicable}, {"validated", rep.tail_validated}};
    if (rep.tail_validated) {
        j["tail"]["bound"] = format_scalar(rep.tail_bound);
        j["certified_total"] = format_scalar(rep.certified_total);
    }
    if (!rep.growth.ratios.empty())
        j["growth"] = {{"slope", rep.growth.slope},
                       {"r_squared", rep.growth.r_squared},
                       {"ratio_doubling", rep.growth.ratio_doubling},
                       {"slope_min", rep.growth.slope_min},
                       {"r2_min", rep.growth.r2_min}};
    j["verdict"] = to_string(rep.verdict);
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

}  // namespace gtiv
