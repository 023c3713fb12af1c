#include <catch2/catch_amalgamated.hpp>

#include "gtiv/document.hpp"

using namespace gtiv;

namespace {

const char* kExplicitDoc = R"({
  "version": "tis-1",
  "dimension": 2,
  "entries": [
    {"label": 1, "matrix": [["1","0"],["0","1"]], "split_rank": 2,
     "profile": [{"box": {"lo": ["-1","-1"], "hi": ["1","1"]}, "value": "1/2"}]},
    {"label": 2, "matrix": [["1/2","0"],["1/3","2"]], "split_rank": 2,
     "profile": [{"halfspaces": [
        {"normal": ["-1","0"], "offset": "0"},
        {"normal": ["0","-1"], "offset": "0"},
        {"normal": ["1","1"], "offset": "1"}], "value": "3"}]}
  ],
  "working_box": {"lo": ["-2","-2"], "hi": ["2","2"]},
  "test_sets": [{"lo": ["0","0"], "hi": ["1","1"]}],
  "params": {"j_max": 12, "grid": 8},
  "tails": {"calderon": {"kind": "geometric", "ratio": "1/2", "coefficient": "4"}}
})";

}  // namespace

TEST_CASE("documents round-trip bit-exactly in rational mode") {
    auto doc = parse_document(nlohmann::json::parse(kExplicitDoc));
    auto emitted = to_json(doc);
    auto doc2 = parse_document(emitted);
    CHECK(to_json(doc2) == emitted);
    CHECK(!document_uses_decimals(doc));
    CHECK(emitted["entries"][1]["matrix"][1][0] == "1/3");
}

TEST_CASE("explicit entries build a working system") {
    auto doc = parse_document(nlohmann::json::parse(kExplicitDoc));
    auto s = build_system<Rat>(doc);
    REQUIRE(s.entries.size() == 2);
    CHECK(covolume(s.entries[1].subgroup) == Rat(1));
    CHECK(total_mass(s.entries[1].profile) == Rat(3, 2));
    CHECK(s.working_box.lo == Vec<Rat>{Rat(-2), Rat(-2)});
    auto rep = calderon_partial(s, detail::box_as<Rat>(doc.test_sets.front()));
    CHECK(rep.rows.size() == 2);
    CHECK(s.tails.count(ConditionKind::Calderon) == 1);
}

TEST_CASE("decimal scalars force float mode") {
    auto j = nlohmann::json::parse(kExplicitDoc);
    j["entries"][0]["profile"][0]["value"] = "0.5";
    auto doc = parse_document(j);
    CHECK(document_uses_decimals(doc));
    auto s = build_system<double>(doc);
    CHECK(total_mass(s.entries[0].profile) == Catch::Approx(2.0));
    CHECK_THROWS(build_system<Rat>(doc));
}

TEST_CASE("example documents defer to the builders") {
    nlohmann::json j = {{"version", "tis-1"},
                        {"dimension", 2},
                        {"example", {{"name", "fail_uce"}, {"N", "3"}, {"r", "1/2"}, {"j_max", 6}}}};
    auto s = build_system<Rat>(parse_document(j));
    CHECK(s.entries.size() == 6);
    CHECK(s.name == "fail_uce");
    CHECK(s.working_box.hi == Vec<Rat>{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("schema violations are rejected with field context") {
    CHECK_THROWS_WITH(parse_document(nlohmann::json{{"dimension", 2}}),
                      Catch::Matchers::ContainsSubstring("version"));
    nlohmann::json bad = {{"version", "tis-0"}, {"dimension", 2}};
    CHECK_THROWS_WITH(parse_document(bad), Catch::Matchers::ContainsSubstring("unsupported version"));
    nlohmann::json nomatrix = nlohmann::json::parse(kExplicitDoc);
    nomatrix["entries"][0].erase("matrix");
    CHECK_THROWS_WITH(parse_document(nomatrix), Catch::Matchers::ContainsSubstring("matrix"));
    nlohmann::json badscalar = nlohmann::json::parse(kExplicitDoc);
    badscalar["entries"][0]["profile"][0]["value"] = "x/y";
    CHECK_THROWS_WITH(parse_document(badscalar), Catch::Matchers::ContainsSubstring("bad scalar"));
}

TEST_CASE("condition reports serialise rationals as strings") {
    auto doc = parse_document(nlohmann::json::parse(kExplicitDoc));
    auto s = build_system<Rat>(doc);
    auto rep = calderon_partial(s, Box<Rat>::cube(2, Rat(0), Rat(1)));
    auto j = report_to_json(rep);
    CHECK(j["mode"] == "exact");
    CHECK(j["rows"][0]["term"].is_string());
    CHECK(j.contains("verdict"));
}
