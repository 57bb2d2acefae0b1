#include <doctest.h>

#include "gsf/instance.hpp"

using namespace gsf;

namespace {

Json minimal_file() {
    return Json::parse(R"({
      "schema_version": 1,
      "config": {"d": 2, "window": {"words": 3, "gamma": 1}, "seed": 9},
      "spaces": [{"name": "H", "letters": [
        {"name": "u", "degree": 1}, {"name": "v", "degree": 1},
        {"name": "p", "degree": 0}, {"name": "q", "degree": 2}]}],
      "kernels": [{"name": "s", "space": "H",
                   "entries": [["u", "v", "1"], ["p", "q", "1/2"]]}],
      "presentations": [
        {"name": "C", "type": "free_bv", "space": "H", "omega": []},
        {"name": "W", "type": "tables", "space": "H",
         "bracket": [["u", "v", [[[], 0, "1"]]], ["v", "u", [[[], 0, "-1"]]]],
         "delta":   [["u", "v", [[[], 0, "1"]]], ["v", "u", [[[], 0, "-1"]]]]}],
      "elements": [{"name": "S", "space": "H", "terms": [[["p","q"], 1, "2/3"]]}],
      "campaigns": [
        {"id": "ev", "type": "eval", "op": "K", "kernel": "s",
         "inputs": [[["p","q"], 0]]},
        {"id": "en", "type": "enumerate", "g": 1, "n": 0, "m": 1}
      ]
    })");
}

}  // namespace

TEST_CASE("instance parsing and strictness") {
    InstanceFile f = InstanceFile::parse(minimal_file());
    CHECK(f.config.d == 2);
    CHECK(f.config.gamma_degree() == 2);
    CHECK(f.spaces.count("H"));
    CHECK(f.kernels.count("s"));
    CHECK(f.presentations.count("C"));
    CHECK(f.presentations.count("W"));
    CHECK(f.elements.at("S").terms().size() == 1);

    Json bad = minimal_file();
    bad["unexpected"] = 1;
    CHECK_THROWS_AS(InstanceFile::parse(bad), std::invalid_argument);

    Json bad2 = minimal_file();
    bad2["config"]["typo"] = true;
    CHECK_THROWS_AS(InstanceFile::parse(bad2), std::invalid_argument);

    Json bad3 = minimal_file();
    bad3["schema_version"] = 2;
    CHECK_THROWS_AS(InstanceFile::parse(bad3), std::invalid_argument);

    Json bad4 = minimal_file();
    bad4["kernels"][0]["space"] = "nope";
    CHECK_THROWS_AS(InstanceFile::parse(bad4), std::invalid_argument);
}

TEST_CASE("eval campaign") {
    InstanceFile f = InstanceFile::parse(minimal_file());
    CampaignResult r = run_campaign(f, f.campaigns[0], nullptr);
    CHECK(r.pass);
    // K_1 on p.q with H(p,q) = 1/2: identity term plus the self-loop gamma term.
    std::string elem = r.details["element"].get<std::string>();
    CHECK(elem.find("p.q") != std::string::npos);
    CHECK(elem.find("g^1") != std::string::npos);

    // Window overflow: word longer than config window.
    Json over = f.campaigns[0];
    over["inputs"] = Json::array({Json::array({Json::array({"p", "q", "p", "q"}), 0})});
    CampaignResult r2 = run_campaign(f, over, nullptr);
    CHECK(r2.input_error);
    CHECK_FALSE(r2.pass);
}

TEST_CASE("enumerate campaign report shape") {
    InstanceFile f = InstanceFile::parse(minimal_file());
    CampaignResult r = run_campaign(f, f.campaigns[1], nullptr);
    CHECK(r.pass);
    CHECK(r.details["count"].get<int>() == 2);
    // Sorted by canonical form.
    auto& rows = r.details["classes"];
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["canonical"].get<std::string>() < rows[1]["canonical"].get<std::string>());
}

TEST_CASE("reports are byte-identical for fixed file, seed and version") {
    InstanceFile f = InstanceFile::parse(minimal_file());
    std::string dump = minimal_file().dump();

    auto run_all = [&]() {
        std::vector<CampaignResult> rs;
        for (auto& c : f.campaigns) rs.push_back(run_campaign(f, c, nullptr));
        return make_report(f, dump, rs).dump(2);
    };
    std::string a = run_all();
    std::string b = run_all();
    CHECK(a == b);

    // Timings stay out of the deterministic report by default.
    CHECK(a.find("\"timings_ms\": null") != std::string::npos);

    // The digest covers the input: a different seed changes it.
    InstanceFile g = InstanceFile::parse(minimal_file());
    g.config.seed = 10;
    std::vector<CampaignResult> rs;
    for (auto& c : g.campaigns) rs.push_back(run_campaign(g, c, nullptr));
    std::string c2 = make_report(g, dump, rs).dump(2);
    CHECK(a.find("input_digest") != std::string::npos);
    CHECK(a != c2);
}

TEST_CASE("seeded campaigns reproduce counterexamples deterministically") {
    CampaignResult a = run_bvinf_campaign(4242, 5, 3, 2, 3, 2, false, nullptr);
    CampaignResult b = run_bvinf_campaign(4242, 5, 3, 2, 3, 2, false, nullptr);
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].detail == b.checks[i].detail);
    }
}

TEST_CASE("commutation campaign without certificates reports the precondition") {
    CampaignResult r = run_commutation_campaign(7, 1, 2, {2, 1}, 2, false, nullptr);
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.checks.empty());
    CHECK(r.checks[0].name == "commutation_precondition");
    CHECK(r.checks[0].pass);  // the failure is correctly reported
}

TEST_CASE("taylor family serialization round trip") {
    InstanceFile f = InstanceFile::parse(minimal_file());
    SpacePtr sp = f.spaces.at("H");
    const GradedSpace& s = *sp;
    TableMorphism m(sp, sp);
    Term tu{SymWord{{s.id_of("u")}}, 0}, tv{SymWord{{s.id_of("v")}}, 1};
    m.set({tu}, Element::single(s, tu, rat(2)));
    m.set({tu, tv}, Element::unit(s, rat(-1, 3), 1));
    Json j = taylor_to_json(m);
    TableMorphism back = taylor_from_json(sp, sp, j);
    CHECK(back.entries().size() == m.entries().size());
    CHECK(back.apply({tu}) == m.apply({tu}));
    CHECK(back.apply({tv, tu}) == m.apply({tv, tu}));  // sorted lookup with Koszul sign

    Element e = Element::single(s, tv, rat(5, 7));
    CHECK(element_from_json(s, element_to_json(e)) == e);
}

TEST_CASE("presentation and kernel serialization round trip") {
    Rng rng(61);
    BDPresentation w = gen::random_w_presentation(rng, 4, 2);
    Json pj = presentation_to_json(w, "W");
    pj["space"] = "V";

    Json file;
    file["schema_version"] = 1;
    file["config"] = Json{{"d", 2}};
    file["spaces"] = Json::array({space_to_json(w.space(), "V")});
    file["presentations"] = Json::array({pj});
    InstanceFile parsed = InstanceFile::parse(file);
    const BDPresentation& back = parsed.presentations.at("W");
    CHECK(*back.sp == w.space());
    CHECK(check_bd_axioms(back, {3, 1}).ok());
    // Same structure constants: compare brackets on a sample word pair.
    auto words = all_words(w.space(), 1, 2);
    for (auto& u : words)
        for (auto& v : words) {
            Element a = w.bracket_terms(Term{u, 0}, Term{v, 0});
            Element b = back.bracket_terms(Term{u, 0}, Term{v, 0});
            CHECK(a.terms() == b.terms());
        }

    SpacePtr sp = parsed.spaces.at("V");
    ContractionKernel k = gen::random_kernel(rng, sp);
    Json kj = kernel_to_json(k, "k", "V");
    Json file2 = file;
    file2["kernels"] = Json::array({kj});
    InstanceFile parsed2 = InstanceFile::parse(file2);
    CHECK(parsed2.kernels.at("k").entries == k.entries);
}
