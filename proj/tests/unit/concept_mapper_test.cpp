#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "meshsuggest/concept_mapper.hpp"
#include "meshsuggest/errors.hpp"
#include "meshsuggest/http.hpp"

using namespace meshsuggest;

TEST(StubConceptMapper, NormalisedLookup) {
    StubConceptMapper m(std::map<std::string, std::vector<std::string>>{{"Heart Attack", {"D009203"}}});
    std::vector<std::string> texts{"heart  attack", "unknown"};
    EXPECT_EQ(m.map_concepts(texts), (std::vector<std::vector<std::string>>{{"D009203"}, {}}));
}

TEST(StubConceptMapper, LoadsMiniTable) {
    auto m = load_stub_concept_mapper(fixtures::mini_dir() + "/metamap.tsv");
    std::vector<std::string> texts{"eye", "tuberculosis", "intraocular pressure"};
    EXPECT_EQ(m.map_concepts(texts),
              (std::vector<std::vector<std::string>>{{"D005123"}, {"C0041296", "D014376"}, {"D007429", "D009798"}}));
}

TEST(StubConceptMapper, BadFile) {
    fixtures::TempDir dir;
    fixtures::write(dir.path("m.tsv"), "eye\tD1\textra\n");
    EXPECT_THROW(load_stub_concept_mapper(dir.path("m.tsv")), MalformedRecord);
    EXPECT_THROW(load_stub_concept_mapper(dir.path("absent.tsv")), MissingFile);
}

TEST(HttpConceptMapper, PostsTexts) {
    fixtures::ScriptedTransport t([](const HttpRequest&) {
        return HttpResponse{200, R"({"concepts":[["D005123"],[]]})"};
    });
    HttpConceptMapper m(t, "http://mapper.local/map");
    std::vector<std::string> texts{"eye", "zzz"};
    EXPECT_EQ(m.map_concepts(texts), (std::vector<std::vector<std::string>>{{"D005123"}, {}}));
    auto req = t.requests().at(0);
    EXPECT_EQ(req.method, "POST");
    EXPECT_EQ(nlohmann::json::parse(req.body)["texts"], nlohmann::json({"eye", "zzz"}));
}

TEST(HttpConceptMapper, FailuresAreUpstreamUnavailable) {
    std::vector<std::string> texts{"eye"};
    for (const auto& resp : std::vector<HttpResponse>{{500, ""}, {200, "x"}, {200, R"({"concepts":[]})"}}) {
        fixtures::ScriptedTransport t([&](const HttpRequest&) { return resp; });
        HttpConceptMapper m(t, "http://mapper.local/map");
        EXPECT_THROW(m.map_concepts(texts), UpstreamUnavailable) << resp.status << resp.body;
    }
    fixtures::ScriptedTransport down([](const HttpRequest&) -> HttpResponse { throw TransportError("refused"); });
    HttpConceptMapper m(down, "http://mapper.local/map");
    EXPECT_THROW(m.map_concepts(texts), UpstreamUnavailable);
}
