#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "meshsuggest/http.hpp"

using namespace meshsuggest;

namespace {

HttpRequest get(std::vector<std::pair<std::string, std::string>> params) {
    HttpRequest r;
    r.url = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi";
    r.params = std::move(params);
    return r;
}

}  // namespace

TEST(UrlEncode, ReservedCharacters) {
    EXPECT_EQ(url_encode("a b"), "a%20b");
    EXPECT_EQ(url_encode("tb[MeSH Terms]"), "tb%5BMeSH%20Terms%5D");
    EXPECT_EQ(url_encode("AZaz09-_.~"), "AZaz09-_.~");
    EXPECT_EQ(url_encode("\"x\""), "%22x%22");
}

TEST(FixtureKey, IgnoresContactParamsAndParamOrder) {
    auto a = get({{"term", "tb"}, {"db", "pubmed"}, {"email", "a@b.c"}, {"api_key", "k"}});
    auto b = get({{"db", "pubmed"}, {"tool", "x"}, {"term", "tb"}});
    EXPECT_EQ(fixture_key(a), fixture_key(b));
    auto c = get({{"db", "pubmed"}, {"term", "tbc"}});
    EXPECT_NE(fixture_key(a), fixture_key(c));
    auto post = a;
    post.method = "POST";
    EXPECT_NE(fixture_key(a), fixture_key(post));
    auto with_body = a;
    with_body.body = "{}";
    EXPECT_NE(fixture_key(a), fixture_key(with_body));
}

TEST(ReplayTransport, WalksResponsesThenRepeatsLast) {
    auto req = get({{"term", "tb"}});
    ReplayTransport replay({{req, {{429, ""}, {200, "one"}, {200, "two"}}}});
    EXPECT_EQ(replay.send(req).status, 429);
    EXPECT_EQ(replay.send(req).body, "one");
    EXPECT_EQ(replay.send(req).body, "two");
    EXPECT_EQ(replay.send(req).body, "two");
    EXPECT_EQ(replay.served(), 4u);
}

TEST(ReplayTransport, StatusZeroIsTransportError) {
    auto req = get({{"term", "tb"}});
    ReplayTransport replay({{req, {{0, ""}, {200, "ok"}}}});
    EXPECT_THROW(replay.send(req), TransportError);
    EXPECT_EQ(replay.send(req).body, "ok");
}

TEST(ReplayTransport, UnknownRequestIsReplayMiss) {
    ReplayTransport replay({{get({{"term", "tb"}}), {{200, ""}}}});
    EXPECT_THROW(replay.send(get({{"term", "glaucoma"}})), ReplayMiss);
}

TEST(ReplayTransport, MatchesIgnoringEmail) {
    ReplayTransport replay({{get({{"term", "tb"}, {"email", "rec@x.org"}}), {{200, "hit"}}}});
    EXPECT_EQ(replay.send(get({{"email", "other@y.org"}, {"term", "tb"}})).body, "hit");
}

TEST(Fixture, RecordSaveLoadReplay) {
    int calls = 0;
    fixtures::ScriptedTransport inner([&](const HttpRequest& r) {
        ++calls;
        return HttpResponse{calls == 1 ? 503 : 200, "body-" + fixtures::param(r, "term")};
    });
    RecordingTransport rec(inner);
    auto req = get({{"term", "tb"}, {"email", "secret@x.org"}, {"api_key", "XYZ"}});
    EXPECT_EQ(rec.send(req).status, 503);
    EXPECT_EQ(rec.send(req).status, 200);
    EXPECT_EQ(rec.send(get({{"term", "eye"}})).body, "body-eye");
    ASSERT_EQ(rec.interactions().size(), 2u);
    EXPECT_EQ(rec.interactions()[0].responses.size(), 2u);

    fixtures::TempDir dir;
    rec.save(dir.path("f.json"));
    auto text = fixtures::read(dir.path("f.json"));
    EXPECT_EQ(text.find("secret@x.org"), std::string::npos);
    EXPECT_EQ(text.find("XYZ"), std::string::npos);

    auto replay = ReplayTransport::load(dir.path("f.json"));
    EXPECT_EQ(replay.send(req).status, 503);
    EXPECT_EQ(replay.send(req).body, "body-tb");
    EXPECT_EQ(replay.send(get({{"term", "eye"}})).body, "body-eye");
}

TEST(Fixture, SerializeParseRoundTrip) {
    std::vector<RecordedInteraction> in{{get({{"term", "a b"}}), {{200, "x"}, {0, ""}}}};
    HttpRequest post;
    post.method = "POST";
    post.url = "http://localhost:1/encode";
    post.body = R"({"texts":["tb"]})";
    in.push_back({post, {{200, "{}"}}});
    auto out = parse_fixture(serialize_fixture(in));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(fixture_key(out[0].request), fixture_key(in[0].request));
    EXPECT_EQ(out[0].responses[1].status, 0);
    EXPECT_EQ(out[1].request.body, post.body);
}

TEST(Fixture, JsonBodyShorthand) {
    auto out = parse_fixture(R"({"interactions":[{"request":{"url":"http://h/p"},
        "responses":[{"status":200,"json":{"a":[1,2]}}]}]})");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].request.method, "GET");
    EXPECT_EQ(nlohmann::json::parse(out[0].responses[0].body), nlohmann::json::parse(R"({"a":[1,2]})"));
}

TEST(Fixture, Malformed) {
    EXPECT_THROW(parse_fixture("not json"), MalformedResponse);
    EXPECT_THROW(parse_fixture(R"({"interactions":[{"responses":[]}]})"), MalformedResponse);
    EXPECT_THROW(ReplayTransport::load("/nonexistent/fixture.json"), MissingFile);
}

TEST(NetworkTransport, TalksToLocalServer) {
    httplib::Server svr;
    svr.Get("/echo", [](const httplib::Request& req, httplib::Response& res) {
        res.set_content(req.get_param_value("q"), "text/plain");
    });
    svr.Post("/echo", [](const httplib::Request& req, httplib::Response& res) {
        res.status = 201;
        res.set_content(req.body, "application/json");
    });
    int port = svr.bind_to_any_port("127.0.0.1");
    std::thread t([&] { svr.listen_after_bind(); });
    svr.wait_until_ready();

    NetworkTransport net(std::chrono::seconds(5));
    HttpRequest r;
    r.url = "http://127.0.0.1:" + std::to_string(port) + "/echo";
    r.params = {{"q", "a b&c"}};
    auto resp = net.send(r);
    EXPECT_EQ(resp.status, 200);
    EXPECT_EQ(resp.body, "a b&c");

    r.method = "POST";
    r.params.clear();
    r.body = "{\"x\":1}";
    resp = net.send(r);
    EXPECT_EQ(resp.status, 201);
    EXPECT_EQ(resp.body, r.body);

    r.url = "http://127.0.0.1:" + std::to_string(port) + "/missing";
    EXPECT_EQ(net.send(r).status, 404);

    svr.stop();
    t.join();
    r.url = "http://127.0.0.1:" + std::to_string(port) + "/echo";
    EXPECT_THROW(net.send(r), TransportError);
}
