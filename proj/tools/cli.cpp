#include "cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "meshsuggest/concept_mapper.hpp"
#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/encoder.hpp"
#include "meshsuggest/errors.hpp"
#include "meshsuggest/evaluation.hpp"
#include "meshsuggest/lexical_index.hpp"
#include "meshsuggest/service.hpp"
#include "meshsuggest/text.hpp"
#include "meshsuggest/vocabulary.hpp"

#ifndef MESHSUGGEST_DEFAULT_DATA_DIR
#define MESHSUGGEST_DEFAULT_DATA_DIR "data"
#endif

namespace meshsuggest::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* replay_email = "replay@example.invalid";

/// Bad flag values and other usage problems (exit code 2).
class UsageError : public Error {
public:
    using Error::Error;
};

bool is_url(const std::string& s) { return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0; }

std::string existing(const fs::path& p) { return fs::exists(p) ? p.string() : std::string(); }

std::string pick(const std::string& flag, const std::string& fallback) { return flag.empty() ? fallback : flag; }

bool is_dense(const std::string& method) {
    return method == methods::atomic || method == methods::fragment || method == methods::semantic;
}

std::string output_stem(const std::string& output_file) {
    fs::path p(output_file);
    if (p.extension() == ".tsv") p.replace_extension();
    return p.string();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingFile(path);
    return out;
}

/// Runs argv through CLI11. Returns an exit code when parsing ends the program (help, errors).
std::optional<int> parse_args(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                              std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("meshsuggest");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return std::nullopt;
}

struct Flags {
    std::string method;
    std::string dataset;
    std::string mesh_file;
    std::string mesh_encoding;
    std::string tokenizer;
    std::string model_dir;
    std::optional<int> q_max_len;
    std::optional<int> p_max_len;
    std::string semantic_model_path;
    std::size_t interpolation_depth = 20;
    std::size_t depth = 1;
    std::string output_file;
    std::string date_file;
    std::string email;
    bool evaluate_run = false;
    std::string qrel_file;

    double tau = 0.7;
    std::string replay;
    std::string record;
    std::string eutils_url;
    std::string metamap;
    std::string datasets_config;
    std::size_t workers = 1;
    std::string baseline_run;
};

void add_flags(CLI::App& app, Flags& f) {
    app.add_option("--method", f.method, "Suggestion method: ATM, MetaMap, UMLS, Atomic-BERT, Fragment-BERT, "
                                          "Semantic-BERT, NEW (user registered) or Original")
        ->group("Basic");
    app.add_option("--dataset", f.dataset, "Predefined dataset (MINI, CLEF-2017, CLEF-2018) or dataset folder")
        ->group("Basic");
    app.add_option("--mesh_file", f.mesh_file, "MeSH vocabulary file (TSV)")->group("Basic");

    app.add_option("--mesh_encoding", f.mesh_encoding, "[Optional] precomputed MeSH term embeddings")
        ->group("Neural");
    app.add_option("--tokenizer_name_or_path", f.tokenizer,
                   "Tokenizer for the neural encoder (forwarded to a remote encoder; encoder-side setting)")
        ->group("Neural");
    app.add_option("--model_dir", f.model_dir,
                   "Neural model: keyword embedding file, folder containing keyword_embeddings.tsv, "
                   "or encoder endpoint URL")
        ->group("Neural");
    app.add_option("--q_max_len", f.q_max_len, "Maximum keyword length after tokenization (encoder-side setting)")
        ->group("Neural");
    app.add_option("--p_max_len", f.p_max_len, "Maximum MeSH term length after tokenization (encoder-side setting)")
        ->group("Neural");

    app.add_option("--semantic_model_path", f.semantic_model_path, "Word vector model for semantic keyword grouping")
        ->group("Group");
    app.add_option("--interpolation_depth", f.interpolation_depth, "Per-keyword cut-off used for interpolation")
        ->group("Group")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--depth", f.depth, "Number of MeSH terms retrieved for each keyword group")
        ->group("Group")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--tau", f.tau, "Similarity threshold for semantic keyword grouping")
        ->group("Group")
        ->capture_default_str();

    app.add_option("--output_file", f.output_file, "Run file written by a suggestion run, read by --evaluate_run")
        ->group("PubMed");
    app.add_option("--date_file", f.date_file, "Per-topic date restriction file")->group("PubMed");
    app.add_option("--email", f.email, "Contact email sent to the E-utilities API")->group("PubMed");
    app.add_option("--eutils_url", f.eutils_url, "E-utilities base URL")->group("PubMed");
    app.add_option("--replay", f.replay, "Serve HTTP from a recorded fixture instead of the network")
        ->group("PubMed");
    app.add_option("--record", f.record, "Record live HTTP exchanges into a fixture file")->group("PubMed");
    app.add_option("--metamap", f.metamap, "MetaMap concept table (TSV) or concept mapping endpoint URL")
        ->group("PubMed");
    app.add_option("--workers", f.workers, "Topics processed in parallel")
        ->group("PubMed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    app.add_flag("--evaluate_run", f.evaluate_run, "Evaluate the run in --output_file instead of producing one")
        ->group("Evaluate");
    app.add_option("--qrel_file,--qrel", f.qrel_file, "Relevance judgments (TREC qrels)")->group("Evaluate");
    app.add_option("--baseline_run", f.baseline_run,
                   "Second run to compare against with a paired t-test (adds a ttest row)")
        ->group("Evaluate");
    app.add_option("--datasets_config", f.datasets_config, "JSON map from dataset name to folder")->group("Basic");
}

std::shared_ptr<PubmedClient> make_pubmed(Runtime& rt, const std::string& eutils_url) {
    auto config = PubmedConfig::from_environment();
    if (!eutils_url.empty()) config.base_url = eutils_url;
    return std::make_shared<PubmedClient>(rt.transport(), *rt.clock, config);
}

std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", p);
    return buf;
}

int evaluate(const Flags& f, std::ostream& out) {
    if (f.output_file.empty()) throw UsageError("--evaluate_run needs --output_file");
    std::string qrels_path = f.qrel_file;
    if (qrels_path.empty() && !f.dataset.empty()) qrels_path = resolve_dataset(f.dataset, f.datasets_config).qrels;
    if (qrels_path.empty()) throw UsageError("--evaluate_run needs --qrel_file (or a --dataset with qrels)");

    auto qrels = load_qrels(qrels_path);
    auto report = score(read_run(f.output_file), qrels);
    out << format_report(report);

    if (!f.baseline_run.empty()) {
        auto base = score(read_run(f.baseline_run), qrels);
        std::vector<double> p, r, f1, bp, br, bf1;
        for (std::size_t i = 0; i < report.topics.size(); ++i) {
            if (report.topics[i].relevant == 0) continue;
            p.push_back(report.topics[i].precision);
            r.push_back(report.topics[i].recall);
            f1.push_back(report.topics[i].f1);
            bp.push_back(base.topics[i].precision);
            br.push_back(base.topics[i].recall);
            bf1.push_back(base.topics[i].f1);
        }
        out << "ttest\t" << format_p(paired_t_test(p, bp)) << '\t' << format_p(paired_t_test(f1, bf1)) << '\t'
            << format_p(paired_t_test(r, br)) << "\t\t\n";
    }
    return 0;
}

int suggest_run(const Flags& f, std::ostream& err) {
    if (f.method.empty()) throw UsageError("--method is required");
    if (f.dataset.empty()) throw UsageError("--dataset is required");
    if (f.output_file.empty()) throw UsageError("--output_file is required");
    if (f.depth > f.interpolation_depth) throw UsageError("--depth must not exceed --interpolation_depth");

    MethodRegistry registry;
    if (f.method != original_method && !registry.contains(f.method)) throw UnknownMethod(f.method);
    if (f.replay.empty() && trim(f.email).empty())
        throw UsageError("--email is required when querying the live E-utilities API");

    const auto ds = resolve_dataset(f.dataset, f.datasets_config);
    ResourceOptions opt;
    if (f.method != original_method) opt.mesh_file = pick(f.mesh_file, ds.mesh_file);
    if (is_dense(f.method)) {
        opt.mesh_encoding = pick(f.mesh_encoding, ds.mesh_encoding);
        opt.model_dir = pick(f.model_dir, ds.keyword_embeddings);
        opt.encoder = {f.tokenizer, f.q_max_len, f.p_max_len};
        if (opt.mesh_encoding.empty()) throw UsageError(f.method + " needs --mesh_encoding");
        if (opt.model_dir.empty()) throw UsageError(f.method + " needs --model_dir");
    }
    if (f.method == methods::semantic) {
        opt.semantic_model_path = pick(f.semantic_model_path, ds.word_vectors);
        if (opt.semantic_model_path.empty()) throw UsageError(f.method + " needs --semantic_model_path");
    }
    if (f.method == methods::metamap) {
        opt.metamap = pick(f.metamap, ds.metamap);
        if (opt.metamap.empty()) throw UsageError(f.method + " needs --metamap");
    }
    opt.lexical_index = f.method == methods::umls;
    if (f.method != original_method && opt.mesh_file.empty()) throw UsageError(f.method + " needs --mesh_file");

    auto rt = make_runtime(f.replay, f.record);
    load_resources(*rt, opt);
    rt->resources.pubmed = make_pubmed(*rt, f.eutils_url);
    rt->resources.email = f.email.empty() ? replay_email : f.email;

    auto loaded = load_topics(ds.topics);
    for (const auto& w : loaded.warnings) err << "warning: skipped " << w << "\n";
    const std::string date_file = pick(f.date_file, ds.date_file);
    if (!date_file.empty()) apply_dates(loaded.topics, date_file);

    PipelineOptions popt;
    popt.method = f.method;
    popt.depth = f.depth;
    popt.interpolation_depth = f.interpolation_depth;
    popt.tau = f.tau;
    popt.email = rt->resources.email;
    popt.workers = f.workers;
    auto result = run_pipeline(loaded.topics, registry, rt->resources, popt);
    rt->finish();

    const auto stem = output_stem(f.output_file);
    {
        auto out = open_output(f.output_file);
        write_run(result.records, out);
    }
    {
        auto out = open_output(stem + ".queries.tsv");
        write_queries(result.queries, out);
    }
    {
        nlohmann::ordered_json meta;
        meta["method"] = f.method;
        meta["dataset"] = f.dataset;
        meta["vocabulary_version"] = rt->resources.vocabulary ? rt->resources.vocabulary->version() : "";
        meta["depth"] = f.depth;
        meta["interpolation_depth"] = f.interpolation_depth;
        meta["tau"] = f.tau;
        meta["topics"] = loaded.topics.size();
        meta["succeeded"] = result.succeeded;
        meta["failures"] = nlohmann::ordered_json::array();
        for (const auto& fl : result.failures)
            meta["failures"].push_back({{"topic", fl.topic}, {"error", fl.message}});
        auto out = open_output(stem + ".meta.json");
        out << meta.dump(2) << "\n";
    }

    for (const auto& fl : result.failures) err << "topic " << fl.topic << " failed: " << fl.message << "\n";
    err << f.method << " on " << f.dataset << ": " << result.succeeded << "/" << loaded.topics.size()
        << " topics, " << result.records.size() << " PMIDs -> " << f.output_file << "\n";
    if (result.succeeded == 0) throw AllTopicsFailed("no topic produced a result");
    return 0;
}

int report_error(std::ostream& err, const std::exception& e, int code) {
    err << "error: " << e.what() << "\n";
    return code;
}

HttpServer* active_server = nullptr;

extern "C" void stop_active_server(int) {
    if (active_server) active_server->stop();
}

}  // namespace

std::string bundled_data_dir() {
    if (const char* env = std::getenv("MESHSUGGEST_DATA_DIR"); env && *env) return env;
    return MESHSUGGEST_DEFAULT_DATA_DIR;
}

DatasetPaths resolve_dataset(const std::string& name, const std::string& datasets_config) {
    fs::path dir;
    if (name == "MINI") {
        dir = fs::path(bundled_data_dir()) / "mini";
    } else {
        std::string config = datasets_config;
        if (config.empty())
            if (const char* env = std::getenv("MESHSUGGEST_DATASETS"); env) config = env;
        bool found = false;
        if (!config.empty()) {
            auto doc = nlohmann::json::parse(read_file(config), nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) throw InvalidArgument("datasets config is not a JSON object");
            if (doc.contains(name) && doc[name].is_string()) {
                dir = doc[name].get<std::string>();
                found = true;
            }
        }
        if (!found) {
            if (!fs::is_directory(name))
                throw UsageError("unknown dataset '" + name + "' (use MINI, a --datasets_config entry, or a folder)");
            dir = name;
        }
    }
    if (!fs::is_directory(dir)) throw MissingFile(dir.string());

    DatasetPaths p;
    p.dir = dir.string();
    p.topics = (dir / "topics.jsonl").string();
    if (!fs::exists(p.topics)) throw MissingFile(p.topics);
    p.qrels = existing(dir / "qrels.txt");
    p.mesh_file = existing(dir / "mesh.tsv");
    p.mesh_encoding = existing(dir / "mesh_embeddings.tsv");
    p.keyword_embeddings = existing(dir / "keyword_embeddings.tsv");
    p.word_vectors = existing(dir / "w2v.tsv");
    p.metamap = existing(dir / "metamap.tsv");
    p.date_file = existing(dir / "dates.tsv");
    return p;
}

void Runtime::finish() const {
    if (recorder && !record_path.empty()) recorder->save(record_path);
}

std::unique_ptr<Runtime> make_runtime(const std::string& replay, const std::string& record) {
    auto rt = std::make_unique<Runtime>();
    if (!replay.empty()) {
        rt->base_transport = std::make_unique<ReplayTransport>(parse_fixture(read_file(replay)));
        rt->clock = std::make_unique<FakeClock>();
    } else {
        rt->base_transport = std::make_unique<NetworkTransport>();
        rt->clock = std::make_unique<SystemClock>();
    }
    if (!record.empty()) {
        rt->recorder = std::make_unique<RecordingTransport>(*rt->base_transport);
        rt->record_path = record;
    }
    return rt;
}

void load_resources(Runtime& rt, const ResourceOptions& options) {
    auto& res = rt.resources;
    if (!options.mesh_file.empty()) res.vocabulary = std::make_shared<const Vocabulary>(load_vocabulary(options.mesh_file));

    if (!options.mesh_encoding.empty()) {
        auto store = load_embeddings(options.mesh_encoding);
        if (res.vocabulary)
            for (const auto& id : store.ids())
                if (!res.vocabulary->contains(id))
                    throw InvalidArgument("MeSH encoding has uid " + id + " which the vocabulary does not define");
        res.mesh_embeddings = std::make_shared<const EmbeddingStore>(std::move(store));
    }

    if (!options.model_dir.empty()) {
        const std::size_t dim = res.mesh_embeddings ? res.mesh_embeddings->dim() : 0;
        if (is_url(options.model_dir)) {
            if (dim == 0) throw InvalidArgument("an encoder endpoint needs --mesh_encoding to fix the dimension");
            res.encoder = std::make_shared<const HttpEncoder>(rt.transport(), options.model_dir, dim, options.encoder);
        } else {
            fs::path path = options.model_dir;
            if (fs::is_directory(path)) path /= "keyword_embeddings.tsv";
            auto encoder = std::make_shared<const StoreEncoder>(load_embeddings(path.string()));
            if (dim && encoder->dim() != dim)
                throw DimensionMismatch(0, "keyword embeddings have dim " + std::to_string(encoder->dim()) +
                                               ", MeSH encoding has " + std::to_string(dim));
            res.encoder = std::move(encoder);
        }
    }

    if (!options.semantic_model_path.empty())
        res.word_vectors = std::make_shared<const WordVectorModel>(load_word_vectors(options.semantic_model_path));

    if (options.lexical_index && res.vocabulary)
        res.lexical_index = std::make_shared<const LexicalIndex>(LexicalIndex::build(*res.vocabulary));

    if (!options.metamap.empty()) {
        if (is_url(options.metamap))
            res.concept_mapper = std::make_shared<const HttpConceptMapper>(rt.transport(), options.metamap);
        else
            res.concept_mapper = std::make_shared<const StubConceptMapper>(load_stub_concept_mapper(options.metamap));
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Suggest MeSH headings for PubMed search strategies and evaluate the rewritten queries"};
    app.name("meshsuggest");
    Flags f;
    add_flags(app, f);
    if (auto code = parse_args(app, args, out, err)) return *code;

    try {
        return f.evaluate_run ? evaluate(f, out) : suggest_run(f, err);
    } catch (const UsageError& e) {
        return report_error(err, e, 2);
    } catch (const UnknownMethod& e) {
        return report_error(err, e, 2);
    } catch (const Error& e) {
        return report_error(err, e, 1);
    } catch (const std::exception& e) {
        return report_error(err, e, 1);
    }
}

int run_server(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"HTTP MeSH term suggestion service (/suggest, /log, /health)"};
    app.name("meshsuggest-server");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string dataset, mesh_file, mesh_encoding, model_dir, semantic_model_path, metamap, log_file, datasets_config;
    std::string replay, record, eutils_url, email, tokenizer;
    std::optional<int> q_max_len, p_max_len;
    ServiceConfig config;
    app.add_option("--host", host, "Interface to bind")->envname("MESHSUGGEST_HOST")->capture_default_str();
    app.add_option("--port", port, "Port to bind (0 picks a free one)")->envname("MESHSUGGEST_PORT")->capture_default_str();
    app.add_option("--dataset", dataset, "Dataset folder whose resource files are used as defaults")
        ->envname("MESHSUGGEST_DATASET");
    app.add_option("--datasets_config", datasets_config, "JSON map from dataset name to folder");
    app.add_option("--mesh_file", mesh_file, "MeSH vocabulary file (TSV)");
    app.add_option("--mesh_encoding", mesh_encoding, "Precomputed MeSH term embeddings");
    app.add_option("--model_dir", model_dir, "Keyword embedding file, folder, or encoder endpoint URL")
        ->envname("MESHSUGGEST_MODEL_DIR");
    app.add_option("--tokenizer_name_or_path", tokenizer, "Forwarded to a remote encoder");
    app.add_option("--q_max_len", q_max_len, "Forwarded to a remote encoder");
    app.add_option("--p_max_len", p_max_len, "Forwarded to a remote encoder");
    app.add_option("--semantic_model_path", semantic_model_path, "Word vector model for semantic grouping");
    app.add_option("--metamap", metamap, "MetaMap concept table or endpoint URL (with --allow_lexical)");
    app.add_option("--log_file", log_file, "Append-only interaction log (JSON lines); /log is disabled without it")
        ->envname("MESHSUGGEST_LOG_FILE");
    app.add_option("--interpolation_depth", config.interpolation_depth, "Per-keyword cut-off for interpolation")
        ->capture_default_str();
    app.add_option("--tau", config.tau, "Semantic grouping threshold")->capture_default_str();
    app.add_flag("--allow_lexical", config.allow_lexical, "Also accept ATM, MetaMap and UMLS request types");
    app.add_option("--cors_origin", config.cors_origin, "Access-Control-Allow-Origin value")->capture_default_str();
    app.add_option("--replay", replay, "Serve upstream HTTP from a recorded fixture");
    app.add_option("--record", record, "Record upstream HTTP into a fixture written on shutdown");
    app.add_option("--eutils_url", eutils_url, "E-utilities base URL");
    app.add_option("--email", email, "Contact email for E-utilities (ATM type)")->envname("MESHSUGGEST_EMAIL");
    if (auto code = parse_args(app, args, out, err)) return *code;

    try {
        DatasetPaths ds;
        if (!dataset.empty()) ds = resolve_dataset(dataset, datasets_config);
        config.log_path = log_file;
        ResourceOptions opt;
        opt.mesh_file = pick(mesh_file, ds.mesh_file);
        opt.mesh_encoding = pick(mesh_encoding, ds.mesh_encoding);
        opt.model_dir = pick(model_dir, ds.keyword_embeddings);
        opt.semantic_model_path = pick(semantic_model_path, ds.word_vectors);
        opt.encoder = {tokenizer, q_max_len, p_max_len};
        if (config.allow_lexical) {
            opt.metamap = pick(metamap, ds.metamap);
            opt.lexical_index = true;
        }
        if (opt.mesh_file.empty()) throw UsageError("--mesh_file (or --dataset) is required");

        auto rt = make_runtime(replay, record);
        load_resources(*rt, opt);
        if (config.allow_lexical) {
            rt->resources.pubmed = make_pubmed(*rt, eutils_url);
            rt->resources.email = email.empty() ? replay_email : email;
        }

        SuggestionService service(config);
        service.load(rt->resources);
        HttpServer server(service);
        const int bound = server.bind(host, port);
        if (bound < 0) throw InvalidArgument("cannot bind " + host + ":" + std::to_string(port));
        err << "listening on http://" << host << ":" << bound << "\n";
        active_server = &server;
        std::signal(SIGINT, stop_active_server);
        std::signal(SIGTERM, stop_active_server);
        server.listen();
        active_server = nullptr;
        rt->finish();
        return 0;
    } catch (const UsageError& e) {
        return report_error(err, e, 2);
    } catch (const std::exception& e) {
        return report_error(err, e, 1);
    }
}

}  // namespace meshsuggest::cli
