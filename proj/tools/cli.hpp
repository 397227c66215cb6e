#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meshsuggest/http.hpp"
#include "meshsuggest/pubmed.hpp"
#include "meshsuggest/suggesters.hpp"

namespace meshsuggest::cli {

/// Files of a resolved dataset directory. Missing optional files are left empty.
struct DatasetPaths {
    std::string dir;
    std::string topics;
    std::string qrels;
    std::string mesh_file;
    std::string mesh_encoding;
    std::string keyword_embeddings;
    std::string word_vectors;
    std::string metamap;
    std::string date_file;
};

/// "MINI" is the bundled dataset; other names come from the datasets config
/// (`{"CLEF-2017": "/data/clef2017", ...}`) or are taken as a directory path.
DatasetPaths resolve_dataset(const std::string& name, const std::string& datasets_config);

/// Directory holding the bundled datasets (MESHSUGGEST_DATA_DIR overrides the build default).
std::string bundled_data_dir();

/// What to load. Empty paths skip the resource.
struct ResourceOptions {
    std::string mesh_file;
    std::string mesh_encoding;
    std::string model_dir;  // keyword embedding file, directory holding one, or http(s) encoder URL
    std::string semantic_model_path;
    std::string metamap;  // stub TSV or http(s) URL
    EncoderOptions encoder;
    bool lexical_index = false;
};

/// Owns the transports and clock that the loaded resources reference.
struct Runtime {
    std::unique_ptr<HttpTransport> base_transport;
    std::unique_ptr<RecordingTransport> recorder;
    std::unique_ptr<Clock> clock;
    std::string record_path;
    Resources resources;

    HttpTransport& transport() { return recorder ? static_cast<HttpTransport&>(*recorder) : *base_transport; }
    /// Writes the recorded fixture when recording.
    void finish() const;
};

/// Replay serves from a fixture file instead of the network; recording wraps whichever is in use.
std::unique_ptr<Runtime> make_runtime(const std::string& replay, const std::string& record);

void load_resources(Runtime& rt, const ResourceOptions& options);

/// Entry point shared by the executable and tests. Returns the process exit code:
/// 0 success, 1 run failure (no topic succeeded, missing files, unjudged topics), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The HTTP suggestion server.
int run_server(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meshsuggest::cli
