// Command-line front end. Talks to the engine only through the C API.

#include "causalir/causalir.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct CliError : std::runtime_error {
    cir_status status;
    CliError(cir_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(cir_status status, const std::string& what) {
    if (status != CIR_OK) {
        throw CliError(status, what + ": " + cir_status_name(status) + ": " + cir_last_error());
    }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using LexicalPtr = std::unique_ptr<cir_lexical_index, Deleter<cir_lexical_index, cir_lexical_index_free>>;
using SemanticPtr = std::unique_ptr<cir_semantic_index, Deleter<cir_semantic_index, cir_semantic_index_free>>;
using ProviderPtr = std::unique_ptr<cir_provider, Deleter<cir_provider, cir_provider_free>>;
using ConfigPtr = std::unique_ptr<cir_config, Deleter<cir_config, cir_config_free>>;
using ResultsPtr = std::unique_ptr<cir_results, Deleter<cir_results, cir_results_free>>;
using EvaluationPtr = std::unique_ptr<cir_evaluation, Deleter<cir_evaluation, cir_evaluation_free>>;

cir_corpus_format corpus_format(const std::string& name) {
    return name == "trec" || name == "sgml" ? CIR_CORPUS_TREC : CIR_CORPUS_JSONL;
}

LexicalPtr load_lexical(const std::string& path) {
    cir_lexical_index* raw = nullptr;
    check(cir_lexical_index_load(path.c_str(), &raw), "loading " + path);
    return LexicalPtr(raw);
}

SemanticPtr load_semantic(const std::string& store, const std::string& forest) {
    cir_semantic_index* raw = nullptr;
    check(cir_semantic_index_load(store.c_str(), forest.empty() ? nullptr : forest.c_str(), &raw),
          "loading " + store);
    return SemanticPtr(raw);
}

ProviderPtr make_provider(const std::string& spec) {
    cir_provider* raw = nullptr;
    check(cir_provider_create(spec.c_str(), &raw), "creating provider " + spec);
    return ProviderPtr(raw);
}

void print_results(const cir_results* results) {
    for (std::size_t i = 0; i < cir_results_count(results); ++i) {
        std::printf("%zu\t%s\t%.6f\n", i + 1, cir_results_doc_id(results, i), cir_results_score(results, i));
    }
}

// Options shared by run-topics and run-baseline.
struct RunOptions {
    std::string topics;
    std::string lexical;
    std::string store;
    std::string forest;
    std::string provider;
    std::string config;
    std::string out;
    std::string tag = "causalir";
    std::vector<std::string> overrides;
    std::optional<std::size_t> per_query_k;
    std::optional<std::size_t> final_k;
    std::optional<double> k1;
    std::optional<double> b;
    std::optional<std::string> strategies;
    std::optional<std::size_t> max_keywords;
    std::optional<std::string> normalization;
    std::optional<std::string> semantic_mode;
    std::optional<std::size_t> search_budget;
    std::optional<std::size_t> threads;
    bool lenient = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--topics", o.topics, "Topics file (JSON lines: id, title, narrative)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--lexical", o.lexical, "Lexical index snapshot")->check(CLI::ExistingFile);
    cmd->add_option("--store", o.store, "Vector store snapshot")->check(CLI::ExistingFile);
    cmd->add_option("--forest", o.forest, "ANN forest snapshot")->check(CLI::ExistingFile);
    cmd->add_option("--provider", o.provider, "Embedding provider: hash:<dim>:<seed> | file:<path> | http:<url>");
    cmd->add_option("--config", o.config, "Pipeline configuration file (key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--set", o.overrides, "Configuration override key=value (repeatable)");
    cmd->add_option("--per-query-k", o.per_query_k, "Hits retrieved per strategy")->check(CLI::PositiveNumber);
    cmd->add_option("--final-k", o.final_k, "Hits kept after aggregation")->check(CLI::PositiveNumber);
    cmd->add_option("--k1", o.k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    cmd->add_option("--b", o.b, "BM25 b")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--strategies", o.strategies, "Comma list of enabled strategies (q1,q2,q3)");
    cmd->add_option("--max-keywords", o.max_keywords, "Narrative keywords used by Q3");
    cmd->add_option("--normalization", o.normalization, "Score normalization before summing")
        ->check(CLI::IsMember({"none", "minmax"}));
    cmd->add_option("--semantic-mode", o.semantic_mode, "Semantic search mode")
        ->check(CLI::IsMember({"auto", "exact", "ann"}));
    cmd->add_option("--search-budget", o.search_budget, "ANN candidate budget (0 = max(2k, 100))");
    cmd->add_option("--threads", o.threads, "Worker threads (default: available cores)");
    cmd->add_flag("--lenient", o.lenient, "Continue with surviving strategies when one fails");
    cmd->add_option("--tag", o.tag, "Run tag written in the last column");
    cmd->add_option("--out", o.out, "Output run file")->required();
}

ConfigPtr build_config(const RunOptions& o) {
    cir_config* raw = nullptr;
    check(cir_config_create(&raw), "creating config");
    ConfigPtr config(raw);
    if (!o.config.empty()) check(cir_config_load(o.config.c_str(), config.get()), "loading " + o.config);
    auto set = [&](const std::string& key, const std::string& value) {
        check(cir_config_set(config.get(), key.c_str(), value.c_str()), "setting " + key);
    };
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw CliError(CIR_ERR_INVALID_ARGUMENT, "--set expects key=value, got " + kv);
        set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    // Dedicated flags win over the file and --set.
    if (o.per_query_k) set("per_query_k", std::to_string(*o.per_query_k));
    if (o.final_k) set("final_k", std::to_string(*o.final_k));
    if (o.k1) set("bm25.k1", std::to_string(*o.k1));
    if (o.b) set("bm25.b", std::to_string(*o.b));
    if (o.strategies) set("strategies", *o.strategies);
    if (o.max_keywords) set("max_keywords", std::to_string(*o.max_keywords));
    if (o.normalization) set("normalization", *o.normalization);
    if (o.semantic_mode) set("semantic_mode", *o.semantic_mode);
    if (o.search_budget) set("search_budget", std::to_string(*o.search_budget));
    if (o.threads) set("threads", std::to_string(*o.threads));
    if (o.lenient) set("lenient", "true");
    return config;
}

struct LoadedIndexes {
    LexicalPtr lexical;
    SemanticPtr semantic;
    ProviderPtr provider;
};

LoadedIndexes load_indexes(const RunOptions& o) {
    LoadedIndexes out;
    if (!o.lexical.empty()) out.lexical = load_lexical(o.lexical);
    if (!o.store.empty()) out.semantic = load_semantic(o.store, o.forest);
    if (!o.provider.empty()) out.provider = make_provider(o.provider);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid lexical + semantic retrieval for causal ad hoc search"};
    app.require_subcommand(1);
    bool verbose = false;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbose, "Log progress to standard error");
    app.add_flag("-q,--quiet", quiet, "Only log errors");

    // index-lexical
    std::string corpus, format = "jsonl", out;
    bool strict = false;
    auto* index_lexical = app.add_subcommand("index-lexical", "Build and snapshot the BM25 lexical index");
    index_lexical->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    index_lexical->add_option("--format", format, "Corpus format")->check(CLI::IsMember({"jsonl", "json", "trec", "sgml"}));
    index_lexical->add_option("--out", out, "Snapshot path")->required();
    index_lexical->add_flag("--strict", strict, "Abort on malformed records instead of skipping them");

    // embed
    std::string provider_spec;
    bool binary = false;
    auto* embed = app.add_subcommand("embed", "Embed every corpus document into a vector file");
    embed->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    embed->add_option("--format", format, "Corpus format")->check(CLI::IsMember({"jsonl", "json", "trec", "sgml"}));
    embed->add_option("--provider", provider_spec, "hash:<dim>:<seed> | file:<path> | http:<url>")->required();
    embed->add_option("--out", out, "Vector file path")->required();
    embed->add_flag("--binary", binary, "Write the binary vector format");
    embed->add_flag("--strict", strict, "Abort on malformed records instead of skipping them");

    // index-semantic
    std::string vectors, out_store, out_forest;
    std::size_t trees = 0, leaf_capacity = 16, threads = 0;
    std::uint64_t seed = 42;
    auto* index_semantic = app.add_subcommand("index-semantic", "Snapshot the vector store and build an ANN forest");
    index_semantic->add_option("--vectors", vectors, "Vector file (text or binary)")->required()->check(CLI::ExistingFile);
    index_semantic->add_option("--out-store", out_store, "Vector store snapshot path")->required();
    index_semantic->add_option("--out-forest", out_forest, "Forest snapshot path (requires --trees)");
    index_semantic->add_option("--trees", trees, "Number of random-projection trees (0 = no forest)");
    index_semantic->add_option("--leaf-capacity", leaf_capacity, "Maximum rows per leaf")->check(CLI::PositiveNumber);
    index_semantic->add_option("--seed", seed, "Forest RNG seed");
    index_semantic->add_option("--threads", threads, "Build threads (default: available cores)");

    // search
    std::string lexical_path, store_path, forest_path, query, mode = "auto";
    std::size_t k = 10, budget = 0;
    double k1 = 1.5, b = 0.75;
    auto* search = app.add_subcommand("search", "Ad hoc query against one index");
    auto* search_lex = search->add_option("--lexical", lexical_path, "Lexical index snapshot")->check(CLI::ExistingFile);
    auto* search_store = search->add_option("--store", store_path, "Vector store snapshot")->check(CLI::ExistingFile);
    search_lex->excludes(search_store);
    search->add_option("--forest", forest_path, "ANN forest snapshot")->check(CLI::ExistingFile);
    search->add_option("--provider", provider_spec, "Embedding provider for --store queries");
    search->add_option("--query", query, "Query text")->required();
    search->add_option("-k", k, "Number of hits")->check(CLI::PositiveNumber);
    search->add_option("--mode", mode, "Semantic search mode")->check(CLI::IsMember({"auto", "exact", "ann"}));
    search->add_option("--budget", budget, "ANN candidate budget (0 = default)");
    search->add_option("--k1", k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    search->add_option("--b", b, "BM25 b")->check(CLI::Range(0.0, 1.0));

    // run-topics / run-baseline
    RunOptions run_opts;
    auto* run_topics = app.add_subcommand("run-topics", "Run the Q1+Q2+Q3 pipeline over a topics file");
    add_run_options(run_topics, run_opts);
    std::string baseline;
    RunOptions baseline_opts;
    auto* run_baseline = app.add_subcommand("run-baseline", "Run a single-strategy baseline over a topics file");
    run_baseline->add_option("--name", baseline, "Baseline name")
        ->required()
        ->check(CLI::IsMember({"narrative-bm25", "query-bm25", "query+narrative-semantic", "query-semantic"}));
    add_run_options(run_baseline, baseline_opts);

    // evaluate
    std::string run_path, qrels_path;
    bool per_topic = false;
    int digits = 4;
    auto* evaluate = app.add_subcommand("evaluate", "Compute MAP and P@5 of a run against qrels");
    evaluate->add_option("--run", run_path, "TREC run file")->required();
    evaluate->add_option("--qrels", qrels_path, "Qrels file")->required();
    evaluate->add_flag("--per-topic", per_topic, "Also print per-topic scores");
    evaluate->add_option("--digits", digits, "Decimal places")->check(CLI::Range(1, 17));

    auto* version = app.add_subcommand("version", "Print library and snapshot format versions");

    CLI11_PARSE(app, argc, argv);

    cir_set_log_level(quiet ? CIR_LOG_ERROR : (verbose ? CIR_LOG_INFO : CIR_LOG_WARN));

    try {
        if (version->parsed()) {
            std::printf("causalir %s\nlexical-index format %u\nvector-store format %u\nforest format %u\n",
                        cir_version(), cir_lexical_format_version(), cir_store_format_version(),
                        cir_forest_format_version());
        } else if (index_lexical->parsed()) {
            cir_lexical_index* raw = nullptr;
            check(cir_lexical_index_build(corpus.c_str(), corpus_format(format), strict ? 1 : 0, &raw),
                  "indexing " + corpus);
            LexicalPtr index(raw);
            check(cir_lexical_index_save(index.get(), out.c_str()), "writing " + out);
            std::printf("documents\t%zu\nterms\t%zu\ntokens\t%llu\n", cir_lexical_index_num_docs(index.get()),
                        cir_lexical_index_num_terms(index.get()),
                        static_cast<unsigned long long>(cir_lexical_index_num_tokens(index.get())));
        } else if (embed->parsed()) {
            auto provider = make_provider(provider_spec);
            std::size_t count = 0;
            check(cir_embed_corpus(corpus.c_str(), corpus_format(format), strict ? 1 : 0, provider.get(), out.c_str(),
                                   binary ? CIR_VECTORS_BINARY : CIR_VECTORS_TEXT, &count),
                  "embedding " + corpus);
            std::printf("vectors\t%zu\n", count);
        } else if (index_semantic->parsed()) {
            if (!out_forest.empty() && trees == 0) {
                throw CliError(CIR_ERR_INVALID_ARGUMENT, "--out-forest requires --trees > 0");
            }
            cir_semantic_index* raw = nullptr;
            check(cir_semantic_index_build(vectors.c_str(), trees, leaf_capacity, seed, threads, &raw),
                  "indexing " + vectors);
            SemanticPtr index(raw);
            check(cir_semantic_index_save(index.get(), out_store.c_str(), out_forest.empty() ? nullptr : out_forest.c_str()),
                  "writing semantic index");
            std::printf("vectors\t%zu\ndimension\t%zu\ntrees\t%zu\n", cir_semantic_index_size(index.get()),
                        cir_semantic_index_dimension(index.get()), trees);
        } else if (search->parsed()) {
            cir_results* raw = nullptr;
            if (!lexical_path.empty()) {
                auto index = load_lexical(lexical_path);
                check(cir_lexical_search(index.get(), query.c_str(), k1, b, k, &raw), "searching");
            } else if (!store_path.empty()) {
                if (provider_spec.empty()) throw CliError(CIR_ERR_INVALID_ARGUMENT, "--store requires --provider");
                auto index = load_semantic(store_path, forest_path);
                auto provider = make_provider(provider_spec);
                check(cir_semantic_search(index.get(), provider.get(), query.c_str(), k, mode.c_str(), budget, &raw),
                      "searching");
            } else {
                throw CliError(CIR_ERR_INVALID_ARGUMENT, "search needs --lexical or --store");
            }
            ResultsPtr results(raw);
            print_results(results.get());
        } else if (run_topics->parsed() || run_baseline->parsed()) {
            const bool is_pipeline = run_topics->parsed();
            const RunOptions& o = is_pipeline ? run_opts : baseline_opts;
            auto config = build_config(o);
            auto loaded = load_indexes(o);
            const cir_status status =
                is_pipeline
                    ? cir_run_topics(o.topics.c_str(), loaded.lexical.get(), loaded.semantic.get(),
                                     loaded.provider.get(), config.get(), o.tag.c_str(), o.out.c_str())
                    : cir_run_baseline(baseline.c_str(), o.topics.c_str(), loaded.lexical.get(),
                                       loaded.semantic.get(), loaded.provider.get(), config.get(), o.tag.c_str(),
                                       o.out.c_str());
            check(status, is_pipeline ? "running topics" : "running baseline " + baseline);
        } else if (evaluate->parsed()) {
            cir_evaluation* raw = nullptr;
            check(cir_evaluate(run_path.c_str(), qrels_path.c_str(), &raw), "evaluating " + run_path);
            EvaluationPtr eval(raw);
            if (per_topic) {
                for (std::size_t i = 0; i < cir_evaluation_num_topics(eval.get()); ++i) {
                    const char* topic = cir_evaluation_topic_id(eval.get(), i);
                    std::printf("map\t%s\t%.*f\n", topic, digits, cir_evaluation_topic_ap(eval.get(), i));
                    std::printf("P_5\t%s\t%.*f\n", topic, digits, cir_evaluation_topic_p5(eval.get(), i));
                }
            }
            std::printf("map\tall\t%.*f\n", digits, cir_evaluation_map(eval.get()));
            std::printf("P_5\tall\t%.*f\n", digits, cir_evaluation_p5(eval.get()));
            std::printf("num_q\tall\t%zu\n", cir_evaluation_num_topics(eval.get()));
        }
    } catch (const CliError& e) {
        std::cerr << "causalir: " << e.what() << '\n';
        return static_cast<int>(e.status);
    }
    return 0;
}
