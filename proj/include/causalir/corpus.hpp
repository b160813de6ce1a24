#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causalir {

struct Document {
    std::string doc_id;
    std::string text;
    std::optional<std::string> title;

    /// Headline (when present) followed by the body; what gets indexed.
    std::string indexable_text() const;
};

struct TokenizedDocument {
    std::string doc_id;
    std::vector<std::string> tokens;

    std::size_t length() const { return tokens.size(); }
};

TokenizedDocument tokenize(const Document& doc);

/// A query event: the title is the query, the narrative describes which
/// documents are (and are not) causally relevant.
struct Topic {
    std::string topic_id;
    std::string title;
    std::string narrative;
};

enum class CorpusFormat {
    JsonLines, // {"id": ..., "text": ..., "title": ...} per line
    TrecSgml,  // <DOC><DOCNO>..</DOCNO><TEXT>..</TEXT></DOC>
};

/// Accepts "jsonl" / "json" and "trec" / "sgml".
CorpusFormat parse_corpus_format(std::string_view name);

struct LoadOptions {
    /// Abort on the first malformed record instead of skipping it.
    bool strict = false;
};

/// Streams documents from a corpus file in file order.
class CorpusReader {
public:
    CorpusReader(const std::filesystem::path& path, CorpusFormat format, LoadOptions options = {});

    std::optional<Document> next();

    std::size_t records_read() const { return records_; }
    std::size_t records_skipped() const { return skipped_; }

private:
    std::optional<Document> next_jsonl();
    std::optional<Document> next_sgml();
    void malformed(const std::string& what);

    std::filesystem::path path_;
    CorpusFormat format_;
    LoadOptions options_;
    std::ifstream in_;
    std::string pending_;
    std::size_t line_ = 0;
    std::size_t records_ = 0;
    std::size_t skipped_ = 0;
};

std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  LoadOptions options = {});

/// JSON-lines topics: {"id": ..., "title": ..., "narrative": ...}.
std::vector<Topic> load_topics(const std::filesystem::path& path);

/// Removes <...> markup. Used by the SGML reader.
std::string strip_tags(std::string_view text);

} // namespace causalir
