#include "causalir/corpus.hpp"

#include "causalir/errors.hpp"
#include "causalir/log.hpp"
#include "causalir/text.hpp"

#include <json.hpp>

namespace causalir {

using nlohmann::json;

std::string Document::indexable_text() const {
    if (!title || title->empty()) return text;
    return *title + "\n" + text;
}

TokenizedDocument tokenize(const Document& doc) {
    return TokenizedDocument{doc.doc_id, preprocess(doc.indexable_text())};
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl" || name == "json") return CorpusFormat::JsonLines;
    if (name == "trec" || name == "sgml") return CorpusFormat::TrecSgml;
    throw Error(ErrorCode::InvalidArgument,
                "unknown corpus format '" + std::string(name) + "' (expected jsonl or trec)");
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Content between <tag> and </tag>, all occurrences joined by newlines.
std::optional<std::string> element_text(std::string_view block, std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";
    std::optional<std::string> out;
    std::size_t pos = 0;
    while ((pos = block.find(open, pos)) != std::string_view::npos) {
        const auto begin = pos + open.size();
        const auto end = block.find(close, begin);
        if (end == std::string_view::npos) break;
        if (out) {
            *out += '\n';
        } else {
            out.emplace();
        }
        *out += block.substr(begin, end - begin);
        pos = end + close.size();
    }
    return out;
}

const json* string_field(const json& obj, const char* name) {
    const auto it = obj.find(name);
    if (it == obj.end() || !it->is_string()) return nullptr;
    return &*it;
}

} // namespace

std::string strip_tags(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_tag = false;
    for (const char c : text) {
        if (c == '<') {
            in_tag = true;
            out += ' ';
        } else if (c == '>' && in_tag) {
            in_tag = false;
        } else if (!in_tag) {
            out += c;
        }
    }
    return out;
}

CorpusReader::CorpusReader(const std::filesystem::path& path, CorpusFormat format,
                           LoadOptions options)
    : path_(path), format_(format), options_(options), in_(path, std::ios::binary) {
    if (!in_) {
        throw Error(ErrorCode::Io, "cannot open corpus file " + path.string());
    }
}

void CorpusReader::malformed(const std::string& what) {
    const std::string message = path_.string() + ": record " + std::to_string(records_) +
                                " (line " + std::to_string(line_) + "): " + what;
    if (options_.strict) {
        throw Error(ErrorCode::Parse, message);
    }
    ++skipped_;
    log_warn("skipping malformed record: " + message);
}

std::optional<Document> CorpusReader::next() {
    return format_ == CorpusFormat::JsonLines ? next_jsonl() : next_sgml();
}

std::optional<Document> CorpusReader::next_jsonl() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (trim(line).empty()) continue;
        ++records_;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            malformed(std::string("invalid JSON: ") + e.what());
            continue;
        }
        if (!obj.is_object()) {
            malformed("record is not a JSON object");
            continue;
        }
        const json* id = string_field(obj, "id");
        if (id == nullptr || id->get_ref<const std::string&>().empty()) {
            malformed("missing or empty string field 'id'");
            continue;
        }
        const json* text = string_field(obj, "text");
        if (text == nullptr) {
            malformed("missing string field 'text'");
            continue;
        }
        Document doc{id->get<std::string>(), text->get<std::string>(), std::nullopt};
        if (const json* title = string_field(obj, "title")) {
            doc.title = title->get<std::string>();
        }
        return doc;
    }
    if (in_.bad()) throw Error(ErrorCode::Io, "read failure on " + path_.string());
    return std::nullopt;
}

std::optional<Document> CorpusReader::next_sgml() {
    static constexpr std::string_view kOpen = "<DOC>";
    static constexpr std::string_view kClose = "</DOC>";
    std::string line;
    bool counted = false;
    while (true) {
        const auto start = pending_.find(kOpen);
        if (start != std::string::npos) {
            if (!counted) {
                ++records_;
                counted = true;
            }
            pending_.erase(0, start);
            const auto stop = pending_.find(kClose);
            if (stop != std::string::npos) {
                const std::string block = pending_.substr(0, stop + kClose.size());
                pending_.erase(0, stop + kClose.size());
                counted = false;
                const auto docno = element_text(block, "DOCNO");
                const std::string id = docno ? trim(*docno) : std::string();
                if (id.empty()) {
                    malformed("missing <DOCNO>");
                    continue;
                }
                Document doc{id, {}, std::nullopt};
                if (auto text = element_text(block, "TEXT")) doc.text = trim(strip_tags(*text));
                auto title = element_text(block, "HEADLINE");
                if (!title) title = element_text(block, "TITLE");
                if (title) doc.title = trim(strip_tags(*title));
                return doc;
            }
        } else if (pending_.size() > kOpen.size()) {
            // Keep a tail in case a tag straddles a line boundary.
            pending_.erase(0, pending_.size() - kOpen.size());
        }
        if (!std::getline(in_, line)) break;
        ++line_;
        pending_ += line;
        pending_ += '\n';
    }
    if (in_.bad()) throw Error(ErrorCode::Io, "read failure on " + path_.string());
    if (counted) {
        pending_.clear();
        malformed("unterminated <DOC> at end of file");
    }
    return std::nullopt;
}

std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  LoadOptions options) {
    CorpusReader reader(path, format, options);
    std::vector<Document> docs;
    while (auto doc = reader.next()) docs.push_back(std::move(*doc));
    return docs;
}

std::vector<Topic> load_topics(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open topics file " + path.string());
    std::vector<Topic> topics;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = path.string() + ": topic " + std::to_string(topics.size() + 1) +
                                  " (line " + std::to_string(line_no) + "): ";
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Parse, where + "invalid JSON: " + e.what());
        }
        if (!obj.is_object()) throw Error(ErrorCode::Parse, where + "not a JSON object");
        Topic topic;
        if (const json* id = string_field(obj, "id")) topic.topic_id = id->get<std::string>();
        if (const json* title = string_field(obj, "title")) topic.title = title->get<std::string>();
        if (const json* narr = string_field(obj, "narrative")) {
            topic.narrative = narr->get<std::string>();
        }
        if (topic.topic_id.empty()) throw Error(ErrorCode::Parse, where + "missing 'id'");
        if (trim(topic.title).empty()) throw Error(ErrorCode::Parse, where + "missing 'title'");
        topics.push_back(std::move(topic));
    }
    return topics;
}

} // namespace causalir
