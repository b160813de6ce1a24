#include "causalir/vector_file.hpp"

#include "binary_io.hpp"
#include "causalir/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace causalir {

namespace {

constexpr std::string_view kBinaryMagic = "CIRVEC01";

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        const auto start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
        if (pos > start) fields.push_back(line.substr(start, pos - start));
    }
    return fields;
}

std::size_t parse_header_value(std::string_view field, std::string_view key, const std::string& where) {
    if (!field.starts_with(key)) throw Error(ErrorCode::Parse, where + "expected '" + std::string(key) + "'");
    std::size_t value = 0;
    const auto digits = field.substr(key.size());
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw Error(ErrorCode::Parse, where + "bad header value '" + std::string(field) + "'");
    }
    return value;
}

VectorRecords read_text(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, name + ": missing header");
    const auto header = split_fields(line);
    const std::string where = name + ":1: ";
    if (header.size() != 2) throw Error(ErrorCode::Parse, where + "header must be 'dim=<d> count=<n>'");
    VectorRecords records;
    records.dimension = parse_header_value(header[0], "dim=", where);
    const auto count = parse_header_value(header[1], "count=", where);
    if (records.dimension == 0) throw Error(ErrorCode::Parse, where + "dimension must be positive");

    std::size_t line_no = 1;
    std::vector<double> row(records.dimension);
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        const std::string at = name + ":" + std::to_string(line_no) + ": ";
        if (fields.size() != records.dimension + 1) {
            throw Error(ErrorCode::Dimension, at + "expected " + std::to_string(records.dimension) +
                                                  " values, found " + std::to_string(fields.size() - 1));
        }
        for (std::size_t i = 0; i < records.dimension; ++i) {
            const auto f = fields[i + 1];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[i]);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(row[i])) {
                throw Error(ErrorCode::Parse, at + "bad value '" + std::string(f) + "'");
            }
        }
        records.append(std::string(fields[0]), row);
    }
    if (records.size() != count) {
        throw Error(ErrorCode::Parse, name + ": header declares " + std::to_string(count) + " rows, found " +
                                          std::to_string(records.size()));
    }
    return records;
}

VectorRecords read_binary(std::istream& in, const std::string& name) {
    detail::BinaryReader r(in, name);
    if (r.bytes(kBinaryMagic.size()) != kBinaryMagic) throw Error(ErrorCode::Format, name + ": bad magic");
    VectorRecords records;
    records.dimension = r.u32();
    if (records.dimension == 0) throw Error(ErrorCode::Format, name + ": dimension must be positive");
    std::vector<double> row(records.dimension);
    while (!r.at_end()) {
        auto id = r.str();
        for (auto& x : row) {
            x = r.f32();
            if (!std::isfinite(x)) throw Error(ErrorCode::Format, name + ": non-finite value for " + id);
        }
        records.append(std::move(id), row);
    }
    return records;
}

} // namespace

void VectorRecords::append(std::string id, std::span<const double> v) {
    if (v.size() != dimension) {
        throw Error(ErrorCode::Dimension, "vector for '" + id + "' has dimension " + std::to_string(v.size()) +
                                              ", expected " + std::to_string(dimension));
    }
    if (id.empty() || id.find_first_of(" \t\r\n") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "vector id '" + id + "' is empty or contains whitespace");
    }
    ids.push_back(std::move(id));
    values.insert(values.end(), v.begin(), v.end());
}

VectorRecords read_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open vector file " + path.string());
    char magic[8] = {};
    in.read(magic, sizeof(magic));
    const bool binary = in.gcount() == 8 && std::string_view(magic, 8) == kBinaryMagic;
    in.clear();
    in.seekg(0);
    return binary ? read_binary(in, path.string()) : read_text(in, path.string());
}

void write_vector_file(const std::filesystem::path& path, const VectorRecords& records,
                       VectorFileFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write vector file " + path.string());
    if (format == VectorFileFormat::Binary) {
        detail::BinaryWriter w(out);
        w.bytes(kBinaryMagic);
        w.u32(static_cast<std::uint32_t>(records.dimension));
        for (std::size_t i = 0; i < records.size(); ++i) {
            w.str(records.ids[i]);
            for (const double x : records.row(i)) w.f32(static_cast<float>(x));
        }
        w.check(path.string());
        return;
    }
    out << "dim=" << records.dimension << " count=" << records.size() << '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
        out << records.ids[i];
        for (const double x : records.row(i)) out << ' ' << format_double(x);
        out << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

FileVectorProvider::FileVectorProvider(VectorRecords records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (!rows_.emplace(records_.ids[i], i).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate vector id '" + records_.ids[i] + "'");
        }
    }
}

EmbeddingVector FileVectorProvider::embed(const EmbedRequest& request) const {
    const auto it = rows_.find(std::string(request.key));
    if (it == rows_.end()) {
        throw Error(ErrorCode::NotFound, "no precomputed vector for '" + std::string(request.key) + "'");
    }
    const auto row = records_.row(it->second);
    return EmbeddingVector(row.begin(), row.end());
}

} // namespace causalir
