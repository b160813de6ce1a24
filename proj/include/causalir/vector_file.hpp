#pragma once

#include "causalir/embedding.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace causalir {

/// Rows of (id, vector) as stored in a vector file; values row-major.
struct VectorRecords {
    std::size_t dimension = 0;
    std::vector<std::string> ids;
    std::vector<double> values;

    std::size_t size() const { return ids.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values).subspan(i * dimension, dimension);
    }
    void append(std::string id, std::span<const double> v);
};

enum class VectorFileFormat {
    Text,   // "dim=<d> count=<n>" header, then "<id> <f1> ... <fd>" rows
    Binary, // "CIRVEC01", u32 d, then (u32 id length, id bytes, d x f32) records
};

/// Reads either format, detected from the leading bytes.
VectorRecords read_vector_file(const std::filesystem::path& path);

/// Text rows use the shortest decimal form that reads back to the same
/// double. The binary variant stores 32-bit floats and is exact only for
/// float-representable values.
void write_vector_file(const std::filesystem::path& path, const VectorRecords& records,
                       VectorFileFormat format);

/// Serves precomputed vectors by key (document id or query key).
class FileVectorProvider final : public EmbeddingProvider {
public:
    explicit FileVectorProvider(VectorRecords records);

    std::size_t dimension() const override { return records_.dimension; }

    /// Looks up request.key; throws NotFound for an unknown key.
    EmbeddingVector embed(const EmbedRequest& request) const override;

    const VectorRecords& records() const { return records_; }

private:
    VectorRecords records_;
    std::unordered_map<std::string, std::size_t> rows_;
};

} // namespace causalir
