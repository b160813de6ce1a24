#include "causalir/ann_forest.hpp"

#include "binary_io.hpp"
#include "causalir/embedding.hpp"
#include "causalir/errors.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <thread>

namespace causalir {

namespace {

constexpr std::string_view kMagic = "CIRFORST";
constexpr int kSplitAttempts = 5;

class TreeBuilder {
public:
    TreeBuilder(const std::vector<double>& unit_rows, std::size_t dim, const ForestParams& params,
                std::uint64_t tree_seed)
        : rows_(unit_rows), dim_(dim), params_(params), rng_(tree_seed) {}

    AnnForest::Tree build(std::vector<std::uint32_t> all) {
        tree_.nodes.emplace_back();
        split(0, std::move(all), 0);
        return std::move(tree_);
    }

private:
    const std::vector<double>& rows_;
    std::size_t dim_;
    const ForestParams& params_;
    std::mt19937_64 rng_;
    AnnForest::Tree tree_;

    std::span<const double> unit(std::uint32_t i) const {
        return std::span<const double>(rows_).subspan(static_cast<std::size_t>(i) * dim_, dim_);
    }

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    void make_leaf(std::size_t node, const std::vector<std::uint32_t>& members) {
        tree_.nodes[node].leaf_begin = static_cast<std::uint32_t>(tree_.items.size());
        tree_.nodes[node].leaf_count = static_cast<std::uint32_t>(members.size());
        tree_.items.insert(tree_.items.end(), members.begin(), members.end());
    }

    void split(std::size_t node, std::vector<std::uint32_t> members, std::size_t depth) {
        if (members.size() <= params_.leaf_capacity || depth >= params_.max_depth) {
            make_leaf(node, members);
            return;
        }
        std::vector<double> plane(dim_ + 1);
        std::vector<std::uint32_t> left;
        std::vector<std::uint32_t> right;
        for (int attempt = 0; attempt < kSplitAttempts; ++attempt) {
            const std::size_t i = pick(members.size());
            std::size_t j = pick(members.size() - 1);
            if (j >= i) ++j;
            const auto a = unit(members[i]);
            const auto b = unit(members[j]);
            // Bisector of a and b: normal a - b through the midpoint.
            double offset = 0.0;
            double normal_sq = 0.0;
            for (std::size_t d = 0; d < dim_; ++d) {
                plane[d] = a[d] - b[d];
                normal_sq += plane[d] * plane[d];
                offset -= plane[d] * 0.5 * (a[d] + b[d]);
            }
            if (normal_sq == 0.0) continue; // duplicate directions
            plane[dim_] = offset;
            left.clear();
            right.clear();
            for (const auto m : members) {
                const double margin = dot(std::span<const double>(plane).first(dim_), unit(m)) + offset;
                (margin > 0.0 ? right : left).push_back(m);
            }
            if (!left.empty() && !right.empty()) break;
            left.clear();
            right.clear();
        }
        if (left.empty() || right.empty()) {
            make_leaf(node, members);
            return;
        }
        members.clear();
        members.shrink_to_fit();

        const auto plane_index = static_cast<std::uint32_t>(tree_.planes.size() / (dim_ + 1));
        tree_.planes.insert(tree_.planes.end(), plane.begin(), plane.end());
        const auto left_node = tree_.nodes.size();
        tree_.nodes.emplace_back();
        const auto right_node = tree_.nodes.size();
        tree_.nodes.emplace_back();
        tree_.nodes[node].left = static_cast<std::int32_t>(left_node);
        tree_.nodes[node].right = static_cast<std::int32_t>(right_node);
        tree_.nodes[node].plane = plane_index;
        split(left_node, std::move(left), depth + 1);
        split(right_node, std::move(right), depth + 1);
    }
};

} // namespace

std::size_t default_search_budget(std::size_t k) { return std::max<std::size_t>(2 * k, 100); }

AnnForest AnnForest::build(const VectorStore& store, const ForestParams& params, std::size_t threads) {
    if (store.size() == 0) throw Error(ErrorCode::InvalidArgument, "cannot build a forest over an empty store");
    if (params.num_trees == 0) throw Error(ErrorCode::InvalidArgument, "num_trees must be >= 1");
    if (params.leaf_capacity == 0) throw Error(ErrorCode::InvalidArgument, "leaf_capacity must be >= 1");

    AnnForest forest;
    forest.params_ = params;
    forest.num_rows_ = store.size();
    forest.dimension_ = store.dimension();
    forest.trees_.resize(params.num_trees);

    const std::size_t dim = store.dimension();
    std::vector<double> unit_rows(store.size() * dim);
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto r = store.row(i);
        for (std::size_t d = 0; d < dim; ++d) unit_rows[i * dim + d] = r[d] / store.norm(i);
    }
    std::vector<std::uint32_t> all(store.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < params.num_trees; t = next++) {
            const std::uint64_t tree_seed = mix64(params.seed ^ mix64(t + 1));
            forest.trees_[t] = TreeBuilder(unit_rows, dim, params, tree_seed).build(all);
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, params.num_trees);
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    return forest;
}

std::vector<std::uint32_t> AnnForest::candidates(std::span<const double> query, std::size_t budget) const {
    if (query.size() != dimension_) {
        throw Error(ErrorCode::Dimension, "query has dimension " + std::to_string(query.size()) +
                                              ", forest has " + std::to_string(dimension_));
    }
    const double qn = l2_norm(query);
    if (qn == 0.0) throw Error(ErrorCode::InvalidArgument, "zero query vector");
    std::vector<double> unit_query(query.begin(), query.end());
    for (auto& x : unit_query) x /= qn;

    struct Entry {
        double priority;
        std::uint32_t tree;
        std::uint32_t node;
        bool operator<(const Entry& other) const {
            if (priority != other.priority) return priority < other.priority;
            if (tree != other.tree) return tree > other.tree;
            return node > other.node;
        }
    };
    std::priority_queue<Entry> queue;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        queue.push(Entry{std::numeric_limits<double>::infinity(), static_cast<std::uint32_t>(t), 0});
    }

    std::vector<char> seen(num_rows_, 0);
    std::vector<std::uint32_t> out;
    while (!queue.empty() && out.size() < budget) {
        const Entry top = queue.top();
        queue.pop();
        const Tree& tree = trees_[top.tree];
        const Node& node = tree.nodes[top.node];
        if (node.is_leaf()) {
            for (std::uint32_t i = 0; i < node.leaf_count; ++i) {
                const auto row = tree.items[node.leaf_begin + i];
                if (!seen[row]) {
                    seen[row] = 1;
                    out.push_back(row);
                }
            }
            continue;
        }
        const auto plane = std::span<const double>(tree.planes).subspan(node.plane * (dimension_ + 1), dimension_ + 1);
        const double margin = dot(plane.first(dimension_), unit_query) + plane[dimension_];
        queue.push(Entry{std::min(top.priority, margin), top.tree, static_cast<std::uint32_t>(node.right)});
        queue.push(Entry{std::min(top.priority, -margin), top.tree, static_cast<std::uint32_t>(node.left)});
    }
    return out;
}

void AnnForest::check_store(const VectorStore& store) const {
    if (store.size() != num_rows_ || store.dimension() != dimension_) {
        throw Error(ErrorCode::InvalidArgument, "forest was built for a different vector store");
    }
}

ResultSet AnnForest::search(const VectorStore& store, std::span<const double> query, std::size_t k,
                            std::size_t budget) const {
    check_store(store);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    const auto rows = candidates(query, std::max(budget, k));
    return store.rank_rows(query, rows, k);
}

// Layout: magic, version, params (num_trees, leaf_capacity, seed, max_depth),
// rows, dimension, then per tree: node count and nodes, plane count and
// planes, item count and items.
void AnnForest::save(std::ostream& out) const {
    detail::BinaryWriter w(out);
    w.bytes(kMagic);
    w.u32(kFormatVersion);
    w.u64(params_.num_trees);
    w.u64(params_.leaf_capacity);
    w.u64(params_.seed);
    w.u64(params_.max_depth);
    w.u64(num_rows_);
    w.u64(dimension_);
    for (const auto& tree : trees_) {
        w.u64(tree.nodes.size());
        for (const auto& n : tree.nodes) {
            w.i32(n.left);
            w.i32(n.right);
            w.u32(n.plane);
            w.u32(n.leaf_begin);
            w.u32(n.leaf_count);
        }
        w.u64(tree.planes.size());
        for (const double x : tree.planes) w.f64(x);
        w.u64(tree.items.size());
        for (const auto i : tree.items) w.u32(i);
    }
    w.check("forest snapshot");
}

void AnnForest::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    save(out);
}

AnnForest AnnForest::load(std::istream& in) {
    detail::BinaryReader r(in, "forest snapshot");
    r.header(kMagic, kFormatVersion);
    AnnForest forest;
    forest.params_.num_trees = r.u64();
    forest.params_.leaf_capacity = r.u64();
    forest.params_.seed = r.u64();
    forest.params_.max_depth = r.u64();
    forest.num_rows_ = r.u64();
    forest.dimension_ = r.u64();
    const auto bad = [](const char* what) { return Error(ErrorCode::Format, std::string("forest snapshot: ") + what); };
    if (forest.params_.num_trees > (1u << 20) || forest.dimension_ == 0 || forest.dimension_ > (1u << 20)) {
        throw bad("header out of range");
    }
    forest.trees_.resize(forest.params_.num_trees);
    for (auto& tree : forest.trees_) {
        const auto num_nodes = r.u64();
        if (num_nodes == 0 || num_nodes > 2 * forest.num_rows_ + 1) throw bad("node count out of range");
        tree.nodes.resize(num_nodes);
        for (auto& n : tree.nodes) {
            n.left = r.i32();
            n.right = r.i32();
            n.plane = r.u32();
            n.leaf_begin = r.u32();
            n.leaf_count = r.u32();
        }
        const auto num_planes = r.u64();
        if (num_planes > num_nodes * (forest.dimension_ + 1)) throw bad("plane count out of range");
        tree.planes.resize(num_planes);
        for (auto& x : tree.planes) x = r.f64();
        const auto num_items = r.u64();
        if (num_items != forest.num_rows_) throw bad("tree does not cover every row");
        tree.items.resize(num_items);
        for (auto& i : tree.items) {
            i = r.u32();
            if (i >= forest.num_rows_) throw bad("row index out of range");
        }
        const auto planes_available = tree.planes.size() / (forest.dimension_ + 1);
        for (std::size_t index = 0; index < tree.nodes.size(); ++index) {
            const auto& n = tree.nodes[index];
            if (n.is_leaf()) {
                if (static_cast<std::uint64_t>(n.leaf_begin) + n.leaf_count > num_items) throw bad("leaf out of range");
            } else if (n.right < 0 || static_cast<std::size_t>(n.left) <= index ||
                       static_cast<std::size_t>(n.right) <= index ||
                       static_cast<std::uint64_t>(n.left) >= num_nodes ||
                       static_cast<std::uint64_t>(n.right) >= num_nodes || n.plane >= planes_available) {
                throw bad("node link out of range");
            }
        }
    }
    return forest;
}

AnnForest AnnForest::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load(in);
}

} // namespace causalir
