#pragma once

// Hierarchical navigable small-world index over unit vectors, cosine
// distance. Structure invariants: layer 0 holds every element, neighbor
// lists stay within M per layer (2M at layer 0), and the entry point lives
// on the top layer. No deletions; the owning pipeline rebuilds instead.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "assetgraph/error.hpp"
#include "assetgraph/vector/embedding.hpp"

namespace assetgraph::vec {

class HnswIndex {
public:
    struct Params {
        std::size_t dim = kEmbeddingDim;
        std::size_t M = 16;
        std::size_t ef_construction = 200;
        std::size_t ef_search = 64;
        std::uint64_t seed = 0x6b9d3afb;
    };

    HnswIndex() : HnswIndex(Params()) {}
    explicit HnswIndex(Params params)
        : params_(params), rng_(params.seed), level_mult_(1.0 / std::log(static_cast<double>(params.M))) {
        if (params_.dim == 0) throw ValidationError("index dimension must be positive");
        if (params_.M < 2) throw ValidationError("M must be at least 2");
    }

    std::size_t size() const { return elements_.size(); }
    std::size_t dimension() const { return params_.dim; }
    const Params& params() const { return params_; }

    void insert(std::uint64_t key, const EmbeddingVector& vector) {
        if (vector.dimension() != params_.dim)
            throw ValidationError("embedding dimension mismatch: got " +
                                  std::to_string(vector.dimension()) + ", index expects " +
                                  std::to_string(params_.dim));
        if (vector.norm <= 0.0)
            throw ValidationError("cannot index a zero-norm vector");
        if (index_of_.count(key))
            throw ValidationError("key " + std::to_string(key) + " already indexed");

        const int level = random_level();
        Element el;
        el.key = key;
        el.vec = normalized(vector).values;
        el.links.resize(static_cast<std::size_t>(level) + 1);
        const std::uint32_t id = static_cast<std::uint32_t>(elements_.size());
        elements_.push_back(std::move(el));
        index_of_[key] = id;

        if (elements_.size() == 1) {
            entry_ = id;
            max_level_ = level;
            return;
        }

        std::uint32_t curr = entry_;
        for (int lc = max_level_; lc > level; --lc) curr = greedy_closest(id, curr, lc);

        for (int lc = std::min(level, max_level_); lc >= 0; --lc) {
            auto candidates = search_layer(elements_[id].vec, curr, params_.ef_construction, lc);
            const std::size_t m = params_.M;
            std::vector<std::uint32_t> chosen;
            for (const auto& [d, cid] : candidates) {
                if (chosen.size() == m) break;
                chosen.push_back(cid);
            }
            for (std::uint32_t cid : chosen) {
                elements_[id].links[static_cast<std::size_t>(lc)].push_back(cid);
                auto& back = elements_[cid].links[static_cast<std::size_t>(lc)];
                back.push_back(id);
                const std::size_t cap = lc == 0 ? 2 * m : m;
                if (back.size() > cap) shrink_links(cid, lc, cap);
            }
            if (!candidates.empty()) curr = candidates.front().second;
        }

        if (level > max_level_) {
            max_level_ = level;
            entry_ = id;
        }
    }

    // ascending (distance, key); ties on distance broken by key
    std::vector<std::pair<std::uint64_t, double>> knn(
        const EmbeddingVector& query, std::size_t k,
        std::optional<std::size_t> ef_override = {}) const {
        if (k == 0) throw ValidationError("k must be at least 1");
        if (query.dimension() != params_.dim)
            throw ValidationError("query dimension mismatch");
        if (elements_.empty()) return {};
        const EmbeddingVector q = normalized(query);

        std::size_t ef = std::max(ef_override.value_or(params_.ef_search), k);
        std::vector<std::pair<double, std::uint32_t>> found;
        if (ef >= elements_.size()) {
            // degenerate contract: ef covering the whole index is exact search
            found.reserve(elements_.size());
            for (std::uint32_t i = 0; i < elements_.size(); ++i)
                found.emplace_back(dist_to(q.values, i), i);
        } else {
            std::uint32_t curr = entry_;
            for (int lc = max_level_; lc > 0; --lc) curr = greedy_closest_vec(q.values, curr, lc);
            found = search_layer(q.values, curr, ef, 0);
        }
        std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return elements_[a.second].key < elements_[b.second].key;
        });
        if (found.size() > k) found.resize(k);
        std::vector<std::pair<std::uint64_t, double>> out;
        out.reserve(found.size());
        for (const auto& [d, id] : found) out.emplace_back(elements_[id].key, d);
        return out;
    }

    // ---- introspection for structural checks ----

    int max_level() const { return max_level_; }
    std::uint64_t entry_key() const {
        if (elements_.empty()) throw ValidationError("empty index has no entry point");
        return elements_[entry_].key;
    }
    int level_of(std::uint64_t key) const {
        return static_cast<int>(elements_[at(key)].links.size()) - 1;
    }
    std::vector<std::uint64_t> neighbors(std::uint64_t key, int level) const {
        const Element& el = elements_[at(key)];
        if (level < 0 || static_cast<std::size_t>(level) >= el.links.size())
            throw ValidationError("element does not reach that layer");
        std::vector<std::uint64_t> out;
        for (std::uint32_t id : el.links[static_cast<std::size_t>(level)])
            out.push_back(elements_[id].key);
        return out;
    }
    std::vector<std::uint64_t> keys() const {
        std::vector<std::uint64_t> out;
        out.reserve(elements_.size());
        for (const auto& el : elements_) out.push_back(el.key);
        return out;
    }

private:
    struct Element {
        std::uint64_t key = 0;
        std::vector<float> vec;                         // unit-normalized
        std::vector<std::vector<std::uint32_t>> links;  // per layer, bottom first
    };

    Params params_;
    mutable std::mt19937_64 rng_;
    double level_mult_;
    std::vector<Element> elements_;
    std::map<std::uint64_t, std::uint32_t> index_of_;
    std::uint32_t entry_ = 0;
    int max_level_ = 0;

    std::uint32_t at(std::uint64_t key) const {
        auto it = index_of_.find(key);
        if (it == index_of_.end())
            throw ValidationError("key " + std::to_string(key) + " not indexed");
        return it->second;
    }

    int random_level() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double x = u(rng_);
        if (x <= 0.0) x = 1e-300;
        return static_cast<int>(-std::log(x) * level_mult_);
    }

    double dist_to(const std::vector<float>& q, std::uint32_t id) const {
        const std::vector<float>& v = elements_[id].vec;
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            s += static_cast<double>(q[i]) * v[i];
        const double d = 1.0 - s;
        return d < 0.0 ? 0.0 : d;
    }

    std::uint32_t greedy_closest(std::uint32_t query_id, std::uint32_t start, int level) const {
        return greedy_closest_vec(elements_[query_id].vec, start, level);
    }

    std::uint32_t greedy_closest_vec(const std::vector<float>& q, std::uint32_t start,
                                     int level) const {
        std::uint32_t curr = start;
        double best = dist_to(q, curr);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::uint32_t n : elements_[curr].links[static_cast<std::size_t>(level)]) {
                const double d = dist_to(q, n);
                if (d < best) {
                    best = d;
                    curr = n;
                    improved = true;
                }
            }
        }
        return curr;
    }

    // ascending (distance, id), at most ef entries
    std::vector<std::pair<double, std::uint32_t>> search_layer(const std::vector<float>& q,
                                                               std::uint32_t start,
                                                               std::size_t ef, int level) const {
        std::unordered_set<std::uint32_t> visited{start};
        using Entry = std::pair<double, std::uint32_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> candidates;
        std::priority_queue<Entry> best;    // max-heap: worst of the kept set on top
        const double d0 = dist_to(q, start);
        candidates.emplace(d0, start);
        best.emplace(d0, start);
        while (!candidates.empty()) {
            auto [d, id] = candidates.top();
            candidates.pop();
            if (d > best.top().first && best.size() >= ef) break;
            for (std::uint32_t n : elements_[id].links[static_cast<std::size_t>(level)]) {
                if (!visited.insert(n).second) continue;
                const double dn = dist_to(q, n);
                if (best.size() < ef || dn < best.top().first) {
                    candidates.emplace(dn, n);
                    best.emplace(dn, n);
                    if (best.size() > ef) best.pop();
                }
            }
        }
        std::vector<Entry> out;
        out.reserve(best.size());
        while (!best.empty()) {
            out.push_back(best.top());
            best.pop();
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void shrink_links(std::uint32_t id, int level, std::size_t cap) {
        auto& links = elements_[id].links[static_cast<std::size_t>(level)];
        std::vector<std::pair<double, std::uint32_t>> scored;
        scored.reserve(links.size());
        for (std::uint32_t n : links) scored.emplace_back(dist_to(elements_[id].vec, n), n);
        std::sort(scored.begin(), scored.end());
        links.clear();
        for (std::size_t i = 0; i < cap; ++i) links.push_back(scored[i].second);
    }
};

} // namespace assetgraph::vec
