#pragma once

// Embedding vectors and providers. Vectors are fixed-dimension float arrays
// with a cached Euclidean norm; similarity throughout is cosine distance on
// unit vectors. Providers must be deterministic: same text, same vector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"

namespace assetgraph::vec {

inline constexpr std::size_t kEmbeddingDim = 384;

struct EmbeddingVector {
    std::vector<float> values;
    double norm = 0.0;

    std::size_t dimension() const { return values.size(); }

    static EmbeddingVector from(std::vector<float> v) {
        EmbeddingVector e;
        e.values = std::move(v);
        double s = 0.0;
        for (float x : e.values) s += static_cast<double>(x) * x;
        e.norm = std::sqrt(s);
        return e;
    }
};

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension())
        throw ValidationError("embedding dimension mismatch: " + std::to_string(a.dimension()) +
                              " vs " + std::to_string(b.dimension()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += static_cast<double>(a.values[i]) * b.values[i];
    return s;
}

inline EmbeddingVector normalized(const EmbeddingVector& v) {
    if (v.norm <= 0.0) throw ValidationError("cannot normalize a zero embedding");
    EmbeddingVector out;
    out.values.reserve(v.values.size());
    for (float x : v.values) out.values.push_back(static_cast<float>(x / v.norm));
    double s = 0.0;
    for (float x : out.values) s += static_cast<double>(x) * x;
    out.norm = std::sqrt(s);
    return out;
}

// 1 - cos(a, b); clamped so identical vectors report exactly zero
inline double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.norm <= 0.0 || b.norm <= 0.0)
        throw ValidationError("cosine distance undefined for zero vectors");
    double d = 1.0 - dot(a, b) / (a.norm * b.norm);
    return d < 0.0 ? 0.0 : d;
}

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
    virtual std::string model() const = 0;

    EmbeddingVector embed(const std::string& text) {
        return embed_batch({text}).front();
    }
};

namespace vec_detail {

inline std::uint64_t fnv1a64(const char* data, std::size_t n, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace vec_detail

// Stands in for the external sentence-encoder model in tests and offline
// runs: hashed character n-grams (n = 1..3) scattered over a fixed-dimension
// unit vector. Not semantically meaningful, but deterministic, and distinct
// texts collide with negligible probability.
class DeterministicTestEmbedder : public EmbeddingProvider {
public:
    explicit DeterministicTestEmbedder(std::size_t dim = kEmbeddingDim,
                                       std::uint64_t seed = 0x5bd1e995u)
        : dim_(dim), seed_(seed) {
        if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
    }

    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed_one(t));
        return out;
    }

    std::string model() const override { return "test-ngram-" + std::to_string(dim_); }

private:
    std::size_t dim_;
    std::uint64_t seed_;

    EmbeddingVector embed_one(const std::string& text) const {
        std::vector<double> acc(dim_, 0.0);
        for (std::size_t n = 1; n <= 3; ++n) {
            if (text.size() < n) continue;
            for (std::size_t i = 0; i + n <= text.size(); ++i) {
                const std::uint64_t h = vec_detail::fnv1a64(text.data() + i, n, seed_ ^ n);
                const std::size_t idx = static_cast<std::size_t>(h % dim_);
                // second hash derives a weight in [-1, 1)
                const double w = static_cast<double>((h >> 17) & 0x3FF) / 512.0 - 1.0;
                acc[idx] += w;
            }
        }
        double s = 0.0;
        for (double x : acc) s += x * x;
        if (s == 0.0) {
            // degenerate input (e.g. empty text) still maps to a unit vector
            const std::uint64_t h = vec_detail::fnv1a64(text.data(), text.size(), seed_);
            acc[static_cast<std::size_t>(h % dim_)] = 1.0;
            s = 1.0;
        }
        const double norm = std::sqrt(s);
        std::vector<float> values(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            values[i] = static_cast<float>(acc[i] / norm);
        return EmbeddingVector::from(std::move(values));
    }
};

// Text codec for persisting an embedding as a node property: comma-joined
// decimal floats, nine significant digits (lossless for binary32).
inline std::string embedding_to_text(const EmbeddingVector& v) {
    std::string out;
    out.reserve(v.values.size() * 12);
    char buf[32];
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (i) out += ',';
        std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v.values[i]));
        out += buf;
    }
    return out;
}

inline EmbeddingVector embedding_from_text(const std::string& text) {
    std::vector<float> values;
    const char* p = text.c_str();
    const char* end = p + text.size();
    while (p < end) {
        char* next = nullptr;
        const float x = std::strtof(p, &next);
        if (next == p)
            throw ValidationError("malformed embedding text near '" +
                                  std::string(p, std::min<std::size_t>(
                                                     8, static_cast<std::size_t>(end - p))) +
                                  "'");
        values.push_back(x);
        p = next;
        if (p < end) {
            if (*p != ',') throw ValidationError("malformed embedding text: expected ','");
            ++p;
        }
    }
    if (values.empty()) throw ValidationError("empty embedding text");
    return EmbeddingVector::from(std::move(values));
}

} // namespace assetgraph::vec
