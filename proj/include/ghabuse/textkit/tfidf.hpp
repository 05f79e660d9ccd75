#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ghabuse::textkit {

/// Sparse vector with entries sorted by strictly increasing index.
struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;

    double norm() const;
    std::vector<double> to_dense() const;
    static SparseVector from_dense(std::span<const double> dense);

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

class TfIdfModel {
public:
    TfIdfModel() = default;
    /// Vocabulary indices must be a bijection onto [0, idf.size()).
    TfIdfModel(std::map<std::string, std::uint32_t> vocabulary, std::vector<double> idf);

    std::size_t dim() const { return idf_.size(); }
    const std::map<std::string, std::uint32_t>& vocabulary() const { return vocabulary_; }
    const std::vector<double>& idf() const { return idf_; }

    nlohmann::ordered_json to_json() const;
    static TfIdfModel from_json(const nlohmann::json& j);

    friend bool operator==(const TfIdfModel&, const TfIdfModel&) = default;

private:
    std::map<std::string, std::uint32_t> vocabulary_;
    std::vector<double> idf_;
};

/// Smoothed idf(t) = ln((1 + N) / (1 + df)) + 1; vocabulary indices follow
/// lexicographic token order. Throws InvalidInput on zero documents.
TfIdfModel tfidf_fit(std::span<const std::vector<std::string>> docs);

/// L2-normalized tf * idf; out-of-vocabulary tokens are ignored.
SparseVector tfidf_transform(const TfIdfModel& model, std::span<const std::string> tokens);

}  // namespace ghabuse::textkit
