#include "ghabuse/textkit/tfidf.hpp"

#include <cmath>
#include <set>

#include "ghabuse/error.hpp"

namespace ghabuse::textkit {

double SparseVector::norm() const {
    double s = 0.0;
    for (const auto& [_, v] : entries) s += v * v;
    return std::sqrt(s);
}

std::vector<double> SparseVector::to_dense() const {
    std::vector<double> out(dim, 0.0);
    for (const auto& [i, v] : entries) out[i] = v;
    return out;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
    SparseVector v;
    v.dim = dense.size();
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0.0) v.entries.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
    return v;
}

TfIdfModel::TfIdfModel(std::map<std::string, std::uint32_t> vocabulary, std::vector<double> idf)
    : vocabulary_(std::move(vocabulary)), idf_(std::move(idf)) {
    if (vocabulary_.size() != idf_.size())
        throw InvalidInput("tfidf: vocabulary and idf sizes differ");
    std::vector<bool> used(idf_.size(), false);
    for (const auto& [token, index] : vocabulary_) {
        if (index >= idf_.size() || used[index])
            throw InvalidInput("tfidf: vocabulary indices are not a bijection onto [0, n)");
        used[index] = true;
    }
    for (double v : idf_)
        if (!(v >= 0.0)) throw InvalidInput("tfidf: idf values must be non-negative");
}

nlohmann::ordered_json TfIdfModel::to_json() const {
    std::vector<std::string> tokens(vocabulary_.size());
    for (const auto& [token, index] : vocabulary_) tokens[index] = token;
    nlohmann::ordered_json j;
    j["vocabulary"] = tokens;
    j["idf"] = idf_;
    return j;
}

TfIdfModel TfIdfModel::from_json(const nlohmann::json& j) {
    try {
        const auto tokens = j.at("vocabulary").get<std::vector<std::string>>();
        std::map<std::string, std::uint32_t> vocabulary;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (!vocabulary.emplace(tokens[i], static_cast<std::uint32_t>(i)).second)
                throw SchemaError("tfidf: duplicate vocabulary token '" + tokens[i] + "'");
        return TfIdfModel(std::move(vocabulary), j.at("idf").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("tfidf: ") + e.what());
    }
}

TfIdfModel tfidf_fit(std::span<const std::vector<std::string>> docs) {
    if (docs.empty()) throw InvalidInput("tfidf_fit: at least one document is required");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string_view> distinct(doc.begin(), doc.end());
        for (auto t : distinct) ++df[std::string(t)];
    }
    std::map<std::string, std::uint32_t> vocabulary;
    std::vector<double> idf;
    idf.reserve(df.size());
    const double n = static_cast<double>(docs.size());
    for (const auto& [token, count] : df) {
        vocabulary.emplace(token, static_cast<std::uint32_t>(idf.size()));
        idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return TfIdfModel(std::move(vocabulary), std::move(idf));
}

SparseVector tfidf_transform(const TfIdfModel& model, std::span<const std::string> tokens) {
    std::map<std::uint32_t, double> counts;
    for (const auto& t : tokens) {
        auto it = model.vocabulary().find(t);
        if (it != model.vocabulary().end()) counts[it->second] += 1.0;
    }
    SparseVector v;
    v.dim = model.dim();
    double sq = 0.0;
    for (const auto& [index, tf] : counts) {
        const double w = tf * model.idf()[index];
        v.entries.emplace_back(index, w);
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& [_, w] : v.entries) w *= inv;
    }
    return v;
}

}  // namespace ghabuse::textkit
