#include "ghabuse/textkit/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ghabuse/error.hpp"
#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::textkit {

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        const auto& doc = documents_[i];
        if (!index_.emplace(doc.id, i).second)
            throw InvalidInput("corpus: duplicate document id '" + doc.id + "'");
        total += doc.tokens.size();
        std::unordered_set<std::string_view> distinct(doc.tokens.begin(), doc.tokens.end());
        for (auto t : distinct) ++doc_freq_[std::string(t)];
    }
    avg_doc_len_ = documents_.empty() ? 0.0
                                      : static_cast<double>(total) /
                                            static_cast<double>(documents_.size());
}

std::size_t Corpus::doc_freq(const std::string& token) const {
    auto it = doc_freq_.find(token);
    return it == doc_freq_.end() ? 0 : it->second;
}

const Corpus::Document& Corpus::document(const std::string& doc_id) const {
    auto it = index_.find(doc_id);
    if (it == index_.end()) throw NotFound("corpus: unknown document '" + doc_id + "'");
    return documents_[it->second];
}

double Corpus::idf(const std::string& token) const {
    const double n = static_cast<double>(documents_.size());
    const double df = static_cast<double>(doc_freq(token));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double bm25_score_tokens(const Corpus& corpus, std::span<const std::string> query_tokens,
                         std::span<const std::string> doc_tokens, Bm25Params params) {
    if (query_tokens.empty() || doc_tokens.empty()) return 0.0;
    std::unordered_map<std::string_view, std::size_t> tf;
    for (const auto& t : doc_tokens) ++tf[t];
    const double len = static_cast<double>(doc_tokens.size());
    const double avg = corpus.avg_doc_len() > 0 ? corpus.avg_doc_len() : len;
    const double norm = params.k1 * (1.0 - params.b + params.b * len / avg);
    double score = 0.0;
    for (const auto& q : query_tokens) {
        auto it = tf.find(q);
        if (it == tf.end()) continue;
        const double f = static_cast<double>(it->second);
        score += corpus.idf(q) * f * (params.k1 + 1.0) / (f + norm);
    }
    return score;
}

double bm25_score(const Corpus& corpus, std::span<const std::string> query_tokens,
                  const std::string& doc_id, Bm25Params params) {
    return bm25_score_tokens(corpus, query_tokens, corpus.document(doc_id).tokens, params);
}

double relevance(const std::string& keyword, const std::string& doc_id, const Corpus& corpus,
                 Bm25Params params) {
    const auto query = tokenize(keyword);
    const double numerator = bm25_score(corpus, query, doc_id, params);
    if (numerator <= 0.0) return 0.0;

    // Keyword tokens cycled up to the corpus average length.
    const auto target =
        std::max(query.size(), static_cast<std::size_t>(std::llround(corpus.avg_doc_len())));
    std::vector<std::string> synthetic;
    synthetic.reserve(target);
    for (std::size_t i = 0; i < target; ++i) synthetic.push_back(query[i % query.size()]);
    const double self_max = bm25_score_tokens(corpus, query, synthetic, params);
    return std::clamp(numerator / self_max, 0.0, 1.0);
}

}  // namespace ghabuse::textkit
