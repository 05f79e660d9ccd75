#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ghabuse::textkit {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// Immutable BM25 corpus statistics over tokenized documents.
class Corpus {
public:
    struct Document {
        std::string id;
        std::vector<std::string> tokens;
    };

    Corpus() = default;
    /// Throws InvalidInput on duplicate document ids.
    explicit Corpus(std::vector<Document> documents);

    std::size_t size() const { return documents_.size(); }
    double avg_doc_len() const { return avg_doc_len_; }
    std::size_t doc_freq(const std::string& token) const;
    bool contains(const std::string& doc_id) const { return index_.count(doc_id) != 0; }
    /// Throws NotFound for an unknown id.
    const Document& document(const std::string& doc_id) const;
    const std::vector<Document>& documents() const { return documents_; }

    /// ln(1 + (N - df + 0.5) / (df + 0.5)); always positive.
    double idf(const std::string& token) const;

private:
    std::vector<Document> documents_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::size_t> doc_freq_;
    double avg_doc_len_ = 0.0;
};

/// Okapi BM25 of a query against one corpus document. Repeated query tokens
/// contribute once per occurrence. Throws NotFound for an unknown doc_id.
double bm25_score(const Corpus& corpus, std::span<const std::string> query_tokens,
                  const std::string& doc_id, Bm25Params params = {});

/// BM25 of a query against an arbitrary token list scored with the corpus'
/// IDF and average length (the list itself is not part of the corpus).
double bm25_score_tokens(const Corpus& corpus, std::span<const std::string> query_tokens,
                         std::span<const std::string> doc_tokens, Bm25Params params = {});

/// Relevance of a short keyword to a registered long document, normalized by
/// the score the keyword earns against a synthetic document made of the
/// keyword's tokens repeated to the corpus average length. Clamped to [0,1];
/// 0 when the keyword shares no token with the document or has no tokens.
double relevance(const std::string& keyword, const std::string& doc_id, const Corpus& corpus,
                 Bm25Params params = {});

}  // namespace ghabuse::textkit
