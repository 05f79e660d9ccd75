#pragma once

// Independent reference computations for textkit. None of these call into the
// implementation they check, except the loss function used by the
// finite-difference gradient check.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ghabuse/textkit/bm25.hpp"
#include "ghabuse/textkit/spam_classifier.hpp"

namespace ghabuse::oracle {

/// Okapi BM25 by brute-force counting over the raw documents.
inline double bm25(const std::vector<textkit::Corpus::Document>& docs,
                   const std::vector<std::string>& query, const std::vector<std::string>& doc,
                   double k1 = 1.2, double b = 0.75) {
    double total_len = 0;
    for (const auto& d : docs) total_len += static_cast<double>(d.tokens.size());
    const double n = static_cast<double>(docs.size());
    const double avg = total_len / n;
    double score = 0;
    for (const auto& q : query) {
        const double tf = static_cast<double>(std::count(doc.begin(), doc.end(), q));
        if (tf == 0) continue;
        double df = 0;
        for (const auto& d : docs)
            if (std::find(d.tokens.begin(), d.tokens.end(), q) != d.tokens.end()) df += 1;
        const double idf = std::log(1 + (n - df + 0.5) / (df + 0.5));
        score += idf * tf * (k1 + 1) /
                 (tf + k1 * (1 - b + b * static_cast<double>(doc.size()) / avg));
    }
    return score;
}

/// Optimal-string-alignment distance from the full (n+1) x (m+1) table.
inline std::size_t osa_distance(const std::u32string& a, const std::u32string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
        }
    }
    return d[n][m];
}

/// Largest relative error between an analytic gradient and central finite
/// differences of the loss. Entries where both values are below 1e-7 in
/// magnitude must instead agree within 1e-9 absolute; a violation returns 1.
inline double max_gradient_rel_error(textkit::SpamClassifier c,
                                     const std::vector<textkit::LabeledVector>& batch,
                                     const textkit::Gradient& grad, double h = 1e-5) {
    double worst = 0.0;
    auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = textkit::classifier_loss(c, batch);
        param = saved - h;
        const double down = textkit::classifier_loss(c, batch);
        param = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        if (scale < 1e-7) {
            if (std::abs(analytic - numeric) > 1e-9) worst = 1.0;
            return;
        }
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t i = 0; i < c.weights_1.size(); ++i) check(c.weights_1[i], grad.weights_1[i]);
    for (std::size_t i = 0; i < c.bias_1.size(); ++i) check(c.bias_1[i], grad.bias_1[i]);
    for (std::size_t i = 0; i < c.weights_2.size(); ++i) check(c.weights_2[i], grad.weights_2[i]);
    check(c.bias_2, grad.bias_2);
    return worst;
}

}  // namespace ghabuse::oracle
