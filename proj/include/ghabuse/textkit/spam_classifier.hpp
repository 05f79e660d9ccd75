#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ghabuse/textkit/tfidf.hpp"

namespace ghabuse::textkit {

/// One hidden ReLU layer and a sigmoid output unit.
struct SpamClassifier {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    std::vector<double> weights_1;  // hidden_dim x input_dim, row-major
    std::vector<double> bias_1;     // hidden_dim
    std::vector<double> weights_2;  // hidden_dim
    double bias_2 = 0.0;
    double threshold = 0.5;

    /// Throws InvalidInput when the parameter sizes disagree with the dims.
    void check_shape() const;

    friend bool operator==(const SpamClassifier&, const SpamClassifier&) = default;
};

struct LabeledVector {
    SparseVector x;
    int label = 0;  // 0 or 1
};

struct TrainOptions {
    std::size_t hidden_dim = 64;
    std::size_t epochs = 500;
    double learning_rate = 0.5;
    std::uint64_t seed = 0;
};

/// Full-batch gradient descent on mean binary cross-entropy. Deterministic for
/// a fixed seed, data order and shape. Throws InvalidInput on dimension
/// mismatches or when either class is missing.
SpamClassifier classifier_train(std::size_t input_dim, std::span<const LabeledVector> data,
                                const TrainOptions& options);

/// Probability of the positive class, strictly inside (0,1) up to rounding.
double classifier_predict(const SpamClassifier& c, const SparseVector& v);
double classifier_predict(const SpamClassifier& c, std::span<const double> dense);

/// Gradient of the mean binary cross-entropy with respect to every parameter,
/// in the same layout as SpamClassifier.
struct Gradient {
    std::vector<double> weights_1;
    std::vector<double> bias_1;
    std::vector<double> weights_2;
    double bias_2 = 0.0;
};

double classifier_loss(const SpamClassifier& c, std::span<const LabeledVector> data);
Gradient classifier_gradient(const SpamClassifier& c, std::span<const LabeledVector> data);

/// Weight file: {schema_version: 1, tfidf: {...}, classifier: {...}}.
struct SpamModel {
    TfIdfModel tfidf;
    SpamClassifier classifier;

    /// Tokenizes, vectorizes and scores raw text.
    double score(std::string_view text) const;

    nlohmann::ordered_json to_json() const;
    static SpamModel from_json(const nlohmann::json& j);
};

inline constexpr int kWeightSchemaVersion = 1;

/// Fits the vectorizer on `texts` and trains a classifier on it. `labels`
/// must match `texts` in length and hold only 0 and 1.
SpamModel train_spam_model(std::span<const std::string> texts, std::span<const int> labels,
                           const TrainOptions& options);

}  // namespace ghabuse::textkit
