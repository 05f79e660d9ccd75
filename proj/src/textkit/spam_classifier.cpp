#include "ghabuse/textkit/spam_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ghabuse/error.hpp"
#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::textkit {
namespace {

struct Forward {
    std::vector<double> pre;  // hidden pre-activations
    double z = 0.0;           // output logit
};

Forward forward(const SpamClassifier& c, const SparseVector& x) {
    Forward f;
    f.pre.assign(c.bias_1.begin(), c.bias_1.end());
    for (std::size_t k = 0; k < c.hidden_dim; ++k) {
        const double* row = c.weights_1.data() + k * c.input_dim;
        double s = 0.0;
        for (const auto& [i, v] : x.entries) s += row[i] * v;
        f.pre[k] += s;
    }
    f.z = c.bias_2;
    for (std::size_t k = 0; k < c.hidden_dim; ++k)
        if (f.pre[k] > 0.0) f.z += c.weights_2[k] * f.pre[k];
    return f;
}

double sigmoid(double z) {
    const double p = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    return std::clamp(p, lo, std::nextafter(1.0, 0.0));
}

// -(y log p + (1-y) log(1-p)) expressed through the logit.
double bce_from_logit(double z, int y) {
    return std::max(z, 0.0) - (y ? z : 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void check_data(const SpamClassifier& c, std::span<const LabeledVector> data) {
    for (const auto& d : data) {
        if (d.x.dim != c.input_dim)
            throw InvalidInput("spam classifier: vector dimension " + std::to_string(d.x.dim) +
                               " does not match input_dim " + std::to_string(c.input_dim));
        if (d.label != 0 && d.label != 1)
            throw InvalidInput("spam classifier: labels must be 0 or 1");
    }
}

// Uniform in [-limit, limit) from the raw 64-bit engine output so that the
// stream is identical on every standard library.
double uniform(std::mt19937_64& rng, double limit) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * limit;
}

}  // namespace

void SpamClassifier::check_shape() const {
    if (input_dim == 0 || hidden_dim == 0 || weights_1.size() != hidden_dim * input_dim ||
        bias_1.size() != hidden_dim || weights_2.size() != hidden_dim)
        throw InvalidInput("spam classifier: parameter sizes inconsistent with dimensions");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidInput("spam classifier: threshold must be in (0,1)");
}

double classifier_predict(const SpamClassifier& c, const SparseVector& v) {
    if (v.dim != c.input_dim)
        throw InvalidInput("spam classifier: vector dimension " + std::to_string(v.dim) +
                           " does not match input_dim " + std::to_string(c.input_dim));
    return sigmoid(forward(c, v).z);
}

double classifier_predict(const SpamClassifier& c, std::span<const double> dense) {
    return classifier_predict(c, SparseVector::from_dense(dense));
}

double classifier_loss(const SpamClassifier& c, std::span<const LabeledVector> data) {
    check_data(c, data);
    double total = 0.0;
    for (const auto& d : data) total += bce_from_logit(forward(c, d.x).z, d.label);
    return data.empty() ? 0.0 : total / static_cast<double>(data.size());
}

Gradient classifier_gradient(const SpamClassifier& c, std::span<const LabeledVector> data) {
    check_data(c, data);
    Gradient g;
    g.weights_1.assign(c.weights_1.size(), 0.0);
    g.bias_1.assign(c.hidden_dim, 0.0);
    g.weights_2.assign(c.hidden_dim, 0.0);
    if (data.empty()) return g;
    const double scale = 1.0 / static_cast<double>(data.size());
    for (const auto& d : data) {
        const Forward f = forward(c, d.x);
        const double dz = (sigmoid(f.z) - d.label) * scale;
        g.bias_2 += dz;
        for (std::size_t k = 0; k < c.hidden_dim; ++k) {
            if (f.pre[k] <= 0.0) continue;
            g.weights_2[k] += dz * f.pre[k];
            const double dpre = dz * c.weights_2[k];
            g.bias_1[k] += dpre;
            double* row = g.weights_1.data() + k * c.input_dim;
            for (const auto& [i, v] : d.x.entries) row[i] += dpre * v;
        }
    }
    return g;
}

SpamClassifier classifier_train(std::size_t input_dim, std::span<const LabeledVector> data,
                                const TrainOptions& options) {
    if (input_dim == 0 || options.hidden_dim == 0)
        throw InvalidInput("classifier_train: dimensions must be positive");
    if (!(options.learning_rate > 0.0))
        throw InvalidInput("classifier_train: learning rate must be positive");
    SpamClassifier c;
    c.input_dim = input_dim;
    c.hidden_dim = options.hidden_dim;
    check_data(c, data);
    const bool has_pos = std::any_of(data.begin(), data.end(), [](auto& d) { return d.label == 1; });
    const bool has_neg = std::any_of(data.begin(), data.end(), [](auto& d) { return d.label == 0; });
    if (!has_pos || !has_neg)
        throw InvalidInput("classifier_train: training data must contain both classes");

    std::mt19937_64 rng(options.seed);
    const double limit_1 = std::sqrt(6.0 / static_cast<double>(input_dim + c.hidden_dim));
    const double limit_2 = std::sqrt(6.0 / static_cast<double>(c.hidden_dim + 1));
    c.weights_1.resize(c.hidden_dim * input_dim);
    for (auto& w : c.weights_1) w = uniform(rng, limit_1);
    c.bias_1.assign(c.hidden_dim, 0.0);
    c.weights_2.resize(c.hidden_dim);
    for (auto& w : c.weights_2) w = uniform(rng, limit_2);

    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        const Gradient g = classifier_gradient(c, data);
        for (std::size_t i = 0; i < c.weights_1.size(); ++i)
            c.weights_1[i] -= options.learning_rate * g.weights_1[i];
        for (std::size_t k = 0; k < c.hidden_dim; ++k) {
            c.bias_1[k] -= options.learning_rate * g.bias_1[k];
            c.weights_2[k] -= options.learning_rate * g.weights_2[k];
        }
        c.bias_2 -= options.learning_rate * g.bias_2;
    }
    return c;
}

double SpamModel::score(std::string_view text) const {
    return classifier_predict(classifier, tfidf_transform(tfidf, tokenize(text)));
}

nlohmann::ordered_json SpamModel::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kWeightSchemaVersion;
    j["tfidf"] = tfidf.to_json();
    nlohmann::ordered_json cj;
    cj["input_dim"] = classifier.input_dim;
    cj["hidden_dim"] = classifier.hidden_dim;
    cj["weights_1"] = classifier.weights_1;
    cj["bias_1"] = classifier.bias_1;
    cj["weights_2"] = classifier.weights_2;
    cj["bias_2"] = classifier.bias_2;
    cj["threshold"] = classifier.threshold;
    j["classifier"] = std::move(cj);
    return j;
}

SpamModel SpamModel::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version"))
        throw SchemaError("weight file: missing schema_version");
    if (j["schema_version"] != kWeightSchemaVersion)
        throw SchemaError("weight file: schema_version mismatch: found " +
                          j["schema_version"].dump() + ", expected " +
                          std::to_string(kWeightSchemaVersion));
    SpamModel m;
    try {
        m.tfidf = TfIdfModel::from_json(j.at("tfidf"));
        const auto& cj = j.at("classifier");
        m.classifier.input_dim = cj.at("input_dim").get<std::size_t>();
        m.classifier.hidden_dim = cj.at("hidden_dim").get<std::size_t>();
        m.classifier.weights_1 = cj.at("weights_1").get<std::vector<double>>();
        m.classifier.bias_1 = cj.at("bias_1").get<std::vector<double>>();
        m.classifier.weights_2 = cj.at("weights_2").get<std::vector<double>>();
        m.classifier.bias_2 = cj.at("bias_2").get<double>();
        m.classifier.threshold = cj.at("threshold").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("weight file: ") + e.what());
    }
    m.classifier.check_shape();
    if (m.classifier.input_dim != m.tfidf.dim())
        throw InvalidInput("weight file: classifier input_dim does not match tfidf vocabulary");
    return m;
}

SpamModel train_spam_model(std::span<const std::string> texts, std::span<const int> labels,
                           const TrainOptions& options) {
    if (texts.size() != labels.size()) throw InvalidInput("train_spam_model: texts and labels differ in length");
    std::vector<std::vector<std::string>> docs;
    docs.reserve(texts.size());
    for (const auto& t : texts) docs.push_back(tokenize(t));
    SpamModel m;
    m.tfidf = tfidf_fit(docs);
    std::vector<LabeledVector> data;
    data.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) data.push_back({tfidf_transform(m.tfidf, docs[i]), labels[i]});
    m.classifier = classifier_train(m.tfidf.dim(), data, options);
    return m;
}

}  // namespace ghabuse::textkit
