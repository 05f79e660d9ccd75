#pragma once

// Deterministic synthetic text and names for fixture corpora.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghabuse::eval {

/// mt19937_64 with distribution code that does not depend on the standard
/// library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi);
    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(std::span<const T> items) {
        return items[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(items.size()) - 1))];
    }
    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return pick(std::span<const T>(items));
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(i) - 1))]);
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 of (seed, a, b); used to give every generated item its own stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Which template family a text comes from. Training and evaluation texts use
/// disjoint templates over a shared vocabulary.
enum class TextPool { training, evaluation };

std::span<const std::string_view> topic_words();
std::span<const std::string_view> trending_keywords();

std::string random_login(Rng& rng);
std::string random_repo_name(Rng& rng);
std::string random_sha(Rng& rng);

/// Markdown README about the given topic words; each topic word appears at
/// least twice.
std::string synth_readme(Rng& rng, const std::string& title, std::span<const std::string> topics);

std::string spam_issue(Rng& rng, TextPool pool);
std::string benign_issue(Rng& rng, TextPool pool);
/// Spam wording without any link or command.
std::string spam_issue_plain(Rng& rng);

}  // namespace ghabuse::eval
