#include "ghabuse/textkit/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ghabuse::textkit {
namespace {

constexpr std::array<std::string_view, 6> kCommandPrefixes = {
    "$ ", "curl ", "wget ", "powershell", "cmd /c", "bash -c",
};

bool istarts_with(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    return true;
}

bool url_stop(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isspace(u) || c == '<' || c == '>' || c == '"' || c == '\'' || c == '`' ||
           c == '{' || c == '}' || c == '|' || c == '\\' || c == '^';
}

std::string_view trim_left(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::string_view trim_right(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> extract_links(std::string_view text) {
    std::vector<std::string> links;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t scheme = 0;
        if (istarts_with(text.substr(i), "https://"))
            scheme = 8;
        else if (istarts_with(text.substr(i), "http://"))
            scheme = 7;
        if (scheme == 0) {
            ++i;
            continue;
        }
        std::size_t end = i + scheme;
        while (end < text.size() && !url_stop(text[end])) ++end;
        std::string_view url = text.substr(i, end - i);
        // Drop trailing punctuation, and closing brackets that have no opener.
        while (url.size() > scheme) {
            const char last = url.back();
            if (last == '.' || last == ',' || last == ';' || last == ':' || last == '!' ||
                last == '?') {
                url.remove_suffix(1);
            } else if (last == ')' || last == ']') {
                const char open = last == ')' ? '(' : '[';
                if (std::count(url.begin(), url.end(), open) >=
                    std::count(url.begin(), url.end(), last))
                    break;
                url.remove_suffix(1);
            } else {
                break;
            }
        }
        if (url.size() > scheme) links.emplace_back(url);
        i = end;
    }
    return links;
}

std::span<const std::string_view> default_command_prefixes() { return kCommandPrefixes; }

std::vector<std::string> extract_commands(std::string_view text,
                                          std::span<const std::string_view> prefixes) {
    std::vector<std::string> blocks;
    std::vector<std::string> lines;
    bool in_fence = false;
    std::string_view fence_marker;
    std::string block;
    auto close_block = [&] {
        const auto content = trim_right(block);
        if (!content.empty()) blocks.emplace_back(content);
        block.clear();
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        const std::string_view trimmed = trim_left(line);
        if (!in_fence && (trimmed.starts_with("```") || trimmed.starts_with("~~~"))) {
            in_fence = true;
            fence_marker = trimmed.substr(0, 3);
        } else if (in_fence && trimmed.starts_with(fence_marker)) {
            in_fence = false;
            close_block();
        } else if (in_fence) {
            block.append(line);
            block.push_back('\n');
        } else {
            for (auto p : prefixes) {
                if (istarts_with(trimmed, p)) {
                    lines.emplace_back(trim_right(trimmed));
                    break;
                }
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (in_fence) close_block();
    blocks.insert(blocks.end(), lines.begin(), lines.end());
    return blocks;
}

std::vector<std::string> extract_commands(std::string_view text) {
    return extract_commands(text, kCommandPrefixes);
}

}  // namespace ghabuse::textkit
