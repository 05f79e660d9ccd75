#include "ghabuse/textkit/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "ghabuse/textkit/tokenize.hpp"

namespace ghabuse::textkit {

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (c < 0x80) {
            len = 1;
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        }
        bool ok = len != 0 && i + len <= s.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) ok = false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(U'�');
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::u32string normalize_name(std::string_view name) {
    std::u32string out;
    for (char32_t c : decode_utf8(name)) {
        if (c == U'-' || c == U'_' || c == U'.') continue;
        out.push_back(c >= U'A' && c <= U'Z' ? c - U'A' + U'a' : c);
    }
    return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    // Rows i-2, i-1 and i of the (n+1) x (m+1) table.
    std::vector<std::size_t> prev2(m + 1), prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            std::size_t best = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                best = std::min(best, prev2[j - 2] + 1);
            cur[j] = best;
        }
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[m];
}

double name_similarity(std::string_view a, std::string_view b) {
    const auto na = normalize_name(a);
    const auto nb = normalize_name(b);
    const std::size_t longest = std::max(na.size(), nb.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(na, nb)) / static_cast<double>(longest);
}

double readme_similarity(std::string_view a, std::string_view b) {
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;
    std::map<std::string_view, double> fa, fb;
    for (const auto& t : ta) fa[t] += 1.0;
    for (const auto& t : tb) fb[t] += 1.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, c] : fa) {
        na += c * c;
        auto it = fb.find(t);
        if (it != fb.end()) dot += c * it->second;
    }
    for (const auto& [t, c] : fb) nb += c * c;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace ghabuse::textkit
