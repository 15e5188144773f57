#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cct {

// FNV-1a, used wherever a seed must be derived stably from identifiers.
// std::hash gives no cross-build stability guarantee.
inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a_mix(uint64_t a, uint64_t b) {
    char buf[16];
    for (int i = 0; i < 8; ++i) buf[i] = char(a >> (8 * i));
    for (int i = 0; i < 8; ++i) buf[8 + i] = char(b >> (8 * i));
    return fnv1a(std::string_view(buf, 16));
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return out;
}

inline std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Fixed-notation double formatting with trailing-zero trimming.  All file
// formats go through this so that identical runs emit identical bytes.
std::string format_double(double v);

// One "key = value" pair per line, '#' starts a comment.  The shared format
// for requirement files, control profiles, manifests and histories.
using KvDoc = std::vector<std::pair<std::string, std::string>>;

std::string kv_render(const KvDoc& doc);
KvDoc kv_parse(const std::string& text);
// First value for key, or empty if absent.
std::string kv_get(const KvDoc& doc, const std::string& key);
bool kv_has(const KvDoc& doc, const std::string& key);
double kv_get_double(const KvDoc& doc, const std::string& key);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace cct
