#include "cct/util.hpp"

#include "cct/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cct {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    // trim trailing zeros but keep at least one digit after the point
    size_t dot = s.find('.');
    size_t last = s.find_last_not_of('0');
    if (last > dot) s.erase(last + 1);
    else s.erase(dot + 2);
    return s;
}

std::string kv_render(const KvDoc& doc) {
    std::ostringstream os;
    for (const auto& [k, v] : doc) os << k << " = " << v << "\n";
    return os.str();
}

KvDoc kv_parse(const std::string& text) {
    KvDoc doc;
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("malformed key-value line: '" + line + "'");
        doc.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return doc;
}

std::string kv_get(const KvDoc& doc, const std::string& key) {
    for (const auto& [k, v] : doc)
        if (k == key) return v;
    return {};
}

bool kv_has(const KvDoc& doc, const std::string& key) {
    for (const auto& [k, v] : doc)
        if (k == key) return true;
    return false;
}

double kv_get_double(const KvDoc& doc, const std::string& key) {
    std::string v = kv_get(doc, key);
    if (v.empty()) throw ParseError("missing numeric key '" + key + "'");
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "' is not numeric: '" + v + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

} // namespace cct
