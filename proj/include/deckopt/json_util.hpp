#pragma once
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "deckopt/errors.hpp"

namespace deckopt {

using nlohmann::json;

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const json& j, const std::filesystem::path& path,
                           int indent = 2) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(indent) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

/// Fetch a required key, throwing IoError naming the key if absent.
inline const json& require_key(const json& j, const std::string& key,
                               const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw IoError(where + ": missing key '" + key + "'");
    return *it;
}

} // namespace deckopt
