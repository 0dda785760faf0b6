#include "posterforge/core/error.hpp"
#include "posterforge/core/fs.hpp"
#include "posterforge/datapipe/datapipe.hpp"

#include <cmath>
#include <set>

namespace posterforge::datapipe {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& origin, const std::string& reason) {
    throw Error(ErrorCode::MalformedManifest, origin + ": " + reason, {origin, reason});
}

// Splits an already validated top-level JSON object into (key, raw value
// text) pairs so unknown members can be written back untouched.
std::vector<std::pair<std::string, std::string>> raw_members(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    };
    auto skip_string = [&] {
        ++i;  // opening quote
        while (i < text.size() && text[i] != '"') i += text[i] == '\\' ? 2 : 1;
        ++i;
    };
    skip_ws();
    ++i;  // '{'
    while (true) {
        skip_ws();
        if (text[i] == '}') break;
        const std::size_t key_start = i;
        skip_string();
        std::string key = json::parse(text.substr(key_start, i - key_start)).get<std::string>();
        skip_ws();
        ++i;  // ':'
        skip_ws();
        const std::size_t value_start = i;
        int depth = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (c == '"') {
                skip_string();
                continue;
            }
            if (c == '{' || c == '[') ++depth;
            else if (c == '}' || c == ']') {
                if (depth == 0) break;
                --depth;
            } else if (c == ',' && depth == 0) {
                break;
            }
            ++i;
        }
        std::size_t value_end = i;
        while (value_end > value_start && std::isspace(static_cast<unsigned char>(text[value_end - 1]))) --value_end;
        out.emplace_back(std::move(key), std::string(text.substr(value_start, value_end - value_start)));
        if (text[i] == ',') ++i;
    }
    return out;
}

std::string require_string(const json& j, const char* key, const std::string& where, const std::string& origin) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) malformed(origin, where + "." + key + " must be a string");
    return it->get<std::string>();
}

AssetRecord record_from_json(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_object()) malformed(origin, where + " must be an object");
    AssetRecord r;
    r.id = require_string(j, "id", where, origin);
    if (r.id.empty()) malformed(origin, where + ".id must be non-empty");
    r.path = require_string(j, "path", where, origin);
    r.format = require_string(j, "format", where, origin);
    for (const char* dim : {"width", "height"}) {
        auto it = j.find(dim);
        if (it == j.end() || !it->is_number_integer() || it->get<std::int64_t>() < 1) {
            malformed(origin, where + "." + dim + " must be an integer >= 1");
        }
        (std::string_view(dim) == "width" ? r.width : r.height) = it->get<std::int64_t>();
    }
    if (auto it = j.find("aesthetic_score"); it != j.end() && !it->is_null()) {
        if (!it->is_number() || !std::isfinite(it->get<double>())) malformed(origin, where + ".aesthetic_score must be a number");
        r.aesthetic_score = it->get<double>();
    }
    if (auto it = j.find("embedding_id"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) malformed(origin, where + ".embedding_id must be a string");
        r.embedding_id = it->get<std::string>();
    }
    static const std::set<std::string> known = {"id", "path", "format", "width", "height", "aesthetic_score", "embedding_id"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) r.extra[key] = value;
    }
    return r;
}

json record_to_json(const AssetRecord& r) {
    json j = r.extra.is_object() ? r.extra : json::object();
    j["id"] = r.id;
    j["path"] = r.path;
    j["width"] = r.width;
    j["height"] = r.height;
    j["format"] = r.format;
    if (r.aesthetic_score) j["aesthetic_score"] = *r.aesthetic_score;
    if (r.embedding_id) j["embedding_id"] = *r.embedding_id;
    return j;
}

}  // namespace

Manifest parse_manifest(std::string_view text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        malformed(origin, std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) malformed(origin, "top level must be an object");

    auto version = doc.find("version");
    if (version == doc.end() || !version->is_number_integer()) malformed(origin, "missing integer version");
    Manifest m;
    m.version = version->get<std::int64_t>();
    if (m.version > kManifestVersion) {
        throw Error(ErrorCode::VersionUnsupported,
                    origin + ": manifest version " + std::to_string(m.version) + " is newer than supported " +
                        std::to_string(kManifestVersion),
                    {std::to_string(m.version)});
    }
    if (m.version < 1) malformed(origin, "version must be >= 1");

    if (auto it = doc.find("records"); it != doc.end()) {
        if (!it->is_array()) malformed(origin, "records must be an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < it->size(); ++i) {
            AssetRecord r = record_from_json((*it)[i], "records[" + std::to_string(i) + "]", origin);
            if (!ids.insert(r.id).second) malformed(origin, "duplicate record id '" + r.id + "'");
            m.records.push_back(std::move(r));
        }
    }
    if (auto it = doc.find("prompts"); it != doc.end()) {
        if (!it->is_object()) malformed(origin, "prompts must be an object");
        for (const auto& [id, t] : it->items()) {
            const std::string where = "prompts." + id;
            if (!t.is_object()) malformed(origin, where + " must be an object");
            PromptTriplet p{require_string(t, "basic", where, origin), require_string(t, "medium", where, origin),
                            require_string(t, "detailed", where, origin)};
            if (p.basic.empty() || p.medium.empty() || p.detailed.empty()) malformed(origin, where + " has an empty prompt");
            const bool known = std::any_of(m.records.begin(), m.records.end(), [&](const AssetRecord& r) { return r.id == id; });
            if (!known) malformed(origin, where + " references no record");
            m.prompts.emplace(id, std::move(p));
        }
    }
    if (auto it = doc.find("notes"); it != doc.end()) {
        if (!it->is_array()) malformed(origin, "notes must be an array of strings");
        for (const auto& n : *it) {
            if (!n.is_string()) malformed(origin, "notes must be an array of strings");
            m.notes.push_back(n.get<std::string>());
        }
    }
    for (auto& [key, raw] : raw_members(text)) {
        if (key != "version" && key != "records" && key != "prompts" && key != "notes") m.extensions[key] = std::move(raw);
    }
    return m;
}

std::string serialize_manifest(const Manifest& m) {
    json records = json::array();
    for (const auto& r : m.records) records.push_back(record_to_json(r));
    json prompts = json::object();
    for (const auto& [id, p] : m.prompts) prompts[id] = {{"basic", p.basic}, {"medium", p.medium}, {"detailed", p.detailed}};

    std::string out = "{\"version\":" + std::to_string(m.version);
    out += ",\"records\":" + records.dump();
    out += ",\"prompts\":" + prompts.dump();
    out += ",\"notes\":" + json(m.notes).dump();
    for (const auto& [key, raw] : m.extensions) out += "," + json(key).dump() + ":" + raw;
    out += "}\n";
    return out;
}

Manifest read_manifest(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error&) {
        malformed(path, "cannot read file");
    }
    return parse_manifest(text, path);
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    write_file_atomic(path, serialize_manifest(manifest));
}

}  // namespace posterforge::datapipe
