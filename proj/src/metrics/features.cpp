#include "posterforge/core/error.hpp"
#include "posterforge/metrics/frechet.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace posterforge::metrics {
namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
    throw Error(ErrorCode::MalformedFeatureFile, "feature file line " + std::to_string(line) + ": " + reason,
                {std::to_string(line), reason});
}

}  // namespace

const std::vector<double>* FeatureSet::find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return &vectors[i];
    }
    return nullptr;
}

FeatureSet read_feature_set(std::istream& in) {
    FeatureSet set;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception&) {
            malformed(line, "not JSON");
        }
        if (!j.is_object()) malformed(line, "expected an object");
        if (!have_header) {
            auto it = j.find("dim");
            if (it == j.end() || !it->is_number_unsigned() || it->get<std::size_t>() == 0) {
                malformed(line, "header must be {\"dim\": positive integer}");
            }
            set.dim = it->get<std::size_t>();
            have_header = true;
            continue;
        }
        auto id = j.find("id");
        auto vec = j.find("vec");
        if (id == j.end() || !id->is_string()) malformed(line, "missing string id");
        if (vec == j.end() || !vec->is_array()) malformed(line, "missing vec array");
        if (vec->size() != set.dim) malformed(line, "vec has " + std::to_string(vec->size()) + " entries, expected " + std::to_string(set.dim));
        std::vector<double> row;
        row.reserve(set.dim);
        for (const auto& v : *vec) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) malformed(line, "vec entries must be finite numbers");
            row.push_back(v.get<double>());
        }
        set.ids.push_back(id->get<std::string>());
        set.vectors.push_back(std::move(row));
    }
    if (!have_header) malformed(line, "missing header");
    return set;
}

FeatureSet read_feature_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedFeatureFile, "cannot open " + path.string(), {path.string()});
    return read_feature_set(in);
}

void write_feature_set(std::ostream& out, const FeatureSet& set) {
    out << nlohmann::json{{"dim", set.dim}}.dump() << '\n';
    for (std::size_t i = 0; i < set.vectors.size(); ++i) {
        const std::string id = i < set.ids.size() ? set.ids[i] : std::to_string(i);
        out << nlohmann::json{{"id", id}, {"vec", set.vectors[i]}}.dump() << '\n';
    }
}

}  // namespace posterforge::metrics
