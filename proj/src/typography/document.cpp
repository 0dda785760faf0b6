#include "posterforge/typography/document.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/core/unicode.hpp"

#include <set>

namespace posterforge::typography {
namespace {

template <typename NodeT, typename Vec>
NodeT* find_in(Vec& nodes, std::string_view id) {
    for (auto& n : nodes) {
        if (n.id == id) return &n;
        if (auto* hit = find_in<NodeT>(n.children, id)) return hit;
    }
    return nullptr;
}

void scale_nodes(std::vector<Node>& nodes, const Rational& k) {
    for (auto& n : nodes) {
        n.rect.left *= k;
        n.rect.top *= k;
        n.rect.width *= k;
        n.rect.height *= k;
        n.style.border_radius *= k;
        for (auto& run : n.runs) {
            run.font.size *= k;
            run.font.letter_spacing *= k;
        }
        scale_nodes(n.children, k);
    }
}

}  // namespace

std::string_view to_string(TextAlign align) {
    switch (align) {
        case TextAlign::Left: return "left";
        case TextAlign::Center: return "center";
        case TextAlign::Right: return "right";
    }
    return "left";
}

const Node* find_node(const PosterDocument& doc, std::string_view id) {
    return find_in<const Node>(doc.nodes, id);
}

Node* find_node(PosterDocument& doc, std::string_view id) { return find_in<Node>(doc.nodes, id); }

std::vector<std::string> extract_text(const PosterDocument& doc) {
    std::vector<std::string> out;
    for_each_node(doc.nodes, [&](const Node& n) {
        if (!n.has_text()) return;
        std::string joined;
        for (const auto& run : n.runs) joined += run.text;
        out.push_back(std::move(joined));
    });
    return out;
}

PosterDocument scale_document(const PosterDocument& doc, const Rational& k) {
    if (!k.is_positive()) throw Error(ErrorCode::ScaleOutOfRange, "scale factor must be positive");
    PosterDocument out = doc;
    out.width *= k;
    out.height *= k;
    auto in_range = [](const Rational& v) { return v >= Rational(1) && v <= Rational(kMaxDocumentDimension); };
    if (!in_range(out.width) || !in_range(out.height)) {
        throw Error(ErrorCode::ScaleOutOfRange,
                    "scaled page " + out.width.to_string() + "x" + out.height.to_string() + " outside [1, 8192]");
    }
    scale_nodes(out.nodes, k);
    return out;
}

std::vector<std::string> validate_document(const PosterDocument& doc) {
    std::vector<std::string> problems;
    if (doc.width < Rational(1) || doc.height < Rational(1)) problems.push_back("page dimensions must be >= 1");
    std::set<std::string, std::less<>> ids;
    for_each_node(doc.nodes, [&](const Node& n) {
        if (n.id.empty()) problems.push_back("node with empty id");
        else if (!ids.insert(n.id).second) problems.push_back("duplicate id " + n.id);
        if (n.rect.width.is_negative() || n.rect.height.is_negative()) problems.push_back(n.id + ": negative size");
        if (n.style.border_radius.is_negative()) problems.push_back(n.id + ": negative border radius");
        if (!n.children.empty() && !n.runs.empty()) problems.push_back(n.id + ": children and text runs");
        if (n.kind == NodeKind::Img && (!n.style.background_image || !n.children.empty() || !n.runs.empty())) {
            problems.push_back(n.id + ": img must have a source and no content");
        }
        for (const auto& run : n.runs) {
            if (run.text.empty()) problems.push_back(n.id + ": empty text run");
            if (!unicode::is_valid_utf8(run.text)) problems.push_back(n.id + ": run is not UTF-8");
            if (!run.font.size.is_positive()) problems.push_back(n.id + ": font size must be > 0");
            if (run.font.line_height < Rational(1)) problems.push_back(n.id + ": line height below 1");
            if (run.font.weight != 400 && run.font.weight != 700) problems.push_back(n.id + ": font weight");
        }
    });
    return problems;
}

}  // namespace posterforge::typography
