#include "posterforge/typography/layout.hpp"

#include "posterforge/core/unicode.hpp"

namespace posterforge::typography {
namespace {

struct Item {
    char32_t cp;
    std::size_t run;
    Rational advance;
    bool space;
    bool cjk;
};

std::vector<Item> shape(const Node& node, const GlyphProvider& glyphs) {
    std::vector<Item> items;
    for (std::size_t r = 0; r < node.runs.size(); ++r) {
        const Font& font = node.runs[r].font;
        for (char32_t cp : unicode::decode_utf8(node.runs[r].text)) {
            items.push_back({cp, r, glyphs.advance(cp, font) + font.letter_spacing, unicode::is_space(cp), unicode::is_cjk(cp)});
        }
    }
    return items;
}

LayoutLine make_line(const std::vector<Item>& items, const std::vector<std::size_t>& indices, const Node& node) {
    LayoutLine line;
    for (std::size_t i : indices) {
        const Item& it = items[i];
        const Font& font = node.runs[it.run].font;
        line.height = max(line.height, font.size * font.line_height);
        line.width += it.advance;
        line.glyphs.push_back({it.cp, it.run, Rational(0), it.advance});
    }
    Rational offset = 0;
    switch (node.runs[items[indices.front()].run].font.align) {
        case TextAlign::Left: break;
        case TextAlign::Center: offset = (node.rect.width - line.width) * Rational(1, 2); break;
        case TextAlign::Right: offset = node.rect.width - line.width; break;
    }
    Rational pen = node.rect.left + offset;
    for (auto& g : line.glyphs) {
        g.x = pen;
        pen += g.advance;
    }
    return line;
}

}  // namespace

LayoutBox layout_node(const Node& node, const GlyphProvider& glyphs) {
    LayoutBox box;
    box.node_id = node.id;
    box.rect = node.rect;
    const std::vector<Item> items = shape(node, glyphs);
    if (items.empty()) return box;
    const Rational limit = node.rect.width;
    if (!limit.is_positive() || !node.rect.height.is_positive()) {
        box.overflow = true;
        return box;
    }

    std::vector<std::vector<std::size_t>> lines;
    std::vector<std::size_t> current;
    Rational current_width = 0;

    auto finish = [&](bool wrapped) {
        if (wrapped) {
            while (!current.empty() && items[current.back()].space) {
                current_width -= items[current.back()].advance;
                current.pop_back();
            }
        }
        if (!current.empty()) lines.push_back(std::move(current));
        current.clear();
        current_width = 0;
    };

    // Segments end after a space or between two CJK code points; a space is
    // therefore always the last item of its segment.
    std::size_t start = 0;
    while (start < items.size()) {
        std::size_t end = start + 1;
        while (end < items.size() && !items[end - 1].space && !(items[end - 1].cjk && items[end].cjk)) ++end;

        const bool trailing_space = items[end - 1].space;
        const std::size_t body_end = trailing_space ? end - 1 : end;
        Rational body_width = 0;
        for (std::size_t i = start; i < body_end; ++i) body_width += items[i].advance;

        if (!current.empty() && current_width + body_width > limit) finish(true);
        if (body_width > limit) {
            for (std::size_t i = start; i < body_end; ++i) {
                if (!current.empty() && current_width + items[i].advance > limit) finish(true);
                current.push_back(i);
                current_width += items[i].advance;
                if (items[i].advance > limit) box.overflow = true;
            }
        } else {
            for (std::size_t i = start; i < body_end; ++i) current.push_back(i);
            current_width += body_width;
        }
        if (trailing_space && current_width + items[end - 1].advance <= limit) {
            current.push_back(end - 1);
            current_width += items[end - 1].advance;
        }
        start = end;
    }
    finish(false);

    Rational top = node.rect.top;
    for (const auto& indices : lines) {
        LayoutLine line = make_line(items, indices, node);
        line.top = top;
        top += line.height;
        box.lines.push_back(std::move(line));
    }
    if (top - node.rect.top > node.rect.height) box.overflow = true;
    return box;
}

std::vector<LayoutBox> compute_layout(const PosterDocument& doc, const GlyphProvider& glyphs) {
    std::vector<LayoutBox> out;
    for_each_node(doc.nodes, [&](const Node& n) {
        if (n.has_text()) out.push_back(layout_node(n, glyphs));
    });
    return out;
}

}  // namespace posterforge::typography
