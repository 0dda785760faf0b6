#include "posterforge/backends/mock.hpp"

#include "posterforge/core/digest.hpp"
#include "posterforge/core/rng.hpp"
#include "posterforge/core/unicode.hpp"
#include "posterforge/typography/glyphs.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/layout.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace posterforge::backends::mock {
namespace {

using typography::Font;
using typography::Node;
using typography::TextAlign;
using typography::TextRun;

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
    return items[rng.below(N)];
}

std::string truncate_code_points(std::string_view text, std::size_t limit) {
    std::u32string cps = unicode::decode_utf8(text);
    if (cps.size() > limit) cps.resize(limit);
    return unicode::encode_utf8(cps);
}

std::string random_color(Rng& rng) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", static_cast<unsigned>(rng.below(256)),
                  static_cast<unsigned>(rng.below(256)), static_cast<unsigned>(rng.below(256)));
    return buf;
}

struct Vocabulary {
    std::array<std::string_view, 4> subtitles;
    std::array<std::string_view, 5> body;
    std::array<std::string_view, 3> contact_prefix;
    std::array<std::string_view, 4> themes;
    std::array<std::string_view, 6> elements;
    std::array<std::string_view, 4> purposes;
    std::string_view caption_prefix;
};

const Vocabulary kChinese = {
    {"盛大开幕", "限时活动", "诚邀光临", "全新体验"},
    {"活动时间：本周六上午十点", "地点：城市中心广场", "现场好礼相送", "凭海报享受八折优惠", "欢迎携家人朋友参加"},
    {"电话：", "热线：", "咨询："},
    {"节日庆典", "商业促销", "文化活动", "品牌发布"},
    {"灯笼", "花朵", "几何图形", "咖啡杯", "城市天际线", "彩带"},
    {"宣传推广", "活动通知", "品牌展示", "节日祝福"},
    "海报背景：",
};

const Vocabulary kEnglish = {
    {"Grand Opening", "Limited Time Only", "You Are Invited", "A Fresh Experience"},
    {"Saturday 10 AM onwards", "Downtown Central Square", "Free gifts for early guests", "20% off with this poster",
     "Bring your friends and family"},
    {"Tel: ", "Call ", "Info: "},
    {"festival", "retail promotion", "cultural event", "product launch"},
    {"lanterns", "flowers", "geometric shapes", "coffee cup", "city skyline", "ribbons"},
    {"promotion", "event notice", "brand showcase", "holiday greeting"},
    "Poster background: ",
};

constexpr std::array<Resolution, 5> kResolutions = {
    Resolution{800, 1200}, Resolution{1024, 1536}, Resolution{1080, 1920}, Resolution{1200, 800}, Resolution{1024, 1024}};

struct Rgb {
    int r, g, b;
};

struct Palette {
    Rgb from;
    Rgb to;
};

Palette base_palette(StyleId style) {
    switch (style) {
        case StyleId::Illustrative: return {{0xF4, 0xA2, 0x61}, {0x2A, 0x9D, 0x8F}};
        case StyleId::DesignOriented: return {{0x26, 0x46, 0x53}, {0xE9, 0xC4, 0x6A}};
        case StyleId::Minimalistic: return {{0xF1, 0xF1, 0xEE}, {0xD2, 0xD4, 0xD0}};
        case StyleId::Photorealistic: break;
    }
    return {{0x3D, 0x5A, 0x80}, {0x98, 0xC1, 0xD9}};
}

Rgb jitter(Rgb c, Rng& rng) {
    auto j = [&](int v) { return std::clamp(v + static_cast<int>(rng.between(-24, 24)), 0, 255); };
    return {j(c.r), j(c.g), j(c.b)};
}

std::uint8_t clamp8(std::int64_t v) { return static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255)); }

}  // namespace

DesignBlueprint blueprint(const UserRequirement& req, std::uint64_t seed) {
    const std::string key = req.canonical_key ? *req.canonical_key : unicode::normalize_for_matching(req.text);
    Rng rng(stable_hash64("mock-blueprint\n" + key + "\n" + req.locale + "\n" + std::to_string(seed)));
    const bool chinese = req.locale == "zh" || req.locale.rfind("zh-", 0) == 0;
    const Vocabulary& v = chinese ? kChinese : kEnglish;

    DesignBlueprint bp;
    bp.textual.title = truncate_code_points(unicode::normalize_for_matching(key), 24);
    if (bp.textual.title.empty()) bp.textual.title = std::string(pick(rng, v.subtitles));
    if (rng.below(4) != 0) bp.textual.subtitle = std::string(pick(rng, v.subtitles));
    const std::size_t body_count = 1 + rng.below(3);
    std::vector<std::size_t> order = {0, 1, 2, 3, 4};
    for (std::size_t i = 0; i < body_count; ++i) {
        std::swap(order[i], order[i + rng.below(order.size() - i)]);
        bp.textual.body.emplace_back(v.body[order[i]]);
    }
    char phone[32];
    std::snprintf(phone, sizeof phone, "021-%04u-%04u", static_cast<unsigned>(rng.below(10000)),
                  static_cast<unsigned>(rng.below(10000)));
    bp.textual.contact.push_back(std::string(pick(rng, v.contact_prefix)) + phone);

    bp.background.style = kAllStyles[rng.below(4)];
    bp.params.resolution = kResolutions[rng.below(kResolutions.size())];
    bp.params.theme = std::string(pick(rng, v.themes));
    const std::size_t element_count = rng.below(4);
    for (std::size_t i = 0; i < element_count; ++i) bp.params.elements.emplace_back(pick(rng, v.elements));
    const std::size_t color_count = 1 + rng.below(3);
    for (std::size_t i = 0; i < color_count; ++i) bp.params.colors.push_back(random_color(rng));
    bp.params.purpose = std::string(pick(rng, v.purposes));

    bp.background.caption = std::string(v.caption_prefix) + bp.params.theme;
    for (const auto& e : bp.params.elements) bp.background.caption += (chinese ? "、" : ", ") + e;
    return bp;
}

typography::Raster background(const BackgroundAttributes& attrs, Resolution resolution, std::uint64_t seed) {
    const std::string caption_digest = sha256_hex(attrs.caption);
    Rng rng(stable_hash64("mock-background\n" + std::string(to_string(attrs.style)) + "\n" + caption_digest + "\n" +
                          std::to_string(seed)));
    const Palette base = base_palette(attrs.style);
    const Rgb from = jitter(base.from, rng);
    const Rgb to = jitter(base.to, rng);
    std::int64_t dx = 0, dy = 0;
    while (dx == 0 && dy == 0) {
        dx = rng.between(-8, 8);
        dy = rng.between(-8, 8);
    }
    const std::uint64_t noise_key = rng.next();

    const std::int64_t w = resolution.width, h = resolution.height;
    typography::Raster out(w, h, {0, 0, 0, 255});
    // Projection of each pixel onto (dx, dy), normalised to [0, span].
    const std::int64_t lo = std::min<std::int64_t>(0, dx * (w - 1)) + std::min<std::int64_t>(0, dy * (h - 1));
    const std::int64_t hi = std::max<std::int64_t>(0, dx * (w - 1)) + std::max<std::int64_t>(0, dy * (h - 1));
    const std::int64_t span = std::max<std::int64_t>(1, hi - lo);
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) {
            const std::int64_t t = x * dx + y * dy - lo;  // 0..span
            std::int64_t texture = 0;
            switch (attrs.style) {
                case StyleId::Illustrative: texture = ((x + y) / 24) % 2 ? 10 : 0; break;
                case StyleId::DesignOriented: texture = ((x / 64) + (y / 64)) % 2 ? 14 : -6; break;
                case StyleId::Minimalistic: break;
                case StyleId::Photorealistic: {
                    std::uint64_t z = noise_key ^ (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^
                                      (static_cast<std::uint64_t>(y) * 0xC2B2AE3D27D4EB4Full);
                    z ^= z >> 31;
                    z *= 0xBF58476D1CE4E5B9ull;
                    z ^= z >> 29;
                    texture = static_cast<std::int64_t>(z % 13) - 6;
                    break;
                }
            }
            std::uint8_t* p = out.pixel(x, y);
            p[0] = clamp8((from.r * (span - t) + to.r * t) / span + texture);
            p[1] = clamp8((from.g * (span - t) + to.g * t) / span + texture);
            p[2] = clamp8((from.b * (span - t) + to.b * t) / span + texture);
        }
    }
    return out;
}

std::string layout(const DesignBlueprint& bp, const std::string& background_id) {
    const std::int64_t width = bp.params.resolution.width;
    const std::int64_t height = bp.params.resolution.height;
    const std::int64_t margin = std::max<std::int64_t>(1, width / 16);
    const std::int64_t gap = std::max<std::int64_t>(1, width / 64);
    const Rational box_width = Rational(std::max<std::int64_t>(1, width - 2 * margin));

    const std::string primary = bp.params.colors.empty() ? "#1A1A1A" : bp.params.colors.front();
    const std::string secondary = bp.params.colors.size() > 1 ? bp.params.colors[1] : primary;

    struct Block {
        std::string id;
        std::string text;
        std::int64_t size;
        int weight;
        TextAlign align;
        std::string color;
    };
    std::vector<Block> blocks;
    blocks.push_back({"title", bp.textual.title, width / 10, 700, TextAlign::Center, primary});
    if (bp.textual.subtitle && !bp.textual.subtitle->empty()) {
        blocks.push_back({"subtitle", *bp.textual.subtitle, width / 18, 400, TextAlign::Center, secondary});
    }
    for (std::size_t i = 0; i < bp.textual.body.size(); ++i) {
        if (bp.textual.body[i].empty()) continue;
        blocks.push_back({"body-" + std::to_string(i + 1), bp.textual.body[i], width / 26, 400, TextAlign::Left, secondary});
    }
    for (std::size_t i = 0; i < bp.textual.contact.size(); ++i) {
        if (bp.textual.contact[i].empty()) continue;
        blocks.push_back({"contact-" + std::to_string(i + 1), bp.textual.contact[i], width / 32, 400, TextAlign::Left, secondary});
    }
    for (auto& b : blocks) b.size = std::max<std::int64_t>(1, b.size);

    const typography::SyntheticGlyphs glyphs;
    auto make_node = [&](const Block& b) {
        Node n;
        n.id = b.id;
        Font font;
        font.size = b.size;
        font.weight = b.weight;
        font.align = b.align;
        font.color = b.color;
        n.runs.push_back(TextRun{b.text, font});
        n.rect.width = box_width;
        n.rect.height = 1;  // line count does not depend on the height
        const auto box = typography::layout_node(n, glyphs);
        const auto lines = static_cast<std::int64_t>(std::max<std::size_t>(1, box.lines.size()));
        n.rect.height = Rational(lines) * font.size * font.line_height;
        return n;
    };

    // Shrink every font by 4/5 until the stack fits between the margins.
    std::vector<Node> nodes;
    while (true) {
        nodes.clear();
        Rational top = margin;
        for (const auto& b : blocks) {
            Node n = make_node(b);
            n.rect.left = margin;
            n.rect.top = top;
            top += n.rect.height + Rational(gap);
            nodes.push_back(std::move(n));
        }
        const Rational bottom = top - Rational(gap);
        const bool fits = bottom <= Rational(height - margin);
        const bool smallest = std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.size == 1; });
        if (fits || smallest) break;
        for (auto& b : blocks) b.size = std::max<std::int64_t>(1, b.size * 4 / 5);
    }

    typography::PosterDocument doc;
    doc.width = width;
    doc.height = height;
    doc.background = typography::ImageBackground{background_id};
    doc.nodes = std::move(nodes);
    return typography::serialize_poster(doc);
}

}  // namespace posterforge::backends::mock
