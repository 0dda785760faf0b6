#include "posterforge/typography/html.hpp"

#include "posterforge/core/unicode.hpp"
#include "posterforge/typography/css.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>

namespace posterforge::typography {
namespace {

enum class TokenKind { StartTag, EndTag, Text, Comment, Declaration, End };

struct Attribute {
    std::string name;
    std::string value;
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::size_t position = 0;
    std::string name;  // tag name, lowercased
    std::vector<Attribute> attributes;
    bool self_closing = false;
    std::string text;  // raw text, entities not yet decoded
};

constexpr std::array<std::string_view, 4> kRawTextTags = {"script", "style", "textarea", "title"};
constexpr std::array<std::string_view, 9> kVoidTags = {"img", "br", "hr", "meta", "link", "input", "source", "wbr", "area"};

bool is_void(std::string_view name) { return std::find(kVoidTags.begin(), kVoidTags.end(), name) != kVoidTags.end(); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

[[noreturn]] void fail(ErrorCode code, const std::string& message, std::size_t position, std::vector<std::string> details = {}) {
    details.push_back("position=" + std::to_string(position));
    throw Error(code, message + " at byte " + std::to_string(position), std::move(details));
}

class Tokenizer {
public:
    Tokenizer(std::string_view text, ParseMode mode, std::vector<Warning>& warnings)
        : text_(text), mode_(mode), warnings_(warnings) {}

    const Token& peek() {
        if (!lookahead_) lookahead_ = read();
        return *lookahead_;
    }

    Token next() {
        Token t = lookahead_ ? std::move(*lookahead_) : read();
        lookahead_.reset();
        return t;
    }

private:
    Token read() {
        Token t;
        t.position = pos_;
        if (!pending_raw_end_.empty()) return read_raw_text();
        if (pos_ >= text_.size()) return t;

        if (text_[pos_] != '<') return read_text();
        if (text_.compare(pos_, 4, "<!--") == 0) {
            auto end = text_.find("-->", pos_ + 4);
            if (end == std::string_view::npos) fail(ErrorCode::SyntaxError, "unterminated comment", pos_);
            t.kind = TokenKind::Comment;
            pos_ = end + 3;
            return t;
        }
        if (text_.compare(pos_, 2, "<!") == 0 || text_.compare(pos_, 2, "<?") == 0) {
            auto end = text_.find('>', pos_);
            if (end == std::string_view::npos) fail(ErrorCode::SyntaxError, "unterminated declaration", pos_);
            t.kind = TokenKind::Declaration;
            std::size_t i = pos_ + 2;
            while (i < end && !std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
            t.name = "!" + lower(text_.substr(pos_ + 2, i - pos_ - 2));
            pos_ = end + 1;
            return t;
        }
        if (text_.compare(pos_, 2, "</") == 0) return read_end_tag();
        if (pos_ + 1 < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) return read_start_tag();

        if (mode_ == ParseMode::Strict) fail(ErrorCode::SyntaxError, "stray '<'", pos_);
        warnings_.push_back({"stray-lt", pos_, "treated '<' as text"});
        t.kind = TokenKind::Text;
        t.text = "<";
        ++pos_;
        return t;
    }

    Token read_text() {
        Token t;
        t.kind = TokenKind::Text;
        t.position = pos_;
        auto end = text_.find('<', pos_);
        if (end == std::string_view::npos) end = text_.size();
        t.text = std::string(text_.substr(pos_, end - pos_));
        pos_ = end;
        return t;
    }

    Token read_raw_text() {
        Token t;
        t.kind = TokenKind::Text;
        t.position = pos_;
        std::string needle = "</" + pending_raw_end_;
        std::size_t end = pos_;
        while (true) {
            end = text_.find("</", end);
            if (end == std::string_view::npos || lower(text_.substr(end, needle.size())) == needle) break;
            end += 2;
        }
        if (end == std::string_view::npos) end = text_.size();
        t.text = std::string(text_.substr(pos_, end - pos_));
        pos_ = end;
        pending_raw_end_.clear();
        return t;
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            unsigned char c = static_cast<unsigned char>(text_[pos_]);
            if (!(std::isalnum(c) || c == '-' || c == '_' || c == ':')) break;
            ++pos_;
        }
        return lower(text_.substr(start, pos_ - start));
    }

    void skip_spaces() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Token read_end_tag() {
        Token t;
        t.kind = TokenKind::EndTag;
        t.position = pos_;
        pos_ += 2;
        t.name = read_name();
        skip_spaces();
        if (t.name.empty() || pos_ >= text_.size() || text_[pos_] != '>') {
            fail(ErrorCode::SyntaxError, "malformed end tag", t.position);
        }
        ++pos_;
        return t;
    }

    Token read_start_tag() {
        Token t;
        t.kind = TokenKind::StartTag;
        t.position = pos_;
        ++pos_;
        t.name = read_name();
        while (true) {
            skip_spaces();
            if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "unterminated start tag <" + t.name + ">", t.position);
            char c = text_[pos_];
            if (c == '>') {
                ++pos_;
                break;
            }
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                t.self_closing = true;
                pos_ += 2;
                break;
            }
            std::size_t attr_pos = pos_;
            std::size_t start = pos_;
            while (pos_ < text_.size()) {
                char a = text_[pos_];
                if (std::isspace(static_cast<unsigned char>(a)) || a == '=' || a == '>' || a == '/' || a == '"' ||
                    a == '\'') {
                    break;
                }
                ++pos_;
            }
            if (pos_ == start) fail(ErrorCode::SyntaxError, "malformed attribute in <" + t.name + ">", attr_pos);
            Attribute attr{lower(text_.substr(start, pos_ - start)), {}};
            skip_spaces();
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
                skip_spaces();
                if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "missing attribute value", attr_pos);
                char q = text_[pos_];
                if (q == '"' || q == '\'') {
                    auto end = text_.find(q, pos_ + 1);
                    if (end == std::string_view::npos) fail(ErrorCode::SyntaxError, "unterminated attribute value", attr_pos);
                    attr.value = decode_entities(text_.substr(pos_ + 1, end - pos_ - 1));
                    pos_ = end + 1;
                } else {
                    std::size_t vstart = pos_;
                    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '>') {
                        ++pos_;
                    }
                    attr.value = decode_entities(text_.substr(vstart, pos_ - vstart));
                }
            }
            bool duplicate = std::any_of(t.attributes.begin(), t.attributes.end(),
                                         [&](const Attribute& a) { return a.name == attr.name; });
            if (duplicate) {
                if (mode_ == ParseMode::Strict) fail(ErrorCode::SyntaxError, "duplicate attribute " + attr.name, attr_pos);
                warnings_.push_back({"duplicate-attribute", attr_pos, "ignored repeated attribute " + attr.name});
                continue;
            }
            t.attributes.push_back(std::move(attr));
        }
        if (!t.self_closing && std::find(kRawTextTags.begin(), kRawTextTags.end(), t.name) != kRawTextTags.end()) {
            pending_raw_end_ = t.name;
        }
        return t;
    }

    std::string_view text_;
    ParseMode mode_;
    std::vector<Warning>& warnings_;
    std::size_t pos_ = 0;
    std::optional<Token> lookahead_;
    std::string pending_raw_end_;
};

struct OpenElement {
    std::string name;
    std::size_t position;
};

class Parser {
public:
    Parser(std::string_view text, ParseMode mode) : tokens_(text, mode, warnings_), mode_(mode) {}

    Parsed<PosterDocument> run() {
        PosterDocument doc = parse_document();
        assign_ids(doc);
        return {std::move(doc), std::move(warnings_)};
    }

private:
    bool strict() const { return mode_ == ParseMode::Strict; }

    void warn(std::string code, std::size_t position, std::string message) {
        warnings_.push_back({std::move(code), position, std::move(message)});
    }

    // Reports a recoverable problem: throws in strict mode, records a warning otherwise.
    void problem(ErrorCode code, const std::string& message, std::size_t position, std::vector<std::string> details = {}) {
        if (strict()) fail(code, message, position, std::move(details));
        warn(std::string(to_string(code)), position, message);
    }

    void skip_element(const Token& start) {
        if (start.self_closing || is_void(start.name)) return;
        int depth = 1;
        while (depth > 0) {
            Token t = tokens_.next();
            if (t.kind == TokenKind::End) {
                warn("unclosed-skipped", start.position, "skipped element <" + start.name + "> never closed");
                return;
            }
            if (t.kind == TokenKind::StartTag && t.name == start.name && !t.self_closing) ++depth;
            if (t.kind == TokenKind::EndTag && t.name == start.name) --depth;
        }
    }

    void unknown_tag(const Token& t) {
        if (strict()) fail(ErrorCode::UnknownTag, "unknown tag <" + t.name + ">", t.position, {t.name});
        warn("UnknownTag", t.position, "skipped unknown tag <" + t.name + ">");
        skip_element(t);
    }

    // Handles an end tag that does not close the current element. Returns true
    // when it closes an ancestor, which means the current element is unclosed.
    bool unexpected_end(const Token& t) {
        for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
            if (it->name == t.name) {
                const auto& current = open_.back();
                fail(ErrorCode::UnclosedTag, "unclosed <" + current.name + ">", current.position, {current.name});
            }
        }
        problem(ErrorCode::SyntaxError, "stray end tag </" + t.name + ">", t.position);
        return false;
    }

    [[noreturn]] void eof_inside() {
        const auto& current = open_.back();
        fail(ErrorCode::UnclosedTag, "unclosed <" + current.name + ">", current.position, {current.name});
    }

    std::string attribute_or_empty(const Token& t, std::string_view name) {
        for (const auto& a : t.attributes) {
            if (a.name == name) return a.value;
        }
        return {};
    }

    bool has_attribute(const Token& t, std::string_view name) {
        return std::any_of(t.attributes.begin(), t.attributes.end(), [&](const Attribute& a) { return a.name == name; });
    }

    void check_attributes(const Token& t, std::initializer_list<std::string_view> allowed) {
        for (const auto& a : t.attributes) {
            if (std::find(allowed.begin(), allowed.end(), a.name) != allowed.end()) continue;
            problem(ErrorCode::UnknownProperty, "unknown attribute '" + a.name + "' on <" + t.name + ">", t.position, {a.name});
        }
    }

    std::optional<std::string> read_id(const Token& t) {
        if (!has_attribute(t, "id")) return std::nullopt;
        std::string id = attribute_or_empty(t, "id");
        if (!css::is_valid_id(id)) {
            problem(ErrorCode::SyntaxError, "invalid id '" + id + "'", t.position);
            return std::nullopt;
        }
        return id;
    }

    template <typename Fn>
    void apply_declaration(const Token& t, const std::string& prop, const std::string& value, Fn&& apply) {
        if (!css::is_known_property(prop)) {
            problem(ErrorCode::UnknownProperty, "unknown property '" + prop + "'", t.position, {prop});
            return;
        }
        try {
            apply();
        } catch (const Error& e) {
            if (strict()) {
                std::vector<std::string> details = e.details();
                details.push_back("position=" + std::to_string(t.position));
                throw Error(e.code(), std::string(e.what()) + " at byte " + std::to_string(t.position), details);
            }
            warn(std::string(to_string(e.code())), t.position, std::string(e.what()) + " (ignored '" + prop + ":" + value + "')");
        }
    }

    PosterDocument parse_document() {
        while (true) {
            const Token& t = tokens_.peek();
            if (t.kind == TokenKind::End) fail(ErrorCode::SyntaxError, "no poster root element", t.position);
            if (t.kind == TokenKind::Comment) {
                tokens_.next();
                continue;
            }
            if (t.kind == TokenKind::Text) {
                if (!is_blank(t.text)) problem(ErrorCode::SyntaxError, "text outside the poster root", t.position);
                tokens_.next();
                continue;
            }
            if (t.kind == TokenKind::Declaration) {
                Token d = tokens_.next();
                problem(ErrorCode::UnknownTag, "unexpected <" + d.name + ">", d.position, {d.name});
                continue;
            }
            if (t.kind == TokenKind::EndTag) {
                Token e = tokens_.next();
                if (strict()) fail(ErrorCode::SyntaxError, "stray end tag </" + e.name + ">", e.position);
                warn("SyntaxError", e.position, "ignored stray end tag </" + e.name + ">");
                continue;
            }
            Token start = tokens_.next();
            if (start.name == "div") {
                PosterDocument doc = parse_root(start);
                parse_trailer();
                return doc;
            }
            if (!strict() && (start.name == "html" || start.name == "body")) {
                warn("wrapper", start.position, "descended into <" + start.name + ">");
                continue;
            }
            if (start.name == "span" || start.name == "img") {
                fail(ErrorCode::SyntaxError, "poster root must be a <div>", start.position);
            }
            unknown_tag(start);
        }
    }

    void parse_trailer() {
        while (true) {
            Token t = tokens_.next();
            if (t.kind == TokenKind::End) return;
            if (t.kind == TokenKind::Comment) continue;
            if (t.kind == TokenKind::Text && is_blank(t.text)) continue;
            if (!strict() && t.kind == TokenKind::EndTag && (t.name == "body" || t.name == "html")) continue;
            problem(ErrorCode::SyntaxError, "content after the poster root", t.position);
            if (t.kind == TokenKind::StartTag) skip_element(t);
        }
    }

    PosterDocument parse_root(const Token& start) {
        PosterDocument doc;
        check_attributes(start, {"class", "style", "id"});
        std::optional<Rational> width, height;
        std::optional<std::string> color, image;
        Font font;
        for (const auto& [prop, value] : css::split_declarations(attribute_or_empty(start, "style"))) {
            apply_declaration(start, prop, value, [&, &prop = prop, &value = value] {
                if (prop == "width" || prop == "height") {
                    auto v = css::parse_length(value);
                    if (!v || *v < Rational(1) || *v > Rational(kMaxDocumentDimension)) {
                        throw Error(ErrorCode::InvalidStyleValue, "page " + prop + " must be in [1px, 8192px]", {prop, value});
                    }
                    (prop == "width" ? width : height) = *v;
                } else if (prop == "position") {
                    auto v = lower(value);
                    if (v != "relative" && v != "absolute" && v != "static") {
                        throw Error(ErrorCode::InvalidStyleValue, "invalid root position '" + value + "'", {prop, value});
                    }
                } else if (prop == "background-color") {
                    if (!is_hex_color(value)) throw Error(ErrorCode::InvalidStyleValue, "invalid color", {prop, value});
                    color = normalize_hex_color(value);
                } else if (prop == "background-image") {
                    auto url = css::parse_url(value);
                    if (!url) throw Error(ErrorCode::InvalidStyleValue, "invalid background image", {prop, value});
                    image = *url;
                } else if (css::is_font_property(prop)) {
                    css::set_font_property(font, prop, value);
                } else {
                    throw Error(ErrorCode::InvalidStyleValue, prop + " does not apply to the poster root", {prop, value});
                }
            });
        }
        if (!width || !height) fail(ErrorCode::MissingRootDimensions, "poster root needs width and height", start.position);
        doc.width = *width;
        doc.height = *height;
        if (image && color) problem(ErrorCode::InvalidStyleValue, "background-color and background-image are exclusive", start.position);
        if (image) doc.background = ImageBackground{*image};
        else if (color) doc.background = SolidBackground{*color};

        if (start.self_closing) return doc;
        open_.push_back({"div", start.position});
        while (true) {
            Token t = tokens_.next();
            switch (t.kind) {
                case TokenKind::End: eof_inside();
                case TokenKind::Comment: continue;
                case TokenKind::Declaration:
                    problem(ErrorCode::UnknownTag, "unexpected <" + t.name + ">", t.position, {t.name});
                    continue;
                case TokenKind::Text:
                    if (!is_blank(t.text)) problem(ErrorCode::MixedContent, "text directly inside the poster root", t.position);
                    continue;
                case TokenKind::EndTag:
                    if (t.name == "div") {
                        open_.pop_back();
                        return doc;
                    }
                    unexpected_end(t);
                    continue;
                case TokenKind::StartTag:
                    if (t.name == "div") doc.nodes.push_back(parse_div(t, font));
                    else if (t.name == "img") {
                        if (auto img = parse_img(t)) doc.nodes.push_back(std::move(*img));
                    } else if (t.name == "span") {
                        problem(ErrorCode::MixedContent, "text span directly inside the poster root", t.position);
                        skip_element(t);
                    } else {
                        unknown_tag(t);
                    }
                    continue;
            }
        }
    }

    Node parse_div(const Token& start, Font font) {
        Node node;
        check_attributes(start, {"id", "style"});
        if (auto id = read_id(start)) node.id = *id;
        for (const auto& [prop, value] : css::split_declarations(attribute_or_empty(start, "style"))) {
            apply_declaration(start, prop, value, [&, &prop = prop, &value = value] {
                if (css::is_font_property(prop)) css::set_font_property(font, prop, value);
                else css::set_box_property(node, prop, value);
            });
        }
        if (start.self_closing) return node;

        open_.push_back({"div", start.position});
        std::size_t first_text_pos = 0;
        std::size_t first_node_pos = 0;
        while (true) {
            Token t = tokens_.next();
            switch (t.kind) {
                case TokenKind::End: eof_inside();
                case TokenKind::Comment: continue;
                case TokenKind::Declaration:
                    problem(ErrorCode::UnknownTag, "unexpected <" + t.name + ">", t.position, {t.name});
                    continue;
                case TokenKind::Text:
                    if (is_blank(t.text)) continue;
                    if (node.runs.empty()) first_text_pos = t.position;
                    node.runs.push_back({decode_entities(t.text), font});
                    continue;
                case TokenKind::EndTag:
                    if (t.name == "div") {
                        open_.pop_back();
                        if (!node.children.empty() && !node.runs.empty()) {
                            problem(ErrorCode::MixedContent, "element mixes child boxes and text",
                                    std::max(first_text_pos, first_node_pos));
                            node.runs.clear();
                        }
                        return node;
                    }
                    unexpected_end(t);
                    continue;
                case TokenKind::StartTag:
                    if (t.name == "span") {
                        if (node.runs.empty()) first_text_pos = t.position;
                        parse_span(t, font, node.runs);
                    } else if (t.name == "div") {
                        if (node.children.empty()) first_node_pos = t.position;
                        node.children.push_back(parse_div(t, font));
                    } else if (t.name == "img") {
                        if (node.children.empty()) first_node_pos = t.position;
                        if (auto img = parse_img(t)) node.children.push_back(std::move(*img));
                    } else {
                        unknown_tag(t);
                    }
                    continue;
            }
        }
    }

    std::optional<Node> parse_img(const Token& start) {
        Node node;
        node.kind = NodeKind::Img;
        check_attributes(start, {"id", "src", "style", "alt"});
        if (auto id = read_id(start)) node.id = *id;
        for (const auto& [prop, value] : css::split_declarations(attribute_or_empty(start, "style"))) {
            apply_declaration(start, prop, value, [&, &prop = prop, &value = value] {
                if (css::is_font_property(prop) || prop == "background-image") {
                    throw Error(ErrorCode::InvalidStyleValue, prop + " does not apply to <img>", {prop, value});
                }
                css::set_box_property(node, prop, value);
            });
        }
        std::string src = attribute_or_empty(start, "src");
        if (!css::is_valid_id(src)) {
            problem(ErrorCode::SyntaxError, "<img> needs a valid src", start.position);
            return std::nullopt;
        }
        node.style.background_image = src;
        return node;
    }

    void parse_span(const Token& start, Font font, std::vector<TextRun>& runs) {
        check_attributes(start, {"style"});
        for (const auto& [prop, value] : css::split_declarations(attribute_or_empty(start, "style"))) {
            apply_declaration(start, prop, value, [&, &prop = prop, &value = value] {
                if (!css::is_font_property(prop)) {
                    throw Error(ErrorCode::InvalidStyleValue, prop + " does not apply to <span>", {prop, value});
                }
                css::set_font_property(font, prop, value);
            });
        }
        if (start.self_closing) return;

        open_.push_back({"span", start.position});
        std::string buffer;
        auto flush = [&] {
            if (!buffer.empty()) runs.push_back({std::move(buffer), font});
            buffer.clear();
        };
        while (true) {
            Token t = tokens_.next();
            switch (t.kind) {
                case TokenKind::End: eof_inside();
                case TokenKind::Comment: continue;
                case TokenKind::Declaration:
                    problem(ErrorCode::UnknownTag, "unexpected <" + t.name + ">", t.position, {t.name});
                    continue;
                case TokenKind::Text: buffer += decode_entities(t.text); continue;
                case TokenKind::EndTag:
                    if (t.name == "span") {
                        flush();
                        open_.pop_back();
                        return;
                    }
                    unexpected_end(t);
                    continue;
                case TokenKind::StartTag:
                    if (t.name == "span") {
                        flush();
                        parse_span(t, font, runs);
                    } else if (t.name == "div" || t.name == "img") {
                        problem(ErrorCode::SyntaxError, "<" + t.name + "> inside <span>", t.position);
                        skip_element(t);
                    } else {
                        unknown_tag(t);
                    }
                    continue;
            }
        }
    }

    void assign_ids(PosterDocument& doc) {
        std::set<std::string, std::less<>> used;
        for_each_node(doc.nodes, [&](const Node& n) {
            if (n.id.empty()) return;
            if (!used.insert(n.id).second) throw Error(ErrorCode::DuplicateId, "duplicate id '" + n.id + "'", {n.id});
        });
        int counter = 0;
        for_each_node(doc.nodes, [&](Node& n) {
            if (!n.id.empty()) return;
            std::string candidate;
            do {
                candidate = "n" + std::to_string(++counter);
            } while (used.count(candidate) != 0);
            used.insert(candidate);
            n.id = candidate;
        });
    }

    std::vector<Warning> warnings_;
    Tokenizer tokens_;
    ParseMode mode_;
    std::vector<OpenElement> open_;
};

void append_hex(std::string& out, const std::string& color) { out += color; }

void serialize_node(const Node& n, std::string& out) {
    std::string style = "position:absolute;left:" + css::format_length(n.rect.left) +
                        ";top:" + css::format_length(n.rect.top) + ";width:" + css::format_length(n.rect.width) +
                        ";height:" + css::format_length(n.rect.height) + ";z-index:" + std::to_string(n.z_index);
    if (n.style.background_color) {
        style += ";background-color:";
        append_hex(style, *n.style.background_color);
    }
    if (n.kind == NodeKind::Div && n.style.background_image) {
        style += ";background-image:url('" + *n.style.background_image + "')";
    }
    if (!n.style.border_radius.is_zero()) style += ";border-radius:" + css::format_length(n.style.border_radius);

    if (n.kind == NodeKind::Img) {
        out += "<img id=\"" + escape_attribute(n.id) + "\" src=\"" + escape_attribute(n.style.background_image.value_or("")) +
               "\" style=\"" + escape_attribute(style) + "\">";
        return;
    }
    out += "<div id=\"" + escape_attribute(n.id) + "\" style=\"" + escape_attribute(style) + "\">";
    for (const auto& child : n.children) serialize_node(child, out);
    for (const auto& run : n.runs) {
        const Font& f = run.font;
        std::string span_style = "font-family:" + f.family + ";font-size:" + css::format_length(f.size) +
                                 ";font-weight:" + std::to_string(f.weight) + ";color:" + f.color +
                                 ";letter-spacing:" + css::format_length(f.letter_spacing) +
                                 ";line-height:" + css::format_number(f.line_height) +
                                 ";text-align:" + std::string(to_string(f.align));
        out += "<span style=\"" + escape_attribute(span_style) + "\">" + escape_text(run.text) + "</span>";
    }
    out += "</div>";
}

}  // namespace

std::string escape_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string escape_attribute(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            case '<': out += "&lt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        auto semi = text.find(';', i);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(text[i++]);
            continue;
        }
        std::string_view name = text.substr(i + 1, semi - i - 1);
        std::optional<char32_t> cp;
        if (name == "amp") cp = U'&';
        else if (name == "lt") cp = U'<';
        else if (name == "gt") cp = U'>';
        else if (name == "quot") cp = U'"';
        else if (name == "apos" || name == "#39") cp = U'\'';
        else if (name == "nbsp") cp = U' ';
        else if (name.size() > 1 && name[0] == '#') {
            std::uint32_t v = 0;
            bool hex = name[1] == 'x' || name[1] == 'X';
            auto digits = name.substr(hex ? 2 : 1);
            auto r = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
            if (!digits.empty() && r.ec == std::errc{} && r.ptr == digits.data() + digits.size() && v > 0 && v <= 0x10FFFF &&
                !(v >= 0xD800 && v <= 0xDFFF)) {
                cp = static_cast<char32_t>(v);
            }
        }
        if (!cp) {
            out.push_back(text[i++]);
            continue;
        }
        unicode::append_utf8(out, *cp);
        i = semi + 1;
    }
    return out;
}

Parsed<PosterDocument> parse_poster_html_with_warnings(std::string_view text, ParseMode mode) {
    return Parser(text, mode).run();
}

PosterDocument parse_poster_html(std::string_view text, ParseMode mode) {
    return parse_poster_html_with_warnings(text, mode).value;
}

std::string serialize_poster(const PosterDocument& doc) {
    std::string out = "<div class=\"poster\" style=\"position:relative;width:" + css::format_length(doc.width) +
                      ";height:" + css::format_length(doc.height);
    if (const auto* solid = std::get_if<SolidBackground>(&doc.background)) {
        out += ";background-color:" + solid->color;
    } else {
        out += ";background-image:url('" + escape_attribute(std::get<ImageBackground>(doc.background).image_id) + "')";
    }
    out += "\">";
    for (const auto& n : doc.nodes) serialize_node(n, out);
    out += "</div>";
    return out;
}

}  // namespace posterforge::typography
