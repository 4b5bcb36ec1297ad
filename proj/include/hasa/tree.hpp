#ifndef HASA_TREE_HPP
#define HASA_TREE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hasa/error.hpp"

namespace hasa {

/// Element name. Any non-empty token without whitespace, parentheses or commas.
using Label = std::string;

inline bool is_valid_label(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    return std::none_of(name.begin(), name.end(), [](char c) {
        return c == '(' || c == ')' || c == ',' || c == ' ' || c == '\t' || c == '\n' ||
               c == '\r' || c == '\f' || c == '\v';
    });
}

/// Node address: the empty path is the root, child indices are 1-based.
/// The defaulted ordering is the lexicographic order on paths (a proper
/// prefix sorts first).
class Position {
public:
    Position() = default;
    explicit Position(std::vector<std::uint32_t> path) : path_(std::move(path)) {}
    Position(std::initializer_list<std::uint32_t> path) : path_(path) {}

    static Position root() { return Position(); }

    bool is_root() const noexcept { return path_.empty(); }
    std::size_t depth() const noexcept { return path_.size(); }
    const std::vector<std::uint32_t>& path() const noexcept { return path_; }
    std::uint32_t operator[](std::size_t i) const { return path_[i]; }
    std::uint32_t last() const { return path_.back(); }

    Position child(std::uint32_t index) const {
        Position p = *this;
        p.path_.push_back(index);
        return p;
    }

    Position parent() const {
        Position p = *this;
        if (!p.path_.empty()) {
            p.path_.pop_back();
        }
        return p;
    }

    bool is_prefix_of(const Position& other) const {
        return path_.size() <= other.path_.size() &&
               std::equal(path_.begin(), path_.end(), other.path_.begin());
    }

    /// "ε" for the root, otherwise dot-separated indices ("2.1").
    std::string to_string() const {
        if (path_.empty()) {
            return "ε";
        }
        std::string out;
        for (std::size_t i = 0; i < path_.size(); ++i) {
            if (i > 0) {
                out += '.';
            }
            out += std::to_string(path_[i]);
        }
        return out;
    }

    friend bool operator==(const Position&, const Position&) = default;
    friend auto operator<=>(const Position&, const Position&) = default;

private:
    std::vector<std::uint32_t> path_;
};

/// Finite ordered unranked labeled tree.
struct Tree {
    Label label;
    std::vector<Tree> children;

    Tree() = default;
    explicit Tree(Label l) : label(std::move(l)) {}
    Tree(Label l, std::vector<Tree> kids) : label(std::move(l)), children(std::move(kids)) {}

    bool is_leaf() const noexcept { return children.empty(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (const Tree& c : children) {
            n += c.size();
        }
        return n;
    }

    std::size_t height() const {
        std::size_t h = 0;
        for (const Tree& c : children) {
            h = std::max(h, c.height() + 1);
        }
        return h;
    }

    friend bool operator==(const Tree& x, const Tree& y) {
        return x.label == y.label && x.children == y.children;
    }

    friend std::strong_ordering operator<=>(const Tree& x, const Tree& y) {
        if (auto c = x.label <=> y.label; c != 0) {
            return c;
        }
        const std::size_t n = std::min(x.children.size(), y.children.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = x.children[i] <=> y.children[i]; c != 0) {
                return c;
            }
        }
        return x.children.size() <=> y.children.size();
    }
};

/// Ordered sequence of trees; the empty hedge is ε.
using Hedge = std::vector<Tree>;

inline Hedge concat(Hedge lhs, const Hedge& rhs) {
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
}

namespace detail {

inline void collect_positions(const Tree& t, Position& here, std::vector<Position>& out) {
    out.push_back(here);
    for (std::uint32_t i = 0; i < t.children.size(); ++i) {
        here = here.child(i + 1);
        collect_positions(t.children[i], here, out);
        here = here.parent();
    }
}

inline const Tree* find_node(const Tree& t, const Position& p) {
    const Tree* node = &t;
    for (std::uint32_t index : p.path()) {
        if (index == 0 || index > node->children.size()) {
            return nullptr;
        }
        node = &node->children[index - 1];
    }
    return node;
}

} // namespace detail

/// All positions of `t` in ascending lexicographic order (preorder).
inline std::vector<Position> positions(const Tree& t) {
    std::vector<Position> out;
    Position here;
    detail::collect_positions(t, here, out);
    return out;
}

inline bool has_position(const Tree& t, const Position& p) {
    return detail::find_node(t, p) != nullptr;
}

inline const Tree& subtree_at(const Tree& t, const Position& p) {
    const Tree* node = detail::find_node(t, p);
    if (node == nullptr) {
        throw Error(ErrorKind::PositionNotInTree, "position " + p.to_string() + " is not in the tree");
    }
    return *node;
}

/// Removes the subtree at `p` and splices `h` in its place. An empty hedge
/// deletes the subtree; the root may only be replaced by a single tree.
inline Tree replace_at(Tree t, const Position& p, const Hedge& h) {
    if (!has_position(t, p)) {
        throw Error(ErrorKind::PositionNotInTree, "position " + p.to_string() + " is not in the tree");
    }
    if (p.is_root()) {
        if (h.size() != 1) {
            throw Error(ErrorKind::RootReplacedByNonSingleton,
                        "the root can only be replaced by exactly one tree");
        }
        return h.front();
    }
    Tree* parent = &t;
    for (std::size_t i = 0; i + 1 < p.depth(); ++i) {
        parent = &parent->children[p[i] - 1];
    }
    auto& kids = parent->children;
    const auto at = kids.begin() + (p.last() - 1);
    const auto next = kids.erase(at);
    kids.insert(next, h.begin(), h.end());
    return t;
}

// ---------------------------------------------------------------------------
// Term syntax: tree := label | label '(' tree (',' tree)* ')' ; label '()' is a leaf.

namespace detail {

class TermParser {
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    Tree parse_all() {
        skip_ws();
        Tree t = parse_tree();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return t;
    }

private:
    Tree parse_tree() {
        skip_ws();
        Tree t(parse_label());
        skip_ws();
        if (peek() == '(') {
            ++pos_;
            skip_ws();
            if (peek() == ')') {
                ++pos_;
                return t;
            }
            while (true) {
                t.children.push_back(parse_tree());
                skip_ws();
                const char c = peek();
                if (c == ',') {
                    ++pos_;
                } else if (c == ')') {
                    ++pos_;
                    break;
                } else {
                    fail("expected ',' or ')'");
                }
            }
        }
        return t;
    }

    Label parse_label() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a label");
        }
        return Label(text_.substr(start, pos_ - start));
    }

    static bool is_label_char(char c) {
        return c != '(' && c != ')' && c != ',' && c != ' ' && c != '\t' && c != '\n' && c != '\r' &&
               c != '\f' && c != '\v';
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw SyntaxError(line, column, message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline void print_term_into(const Tree& t, std::string& out) {
    out += t.label;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            print_term_into(t.children[i], out);
        }
        out += ')';
    }
}

} // namespace detail

inline Tree parse_term(std::string_view text) {
    return detail::TermParser(text).parse_all();
}

inline std::string print_term(const Tree& t) {
    std::string out;
    detail::print_term_into(t, out);
    return out;
}

} // namespace hasa

#endif // HASA_TREE_HPP
