#ifndef HASA_SYNTAX_HPP
#define HASA_SYNTAX_HPP

#include <cctype>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hasa/error.hpp"
#include "hasa/horizontal_nfa.hpp"

namespace hasa {

/// Warnings collected by the lenient readers.
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

namespace syntax {

/// Character cursor over a whole input text; errors carry line and column.
class Cursor {
public:
    explicit Cursor(std::string_view text, bool hash_comments = true) : text_(text), hash_comments_(hash_comments) {}

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }
    std::size_t pos() const { return pos_; }
    void seek(std::size_t pos) { pos_ = pos; }
    void advance(std::size_t n = 1) { pos_ = std::min(pos_ + n, text_.size()); }
    std::string_view text() const { return text_; }

    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    bool consume(std::string_view s) {
        if (starts_with(s)) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    /// Skips blanks and `#` comments; newlines too unless `stop_at_newline`.
    void skip_space(bool stop_at_newline = false) {
        while (!at_end()) {
            const char c = peek();
            if (c == '#' && hash_comments_) {
                while (!at_end() && peek() != '\n') {
                    ++pos_;
                }
            } else if (c == '\n' && stop_at_newline) {
                return;
            } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    void expect(std::string_view s) {
        if (!consume(s)) {
            fail("expected '" + std::string(s) + "'");
        }
    }

    [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& message) const {
        const auto [line, column] = location(at);
        throw SyntaxError(line, column, message);
    }

    /// 1-based line and column of offset `at`.
    std::pair<std::size_t, std::size_t> location(std::size_t at) const {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        return {line, column};
    }

private:
    std::string_view text_;
    bool hash_comments_;
    std::size_t pos_ = 0;
};

/// Regular expression over symbol tokens.
struct Regex {
    enum class Kind { Epsilon, Symbol, Seq, Alt, Star, Plus, Opt };
    Kind kind = Kind::Epsilon;
    std::string symbol;
    std::size_t pos = 0;
    std::vector<Regex> items;

    static Regex epsilon() { return {}; }
    static Regex symbol_at(std::string s, std::size_t at) { return {Kind::Symbol, std::move(s), at, {}}; }
};

/// Token characters of a regex symbol. `,` is excluded only when it acts
/// as the sequence operator.
using TokenPredicate = std::function<bool(char)>;

inline bool is_state_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        return false;
    }
    switch (c) {
        case '(': case ')': case '|': case '*': case '+': case '?':
        case '{': case '}': case ';': case ',': case '#':
            return false;
        default:
            return true;
    }
}

/// Precedence: postfix over sequence over choice. With `comma_sequence`
/// a `,` may separate sequence items; juxtaposition always works.
class RegexParser {
public:
    RegexParser(Cursor& cur, TokenPredicate token_char, bool comma_sequence, bool stop_at_newline)
        : cur_(cur), token_char_(std::move(token_char)), comma_(comma_sequence), stop_nl_(stop_at_newline) {}

    Regex parse() { return alternation(); }

private:
    void skip() { cur_.skip_space(stop_nl_); }

    bool at_item_start() {
        skip();
        if (cur_.at_end()) {
            return false;
        }
        const char c = cur_.peek();
        if (c == '(') {
            return true;
        }
        if (c == '-' && cur_.peek(1) == '>') {
            return false;
        }
        return token_char_(c);
    }

    Regex alternation() {
        Regex first = sequence();
        skip();
        if (cur_.peek() != '|') {
            return first;
        }
        Regex alt{Regex::Kind::Alt, {}, first.pos, {}};
        alt.items.push_back(std::move(first));
        while (cur_.peek() == '|') {
            cur_.advance();
            alt.items.push_back(sequence());
            skip();
        }
        return alt;
    }

    Regex sequence() {
        skip();
        Regex seq{Regex::Kind::Seq, {}, cur_.pos(), {}};
        while (true) {
            if (!at_item_start()) {
                break;
            }
            seq.items.push_back(postfix());
            skip();
            if (comma_ && cur_.peek() == ',') {
                cur_.advance();
                if (!at_item_start()) {
                    cur_.fail("expected an item after ','");
                }
            }
        }
        if (seq.items.empty()) {
            return Regex::epsilon();
        }
        if (seq.items.size() == 1) {
            return std::move(seq.items.front());
        }
        return seq;
    }

    Regex postfix() {
        Regex base = atom();
        while (true) {
            skip();
            const char c = cur_.peek();
            Regex::Kind kind;
            if (c == '*') {
                kind = Regex::Kind::Star;
            } else if (c == '+') {
                kind = Regex::Kind::Plus;
            } else if (c == '?') {
                kind = Regex::Kind::Opt;
            } else {
                return base;
            }
            cur_.advance();
            Regex wrapped{kind, {}, base.pos, {}};
            wrapped.items.push_back(std::move(base));
            base = std::move(wrapped);
        }
    }

    Regex atom() {
        skip();
        const std::size_t at = cur_.pos();
        if (cur_.peek() == '(') {
            cur_.advance();
            Regex inner = alternation();
            skip();
            if (cur_.peek() != ')') {
                cur_.fail("expected ')'");
            }
            cur_.advance();
            return inner;
        }
        std::string token;
        while (!cur_.at_end() && token_char_(cur_.peek()) && !(cur_.peek() == '-' && cur_.peek(1) == '>')) {
            token += cur_.peek();
            cur_.advance();
        }
        if (token.empty()) {
            cur_.fail("expected a symbol or '('");
        }
        return Regex::symbol_at(std::move(token), at);
    }

    Cursor& cur_;
    TokenPredicate token_char_;
    bool comma_;
    bool stop_nl_;
};

/// Maps a regex symbol to a horizontal-alphabet state; may return
/// kEpsilon to drop the symbol.
using SymbolResolver = std::function<StateId(const Regex& symbol)>;

namespace detail {

struct Fragment {
    HorizontalNfa::Node start;
    HorizontalNfa::Node end;
};

inline Fragment thompson(HorizontalNfa& nfa, const Regex& r, const SymbolResolver& resolve) {
    const auto start = nfa.add_state();
    const auto end = nfa.add_state();
    switch (r.kind) {
        case Regex::Kind::Epsilon:
            nfa.add_transition(start, kEpsilon, end);
            break;
        case Regex::Kind::Symbol:
            nfa.add_transition(start, resolve(r), end);
            break;
        case Regex::Kind::Seq: {
            auto at = start;
            for (const Regex& item : r.items) {
                const Fragment f = thompson(nfa, item, resolve);
                nfa.add_transition(at, kEpsilon, f.start);
                at = f.end;
            }
            nfa.add_transition(at, kEpsilon, end);
            break;
        }
        case Regex::Kind::Alt:
            for (const Regex& item : r.items) {
                const Fragment f = thompson(nfa, item, resolve);
                nfa.add_transition(start, kEpsilon, f.start);
                nfa.add_transition(f.end, kEpsilon, end);
            }
            break;
        case Regex::Kind::Star:
        case Regex::Kind::Plus:
        case Regex::Kind::Opt: {
            const Fragment f = thompson(nfa, r.items.front(), resolve);
            nfa.add_transition(start, kEpsilon, f.start);
            nfa.add_transition(f.end, kEpsilon, end);
            if (r.kind != Regex::Kind::Plus) {
                nfa.add_transition(start, kEpsilon, end);
            }
            if (r.kind != Regex::Kind::Opt) {
                nfa.add_transition(f.end, kEpsilon, f.start);
            }
            break;
        }
    }
    return {start, end};
}

} // namespace detail

/// Thompson construction followed by ε-elimination.
inline HorizontalNfa to_nfa(const Regex& r, const SymbolResolver& resolve) {
    HorizontalNfa nfa;
    const detail::Fragment f = detail::thompson(nfa, r, resolve);
    nfa.add_transition(0, kEpsilon, f.start);
    nfa.set_final(f.end);
    return nfa.without_epsilon();
}

} // namespace syntax
} // namespace hasa

#endif // HASA_SYNTAX_HPP
