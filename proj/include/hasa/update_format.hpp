#ifndef HASA_UPDATE_FORMAT_HPP
#define HASA_UPDATE_FORMAT_HPP

#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "hasa/error.hpp"
#include "hasa/rewrite.hpp"
#include "hasa/syntax.hpp"

namespace hasa {

// One rule per line:
//   ren a -> b | del a | rpl a <- p | ins_first a <- p | ins_last a <- p
//   ins_into a <- p | ins_before a <- p | ins_after a <- p
// `#` starts a comment.

namespace detail {

inline std::optional<UpdateKind> update_kind(std::string_view word) {
    static constexpr std::pair<std::string_view, UpdateKind> table[] = {
        {"ren", UpdateKind::Ren},          {"rpl", UpdateKind::Rpl},
        {"del", UpdateKind::Del},          {"ins_first", UpdateKind::InsFirst},
        {"ins_last", UpdateKind::InsLast}, {"ins_into", UpdateKind::InsInto},
        {"ins_before", UpdateKind::InsBefore}, {"ins_after", UpdateKind::InsAfter},
    };
    for (const auto& [name, kind] : table) {
        if (name == word) {
            return kind;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Parses a script and resolves its type states against `types`.
inline UpdateScript parse_updates(std::string_view text, const HedgeAutomaton& types) {
    UpdateScript script;
    script.types = types;
    syntax::Cursor cur(text);
    auto word = [&]() {
        cur.skip_space(true);
        std::string out;
        while (!cur.at_end() && syntax::is_state_char(cur.peek()) && !(cur.peek() == '-' && cur.peek(1) == '>') &&
               !(cur.peek() == '<' && cur.peek(1) == '-')) {
            out += cur.peek();
            cur.advance();
        }
        return out;
    };
    while (true) {
        cur.skip_space();
        if (cur.at_end()) {
            break;
        }
        const std::size_t at = cur.pos();
        const std::string head = word();
        const auto kind = detail::update_kind(head);
        if (!kind) {
            cur.fail_at(at, "unknown update primitive '" + head + "'");
        }
        UpdateRule rule;
        rule.kind = *kind;
        cur.skip_space(true);
        const std::size_t target_at = cur.pos();
        rule.target = word();
        if (!is_valid_label(rule.target)) {
            cur.fail_at(target_at, "expected a target label");
        }
        cur.skip_space(true);
        if (*kind == UpdateKind::Ren) {
            if (!cur.consume("->")) {
                cur.fail("ren expects '-> label'");
            }
            cur.skip_space(true);
            const std::size_t b_at = cur.pos();
            rule.new_label = word();
            if (!is_valid_label(*rule.new_label)) {
                cur.fail_at(b_at, "expected a label after '->'");
            }
        } else if (*kind != UpdateKind::Del) {
            if (!cur.consume("<-")) {
                cur.fail(std::string(keyword(*kind)) + " expects '<- type-state'");
            }
            cur.skip_space(true);
            const std::size_t p_at = cur.pos();
            std::string p = word();
            if (p.empty()) {
                cur.fail("expected a type state after '<-'");
            }
            if (!types.has_state(p)) {
                const auto [line, column] = cur.location(p_at);
                throw Error(ErrorKind::UnknownTypeState, std::to_string(line) + ":" + std::to_string(column) +
                                                             ": type state '" + p + "' is not a state of " +
                                                             types.name());
            }
            rule.type_state = std::move(p);
        }
        cur.skip_space(true);
        if (!cur.at_end() && cur.peek() != '\n') {
            cur.fail(std::string(keyword(*kind)) + " takes no further operand");
        }
        script.rules.push_back(std::move(rule));
    }
    return script;
}

inline std::string print_updates(const UpdateScript& s) {
    std::ostringstream out;
    for (const UpdateRule& r : s.rules) {
        out << r.to_string() << "\n";
    }
    return out.str();
}

} // namespace hasa

#endif // HASA_UPDATE_FORMAT_HPP
