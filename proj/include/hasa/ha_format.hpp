#ifndef HASA_HA_FORMAT_HPP
#define HASA_HA_FORMAT_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "hasa/error.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/syntax.hpp"

namespace hasa {

// Native automaton text format:
//
//   automaton books
//   alphabet a b c
//   states q1 q2
//   final q1
//   rule a (q2* q1 | q2+) -> q1
//   rule b () -> q2
//   rule c -> q1 nfa { start s0; final s1; s0 q2 s1; s1 eps s0; }
//
// Declarations end at the end of the line; rules may span lines. An empty
// regex denotes the empty word. `#` starts a comment.

namespace detail {

inline bool is_ha_keyword(std::string_view w) {
    return w == "automaton" || w == "alphabet" || w == "states" || w == "final" || w == "rule" || w == "nfa" ||
           w == "eps" || w == "start";
}

class HaParser {
public:
    HaParser(std::string_view text, Diagnostics* diag) : cur_(text), diag_(diag) {}

    HedgeAutomaton parse() {
        bool named = false;
        while (true) {
            cur_.skip_space();
            if (cur_.at_end()) {
                break;
            }
            const std::size_t at = cur_.pos();
            const std::string word = token();
            if (word == "automaton") {
                if (named) {
                    cur_.fail_at(at, "duplicate 'automaton' header");
                }
                out_.set_name(expect_token("automaton name"));
                named = true;
                end_of_line();
            } else if (word == "alphabet") {
                for (const auto& [pos, label] : line_tokens()) {
                    if (!is_valid_label(label)) {
                        cur_.fail_at(pos, "invalid label '" + label + "'");
                    }
                    out_.add_label(label);
                }
            } else if (word == "states") {
                for (const auto& [pos, name] : line_tokens()) {
                    if (is_ha_keyword(name)) {
                        cur_.fail_at(pos, "'" + name + "' is reserved");
                    }
                    if (out_.has_state(name)) {
                        cur_.fail_at(pos, "state '" + name + "' declared twice");
                    }
                    out_.add_state(name);
                }
            } else if (word == "final") {
                for (const auto& [pos, name] : line_tokens()) {
                    out_.set_final(state_at(pos, name));
                }
            } else if (word == "rule") {
                rule();
            } else if (word.empty()) {
                cur_.fail("unexpected character '" + std::string(1, cur_.peek()) + "'");
            } else {
                cur_.fail_at(at, "unknown declaration '" + word + "'");
            }
        }
        return std::move(out_);
    }

private:
    std::string token() {
        std::string out;
        while (!cur_.at_end() && syntax::is_state_char(cur_.peek()) &&
               !(cur_.peek() == '-' && cur_.peek(1) == '>')) {
            out += cur_.peek();
            cur_.advance();
        }
        return out;
    }

    std::string expect_token(const std::string& what) {
        cur_.skip_space(true);
        std::string t = token();
        if (t.empty()) {
            cur_.fail("expected " + what);
        }
        return t;
    }

    void end_of_line() {
        cur_.skip_space(true);
        if (!cur_.at_end() && cur_.peek() != '\n') {
            cur_.fail("unexpected text at end of declaration");
        }
    }

    std::vector<std::pair<std::size_t, std::string>> line_tokens() {
        std::vector<std::pair<std::size_t, std::string>> out;
        while (true) {
            cur_.skip_space(true);
            if (cur_.at_end() || cur_.peek() == '\n') {
                return out;
            }
            const std::size_t at = cur_.pos();
            std::string t = token();
            if (t.empty()) {
                cur_.fail("unexpected character '" + std::string(1, cur_.peek()) + "'");
            }
            out.emplace_back(at, std::move(t));
        }
    }

    StateId state_at(std::size_t pos, const std::string& name) {
        if (auto id = out_.find_state(name)) {
            return *id;
        }
        cur_.fail_at(pos, "undeclared state '" + name + "'");
    }

    void rule() {
        cur_.skip_space();
        const std::size_t label_at = cur_.pos();
        const std::string label = token();
        if (label.empty()) {
            cur_.fail("expected a label after 'rule'");
        }
        if (!out_.has_label(label)) {
            cur_.fail_at(label_at, "label '" + label + "' is not in the alphabet");
        }
        syntax::RegexParser regex(cur_, syntax::is_state_char, false, false);
        const syntax::Regex body = regex.parse();
        cur_.skip_space();
        cur_.expect("->");
        cur_.skip_space();
        const std::size_t target_at = cur_.pos();
        const StateId target = state_at(target_at, token());
        cur_.skip_space();
        HorizontalNfa nfa;
        if (cur_.starts_with("nfa") && !syntax::is_state_char(cur_.peek(3))) {
            if (body.kind != syntax::Regex::Kind::Epsilon) {
                cur_.fail("a rule takes either a regex or an nfa block");
            }
            cur_.advance(3);
            nfa = nfa_block();
        } else {
            nfa = syntax::to_nfa(body, [&](const syntax::Regex& s) { return state_at(s.pos, s.symbol); });
        }
        if (out_.add_rule(label, target, nfa) && diag_ != nullptr) {
            diag_->warn("rule (" + label + ", " + out_.state_name(target) + ") declared more than once; merged by union");
        }
    }

    HorizontalNfa nfa_block() {
        cur_.skip_space();
        cur_.expect("{");
        HorizontalNfa nfa;
        std::map<std::string, HorizontalNfa::Node> nodes;
        bool have_start = false;
        auto node = [&](const std::string& name) {
            if (auto it = nodes.find(name); it != nodes.end()) {
                return it->second;
            }
            const auto id = nodes.empty() ? HorizontalNfa::Node{0} : nfa.add_state();
            nodes.emplace(name, id);
            return id;
        };
        while (true) {
            cur_.skip_space();
            if (cur_.consume("}")) {
                break;
            }
            if (cur_.at_end()) {
                cur_.fail("unterminated nfa block");
            }
            std::vector<std::pair<std::size_t, std::string>> words;
            while (true) {
                cur_.skip_space();
                if (cur_.consume(";")) {
                    break;
                }
                if (cur_.peek() == '}' || cur_.at_end()) {
                    cur_.fail("expected ';'");
                }
                const std::size_t at = cur_.pos();
                std::string t = token();
                if (t.empty()) {
                    cur_.fail("unexpected character '" + std::string(1, cur_.peek()) + "'");
                }
                words.emplace_back(at, std::move(t));
            }
            if (words.empty()) {
                continue;
            }
            if (words[0].second == "start") {
                if (words.size() != 2 || have_start) {
                    cur_.fail_at(words[0].first, "'start' takes exactly one node and appears once");
                }
                nfa.set_initial(node(words[1].second));
                have_start = true;
            } else if (words[0].second == "final") {
                for (std::size_t i = 1; i < words.size(); ++i) {
                    nfa.set_final(node(words[i].second));
                }
            } else if (words.size() == 3) {
                const auto from = node(words[0].second);
                const auto to = node(words[2].second);
                const StateId symbol =
                    words[1].second == "eps" ? kEpsilon : state_at(words[1].first, words[1].second);
                nfa.add_transition(from, symbol, to);
            } else {
                cur_.fail_at(words[0].first, "expected 'start n', 'final n...' or 'from symbol to'");
            }
        }
        if (!have_start) {
            cur_.fail("nfa block without 'start'");
        }
        return nfa;
    }

    syntax::Cursor cur_;
    Diagnostics* diag_;
    HedgeAutomaton out_;
};

} // namespace detail

/// Parses the native format. Duplicate (label, state) rules are merged and
/// reported through `diag`.
inline HedgeAutomaton parse_ha(std::string_view text, Diagnostics* diag = nullptr) {
    return detail::HaParser(text, diag).parse();
}

/// Prints every rule as an explicit nfa block, which parses back to the
/// same automaton.
inline std::string print_ha(const HedgeAutomaton& a) {
    std::ostringstream out;
    out << "automaton " << a.name() << "\n";
    out << "alphabet";
    for (const Label& l : a.alphabet()) {
        out << ' ' << l;
    }
    out << "\nstates";
    for (const auto& name : a.state_names()) {
        out << ' ' << name;
    }
    out << "\nfinal";
    for (StateId f : a.finals()) {
        out << ' ' << a.state_name(f);
    }
    out << "\n";
    for (const auto& [key, nfa] : a.rules()) {
        out << "rule " << key.first << " -> " << a.state_name(key.second) << " nfa { start s" << nfa.initial()
            << ";";
        const auto finals = nfa.finals();
        if (!finals.empty()) {
            out << " final";
            for (auto f : finals) {
                out << " s" << f;
            }
            out << ";";
        }
        for (const auto& t : nfa.transitions()) {
            out << " s" << t.from << ' ' << (t.symbol == kEpsilon ? std::string("eps") : a.state_name(t.symbol))
                << " s" << t.to << ";";
        }
        out << " }\n";
    }
    return out.str();
}

} // namespace hasa

#endif // HASA_HA_FORMAT_HPP
