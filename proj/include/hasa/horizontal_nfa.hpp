#ifndef HASA_HORIZONTAL_NFA_HPP
#define HASA_HORIZONTAL_NFA_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hasa/error.hpp"

namespace hasa {

/// Index of a vertical state in a hedge automaton's state table.
using StateId = std::uint32_t;

/// Edge symbol standing for an ε move in a horizontal automaton.
inline constexpr StateId kEpsilon = std::numeric_limits<StateId>::max();

/// Word automaton over vertical states, used for the horizontal language of
/// one hedge-automaton rule. Internal states are dense indices; a single
/// initial state and any number of finals. Edges are kept sorted and unique.
class HorizontalNfa {
public:
    using Node = std::uint32_t;

    struct Edge {
        StateId symbol;
        Node to;
        friend auto operator<=>(const Edge&, const Edge&) = default;
    };

    struct Transition {
        Node from;
        StateId symbol;
        Node to;
        friend auto operator<=>(const Transition&, const Transition&) = default;
    };

    /// One initial, non-final state: the empty language.
    HorizontalNfa() : out_(1), final_(1, false) {}

    /// Language {ε}.
    static HorizontalNfa epsilon() {
        HorizontalNfa nfa;
        nfa.set_final(0);
        return nfa;
    }

    /// Language consisting of the single word `word`.
    static HorizontalNfa word(std::span<const StateId> word) {
        HorizontalNfa nfa;
        Node at = 0;
        for (StateId symbol : word) {
            const Node next = nfa.add_state();
            nfa.add_transition(at, symbol, next);
            at = next;
        }
        nfa.set_final(at);
        return nfa;
    }

    std::size_t size() const noexcept { return out_.size(); }
    Node initial() const noexcept { return initial_; }

    Node add_state() {
        out_.emplace_back();
        final_.push_back(false);
        return static_cast<Node>(out_.size() - 1);
    }

    void set_initial(Node n) { initial_ = n; }
    void set_final(Node n, bool value = true) { final_.at(n) = value; }
    bool is_final(Node n) const { return final_.at(n); }

    std::vector<Node> finals() const {
        std::vector<Node> out;
        for (Node n = 0; n < final_.size(); ++n) {
            if (final_[n]) {
                out.push_back(n);
            }
        }
        return out;
    }

    void add_transition(Node from, StateId symbol, Node to) {
        auto& edges = out_.at(from);
        const Edge e{symbol, to};
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) {
            edges.insert(it, e);
        }
        if (symbol != kEpsilon) {
            alphabet_.insert(symbol);
        }
    }

    bool remove_transition(Node from, StateId symbol, Node to) {
        auto& edges = out_.at(from);
        const Edge e{symbol, to};
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it != edges.end() && *it == e) {
            edges.erase(it);
            return true;
        }
        return false;
    }

    const std::vector<Edge>& edges(Node from) const { return out_.at(from); }

    std::vector<Transition> transitions() const {
        std::vector<Transition> all;
        for (Node n = 0; n < out_.size(); ++n) {
            for (const Edge& e : out_[n]) {
                all.push_back({n, e.symbol, e.to});
            }
        }
        return all;
    }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& edges : out_) {
            n += edges.size();
        }
        return n;
    }

    bool has_epsilon() const {
        return std::any_of(out_.begin(), out_.end(), [](const std::vector<Edge>& edges) {
            return !edges.empty() && edges.back().symbol == kEpsilon;
        });
    }

    bool reads(StateId symbol) const {
        for (const auto& edges : out_) {
            for (const Edge& e : edges) {
                if (e.symbol == symbol) {
                    return true;
                }
            }
        }
        return false;
    }

    /// Vertical states this automaton may read. Always contains every edge symbol.
    const std::set<StateId>& alphabet() const noexcept { return alphabet_; }
    void add_to_alphabet(StateId symbol) { alphabet_.insert(symbol); }
    template <class Range>
    void add_to_alphabet(const Range& symbols) {
        alphabet_.insert(symbols.begin(), symbols.end());
    }

    /// ε-closure of a set of nodes (in place, result sorted and unique).
    void close(std::vector<Node>& nodes) const {
        std::vector<char> seen(out_.size(), 0);
        std::vector<Node> stack;
        for (Node n : nodes) {
            if (!seen[n]) {
                seen[n] = 1;
                stack.push_back(n);
            }
        }
        while (!stack.empty()) {
            const Node n = stack.back();
            stack.pop_back();
            for (auto it = out_[n].rbegin(); it != out_[n].rend() && it->symbol == kEpsilon; ++it) {
                if (!seen[it->to]) {
                    seen[it->to] = 1;
                    stack.push_back(it->to);
                }
            }
        }
        nodes.clear();
        for (Node n = 0; n < seen.size(); ++n) {
            if (seen[n]) {
                nodes.push_back(n);
            }
        }
    }

    /// Standard NFA acceptance with ε-closure. Throws if `word` uses a
    /// symbol outside the alphabet.
    bool accepts(std::span<const StateId> word) const {
        for (StateId s : word) {
            if (!alphabet_.contains(s)) {
                throw Error(ErrorKind::SymbolNotInAlphabet,
                            "symbol " + std::to_string(s) + " is not in the horizontal alphabet");
            }
        }
        std::vector<Node> current{initial_};
        close(current);
        for (StateId s : word) {
            std::vector<Node> next;
            for (Node n : current) {
                for (const Edge& e : out_[n]) {
                    if (e.symbol == s) {
                        next.push_back(e.to);
                    }
                }
            }
            close(next);
            current.swap(next);
            if (current.empty()) {
                return false;
            }
        }
        return std::any_of(current.begin(), current.end(), [&](Node n) { return final_[n]; });
    }

    /// Equivalent automaton without ε edges. Each node inherits the
    /// non-ε edges and finality of its closure; the result is then trimmed.
    HorizontalNfa without_epsilon() const {
        if (!has_epsilon()) {
            return trimmed();
        }
        HorizontalNfa out;
        out.out_.assign(out_.size(), {});
        out.final_.assign(out_.size(), false);
        out.initial_ = initial_;
        out.alphabet_ = alphabet_;
        for (Node n = 0; n < out_.size(); ++n) {
            std::vector<Node> closure{n};
            close(closure);
            for (Node c : closure) {
                if (final_[c]) {
                    out.final_[n] = true;
                }
                for (const Edge& e : out_[c]) {
                    if (e.symbol != kEpsilon) {
                        out.add_transition(n, e.symbol, e.to);
                    }
                }
            }
        }
        return out.trimmed();
    }

    /// Keeps only nodes both reachable from the initial node and co-reachable
    /// to a final node; the initial node becomes node 0. An automaton with
    /// empty language collapses to the single-node empty automaton.
    HorizontalNfa trimmed() const {
        const std::size_t n = out_.size();
        std::vector<char> fwd(n, 0);
        std::vector<Node> stack{initial_};
        fwd[initial_] = 1;
        while (!stack.empty()) {
            const Node x = stack.back();
            stack.pop_back();
            for (const Edge& e : out_[x]) {
                if (!fwd[e.to]) {
                    fwd[e.to] = 1;
                    stack.push_back(e.to);
                }
            }
        }
        std::vector<std::vector<Node>> rev(n);
        for (Node x = 0; x < n; ++x) {
            for (const Edge& e : out_[x]) {
                rev[e.to].push_back(x);
            }
        }
        std::vector<char> bwd(n, 0);
        for (Node x = 0; x < n; ++x) {
            if (final_[x]) {
                bwd[x] = 1;
                stack.push_back(x);
            }
        }
        while (!stack.empty()) {
            const Node x = stack.back();
            stack.pop_back();
            for (Node y : rev[x]) {
                if (!bwd[y]) {
                    bwd[y] = 1;
                    stack.push_back(y);
                }
            }
        }
        HorizontalNfa out;
        out.alphabet_ = alphabet_;
        if (!(fwd[initial_] && bwd[initial_])) {
            return out;
        }
        constexpr Node kDropped = std::numeric_limits<Node>::max();
        std::vector<Node> remap(n, kDropped);
        remap[initial_] = 0;
        out.final_[0] = final_[initial_];
        for (Node x = 0; x < n; ++x) {
            if (x != initial_ && fwd[x] && bwd[x]) {
                remap[x] = out.add_state();
                out.final_[remap[x]] = final_[x];
            }
        }
        for (Node x = 0; x < n; ++x) {
            if (remap[x] == kDropped) {
                continue;
            }
            for (const Edge& e : out_[x]) {
                if (remap[e.to] != kDropped) {
                    out.out_[remap[x]].push_back({e.symbol, remap[e.to]});
                }
            }
            std::sort(out.out_[remap[x]].begin(), out.out_[remap[x]].end());
        }
        return out;
    }

    bool is_empty_language() const {
        std::vector<char> seen(out_.size(), 0);
        std::vector<Node> stack{initial_};
        seen[initial_] = 1;
        while (!stack.empty()) {
            const Node x = stack.back();
            stack.pop_back();
            if (final_[x]) {
                return false;
            }
            for (const Edge& e : out_[x]) {
                if (!seen[e.to]) {
                    seen[e.to] = 1;
                    stack.push_back(e.to);
                }
            }
        }
        return true;
    }

    /// Copy with every non-ε symbol passed through `f`. Symbols mapped to
    /// kEpsilon become ε edges.
    HorizontalNfa map_symbols(const std::function<StateId(StateId)>& f) const {
        HorizontalNfa out;
        out.out_.assign(out_.size(), {});
        out.final_ = final_;
        out.initial_ = initial_;
        for (StateId s : alphabet_) {
            const StateId m = f(s);
            if (m != kEpsilon) {
                out.alphabet_.insert(m);
            }
        }
        for (Node x = 0; x < out_.size(); ++x) {
            for (const Edge& e : out_[x]) {
                out.add_transition(x, e.symbol == kEpsilon ? kEpsilon : f(e.symbol), e.to);
            }
        }
        return out;
    }

    /// Appends a disjoint copy of `other`; returns the node offset of the copy.
    Node append_copy(const HorizontalNfa& other) {
        const Node offset = static_cast<Node>(out_.size());
        for (Node x = 0; x < other.out_.size(); ++x) {
            add_state();
            final_[offset + x] = other.final_[x];
        }
        for (Node x = 0; x < other.out_.size(); ++x) {
            for (const Edge& e : other.out_[x]) {
                add_transition(offset + x, e.symbol, offset + e.to);
            }
        }
        alphabet_.insert(other.alphabet_.begin(), other.alphabet_.end());
        return offset;
    }

    friend bool operator==(const HorizontalNfa&, const HorizontalNfa&) = default;

private:
    std::vector<std::vector<Edge>> out_;
    std::vector<bool> final_;
    Node initial_ = 0;
    std::set<StateId> alphabet_;
};

inline bool nfa_accepts(const HorizontalNfa& nfa, std::span<const StateId> word) {
    return nfa.accepts(word);
}

inline HorizontalNfa epsilon_eliminate(const HorizontalNfa& nfa) {
    return nfa.without_epsilon();
}

/// L(lhs) ∪ L(rhs): a fresh initial node with ε edges into both copies,
/// then ε-eliminated.
inline HorizontalNfa nfa_union(const HorizontalNfa& lhs, const HorizontalNfa& rhs) {
    HorizontalNfa out;
    const auto a = out.append_copy(lhs);
    const auto b = out.append_copy(rhs);
    out.add_transition(0, kEpsilon, a + lhs.initial());
    out.add_transition(0, kEpsilon, b + rhs.initial());
    return out.without_epsilon();
}

/// {symbol} · L(nfa): a fresh initial node reading `symbol` into the old initial.
inline HorizontalNfa nfa_prepend(const HorizontalNfa& nfa, StateId symbol) {
    HorizontalNfa out = nfa;
    const auto fresh = out.add_state();
    out.add_transition(fresh, symbol, nfa.initial());
    out.set_initial(fresh);
    return out.trimmed();
}

/// L(nfa) · {symbol}: a fresh unique final reached by `symbol` from every old final.
inline HorizontalNfa nfa_append(const HorizontalNfa& nfa, StateId symbol) {
    HorizontalNfa out = nfa;
    const auto fresh = out.add_state();
    for (auto f : nfa.finals()) {
        out.add_transition(f, symbol, fresh);
        out.set_final(f, false);
    }
    out.set_final(fresh);
    return out.trimmed();
}

/// { u·symbol·v : uv ∈ L(nfa) } via two copies of an ε-free automaton:
/// copy 0 before the insertion, copy 1 after, bridged by `symbol` at every
/// node of copy 0.
inline HorizontalNfa nfa_insert_anywhere(const HorizontalNfa& nfa, StateId symbol) {
    const HorizontalNfa src = nfa.without_epsilon();
    HorizontalNfa out;
    const auto before = out.append_copy(src);
    const auto after = out.append_copy(src);
    for (HorizontalNfa::Node x = 0; x < src.size(); ++x) {
        out.set_final(before + x, false);
        out.add_transition(before + x, symbol, after + x);
    }
    out.set_initial(before + src.initial());
    return out.trimmed();
}

} // namespace hasa

#endif // HASA_HORIZONTAL_NFA_HPP
