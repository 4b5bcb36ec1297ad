#ifndef HASA_ALGEBRA_HPP
#define HASA_ALGEBRA_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hasa/error.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/horizontal_nfa.hpp"
#include "hasa/tree.hpp"

namespace hasa {

/// Limits for constructions that may blow up exponentially.
struct AlgebraOptions {
    /// Maximum number of subset states (and of horizontal DFA states per label).
    std::size_t state_budget = std::size_t{1} << 16;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline void check_deadline(const AlgebraOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
        throw Error(ErrorKind::DeadlineExceeded, "deadline exceeded");
    }
}

inline std::string unique_name(const HedgeAutomaton& a, std::string base) {
    if (!a.has_state(base)) {
        return base;
    }
    for (std::size_t k = 1;; ++k) {
        std::string candidate = base + "_" + std::to_string(k);
        if (!a.has_state(candidate)) {
            return candidate;
        }
    }
}

struct VectorHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Productivity

/// States q for which some tree evaluates to q.
inline std::vector<char> productive_states(const HedgeAutomaton& a) {
    std::vector<char> productive(a.state_count(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [key, nfa] : a.rules()) {
            if (productive[key.second]) {
                continue;
            }
            std::vector<char> seen(nfa.size(), 0);
            std::vector<HorizontalNfa::Node> stack{nfa.initial()};
            seen[nfa.initial()] = 1;
            bool hit = false;
            while (!stack.empty() && !hit) {
                const auto s = stack.back();
                stack.pop_back();
                if (nfa.is_final(s)) {
                    hit = true;
                    break;
                }
                for (const auto& e : nfa.edges(s)) {
                    if (productive[e.symbol] && !seen[e.to]) {
                        seen[e.to] = 1;
                        stack.push_back(e.to);
                    }
                }
            }
            if (hit) {
                productive[key.second] = 1;
                changed = true;
            }
        }
    }
    return productive;
}

/// Drops edges on unproductive symbols and rules that can never contribute
/// to an accepted tree. The state table is left untouched.
inline HedgeAutomaton reduce(const HedgeAutomaton& a) {
    const auto productive = productive_states(a);
    HedgeAutomaton out = a;
    out.transform_rules([&](const HedgeAutomaton::RuleKey&, HorizontalNfa& nfa) {
        for (const auto& t : nfa.transitions()) {
            if (!productive[t.symbol]) {
                nfa.remove_transition(t.from, t.symbol, t.to);
            }
        }
    });
    // Top-down usefulness: states reachable from a productive final.
    std::vector<char> useful(out.state_count(), 0);
    std::vector<StateId> stack;
    for (StateId f : out.finals()) {
        if (productive[f]) {
            useful[f] = 1;
            stack.push_back(f);
        }
    }
    std::map<StateId, std::vector<const HorizontalNfa*>> by_target;
    for (const auto& [key, nfa] : out.rules()) {
        by_target[key.second].push_back(&nfa);
    }
    while (!stack.empty()) {
        const StateId q = stack.back();
        stack.pop_back();
        for (const HorizontalNfa* nfa : by_target[q]) {
            for (StateId s : nfa->alphabet()) {
                if (!useful[s] && nfa->reads(s)) {
                    useful[s] = 1;
                    stack.push_back(s);
                }
            }
        }
    }
    std::vector<HedgeAutomaton::RuleKey> dead;
    for (const auto& [key, nfa] : out.rules()) {
        if (!useful[key.second]) {
            dead.push_back(key);
        }
    }
    for (const auto& key : dead) {
        out.erase_rule(key.first, key.second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Union

/// L(a) ∪ L(b) by disjoint renaming ("l." / "r." prefixes) and rule union.
inline HedgeAutomaton automaton_union(const HedgeAutomaton& a, const HedgeAutomaton& b) {
    HedgeAutomaton out(a.name() + "|" + b.name());
    const auto left = import_automaton(out, a, [](const std::string& n) { return "l." + n; });
    const auto right = import_automaton(out, b, [](const std::string& n) { return "r." + n; });
    for (StateId f : a.finals()) {
        out.set_final(left[f]);
    }
    for (StateId f : b.finals()) {
        out.set_final(right[f]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Determinization

/// Bottom-up deterministic, complete automaton. State i of `automaton`
/// stands for the subset `subsets[i]` of the source states.
struct DeterministicAutomaton {
    HedgeAutomaton automaton;
    std::vector<std::vector<StateId>> subsets;
};

/// Subset construction over the labels `sigma` (which must contain the
/// source alphabet). Only reachable subsets are built, the empty subset
/// included, so every tree over `sigma` evaluates to exactly one state.
inline DeterministicAutomaton determinize(const HedgeAutomaton& a, const std::set<Label>& sigma,
                                          const AlgebraOptions& opts = {}) {
    for (const Label& l : a.alphabet()) {
        if (!sigma.contains(l)) {
            throw Error(ErrorKind::UnknownLabel, "label '" + l + "' is outside the complement alphabet");
        }
    }
    using NodeSet = std::vector<std::uint32_t>;

    struct LabelDfa {
        Label label;
        std::vector<StateId> targets;            // rule target per component
        std::vector<const HorizontalNfa*> nfas;  // component automata
        std::vector<std::uint32_t> offsets;      // node offset per component
        std::vector<NodeSet> states;
        std::unordered_map<NodeSet, std::uint32_t, detail::VectorHash> index;
        std::vector<std::uint32_t> output;              // subset index per DFA state
        std::vector<std::vector<std::uint32_t>> delta;  // [dfa state][subset index]
    };

    std::vector<std::vector<StateId>> subsets;
    std::map<std::vector<StateId>, std::uint32_t> subset_index;
    auto intern_subset = [&](std::vector<StateId> s) {
        auto [it, inserted] = subset_index.emplace(s, static_cast<std::uint32_t>(subsets.size()));
        if (inserted) {
            if (subsets.size() >= opts.state_budget) {
                throw Error(ErrorKind::StateBudgetExceeded,
                            "determinization exceeded the state budget of " + std::to_string(opts.state_budget));
            }
            subsets.push_back(std::move(s));
        }
        return it->second;
    };

    std::vector<LabelDfa> dfas;
    for (const Label& l : sigma) {
        LabelDfa d;
        d.label = l;
        std::uint32_t offset = 0;
        for (const auto& [key, nfa] : a.rules_for(l)) {
            d.targets.push_back(key.second);
            d.nfas.push_back(&nfa);
            d.offsets.push_back(offset);
            offset += static_cast<std::uint32_t>(nfa.size());
        }
        dfas.push_back(std::move(d));
    }

    auto output_of = [&](const LabelDfa& d, const NodeSet& nodes) {
        std::vector<StateId> out;
        for (std::size_t r = 0; r < d.nfas.size(); ++r) {
            const auto lo = d.offsets[r];
            const auto hi = lo + static_cast<std::uint32_t>(d.nfas[r]->size());
            for (auto it = std::lower_bound(nodes.begin(), nodes.end(), lo); it != nodes.end() && *it < hi; ++it) {
                if (d.nfas[r]->is_final(*it - lo)) {
                    out.push_back(d.targets[r]);
                    break;
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto intern_dfa_state = [&](LabelDfa& d, NodeSet nodes) {
        auto [it, inserted] = d.index.emplace(nodes, static_cast<std::uint32_t>(d.states.size()));
        if (inserted) {
            if (d.states.size() >= opts.state_budget) {
                throw Error(ErrorKind::StateBudgetExceeded,
                            "horizontal determinization exceeded the state budget for label '" + d.label + "'");
            }
            d.output.push_back(intern_subset(output_of(d, nodes)));
            d.states.push_back(std::move(nodes));
            d.delta.emplace_back();
        }
        return it->second;
    };

    for (LabelDfa& d : dfas) {
        NodeSet init;
        for (std::size_t r = 0; r < d.nfas.size(); ++r) {
            init.push_back(d.offsets[r] + d.nfas[r]->initial());
        }
        intern_dfa_state(d, std::move(init));
    }

    bool changed = true;
    std::vector<char> mask(a.state_count(), 0);
    while (changed) {
        changed = false;
        for (LabelDfa& d : dfas) {
            for (std::uint32_t i = 0; i < d.states.size(); ++i) {
                while (d.delta[i].size() < subsets.size()) {
                    detail::check_deadline(opts);
                    const std::uint32_t j = static_cast<std::uint32_t>(d.delta[i].size());
                    for (StateId q : subsets[j]) {
                        mask[q] = 1;
                    }
                    NodeSet next;
                    for (std::size_t r = 0; r < d.nfas.size(); ++r) {
                        const auto lo = d.offsets[r];
                        const auto hi = lo + static_cast<std::uint32_t>(d.nfas[r]->size());
                        const auto& from = d.states[i];
                        for (auto it = std::lower_bound(from.begin(), from.end(), lo); it != from.end() && *it < hi;
                             ++it) {
                            for (const auto& e : d.nfas[r]->edges(*it - lo)) {
                                if (mask[e.symbol]) {
                                    next.push_back(lo + e.to);
                                }
                            }
                        }
                    }
                    for (StateId q : subsets[j]) {
                        mask[q] = 0;
                    }
                    std::sort(next.begin(), next.end());
                    next.erase(std::unique(next.begin(), next.end()), next.end());
                    const auto before = d.states.size();
                    const auto target = intern_dfa_state(d, std::move(next));
                    d.delta[i].push_back(target);
                    if (d.states.size() != before) {
                        changed = true;
                    }
                }
            }
        }
        for (const LabelDfa& d : dfas) {
            for (const auto& row : d.delta) {
                if (row.size() < subsets.size()) {
                    changed = true;
                }
            }
        }
    }

    DeterministicAutomaton out;
    out.subsets = subsets;
    out.automaton.set_name("det(" + a.name() + ")");
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        out.automaton.add_state("S" + std::to_string(i));
    }
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        if (std::any_of(subsets[i].begin(), subsets[i].end(), [&](StateId q) { return a.is_final(q); })) {
            out.automaton.set_final(static_cast<StateId>(i));
        }
    }
    for (const LabelDfa& d : dfas) {
        out.automaton.add_label(d.label);
        HorizontalNfa shape;
        for (std::size_t i = 1; i < d.states.size(); ++i) {
            shape.add_state();
        }
        for (std::uint32_t i = 0; i < d.states.size(); ++i) {
            for (std::uint32_t j = 0; j < d.delta[i].size(); ++j) {
                shape.add_transition(i, j, d.delta[i][j]);
            }
        }
        std::set<std::uint32_t> outputs(d.output.begin(), d.output.end());
        for (auto x : outputs) {
            HorizontalNfa nfa = shape;
            for (std::uint32_t i = 0; i < d.states.size(); ++i) {
                nfa.set_final(i, d.output[i] == x);
            }
            out.automaton.set_rule(d.label, x, nfa);
        }
    }
    return out;
}

/// T(sigma) \ L(a): determinize-complete, then flip the final states.
inline HedgeAutomaton complement(const HedgeAutomaton& a, const std::set<Label>& sigma,
                                 const AlgebraOptions& opts = {}) {
    DeterministicAutomaton det = determinize(a, sigma, opts);
    HedgeAutomaton out = std::move(det.automaton);
    out.set_name("not(" + a.name() + ")");
    for (StateId q = 0; q < out.state_count(); ++q) {
        out.set_final(q, !out.is_final(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Intersection

namespace detail {

inline std::uint64_t pair_key(std::uint32_t x, std::uint32_t y) {
    return (static_cast<std::uint64_t>(x) << 32) | y;
}

/// Product of two ε-free horizontal automata restricted to symbol pairs in
/// `pairs` (indexed by the left symbol). With `build`, the product automaton
/// is materialized, each edge reading the pair id; otherwise only
/// non-emptiness is decided.
inline std::optional<HorizontalNfa> product_nfa(
    const HorizontalNfa& x, const HorizontalNfa& y,
    const std::unordered_map<StateId, std::vector<std::pair<StateId, StateId>>>& pairs, bool build) {
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> nodes;
    HorizontalNfa out;
    bool nonempty = false;
    auto visit = [&](std::uint32_t s, std::uint32_t t) {
        auto [it, inserted] = index.emplace(pair_key(s, t), static_cast<std::uint32_t>(nodes.size()));
        if (inserted) {
            nodes.emplace_back(s, t);
            if (nodes.size() > 1 && build) {
                out.add_state();
            }
            if (x.is_final(s) && y.is_final(t)) {
                nonempty = true;
                if (build) {
                    out.set_final(it->second);
                }
            }
        }
        return it->second;
    };
    visit(x.initial(), y.initial());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nonempty && !build) {
            return out;
        }
        const auto [s, t] = nodes[i];
        const auto& right = y.edges(t);
        for (const auto& e1 : x.edges(s)) {
            auto found = pairs.find(e1.symbol);
            if (found == pairs.end()) {
                continue;
            }
            for (const auto& [sym2, pair_id] : found->second) {
                auto it = std::lower_bound(right.begin(), right.end(), HorizontalNfa::Edge{sym2, 0});
                for (; it != right.end() && it->symbol == sym2; ++it) {
                    const auto target = visit(e1.to, it->to);
                    if (build) {
                        out.add_transition(static_cast<HorizontalNfa::Node>(i), pair_id, target);
                    }
                }
            }
        }
    }
    if (!nonempty) {
        return std::nullopt;
    }
    return out;
}

} // namespace detail

/// L(a) ∩ L(b) by the product construction. Only productive state pairs
/// are created; each pair (p, q) is named "p&q".
inline HedgeAutomaton intersect(const HedgeAutomaton& a, const HedgeAutomaton& b, const AlgebraOptions& opts = {}) {
    struct Candidate {
        Label label;
        StateId left;
        StateId right;
        const HorizontalNfa* x;
        const HorizontalNfa* y;
    };
    std::vector<Candidate> candidates;
    for (const Label& l : a.alphabet()) {
        if (!b.has_label(l)) {
            continue;
        }
        for (const auto& [ka, x] : a.rules_for(l)) {
            for (const auto& [kb, y] : b.rules_for(l)) {
                candidates.push_back({l, ka.second, kb.second, &x, &y});
            }
        }
    }

    std::unordered_map<std::uint64_t, StateId> pair_id;
    std::vector<std::pair<StateId, StateId>> pair_list;
    std::unordered_map<StateId, std::vector<std::pair<StateId, StateId>>> by_left;
    std::vector<char> done(candidates.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const Candidate& cand = candidates[c];
            if (done[c]) {
                continue;
            }
            if (pair_id.contains(detail::pair_key(cand.left, cand.right))) {
                done[c] = 1;
                continue;
            }
            detail::check_deadline(opts);
            if (detail::product_nfa(*cand.x, *cand.y, by_left, false)) {
                done[c] = 1;
                const auto id = static_cast<StateId>(pair_list.size());
                pair_id.emplace(detail::pair_key(cand.left, cand.right), id);
                pair_list.emplace_back(cand.left, cand.right);
                by_left[cand.left].emplace_back(cand.right, id);
                changed = true;
            }
        }
    }

    HedgeAutomaton out("(" + a.name() + "&" + b.name() + ")");
    for (const auto& [l, r] : pair_list) {
        out.add_state(detail::unique_name(out, a.state_name(l) + "&" + b.state_name(r)));
    }
    for (StateId id = 0; id < pair_list.size(); ++id) {
        if (a.is_final(pair_list[id].first) && b.is_final(pair_list[id].second)) {
            out.set_final(id);
        }
    }
    for (const Label& l : a.alphabet()) {
        if (b.has_label(l)) {
            out.add_label(l);
        }
    }
    for (const Candidate& cand : candidates) {
        auto it = pair_id.find(detail::pair_key(cand.left, cand.right));
        if (it == pair_id.end()) {
            continue;
        }
        detail::check_deadline(opts);
        auto nfa = detail::product_nfa(*cand.x, *cand.y, by_left, true);
        if (nfa) {
            out.set_rule(cand.label, it->second, *nfa);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Emptiness with a minimal witness

namespace detail {

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

/// Shortest path cost through an ε-free automaton where reading symbol s
/// costs cost[s].
inline std::size_t min_word_cost(const HorizontalNfa& nfa, const std::vector<std::size_t>& cost) {
    std::vector<std::size_t> dist(nfa.size(), kInfinite);
    using Item = std::pair<std::size_t, HorizontalNfa::Node>;
    std::vector<Item> heap{{0, nfa.initial()}};
    dist[nfa.initial()] = 0;
    auto cmp = [](const Item& x, const Item& y) { return x.first > y.first; };
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const auto [d, s] = heap.back();
        heap.pop_back();
        if (d != dist[s]) {
            continue;
        }
        if (nfa.is_final(s)) {
            return d;
        }
        for (const auto& e : nfa.edges(s)) {
            if (cost[e.symbol] == kInfinite) {
                continue;
            }
            const auto nd = d + cost[e.symbol];
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                heap.emplace_back(nd, e.to);
                std::push_heap(heap.begin(), heap.end(), cmp);
            }
        }
    }
    return kInfinite;
}

/// Minimal trees per state: fewest nodes, then lexicographically least
/// preorder label sequence.
class WitnessBuilder {
public:
    explicit WitnessBuilder(const HedgeAutomaton& a) : a_(a), size_(a.state_count(), kInfinite) {
        std::uint32_t rank = 0;
        for (const Label& l : a.alphabet()) {
            rank_.emplace(l, rank++);
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [key, nfa] : a.rules()) {
                const auto c = min_word_cost(nfa, size_);
                if (c != kInfinite && c + 1 < size_[key.second]) {
                    size_[key.second] = c + 1;
                    changed = true;
                }
            }
        }
        memo_.resize(a.state_count());
    }

    std::size_t min_size(StateId q) const { return size_[q]; }

    /// Preorder label ranks of the canonical minimal tree for q.
    const std::vector<std::uint32_t>& sequence(StateId q) {
        build(q);
        return memo_[q]->sequence;
    }

    const Tree& tree(StateId q) {
        build(q);
        return memo_[q]->tree;
    }

private:
    struct Entry {
        Tree tree;
        std::vector<std::uint32_t> sequence;
    };

    void build(StateId q) {
        if (memo_[q]) {
            return;
        }
        const std::size_t n = size_[q];
        std::optional<Entry> best;
        for (const auto& [key, nfa] : a_.rules()) {
            if (key.second != q) {
                continue;
            }
            auto children = best_children(nfa, n - 1);
            if (!children) {
                continue;
            }
            Entry candidate;
            candidate.sequence.push_back(rank_.at(key.first));
            candidate.tree.label = key.first;
            for (StateId s : *children) {
                const auto& seq = sequence(s);
                candidate.sequence.insert(candidate.sequence.end(), seq.begin(), seq.end());
                candidate.tree.children.push_back(tree(s));
            }
            if (!best || candidate.sequence < best->sequence) {
                best = std::move(candidate);
            }
        }
        memo_[q] = std::move(best);
    }

    /// Children state word of total size exactly `length` with the least
    /// concatenated preorder sequence.
    std::optional<std::vector<StateId>> best_children(const HorizontalNfa& nfa, std::size_t length) {
        struct Cell {
            std::vector<std::uint32_t> sequence;
            HorizontalNfa::Node prev_node;
            std::size_t prev_len;
            StateId symbol;
        };
        std::vector<std::vector<std::optional<Cell>>> cells(length + 1,
                                                            std::vector<std::optional<Cell>>(nfa.size()));
        cells[0][nfa.initial()] = Cell{{}, 0, 0, 0};
        for (std::size_t len = 0; len <= length; ++len) {
            for (HorizontalNfa::Node s = 0; s < nfa.size(); ++s) {
                if (!cells[len][s]) {
                    continue;
                }
                for (const auto& e : nfa.edges(s)) {
                    const auto c = size_[e.symbol];
                    if (c == kInfinite || len + c > length) {
                        continue;
                    }
                    std::vector<std::uint32_t> seq = cells[len][s]->sequence;
                    const auto& sub = sequence(e.symbol);
                    seq.insert(seq.end(), sub.begin(), sub.end());
                    auto& slot = cells[len + c][e.to];
                    if (!slot || seq < slot->sequence) {
                        slot = Cell{std::move(seq), s, len, e.symbol};
                    }
                }
            }
        }
        std::optional<HorizontalNfa::Node> end;
        for (HorizontalNfa::Node s = 0; s < nfa.size(); ++s) {
            if (nfa.is_final(s) && cells[length][s] &&
                (!end || cells[length][s]->sequence < cells[length][*end]->sequence)) {
                end = s;
            }
        }
        if (!end) {
            return std::nullopt;
        }
        std::vector<StateId> word;
        HorizontalNfa::Node at = *end;
        std::size_t len = length;
        while (len > 0) {
            const Cell& cell = *cells[len][at];
            word.push_back(cell.symbol);
            at = cell.prev_node;
            len = cell.prev_len;
        }
        std::reverse(word.begin(), word.end());
        return word;
    }

    const HedgeAutomaton& a_;
    std::vector<std::size_t> size_;
    std::map<Label, std::uint32_t> rank_;
    std::vector<std::optional<Entry>> memo_;
};

} // namespace detail

/// Nothing iff L(a) is empty; otherwise a witness with the fewest nodes,
/// ties broken by the lexicographically least preorder label sequence.
inline std::optional<Tree> is_empty(const HedgeAutomaton& a) {
    detail::WitnessBuilder builder(a);
    std::optional<StateId> best;
    for (StateId f : a.finals()) {
        if (builder.min_size(f) == detail::kInfinite) {
            continue;
        }
        if (!best || builder.min_size(f) < builder.min_size(*best) ||
            (builder.min_size(f) == builder.min_size(*best) && builder.sequence(f) < builder.sequence(*best))) {
            best = f;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return builder.tree(*best);
}

inline bool is_empty_language(const HedgeAutomaton& a) {
    const auto productive = productive_states(a);
    return std::none_of(a.finals().begin(), a.finals().end(), [&](StateId f) { return productive[f]; });
}

// ---------------------------------------------------------------------------
// Inclusion

struct InclusionVerdict {
    bool holds = true;
    std::optional<Tree> counterexample;
};

/// L(a) ⊆ L(b), decided as emptiness of L(a) ∩ (T(Σa ∪ Σb) \ L(b)).
inline InclusionVerdict included(const HedgeAutomaton& a, const HedgeAutomaton& b, const AlgebraOptions& opts = {}) {
    std::set<Label> sigma = a.alphabet();
    sigma.insert(b.alphabet().begin(), b.alphabet().end());
    const HedgeAutomaton lhs = reduce(a);
    const HedgeAutomaton not_b = complement(b, sigma, opts);
    const HedgeAutomaton both = intersect(lhs, not_b, opts);
    InclusionVerdict verdict;
    verdict.counterexample = is_empty(both);
    verdict.holds = !verdict.counterexample.has_value();
    return verdict;
}

// ---------------------------------------------------------------------------
// Bounded enumeration

/// Enumerates, per state, every tree with at most `max_nodes` nodes that
/// evaluates to that state.
class Enumerator {
public:
    Enumerator(const HedgeAutomaton& a, std::size_t max_nodes)
        : a_(a), max_(max_nodes), by_size_(a.state_count(), std::vector<std::set<Tree>>(max_nodes + 1)) {
        std::size_t index = 0;
        for (const auto& [key, nfa] : a.rules()) {
            rule_index_.emplace(key, index++);
        }
        memo_.resize(index);
        for (std::size_t n = 1; n <= max_; ++n) {
            for (const auto& [key, nfa] : a.rules()) {
                for (const Hedge& h : hedges(rule_index_.at(key), nfa, nfa.initial(), n - 1)) {
                    by_size_[key.second][n].insert(Tree(key.first, h));
                }
            }
        }
    }

    std::set<Tree> trees_of(StateId q) const {
        std::set<Tree> out;
        for (const auto& layer : by_size_.at(q)) {
            out.insert(layer.begin(), layer.end());
        }
        return out;
    }

    std::set<Tree> accepted() const {
        std::set<Tree> out;
        for (StateId f : a_.finals()) {
            for (const auto& layer : by_size_[f]) {
                out.insert(layer.begin(), layer.end());
            }
        }
        return out;
    }

private:
    /// Hedges of total size `budget` read from `node` to a final node.
    const std::vector<Hedge>& hedges(std::size_t rule, const HorizontalNfa& nfa, HorizontalNfa::Node node,
                                     std::size_t budget) {
        auto& memo = memo_[rule];
        const auto key = std::make_pair(node, budget);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        std::set<Hedge> found;
        if (budget == 0) {
            if (nfa.is_final(node)) {
                found.insert(Hedge{});
            }
        } else {
            for (const auto& e : nfa.edges(node)) {
                for (std::size_t k = 1; k <= budget; ++k) {
                    const auto& heads = by_size_[e.symbol][k];
                    if (heads.empty()) {
                        continue;
                    }
                    const auto& tails = hedges(rule, nfa, e.to, budget - k);
                    for (const Tree& head : heads) {
                        for (const Hedge& tail : tails) {
                            Hedge h;
                            h.reserve(tail.size() + 1);
                            h.push_back(head);
                            h.insert(h.end(), tail.begin(), tail.end());
                            found.insert(std::move(h));
                        }
                    }
                }
            }
        }
        return memo.emplace(key, std::vector<Hedge>(found.begin(), found.end())).first->second;
    }

    const HedgeAutomaton& a_;
    std::size_t max_;
    std::vector<std::vector<std::set<Tree>>> by_size_;
    std::map<HedgeAutomaton::RuleKey, std::size_t> rule_index_;
    std::vector<std::map<std::pair<HorizontalNfa::Node, std::size_t>, std::vector<Hedge>>> memo_;
};

/// { t ∈ L(a) : |t| ≤ max_nodes }.
inline std::set<Tree> enumerate(const HedgeAutomaton& a, std::size_t max_nodes) {
    return Enumerator(a, max_nodes).accepted();
}

/// Trees with at most `max_nodes` nodes that evaluate to `q`.
inline std::set<Tree> enumerate_state(const HedgeAutomaton& a, StateId q, std::size_t max_nodes) {
    return Enumerator(a, max_nodes).trees_of(q);
}

} // namespace hasa

#endif // HASA_ALGEBRA_HPP
