#ifndef HASA_HEDGE_AUTOMATON_HPP
#define HASA_HEDGE_AUTOMATON_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hasa/error.hpp"
#include "hasa/horizontal_nfa.hpp"
#include "hasa/tree.hpp"

namespace hasa {

/// Nondeterministic finite hedge automaton (Q, Σ, Q_f, Δ).
///
/// States live in a name table and are addressed by dense StateId. Rules are
/// keyed by (label, target state), so the automaton is normalized by
/// construction. Every stored horizontal automaton is ε-free, trimmed and has
/// a non-empty language; a rule whose language is empty is simply absent.
class HedgeAutomaton {
public:
    using RuleKey = std::pair<Label, StateId>;
    using RuleMap = std::map<RuleKey, HorizontalNfa>;

    HedgeAutomaton() = default;
    explicit HedgeAutomaton(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    // -- states -------------------------------------------------------------

    /// Adds a state, or returns the existing id if the name is taken.
    StateId add_state(const std::string& name) {
        if (auto it = index_.find(name); it != index_.end()) {
            return it->second;
        }
        const auto id = static_cast<StateId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::optional<StateId> find_state(const std::string& name) const {
        if (auto it = index_.find(name); it != index_.end()) {
            return it->second;
        }
        return std::nullopt;
    }

    StateId state(const std::string& name) const {
        if (auto id = find_state(name)) {
            return *id;
        }
        throw Error(ErrorKind::UnknownState, "unknown state '" + name + "'");
    }

    bool has_state(const std::string& name) const { return index_.contains(name); }
    const std::string& state_name(StateId id) const { return names_.at(id); }
    const std::vector<std::string>& state_names() const noexcept { return names_; }
    std::size_t state_count() const noexcept { return names_.size(); }

    // -- alphabet -----------------------------------------------------------

    void add_label(const Label& label) {
        if (!is_valid_label(label)) {
            throw Error(ErrorKind::UnknownLabel, "invalid label '" + label + "'");
        }
        alphabet_.insert(label);
    }
    const std::set<Label>& alphabet() const noexcept { return alphabet_; }
    bool has_label(const Label& label) const { return alphabet_.contains(label); }

    // -- finals -------------------------------------------------------------

    void set_final(StateId q, bool value = true) {
        check_state(q);
        if (value) {
            finals_.insert(q);
        } else {
            finals_.erase(q);
        }
    }
    bool is_final(StateId q) const { return finals_.contains(q); }
    const std::set<StateId>& finals() const noexcept { return finals_; }

    // -- rules --------------------------------------------------------------

    /// Installs a(nfa) -> q, replacing any previous rule for (a, q).
    void set_rule(const Label& label, StateId q, const HorizontalNfa& nfa) {
        check_state(q);
        for (StateId s : nfa.alphabet()) {
            check_state(s);
        }
        add_label(label);
        HorizontalNfa clean = nfa.without_epsilon();
        if (clean.is_empty_language()) {
            rules_.erase({label, q});
            return;
        }
        rules_[{label, q}] = std::move(clean);
    }

    /// Adds a(nfa) -> q; an existing rule for (a, q) is merged by union.
    /// Returns true when a merge happened.
    bool add_rule(const Label& label, StateId q, const HorizontalNfa& nfa) {
        if (auto it = rules_.find({label, q}); it != rules_.end()) {
            set_rule(label, q, nfa_union(it->second, nfa));
            return true;
        }
        set_rule(label, q, nfa);
        return false;
    }

    void erase_rule(const Label& label, StateId q) { rules_.erase({label, q}); }

    const HorizontalNfa* find_rule(const Label& label, StateId q) const {
        if (auto it = rules_.find({label, q}); it != rules_.end()) {
            return &it->second;
        }
        return nullptr;
    }

    const RuleMap& rules() const noexcept { return rules_; }

    /// Rules whose label is `label`, in state order.
    auto rules_for(const Label& label) const {
        auto first = rules_.lower_bound({label, 0});
        auto last = rules_.upper_bound({label, std::numeric_limits<StateId>::max()});
        return std::ranges::subrange(first, last);
    }

    /// Applies `f` to every horizontal automaton in place, then restores the
    /// rule invariants (ε-free, trimmed, non-empty).
    void transform_rules(const std::function<void(const RuleKey&, HorizontalNfa&)>& f) {
        RuleMap next;
        for (auto& [key, nfa] : rules_) {
            HorizontalNfa copy = nfa;
            f(key, copy);
            for (StateId s : copy.alphabet()) {
                check_state(s);
            }
            copy = copy.without_epsilon();
            if (!copy.is_empty_language()) {
                next.emplace(key, std::move(copy));
            }
        }
        rules_ = std::move(next);
    }

    /// Adds `symbols` to the alphabet of every horizontal automaton.
    void expand_horizontal_alphabets(const std::vector<StateId>& symbols) {
        for (auto& [key, nfa] : rules_) {
            nfa.add_to_alphabet(symbols);
        }
    }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& [key, nfa] : rules_) {
            n += nfa.transition_count();
        }
        return n;
    }

    /// States that are the target of at least one rule.
    std::set<StateId> produced_states() const {
        std::set<StateId> out;
        for (const auto& [key, nfa] : rules_) {
            out.insert(key.second);
        }
        return out;
    }

private:
    void check_state(StateId q) const {
        if (q >= names_.size()) {
            throw Error(ErrorKind::UnknownState, "state id " + std::to_string(q) + " is out of range");
        }
    }

    std::string name_ = "A";
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> index_;
    std::set<Label> alphabet_;
    std::set<StateId> finals_;
    RuleMap rules_;
};

/// One entry of an unnormalized rule multiset.
struct RuleSpec {
    Label label;
    HorizontalNfa nfa;
    StateId target;
};

/// Builds a normalized automaton from a rule multiset over `states`; rules
/// sharing (label, target) are merged by union.
inline HedgeAutomaton normalize(const std::vector<std::string>& states, const std::vector<StateId>& finals,
                                const std::vector<RuleSpec>& rules) {
    HedgeAutomaton out;
    for (const auto& s : states) {
        out.add_state(s);
    }
    for (StateId f : finals) {
        out.set_final(f);
    }
    for (const RuleSpec& r : rules) {
        out.add_rule(r.label, r.target, r.nfa);
    }
    return out;
}

/// Copies every state and rule of `src` into `dst`, naming each copied state
/// via `rename`. Returns the id map src -> dst. Finals are not copied.
inline std::vector<StateId> import_automaton(HedgeAutomaton& dst, const HedgeAutomaton& src,
                                             const std::function<std::string(const std::string&)>& rename) {
    std::vector<StateId> map(src.state_count());
    for (StateId q = 0; q < src.state_count(); ++q) {
        map[q] = dst.add_state(rename(src.state_name(q)));
    }
    for (const Label& l : src.alphabet()) {
        dst.add_label(l);
    }
    for (const auto& [key, nfa] : src.rules()) {
        dst.add_rule(key.first, map[key.second], nfa.map_symbols([&](StateId s) { return map[s]; }));
    }
    return map;
}

/// Copy of `a` whose state names avoid `reserved`. Colliding names get the
/// smallest free numeric suffix; the renaming is injective and the language
/// is unchanged.
inline HedgeAutomaton state_hygiene(const HedgeAutomaton& a, const std::set<std::string>& reserved) {
    std::set<std::string> taken(a.state_names().begin(), a.state_names().end());
    taken.insert(reserved.begin(), reserved.end());
    std::unordered_map<std::string, std::string> renames;
    for (const auto& name : a.state_names()) {
        if (!reserved.contains(name)) {
            continue;
        }
        for (std::size_t k = 1;; ++k) {
            std::string candidate = name + "_" + std::to_string(k);
            if (!taken.contains(candidate)) {
                taken.insert(candidate);
                renames.emplace(name, std::move(candidate));
                break;
            }
        }
    }
    HedgeAutomaton out(a.name());
    const auto map = import_automaton(out, a, [&](const std::string& n) {
        auto it = renames.find(n);
        return it == renames.end() ? n : it->second;
    });
    for (StateId f : a.finals()) {
        out.set_final(map[f]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Membership

/// Run M||t: a tree of states with the same shape as the evaluated tree.
struct Computation {
    StateId state = 0;
    std::vector<Computation> children;
};

namespace detail {

/// Admissible states of every node, stored in the tree's shape.
struct StateSets {
    std::vector<StateId> states;
    std::vector<StateSets> children;
};

/// Frontier of node sets after each prefix of the children word, where the
/// i-th symbol may be any state with mask[i][state] set.
inline std::vector<std::vector<char>> horizontal_frontiers(const HorizontalNfa& nfa,
                                                           const std::vector<std::vector<char>>& masks) {
    std::vector<std::vector<char>> frontier(masks.size() + 1, std::vector<char>(nfa.size(), 0));
    frontier[0][nfa.initial()] = 1;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        bool any = false;
        for (HorizontalNfa::Node s = 0; s < nfa.size(); ++s) {
            if (!frontier[i][s]) {
                continue;
            }
            for (const auto& e : nfa.edges(s)) {
                if (e.symbol < masks[i].size() && masks[i][e.symbol]) {
                    frontier[i + 1][e.to] = 1;
                    any = true;
                }
            }
        }
        if (!any) {
            break;
        }
    }
    return frontier;
}

inline StateSets admissible_states(const HedgeAutomaton& m, const Tree& t) {
    StateSets out;
    std::vector<std::vector<char>> masks;
    masks.reserve(t.children.size());
    bool dead = false;
    for (const Tree& c : t.children) {
        out.children.push_back(admissible_states(m, c));
        std::vector<char> mask(m.state_count(), 0);
        for (StateId q : out.children.back().states) {
            mask[q] = 1;
        }
        if (out.children.back().states.empty()) {
            dead = true;
        }
        masks.push_back(std::move(mask));
    }
    if (dead) {
        return out;
    }
    for (const auto& [key, nfa] : m.rules_for(t.label)) {
        const auto frontier = horizontal_frontiers(nfa, masks);
        const auto& last = frontier.back();
        for (HorizontalNfa::Node s = 0; s < nfa.size(); ++s) {
            if (last[s] && nfa.is_final(s)) {
                out.states.push_back(key.second);
                break;
            }
        }
    }
    return out;
}

inline Computation select_run(const HedgeAutomaton& m, const Tree& t, const StateSets& sets, StateId q) {
    Computation c;
    c.state = q;
    if (t.children.empty()) {
        return c;
    }
    const HorizontalNfa& nfa = *m.find_rule(t.label, q);
    std::vector<std::vector<char>> masks;
    for (const auto& child : sets.children) {
        std::vector<char> mask(m.state_count(), 0);
        for (StateId s : child.states) {
            mask[s] = 1;
        }
        masks.push_back(std::move(mask));
    }
    const auto frontier = horizontal_frontiers(nfa, masks);
    const std::size_t n = masks.size();
    HorizontalNfa::Node at = 0;
    for (HorizontalNfa::Node s = 0; s < nfa.size(); ++s) {
        if (frontier[n][s] && nfa.is_final(s)) {
            at = s;
            break;
        }
    }
    std::vector<StateId> word(n);
    for (std::size_t i = n; i-- > 0;) {
        bool found = false;
        for (HorizontalNfa::Node s = 0; s < nfa.size() && !found; ++s) {
            if (!frontier[i][s]) {
                continue;
            }
            for (const auto& e : nfa.edges(s)) {
                if (e.to == at && masks[i][e.symbol]) {
                    word[i] = e.symbol;
                    at = s;
                    found = true;
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        c.children.push_back(select_run(m, t.children[i], sets.children[i], word[i]));
    }
    return c;
}

} // namespace detail

/// States that `t` can evaluate to (bottom-up state-set evaluation).
inline std::vector<StateId> evaluate(const HedgeAutomaton& m, const Tree& t) {
    return detail::admissible_states(m, t).states;
}

/// An accepting computation of `m` over `t`, or nothing if `t` is rejected.
/// Labels outside the alphabet have no rules and are rejected.
inline std::optional<Computation> run(const HedgeAutomaton& m, const Tree& t) {
    const auto sets = detail::admissible_states(m, t);
    for (StateId q : sets.states) {
        if (m.is_final(q)) {
            return detail::select_run(m, t, sets, q);
        }
    }
    return std::nullopt;
}

inline bool accepts(const HedgeAutomaton& m, const Tree& t) {
    const auto states = evaluate(m, t);
    return std::any_of(states.begin(), states.end(), [&](StateId q) { return m.is_final(q); });
}

/// Checks a computation locally: every node's rule exists and its horizontal
/// automaton accepts the children's state word.
inline bool is_valid_computation(const HedgeAutomaton& m, const Tree& t, const Computation& c) {
    if (t.children.size() != c.children.size()) {
        return false;
    }
    const HorizontalNfa* nfa = m.find_rule(t.label, c.state);
    if (nfa == nullptr) {
        return false;
    }
    std::vector<StateId> word;
    for (const auto& child : c.children) {
        if (!nfa->alphabet().contains(child.state)) {
            return false;
        }
        word.push_back(child.state);
    }
    if (!nfa->accepts(word)) {
        return false;
    }
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (!is_valid_computation(m, t.children[i], c.children[i])) {
            return false;
        }
    }
    return true;
}

} // namespace hasa

#endif // HASA_HEDGE_AUTOMATON_HPP
