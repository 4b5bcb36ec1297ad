#ifndef HASA_POST_HPP
#define HASA_POST_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hasa/algebra.hpp"
#include "hasa/error.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/horizontal_nfa.hpp"
#include "hasa/rewrite.hpp"

namespace hasa {

/// Working state of a Post chain.
///
/// `doc` starts as the document automaton and accumulates every edit.
/// `types` is the companion automaton under its current state names; it is
/// copied into `doc` after each step that inserts p-material, because later
/// rules rewrite inserted subtrees too. When a later step could disturb that
/// copy, `types` is renamed to fresh names so the next insertion refers to an
/// untouched version of the type.
struct PostContext {
    HedgeAutomaton doc;
    HedgeAutomaton types;
    HedgeAutomaton original_types;
    std::set<std::string> used_names;
    bool types_absorbed = false;
    Label split_label;
    std::vector<StateId> split_states;

    PostContext(const HedgeAutomaton& document, const HedgeAutomaton& type_automaton)
        : types(type_automaton), original_types(type_automaton) {
        std::set<std::string> reserved(types.state_names().begin(), types.state_names().end());
        doc = state_hygiene(document, reserved);
        used_names = reserved;
        used_names.insert(doc.state_names().begin(), doc.state_names().end());
    }

    /// A state name not used by doc, types, or any earlier step.
    std::string fresh_name(const std::string& base) {
        std::string name = base;
        for (std::size_t k = 2; used_names.contains(name) || doc.has_state(name) || types.has_state(name); ++k) {
            name = base + "~" + std::to_string(k);
        }
        used_names.insert(name);
        return name;
    }
};

namespace detail {

inline std::vector<StateId> all_states(const HedgeAutomaton& a) {
    std::vector<StateId> out(a.state_count());
    for (StateId q = 0; q < out.size(); ++q) {
        out[q] = q;
    }
    return out;
}

inline bool same_structure(const HorizontalNfa& x, const HorizontalNfa& y) {
    return x.size() == y.size() && x.initial() == y.initial() && x.finals() == y.finals() &&
           x.transitions() == y.transitions();
}

/// types-automaton id -> doc id, adding names to the doc table as needed.
inline std::vector<StateId> bind_types(PostContext& ctx) {
    std::vector<StateId> map(ctx.types.state_count());
    for (StateId p = 0; p < map.size(); ++p) {
        map[p] = ctx.doc.add_state(ctx.types.state_name(p));
    }
    return map;
}

/// True when doc holds exactly the current types rules, unmodified.
inline bool copy_is_pristine(PostContext& ctx) {
    const auto map = bind_types(ctx);
    const std::set<StateId> ids(map.begin(), map.end());
    std::size_t in_doc = 0;
    for (const auto& [key, nfa] : ctx.doc.rules()) {
        in_doc += ids.contains(key.second) ? 1 : 0;
    }
    if (in_doc != ctx.types.rules().size()) {
        return false;
    }
    for (const auto& [key, nfa] : ctx.types.rules()) {
        const HorizontalNfa* mine = ctx.doc.find_rule(key.first, map[key.second]);
        if (mine == nullptr || !same_structure(*mine, nfa.map_symbols([&](StateId s) { return map[s]; }))) {
            return false;
        }
    }
    return true;
}

/// Makes sure the next insertion refers to an untouched types copy.
inline void prepare_types(PostContext& ctx, const Label& target) {
    if (!ctx.types_absorbed) {
        return;
    }
    if (ctx.types.rules_for(target).empty() && copy_is_pristine(ctx)) {
        return;
    }
    HedgeAutomaton renamed(ctx.types.name());
    const auto map = import_automaton(renamed, ctx.types, [&](const std::string& n) { return ctx.fresh_name(n); });
    for (StateId f : ctx.types.finals()) {
        renamed.set_final(map[f]);
    }
    ctx.types = std::move(renamed);
    ctx.types_absorbed = false;
}

/// Doc id of the current name of type state `p` (given by its original name).
inline StateId type_state_id(PostContext& ctx, const std::string& p) {
    const auto original = ctx.original_types.find_state(p);
    if (!original) {
        throw Error(ErrorKind::UnknownTypeState, "type state '" + p + "' is not a state of " + ctx.types.name());
    }
    return ctx.doc.add_state(ctx.types.state_name(*original));
}

inline void absorb_types(PostContext& ctx) {
    if (ctx.types_absorbed) {
        return;
    }
    const auto map = bind_types(ctx);
    for (const Label& l : ctx.types.alphabet()) {
        ctx.doc.add_label(l);
    }
    for (const auto& [key, nfa] : ctx.types.rules()) {
        ctx.doc.set_rule(key.first, map[key.second], nfa.map_symbols([&](StateId s) { return map[s]; }));
    }
    ctx.doc.expand_horizontal_alphabets(all_states(ctx.doc));
    ctx.types_absorbed = true;
}

inline const std::vector<StateId>& split_for(PostContext& ctx, const Label& a);

/// Rewrites every horizontal transition reading one of `on` with `edit`,
/// which receives the NFA, the transition, and must add the replacement.
template <class Edit>
void rewrite_reads(PostContext& ctx, const std::vector<StateId>& on, Edit edit) {
    const std::set<StateId> symbols(on.begin(), on.end());
    ctx.doc.transform_rules([&](const HedgeAutomaton::RuleKey&, HorizontalNfa& nfa) {
        for (const auto& t : nfa.transitions()) {
            if (symbols.contains(t.symbol)) {
                nfa.remove_transition(t.from, t.symbol, t.to);
                edit(nfa, t);
            }
        }
    });
}

/// The states of `on` that accept some tree. Reads of the others are dead
/// and must stay dead when a rewrite drops the read itself.
inline std::vector<StateId> productive_only(const PostContext& ctx, std::vector<StateId> on) {
    const auto productive = productive_states(ctx.doc);
    std::erase_if(on, [&](StateId q) { return !productive[q]; });
    return on;
}

} // namespace detail

/// Lets every horizontal automaton of doc read every state of doc and of
/// the types automaton. Languages are unchanged.
inline void expand_alphabets(PostContext& ctx) {
    detail::bind_types(ctx);
    ctx.doc.expand_horizontal_alphabets(detail::all_states(ctx.doc));
}

/// Gives the subtrees rooted at `a` states of their own, so that edits of
/// horizontal transitions reach a-occurrences only. A state produced by `a`
/// alone is already isolated and is kept; a shared state q gets a fresh copy
/// read wherever q is read. Returns the a-states after the split.
inline std::vector<StateId> split_shared_state(PostContext& ctx, const Label& a) {
    HedgeAutomaton& doc = ctx.doc;
    std::map<StateId, std::size_t> producers;
    for (const auto& [key, nfa] : doc.rules()) {
        ++producers[key.second];
    }
    std::vector<StateId> result;
    std::map<StateId, StateId> fresh_of;
    std::vector<std::pair<StateId, HorizontalNfa>> moved;
    for (const auto& [key, nfa] : doc.rules_for(a)) {
        const StateId q = key.second;
        if (producers[q] == 1) {
            result.push_back(q);
            continue;
        }
        const StateId f = doc.add_state(ctx.fresh_name(doc.state_name(q) + "^" + a));
        fresh_of[q] = f;
        moved.emplace_back(q, nfa);
        result.push_back(f);
    }
    for (auto& [q, nfa] : moved) {
        doc.erase_rule(a, q);
        doc.set_rule(a, fresh_of[q], nfa);
        --producers[q];
    }
    if (!fresh_of.empty()) {
        doc.transform_rules([&](const HedgeAutomaton::RuleKey&, HorizontalNfa& nfa) {
            for (const auto& t : nfa.transitions()) {
                if (auto it = fresh_of.find(t.symbol); it != fresh_of.end()) {
                    nfa.add_transition(t.from, it->second, t.to);
                }
            }
        });
        for (const auto& [q, f] : fresh_of) {
            if (doc.is_final(q)) {
                doc.set_final(f);
            }
        }
    }
    std::sort(result.begin(), result.end());
    ctx.split_label = a;
    ctx.split_states = result;
    expand_alphabets(ctx);
    return result;
}

namespace detail {

inline const std::vector<StateId>& split_for(PostContext& ctx, const Label& a) {
    if (ctx.split_label != a) {
        split_shared_state(ctx, a);
    }
    return ctx.split_states;
}

inline void forget_split(PostContext& ctx) {
    ctx.split_label.clear();
    ctx.split_states.clear();
}

} // namespace detail

/// REN a -> b: a-rules are re-keyed to b, merged by union with existing
/// b-rules for the same state. Horizontal languages stay as they are.
inline void post_ren(PostContext& ctx, const Label& a, const Label& b) {
    detail::forget_split(ctx);
    if (a == b) {
        return;
    }
    ctx.doc.add_label(b);
    std::vector<std::pair<StateId, HorizontalNfa>> moved;
    for (const auto& [key, nfa] : ctx.doc.rules_for(a)) {
        moved.emplace_back(key.second, nfa);
    }
    for (auto& [q, nfa] : moved) {
        ctx.doc.erase_rule(a, q);
        ctx.doc.add_rule(b, q, nfa);
    }
}

/// INS_FIRST a <- p: every a-rule language L becomes {p}.L.
inline void post_ins_first(PostContext& ctx, const Label& a, const std::string& p) {
    detail::forget_split(ctx);
    detail::prepare_types(ctx, a);
    const StateId pid = detail::type_state_id(ctx, p);
    std::vector<std::pair<StateId, HorizontalNfa>> rules;
    for (const auto& [key, nfa] : ctx.doc.rules_for(a)) {
        rules.emplace_back(key.second, nfa_prepend(nfa, pid));
    }
    for (auto& [q, nfa] : rules) {
        ctx.doc.set_rule(a, q, nfa);
    }
    detail::absorb_types(ctx);
}

/// INS_LAST a <- p: every a-rule language L becomes L.{p}.
inline void post_ins_last(PostContext& ctx, const Label& a, const std::string& p) {
    detail::forget_split(ctx);
    detail::prepare_types(ctx, a);
    const StateId pid = detail::type_state_id(ctx, p);
    std::vector<std::pair<StateId, HorizontalNfa>> rules;
    for (const auto& [key, nfa] : ctx.doc.rules_for(a)) {
        rules.emplace_back(key.second, nfa_append(nfa, pid));
    }
    for (auto& [q, nfa] : rules) {
        ctx.doc.set_rule(a, q, nfa);
    }
    detail::absorb_types(ctx);
}

/// INS_INTO a <- p. `Anywhere` maps L to { u p v : uv in L }.
inline void post_ins_into(PostContext& ctx, const Label& a, const std::string& p,
                          InsIntoMode mode = InsIntoMode::Anywhere) {
    if (mode == InsIntoMode::First) {
        post_ins_first(ctx, a, p);
        return;
    }
    if (mode == InsIntoMode::Last) {
        post_ins_last(ctx, a, p);
        return;
    }
    detail::forget_split(ctx);
    detail::prepare_types(ctx, a);
    const StateId pid = detail::type_state_id(ctx, p);
    std::vector<std::pair<StateId, HorizontalNfa>> rules;
    for (const auto& [key, nfa] : ctx.doc.rules_for(a)) {
        rules.emplace_back(key.second, nfa_insert_anywhere(nfa, pid));
    }
    for (auto& [q, nfa] : rules) {
        ctx.doc.set_rule(a, q, nfa);
    }
    detail::absorb_types(ctx);
}

/// INS_BEFORE a <- p: each read (s, q*, s') of an a-state becomes
/// (s, p, m)(m, q*, s') through a new node m.
inline void post_ins_before(PostContext& ctx, const Label& a, const std::string& p) {
    detail::prepare_types(ctx, a);
    const auto on = detail::split_for(ctx, a);
    const StateId pid = detail::type_state_id(ctx, p);
    detail::rewrite_reads(ctx, on, [&](HorizontalNfa& nfa, const HorizontalNfa::Transition& t) {
        const auto m = nfa.add_state();
        nfa.add_transition(t.from, pid, m);
        nfa.add_transition(m, t.symbol, t.to);
    });
    detail::forget_split(ctx);
    detail::absorb_types(ctx);
}

/// INS_AFTER a <- p: (s, q*, s') becomes (s, q*, m)(m, p, s').
inline void post_ins_after(PostContext& ctx, const Label& a, const std::string& p) {
    detail::prepare_types(ctx, a);
    const auto on = detail::split_for(ctx, a);
    const StateId pid = detail::type_state_id(ctx, p);
    detail::rewrite_reads(ctx, on, [&](HorizontalNfa& nfa, const HorizontalNfa::Transition& t) {
        const auto m = nfa.add_state();
        nfa.add_transition(t.from, t.symbol, m);
        nfa.add_transition(m, pid, t.to);
    });
    detail::forget_split(ctx);
    detail::absorb_types(ctx);
}

/// RPL a <- p: reads of a-states become reads of p. A root a is replaced
/// as well, so final a-states hand their role to p.
inline void post_rpl(PostContext& ctx, const Label& a, const std::string& p) {
    detail::prepare_types(ctx, a);
    const auto on = detail::productive_only(ctx, detail::split_for(ctx, a));
    const StateId pid = detail::type_state_id(ctx, p);
    detail::rewrite_reads(ctx, on, [&](HorizontalNfa& nfa, const HorizontalNfa::Transition& t) {
        nfa.add_transition(t.from, pid, t.to);
    });
    for (StateId q : on) {
        ctx.doc.erase_rule(a, q);
        if (ctx.doc.is_final(q)) {
            ctx.doc.set_final(q, false);
            ctx.doc.set_final(pid);
        }
    }
    detail::forget_split(ctx);
    detail::absorb_types(ctx);
}

/// DEL a: reads of a-states become ε moves. The a-rules stay so that a
/// root a, which is never deleted, is still accepted.
inline void post_del(PostContext& ctx, const Label& a) {
    const auto on = detail::productive_only(ctx, detail::split_for(ctx, a));
    detail::rewrite_reads(ctx, on, [&](HorizontalNfa& nfa, const HorizontalNfa::Transition& t) {
        nfa.add_transition(t.from, kEpsilon, t.to);
    });
    detail::forget_split(ctx);
}

/// The Post automaton: doc rules plus the types rules when they are not
/// already part of doc. Finals are the doc finals.
inline HedgeAutomaton assemble(const PostContext& ctx) {
    PostContext copy = ctx;
    detail::absorb_types(copy);
    HedgeAutomaton out = std::move(copy.doc);
    for (const Label& l : ctx.types.alphabet()) {
        out.add_label(l);
    }
    return out;
}

/// Applies one update rule symbolically. A rule whose type state has an
/// empty language admits no rewrite of any document and leaves doc as is.
inline void post_rule(PostContext& ctx, const UpdateRule& r, InsIntoMode mode = InsIntoMode::Anywhere) {
    r.validate();
    if (r.type_state) {
        const auto p = ctx.original_types.find_state(*r.type_state);
        if (!p) {
            throw Error(ErrorKind::UnknownTypeState,
                        "type state '" + *r.type_state + "' is not a state of " + ctx.original_types.name());
        }
        if (!productive_states(ctx.original_types)[*p]) {
            return;
        }
    }
    expand_alphabets(ctx);
    switch (r.kind) {
        case UpdateKind::Ren: post_ren(ctx, r.target, *r.new_label); break;
        case UpdateKind::Del: post_del(ctx, r.target); break;
        case UpdateKind::Rpl: post_rpl(ctx, r.target, *r.type_state); break;
        case UpdateKind::InsFirst: post_ins_first(ctx, r.target, *r.type_state); break;
        case UpdateKind::InsLast: post_ins_last(ctx, r.target, *r.type_state); break;
        case UpdateKind::InsInto: post_ins_into(ctx, r.target, *r.type_state, mode); break;
        case UpdateKind::InsBefore: post_ins_before(ctx, r.target, *r.type_state); break;
        case UpdateKind::InsAfter: post_ins_after(ctx, r.target, *r.type_state); break;
    }
}

/// Post of a whole script: the automaton of all documents obtained from a
/// member of L(doc) by applying the rules in order.
inline HedgeAutomaton post_script(const HedgeAutomaton& doc, const UpdateScript& script,
                                  InsIntoMode mode = InsIntoMode::Anywhere) {
    script.validate();
    PostContext ctx(doc, script.types);
    expand_alphabets(ctx);
    for (const UpdateRule& r : script.rules) {
        post_rule(ctx, r, mode);
    }
    HedgeAutomaton out = assemble(ctx);
    out.set_name(doc.name() + "_post");
    return out;
}

} // namespace hasa

#endif // HASA_POST_HPP
