#ifndef HASA_REWRITE_HPP
#define HASA_REWRITE_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hasa/algebra.hpp"
#include "hasa/error.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/tree.hpp"

namespace hasa {

/// The eight update primitives.
///   REN a(x) -> b(x)       RPL a(x) -> p          DEL a(x) -> ()
///   INS_FIRST a(x) -> a(px)   INS_LAST a(x) -> a(xp)   INS_INTO a(xy) -> a(xpy)
///   INS_BEFORE a(x) -> p a(x) INS_AFTER a(x) -> a(x) p
/// where p stands for any tree of a state of the companion types automaton.
enum class UpdateKind { Ren, Rpl, Del, InsFirst, InsLast, InsInto, InsBefore, InsAfter };

/// Where INS_INTO places the inserted tree. `Anywhere` keeps every choice.
enum class InsIntoMode { Anywhere, First, Last };

inline const char* keyword(UpdateKind kind) {
    switch (kind) {
        case UpdateKind::Ren: return "ren";
        case UpdateKind::Rpl: return "rpl";
        case UpdateKind::Del: return "del";
        case UpdateKind::InsFirst: return "ins_first";
        case UpdateKind::InsLast: return "ins_last";
        case UpdateKind::InsInto: return "ins_into";
        case UpdateKind::InsBefore: return "ins_before";
        case UpdateKind::InsAfter: return "ins_after";
    }
    return "?";
}

inline bool needs_type_state(UpdateKind kind) { return kind != UpdateKind::Ren && kind != UpdateKind::Del; }

/// Kinds that never rewrite the document root.
inline bool excludes_root(UpdateKind kind) {
    return kind == UpdateKind::Del || kind == UpdateKind::InsBefore || kind == UpdateKind::InsAfter;
}

struct UpdateRule {
    UpdateKind kind = UpdateKind::Ren;
    Label target;
    std::optional<Label> new_label;        // REN only
    std::optional<std::string> type_state; // every kind but REN and DEL

    static UpdateRule ren(Label a, Label b) { return {UpdateKind::Ren, std::move(a), std::move(b), std::nullopt}; }
    static UpdateRule del(Label a) { return {UpdateKind::Del, std::move(a), std::nullopt, std::nullopt}; }
    static UpdateRule with_type(UpdateKind kind, Label a, std::string p) {
        return {kind, std::move(a), std::nullopt, std::move(p)};
    }

    /// Throws InvalidRule unless the operands match the kind.
    void validate() const {
        if (!is_valid_label(target)) {
            throw Error(ErrorKind::InvalidRule, "invalid target label '" + target + "'");
        }
        if (kind == UpdateKind::Ren) {
            if (!new_label || !is_valid_label(*new_label) || type_state) {
                throw Error(ErrorKind::InvalidRule, "ren needs a new label and no type state");
            }
        } else if (kind == UpdateKind::Del) {
            if (new_label || type_state) {
                throw Error(ErrorKind::InvalidRule, "del takes no operand");
            }
        } else if (new_label || !type_state) {
            throw Error(ErrorKind::InvalidRule, std::string(keyword(kind)) + " needs a type state");
        }
    }

    std::string to_string() const {
        std::string out = std::string(keyword(kind)) + " " + target;
        if (new_label) {
            out += " -> " + *new_label;
        }
        if (type_state) {
            out += " <- " + *type_state;
        }
        return out;
    }

    friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
};

/// Ordered rules plus the types automaton their type states refer to.
struct UpdateScript {
    std::vector<UpdateRule> rules;
    HedgeAutomaton types;

    void validate() const {
        for (const UpdateRule& r : rules) {
            r.validate();
            if (r.type_state && !types.has_state(*r.type_state)) {
                throw Error(ErrorKind::UnknownTypeState, "type state '" + *r.type_state + "' is not a state of " +
                                                             types.name());
            }
        }
    }
};

/// Candidate instantiations per type state name.
using InstancePool = std::map<std::string, std::vector<Tree>>;

/// Every tree of at most `bound` nodes evaluating to each requested state.
inline InstancePool build_pool(const HedgeAutomaton& types, const std::set<std::string>& states, std::size_t bound) {
    InstancePool pool;
    if (states.empty()) {
        return pool;
    }
    const Enumerator en(types, bound);
    for (const auto& name : states) {
        const auto trees = en.trees_of(types.state(name));
        pool[name] = std::vector<Tree>(trees.begin(), trees.end());
    }
    return pool;
}

/// Positions whose label is the rule's target, ascending; the root is left
/// out for DEL, INS_BEFORE and INS_AFTER.
inline std::vector<Position> targets(const Tree& t, const UpdateRule& r) {
    std::vector<Position> out;
    for (const Position& p : positions(t)) {
        if (p.is_root() && excludes_root(r.kind)) {
            continue;
        }
        if (subtree_at(t, p).label == r.target) {
            out.push_back(p);
        }
    }
    return out;
}

/// Observer for the intermediate tree after each processed target.
using StepObserver = std::function<void(const Position&, const Tree&)>;

namespace detail {

inline const std::vector<Tree>& pool_for(const UpdateRule& r, const InstancePool& pool) {
    auto it = pool.find(*r.type_state);
    if (it == pool.end() || it->second.empty()) {
        throw Error(ErrorKind::EmptyPool, "no instance available for type state '" + *r.type_state + "'");
    }
    return it->second;
}

/// Replacement hedges for the matched subtree `node`.
inline std::vector<Hedge> rewrites_of(const Tree& node, const UpdateRule& r, const InstancePool& pool,
                                      InsIntoMode mode) {
    std::vector<Hedge> out;
    switch (r.kind) {
        case UpdateKind::Ren:
            out.push_back({Tree(*r.new_label, node.children)});
            break;
        case UpdateKind::Del:
            out.emplace_back();
            break;
        case UpdateKind::Rpl:
            for (const Tree& u : pool_for(r, pool)) {
                out.push_back({u});
            }
            break;
        case UpdateKind::InsBefore:
            for (const Tree& u : pool_for(r, pool)) {
                out.push_back({u, node});
            }
            break;
        case UpdateKind::InsAfter:
            for (const Tree& u : pool_for(r, pool)) {
                out.push_back({node, u});
            }
            break;
        case UpdateKind::InsFirst:
        case UpdateKind::InsLast:
        case UpdateKind::InsInto: {
            const std::size_t k = node.children.size();
            std::size_t lo = 0;
            std::size_t hi = k;
            if (r.kind == UpdateKind::InsFirst || (r.kind == UpdateKind::InsInto && mode == InsIntoMode::First)) {
                hi = 0;
            } else if (r.kind == UpdateKind::InsLast || (r.kind == UpdateKind::InsInto && mode == InsIntoMode::Last)) {
                lo = k;
            }
            for (const Tree& u : pool_for(r, pool)) {
                for (std::size_t i = lo; i <= hi; ++i) {
                    Tree copy = node;
                    copy.children.insert(copy.children.begin() + static_cast<std::ptrdiff_t>(i), u);
                    out.push_back({std::move(copy)});
                }
            }
            break;
        }
    }
    return out;
}

} // namespace detail

/// One maximal parallel application of `r`: targets are rewritten in
/// decreasing lexicographic order, each target choosing its own instance.
/// Material inserted by the step is never rewritten by it.
inline std::set<Tree> parallel_step(const Tree& t, const UpdateRule& r, const InstancePool& pool,
                                    InsIntoMode mode = InsIntoMode::Anywhere, const StepObserver& observe = {}) {
    r.validate();
    if (needs_type_state(r.kind)) {
        detail::pool_for(r, pool);
    }
    if (r.kind == UpdateKind::Ren && *r.new_label == r.target) {
        return {t};
    }
    const auto found = targets(t, r);
    std::set<Tree> current{t};
    for (auto it = found.rbegin(); it != found.rend(); ++it) {
        std::set<Tree> next;
        for (const Tree& x : current) {
            for (const Hedge& h : detail::rewrites_of(subtree_at(x, *it), r, pool, mode)) {
                Tree y = replace_at(x, *it, h);
                if (observe) {
                    observe(*it, y);
                }
                next.insert(std::move(y));
            }
        }
        current = std::move(next);
    }
    return current;
}

/// Folds parallel_step over the script, pools drawn once at `pool_bound`.
inline std::set<Tree> apply_script(const Tree& t, const UpdateScript& s, std::size_t pool_bound,
                                   InsIntoMode mode = InsIntoMode::Anywhere) {
    s.validate();
    std::set<std::string> wanted;
    for (const UpdateRule& r : s.rules) {
        if (r.type_state) {
            wanted.insert(*r.type_state);
        }
    }
    const InstancePool pool = build_pool(s.types, wanted, pool_bound);
    std::set<Tree> current{t};
    for (const UpdateRule& r : s.rules) {
        std::set<Tree> next;
        for (const Tree& x : current) {
            auto out = parallel_step(x, r, pool, mode);
            next.insert(out.begin(), out.end());
        }
        current = std::move(next);
    }
    return current;
}

/// Bounded ground truth for Post: the script applied to every document of
/// at most `tree_bound` nodes.
inline std::set<Tree> post_oracle(const HedgeAutomaton& doc, const UpdateScript& s, std::size_t tree_bound,
                                  std::size_t pool_bound, InsIntoMode mode = InsIntoMode::Anywhere) {
    s.validate();
    std::set<std::string> wanted;
    for (const UpdateRule& r : s.rules) {
        if (r.type_state) {
            wanted.insert(*r.type_state);
        }
    }
    const InstancePool pool = build_pool(s.types, wanted, pool_bound);
    std::set<Tree> out;
    for (const Tree& t : enumerate(doc, tree_bound)) {
        std::set<Tree> current{t};
        for (const UpdateRule& r : s.rules) {
            std::set<Tree> next;
            for (const Tree& x : current) {
                auto step = parallel_step(x, r, pool, mode);
                next.insert(step.begin(), step.end());
            }
            current = std::move(next);
        }
        out.insert(current.begin(), current.end());
    }
    return out;
}

} // namespace hasa

#endif // HASA_REWRITE_HPP
