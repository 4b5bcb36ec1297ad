#include <catch_amalgamated.hpp>

#include "hasa/ha_format.hpp"
#include "hasa/hedge_automaton.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <fstream>
#include <sstream>

using namespace hasa;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HedgeAutomaton sample(const std::string& name) {
    return parse_ha(slurp(std::string(HASA_SAMPLES_DIR) + "/" + name));
}

HorizontalNfa single(StateId q) {
    const std::vector<StateId> w{q};
    return HorizontalNfa::word(w);
}

} // namespace

TEST_CASE("Boolean automaton on individual formulas", "[ha]") {
    const HedgeAutomaton m = sample("boolean.ha");
    const auto q0 = m.state("q_0");
    const auto q1 = m.state("q_1");

    const auto c = run(m, parse_term("not(0)"));
    REQUIRE(c);
    CHECK(c->state == q1);
    CHECK(evaluate(m, parse_term("0")) == std::vector<StateId>{q0});
    CHECK_FALSE(accepts(m, parse_term("0")));
    CHECK(accepts(m, parse_term("and(1,1)")));
    CHECK_FALSE(accepts(m, parse_term("and(1,0)")));
    CHECK(accepts(m, parse_term("or(0,and(1,not(0)))")));
    CHECK_FALSE(accepts(m, parse_term("and")));
    CHECK_FALSE(accepts(m, parse_term("xor(1)")));
}

TEST_CASE("Boolean automaton agrees with evaluation on small formulas", "[ha][property]") {
    const HedgeAutomaton m = sample("boolean.ha");
    testing::FormulaUniverse formulas;
    for (const Tree& t : formulas.up_to(5)) {
        INFO(print_term(t));
        CHECK(accepts(m, t) == *testing::boolean_value(t));
    }
    // Ill-formed trees are rejected.
    testing::TreeUniverse universe({"0", "1", "not", "and"});
    for (const Tree& t : universe.up_to(4)) {
        if (!testing::boolean_value(t)) {
            INFO(print_term(t));
            CHECK_FALSE(accepts(m, t));
        }
    }
}

TEST_CASE("run returns a valid accepting computation", "[ha][property]") {
    testing::Rng rng(21);
    testing::AutomatonShape shape;
    shape.labels = {"a", "b", "c"};
    shape.states = 4;
    shape.rules = 6;
    testing::TreeUniverse universe(shape.labels);
    const auto trees = universe.up_to(5);
    for (int i = 0; i < 30; ++i) {
        const HedgeAutomaton m = testing::random_automaton(rng, shape);
        for (const Tree& t : trees) {
            const auto c = run(m, t);
            const std::set<StateId> expected = testing::brute_states(m, t);
            const auto got = evaluate(m, t);
            INFO(print_term(t));
            CHECK(std::set<StateId>(got.begin(), got.end()) == expected);
            CHECK(c.has_value() == testing::brute_accepts(m, t));
            if (c) {
                CHECK(m.is_final(c->state));
                CHECK(is_valid_computation(m, t, *c));
            }
        }
    }
}

TEST_CASE("run on a six-node universe agrees with brute force", "[ha][property]") {
    testing::Rng rng(22);
    testing::AutomatonShape shape;
    shape.labels = {"a", "b"};
    shape.states = 6;
    shape.rules = 8;
    testing::TreeUniverse universe(shape.labels);
    const auto trees = universe.up_to(6);
    for (int i = 0; i < 5; ++i) {
        const HedgeAutomaton m = testing::random_automaton(rng, shape);
        for (const Tree& t : trees) {
            REQUIRE(accepts(m, t) == testing::brute_accepts(m, t));
        }
    }
}

TEST_CASE("normalize merges rules with a shared key", "[ha]") {
    // {a(q_b) -> q, a(q_c) -> q}
    const HedgeAutomaton m = normalize({"q", "q_b", "q_c"}, {0},
                                       {{"a", single(1), 0}, {"a", single(2), 0}, {"b", HorizontalNfa::epsilon(), 1},
                                        {"c", HorizontalNfa::epsilon(), 2}});
    CHECK(m.rules().size() == 3);
    const HorizontalNfa* merged = m.find_rule("a", 0);
    REQUIRE(merged != nullptr);
    for (const auto& w : testing::all_words({0, 1, 2}, 3)) {
        CHECK(testing::word_in(*merged, w) == (w == std::vector<StateId>{1} || w == std::vector<StateId>{2}));
    }
    CHECK(accepts(m, parse_term("a(b)")));
    CHECK(accepts(m, parse_term("a(c)")));
    CHECK_FALSE(accepts(m, parse_term("a(b,c)")));

    const HedgeAutomaton plain = normalize({"q"}, {0}, {{"a", HorizontalNfa::epsilon(), 0}});
    CHECK(plain.rules().size() == 1);
}

TEST_CASE("normalize preserves acceptance of the unmerged rules", "[ha][property]") {
    testing::Rng rng(23);
    const std::vector<Label> labels{"a", "b"};
    testing::TreeUniverse universe(labels);
    const auto trees = universe.up_to(5);
    for (int i = 0; i < 20; ++i) {
        std::vector<RuleSpec> specs;
        const std::vector<StateId> ids{0, 1, 2};
        for (int k = 0; k < 6; ++k) {
            specs.push_back({labels[static_cast<std::size_t>(k) % 2], testing::random_nfa(rng, ids, {}),
                             static_cast<StateId>(k % 3)});
        }
        specs.push_back({"a", HorizontalNfa::epsilon(), 1});
        const HedgeAutomaton m = normalize({"x", "y", "z"}, {0}, specs);
        for (const Tree& t : trees) {
            CHECK(accepts(m, t) == testing::brute_accepts_specs(specs, 3, {0}, t));
        }
    }
}

TEST_CASE("state_hygiene renames reserved states", "[ha]") {
    const HedgeAutomaton a = sample("paper/doc.ha");
    const HedgeAutomaton same = state_hygiene(a, {"unrelated"});
    CHECK(same.state_names() == a.state_names());

    const HedgeAutomaton renamed = state_hygiene(a, {"q_b", "q_c"});
    CHECK_FALSE(renamed.has_state("q_b"));
    CHECK_FALSE(renamed.has_state("q_c"));
    const std::set<std::string> names(renamed.state_names().begin(), renamed.state_names().end());
    CHECK(names.size() == a.state_count());

    testing::TreeUniverse universe({"a", "b", "c"});
    for (const Tree& t : universe.up_to(6)) {
        CHECK(accepts(renamed, t) == accepts(a, t));
    }
}

TEST_CASE("labels outside the alphabet are rejected", "[ha]") {
    const HedgeAutomaton a = sample("paper/doc.ha");
    CHECK(accepts(a, parse_term("a(b,c)")));
    CHECK_FALSE(accepts(a, parse_term("a(b,z)")));
    CHECK_FALSE(accepts(a, parse_term("z")));
}

TEST_CASE("rules with an empty language are not stored", "[ha]") {
    HedgeAutomaton m;
    const auto q = m.add_state("q");
    m.add_label("a");
    m.set_rule("a", q, HorizontalNfa{});
    CHECK(m.rules().empty());
    CHECK(m.add_state("q") == q);
}
