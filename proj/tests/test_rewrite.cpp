#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "hasa/ha_format.hpp"
#include "hasa/rewrite.hpp"
#include "hasa/update_format.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

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

std::vector<std::string> rendered(const std::vector<Position>& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps) {
        out.push_back(p.to_string());
    }
    return out;
}

std::set<Tree> terms(std::initializer_list<const char*> texts) {
    std::set<Tree> out;
    for (const char* t : texts) {
        out.insert(parse_term(t));
    }
    return out;
}

InstancePool pool_of(const std::string& p, std::initializer_list<const char*> texts) {
    InstancePool pool;
    for (const char* t : texts) {
        pool[p].push_back(parse_term(t));
    }
    return pool;
}

bool has_label(const Tree& t, const Label& l) {
    if (t.label == l) {
        return true;
    }
    return std::any_of(t.children.begin(), t.children.end(), [&](const Tree& c) { return has_label(c, l); });
}

std::size_t count_label(const Tree& t, const Label& l) {
    std::size_t n = t.label == l ? 1 : 0;
    for (const Tree& c : t.children) {
        n += count_label(c, l);
    }
    return n;
}

const UpdateKind kAllKinds[] = {UpdateKind::Ren,      UpdateKind::Rpl,     UpdateKind::Del,
                                UpdateKind::InsFirst, UpdateKind::InsLast, UpdateKind::InsInto,
                                UpdateKind::InsBefore, UpdateKind::InsAfter};

UpdateRule rule_of(UpdateKind kind, const Label& a) {
    if (kind == UpdateKind::Ren) {
        return UpdateRule::ren(a, "z");
    }
    if (kind == UpdateKind::Del) {
        return UpdateRule::del(a);
    }
    return UpdateRule::with_type(kind, a, "p");
}

} // namespace

TEST_CASE("target lists", "[rewrite]") {
    const auto ins_after = UpdateRule::with_type(UpdateKind::InsAfter, "c", "p");
    CHECK(rendered(targets(parse_term("b(c,d(c(a),a))"), ins_after)) == std::vector<std::string>{"1", "2.1"});
    CHECK(targets(parse_term("a"), UpdateRule::del("a")).empty());
    CHECK(rendered(targets(parse_term("a(a(b,c),b)"), UpdateRule::with_type(UpdateKind::InsFirst, "a", "p"))) ==
          std::vector<std::string>{"ε", "1"});
    CHECK(rendered(targets(parse_term("a(a)"), UpdateRule::with_type(UpdateKind::Rpl, "a", "p"))) ==
          std::vector<std::string>{"ε", "1"});
}

TEST_CASE("insert-after step with independent choices", "[rewrite]") {
    const Tree t = parse_term("b(c,d(c(a),a))");
    const auto r = UpdateRule::with_type(UpdateKind::InsAfter, "c", "p");
    const auto pool = pool_of("p", {"a(b)", "a(c(a),c(a))"});
    std::vector<std::pair<Position, Tree>> steps;
    const auto out = parallel_step(t, r, pool, InsIntoMode::Anywhere,
                                   [&](const Position& p, const Tree& x) { steps.emplace_back(p, x); });
    CHECK(out.size() == 4);
    CHECK(out.contains(parse_term("b(c,a(c(a),c(a)),d(c(a),a(b),a))")));
    CHECK(out == terms({"b(c,a(b),d(c(a),a(b),a))", "b(c,a(b),d(c(a),a(c(a),c(a)),a))",
                        "b(c,a(c(a),c(a)),d(c(a),a(b),a))", "b(c,a(c(a),c(a)),d(c(a),a(c(a),c(a)),a))"}));
    // The first processed target is 2.1, the greater one.
    REQUIRE_FALSE(steps.empty());
    CHECK(steps.front().first == Position{2, 1});
    bool seen = false;
    for (const auto& [p, x] : steps) {
        seen = seen || (p == Position{2, 1} && x == parse_term("b(c,d(c(a),a(b),a))"));
    }
    CHECK(seen);
}

TEST_CASE("insert-first rewrites every target once", "[rewrite]") {
    const auto out = parallel_step(parse_term("a(a(b,c),b)"), UpdateRule::with_type(UpdateKind::InsFirst, "a", "p"),
                                   pool_of("p", {"d(e)"}));
    CHECK(out == terms({"a(d(e),a(d(e),b,c),b)"}));
    CHECK_FALSE(out.contains(parse_term("a(a(d(e),d(e),b,c),b)")));
    CHECK_FALSE(out.contains(parse_term("a(d(e),d(e),a(b,c),b)")));
}

TEST_CASE("single rewrites per kind", "[rewrite]") {
    const auto pool = pool_of("p", {"d"});
    const Tree t = parse_term("b(a(c),a)");
    CHECK(parallel_step(t, UpdateRule::ren("a", "x"), pool) == terms({"b(x(c),x)"}));
    CHECK(parallel_step(t, UpdateRule::ren("a", "a"), pool) == terms({"b(a(c),a)"}));
    CHECK(parallel_step(t, UpdateRule::del("a"), pool) == terms({"b"}));
    CHECK(parallel_step(t, UpdateRule::with_type(UpdateKind::Rpl, "a", "p"), pool) == terms({"b(d,d)"}));
    CHECK(parallel_step(t, UpdateRule::with_type(UpdateKind::InsBefore, "a", "p"), pool) == terms({"b(d,a(c),d,a)"}));
    CHECK(parallel_step(t, UpdateRule::with_type(UpdateKind::InsAfter, "a", "p"), pool) == terms({"b(a(c),d,a,d)"}));
    CHECK(parallel_step(t, UpdateRule::with_type(UpdateKind::InsLast, "a", "p"), pool) == terms({"b(a(c,d),a(d))"}));
    CHECK(parallel_step(t, UpdateRule::with_type(UpdateKind::InsInto, "a", "p"), pool) ==
          terms({"b(a(d,c),a(d))", "b(a(c,d),a(d))"}));
    CHECK(parallel_step(parse_term("a(b,c)"), UpdateRule::with_type(UpdateKind::InsInto, "a", "p"), pool).size() == 3);
    CHECK(parallel_step(parse_term("a(b,c)"), UpdateRule::with_type(UpdateKind::InsInto, "a", "p"), pool,
                        InsIntoMode::Last) == terms({"a(b,c,d)"}));
    CHECK(parallel_step(parse_term("a(b,c)"), UpdateRule::with_type(UpdateKind::InsInto, "a", "p"), pool,
                        InsIntoMode::First) == terms({"a(d,b,c)"}));
}

TEST_CASE("root handling", "[rewrite]") {
    const auto pool = pool_of("p", {"d"});
    CHECK(parallel_step(parse_term("a(a)"), UpdateRule::del("a"), pool) == terms({"a"}));
    CHECK(parallel_step(parse_term("a"), UpdateRule::with_type(UpdateKind::InsBefore, "a", "p"), pool) ==
          terms({"a"}));
    CHECK(parallel_step(parse_term("a"), UpdateRule::with_type(UpdateKind::InsAfter, "a", "p"), pool) ==
          terms({"a"}));
    CHECK(parallel_step(parse_term("a(a)"), UpdateRule::with_type(UpdateKind::Rpl, "a", "p"), pool) == terms({"d"}));
}

TEST_CASE("nested deletion removes descendants", "[rewrite]") {
    CHECK(parallel_step(parse_term("b(a(a))"), UpdateRule::del("a"), {}) == terms({"b"}));
    CHECK(parallel_step(parse_term("b(a(c,a),c)"), UpdateRule::del("a"), {}) == terms({"b(c)"}));
}

TEST_CASE("no target means identity", "[rewrite]") {
    const auto pool = pool_of("p", {"d", "e"});
    const Tree t = parse_term("b(c)");
    for (UpdateKind k : kAllKinds) {
        CHECK(parallel_step(t, rule_of(k, "a"), pool) == terms({"b(c)"}));
    }
}

TEST_CASE("empty pools are errors", "[rewrite]") {
    for (UpdateKind k : kAllKinds) {
        if (!needs_type_state(k)) {
            continue;
        }
        try {
            (void)parallel_step(parse_term("b"), rule_of(k, "a"), {});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::EmptyPool);
        }
    }
}

TEST_CASE("malformed rules are rejected", "[rewrite]") {
    UpdateRule bad{UpdateKind::Del, "a", std::nullopt, std::string("p")};
    CHECK_THROWS_AS(bad.validate(), Error);
    UpdateRule ren_without{UpdateKind::Ren, "a", std::nullopt, std::nullopt};
    CHECK_THROWS_AS(ren_without.validate(), Error);
    UpdateRule ins_without{UpdateKind::InsFirst, "a", std::nullopt, std::nullopt};
    CHECK_THROWS_AS(ins_without.validate(), Error);
}

TEST_CASE("scripts fold over the rules", "[rewrite]") {
    const HedgeAutomaton types = sample("paper/types.ha");
    const UpdateScript s = parse_updates(slurp(std::string(HASA_SAMPLES_DIR) + "/paper/script.upd"), types);
    const Tree t = parse_term("a(b,b,c)");
    const auto out = apply_script(t, s, 4);
    CHECK(out.contains(parse_term("a(a,a,a(b(d)),c(a(b(d))))")));
    for (const Tree& x : out) {
        INFO(print_term(x));
        CHECK(x.children.size() == 4);
        CHECK(x.children[3].label == "c");
        CHECK(x.children[3].children.size() == 1);
        CHECK(x.children[2].label == "a");
    }

    UpdateScript empty{{}, types};
    CHECK(apply_script(t, empty, 3) == std::set<Tree>{t});
}

TEST_CASE("post oracle on small languages", "[rewrite]") {
    const HedgeAutomaton doc = sample("paper/doc.ha");
    UpdateScript empty{{}, HedgeAutomaton("types")};
    CHECK(post_oracle(doc, empty, 4, 3) == enumerate(doc, 4));

    const HedgeAutomaton ba = parse_ha("automaton ba\nalphabet a b\nstates q r\nfinal q\nrule b (r) -> q\n"
                                       "rule a () -> r\n");
    UpdateScript del{{UpdateRule::del("a")}, HedgeAutomaton("types")};
    CHECK(post_oracle(ba, del, 4, 3) == terms({"b"}));
}

TEST_CASE("rewriting properties on random trees", "[rewrite][property]") {
    testing::Rng rng(61);
    const std::vector<Label> labels{"a", "b", "c"};
    const auto singleton = pool_of("p", {"d(e)"});
    const auto pair = pool_of("p", {"d", "e(d)"});
    for (int i = 0; i < 150; ++i) {
        const Tree t = testing::random_tree(rng, labels, 8);
        INFO(print_term(t));
        const std::size_t a_count = count_label(t, "a");
        const bool root_a = t.label == "a";

        for (const Tree& x : parallel_step(t, UpdateRule::ren("a", "b"), singleton)) {
            CHECK_FALSE(has_label(x, "a"));
        }
        for (const Tree& x : parallel_step(t, UpdateRule::del("a"), singleton)) {
            CHECK(count_label(x, "a") == (root_a ? 1u : 0u));
        }
        for (const Tree& x : parallel_step(t, UpdateRule::with_type(UpdateKind::InsFirst, "a", "p"), singleton)) {
            CHECK(count_label(x, "d") == a_count);
        }
        for (UpdateKind k : kAllKinds) {
            if (k != UpdateKind::InsInto) {
                CHECK(parallel_step(t, rule_of(k, "a"), singleton).size() == 1);
            }
            for (InsIntoMode mode : {InsIntoMode::Anywhere, InsIntoMode::First, InsIntoMode::Last}) {
                CHECK(parallel_step(t, rule_of(k, "a"), pair, mode) ==
                      testing::splice_step(t, rule_of(k, "a"), pair, mode));
            }
        }
    }
}

TEST_CASE("successive deletions commute", "[rewrite][property]") {
    testing::Rng rng(67);
    const std::vector<Label> labels{"a", "b", "c"};
    auto apply = [](const std::set<Tree>& in, const UpdateRule& r) {
        std::set<Tree> out;
        for (const Tree& x : in) {
            auto s = parallel_step(x, r, {});
            out.insert(s.begin(), s.end());
        }
        return out;
    };
    for (int i = 0; i < 50; ++i) {
        const Tree t = testing::random_tree(rng, labels, 8);
        const auto ab = apply(apply({t}, UpdateRule::del("a")), UpdateRule::del("b"));
        const auto ba = apply(apply({t}, UpdateRule::del("b")), UpdateRule::del("a"));
        CHECK(ab == ba);
    }
}
