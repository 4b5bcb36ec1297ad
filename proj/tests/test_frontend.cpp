#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "hasa/dtd.hpp"
#include "hasa/ha_format.hpp"
#include "hasa/update_format.hpp"
#include "hasa/xml.hpp"
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

std::string sample_text(const std::string& name) { return slurp(std::string(HASA_SAMPLES_DIR) + "/" + name); }

std::set<Tree> accepted_up_to(const HedgeAutomaton& a, const std::vector<Label>& labels, std::size_t n) {
    std::set<Tree> out;
    testing::TreeUniverse universe(labels);
    for (const Tree& t : universe.up_to(n)) {
        if (accepts(a, t)) {
            out.insert(t);
        }
    }
    return out;
}

template <class F>
ErrorKind kind_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

} // namespace

// ---------------------------------------------------------------------------
// native automaton format

TEST_CASE("the native format parses regex and nfa bodies", "[frontend][ha]") {
    const HedgeAutomaton a = parse_ha("automaton demo\n"
                                      "alphabet a b c\n"
                                      "states q1 q2\n"
                                      "final q1\n"
                                      "rule a (q2* q1 | q2+) -> q1\n"
                                      "rule b () -> q2\n"
                                      "rule c -> q1 nfa { start s0; final s1; s0 q2 s1; s1 eps s0; }\n");
    CHECK(a.name() == "demo");
    CHECK(accepts(a, parse_term("c(b)")));
    CHECK(accepts(a, parse_term("c(b,b)")));
    CHECK_FALSE(accepts(a, parse_term("c")));
    CHECK(accepts(a, parse_term("a(b,c(b))")));
    CHECK(accepts(a, parse_term("a(b)")));
    CHECK_FALSE(accepts(a, parse_term("a")));
    CHECK(accepts(a, parse_term("a(a(b))")));
}

TEST_CASE("regex operators over state tokens", "[frontend][ha]") {
    const HedgeAutomaton a = parse_ha("automaton ops\nalphabet r x y\nstates f p q\nfinal f\n"
                                      "rule r ((p q)? p* | q+ p) -> f\nrule x () -> p\nrule y () -> q\n");
    auto ok = [&](const char* t) { return accepts(a, parse_term(t)); };
    CHECK(ok("r"));
    CHECK(ok("r(x,y)"));
    CHECK(ok("r(x,y,x,x)"));
    CHECK(ok("r(x,x)"));
    CHECK(ok("r(y,y,x)"));
    CHECK_FALSE(ok("r(y)"));
    CHECK_FALSE(ok("r(y,x,y)"));
}

TEST_CASE("print and parse round-trip the paper automata", "[frontend][ha]") {
    for (const char* name : {"paper/doc.ha", "paper/types.ha", "paper/pool.ha", "boolean.ha"}) {
        const HedgeAutomaton a = parse_ha(sample_text(name));
        const HedgeAutomaton b = parse_ha(print_ha(a));
        INFO(name);
        CHECK(b.name() == a.name());
        CHECK(b.state_names() == a.state_names());
        CHECK(b.finals() == a.finals());
        std::vector<Label> labels(a.alphabet().begin(), a.alphabet().end());
        CHECK(accepted_up_to(a, labels, 5) == accepted_up_to(b, labels, 5));
    }
}

TEST_CASE("random automata survive a round trip", "[frontend][ha][property]") {
    testing::Rng rng(83);
    testing::AutomatonShape shape;
    shape.labels = {"a", "b"};
    shape.states = 4;
    shape.rules = 6;
    shape.nfa.epsilon_probability = 0.2;
    for (int i = 0; i < 100; ++i) {
        const HedgeAutomaton a = testing::random_automaton(rng, shape);
        const HedgeAutomaton b = parse_ha(print_ha(a));
        CHECK(enumerate(a, 5) == enumerate(b, 5));
    }
}

TEST_CASE("automata without rules are empty", "[frontend][ha]") {
    const HedgeAutomaton a = parse_ha("automaton none\nalphabet a\nstates q\nfinal q\n");
    CHECK(a.rules().empty());
    CHECK(enumerate(a, 4).empty());
}

TEST_CASE("native format errors", "[frontend][ha]") {
    CHECK(kind_of([] { parse_ha("automaton x\nalphabet a\nstates q\nrule a () -> r\n"); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { parse_ha("automaton x\nalphabet a\nstates q\nrule b () -> q\n"); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { parse_ha("automaton x\nalphabet a\nstates q\nrule a (q -> q\n"); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { parse_ha("automaton x\nalphabet a\nstates q\nfinal z\n"); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { parse_ha("bogus\n"); }) == ErrorKind::Syntax);
    try {
        (void)parse_ha("automaton x\nalphabet a\nstates q\nrule a (q r) -> q\n");
        FAIL("expected an error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 11);
    }
}

TEST_CASE("duplicate rules are merged with a warning", "[frontend][ha]") {
    Diagnostics diag;
    const HedgeAutomaton a = parse_ha("automaton x\nalphabet a b\nstates q r\nfinal q\n"
                                      "rule a (r) -> q\nrule a () -> q\nrule b () -> r\n",
                                      &diag);
    CHECK(diag.warnings.size() == 1);
    CHECK(accepts(a, parse_term("a")));
    CHECK(accepts(a, parse_term("a(b)")));
}

// ---------------------------------------------------------------------------
// DTD subset

TEST_CASE("an EMPTY root accepts only itself", "[frontend][dtd]") {
    const HedgeAutomaton a = compile_dtd(parse_dtd("<!ELEMENT a EMPTY>"));
    CHECK(accepted_up_to(a, {"a"}, 3) == std::set<Tree>{parse_term("a")});
}

TEST_CASE("a DTD for the paper document language", "[frontend][dtd]") {
    const HedgeAutomaton dtd = compile_dtd(parse_dtd("<!ELEMENT a (b*, c?)>\n<!ELEMENT b EMPTY>\n<!ELEMENT c EMPTY>\n"));
    const HedgeAutomaton doc = parse_ha(sample_text("paper/doc.ha"));
    CHECK(accepted_up_to(dtd, {"a", "b", "c"}, 5) == accepted_up_to(doc, {"a", "b", "c"}, 5));
    CHECK(dtd.finals() == std::set<StateId>{dtd.state("q_a")});
    for (const auto& [key, nfa] : dtd.rules()) {
        CHECK_FALSE(nfa.has_epsilon());
    }
}

TEST_CASE("DTD content models agree with a direct validator", "[frontend][dtd][property]") {
    const char* text = "<!DOCTYPE r [\n"
                       "<!ELEMENT r (a | (b, c)+)*>\n"
                       "<!ELEMENT a (b?, c*)>\n"
                       "<!ELEMENT b ANY>\n"
                       "<!ELEMENT c EMPTY>\n"
                       "]>\n";
    const DtdSchema s = parse_dtd(text);
    CHECK(s.root == "r");
    const HedgeAutomaton a = compile_dtd(s);
    testing::Rng rng(89);
    const std::vector<Label> labels{"r", "a", "b", "c"};
    int accepted = 0;
    for (int i = 0; i < 400; ++i) {
        Tree t = testing::random_tree(rng, labels, 8);
        if (i % 2 == 0) {
            t.label = "r";
        }
        const bool expected = testing::dtd_valid(s, t);
        accepted += expected ? 1 : 0;
        INFO(print_term(t));
        CHECK(accepts(a, t) == expected);
    }
    CHECK(accepted > 5);
}

TEST_CASE("DTD declarations that are skipped or rejected", "[frontend][dtd]") {
    Diagnostics diag;
    const DtdSchema s = parse_dtd("<?xml version=\"1.0\"?>\n<!-- note -->\n<!ELEMENT a (#PCDATA | b)*>\n"
                                  "<!ATTLIST a id CDATA #IMPLIED>\n<!ENTITY e \"x\">\n<!ELEMENT b EMPTY>\n",
                                  {}, &diag);
    CHECK(diag.warnings.size() == 1);
    const HedgeAutomaton a = compile_dtd(s);
    CHECK(accepts(a, parse_term("a(b,b)")));
    CHECK(accepts(a, parse_term("a")));

    DtdOptions strict;
    strict.strict = true;
    CHECK(kind_of([&] { parse_dtd("<!ELEMENT a (#PCDATA)>", strict); }) == ErrorKind::Syntax);
    CHECK(kind_of([] { parse_dtd("<!ELEMENT a EMPTY>\n<!ELEMENT a ANY>"); }) == ErrorKind::DuplicateDeclaration);
    CHECK(kind_of([] { compile_dtd(parse_dtd("<!ELEMENT a (b)>")); }) == ErrorKind::UndeclaredElement);
    CHECK(kind_of([] { parse_dtd("<!ELEMENT a (b,>"); }) == ErrorKind::Syntax);
}

TEST_CASE("the auction schemas compile", "[frontend][dtd]") {
    const DtdSchema v1 = parse_dtd(sample_text("auction/auction.dtd"));
    const DtdSchema v2 = parse_dtd(sample_text("auction/auction_v2.dtd"));
    CHECK(v1.root == "site");
    CHECK(v1.elements.size() >= 70);
    CHECK(v2.elements.size() >= 70);
    const HedgeAutomaton a = compile_dtd(v1);
    const auto w = is_empty(a);
    REQUIRE(w);
    CHECK(testing::dtd_valid(v1, *w));
}

// ---------------------------------------------------------------------------
// update scripts

TEST_CASE("update scripts", "[frontend][updates]") {
    const HedgeAutomaton types = parse_ha(sample_text("paper/types.ha"));
    const UpdateScript s = parse_updates(sample_text("paper/script.upd"), types);
    REQUIRE(s.rules.size() == 3);
    CHECK(s.rules[0] == UpdateRule::ren("b", "a"));
    CHECK(s.rules[1] == UpdateRule::with_type(UpdateKind::InsFirst, "c", "g_a"));
    CHECK(s.rules[2] == UpdateRule::with_type(UpdateKind::InsBefore, "c", "g_a"));
    CHECK(parse_updates(print_updates(s), types).rules == s.rules);

    CHECK(parse_updates("", types).rules.empty());
    CHECK(parse_updates("# only a comment\n\n", types).rules.empty());

    const UpdateScript all = parse_updates("ren a -> b\nins_first a <- g_a\nins_last a <- g_a\n"
                                           "ins_into a <- g_a\nins_before a <- g_a\nins_after a <- g_a\n"
                                           "rpl a <- g_a\ndel a  # trailing comment\n",
                                           types);
    CHECK(all.rules.size() == 8);
    CHECK(all.rules.back() == UpdateRule::del("a"));
}

TEST_CASE("update script errors", "[frontend][updates]") {
    const HedgeAutomaton types = parse_ha(sample_text("paper/types.ha"));
    CHECK(kind_of([&] { parse_updates("del a <- g_a", types); }) == ErrorKind::Syntax);
    CHECK(kind_of([&] { parse_updates("ren a <- g_a", types); }) == ErrorKind::Syntax);
    CHECK(kind_of([&] { parse_updates("move a -> b", types); }) == ErrorKind::Syntax);
    CHECK(kind_of([&] { parse_updates("ins_first a", types); }) == ErrorKind::Syntax);
    CHECK(kind_of([&] { parse_updates("ins_first a <- nope", types); }) == ErrorKind::UnknownTypeState);
    try {
        (void)parse_updates("del a\nmove a -> b\n", types);
        FAIL("expected an error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 1);
    }
}

// ---------------------------------------------------------------------------
// XML skeletons

TEST_CASE("XML element skeletons", "[frontend][xml]") {
    CHECK(print_term(read_xml("<a><b/><c/></a>")) == "a(b,c)");
    CHECK(print_term(read_xml("<?xml version=\"1.0\"?>\n<!-- c --><a>\n  <b/>\n</a>\n")) == "a(b)");

    Diagnostics diag;
    CHECK(print_term(read_xml("<a x=\"1\"><b>hi</b></a>", {}, &diag)) == "a(b)");
    CHECK(diag.warnings.size() == 2);

    XmlOptions strict;
    strict.strict = true;
    CHECK(kind_of([&] { read_xml("<a x=\"1\"/>", strict); }) == ErrorKind::NonElementContent);
    CHECK(kind_of([&] { read_xml("<a>text</a>", strict); }) == ErrorKind::NonElementContent);
    CHECK(kind_of([] { read_xml("<a><b></a>"); }) == ErrorKind::MalformedXml);
    CHECK(kind_of([] { read_xml(""); }) == ErrorKind::MalformedXml);
    CHECK(kind_of([] { read_xml("<a/><b/>"); }) == ErrorKind::MalformedXml);

    CHECK(print_term(read_xml(sample_text("paper/t42.xml"))) == "b(c,d(c(a),a))");
}

TEST_CASE("writing and reading XML is the identity", "[frontend][xml][property]") {
    testing::Rng rng(97);
    const std::vector<Label> labels{"a", "b-1", "c.d", "e_f"};
    for (int i = 0; i < 100; ++i) {
        const Tree t = testing::random_tree(rng, labels, 12);
        CHECK(read_xml(write_xml(t)) == t);
    }
}
