#ifndef HASA_TOOLS_COMMANDS_HPP
#define HASA_TOOLS_COMMANDS_HPP

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hasa/hasa.hpp"

namespace hasa::cli {

enum ExitCode : int {
    kOk = 0,
    kViolates = 1,
    kParseError = 2,
    kResourceLimit = 3,
    kSemanticError = 4,
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::StateBudgetExceeded:
        case ErrorKind::DeadlineExceeded:
            return kResourceLimit;
        case ErrorKind::EmptyPool:
        case ErrorKind::UnknownTypeState:
        case ErrorKind::PositionNotInTree:
        case ErrorKind::RootReplacedByNonSingleton:
        case ErrorKind::SymbolNotInAlphabet:
            return kSemanticError;
        default:
            return kParseError;
    }
}

struct Globals {
    bool json = false;
    bool quiet = false;
    bool strict = false;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
}

inline std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

/// Loads a `.dtd` (compiled) or native `.ha` automaton. Errors are
/// prefixed with the file name.
inline HedgeAutomaton load_automaton(const std::string& path, const Globals& g, Diagnostics& diag) {
    const std::string text = read_file(path);
    try {
        if (path.ends_with(".dtd")) {
            return compile_dtd(parse_dtd(text, DtdOptions{g.strict}, &diag), file_stem(path));
        }
        return parse_ha(text, &diag);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ":" + e.what());
    }
}

inline UpdateScript load_updates(const std::string& path, const HedgeAutomaton& types) {
    try {
        return parse_updates(read_file(path), types);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) {
            throw;
        }
        throw Error(e.kind(), path + ":" + e.what());
    }
}

inline Tree load_xml(const std::string& path, const Globals& g, Diagnostics& diag) {
    try {
        return read_xml(read_file(path), XmlOptions{g.strict}, &diag);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) {
            throw;
        }
        throw Error(e.kind(), path + ":" + e.what());
    }
}

inline std::optional<InsIntoMode> parse_mode(const std::string& s) {
    if (s == "anywhere") {
        return InsIntoMode::Anywhere;
    }
    if (s == "first") {
        return InsIntoMode::First;
    }
    if (s == "last") {
        return InsIntoMode::Last;
    }
    return std::nullopt;
}

inline nlohmann::json stats_of(const HedgeAutomaton& a) {
    return {{"states", a.state_count()}, {"rules", a.rules().size()}, {"transitions", a.transition_count()}};
}

/// Labels targeted by root-excluding rules that a document root may carry.
inline std::vector<std::string> root_exclusion_warnings(const HedgeAutomaton& doc, const UpdateScript& s) {
    const auto productive = productive_states(doc);
    std::vector<std::string> out;
    for (const UpdateRule& r : s.rules) {
        if (!excludes_root(r.kind)) {
            continue;
        }
        for (const auto& [key, nfa] : doc.rules_for(r.target)) {
            if (doc.is_final(key.second) && productive[key.second]) {
                out.push_back("'" + r.to_string() + "' does not apply at the document root, and " + r.target +
                              " may be the root");
                break;
            }
        }
    }
    return out;
}

inline std::size_t state_budget(std::optional<std::size_t> flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("HASA_STATE_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Syntax, "HASA_STATE_BUDGET is not a number: '" + std::string(env) + "'");
        }
    }
    return AlgebraOptions{}.state_budget;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Static analysis of XML document adaptation with hedge automata", "hasa"};
        app.require_subcommand(1);
        app.add_flag("--json", g_.json, "Machine-readable output");
        app.add_flag("--quiet", g_.quiet, "Only the exit code");
        app.add_flag("--strict", g_.strict, "Reject text, attributes and mixed content");

        auto* compile = app.add_subcommand("compile", "Compile a .dtd or .ha schema to a normalized .ha");
        std::string compile_in;
        std::optional<std::string> compile_out;
        compile->add_option("input", compile_in, "Schema (.dtd or .ha)")->required();
        compile->add_option("--out,-o", compile_out, "Output .ha (default: standard output)");

        auto* post = app.add_subcommand("post", "Compute the automaton of updated documents");
        std::string post_schema, post_types, post_updates, post_mode = "anywhere";
        std::optional<std::string> post_out;
        post->add_option("--schema", post_schema, "Document schema (.dtd or .ha)")->required();
        post->add_option("--types", post_types, "Types automaton for inserted material")->required();
        post->add_option("--updates", post_updates, "Update script (.upd)")->required();
        post->add_option("--out,-o", post_out, "Output .ha (default: standard output)");
        post->add_option("--ins-into-mode", post_mode, "anywhere|first|last")
            ->check(CLI::IsMember({"anywhere", "first", "last"}));

        auto* check = app.add_subcommand("check", "Check that updated documents conform to a target schema");
        std::string check_from, check_to, check_types, check_updates, check_mode = "anywhere";
        std::optional<std::size_t> check_budget;
        std::optional<std::string> check_ce_out;
        check->add_option("--from", check_from, "Source schema (.dtd or .ha)")->required();
        check->add_option("--to", check_to, "Target schema (.dtd or .ha)")->required();
        check->add_option("--types", check_types, "Types automaton for inserted material")->required();
        check->add_option("--updates", check_updates, "Update script (.upd)")->required();
        check->add_option("--ins-into-mode", check_mode, "anywhere|first|last")
            ->check(CLI::IsMember({"anywhere", "first", "last"}));
        check->add_option("--state-budget", check_budget, "Cap on subset states during complementation");
        check->add_option("--counterexample-out", check_ce_out, "Write the counterexample as XML");

        auto* member = app.add_subcommand("member", "Test a document against an automaton");
        std::string member_automaton, member_doc;
        bool member_trace = false;
        member->add_option("--automaton", member_automaton, "Automaton (.dtd or .ha)")->required();
        member->add_option("document", member_doc, "XML document")->required();
        member->add_flag("--trace", member_trace, "Print the state at each position of an accepting run");

        auto* rewrite = app.add_subcommand("rewrite", "Apply an update script to a document");
        std::string rewrite_types, rewrite_updates, rewrite_doc, rewrite_mode = "anywhere";
        std::size_t pool_bound = 3;
        std::size_t max_results = 100;
        bool rewrite_terms = false;
        rewrite->add_option("--types", rewrite_types, "Types automaton for inserted material")->required();
        rewrite->add_option("--updates", rewrite_updates, "Update script (.upd)")->required();
        rewrite->add_option("--pool-bound", pool_bound, "Maximum size of inserted instances")
            ->check(CLI::PositiveNumber);
        rewrite->add_option("--max-results", max_results, "Maximum number of results printed");
        rewrite->add_option("--ins-into-mode", rewrite_mode, "anywhere|first|last")
            ->check(CLI::IsMember({"anywhere", "first", "last"}));
        rewrite->add_flag("--terms", rewrite_terms, "Print results in term syntax instead of XML");
        rewrite->add_option("document", rewrite_doc, "XML document")->required();

        auto* enumerate_cmd = app.add_subcommand("enumerate", "List accepted trees up to a size");
        std::string enum_automaton;
        std::size_t max_nodes = 0;
        enumerate_cmd->add_option("--automaton", enum_automaton, "Automaton (.dtd or .ha)")->required();
        enumerate_cmd->add_option("--max-nodes", max_nodes, "Size bound")->required()->check(CLI::PositiveNumber);

        for (auto* sub : app.get_subcommands({})) {
            sub->fallthrough();
        }
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out_, err_);
            return code == 0 ? kOk : kParseError;
        }

        try {
            int code = kOk;
            if (*compile) {
                code = cmd_compile(compile_in, compile_out);
            } else if (*post) {
                code = cmd_post(post_schema, post_types, post_updates, *parse_mode(post_mode), post_out);
            } else if (*check) {
                code = cmd_check(check_from, check_to, check_types, check_updates, *parse_mode(check_mode),
                                 check_budget, check_ce_out);
            } else if (*member) {
                code = cmd_member(member_automaton, member_doc, member_trace);
            } else if (*rewrite) {
                code = cmd_rewrite(rewrite_types, rewrite_updates, rewrite_doc, pool_bound, max_results,
                                   *parse_mode(rewrite_mode), rewrite_terms);
            } else if (*enumerate_cmd) {
                code = cmd_enumerate(enum_automaton, max_nodes);
            }
            flush_warnings();
            return code;
        } catch (const Error& e) {
            flush_warnings();
            return fail(exit_code_for(e.kind()), to_string(e.kind()), e.what());
        }
    }

    /// Wall-clock time of the last `check`, excluding argument parsing.
    std::chrono::duration<double> last_check_time{};

private:
    int fail(int code, const std::string& kind, const std::string& message) {
        if (g_.json) {
            out_ << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump(2) << "\n";
        } else {
            err_ << "hasa: " << kind << ": " << message << "\n";
        }
        return code;
    }

    void flush_warnings() {
        if (!g_.quiet) {
            for (const auto& w : diag_.warnings) {
                err_ << "warning: " << w << "\n";
            }
        }
        diag_.warnings.clear();
    }

    bool human() const { return !g_.json && !g_.quiet; }

    int cmd_compile(const std::string& in, const std::optional<std::string>& out_path) {
        const HedgeAutomaton a = load_automaton(in, g_, diag_);
        const std::string text = print_ha(a);
        if (out_path) {
            write_file(*out_path, text);
        }
        if (g_.json) {
            out_ << nlohmann::json{{"automaton", a.name()}, {"stats", stats_of(a)}}.dump(2) << "\n";
        } else if (!out_path && !g_.quiet) {
            out_ << text;
        }
        return kOk;
    }

    int cmd_post(const std::string& schema, const std::string& types_path, const std::string& updates,
                 InsIntoMode mode, const std::optional<std::string>& out_path) {
        const HedgeAutomaton doc = load_automaton(schema, g_, diag_);
        const HedgeAutomaton types = load_automaton(types_path, g_, diag_);
        const UpdateScript script = load_updates(updates, types);
        for (auto& w : root_exclusion_warnings(doc, script)) {
            diag_.warn(std::move(w));
        }
        const HedgeAutomaton result = post_script(doc, script, mode);
        const std::string text = print_ha(result);
        if (out_path) {
            write_file(*out_path, text);
        }
        if (g_.json) {
            out_ << nlohmann::json{{"automaton", result.name()},
                                   {"stats", {{"schema", stats_of(doc)}, {"post", stats_of(result)}}}}
                        .dump(2)
                 << "\n";
        } else if (!out_path && !g_.quiet) {
            out_ << text;
        }
        return kOk;
    }

    int cmd_check(const std::string& from, const std::string& to, const std::string& types_path,
                  const std::string& updates, InsIntoMode mode, std::optional<std::size_t> budget,
                  const std::optional<std::string>& ce_out) {
        using clock = std::chrono::steady_clock;
        const auto t0 = clock::now();
        const HedgeAutomaton source = load_automaton(from, g_, diag_);
        const HedgeAutomaton target = load_automaton(to, g_, diag_);
        const HedgeAutomaton types = load_automaton(types_path, g_, diag_);
        const UpdateScript script = load_updates(updates, types);
        for (auto& w : root_exclusion_warnings(source, script)) {
            diag_.warn(std::move(w));
        }
        const auto t1 = clock::now();
        const HedgeAutomaton post = post_script(source, script, mode);
        const auto t2 = clock::now();

        AlgebraOptions opts;
        opts.state_budget = state_budget(budget);
        std::string verdict = "conforms";
        std::optional<Tree> counterexample;
        std::string limit_message;
        try {
            InclusionVerdict v = included(post, target, opts);
            if (!v.holds) {
                verdict = "violates";
                counterexample = std::move(v.counterexample);
                if (!counterexample || !accepts(post, *counterexample) || accepts(target, *counterexample)) {
                    throw std::logic_error("counterexample failed re-verification");
                }
            }
        } catch (const Error& e) {
            if (exit_code_for(e.kind()) != kResourceLimit) {
                throw;
            }
            verdict = "resource-limit";
            limit_message = e.what();
        }
        const auto t3 = clock::now();
        last_check_time = t3 - t0;

        if (counterexample && ce_out) {
            write_file(*ce_out, write_xml(*counterexample));
        }
        auto ms = [](auto d) { return std::chrono::duration<double, std::milli>(d).count(); };
        if (g_.json) {
            nlohmann::json report{
                {"verdict", verdict},
                {"counterexample", counterexample ? nlohmann::json(print_term(*counterexample)) : nlohmann::json()},
                {"timings_ms", {{"load", ms(t1 - t0)}, {"post", ms(t2 - t1)}, {"inclusion", ms(t3 - t2)}}},
                {"stats", {{"source", stats_of(source)}, {"post", stats_of(post)}, {"target", stats_of(target)}}},
                {"state_budget", opts.state_budget},
            };
            if (!limit_message.empty()) {
                report["message"] = limit_message;
            }
            out_ << report.dump(2) << "\n";
        } else if (human()) {
            out_ << verdict << "\n";
            if (counterexample) {
                out_ << "counterexample: " << print_term(*counterexample) << "\n";
            }
            if (!limit_message.empty()) {
                out_ << limit_message << "\n";
            }
            out_ << "post: " << post.state_count() << " states, " << post.rules().size() << " rules, "
                 << post.transition_count() << " transitions\n";
            out_ << "time: load " << ms(t1 - t0) << " ms, post " << ms(t2 - t1) << " ms, inclusion "
                 << ms(t3 - t2) << " ms\n";
        }
        if (verdict == "violates") {
            return kViolates;
        }
        return verdict == "resource-limit" ? kResourceLimit : kOk;
    }

    int cmd_member(const std::string& automaton, const std::string& doc_path, bool trace) {
        const HedgeAutomaton a = load_automaton(automaton, g_, diag_);
        const Tree doc = load_xml(doc_path, g_, diag_);
        const auto computation = run_automaton(a, doc);
        if (g_.json) {
            nlohmann::json report{{"accepted", computation.has_value()}};
            if (computation && trace) {
                report["trace"] = trace_json(a, doc, *computation);
            }
            out_ << report.dump(2) << "\n";
        } else if (human()) {
            out_ << (computation ? "accepted" : "rejected") << "\n";
            if (computation && trace) {
                print_trace(a, doc, *computation, Position{}, 0);
            }
        }
        return computation ? kOk : kViolates;
    }

    static std::optional<Computation> run_automaton(const HedgeAutomaton& a, const Tree& t) { return hasa::run(a, t); }

    void print_trace(const HedgeAutomaton& a, const Tree& t, const Computation& c, const Position& at,
                     std::size_t depth) {
        out_ << std::string(2 * depth, ' ') << at.to_string() << ' ' << t.label << " : " << a.state_name(c.state)
             << "\n";
        for (std::uint32_t i = 0; i < t.children.size(); ++i) {
            print_trace(a, t.children[i], c.children[i], at.child(i + 1), depth + 1);
        }
    }

    static nlohmann::json trace_json(const HedgeAutomaton& a, const Tree& t, const Computation& c) {
        nlohmann::json node{{"label", t.label}, {"state", a.state_name(c.state)}};
        nlohmann::json kids = nlohmann::json::array();
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            kids.push_back(trace_json(a, t.children[i], c.children[i]));
        }
        node["children"] = std::move(kids);
        return node;
    }

    int cmd_rewrite(const std::string& types_path, const std::string& updates, const std::string& doc_path,
                    std::size_t pool_bound, std::size_t max_results, InsIntoMode mode, bool terms) {
        const HedgeAutomaton types = load_automaton(types_path, g_, diag_);
        const UpdateScript script = load_updates(updates, types);
        const Tree doc = load_xml(doc_path, g_, diag_);
        const auto results = apply_script(doc, script, pool_bound, mode);
        std::vector<std::string> texts;
        texts.reserve(results.size());
        for (const Tree& t : results) {
            texts.push_back(print_term(t));
        }
        std::sort(texts.begin(), texts.end());
        const std::size_t shown = std::min(max_results, texts.size());
        if (g_.json) {
            nlohmann::json list = nlohmann::json::array();
            for (std::size_t i = 0; i < shown; ++i) {
                list.push_back(texts[i]);
            }
            out_ << nlohmann::json{{"total", texts.size()}, {"results", list}}.dump(2) << "\n";
        } else if (human()) {
            for (std::size_t i = 0; i < shown; ++i) {
                if (terms) {
                    out_ << texts[i] << "\n";
                } else {
                    if (i > 0) {
                        out_ << "\n";
                    }
                    out_ << write_xml(parse_term(texts[i]));
                }
            }
            if (shown < texts.size()) {
                err_ << "note: " << texts.size() - shown << " more results not shown\n";
            }
        }
        return kOk;
    }

    int cmd_enumerate(const std::string& automaton, std::size_t max_nodes) {
        const HedgeAutomaton a = load_automaton(automaton, g_, diag_);
        std::vector<std::string> texts;
        for (const Tree& t : enumerate(a, max_nodes)) {
            texts.push_back(print_term(t));
        }
        std::sort(texts.begin(), texts.end());
        if (g_.json) {
            out_ << nlohmann::json{{"trees", texts}}.dump(2) << "\n";
        } else if (human()) {
            for (const auto& t : texts) {
                out_ << t << "\n";
            }
        }
        return kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    Globals g_;
    Diagnostics diag_;
};

/// Runs the command line `argv` with output directed to the given streams.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return Runner(out, err).run(argc, argv);
}

} // namespace hasa::cli

#endif // HASA_TOOLS_COMMANDS_HPP
