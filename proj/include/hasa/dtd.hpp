#ifndef HASA_DTD_HPP
#define HASA_DTD_HPP

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hasa/error.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/syntax.hpp"

namespace hasa {

/// Content model of one element declaration.
struct ContentModel {
    enum class Kind { Empty, Any, Children };
    Kind kind = Kind::Empty;
    syntax::Regex children; // Kind::Children only
};

/// Element declarations of a DTD subset. Attributes, entities and text
/// content are not modelled.
struct DtdSchema {
    Label root;
    std::vector<Label> order; // declaration order
    std::map<Label, ContentModel> elements;
};

struct DtdOptions {
    bool strict = false; // reject #PCDATA instead of dropping it
};

namespace detail {

inline bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' || c == '.' || c == ':';
}

class DtdParser {
public:
    DtdParser(std::string_view text, const DtdOptions& opts, Diagnostics* diag)
        : cur_(text, false), opts_(opts), diag_(diag) {}

    DtdSchema parse() {
        DtdSchema out;
        std::optional<Label> doctype;
        bool in_subset = false;
        while (true) {
            skip();
            if (cur_.at_end()) {
                break;
            }
            if (in_subset && cur_.consume("]")) {
                skip();
                cur_.expect(">");
                in_subset = false;
            } else if (cur_.consume("<?")) {
                skip_past("?>");
            } else if (cur_.consume("<!--")) {
                skip_past("-->");
            } else if (cur_.consume("<!DOCTYPE")) {
                skip();
                doctype = name("document type name");
                skip();
                if (!cur_.consume("[")) {
                    cur_.fail("expected '[' opening the internal subset");
                }
                in_subset = true;
            } else if (cur_.consume("<!ELEMENT")) {
                element(out);
            } else if (cur_.consume("<!ATTLIST") || cur_.consume("<!ENTITY") || cur_.consume("<!NOTATION")) {
                skip_declaration();
            } else {
                cur_.fail("expected a markup declaration");
            }
        }
        if (in_subset) {
            cur_.fail("unterminated DOCTYPE internal subset");
        }
        if (out.order.empty()) {
            cur_.fail("no element declarations");
        }
        out.root = doctype.value_or(out.order.front());
        return out;
    }

private:
    void skip() {
        while (!cur_.at_end() && std::isspace(static_cast<unsigned char>(cur_.peek())) != 0) {
            cur_.advance();
        }
    }

    void skip_past(std::string_view end) {
        while (!cur_.at_end() && !cur_.starts_with(end)) {
            cur_.advance();
        }
        cur_.expect(end);
    }

    void skip_declaration() {
        char quote = 0;
        while (!cur_.at_end()) {
            const char c = cur_.peek();
            cur_.advance();
            if (quote != 0) {
                quote = c == quote ? 0 : quote;
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                return;
            }
        }
        cur_.fail("unterminated declaration");
    }

    std::string name(const std::string& what) {
        std::string out;
        while (!cur_.at_end() && is_name_char(cur_.peek())) {
            out += cur_.peek();
            cur_.advance();
        }
        if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) != 0 || out.front() == '-' ||
            out.front() == '.') {
            cur_.fail("expected " + what);
        }
        return out;
    }

    void element(DtdSchema& out) {
        skip();
        Label label = name("element name");
        if (out.elements.contains(label)) {
            throw Error(ErrorKind::DuplicateDeclaration, "element '" + label + "' declared twice");
        }
        skip();
        ContentModel model;
        if (cur_.consume("EMPTY")) {
            model.kind = ContentModel::Kind::Empty;
        } else if (cur_.consume("ANY")) {
            model.kind = ContentModel::Kind::Any;
        } else if (cur_.peek() == '(') {
            model.kind = ContentModel::Kind::Children;
            auto token_char = [](char c) { return is_name_char(c) || c == '#'; };
            syntax::RegexParser parser(cur_, token_char, true, false);
            model.children = parser.parse();
            strip_pcdata(model.children, label);
        } else {
            cur_.fail("expected EMPTY, ANY or a content model");
        }
        skip();
        cur_.expect(">");
        out.order.push_back(label);
        out.elements.emplace(std::move(label), std::move(model));
    }

    void strip_pcdata(syntax::Regex& r, const Label& owner) {
        if (r.kind == syntax::Regex::Kind::Symbol && r.symbol == "#PCDATA") {
            if (opts_.strict) {
                cur_.fail_at(r.pos, "mixed content in '" + owner + "' is not supported");
            }
            if (diag_ != nullptr) {
                diag_->warn("text content of '" + owner + "' ignored");
            }
            r = syntax::Regex::epsilon();
            return;
        }
        if (r.kind == syntax::Regex::Kind::Symbol && r.symbol.front() == '#') {
            cur_.fail_at(r.pos, "unknown keyword '" + r.symbol + "'");
        }
        for (auto& item : r.items) {
            strip_pcdata(item, owner);
        }
    }

    syntax::Cursor cur_;
    DtdOptions opts_;
    Diagnostics* diag_;
};

inline void check_declared(const syntax::Regex& r, const DtdSchema& s, const Label& owner) {
    if (r.kind == syntax::Regex::Kind::Symbol && !s.elements.contains(r.symbol)) {
        throw Error(ErrorKind::UndeclaredElement,
                    "element '" + r.symbol + "' used in '" + owner + "' is not declared");
    }
    for (const auto& item : r.items) {
        check_declared(item, s, owner);
    }
}

} // namespace detail

inline DtdSchema parse_dtd(std::string_view text, const DtdOptions& opts = {}, Diagnostics* diag = nullptr) {
    return detail::DtdParser(text, opts, diag).parse();
}

/// State name used for element `e`.
inline std::string dtd_state(const Label& e) { return "q_" + e; }

/// One state per element, one rule per element, root state final.
inline HedgeAutomaton compile_dtd(const DtdSchema& s, const std::string& name = "dtd") {
    if (!s.elements.contains(s.root)) {
        throw Error(ErrorKind::UndeclaredElement, "root element '" + s.root + "' is not declared");
    }
    HedgeAutomaton out(name);
    for (const Label& e : s.order) {
        out.add_label(e);
        out.add_state(dtd_state(e));
    }
    for (const Label& e : s.order) {
        const ContentModel& m = s.elements.at(e);
        const StateId q = out.state(dtd_state(e));
        switch (m.kind) {
            case ContentModel::Kind::Empty:
                out.set_rule(e, q, HorizontalNfa::epsilon());
                break;
            case ContentModel::Kind::Any: {
                HorizontalNfa any = HorizontalNfa::epsilon();
                for (StateId p = 0; p < out.state_count(); ++p) {
                    any.add_transition(0, p, 0);
                }
                out.set_rule(e, q, any);
                break;
            }
            case ContentModel::Kind::Children:
                detail::check_declared(m.children, s, e);
                out.set_rule(e, q, syntax::to_nfa(m.children, [&](const syntax::Regex& sym) {
                                 return sym.kind == syntax::Regex::Kind::Symbol ? out.state(dtd_state(sym.symbol))
                                                                                : kEpsilon;
                             }));
                break;
        }
    }
    out.set_final(out.state(dtd_state(s.root)));
    return out;
}

} // namespace hasa

#endif // HASA_DTD_HPP
