#ifndef HASA_XML_HPP
#define HASA_XML_HPP

#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "hasa/error.hpp"
#include "hasa/syntax.hpp"
#include "hasa/tree.hpp"

namespace hasa {

struct XmlOptions {
    bool strict = false; // attributes and text are errors instead of warnings
};

namespace detail {

inline Tree element_skeleton(const std::string& name, const boost::property_tree::ptree& node,
                             const XmlOptions& opts, Diagnostics* diag) {
    if (!is_valid_label(name)) {
        throw Error(ErrorKind::MalformedXml, "element name '" + name + "' is not a valid label");
    }
    auto skipped = [&](const std::string& what) {
        const std::string message = what + " in <" + name + ">";
        if (opts.strict) {
            throw Error(ErrorKind::NonElementContent, message);
        }
        if (diag != nullptr) {
            diag->warn(message + " ignored");
        }
    };
    Tree out(name);
    if (!node.data().empty()) {
        skipped("text content");
    }
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>") {
            for (const auto& attr : child) {
                skipped("attribute '" + attr.first + "'");
            }
        } else if (key == "<xmlcomment>") {
            continue;
        } else {
            out.children.push_back(element_skeleton(key, child, opts, diag));
        }
    }
    return out;
}

} // namespace detail

/// Element skeleton of an XML document: element names become labels and
/// child elements become children. Comments, processing instructions and
/// the declaration are skipped silently; attributes and text produce a
/// warning, or an error in strict mode.
inline Tree read_xml(std::string_view text, const XmlOptions& opts = {}, Diagnostics* diag = nullptr) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    std::istringstream in{std::string(text)};
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw Error(ErrorKind::MalformedXml, std::to_string(e.line()) + ": " + e.message());
    }
    const pt::ptree::value_type* root = nullptr;
    for (const auto& entry : doc) {
        if (entry.first == "<xmlcomment>") {
            continue;
        }
        if (root != nullptr) {
            throw Error(ErrorKind::MalformedXml, "more than one root element");
        }
        root = &entry;
    }
    if (root == nullptr) {
        throw Error(ErrorKind::MalformedXml, "no root element");
    }
    return detail::element_skeleton(root->first, root->second, opts, diag);
}

namespace detail {

inline void write_element(const Tree& t, std::size_t depth, std::string& out) {
    out.append(2 * depth, ' ');
    if (t.children.empty()) {
        out += "<" + t.label + "/>\n";
        return;
    }
    out += "<" + t.label + ">\n";
    for (const Tree& c : t.children) {
        write_element(c, depth + 1, out);
    }
    out.append(2 * depth, ' ');
    out += "</" + t.label + ">\n";
}

} // namespace detail

/// Nested empty elements, two-space indentation.
inline std::string write_xml(const Tree& t) {
    std::string out;
    detail::write_element(t, 0, out);
    return out;
}

} // namespace hasa

#endif // HASA_XML_HPP
