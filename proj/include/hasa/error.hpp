#ifndef HASA_ERROR_HPP
#define HASA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hasa {

enum class ErrorKind {
    PositionNotInTree,
    RootReplacedByNonSingleton,
    Syntax,
    SymbolNotInAlphabet,
    UnknownState,
    UnknownLabel,
    StateBudgetExceeded,
    DeadlineExceeded,
    EmptyPool,
    UnknownTypeState,
    UndeclaredElement,
    DuplicateDeclaration,
    MalformedXml,
    NonElementContent,
    InvalidRule,
    Io,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PositionNotInTree: return "position-not-in-tree";
        case ErrorKind::RootReplacedByNonSingleton: return "root-replaced-by-non-singleton";
        case ErrorKind::Syntax: return "syntax-error";
        case ErrorKind::SymbolNotInAlphabet: return "symbol-not-in-alphabet";
        case ErrorKind::UnknownState: return "unknown-state";
        case ErrorKind::UnknownLabel: return "unknown-label";
        case ErrorKind::StateBudgetExceeded: return "state-budget-exceeded";
        case ErrorKind::DeadlineExceeded: return "deadline-exceeded";
        case ErrorKind::EmptyPool: return "empty-pool";
        case ErrorKind::UnknownTypeState: return "unknown-type-state";
        case ErrorKind::UndeclaredElement: return "undeclared-element";
        case ErrorKind::DuplicateDeclaration: return "duplicate-declaration";
        case ErrorKind::MalformedXml: return "malformed-xml";
        case ErrorKind::NonElementContent: return "non-element-content";
        case ErrorKind::InvalidRule: return "invalid-rule";
        case ErrorKind::Io: return "io-error";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with a 1-based source location.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorKind::Syntax,
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace hasa

#endif // HASA_ERROR_HPP
