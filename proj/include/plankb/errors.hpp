#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plankb {

/// Base of every recoverable failure raised by the library. The CLI maps
/// these to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PLANKB_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string &message) : Error(#Name, message) {} \
    };

/// Lexical or grammatical failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string &message)
        : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class TurtleSyntaxError : public Error {
public:
    TurtleSyntaxError(std::size_t line, std::size_t column, const std::string &message)
        : Error("TurtleSyntaxError",
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// pddl
PLANKB_DEFINE_ERROR(UnsupportedConstruct)
PLANKB_DEFINE_ERROR(ArityMismatch)
PLANKB_DEFINE_ERROR(UnknownPredicate)
PLANKB_DEFINE_ERROR(UnknownType)
PLANKB_DEFINE_ERROR(UnknownObject)

// strips
PLANKB_DEFINE_ERROR(DomainProblemMismatch)
PLANKB_DEFINE_ERROR(NotApplicable)
PLANKB_DEFINE_ERROR(UnknownAction)

// kg
PLANKB_DEFINE_ERROR(VariableInData)
PLANKB_DEFINE_ERROR(MappingError)
PLANKB_DEFINE_ERROR(UnknownDomain)
PLANKB_DEFINE_ERROR(UnknownQueryId)
PLANKB_DEFINE_ERROR(MissingQueryArgument)
PLANKB_DEFINE_ERROR(JsonSchemaError)

// planner selection
PLANKB_DEFINE_ERROR(InvalidRecord)
PLANKB_DEFINE_ERROR(NoCandidates)
PLANKB_DEFINE_ERROR(NoDataForDomain)

// macros
PLANKB_DEFINE_ERROR(NoPlansForDomain)
PLANKB_DEFINE_ERROR(UnknownSchema)
PLANKB_DEFINE_ERROR(ChainingViolation)
PLANKB_DEFINE_ERROR(TypeConflict)

#undef PLANKB_DEFINE_ERROR

} // namespace plankb
