#ifndef FLAB_ERRORS_HPP
#define FLAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flab {

// Base for all library errors. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text; carries a byte offset into the source string.
struct ParseError : Error {
    std::size_t position;
    ParseError(std::string msg, std::size_t pos)
        : Error(std::move(msg) + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Signature-level problems: duplicate names, undeclared symbols, arity mismatches.
struct SignatureError : Error {
    using Error::Error;
};

// A sequence of structures failed the substructure chain condition.
struct ChainError : Error {
    std::size_t link;  // index i where A_i ⊆ A_{i+1} fails
    ChainError(std::string msg, std::size_t i)
        : Error(std::move(msg) + " (link " + std::to_string(i) + ")"), link(i) {}
};

// Caller violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// A desk-scale search or enumeration exceeded its configured guard.
struct GuardExceeded : Error {
    using Error::Error;
};

// Misuse distinct from semantic undefinedness (e.g. unassigned variable).
struct UsageError : Error {
    using Error::Error;
};

}  // namespace flab

#endif
