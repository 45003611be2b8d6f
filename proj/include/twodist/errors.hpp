// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// data-shaped problems (bad files, bad references, broken graphs) exit 2,
// configuration and constraint problems exit 3.
#pragma once

#include <stdexcept>
#include <string>

namespace twodist {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A required column or field is missing from an input file.
struct SchemaError : Error {
    using Error::Error;
};

// A field failed to parse (non-numeric, malformed); message carries the row.
struct ParseError : Error {
    using Error::Error;
};

// Input values violate a data invariant (duplicate ids, nonpositive areas...).
struct DataError : Error {
    using Error::Error;
};

// An adjacency record or plan refers to a unit that does not exist.
struct ReferenceError : DataError {
    using DataError::DataError;
};

// Derived geometric quantities are unusable (nonpositive perimeter, flat bbox).
struct GeometryError : DataError {
    using DataError::DataError;
};

// The graph does not have the shape an operation requires (disconnected, ...).
struct StructureError : Error {
    using Error::Error;
};

// Border pruning disconnected the graph; message lists a cut-off component.
struct PruneError : StructureError {
    using StructureError::StructureError;
};

// Bad run configuration: impossible constraints, invalid seeds, empty inputs.
struct ConfigError : Error {
    using Error::Error;
};

// An input exceeds a documented hard cap (e.g. brute-force node limit).
struct SizeError : Error {
    using Error::Error;
};

// A metric or share is mathematically undefined for this input (0/0 cases).
struct DomainError : Error {
    using Error::Error;
};

// A plan sink threw; carries how many plans had been emitted before that.
struct SinkError : Error {
    std::uint64_t emitted;
    SinkError(const std::string& msg, std::uint64_t n)
        : Error(msg + " (after " + std::to_string(n) + " plans emitted)"), emitted(n) {}
};

}  // namespace twodist
