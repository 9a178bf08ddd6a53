#pragma once

#include <stdexcept>
#include <string>

namespace classifly {

enum class ErrorKind {
    InvalidArgument,
    Io,
    MalformedHeader,
    MalformedRow,
    MalformedFile,
    UnsortedInput,
    MixedAircraft,
    InvalidQ,
    EmptyGroup,
    EmptyValues,
    NoPosition,
    EmptyInput,
    DegenerateLabels,
    TooFewRows,
    TooFewSamples,
    ShapeMismatch,
    MalformedRegistry,
    MalformedModel,
    EmptyDataset,
    InvalidArchetype,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception type thrown by every module. The kind is stable and
/// machine-readable; the message carries the human context (paths, line
/// numbers, offending group).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace classifly
