#pragma once

#include <stdexcept>
#include <string>

namespace bcasc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroVectorError : Error {
    ZeroVectorError() : Error("cannot normalize a (near-)zero vector") {}
};

struct TooFewCodewordsError : Error {
    TooFewCodewordsError() : Error("coherence requires at least two codewords") {}
};

struct CoincidentCodewordsError : Error {
    explicit CoincidentCodewordsError(const std::string& what) : Error(what) {}
};

struct OrderTooLargeError : Error {
    explicit OrderTooLargeError(const std::string& what) : Error(what) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

struct LengthMismatchError : Error {
    LengthMismatchError() : Error("neighbor lists have different lengths") {}
};

struct InsufficientCandidatesError : Error {
    explicit InsufficientCandidatesError(const std::string& what) : Error(what) {}
};

struct CoincidentRotationError : Error {
    explicit CoincidentRotationError(const std::string& what) : Error(what) {}
};

struct DegenerateForceError : Error {
    DegenerateForceError() : Error("aggregate force vanished (norm below representable range)") {}
};

struct EmptyNeighborhoodError : Error {
    EmptyNeighborhoodError() : Error("force requested over an empty neighbor set") {}
};

struct DegenerateSeedError : Error {
    explicit DegenerateSeedError(const std::string& what) : Error(what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace bcasc
