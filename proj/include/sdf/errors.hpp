#pragma once

#include <stdexcept>
#include <string>

namespace sdf {

// Base for all pipeline errors. `kind()` is stable and machine-readable;
// the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct FileNotFoundError : Error {
    explicit FileNotFoundError(const std::string& path)
        : Error("FileNotFound", "file not found: " + path) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

struct MalformedRecordError : Error {
    MalformedRecordError(std::size_t line, const std::string& reason)
        : Error("MalformedRecord",
                "line " + std::to_string(line) + ": " + reason),
          line(line), reason(reason) {}
    std::size_t line;
    std::string reason;
};

struct DuplicateIdError : Error {
    explicit DuplicateIdError(const std::string& id)
        : Error("DuplicateId", "duplicate record id: " + id) {}
};

struct DimensionMismatchError : Error {
    DimensionMismatchError(std::size_t expected, std::size_t got)
        : Error("DimensionMismatch",
                "expected dimension " + std::to_string(expected) + ", got " +
                    std::to_string(got)) {}
};

struct BackendUnavailableError : Error {
    explicit BackendUnavailableError(const std::string& msg)
        : Error("BackendUnavailable", msg) {}
};

struct BackendProtocolError : Error {
    explicit BackendProtocolError(const std::string& msg)
        : Error("BackendProtocol", msg) {}
};

struct InsufficientSamplesError : Error {
    explicit InsufficientSamplesError(std::size_t n)
        : Error("InsufficientSamples",
                "need at least 2 scores, got " + std::to_string(n)) {}
};

struct MissingScoreError : Error {
    explicit MissingScoreError(const std::string& id)
        : Error("MissingScore", "record " + id + " lacks the gated score") {}
};

struct EmptyCandidateSetError : Error {
    EmptyCandidateSetError()
        : Error("EmptyCandidateSet", "no generated candidates to score") {}
};

struct MisalignedCorpusError : Error {
    explicit MisalignedCorpusError(const std::string& msg)
        : Error("MisalignedCorpus", msg) {}
};

struct CorpusTooSmallError : Error {
    explicit CorpusTooSmallError(const std::string& msg)
        : Error("CorpusTooSmall", msg) {}
};

struct MissingBoxError : Error {
    explicit MissingBoxError(const std::string& id)
        : Error("MissingBox", "record " + id + " lacks a 3D box") {}
};

struct ConfigInvalidError : Error {
    explicit ConfigInvalidError(const std::string& msg)
        : Error("ConfigInvalid", msg) {}
};

}  // namespace sdf
