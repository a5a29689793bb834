#pragma once

#include <stdexcept>
#include <string>

namespace agentroute {

// Base for every error thrown by the library. Subtypes exist so the CLI can
// map them onto stable exit codes (config=1, data=2, provider=3).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (JSON syntax, wrong shape). Message carries the
// file/record locus.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates a catalog/benchmark invariant
// (duplicate id, dangling owner, empty name). Message names the record.
struct ValidationError : Error {
    using Error::Error;
};

// A ranked-list item that does not belong to the catalog.
struct UnknownEntity : Error {
    using Error::Error;
};

struct EmptyCorpus : Error {
    using Error::Error;
};

// Fusing ranked lists built over different corpus scopes.
struct ScopeMismatch : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct CredentialMissing : Error {
    using Error::Error;
};

// Embedding provider failure after retries. Carries the last HTTP status
// (0 for transport errors) and the number of attempts made.
struct ProviderError : Error {
    ProviderError(const std::string& msg, int status, int attempts)
        : Error(msg), http_status(status), attempts(attempts) {}
    int http_status = 0;
    int attempts = 0;
};

struct EmptyRelevantSet : Error {
    using Error::Error;
};

// Benchmark references an agent/tool id absent from the catalog.
struct DanglingReference : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace agentroute
