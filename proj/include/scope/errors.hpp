#pragma once

#include <stdexcept>
#include <string>

namespace scope {

struct GenerationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoActionAvailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Remote adapter failures. RemoteUnavailable is retryable (connection refused,
// timeout, 5xx); MalformedResponse means the peer answered but violated the
// score schema.
struct RemoteUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedResponse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonpositiveOptimal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scope
