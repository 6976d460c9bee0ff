#pragma once

#include <stdexcept>
#include <string>

namespace satotate {

/// Failure categories. The CLI maps them onto exit codes: domain-type
/// errors exit 1, consistency-type errors (oracle or path disagreement,
/// cache corruption) exit 2.
enum class ErrorKind {
    domain,
    range,
    reduction,
    resource,
    consistency,
    integrity,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::reduction: return "reduction";
    case ErrorKind::resource: return "resource";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::integrity: return "integrity";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures that signal a bug or corrupted data rather than bad input.
    bool is_consistency_failure() const noexcept {
        return kind_ == ErrorKind::consistency || kind_ == ErrorKind::integrity;
    }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct RangeError : Error {
    explicit RangeError(const std::string& w) : Error(ErrorKind::range, w) {}
};
struct ReductionError : Error {
    explicit ReductionError(const std::string& w) : Error(ErrorKind::reduction, w) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorKind::resource, w) {}
};
struct ConsistencyError : Error {
    explicit ConsistencyError(const std::string& w) : Error(ErrorKind::consistency, w) {}
};
struct IntegrityError : Error {
    explicit IntegrityError(const std::string& w) : Error(ErrorKind::integrity, w) {}
};

}  // namespace satotate
