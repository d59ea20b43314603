#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace bvcf {

/// @brief Broad classification used to map failures onto CLI exit codes.
enum class ErrorCategory { validation, simulation, io };

/// @brief Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(std::string code, ErrorCategory category, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), category_(category) {}

    /// Stable machine-readable name, e.g. "RetryLimitExceeded".
    [[nodiscard]] const std::string& code() const noexcept { return code_; }
    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

private:
    std::string code_;
    ErrorCategory category_;
};

class ZeroLengthTask : public Error {
public:
    ZeroLengthTask() : Error("ZeroLengthTask", ErrorCategory::simulation, "task has zero length") {}
};

class InvalidSize : public Error {
public:
    InvalidSize() : Error("InvalidSize", ErrorCategory::simulation, "cloudlet size must be positive") {}
};

/// Carries the offending cloudlet id.
class CloudletError : public Error {
public:
    CloudletError(std::string code, std::uint64_t id, const std::string& what)
        : Error(std::move(code), ErrorCategory::simulation, what + " (cloudlet " + std::to_string(id) + ")")
        , id_(id) {}

    [[nodiscard]] std::uint64_t cloudlet_id() const noexcept { return id_; }

private:
    std::uint64_t id_;
};

class MissingCloudlet : public CloudletError {
public:
    explicit MissingCloudlet(std::uint64_t id) : CloudletError("MissingCloudlet", id, "executed set is missing a cloudlet") {}
};

class DuplicateCloudlet : public CloudletError {
public:
    explicit DuplicateCloudlet(std::uint64_t id) : CloudletError("DuplicateCloudlet", id, "cloudlet executed more than once") {}
};

class UnexpectedCloudlet : public CloudletError {
public:
    explicit UnexpectedCloudlet(std::uint64_t id)
        : CloudletError("UnexpectedCloudlet", id, "cloudlet is not in the predicted sequence list") {}
};

class RetryLimitExceeded : public CloudletError {
public:
    explicit RetryLimitExceeded(std::uint64_t id) : CloudletError("RetryLimitExceeded", id, "retry limit exceeded") {}
};

class EmptyVmPool : public Error {
public:
    EmptyVmPool() : Error("EmptyVmPool", ErrorCategory::simulation, "no virtual machine available") {}
};

class EmptyBatch : public Error {
public:
    EmptyBatch() : Error("EmptyBatch", ErrorCategory::simulation, "cannot send an empty cloudlet batch") {}
};

class EmptyQueue : public Error {
public:
    EmptyQueue() : Error("EmptyQueue", ErrorCategory::simulation, "event queue is empty") {}
};

class InsufficientResources : public Error {
public:
    explicit InsufficientResources(std::string kind)
        : Error("InsufficientResources", ErrorCategory::simulation, "insufficient resources: " + kind)
        , kind_(std::move(kind)) {}

    /// "cpu_rate" or "memory".
    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidChoice : public Error {
public:
    explicit InvalidChoice(long long choice)
        : Error("InvalidChoice", ErrorCategory::validation,
                "invalid scheduling choice " + std::to_string(choice) + " (expected 1 or 2)")
        , choice_(choice) {}

    [[nodiscard]] long long choice() const noexcept { return choice_; }

private:
    long long choice_;
};

class ParseError : public Error {
public:
    ParseError(std::string location, const std::string& detail)
        : Error("ParseError", ErrorCategory::validation, "parse error at " + location + ": " + detail)
        , location_(std::move(location)) {}

    [[nodiscard]] const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field, std::string reason)
        : Error("ValidationError", ErrorCategory::validation, field + ": " + reason)
        , field_(std::move(field))
        , reason_(std::move(reason)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

class IoError : public Error {
public:
    explicit IoError(std::string path)
        : Error("IoError", ErrorCategory::io, "cannot write or read '" + path + "'"), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace bvcf
