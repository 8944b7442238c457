// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_ERRORS_HPP
#define GREENDC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greendc {

// Malformed or inconsistent reconfiguration plan (names the offending PM/VM).
class PlanError : public std::runtime_error {
public:
    explicit PlanError(const std::string& what) : std::runtime_error(what) {}
};

// Committed state breaks a hard resource constraint.
class ConstraintError : public std::runtime_error {
public:
    explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// Not enough past samples to run the forecaster.
class HistoryError : public std::runtime_error {
public:
    explicit HistoryError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive search asked to enumerate more placements than the configured bound.
class SizeError : public std::runtime_error {
public:
    explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// Config file problem; carries the offending key and line when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

// Trace file problem; carries the 1-based line number when known.
class TraceError : public std::runtime_error {
public:
    explicit TraceError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Filesystem-level failure (missing file, unwritable directory).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace greendc

#endif  // GREENDC_ERRORS_HPP
