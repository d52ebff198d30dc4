// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#pragma once

#include <stdexcept>
#include <string>

namespace asyncmimo {

// Bad user input: invalid parameter, unsupported combination, unknown key.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix that has to be inverted is singular or too badly conditioned.
// Carries the condition estimate so front ends can report it.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

// Violated internal invariant. Indicates a bug, not a user mistake.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace asyncmimo
