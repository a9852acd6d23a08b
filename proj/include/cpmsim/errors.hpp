/*
 * cpmsim - container placement and migration simulator
 * Copyright (c) The cpmsim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */

#pragma once

#include <stdexcept>
#include <string>

namespace cpmsim {

/// Base class for all cpmsim errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric input outside its documented domain (negative RAM, zero capacity, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A host, VM or container id that does not exist in the state.
class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& msg) : Error(msg) {}
};

/// An operation invoked on a state that does not satisfy its precondition.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// A move whose resulting state would break the threshold policy.
class RejectedMoveError : public Error {
public:
    explicit RejectedMoveError(const std::string& msg) : Error(msg) {}
};

/// Instance too large for an exact algorithm.
class SizeError : public Error {
public:
    explicit SizeError(const std::string& msg) : Error(msg) {}
};

/// Workload that cannot be placed at the given threshold.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

/// Report inputs that do not fit together (plan does not map before onto after).
class IntegrityError : public Error {
public:
    explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

/// Malformed scenario file; message starts with the offending path.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Command invoked with unusable arguments or an unsuitable scenario.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

/// Filesystem failure; message carries the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace cpmsim
