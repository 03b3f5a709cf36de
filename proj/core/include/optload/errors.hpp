/*
 Copyright 2026 The optload Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef OPTLOAD_ERRORS_HPP
#define OPTLOAD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optload {

/**
 * @brief Broad failure categories. The command-line tool maps these onto
 * process exit codes.
 */
enum class ErrorCategory {
    Config,  ///< invalid input data, dimensions, or schema
    Solver,  ///< numerical failure (singular Hessian, divergence, ...)
    Io,      ///< file system failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

/// Syntax error while parsing an expression; position is a 0-based offset.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error(ErrorCategory::Config,
                "parse error at position " + std::to_string(position) + ": " + message),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Evaluation outside the domain of a function (log of nonpositive, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression)
        : Error(ErrorCategory::Solver, message + " in '" + subexpression + "'"),
          subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

class SingularHessian : public Error {
public:
    explicit SingularHessian(const std::string& what) : Error(ErrorCategory::Solver, what) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error(ErrorCategory::Solver, what) {}
};

class ShootingDivergence : public Error {
public:
    explicit ShootingDivergence(const std::string& what) : Error(ErrorCategory::Solver, what) {}
};

class ConsistencyViolation : public Error {
public:
    explicit ConsistencyViolation(const std::string& what) : Error(ErrorCategory::Solver, what) {}
};

class UnsupportedClass : public Error {
public:
    explicit UnsupportedClass(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class SingularCoordinateChange : public Error {
public:
    explicit SingularCoordinateChange(const std::string& what)
        : Error(ErrorCategory::Solver, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

}  // namespace optload

#endif  // OPTLOAD_ERRORS_HPP
