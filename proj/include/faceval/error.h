// Copyright 2026 The FacEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACEVAL_ERROR_H_
#define FACEVAL_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace faceval {

// Root of every error thrown by the library. `kind()` is a stable short
// identifier used in the CLI's machine-readable error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Malformed input. Carries the 1-based line and/or the byte offset when the
// source format has them.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message,
                      std::optional<std::size_t> line = std::nullopt,
                      std::optional<std::size_t> byte_offset = std::nullopt)
      : Error("parse_error", Decorate(message, line, byte_offset)),
        line_(line),
        byte_offset_(byte_offset) {}

  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  static std::string Decorate(const std::string& message,
                              std::optional<std::size_t> line,
                              std::optional<std::size_t> byte_offset) {
    std::string out;
    if (line) out += "line " + std::to_string(*line) + ": ";
    if (byte_offset) out += "byte " + std::to_string(*byte_offset) + ": ";
    return out + message;
  }

  std::optional<std::size_t> line_;
  std::optional<std::size_t> byte_offset_;
};

// Well-formed input that violates a cross-record constraint (duplicate ids).
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message)
      : Error("integrity_error", message) {}
};

// Argument outside an operation's domain (empty corpus, L = 0, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error("domain_error", message) {}
};

// Rank correlation of a constant vector.
class UndefinedCorrelationError : public DomainError {
 public:
  explicit UndefinedCorrelationError(const std::string& message)
      : DomainError(message) {}
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& message)
      : Error("version_error", message) {}
};

class TaggingError : public Error {
 public:
  explicit TaggingError(const std::string& message)
      : Error("tagging_error", message) {}
};

// A metric score required by a correlation report is absent.
class MissingScoreError : public Error {
 public:
  explicit MissingScoreError(const std::string& message)
      : Error("missing_score", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io_error", message) {}
};

// An external service (scorer, paraphraser) could not be reached at all.
class ServiceError : public Error {
 public:
  explicit ServiceError(const std::string& message)
      : Error("service_error", message) {}
};

}  // namespace faceval

#endif  // FACEVAL_ERROR_H_
