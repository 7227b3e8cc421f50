// Copyright 2026 The palo-forge Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace palo_forge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `byte_offset` points at the offending byte.
class ParseError : public Error {
 public:
  ParseError(std::string const& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A structurally valid value that violates a domain invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string record_id, std::string rule)
      : Error("record '" + record_id + "': " + rule),
        record_id_(std::move(record_id)),
        rule_(std::move(rule)) {}
  ValidationError(std::string record_id, std::string rule, std::string what)
      : Error(std::move(what)),
        record_id_(std::move(record_id)),
        rule_(std::move(rule)) {}

  std::string const& record_id() const { return record_id_; }
  std::string const& rule() const { return rule_; }

 private:
  std::string record_id_;
  std::string rule_;
};

/// Caller misuse: bad arguments, unsupported combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad or incomplete configuration (missing credentials, bad rule table).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A state transition that lost a race or arrived out of order.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// References to entities that do not exist, collected for reporting.
class DanglingReferenceError : public Error {
 public:
  DanglingReferenceError(std::string const& what,
                         std::vector<std::string> offenders)
      : Error(what), offenders_(std::move(offenders)) {}

  std::vector<std::string> const& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

enum class BackendErrorKind {
  kTimeout,
  kHttp,
  kRateLimited,
  kTransport,
  kProtocol,
  kExhausted,
};

/// Failure talking to a translator or judge backend. The retry layer uses
/// `retryable()` to decide whether another attempt can help.
class BackendError : public Error {
 public:
  BackendError(BackendErrorKind kind, std::string const& what,
               int http_status = 0)
      : Error(what), kind_(kind), http_status_(http_status) {}

  BackendErrorKind kind() const { return kind_; }
  int http_status() const { return http_status_; }

  bool retryable() const {
    switch (kind_) {
      case BackendErrorKind::kTimeout:
      case BackendErrorKind::kRateLimited:
      case BackendErrorKind::kTransport:
        return true;
      case BackendErrorKind::kHttp:
        return http_status_ >= 500;
      case BackendErrorKind::kProtocol:
      case BackendErrorKind::kExhausted:
        return false;
    }
    return false;
  }

 private:
  BackendErrorKind kind_;
  int http_status_;
};

}  // namespace palo_forge
