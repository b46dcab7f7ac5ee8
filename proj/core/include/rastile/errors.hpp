// Copyright 2026 The Rastile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RASTILE_ERRORS_HPP
#define RASTILE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rastile {

/// Base class for all rastile errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values: out-of-range coordinates, bad levels, inverted ranges.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed bytes or text: bad key length, unknown qualifier, bad header.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Text parse failure carrying a 1-based line number.
class ParseError : public FormatError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : FormatError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Schema violations: undeclared column family, empty family list.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Name collisions: table already exists, image already ingested.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Checksum or structural corruption in a persisted file.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& msg, std::string file)
      : Error(msg + ": " + file), file_(std::move(file)) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

/// Normalization failure listing the unified fields that are missing or bad.
class NormalizeError : public Error {
 public:
  NormalizeError(const std::string& msg, std::vector<std::string> fields)
      : Error(msg), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

/// Requested entity does not exist (absent table, point outside image).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A scatter read could not reach every owning node.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& msg, std::vector<uint32_t> nodes)
      : Error(msg), missing_nodes_(std::move(nodes)) {}
  const std::vector<uint32_t>& missing_nodes() const { return missing_nodes_; }

 private:
  std::vector<uint32_t> missing_nodes_;
};

}  // namespace rastile

#endif  // RASTILE_ERRORS_HPP
