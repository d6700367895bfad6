/*
   Copyright 2026 The awpm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef AWPM_ERRORS_HPP
#define AWPM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace awpm {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// matrix_io

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateEntry : public Error {
 public:
  /// Indices are 1-based, as they appear in the file.
  DuplicateEntry(std::size_t row, std::size_t col)
      : Error("duplicate entry (" + std::to_string(row) + ", " + std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_, col_;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

class EmptyRowOrColumn : public Error {
 public:
  /// `index` is 0-based.
  EmptyRowOrColumn(bool is_row, std::size_t index)
      : Error(std::string(is_row ? "row " : "column ") + std::to_string(index + 1) +
              " has no entries; the matrix is structurally singular"),
        is_row_(is_row),
        index_(index) {}
  bool is_row() const noexcept { return is_row_; }
  std::size_t index() const noexcept { return index_; }

 private:
  bool is_row_;
  std::size_t index_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// graph_core

class InvalidMatching : public Error {
 public:
  using Error::Error;
};

class NotPerfect : public Error {
 public:
  NotPerfect() : Error("matching is not perfect") {}
  explicit NotPerfect(const std::string& what) : Error(what) {}
};

class StaleCycle : public Error {
 public:
  StaleCycle() : Error("cycle no longer alternates with respect to the matching") {}
};

// matching_init

class StructurallySingular : public Error {
 public:
  StructurallySingular(std::size_t cardinality, std::size_t n)
      : Error("structurally singular: maximum matching has cardinality " +
              std::to_string(cardinality) + " < " + std::to_string(n)),
        cardinality_(cardinality) {}
  std::size_t cardinality() const noexcept { return cardinality_; }

 private:
  std::size_t cardinality_;
};

// oracle_exact

class NoPerfectMatching : public Error {
 public:
  NoPerfectMatching() : Error("graph has no perfect matching") {}
};

class TooLarge : public Error {
 public:
  TooLarge(std::size_t n, std::size_t limit)
      : Error("brute force limited to n <= " + std::to_string(limit) + ", got n = " +
              std::to_string(n)),
        n_(n) {}
  std::size_t n() const noexcept { return n_; }

 private:
  std::size_t n_;
};

// awac_dist

class GridTooLarge : public Error {
 public:
  GridTooLarge(std::size_t q, std::size_t n)
      : Error("grid dimension " + std::to_string(q) + " exceeds n = " + std::to_string(n)) {}
};

class ConflictDetected : public Error {
 public:
  using Error::Error;
};

// harness

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace awpm

#endif  // AWPM_ERRORS_HPP
