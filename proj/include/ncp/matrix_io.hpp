// Copyright 2026 The NCP Authors
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

#include "ncp/linalg.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ncp {

/// Raised for malformed matrix text; carries the offending 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Headerless CSV, one line per feature row, comma-separated decimal fields.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv_file(const std::string& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv_file(const std::string& path, const Matrix& m);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace ncp
