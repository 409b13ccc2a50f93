// Copyright 2026 The rsaprobe Authors.
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

#ifndef RSAPROBE_ERROR_HPP_
#define RSAPROBE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsaprobe {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based; 0 means "not tied to a line".
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// A token (or contextual item id) has no vector in the source.
class MissingTokenError : public Error {
 public:
  explicit MissingTokenError(std::vector<std::string> missing);

  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// Spearman correlation requested on a constant input (zero rank variance).
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// Sign test with every paired difference equal to zero.
class DegenerateTestError : public Error {
 public:
  using Error::Error;
};

// Bad argument shapes, sizes or configuration values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rsaprobe

#endif  // RSAPROBE_ERROR_HPP_
