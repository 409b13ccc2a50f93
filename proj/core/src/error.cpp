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

#include "rsaprobe/error.hpp"

#include <utility>

namespace rsaprobe {
namespace {

std::string located(const std::string& path, std::size_t line,
                    const std::string& what) {
  std::string msg = path;
  if (line > 0) msg += ":" + std::to_string(line);
  return msg + ": " + what;
}

std::string missing_message(const std::vector<std::string>& missing) {
  std::string msg = "missing embedding for";
  for (std::size_t i = 0; i < missing.size(); ++i) {
    msg += (i == 0 ? " '" : ", '") + missing[i] + "'";
  }
  return msg;
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line,
                       const std::string& what)
    : Error(located(path, line, what)), path_(std::move(path)), line_(line) {}

MissingTokenError::MissingTokenError(std::vector<std::string> missing)
    : Error(missing_message(missing)), missing_(std::move(missing)) {}

}  // namespace rsaprobe
