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

#ifndef RSAPROBE_TOOLS_CLI_HPP_
#define RSAPROBE_TOOLS_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsaprobe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitUsage = 64;

// Entry point shared by main() and the tests. args excludes the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Resolves a `templates --spec` name ("black-female", "female-concept",
// "black-male.gender", or any built-in glossary name) to a glossary name.
std::optional<std::string> resolve_template_spec(std::string_view spec);

}  // namespace rsaprobe::cli

#endif  // RSAPROBE_TOOLS_CLI_HPP_
