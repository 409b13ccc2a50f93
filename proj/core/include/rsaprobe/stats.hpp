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

#ifndef RSAPROBE_STATS_HPP_
#define RSAPROBE_STATS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace rsaprobe {

// Which hypothesis the paired differences favour.
enum class Direction { kHyp1, kHyp2, kNone };

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);

struct SignTestResult {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  double p_value = 1.0;
  Direction direction = Direction::kNone;

  bool operator==(const SignTestResult&) const = default;
};

// Upper binomial tail P[X >= k] for X ~ Binomial(n, 1/2).
// Accurate to a few ulp for n <= 16000 (extended-precision term recurrence);
// larger n falls back to log-space summation.
double binomial_upper_tail_half(std::size_t k, std::size_t n);

// Exact two-sided sign test: zeros are discarded, and
// p = min(1, 2 * P[X >= max(n_pos, n_neg)]) with X ~ Binomial(n_pos + n_neg, 1/2).
// Throws InvalidArgument on empty input and DegenerateTestError when every
// difference is zero.
SignTestResult sign_test(std::span<const double> diffs);

struct Summary {
  double mean_s1 = 0.0;
  double mean_s2 = 0.0;
  SignTestResult sign_test;
};

// Means of both vectors and the sign test on s1 - s2. Throws
// InvalidArgument on length mismatch or empty input; DegenerateTestError
// ("no consistent difference") when s1 == s2 elementwise.
Summary summarize(std::span<const double> s1, std::span<const double> s2);

double mean(std::span<const double> values);

nlohmann::json to_json(const SignTestResult& r);
SignTestResult sign_test_from_json(const nlohmann::json& j);

}  // namespace rsaprobe

#endif  // RSAPROBE_STATS_HPP_
