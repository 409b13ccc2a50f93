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

#include "rsaprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

// Largest n for which 2^-n is a normal long double on x87 (min exponent
// -16381) with room to spare.
constexpr std::size_t kRecurrenceLimit = 16000;

// Neumaier-compensated log-sum-exp of log C(n, i) - n log 2 for i in [k, n].
double log_space_tail(std::size_t k, std::size_t n) {
  const double nd = static_cast<double>(n);
  auto log_term = [&](std::size_t i) {
    const double id = static_cast<double>(i);
    return std::lgamma(nd + 1) - std::lgamma(id + 1) - std::lgamma(nd - id + 1) -
           nd * std::log(2.0);
  };
  // The largest term in [k, n] is at max(k, n/2).
  const double peak = log_term(std::max(k, n / 2));
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = k; i <= n; ++i) {
    const double t = std::exp(log_term(i) - peak);
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return std::exp(peak + std::log(sum + comp));
}

}  // namespace

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kHyp1:
      return "hyp1";
    case Direction::kHyp2:
      return "hyp2";
    case Direction::kNone:
      return "none";
  }
  return "none";
}

Direction direction_from_string(std::string_view s) {
  if (s == "hyp1") return Direction::kHyp1;
  if (s == "hyp2") return Direction::kHyp2;
  if (s == "none") return Direction::kNone;
  throw InvalidArgument("unknown direction '" + std::string(s) + "'");
}

double binomial_upper_tail_half(std::size_t k, std::size_t n) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (n > kRecurrenceLimit) return std::min(1.0, log_space_tail(k, n));

  // P[X = i] for i = n, n-1, ..., k via P(i-1) = P(i) * i / (n - i + 1),
  // starting from the exact P(n) = 2^-n. Terms grow towards the mode, so
  // summing in this order adds small terms first.
  long double term = std::ldexp(1.0L, -static_cast<int>(n));
  long double sum = term;
  for (std::size_t i = n; i > k; --i) {
    term = term * static_cast<long double>(i) /
           static_cast<long double>(n - i + 1);
    sum += term;
  }
  return std::min(1.0, static_cast<double>(sum));
}

SignTestResult sign_test(std::span<const double> diffs) {
  if (diffs.empty()) throw InvalidArgument("sign test needs at least one difference");
  SignTestResult r;
  for (double d : diffs) {
    if (std::isnan(d)) throw InvalidArgument("sign test input contains NaN");
    if (d > 0) {
      ++r.n_pos;
    } else if (d < 0) {
      ++r.n_neg;
    } else {
      ++r.n_zero;
    }
  }
  const std::size_t n = r.n_pos + r.n_neg;
  if (n == 0) {
    throw DegenerateTestError(
        "no consistent difference: all paired differences are zero");
  }
  const std::size_t k = std::max(r.n_pos, r.n_neg);
  r.p_value = std::min(1.0, 2.0 * binomial_upper_tail_half(k, n));
  if (r.n_pos > r.n_neg) {
    r.direction = Direction::kHyp1;
  } else if (r.n_neg > r.n_pos) {
    r.direction = Direction::kHyp2;
  }
  return r;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty vector");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

Summary summarize(std::span<const double> s1, std::span<const double> s2) {
  if (s1.size() != s2.size()) {
    throw InvalidArgument("similarity vectors differ in length (" +
                          std::to_string(s1.size()) + " vs " +
                          std::to_string(s2.size()) + ")");
  }
  if (s1.empty()) throw InvalidArgument("similarity vectors are empty");
  std::vector<double> diffs(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) diffs[i] = s1[i] - s2[i];
  return Summary{mean(s1), mean(s2), sign_test(diffs)};
}

nlohmann::json to_json(const SignTestResult& r) {
  return {{"n_pos", r.n_pos},
          {"n_neg", r.n_neg},
          {"n_zero", r.n_zero},
          {"p_value", r.p_value},
          {"direction", std::string(to_string(r.direction))}};
}

SignTestResult sign_test_from_json(const nlohmann::json& j) {
  SignTestResult r;
  r.n_pos = j.at("n_pos").get<std::size_t>();
  r.n_neg = j.at("n_neg").get<std::size_t>();
  r.n_zero = j.at("n_zero").get<std::size_t>();
  r.p_value = j.at("p_value").get<double>();
  r.direction = direction_from_string(j.at("direction").get<std::string>());
  return r;
}

}  // namespace rsaprobe
