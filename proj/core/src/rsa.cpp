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

#include "rsaprobe/rsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

// Pearson on inputs already known to be non-constant and equally long.
double pearson_unchecked(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("correlation inputs differ in length (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw InvalidArgument("correlation needs at least two observations");
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  for (double v : values) {
    if (std::isnan(v)) throw InvalidArgument("cannot rank NaN");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    // Positions start..end-1 hold ranks start+1..end; their mean:
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x) || is_constant(y)) {
    throw UndefinedCorrelationError("correlation undefined for constant input");
  }
  return pearson_unchecked(x, y);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x) || is_constant(y)) {
    throw UndefinedCorrelationError(
        "Spearman correlation undefined for constant input");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_unchecked(rx, ry);
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kGroup1:
      return "group1";
    case Role::kGroup2:
      return "group2";
    case Role::kConcept:
      return "concept";
  }
  return "?";
}

RoleLabeling::RoleLabeling(std::vector<Role> labels)
    : labels_(std::move(labels)) {
  for (Role r : {Role::kGroup1, Role::kGroup2, Role::kConcept}) {
    if (std::find(labels_.begin(), labels_.end(), r) == labels_.end()) {
      throw InvalidArgument("labeling has no " + std::string(to_string(r)) +
                            " item");
    }
  }
}

RoleLabeling RoleLabeling::blocks(std::size_t n1, std::size_t n2,
                                  std::size_t n3) {
  std::vector<Role> labels;
  labels.reserve(n1 + n2 + n3);
  labels.insert(labels.end(), n1, Role::kGroup1);
  labels.insert(labels.end(), n2, Role::kGroup2);
  labels.insert(labels.end(), n3, Role::kConcept);
  return RoleLabeling(std::move(labels));
}

Rdm::Rdm(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) {
    throw InvalidArgument("RDM of order " + std::to_string(n_) + " needs " +
                          std::to_string(n_ * n_) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw InvalidArgument("RDM diagonal entry " + std::to_string(i) +
                            " is not zero");
    }
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) {
        throw InvalidArgument("RDM is not symmetric at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
    }
  }
}

Rdm Rdm::zeros(std::size_t n) { return unchecked(n, std::vector<double>(n * n)); }

Rdm Rdm::unchecked(std::size_t n, std::vector<double> values) {
  Rdm r;
  r.n_ = n;
  r.values_ = std::move(values);
  return r;
}

Rdm reference_rdm(std::span<const std::vector<double>> vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw InvalidArgument("reference RDM needs at least two vectors");
  const std::size_t dim = vectors[0].size();
  if (dim < 2) throw InvalidArgument("reference RDM needs dimension >= 2");

  std::vector<std::vector<double>> ranks;
  ranks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) {
      throw InvalidArgument("vector " + std::to_string(i) + " has dimension " +
                            std::to_string(vectors[i].size()) + ", expected " +
                            std::to_string(dim));
    }
    if (is_constant(vectors[i])) {
      throw UndefinedCorrelationError("vector " + std::to_string(i) +
                                      " is constant; Spearman correlation "
                                      "with it is undefined");
    }
    ranks.push_back(average_ranks(vectors[i]));
  }

  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = 1.0 - pearson_unchecked(ranks[i], ranks[j]);
      values[i * n + j] = d;
      values[j * n + i] = d;
    }
  }
  return Rdm::unchecked(n, std::move(values));
}

Rdm hypothesis_rdm(const RoleLabeling& labeling, Role isolated) {
  if (isolated == Role::kConcept) {
    throw InvalidArgument("the isolated role must be group1 or group2");
  }
  const std::size_t n = labeling.size();
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool a = labeling[i] == isolated;
      const bool b = labeling[j] == isolated;
      values[i * n + j] = (a != b) ? 1.0 : 0.0;
    }
  }
  return Rdm::unchecked(n, std::move(values));
}

std::vector<double> upper_triangle(const Rdm& rdm) {
  const std::size_t n = rdm.n();
  std::vector<double> out;
  out.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(rdm(i, j));
  }
  return out;
}

double rsa_similarity(const Rdm& reference, const Rdm& hypothesis) {
  if (reference.n() != hypothesis.n()) {
    throw InvalidArgument("RDM sizes differ (" + std::to_string(reference.n()) +
                          " vs " + std::to_string(hypothesis.n()) + ")");
  }
  const auto ref = upper_triangle(reference);
  const auto hyp = upper_triangle(hypothesis);
  if (ref.size() < 2) {
    throw InvalidArgument("RDMs need at least three items to compare");
  }
  if (is_constant(ref)) {
    throw UndefinedCorrelationError("reference RDM upper triangle is constant");
  }
  if (is_constant(hyp)) {
    throw UndefinedCorrelationError("hypothesis RDM upper triangle is constant");
  }
  return spearman(ref, hyp);
}

nlohmann::json to_json(const Rdm& rdm) {
  return {{"n", rdm.n()}, {"values", rdm.values()}};
}

Rdm rdm_from_json(const nlohmann::json& j) {
  try {
    return Rdm(j.at("n").get<std::size_t>(),
               j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed RDM JSON: ") + e.what());
  }
}

}  // namespace rsaprobe
