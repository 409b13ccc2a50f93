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

// Representational similarity analysis.
//
// A sample of n items is embedded, and its geometry is summarised by a
// representational dissimilarity matrix (RDM): entry (i, j) is
// 1 - spearman(v_i, v_j). Two idealised "hypothesis" RDMs mark one group as
// isolated from the other group and the concept items. The similarity
// between the embedding geometry and a hypothesis is the Spearman
// correlation of the two upper triangles.
//
// Ranks use average (fractional) ranks for ties. Hypothesis triangles are
// binary, so tie handling decides the result.

#ifndef RSAPROBE_RSA_HPP_
#define RSAPROBE_RSA_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rsaprobe {

// 1-based ranks; tied values get the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of two equally long vectors, clamped to [-1, 1].
// Throws InvalidArgument on length mismatch or fewer than two entries and
// UndefinedCorrelationError when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman's rho: Pearson correlation of the average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

enum class Role { kGroup1, kGroup2, kConcept };

std::string_view to_string(Role role);

// Role of every sample position. Must contain all three roles.
class RoleLabeling {
 public:
  // Throws InvalidArgument when a role is missing.
  explicit RoleLabeling(std::vector<Role> labels);

  // Convenience: n1 group1 labels, then n2 group2, then n3 concept.
  static RoleLabeling blocks(std::size_t n1, std::size_t n2, std::size_t n3);

  const std::vector<Role>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  Role operator[](std::size_t i) const { return labels_[i]; }

 private:
  std::vector<Role> labels_;
};

// Symmetric n x n matrix with zero diagonal, stored row-major.
class Rdm {
 public:
  // Throws InvalidArgument unless values has n*n entries, a zero diagonal
  // and is exactly symmetric.
  Rdm(std::size_t n, std::vector<double> values);

  static Rdm zeros(std::size_t n);

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Rdm&) const = default;

 private:
  Rdm() = default;
  static Rdm unchecked(std::size_t n, std::vector<double> values);
  friend Rdm reference_rdm(std::span<const std::vector<double>>);
  friend Rdm hypothesis_rdm(const RoleLabeling&, Role);

  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Entry (i, j) = 1 - spearman(vectors[i], vectors[j]).
// Throws InvalidArgument on fewer than two vectors, non-uniform dimension or
// dimension < 2, and UndefinedCorrelationError naming the offending vector
// index when one is constant.
Rdm reference_rdm(std::span<const std::vector<double>> vectors);

// Entry (i, j) = 1 iff exactly one of i, j carries `isolated`.
// isolated = kGroup2 gives the "group 1 goes with the concept" hypothesis;
// isolated = kGroup1 gives the "group 2 goes with the concept" hypothesis.
// Throws InvalidArgument when isolated is kConcept.
Rdm hypothesis_rdm(const RoleLabeling& labeling, Role isolated);

// Entries (i, j), i < j, in row-major order: n(n-1)/2 values.
std::vector<double> upper_triangle(const Rdm& rdm);

// Spearman correlation of the two upper triangles.
// Throws InvalidArgument on size mismatch or n < 3 (fewer than two pairs),
// UndefinedCorrelationError when either triangle is constant.
double rsa_similarity(const Rdm& reference, const Rdm& hypothesis);

// {"n": int, "values": [row-major]}
nlohmann::json to_json(const Rdm& rdm);
Rdm rdm_from_json(const nlohmann::json& j);

}  // namespace rsaprobe

#endif  // RSAPROBE_RSA_HPP_
