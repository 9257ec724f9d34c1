// Copyright 2026 The fednormec Authors
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

#ifndef FEDNORMEC_PROBLEMS_HPP_
#define FEDNORMEC_PROBLEMS_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fednormec/vec.hpp"

namespace fednormec {

// One loss term  f_{i,j}(x) = 1/2 (x - center)' A (x - center) + offset.
// A must be symmetric PSD; the infimum is `offset`, attained at `center`.
struct QuadraticComponent {
  Eigen::MatrixXd curvature;
  Vec center;
  double offset = 0.0;
};

// One loss term  f_{i,j}(x) = log(1 + exp(-label * <features, x>)),
// label in {-1, +1}. Nonnegative, so 0 is a valid lower bound; smoothness
// constant ||features||^2 / 4.
struct LogisticComponent {
  Vec features;
  int label = 1;
};

using Component = std::variant<QuadraticComponent, LogisticComponent>;

double component_value(const Component& c, const Vec& x);
Vec component_gradient(const Component& c, const Vec& x);
int component_dim(const Component& c);

// One client's objective f_i = (1/N) sum_j f_{i,j}.
class ClientProblem {
 public:
  ClientProblem(std::vector<Component> components, int index);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  // Gradient / value of component j; throws InvalidInputError on a bad index.
  Vec component_gradient(int j, const Vec& x) const;
  double component_value(int j, const Vec& x) const;

  int num_components() const { return static_cast<int>(components_.size()); }
  int index() const { return index_; }
  int dim() const { return dim_; }
  const Component& component(int j) const { return components_[j]; }

 private:
  std::vector<Component> components_;
  int index_;
  int dim_;
};

// The federation  f = (1/M) sum_i f_i.
//
// Construction validates every quadratic component (symmetry, PSD) and
// computes the global smoothness constant L = max over components. For
// all-quadratic problems the infima f^inf, f_i^inf are obtained by one exact
// linear solve each and cached; otherwise f^inf is estimated from above by a
// deterministic gradient polish, component infima use the lower bound 0, and
// the heterogeneity values are flagged approximate.
class FederationProblem {
 public:
  explicit FederationProblem(std::vector<ClientProblem> clients);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  int dim() const { return dim_; }
  int num_clients() const { return static_cast<int>(clients_.size()); }
  const ClientProblem& client(int i) const { return clients_[i]; }
  double smoothness() const { return smoothness_; }

  double f_inf() const { return f_inf_; }
  double client_inf(int i) const { return client_inf_[i]; }

  // Delta^inf = f^inf - (1/M) sum_i f_i^inf. Always >= 0.
  double delta_inf() const;
  // Delta^inf_i = f^inf - (1/N) sum_j f_{i,j}^inf.
  double delta_inf_i(int i) const;
  // (1/M) sum_i Delta^inf_i, clamped at 0.
  double mean_delta_inf_i() const;

  bool heterogeneity_approximate() const { return approximate_; }

 private:
  std::vector<ClientProblem> clients_;
  int dim_;
  double smoothness_;
  double f_inf_;
  std::vector<double> client_inf_;
  std::vector<double> client_component_inf_mean_;
  bool approximate_;
};

enum class SuiteFamily { kQuadraticHetero, kQuadraticHomo, kLogisticBlobs };

// Name used in config files: quadratic-hetero | quadratic-homo |
// logistic-blobs. Throws InvalidInputError for anything else.
SuiteFamily suite_family_from_name(const std::string& name);
std::string suite_family_name(SuiteFamily family);

struct SuiteSpec {
  SuiteFamily family = SuiteFamily::kQuadraticHetero;
  int clients = 20;       // M
  int components = 2;     // N per client
  int dim = 10;           // d
  double hetero_scale = 1.0;
};

// Reproducible synthetic federation: the same (spec, seed) always builds the
// identical problem. quadratic-homo shares one minimizer across all clients
// (Delta^inf = 0); quadratic-hetero spreads per-client centers with
// `hetero_scale` so Delta^inf grows with the scale.
FederationProblem make_suite(const SuiteSpec& spec, std::uint64_t seed);

}  // namespace fednormec

#endif  // FEDNORMEC_PROBLEMS_HPP_
