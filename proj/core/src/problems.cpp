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

#include "fednormec/problems.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fednormec/errors.hpp"
#include "fednormec/rng.hpp"

namespace fednormec {

namespace {

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  if (t > 0.0) {
    return t + std::log1p(std::exp(-t));
  }
  return std::log1p(std::exp(t));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double quadratic_value(const QuadraticComponent& q, const Vec& x) {
  const Vec r = x - q.center;
  return 0.5 * r.dot(q.curvature * r) + q.offset;
}

Vec quadratic_gradient(const QuadraticComponent& q, const Vec& x) {
  return q.curvature * (x - q.center);
}

double logistic_value(const LogisticComponent& c, const Vec& x) {
  return log1p_exp(-static_cast<double>(c.label) * c.features.dot(x));
}

Vec logistic_gradient(const LogisticComponent& c, const Vec& x) {
  const double y = static_cast<double>(c.label);
  const double z = y * c.features.dot(x);
  return (-y * sigmoid(-z)) * c.features;
}

// Largest eigenvalue of a validated-symmetric PSD matrix.
double spectral_norm(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

void validate_quadratic(const QuadraticComponent& q, int i, int j) {
  const auto tag = "client " + std::to_string(i) + " component " +
                   std::to_string(j);
  if (q.curvature.rows() != q.curvature.cols() ||
      q.curvature.rows() != q.center.size()) {
    throw InvalidProblemError("curvature/center shape mismatch at " + tag);
  }
  if (!q.curvature.allFinite() || !q.center.allFinite() ||
      !std::isfinite(q.offset)) {
    throw InvalidProblemError("non-finite quadratic data at " + tag);
  }
  const double asym =
      (q.curvature - q.curvature.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, q.curvature.cwiseAbs().maxCoeff());
  if (asym > 1e-10 * scale) {
    throw InvalidProblemError("curvature not symmetric at " + tag);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.curvature,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw InvalidProblemError("curvature not PSD at " + tag);
  }
}

double component_smoothness(const Component& c) {
  if (const auto* q = std::get_if<QuadraticComponent>(&c)) {
    return spectral_norm(q->curvature);
  }
  const auto& l = std::get<LogisticComponent>(c);
  return 0.25 * l.features.squaredNorm();
}

double component_infimum(const Component& c) {
  if (const auto* q = std::get_if<QuadraticComponent>(&c)) {
    return q->offset;
  }
  return 0.0;  // logistic loss is nonnegative
}

bool all_quadratic(const std::vector<ClientProblem>& clients) {
  for (const auto& cl : clients) {
    for (int j = 0; j < cl.num_components(); ++j) {
      if (!std::holds_alternative<QuadraticComponent>(cl.component(j))) {
        return false;
      }
    }
  }
  return true;
}

// Exact minimum of one client's quadratic objective: solve the normal
// equations H x = b with H = mean curvature, b = mean curvature*center.
void accumulate_client_normal_equations(const ClientProblem& client,
                                        Eigen::MatrixXd* h, Vec* b) {
  const double n = static_cast<double>(client.num_components());
  for (int j = 0; j < client.num_components(); ++j) {
    const auto& q = std::get<QuadraticComponent>(client.component(j));
    *h += q.curvature / n;
    *b += (q.curvature * q.center) / n;
  }
}

double exact_client_infimum(const ClientProblem& client, int dim) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Vec b = Vec::Zero(dim);
  accumulate_client_normal_equations(client, &h, &b);
  return client.value(h.ldlt().solve(b));
}

// Global infimum: clients are averaged first, then components, so unequal
// component counts weight correctly.
double exact_global_infimum(const std::vector<ClientProblem>& clients,
                            int dim) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Vec b = Vec::Zero(dim);
  for (const auto& client : clients) {
    accumulate_client_normal_equations(client, &h, &b);
  }
  const double m = static_cast<double>(clients.size());
  h /= m;
  b /= m;
  const Vec xstar = h.ldlt().solve(b);
  double value = 0.0;
  for (const auto& client : clients) {
    value += client.value(xstar);
  }
  return value / m;
}

}  // namespace

double component_value(const Component& c, const Vec& x) {
  if (const auto* q = std::get_if<QuadraticComponent>(&c)) {
    return quadratic_value(*q, x);
  }
  return logistic_value(std::get<LogisticComponent>(c), x);
}

Vec component_gradient(const Component& c, const Vec& x) {
  if (const auto* q = std::get_if<QuadraticComponent>(&c)) {
    return quadratic_gradient(*q, x);
  }
  return logistic_gradient(std::get<LogisticComponent>(c), x);
}

int component_dim(const Component& c) {
  if (const auto* q = std::get_if<QuadraticComponent>(&c)) {
    return static_cast<int>(q->center.size());
  }
  return static_cast<int>(std::get<LogisticComponent>(c).features.size());
}

ClientProblem::ClientProblem(std::vector<Component> components, int index)
    : components_(std::move(components)), index_(index) {
  if (components_.empty()) {
    throw InvalidProblemError("client needs at least one component");
  }
  dim_ = component_dim(components_.front());
  for (const auto& c : components_) {
    if (component_dim(c) != dim_) {
      throw InvalidProblemError("components of one client must share d");
    }
  }
}

double ClientProblem::value(const Vec& x) const {
  double acc = 0.0;
  for (const auto& c : components_) {
    acc += fednormec::component_value(c, x);
  }
  return acc / static_cast<double>(components_.size());
}

Vec ClientProblem::gradient(const Vec& x) const {
  Vec acc = Vec::Zero(dim_);
  for (const auto& c : components_) {
    acc += fednormec::component_gradient(c, x);
  }
  return acc / static_cast<double>(components_.size());
}

Vec ClientProblem::component_gradient(int j, const Vec& x) const {
  if (j < 0 || j >= num_components()) {
    throw InvalidInputError("component index out of range");
  }
  return fednormec::component_gradient(components_[j], x);
}

double ClientProblem::component_value(int j, const Vec& x) const {
  if (j < 0 || j >= num_components()) {
    throw InvalidInputError("component index out of range");
  }
  return fednormec::component_value(components_[j], x);
}

FederationProblem::FederationProblem(std::vector<ClientProblem> clients)
    : clients_(std::move(clients)) {
  if (clients_.empty()) {
    throw InvalidProblemError("federation needs at least one client");
  }
  dim_ = clients_.front().dim();
  smoothness_ = 0.0;
  for (int i = 0; i < num_clients(); ++i) {
    const auto& cl = clients_[i];
    if (cl.dim() != dim_) {
      throw InvalidProblemError("all clients must share d");
    }
    for (int j = 0; j < cl.num_components(); ++j) {
      if (const auto* q = std::get_if<QuadraticComponent>(&cl.component(j))) {
        validate_quadratic(*q, i, j);
      }
      smoothness_ = std::max(smoothness_, component_smoothness(cl.component(j)));
    }
  }

  client_inf_.resize(clients_.size());
  client_component_inf_mean_.resize(clients_.size());
  approximate_ = !all_quadratic(clients_);

  for (int i = 0; i < num_clients(); ++i) {
    const auto& cl = clients_[i];
    double mean_comp_inf = 0.0;
    for (int j = 0; j < cl.num_components(); ++j) {
      mean_comp_inf += component_infimum(cl.component(j));
    }
    client_component_inf_mean_[i] =
        mean_comp_inf / static_cast<double>(cl.num_components());
  }

  if (!approximate_) {
    for (int i = 0; i < num_clients(); ++i) {
      client_inf_[i] = exact_client_infimum(clients_[i], dim_);
    }
    f_inf_ = exact_global_infimum(clients_, dim_);
  } else {
    // Upper estimate of f^inf by a fixed, deterministic gradient polish;
    // per-client infima fall back to the component lower bounds.
    Vec x = Vec::Zero(dim_);
    const double step = smoothness_ > 0.0 ? 1.0 / smoothness_ : 1.0;
    for (int it = 0; it < 500; ++it) {
      x -= step * gradient(x);
    }
    f_inf_ = value(x);
    for (int i = 0; i < num_clients(); ++i) {
      client_inf_[i] = client_component_inf_mean_[i];
    }
  }
}

double FederationProblem::value(const Vec& x) const {
  double acc = 0.0;
  for (const auto& cl : clients_) {
    acc += cl.value(x);
  }
  return acc / static_cast<double>(clients_.size());
}

Vec FederationProblem::gradient(const Vec& x) const {
  Vec acc = Vec::Zero(dim_);
  for (const auto& cl : clients_) {
    acc += cl.gradient(x);
  }
  return acc / static_cast<double>(clients_.size());
}

double FederationProblem::delta_inf() const {
  double mean_client_inf = 0.0;
  for (double v : client_inf_) {
    mean_client_inf += v;
  }
  mean_client_inf /= static_cast<double>(client_inf_.size());
  return std::max(0.0, f_inf_ - mean_client_inf);
}

double FederationProblem::delta_inf_i(int i) const {
  if (i < 0 || i >= num_clients()) {
    throw InvalidInputError("client index out of range");
  }
  return f_inf_ - client_component_inf_mean_[i];
}

double FederationProblem::mean_delta_inf_i() const {
  double acc = 0.0;
  for (int i = 0; i < num_clients(); ++i) {
    acc += f_inf_ - client_component_inf_mean_[i];
  }
  return std::max(0.0, acc / static_cast<double>(num_clients()));
}

SuiteFamily suite_family_from_name(const std::string& name) {
  if (name == "quadratic-hetero") return SuiteFamily::kQuadraticHetero;
  if (name == "quadratic-homo") return SuiteFamily::kQuadraticHomo;
  if (name == "logistic-blobs") return SuiteFamily::kLogisticBlobs;
  throw InvalidInputError("unknown suite family: " + name);
}

std::string suite_family_name(SuiteFamily family) {
  switch (family) {
    case SuiteFamily::kQuadraticHetero:
      return "quadratic-hetero";
    case SuiteFamily::kQuadraticHomo:
      return "quadratic-homo";
    case SuiteFamily::kLogisticBlobs:
      return "logistic-blobs";
  }
  return "unknown";
}

namespace {

Vec unit_gaussian(RngStream& stream, int d) {
  Vec g(d);
  for (int j = 0; j < d; ++j) {
    g[j] = stream.gaussian();
  }
  const double n = g.norm();
  return n > 0.0 ? Vec(g / n) : Vec(Vec::Unit(d, 0));
}

// Random SPD curvature with largest eigenvalue exactly 1 (so every suite has
// a known global L = 1): A = (G'G + 0.1 I) / lambda_max.
Eigen::MatrixXd random_spd(RngStream& stream, int d) {
  Eigen::MatrixXd g(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      g(r, c) = stream.gaussian() * scale;
    }
  }
  Eigen::MatrixXd a = g.transpose() * g;
  a += 0.1 * Eigen::MatrixXd::Identity(d, d);
  a /= spectral_norm(a);
  return a;
}

}  // namespace

FederationProblem make_suite(const SuiteSpec& spec, std::uint64_t seed) {
  if (spec.clients < 1 || spec.components < 1 || spec.dim < 1) {
    throw InvalidInputError("suite spec requires M, N, d >= 1");
  }
  if (!(spec.hetero_scale >= 0.0) || !std::isfinite(spec.hetero_scale)) {
    throw InvalidInputError("suite spec requires finite hetero_scale >= 0");
  }
  const int m = spec.clients;
  const int n = spec.components;
  const int d = spec.dim;

  RngStream suite_stream(seed, 0, 0xffffffffULL, StreamPurpose::kDataGen);
  const Vec shared_center = spec.hetero_scale * unit_gaussian(suite_stream, d);

  std::vector<ClientProblem> clients;
  clients.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::vector<Component> comps;
    comps.reserve(n);
    RngStream client_stream(seed, 0, static_cast<std::uint64_t>(i),
                            StreamPurpose::kDataGen);
    const Vec client_dir = unit_gaussian(client_stream, d);
    for (int j = 0; j < n; ++j) {
      RngStream comp_stream(seed, static_cast<std::uint64_t>(j) + 1,
                            static_cast<std::uint64_t>(i),
                            StreamPurpose::kDataGen);
      switch (spec.family) {
        case SuiteFamily::kQuadraticHomo: {
          comps.push_back(QuadraticComponent{random_spd(comp_stream, d),
                                             shared_center, 0.0});
          break;
        }
        case SuiteFamily::kQuadraticHetero: {
          const Vec jitter = unit_gaussian(comp_stream, d);
          Vec center = spec.hetero_scale * (client_dir + 0.3 * jitter);
          comps.push_back(QuadraticComponent{random_spd(comp_stream, d),
                                             std::move(center), 0.0});
          break;
        }
        case SuiteFamily::kLogisticBlobs: {
          const int label = (j % 2 == 0) ? 1 : -1;
          Vec features = spec.hetero_scale * client_dir +
                         0.3 * unit_gaussian(comp_stream, d);
          features *= static_cast<double>(label);
          comps.push_back(LogisticComponent{std::move(features), label});
          break;
        }
      }
    }
    clients.emplace_back(std::move(comps), i);
  }
  return FederationProblem(std::move(clients));
}

}  // namespace fednormec
