// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/closed_form.hpp"

#include <cmath>

namespace varmeta {

namespace {

// relative agreement threshold for treating r0 and r1 as equal (nu -> 0 limit)
constexpr double kEqualWeightTol = 1e-12;

}  // namespace

Eigen::VectorXd Dirac1Geodesic::direction(double t) const {
  double theta = params.theta;
  if (theta == 0.0) return u0;
  return (std::sin((1.0 - t) * theta) * u0 + std::sin(t * theta) * u1) / std::sin(theta);
}

double Dirac1Geodesic::weight(double t) const {
  double nu = params.nu;
  double sr0 = std::sqrt(r0), sr1 = std::sqrt(r1);
  if (nu == 0.0) {
    double m = (1.0 - t) * sr0 + t * sr1;
    return m * m;
  }
  double m = (sr0 * std::sinh((1.0 - t) * nu) + sr1 * std::sinh(nu * t)) / std::sinh(nu);
  return m * m;
}

Dirac0Geodesic geodesic_dirac0(const Eigen::VectorXd& x0, double r0, const Eigen::VectorXd& x1,
                               double r1, double gamma, const DeformKernelSpec& kernel) {
  kernel.validate();
  if (!(r0 > 0) || !(r1 >= 0)) throw InvalidWeights("geodesic_dirac0: need r0 > 0, r1 >= 0");
  if (!(gamma > 0)) throw Error("geodesic_dirac0: gamma must be > 0");
  Dirac0Geodesic g;
  g.x0 = x0;
  g.x1 = x1;
  g.r0 = r0;
  g.r1 = r1;
  double ds = std::sqrt(r1) - std::sqrt(r0);
  g.cost = 0.5 * (x1 - x0).squaredNorm() + 2.0 * gamma * ds * ds;
  return g;
}

double implicit_nu_residual(double nu, double r0, double r1, double chi) {
  if (nu == 0.0) throw Error("implicit_nu_residual: nu must be nonzero");
  double lhs = std::sqrt(r1 / r0) / std::sinh(nu) - 1.0 / std::tanh(nu);
  return std::abs(lhs) - chi;
}

Dirac1Geodesic geodesic_dirac1(const Eigen::VectorXd& x0, const Eigen::VectorXd& u0, double r0,
                               const Eigen::VectorXd& x1, const Eigen::VectorXd& u1, double r1,
                               double gamma, const DeformKernelSpec& kernel) {
  kernel.validate();
  if (!(r0 > 0) || !(r1 >= 0)) throw InvalidWeights("geodesic_dirac1: need r0 > 0, r1 >= 0");
  if (!(gamma > 0)) throw Error("geodesic_dirac1: gamma must be > 0");
  if (std::abs(u0.norm() - 1.0) > 1e-10 || std::abs(u1.norm() - 1.0) > 1e-10)
    throw Error("geodesic_dirac1: direction vectors must be unit length");
  double c = u0.dot(u1);
  if (c <= -1.0 + 1e-12)
    throw AntipodalDirections("geodesic_dirac1: antipodal directions, geodesic not unique");

  Dirac1Geodesic g;
  g.x0 = x0;
  g.x1 = x1;
  g.u0 = u0;
  g.u1 = u1;
  g.r0 = r0;
  g.r1 = r1;

  double tau = kernel.tau();
  double chi = std::sqrt(1.0 + tau / (gamma * r0));
  double theta = std::acos(std::clamp(c, -1.0, 1.0));

  double nu;
  double sr0 = std::sqrt(r0), sr1 = std::sqrt(r1);
  if (std::abs(sr1 - sr0) <= kEqualWeightTol * std::max(sr0, sr1)) {
    nu = 0.0;
  } else if (r1 == 0.0) {
    nu = -0.5 * std::log((chi - 1.0) / (chi + 1.0));
  } else if (r1 < r0) {
    double root = std::sqrt(1.0 + (r0 / r1) * (chi * chi - 1.0));
    nu = std::log(-std::sqrt(r1 / r0) * (1.0 - root) / (chi - 1.0));
  } else {
    double root = std::sqrt(1.0 + (r0 / r1) * (chi * chi - 1.0));
    nu = std::log(std::sqrt(r1 / r0) * (1.0 + root) / (chi + 1.0));
  }
  // the branch expressions return |nu|; report nu with the sign of the mass
  // change (cost and weight path are even in nu)
  if (r1 < r0) nu = -std::abs(nu);

  if (nu != 0.0 && std::abs(implicit_nu_residual(nu, r0, r1, chi)) > 1e-10)
    throw InternalError("geodesic_dirac1: branch value fails the implicit relation");

  g.params = {tau, chi, nu, theta};
  g.cost = 0.5 * (x1 - x0).squaredNorm() + 0.5 * tau * theta * theta + 2.0 * tau * nu * nu;
  return g;
}

std::vector<std::vector<double>> optimal_eta_fixed_flow(
    const std::vector<std::vector<double>>& jacobians, const std::vector<double>& alpha1_target) {
  if (jacobians.size() != alpha1_target.size())
    throw Error("optimal_eta_fixed_flow: atom count mismatch");
  std::vector<std::vector<double>> etas(jacobians.size());
  for (std::size_t i = 0; i < jacobians.size(); ++i) {
    const auto& h = jacobians[i];
    if (h.size() < 2) throw Error("optimal_eta_fixed_flow: need at least 2 grid points");
    if (!(alpha1_target[i] >= 0))
      throw InvalidWeights("optimal_eta_fixed_flow: endpoint factor must be >= 0");
    for (double v : h)
      if (!(v > 0)) throw NonPositiveJacobian("optimal_eta_fixed_flow: Jacobian must be > 0");
    const std::size_t m = h.size();
    const double dt = 1.0 / static_cast<double>(m - 1);
    double integral = 0.0;  // trapezoidal int of 1/h
    for (std::size_t j = 0; j + 1 < m; ++j) integral += 0.5 * dt * (1.0 / h[j] + 1.0 / h[j + 1]);
    etas[i].resize(m);
    for (std::size_t j = 0; j < m; ++j)
      etas[i][j] = 2.0 * (alpha1_target[i] - 1.0) / (h[j] * integral);
  }
  return etas;
}

std::vector<double> weight_factor_path(const std::vector<double>& eta) {
  const std::size_t m = eta.size();
  const double dt = 1.0 / static_cast<double>(m - 1);
  std::vector<double> alpha(m);
  alpha[0] = 1.0;
  for (std::size_t j = 1; j < m; ++j)
    alpha[j] = alpha[j - 1] + 0.25 * dt * (eta[j - 1] + eta[j]);
  return alpha;
}

double weight_control_cost(const std::vector<double>& eta, const std::vector<double>& h) {
  if (eta.size() != h.size() || eta.size() < 2)
    throw Error("weight_control_cost: grid size mismatch");
  const std::size_t m = eta.size();
  const double dt = 1.0 / static_cast<double>(m - 1);
  double cost = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j)
    cost += 0.5 * dt * (eta[j] * eta[j] * h[j] + eta[j + 1] * eta[j + 1] * h[j + 1]);
  return cost;
}

}  // namespace varmeta
