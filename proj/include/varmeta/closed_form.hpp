// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "varmeta/kernels.hpp"

namespace varmeta {

/// Closed-form geodesic between two single Dirac measures r0 d_{x0} and
/// r1 d_{x1}: straight-line transport with square-root weight interpolation.
/// cost is the squared distance (optimal transformation energy); the metric
/// distance is sqrt(cost).
struct Dirac0Geodesic {
  Eigen::VectorXd x0, x1;
  double r0 = 0, r1 = 0;
  double cost = 0;

  Eigen::VectorXd position(double t) const { return (1.0 - t) * x0 + t * x1; }
  double weight(double t) const {
    double m = (1.0 - t) * std::sqrt(r0) + t * std::sqrt(r1);
    return m * m;
  }
};

/// Derived constants of the single Dirac 1-varifold geodesic. cost and the
/// weight path depend on nu only through nu^2 / |nu|; nu is reported with the
/// sign of r1 - r0 (negative for shrinking mass).
struct Dirac1GeodesicParams {
  double tau = 0;    // sigma_v^2 / 2 for the Gaussian deformation kernel
  double chi = 0;    // sqrt(1 + tau / (gamma r0))
  double nu = 0;     // branch value, signed; 0 when r0 == r1
  double theta = 0;  // arccos(u0 . u1) in [0, pi)
};

/// Closed-form geodesic between two single Dirac 1-varifolds with unit
/// direction vectors: straight-line position, constant-speed rotation of the
/// direction, hyperbolic-sine weight interpolation.
struct Dirac1Geodesic {
  Eigen::VectorXd x0, x1, u0, u1;
  double r0 = 0, r1 = 0;
  Dirac1GeodesicParams params;
  double cost = 0;

  Eigen::VectorXd position(double t) const { return (1.0 - t) * x0 + t * x1; }
  Eigen::VectorXd direction(double t) const;
  double weight(double t) const;
};

/// cost = 1/2 |x1 - x0|^2 + 2 gamma (sqrt(r1) - sqrt(r0))^2.
/// Requires r0 > 0, r1 >= 0.
Dirac0Geodesic geodesic_dirac0(const Eigen::VectorXd& x0, double r0, const Eigen::VectorXd& x1,
                               double r1, double gamma, const DeformKernelSpec& kernel);

/// cost = 1/2 |x1 - x0|^2 + (tau/2) theta^2 + 2 tau nu^2, with nu from the
/// branch matching the weight ratio and checked against the implicit
/// relation at construction. Requires unit u0, u1 (to 1e-10), r0 > 0,
/// r1 >= 0, u1 != -u0 (antipodal directions have no unique geodesic).
Dirac1Geodesic geodesic_dirac1(const Eigen::VectorXd& x0, const Eigen::VectorXd& u0, double r0,
                               const Eigen::VectorXd& x1, const Eigen::VectorXd& u1, double r1,
                               double gamma, const DeformKernelSpec& kernel);

/// Residual | sqrt(r1/r0) / sinh(nu) - coth(nu) | - chi of the implicit
/// characterization of nu; vanishes at the branch solutions (either sign of
/// nu). Requires nu != 0.
double implicit_nu_residual(double nu, double r0, double r1, double chi);

/// Closed-form optimal weight control for a fixed deformation: given per-atom
/// positive Jacobian profiles h_i(t_j) on a uniform grid over [0, 1] and
/// endpoint factors alpha1_i >= 0, returns eta_i(t_j) =
/// 2 (alpha1_i - 1) / (h_i(t_j) * I_i) with I_i the trapezoidal integral of
/// 1/h_i. This is the exact minimizer of the discrete (trapezoidal) cost
/// sum_i int eta_i^2 h_i dt among controls with the same endpoint, and the
/// induced alpha(t) stays >= 0. Throws NonPositiveJacobian if any h <= 0.
std::vector<std::vector<double>> optimal_eta_fixed_flow(
    const std::vector<std::vector<double>>& jacobians, const std::vector<double>& alpha1_target);

/// alpha(t_j) induced by a control on the same grid:
/// alpha(t_j) = 1 + 1/2 * trapez(eta, [0, t_j]).
std::vector<double> weight_factor_path(const std::vector<double>& eta);

/// Trapezoidal weight-change cost int eta^2 h dt of one atom's control.
double weight_control_cost(const std::vector<double>& eta, const std::vector<double>& h);

}  // namespace varmeta
