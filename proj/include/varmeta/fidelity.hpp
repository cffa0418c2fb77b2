// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "varmeta/kernels.hpp"
#include "varmeta/state.hpp"
#include "varmeta/varifold.hpp"

namespace varmeta {

enum class WeightsModel { None, StaticL2, FisherRao };

/// Partial derivatives of the terminal cost with respect to the endpoint
/// state: positions, frames, and the weight variable (alpha for the static
/// L2 model, alpha-tilde for Fisher-Rao).
struct FidelityGradient {
  std::vector<Eigen::VectorXd> d_position;
  std::vector<Eigen::MatrixXd> d_frame;
  std::vector<double> d_alpha;
};

/// <mu, mu'>_{W*} = sum_i sum_j k(x_i, U_i, x'_j, U'_j) r_i r'_j.
/// Throws DegenerateFrame if any atom with nonzero weight has a frame of
/// volume below 1e-14.
double wstar_inner(const DiracVarifold& a, const DiracVarifold& b, const FidelityKernelSpec& spec);

/// Squared kernel distance ||a - b||^2_{W*}; tiny negative round-off (above
/// -1e-12 relative) is clamped to 0, anything more negative raises
/// InternalError.
double wstar_dist2(const DiracVarifold& a, const DiracVarifold& b, const FidelityKernelSpec& spec);

/// Terminal cost g(q) = lambda/2 ||mu_1 - target||^2_{W*} where mu_1 carries
/// atom masses a_i * geometric_weight(i) with a_i = alpha_i (StaticL2),
/// alpha-tilde_i^2 (FisherRao) or 1 (None). Caches the target self inner
/// product, which is constant across a registration.
class TerminalCost {
public:
  TerminalCost(DiracVarifold target, FidelityKernelSpec spec, double lambda);

  /// Cost and analytic partials with respect to every position, frame vector
  /// and weight variable of the endpoint. `alphas` supplies alpha for
  /// StaticL2 (ignored for FisherRao, which reads the state's factors, and
  /// for None).
  std::pair<double, FidelityGradient> evaluate(const ShootingState& endpoint, WeightsModel model,
                                               const std::vector<double>& alphas = {}) const;

  double lambda() const { return lambda_; }
  const DiracVarifold& target() const { return target_; }
  const FidelityKernelSpec& kernel() const { return spec_; }
  double target_self_inner() const { return target_self_inner_; }

private:
  DiracVarifold target_;
  FidelityKernelSpec spec_;
  double lambda_;
  double target_self_inner_;
};

/// Free-function form of the terminal cost.
std::pair<double, FidelityGradient> terminal_cost_and_grad(const ShootingState& endpoint,
                                                           WeightsModel model,
                                                           const std::vector<double>& alphas,
                                                           const DiracVarifold& target,
                                                           const FidelityKernelSpec& spec,
                                                           double lambda);

}  // namespace varmeta
