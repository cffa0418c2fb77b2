// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/fidelity.hpp"

#include <cmath>

namespace varmeta {

namespace {

constexpr double kDegenerateTol = 1e-14;

void check_nondegenerate(const DiracVarifold& v, const char* who) {
  if (v.dim_plane == 0) return;
  for (std::size_t i = 0; i < v.atoms.size(); ++i) {
    if (v.atoms[i].weight != 0.0 && frame_volume(v.atoms[i].frame) < kDegenerateTol)
      throw DegenerateFrame(std::string(who) + ": atom " + std::to_string(i) +
                            " has nonzero weight but a degenerate frame");
  }
}

// Gradient of the normalized Grassmann inner product S(F, F') with respect
// to the rows of F:
//   grad_{u^(k)} S = [sum_l cof(B)_kl u'^(l)] / (V V') - (S / V^2) sum_l C_kl u^(l)
// with B_kl = u^(k) . u'^(l) and C the cofactor matrix of Gram(F).
Eigen::MatrixXd grassmann_inner_grad1(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                                      double vf, double vg, double s) {
  const auto d = f.rows();
  Eigen::MatrixXd grad(d, f.cols());
  if (d == 1) {
    grad.row(0) = g.row(0) / (vf * vg) - (s / (vf * vf)) * f.row(0);
    return grad;
  }
  // d == 2
  double b11 = f.row(0).dot(g.row(0));
  double b12 = f.row(0).dot(g.row(1));
  double b21 = f.row(1).dot(g.row(0));
  double b22 = f.row(1).dot(g.row(1));
  double g11 = f.row(0).squaredNorm();
  double g22 = f.row(1).squaredNorm();
  double g12 = f.row(0).dot(f.row(1));
  double inv = 1.0 / (vf * vg);
  double sv2 = s / (vf * vf);
  grad.row(0) = inv * (b22 * g.row(0) - b21 * g.row(1)) - sv2 * (g22 * f.row(0) - g12 * f.row(1));
  grad.row(1) = inv * (b11 * g.row(1) - b12 * g.row(0)) - sv2 * (g11 * f.row(1) - g12 * f.row(0));
  return grad;
}

}  // namespace

double wstar_inner(const DiracVarifold& a, const DiracVarifold& b,
                   const FidelityKernelSpec& spec) {
  if (a.dim_ambient != b.dim_ambient || a.dim_plane != b.dim_plane)
    throw Error("wstar_inner: varifold dimensions differ");
  check_nondegenerate(a, "wstar_inner");
  check_nondegenerate(b, "wstar_inner");
  return parallel_reduce_sum(a.atoms.size(), [&](std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& ai = a.atoms[i];
      if (ai.weight == 0.0) continue;
      for (const auto& bj : b.atoms) {
        if (bj.weight == 0.0) continue;
        sum += ai.weight * bj.weight *
               fidelity_kernel_eval(ai.position, ai.frame, bj.position, bj.frame, spec);
      }
    }
    return sum;
  });
}

double wstar_dist2(const DiracVarifold& a, const DiracVarifold& b,
                   const FidelityKernelSpec& spec) {
  double aa = wstar_inner(a, a, spec);
  double ab = wstar_inner(a, b, spec);
  double bb = wstar_inner(b, b, spec);
  double d2 = aa - 2.0 * ab + bb;
  double scale = std::max({aa, bb, 1.0});
  if (d2 < 0) {
    if (d2 < -1e-12 * scale)
      throw InternalError("wstar_dist2: negative squared distance beyond round-off");
    d2 = 0.0;
  }
  return d2;
}

TerminalCost::TerminalCost(DiracVarifold target, FidelityKernelSpec spec, double lambda)
    : target_(std::move(target)), spec_(spec), lambda_(lambda) {
  spec_.validate();
  check_nondegenerate(target_, "terminal cost target");
  target_self_inner_ = wstar_inner(target_, target_, spec_);
}

std::pair<double, FidelityGradient> TerminalCost::evaluate(
    const ShootingState& endpoint, WeightsModel model, const std::vector<double>& alphas) const {
  const std::size_t nsrc = endpoint.size();
  const int n = endpoint.dim_ambient;
  const int d = endpoint.dim_plane;
  if (target_.dim_ambient != n || target_.dim_plane != d)
    throw Error("terminal cost: endpoint/target dimensions differ");
  if (model == WeightsModel::StaticL2 && alphas.size() != nsrc)
    throw Error("terminal cost: alpha count mismatch");
  if (model == WeightsModel::FisherRao && endpoint.weight_factors.size() != nsrc)
    throw Error("terminal cost: endpoint lacks weight factors");

  // mass factor a_i and current mass m_i = a_i * geometric weight
  std::vector<double> factor(nsrc), geom(nsrc), mass(nsrc), vols(nsrc, 0.0);
  for (std::size_t i = 0; i < nsrc; ++i) {
    switch (model) {
      case WeightsModel::None: factor[i] = 1.0; break;
      case WeightsModel::StaticL2: factor[i] = alphas[i]; break;
      case WeightsModel::FisherRao:
        factor[i] = endpoint.weight_factors[i] * endpoint.weight_factors[i];
        break;
    }
    if (d >= 1) vols[i] = frame_volume(endpoint.frames[i]);
    geom[i] = endpoint.geometric_weight(i);
    mass[i] = factor[i] * geom[i];
    if (d >= 1 && mass[i] != 0.0 && vols[i] < kDegenerateTol)
      throw DegenerateFrame("terminal cost: transported atom " + std::to_string(i) +
                            " is degenerate with nonzero mass");
  }

  FidelityGradient grad;
  grad.d_position.assign(nsrc, Eigen::VectorXd::Zero(n));
  grad.d_frame.assign(nsrc, Eigen::MatrixXd::Zero(d, n));
  grad.d_alpha.assign(nsrc, 0.0);

  const double c2w = 2.0 / (spec_.sigma_w * spec_.sigma_w);

  // self inner <mu1, mu1> and cross inner <mu1, target>, with per-atom
  // "witness field" and its derivatives accumulated in one pass
  double self_inner = 0.0, cross_inner = 0.0;
  std::vector<double> field(nsrc, 0.0);  // sum_i' m_i' k(a,i') - sum_j r'_j k(a,j')
  std::vector<Eigen::VectorXd> dx(nsrc, Eigen::VectorXd::Zero(n));
  std::vector<Eigen::MatrixXd> dframe(nsrc, Eigen::MatrixXd::Zero(d, n));

  for (std::size_t a = 0; a < nsrc; ++a) {
    // frame-degenerate atoms necessarily carry zero mass; they interact with
    // nothing and get zero gradients
    if (d >= 1 && vols[a] < kDegenerateTol) continue;
    for (std::size_t b = 0; b < nsrc; ++b) {
      if (mass[b] == 0.0) continue;
      Eigen::VectorXd delta = endpoint.positions[a] - endpoint.positions[b];
      double pos = std::exp(-delta.squaredNorm() * 0.5 * c2w);
      double s = 1.0, hg = 1.0;
      if (d >= 1) {
        s = grassmann_inner(endpoint.frames[a], endpoint.frames[b]);
        hg = spec_.grass_eval(s);
      }
      double kval = pos * hg;
      self_inner += mass[a] * mass[b] * kval;
      field[a] += mass[b] * kval;
      dx[a] += mass[b] * hg * (-c2w * pos) * delta;
      if (d >= 1)
        dframe[a] += mass[b] * pos * spec_.grass_deriv(s) *
                     grassmann_inner_grad1(endpoint.frames[a], endpoint.frames[b], vols[a],
                                           vols[b], s);
    }
    for (const auto& tb : target_.atoms) {
      if (tb.weight == 0.0) continue;
      Eigen::VectorXd delta = endpoint.positions[a] - tb.position;
      double pos = std::exp(-delta.squaredNorm() * 0.5 * c2w);
      double s = 1.0, hg = 1.0;
      if (d >= 1) {
        s = grassmann_inner(endpoint.frames[a], tb.frame);
        hg = spec_.grass_eval(s);
      }
      double kval = pos * hg;
      cross_inner += mass[a] * tb.weight * kval;
      field[a] -= tb.weight * kval;
      dx[a] -= tb.weight * hg * (-c2w * pos) * delta;
      if (d >= 1)
        dframe[a] -= tb.weight * pos * spec_.grass_deriv(s) *
                     grassmann_inner_grad1(endpoint.frames[a], tb.frame, vols[a],
                                           frame_volume(tb.frame), s);
    }
  }

  double dist2 = self_inner - 2.0 * cross_inner + target_self_inner_;
  double scale = std::max({self_inner, target_self_inner_, 1.0});
  if (dist2 < 0) {
    if (dist2 < -1e-12 * scale)
      throw InternalError("terminal cost: negative squared distance beyond round-off");
    dist2 = 0.0;
  }
  double value = 0.5 * lambda_ * dist2;

  for (std::size_t a = 0; a < nsrc; ++a) {
    grad.d_position[a] = lambda_ * mass[a] * dx[a];
    if (d >= 1) {
      Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(d, n);
      if (vols[a] >= kDegenerateTol)
        dm = factor[a] * frame_volume_gradient(endpoint.frames[a]);
      grad.d_frame[a] = lambda_ * (field[a] * dm + mass[a] * dframe[a]);
    }
    double dmass = lambda_ * field[a];  // d value / d mass_a
    switch (model) {
      case WeightsModel::None: grad.d_alpha[a] = 0.0; break;
      case WeightsModel::StaticL2: grad.d_alpha[a] = dmass * geom[a]; break;
      case WeightsModel::FisherRao:
        grad.d_alpha[a] = dmass * geom[a] * 2.0 * endpoint.weight_factors[a];
        break;
    }
  }
  return {value, std::move(grad)};
}

std::pair<double, FidelityGradient> terminal_cost_and_grad(const ShootingState& endpoint,
                                                           WeightsModel model,
                                                           const std::vector<double>& alphas,
                                                           const DiracVarifold& target,
                                                           const FidelityKernelSpec& spec,
                                                           double lambda) {
  TerminalCost cost(target, spec, lambda);
  return cost.evaluate(endpoint, model, alphas);
}

}  // namespace varmeta
