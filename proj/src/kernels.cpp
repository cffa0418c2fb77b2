// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/kernels.hpp"

#include <cmath>

namespace varmeta {

double kv_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const DeformKernelSpec& spec) {
  double isq = 1.0 / (spec.sigma_v * spec.sigma_v);
  return std::exp(-(x - y).squaredNorm() * isq);
}

Eigen::VectorXd kv_grad1(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         const DeformKernelSpec& spec) {
  double c2 = 2.0 / (spec.sigma_v * spec.sigma_v);
  return -c2 * kv_eval(x, y, spec) * (x - y);
}

Eigen::VectorXd kv_grad2(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         const DeformKernelSpec& spec) {
  return -kv_grad1(x, y, spec);
}

Eigen::MatrixXd kv_hess12(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const DeformKernelSpec& spec) {
  double c2 = 2.0 / (spec.sigma_v * spec.sigma_v);
  double k = kv_eval(x, y, spec);
  Eigen::VectorXd r = x - y;
  Eigen::MatrixXd m = -c2 * c2 * k * (r * r.transpose());
  m.diagonal().array() += c2 * k;
  return m;
}

namespace {

void check_sizes(const ShootingState& q, const Costate& p) {
  if (q.size() != p.pos_momenta.size() || q.size() != p.frame_momenta.size())
    throw Error("velocity_field: state/costate size mismatch");
}

}  // namespace

std::vector<Eigen::VectorXd> velocity_field(const ShootingState& q, const Costate& p,
                                            const DeformKernelSpec& spec,
                                            const std::vector<Eigen::VectorXd>& targets) {
  check_sizes(q, p);
  const double c2 = 2.0 / (spec.sigma_v * spec.sigma_v);
  const int n = q.dim_ambient;
  const int d = q.dim_plane;
  std::vector<Eigen::VectorXd> out(targets.size());
  parallel_for_blocks(targets.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (std::size_t j = 0; j < q.size(); ++j) {
        Eigen::VectorXd r = targets[t] - q.positions[j];
        double k = std::exp(-r.squaredNorm() * 0.5 * c2);
        v += k * p.pos_momenta[j];
        for (int l = 0; l < d; ++l)
          v += c2 * k * r.dot(q.frames[j].row(l)) * p.frame_momenta[j].row(l).transpose();
      }
      out[t] = std::move(v);
    }
  });
  return out;
}

std::vector<Eigen::MatrixXd> velocity_field_jacobian(const ShootingState& q, const Costate& p,
                                                     const DeformKernelSpec& spec,
                                                     const std::vector<Eigen::VectorXd>& targets) {
  check_sizes(q, p);
  const double c2 = 2.0 / (spec.sigma_v * spec.sigma_v);
  const int n = q.dim_ambient;
  const int d = q.dim_plane;
  std::vector<Eigen::MatrixXd> out(targets.size());
  parallel_for_blocks(targets.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t j = 0; j < q.size(); ++j) {
        Eigen::VectorXd r = targets[t] - q.positions[j];
        double k = std::exp(-r.squaredNorm() * 0.5 * c2);
        jac -= c2 * k * p.pos_momenta[j] * r.transpose();
        for (int l = 0; l < d; ++l) {
          Eigen::VectorXd u = q.frames[j].row(l).transpose();
          Eigen::VectorXd mu = c2 * k * (u - c2 * r.dot(u) * r);
          jac += p.frame_momenta[j].row(l).transpose() * mu.transpose();
        }
      }
      out[t] = std::move(jac);
    }
  });
  return out;
}

std::vector<std::vector<Eigen::MatrixXd>> velocity_field_second(
    const ShootingState& q, const Costate& p, const DeformKernelSpec& spec,
    const std::vector<Eigen::VectorXd>& targets) {
  check_sizes(q, p);
  const double c2 = 2.0 / (spec.sigma_v * spec.sigma_v);
  const int n = q.dim_ambient;
  const int d = q.dim_plane;
  std::vector<std::vector<Eigen::MatrixXd>> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<Eigen::MatrixXd> hess(n, Eigen::MatrixXd::Zero(n, n));
    for (std::size_t j = 0; j < q.size(); ++j) {
      Eigen::VectorXd r = targets[t] - q.positions[j];
      double k = std::exp(-r.squaredNorm() * 0.5 * c2);
      // d^2_y k = -c2 k I + c2^2 k r r^T
      Eigen::MatrixXd hk = c2 * c2 * k * (r * r.transpose());
      hk.diagonal().array() -= c2 * k;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            hess[c](a, b) += hk(b, c) * p.pos_momenta[j](a);
      for (int l = 0; l < d; ++l) {
        Eigen::VectorXd u = q.frames[j].row(l).transpose();
        double ru = r.dot(u);
        // d^2_y (d1 k . u) = -c2^2 k [u r^T + r u^T + (r.u) I] + c2^3 k (r.u) r r^T
        Eigen::MatrixXd hu = -c2 * c2 * k * (u * r.transpose() + r * u.transpose());
        hu.diagonal().array() -= c2 * c2 * k * ru;
        hu += c2 * c2 * c2 * k * ru * (r * r.transpose());
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              hess[c](a, b) += hu(b, c) * p.frame_momenta[j](l, a);
      }
    }
    out[t] = std::move(hess);
  }
  return out;
}

double fidelity_kernel_eval(const Eigen::VectorXd& x, const Eigen::MatrixXd& frame_u,
                            const Eigen::VectorXd& x2, const Eigen::MatrixXd& frame_u2,
                            const FidelityKernelSpec& spec) {
  double pos = spec.pos_eval(x, x2);
  if (frame_u.rows() == 0) return pos;
  return pos * spec.grass_eval(grassmann_inner(frame_u, frame_u2));
}

}  // namespace varmeta
