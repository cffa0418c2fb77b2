// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/state.hpp"

namespace varmeta {

ShootingState ShootingState::from_varifold(const DiracVarifold& v, bool with_factors) {
  ShootingState q;
  q.dim_ambient = v.dim_ambient;
  q.dim_plane = v.dim_plane;
  q.positions.reserve(v.size());
  q.frames.reserve(v.size());
  q.base_weights.reserve(v.size());
  for (const auto& a : v.atoms) {
    q.positions.push_back(a.position);
    q.frames.push_back(a.frame);
    q.base_weights.push_back(a.weight);
  }
  if (with_factors) q.weight_factors.assign(v.size(), 1.0);
  return q;
}

DiracVarifold ShootingState::to_varifold(const std::vector<double>& mass_factors) const {
  DiracVarifold v;
  v.dim_ambient = dim_ambient;
  v.dim_plane = dim_plane;
  v.atoms.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto& a = v.atoms[i];
    a.position = positions[i];
    a.frame = dim_plane >= 1 ? frames[i] : Eigen::MatrixXd(0, dim_ambient);
    double f = mass_factors.empty() ? 1.0 : mass_factors[i];
    a.weight = f * geometric_weight(i);
    if (dim_plane >= 1 && !mass_factors.empty() && f != 1.0) {
      // keep the weight == frame volume invariant when masses are rescaled
      a.frame *= dim_plane == 1 ? f : std::sqrt(f);
      a.weight = frame_volume(a.frame);
    }
  }
  return v;
}

Costate Costate::zero(const ShootingState& q) {
  Costate p;
  p.pos_momenta.assign(q.size(), Eigen::VectorXd::Zero(q.dim_ambient));
  p.frame_momenta.assign(q.size(), Eigen::MatrixXd::Zero(q.dim_plane, q.dim_ambient));
  if (!q.weight_factors.empty()) p.weight_momenta.assign(q.size(), 0.0);
  return p;
}

}  // namespace varmeta
