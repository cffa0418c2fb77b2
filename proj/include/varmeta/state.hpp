// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "varmeta/varifold.hpp"

namespace varmeta {

/// Time slice of the shooting system: per-atom positions and frames, plus
/// (Fisher-Rao model only) the square-root weight rescaling factors, which
/// start at 1. base_weights carries the source weights r_i; for d = 0 atoms
/// they are the transported mass itself, and the Fisher-Rao weight energy is
/// normalized by them.
struct ShootingState {
  int dim_ambient = 0;
  int dim_plane = 0;
  std::vector<Eigen::VectorXd> positions;
  std::vector<Eigen::MatrixXd> frames;        // empty matrices for d = 0
  std::vector<double> weight_factors;         // sqrt factors; empty unless FR
  std::vector<double> base_weights;           // source weights r_i

  std::size_t size() const { return positions.size(); }

  static ShootingState from_varifold(const DiracVarifold& v, bool with_weight_factors);

  /// Current geometric weight of atom i: frame volume for d >= 1, base weight
  /// for d = 0 (a flow does not rescale 0-dimensional mass).
  double geometric_weight(std::size_t i) const {
    return dim_plane >= 1 ? frame_volume(frames[i]) : base_weights[i];
  }

  /// Materializes the current varifold. Atom masses are
  /// factors[i] * geometric_weight(i); pass empty factors for all-ones.
  DiracVarifold to_varifold(const std::vector<double>& mass_factors = {}) const;
};

/// Costate (momenta) dual to ShootingState. weight_momenta (p^alpha) are
/// constant along FR trajectories.
struct Costate {
  std::vector<Eigen::VectorXd> pos_momenta;
  std::vector<Eigen::MatrixXd> frame_momenta;
  std::vector<double> weight_momenta;  // empty unless FR

  std::size_t size() const { return pos_momenta.size(); }

  static Costate zero(const ShootingState& q);
};

}  // namespace varmeta
