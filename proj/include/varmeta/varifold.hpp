// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "varmeta/common.hpp"

namespace varmeta {

/// A weighted oriented Dirac r δ_(x,U). The oriented d-plane U is stored as a
/// frame of d spanning row vectors whose parallelotope volume equals the
/// weight, so the weight field is a cache of the frame volume, never an
/// independent quantity. For d = 0 (plain measures) the frame is empty and
/// the weight is free.
struct DiracAtom {
  Eigen::VectorXd position;  // length n
  Eigen::MatrixXd frame;     // d x n, rows are the frame vectors; 0 x n for d = 0
  double weight = 0.0;       // = frame volume for d >= 1

  bool degenerate(double tol = 1e-12) const { return weight <= tol; }
};

/// Finite sum of weighted oriented Diracs, all sharing the same ambient
/// dimension n >= 2 and plane dimension d in {0, 1, 2}.
struct DiracVarifold {
  int dim_ambient = 0;  // n
  int dim_plane = 0;    // d
  std::vector<DiracAtom> atoms;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }

  /// Throws Error if any structural invariant is violated (mismatched sizes,
  /// negative weights, weight/frame-volume disagreement beyond 1e-12 relative).
  void validate() const;
};

/// Ordered vertex list; closed polylines connect the last vertex back to the
/// first.
struct Polyline {
  std::vector<Eigen::VectorXd> vertices;
  bool closed = false;
};

/// Triangle soup with consistent orientation (vertices in R^3).
struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Parallelotope volume |u^(1) ^ ... ^ u^(d)| = sqrt(det Gram) of a frame of
/// row vectors. Rank-deficient frames give 0. A 0 x n frame has volume 1.
double frame_volume(const Eigen::MatrixXd& frame);

/// Gradient of frame_volume with respect to the frame rows, i.e. the matrix
/// with rows (1/V) sum_l C_kl u^(l) where C is the cofactor matrix of the
/// Gram matrix. Frames with volume below tol get a zero gradient.
Eigen::MatrixXd frame_volume_gradient(const Eigen::MatrixXd& frame, double tol = 1e-14);

/// Normalized Grassmann inner product det(u_i . u'_j) / (vol(A) vol(B)),
/// in [-1, 1]; depends only on the oriented planes spanned by the frames.
/// Throws DegenerateFrame if either frame volume is below 1e-14.
double grassmann_inner(const Eigen::MatrixXd& frame_a, const Eigen::MatrixXd& frame_b);

/// One Dirac per segment: midpoint position, edge vector as the single frame
/// vector, weight = segment length. Zero-length segments produce degenerate
/// atoms (kept, flagged by weight 0).
DiracVarifold curve_to_varifold(const Polyline& curve);

/// One Dirac per triangle: barycenter position, frame (e1, e2/2) built from
/// the two edges at the first vertex so the frame volume equals the triangle
/// area, weight = area.
DiracVarifold mesh_to_varifold(const TriMesh& mesh);

/// Exact pushforward under the affine map x -> A x + b: positions move,
/// frame rows map through A, and weights are recomputed as the mapped frame
/// volume (automatically r * J_U phi). For d = 0 the weight is unchanged.
/// Throws SingularMap if |det A| < 1e-14.
DiracVarifold pushforward_affine(const DiracVarifold& v, const Eigen::MatrixXd& map,
                                 const Eigen::VectorXd& shift);

/// Total weight sum r_i.
double total_mass(const DiracVarifold& v);

/// Rescales atom i's weight by factors[i] > 0, scaling the frame rows by
/// factors[i]^(1/d) so the weight/volume invariant is preserved. For d = 0
/// only the weight changes.
DiracVarifold with_weight_factors(const DiracVarifold& v, const std::vector<double>& factors);

}  // namespace varmeta
