// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/varifold.hpp"

#include <cmath>

namespace varmeta {

void DiracVarifold::validate() const {
  if (dim_ambient < 2) throw Error("varifold: ambient dimension must be >= 2");
  if (dim_plane < 0 || dim_plane > 2) throw Error("varifold: plane dimension must be in {0,1,2}");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (a.position.size() != dim_ambient)
      throw Error("varifold: atom " + std::to_string(i) + " position size mismatch");
    if (a.frame.rows() != dim_plane || (dim_plane > 0 && a.frame.cols() != dim_ambient))
      throw Error("varifold: atom " + std::to_string(i) + " frame shape mismatch");
    if (!a.position.allFinite() || !a.frame.allFinite() || !std::isfinite(a.weight))
      throw NonFinite("varifold: atom " + std::to_string(i) + " has non-finite entries");
    if (a.weight < 0) throw Error("varifold: atom " + std::to_string(i) + " has negative weight");
    if (dim_plane >= 1) {
      double vol = frame_volume(a.frame);
      double scale = std::max({vol, a.weight, 1.0});
      if (std::abs(vol - a.weight) > 1e-12 * scale)
        throw Error("varifold: atom " + std::to_string(i) +
                    " weight disagrees with frame volume");
    }
  }
}

double frame_volume(const Eigen::MatrixXd& frame) {
  const auto d = frame.rows();
  if (d == 0) return 1.0;
  if (d == 1) return frame.row(0).norm();
  if (d == 2) {
    double g11 = frame.row(0).squaredNorm();
    double g22 = frame.row(1).squaredNorm();
    double g12 = frame.row(0).dot(frame.row(1));
    double det = g11 * g22 - g12 * g12;
    return det > 0 ? std::sqrt(det) : 0.0;
  }
  Eigen::MatrixXd gram = frame * frame.transpose();
  double det = gram.determinant();
  return det > 0 ? std::sqrt(det) : 0.0;
}

Eigen::MatrixXd frame_volume_gradient(const Eigen::MatrixXd& frame, double tol) {
  const auto d = frame.rows();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(d, frame.cols());
  double vol = frame_volume(frame);
  if (d == 0 || vol < tol) return grad;
  if (d == 1) {
    grad.row(0) = frame.row(0) / vol;
    return grad;
  }
  // rows: (1/V) sum_l C_kl u^(l), C the cofactor matrix of the Gram matrix
  double g11 = frame.row(0).squaredNorm();
  double g22 = frame.row(1).squaredNorm();
  double g12 = frame.row(0).dot(frame.row(1));
  grad.row(0) = (g22 * frame.row(0) - g12 * frame.row(1)) / vol;
  grad.row(1) = (g11 * frame.row(1) - g12 * frame.row(0)) / vol;
  return grad;
}

double grassmann_inner(const Eigen::MatrixXd& frame_a, const Eigen::MatrixXd& frame_b) {
  if (frame_a.rows() != frame_b.rows() || frame_a.cols() != frame_b.cols())
    throw Error("grassmann_inner: frame shapes differ");
  const auto d = frame_a.rows();
  if (d == 0) return 1.0;
  double va = frame_volume(frame_a);
  double vb = frame_volume(frame_b);
  if (va < 1e-14 || vb < 1e-14)
    throw DegenerateFrame("grassmann_inner: degenerate frame (volume < 1e-14)");
  double det;
  if (d == 1) {
    det = frame_a.row(0).dot(frame_b.row(0));
  } else if (d == 2) {
    double b11 = frame_a.row(0).dot(frame_b.row(0));
    double b12 = frame_a.row(0).dot(frame_b.row(1));
    double b21 = frame_a.row(1).dot(frame_b.row(0));
    double b22 = frame_a.row(1).dot(frame_b.row(1));
    det = b11 * b22 - b12 * b21;
  } else {
    det = (frame_a * frame_b.transpose()).determinant();
  }
  return det / (va * vb);
}

DiracVarifold curve_to_varifold(const Polyline& curve) {
  if (curve.vertices.size() < 2)
    throw Error("curve_to_varifold: need at least one segment");
  const int n = static_cast<int>(curve.vertices.front().size());
  DiracVarifold out;
  out.dim_ambient = n;
  out.dim_plane = 1;
  const std::size_t nv = curve.vertices.size();
  const std::size_t nseg = curve.closed ? nv : nv - 1;
  out.atoms.reserve(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    const Eigen::VectorXd& a = curve.vertices[i];
    const Eigen::VectorXd& b = curve.vertices[(i + 1) % nv];
    DiracAtom atom;
    atom.position = 0.5 * (a + b);
    atom.frame.resize(1, n);
    atom.frame.row(0) = (b - a).transpose();
    atom.weight = atom.frame.row(0).norm();
    out.atoms.push_back(std::move(atom));
  }
  return out;
}

DiracVarifold mesh_to_varifold(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw Error("mesh_to_varifold: need at least one triangle");
  DiracVarifold out;
  out.dim_ambient = 3;
  out.dim_plane = 2;
  out.atoms.reserve(mesh.triangles.size());
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& tri : mesh.triangles) {
    for (int idx : tri)
      if (idx < 0 || idx >= nv) throw Error("mesh_to_varifold: triangle index out of range");
    const Eigen::Vector3d& v0 = mesh.vertices[tri[0]];
    const Eigen::Vector3d& v1 = mesh.vertices[tri[1]];
    const Eigen::Vector3d& v2 = mesh.vertices[tri[2]];
    DiracAtom atom;
    atom.position = (v0 + v1 + v2) / 3.0;
    atom.frame.resize(2, 3);
    atom.frame.row(0) = (v1 - v0).transpose();
    atom.frame.row(1) = 0.5 * (v2 - v0).transpose();
    atom.weight = frame_volume(atom.frame);  // = triangle area
    out.atoms.push_back(std::move(atom));
  }
  return out;
}

DiracVarifold pushforward_affine(const DiracVarifold& v, const Eigen::MatrixXd& map,
                                 const Eigen::VectorXd& shift) {
  if (map.rows() != v.dim_ambient || map.cols() != v.dim_ambient || shift.size() != v.dim_ambient)
    throw Error("pushforward_affine: map shape mismatch");
  if (std::abs(map.determinant()) < 1e-14)
    throw SingularMap("pushforward_affine: |det A| < 1e-14");
  DiracVarifold out;
  out.dim_ambient = v.dim_ambient;
  out.dim_plane = v.dim_plane;
  out.atoms.reserve(v.atoms.size());
  for (const auto& a : v.atoms) {
    DiracAtom m;
    m.position = map * a.position + shift;
    m.frame = a.frame * map.transpose();  // rows u -> A u
    m.weight = v.dim_plane >= 1 ? frame_volume(m.frame) : a.weight;
    out.atoms.push_back(std::move(m));
  }
  return out;
}

double total_mass(const DiracVarifold& v) {
  double sum = 0.0;
  for (const auto& a : v.atoms) sum += a.weight;
  return sum;
}

DiracVarifold with_weight_factors(const DiracVarifold& v, const std::vector<double>& factors) {
  if (factors.size() != v.atoms.size())
    throw Error("with_weight_factors: factor count mismatch");
  DiracVarifold out = v;
  for (std::size_t i = 0; i < out.atoms.size(); ++i) {
    double f = factors[i];
    if (!(f >= 0)) throw InvalidWeights("with_weight_factors: negative factor");
    if (v.dim_plane == 0) {
      out.atoms[i].weight *= f;
    } else {
      double row_scale = v.dim_plane == 1 ? f : std::sqrt(f);
      out.atoms[i].frame *= row_scale;
      out.atoms[i].weight = frame_volume(out.atoms[i].frame);
    }
  }
  return out;
}

}  // namespace varmeta
