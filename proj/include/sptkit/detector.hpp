#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "sptkit/group.hpp"
#include "sptkit/linalg.hpp"

namespace sptkit {

enum class DetectorKind { u1, so3 };

inline std::string to_string(DetectorKind k) { return k == DetectorKind::u1 ? "u1" : "so3"; }

/// Finite subgroup standing in for a compact group, with the on-site
/// matrices realizing each subgroup element.
struct CompactDetectorSpec {
  DetectorKind kind;
  GroupPtr subgroup;
  std::vector<Mat> realizations;
};

/// {e, R_x(pi), R_y(pi), R_z(pi)} as Z2xZ2 (elements 1, 2, 3) acting on spin
/// two_s/2 by exp(i pi S_alpha). Linear for integer spin, projective with
/// sign multipliers for half-integer spin.
inline CompactDetectorSpec so3_detector(int two_s) {
  auto s = spin_operators(two_s);
  CompactDetectorSpec spec{DetectorKind::so3, build_group("Z2xZ2"), {}};
  spec.realizations.push_back(Mat::Identity(two_s + 1, two_s + 1));
  spec.realizations.push_back(expi_hermitian(s.x, std::numbers::pi));
  spec.realizations.push_back(expi_hermitian(s.y, std::numbers::pi));
  spec.realizations.push_back(expi_hermitian(s.z, std::numbers::pi));
  return spec;
}

/// Z_n inside U(1): element k acts on basis state b by exp(2 pi i k q_b / n).
inline CompactDetectorSpec u1_detector(int n, const std::vector<int>& basis_charges) {
  require(n >= 1, "u1 detector needs n >= 1");
  CompactDetectorSpec spec{DetectorKind::u1, build_group("Z" + std::to_string(n)), {}};
  const auto d = static_cast<Eigen::Index>(basis_charges.size());
  for (int k = 0; k < n; ++k) {
    Mat m = Mat::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) m(b, b) = Phase::exact(static_cast<std::int64_t>(k) * basis_charges[b], n).value();
    spec.realizations.push_back(std::move(m));
  }
  return spec;
}

}  // namespace sptkit
