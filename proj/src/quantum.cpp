#include "bellkit/quantum.hpp"

#include <cmath>
#include <complex>

namespace bellkit::quantum {

double PairDistribution::product_expectation() const noexcept {
  return cell[0][0] - cell[0][1] - cell[1][0] + cell[1][1];
}

double PairDistribution::first_mean() const noexcept {
  return (cell[1][0] + cell[1][1]) - (cell[0][0] + cell[0][1]);
}

double PairDistribution::second_mean() const noexcept {
  return (cell[0][1] + cell[1][1]) - (cell[0][0] + cell[1][0]);
}

std::array<double, 4> PairDistribution::flattened() const noexcept {
  return {cell[0][0], cell[0][1], cell[1][0], cell[1][1]};
}

double pair_expectation_AA(const SettingVector& a, const SettingVector& b) noexcept {
  return dot(a, b);
}

double pair_expectation_AB(const SettingVector& a, const SettingVector& b) noexcept {
  return -dot(a, b);
}

PairDistribution joint_pair_distribution(const SettingVector& a, const SettingVector& b) noexcept {
  const double c = dot(a, b);
  const double equal = 0.25 * (1.0 + c);
  const double opposite = 0.25 * (1.0 - c);
  PairDistribution p;
  p.cell[0][0] = equal;
  p.cell[1][1] = equal;
  p.cell[0][1] = opposite;
  p.cell[1][0] = opposite;
  return p;
}

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Vec4 = std::array<cplx, 4>;

// n . sigma with the standard Pauli matrices.
Mat2 spin_matrix(const SettingVector& n) {
  const cplx i{0.0, 1.0};
  Mat2 m{};
  m[0][0] = n.z();
  m[0][1] = n.x() - i * n.y();
  m[1][0] = n.x() + i * n.y();
  m[1][1] = -n.z();
  return m;
}

}  // namespace

double singlet_tensor_expectation(const SettingVector& a, const SettingVector& b) {
  const double r = 1.0 / std::sqrt(2.0);
  // Basis |00>, |01>, |10>, |11> with the first factor most significant.
  const Vec4 psi{0.0, r, -r, 0.0};

  const Mat2 sa = spin_matrix(a);
  const Mat2 sb = spin_matrix(b);

  Vec4 phi{};
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const cplx k = sa[row >> 1][col >> 1] * sb[row & 1][col & 1];
      phi[row] += k * psi[col];
    }
  }
  cplx value{};
  for (int k = 0; k < 4; ++k) value += std::conj(psi[k]) * phi[k];

  if (std::abs(value.imag()) >= 1e-12)
    throw Error(ErrorCode::corrupted_data, "singlet expectation has an imaginary part");
  return value.real();
}

}  // namespace bellkit::quantum
