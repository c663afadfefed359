#include "dirac8/matrix_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace dirac8::algebra {

namespace {

constexpr complex kI{0.0, 1.0};

using DynMatrix = Eigen::MatrixXcd;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
}

// Ordering used for every eigenvalue list handed out by this module.
bool eig_less(const complex& a, const complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix zero(int n) { return ComplexMatrix::Zero(n, n); }

ComplexMatrix pauli(PauliAxis axis) {
  ComplexMatrix s(2, 2);
  switch (axis) {
    case PauliAxis::x:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case PauliAxis::y:
      s << 0.0, -kI, kI, 0.0;
      break;
    case PauliAxis::z:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return s;
}

ComplexMatrix block2x2(const ComplexMatrix& a11, const ComplexMatrix& a12,
                       const ComplexMatrix& a21, const ComplexMatrix& a22) {
  const auto n = a11.rows();
  for (const auto* b : {&a11, &a12, &a21, &a22}) {
    if (b->rows() != n || b->cols() != n) {
      throw std::invalid_argument("block2x2: blocks must be square and of equal size");
    }
  }
  ComplexMatrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a11;
  m.topRightCorner(n, n) = a12;
  m.bottomLeftCorner(n, n) = a21;
  m.bottomRightCorner(n, n) = a22;
  return m;
}

ComplexMatrix alpha(int index) {
  switch (index) {
    case 0:
      return block2x2(identity(2), zero(2), zero(2), -identity(2));
    case 1:
      return block2x2(zero(2), pauli(PauliAxis::x), pauli(PauliAxis::x), zero(2));
    case 2:
      return block2x2(zero(2), pauli(PauliAxis::y), pauli(PauliAxis::y), zero(2));
    case 3:
      return block2x2(zero(2), pauli(PauliAxis::z), pauli(PauliAxis::z), zero(2));
    default:
      throw std::out_of_range("alpha: index must be in 0..3, got " + std::to_string(index));
  }
}

ComplexMatrix a_matrix(ATag tag) {
  const ComplexMatrix a0 = alpha(0);
  switch (tag) {
    case ATag::zero_minus:
      return block2x2(zero(4), zero(4), -a0, a0);
    case ATag::zero_plus:
      return block2x2(a0, -a0, zero(4), zero(4));
    case ATag::one:
      return block2x2(alpha(1), zero(4), zero(4), alpha(1));
    case ATag::two:
      return block2x2(alpha(2), zero(4), zero(4), alpha(2));
    case ATag::three:
      return block2x2(alpha(3), zero(4), zero(4), alpha(3));
  }
  throw std::invalid_argument("a_matrix: invalid tag");
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "anticommutator");
  require_square(b, "anticommutator");
  if (a.rows() != b.rows()) throw std::invalid_argument("anticommutator: size mismatch");
  return a * b + b * a;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: size mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

VerificationReport check_algebra(const QuantumParams& params) {
  params.validate();
  VerificationReport report;
  auto exact = [&report](std::string name, std::string relation, const ComplexMatrix& lhs,
                         const ComplexMatrix& rhs) {
    report.add(std::move(name), std::move(relation), max_abs_diff(lhs, rhs), 0.0,
               "exact equality");
  };

  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    const auto s = pauli(static_cast<PauliAxis>(i));
    exact(std::string("pauli_") + axes[i] + "_squared", std::string("sigma_") + axes[i] + "^2 = I2",
          s * s, identity(2));
  }

  for (int j = 0; j < 4; ++j) {
    const auto a = alpha(j);
    exact("alpha_" + std::to_string(j) + "_squared", "alpha_" + std::to_string(j) + "^2 = I4",
          a * a, identity(4));
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      exact("alpha_" + std::to_string(i) + std::to_string(j) + "_anticommute",
            "alpha_" + std::to_string(i) + " alpha_" + std::to_string(j) + " + alpha_" +
                std::to_string(j) + " alpha_" + std::to_string(i) + " = 0_4",
            anticommutator(alpha(i), alpha(j)), zero(4));
    }
  }

  const auto am = a_matrix(ATag::zero_minus);
  const auto ap = a_matrix(ATag::zero_plus);
  const auto i4 = identity(4);
  const auto z4 = zero(4);
  const auto lower = block2x2(z4, z4, -i4, i4);
  const auto upper = block2x2(i4, -i4, z4, z4);
  exact("A0minus_squared", "A_{0-}^2 = [[0,0],[-I4,I4]]", am * am, lower);
  exact("A0minus_A0plus", "A_{0-} A_{0+} = A_{0-}^2", am * ap, am * am);
  exact("A0plus_squared", "A_{0+}^2 = [[I4,-I4],[0,0]]", ap * ap, upper);
  exact("A0plus_A0minus", "A_{0+} A_{0-} = A_{0+}^2", ap * am, ap * ap);
  exact("A0_anticommutator", "A_{0+} A_{0-} + A_{0-} A_{0+} = [[I4,-I4],[-I4,I4]]",
        anticommutator(ap, am), block2x2(i4, -i4, -i4, i4));
  exact("A0_squares_sum", "A_{0-}^2 + A_{0+}^2 = [[I4,-I4],[-I4,I4]]", am * am + ap * ap,
        block2x2(i4, -i4, -i4, i4));

  const ATag spatial[] = {ATag::one, ATag::two, ATag::three};
  for (int j = 0; j < 3; ++j) {
    const auto a = a_matrix(spatial[j]);
    const auto js = std::to_string(j + 1);
    exact("A" + js + "_squared", "A_" + js + "^2 = I8", a * a, identity(8));
    exact("A0minus_A" + js + "_anticommute", "A_{0-} A_" + js + " + A_" + js + " A_{0-} = 0_8",
          anticommutator(am, a), zero(8));
    exact("A0plus_A" + js + "_anticommute", "A_{0+} A_" + js + " + A_" + js + " A_{0+} = 0_8",
          anticommutator(ap, a), zero(8));
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const auto is = std::to_string(i + 1);
      const auto js = std::to_string(j + 1);
      exact("A" + is + js + "_anticommute", "A_" + is + " A_" + js + " + A_" + js + " A_" + is + " = 0_8",
            anticommutator(a_matrix(spatial[i]), a_matrix(spatial[j])), zero(8));
    }
  }

  // Squared Hamiltonians at a few momenta, scaled to the parameter set.
  const double pc = params.m_e * params.c;
  const Momentum3 probes[] = {{0.0, 0.0, 0.0}, {0.3 * pc, -1.2 * pc, 0.7 * pc}, {0.0, 0.0, 2.5 * pc}};
  double d4_err = 0.0;
  double d8_err = 0.0;
  for (const auto& p : probes) {
    const auto h4 = hamiltonian_d4(p, params);
    const double e2 = params.rest_energy() * params.rest_energy() + params.c * params.c * p.norm_squared();
    d4_err = std::max(d4_err, max_abs_diff(h4 * h4, e2 * identity(4)) / e2);
    const auto h8 = hamiltonian_d8(p, params);
    d8_err = std::max(d8_err, max_abs_diff(h8 * h8, hamiltonian_d8_squared_closed_form(p, params)) / e2);
  }
  report.add("hamiltonian_d4_squared", "H_D4^2 = (m_e^2 c^4 + c^2 |p|^2) I4", d4_err, 1e-12,
             "max entry error relative to m_e^2 c^4 + c^2 |p|^2");
  report.add("hamiltonian_d8_squared", "H_D8^2 = m_f^2 c^4 A_{0-}^2 + m_e^2 c^4 A_{0+}^2 + c^2 |p|^2 I8",
             d8_err, 1e-12, "max entry error relative to m_e^2 c^4 + c^2 |p|^2");
  return report;
}

ComplexMatrix hamiltonian_d4(const Momentum3& p, const QuantumParams& params) {
  params.validate();
  return params.rest_energy() * alpha(0) +
         params.c * (p.x * alpha(1) + p.y * alpha(2) + p.z * alpha(3));
}

ComplexMatrix hamiltonian_d8(const Momentum3& p, const QuantumParams& params) {
  params.validate();
  return params.mu_f() * a_matrix(ATag::zero_minus) + params.mu_e() * a_matrix(ATag::zero_plus) +
         params.c * (p.x * a_matrix(ATag::one) + p.y * a_matrix(ATag::two) +
                     p.z * a_matrix(ATag::three));
}

ComplexMatrix hamiltonian_d8_squared_closed_form(const Momentum3& p, const QuantumParams& params) {
  params.validate();
  const auto am = a_matrix(ATag::zero_minus);
  const auto ap = a_matrix(ATag::zero_plus);
  const double mf2c4 = std::pow(params.m_f() * params.c * params.c, 2);
  const double me2c4 = std::pow(params.rest_energy(), 2);
  return mf2c4 * (am * am) + me2c4 * (ap * ap) +
         params.c * params.c * p.norm_squared() * identity(8);
}

ComplexMatrix extract_sector(const ComplexMatrix& m8, const std::array<int, 4>& slots) {
  if (m8.rows() != 8 || m8.cols() != 8) throw std::invalid_argument("extract_sector: need 8x8");
  ComplexMatrix s(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s(r, c) = m8(slots[r], slots[c]);
  }
  return s;
}

ComplexMatrix sector_hamiltonian(double p_z, const QuantumParams& params) {
  return extract_sector(hamiltonian_d8(Momentum3::along_z(p_z), params), kSpinUpSlots);
}

std::vector<ComplexVector> null_space(const ComplexMatrix& m, double tol) {
  require_square(m, "null_space");
  if (!(tol > 0.0)) throw std::invalid_argument("null_space: tol must be positive");
  const DynMatrix a = m;
  Eigen::JacobiSVD<DynMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double norm = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol * norm;
  std::vector<ComplexVector> basis;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= threshold) basis.emplace_back(svd.matrixV().col(i));
  }
  return basis;
}

ComplexMatrix columns(const std::vector<ComplexVector>& vs) {
  if (vs.empty()) return ComplexMatrix(0, 0);
  ComplexMatrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

double distance_from_span(const ComplexVector& v, const std::vector<ComplexVector>& basis) {
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("distance_from_span: zero vector");
  ComplexVector r = v / norm;
  // Two Gram-Schmidt sweeps keep the residual at rounding level.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (const auto& q : basis) r -= q * q.dot(r);
  }
  return r.norm();
}

ComplexVector eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  Eigen::ComplexEigenSolver<DynMatrix> solver(DynMatrix(m), false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver failed");
  ComplexVector ev = solver.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), eig_less);
  return ev;
}

EigenDecomposition eigen_decompose(const ComplexMatrix& m, double cluster_tol) {
  require_square(m, "eigen_decompose");
  const auto n = m.rows();
  Eigen::ComplexEigenSolver<DynMatrix> solver(DynMatrix(m), true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_decompose: solver failed");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& raw_values = solver.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return eig_less(raw_values(a), raw_values(b)); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = raw_values(order[static_cast<std::size_t>(i)]);
    ComplexVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v / v.norm();
  }

  double scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(out.values(i)));
  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.min_gap = std::min(out.min_gap, std::abs(out.values(i) - out.values(j)));
    }
  }

  // Group near-equal eigenvalues.
  std::vector<int> group(static_cast<std::size_t>(n), -1);
  int n_groups = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (group[static_cast<std::size_t>(i)] >= 0) continue;
    group[static_cast<std::size_t>(i)] = n_groups;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (group[static_cast<std::size_t>(j)] < 0 &&
          std::abs(out.values(i) - out.values(j)) <= cluster_tol * scale) {
        group[static_cast<std::size_t>(j)] = n_groups;
      }
    }
    ++n_groups;
  }

  out.diagonalizable = true;
  const double mnorm = std::max(1.0, DynMatrix(m).operatorNorm());
  for (int g = 0; g < n_groups; ++g) {
    std::vector<Eigen::Index> members;
    complex mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (group[static_cast<std::size_t>(i)] == g) {
        members.push_back(i);
        mean += out.values(i);
      }
    }
    if (members.size() < 2) continue;
    mean /= static_cast<double>(members.size());
    const DynMatrix shifted = DynMatrix(m) - mean * DynMatrix::Identity(n, n);
    Eigen::JacobiSVD<DynMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const auto mult = static_cast<Eigen::Index>(members.size());
    // The mult smallest singular values must all be negligible.
    if (sv(n - mult) > 1e-6 * mnorm) out.diagonalizable = false;
    for (Eigen::Index k = 0; k < mult; ++k) {
      out.vectors.col(members[static_cast<std::size_t>(k)]) = svd.matrixV().col(n - mult + k);
    }
  }
  return out;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  require_square(m, "matrix_exp");
  const DynMatrix a = m;
  return DynMatrix(a.exp());
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

}  // namespace dirac8::algebra
