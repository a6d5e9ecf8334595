#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "encdec/common.hpp"

namespace encdec {

/// Post-selection probabilities below this are treated as numerically empty.
inline constexpr double kDegeneratePostProb = 1e-12;
/// Eigenvalues in [-kEigenClip, 0) are round-off and clipped to zero.
inline constexpr double kEigenClip = 1e-9;

//------------------------------------------------------------------------------
// States
//------------------------------------------------------------------------------

/// Dense state vector over n qubits; amplitude m holds basis state |m>, qubit i
/// being bit i of m.
struct PureState {
  int n_qubits = 0;
  Vector amplitudes;

  static PureState zero(int n) { return basis(n, 0); }

  static PureState basis(int n, std::size_t index) {
    detail::require(n >= 1 && n <= 30, "PureState: qubit count out of range");
    detail::require(index < dim_of(n), "PureState: basis index out of range");
    PureState s{n, Vector::Zero(static_cast<Eigen::Index>(dim_of(n)))};
    s.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  static PureState from_amplitudes(int n, Vector amps) {
    detail::require(static_cast<std::size_t>(amps.size()) == dim_of(n), "PureState: amplitude length != 2^n");
    return PureState{n, std::move(amps)};
  }

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double squared_norm() const { return amplitudes.squaredNorm(); }

  void normalize() {
    const double nrm = amplitudes.norm();
    detail::require(nrm > 0, "PureState::normalize: zero vector");
    amplitudes /= nrm;
  }
};

/// Dense density matrix over n qubits, same index convention as PureState.
struct MixedState {
  int n_qubits = 0;
  Matrix matrix;

  static MixedState from_pure(const PureState& psi) {
    return MixedState{psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint()};
  }

  static MixedState maximally_mixed(int n) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return MixedState{n, Matrix::Identity(d, d) / static_cast<double>(d)};
  }

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  Complex trace() const { return matrix.trace(); }
  double purity() const { return (matrix * matrix).trace().real(); }

  double hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }
};

template <class State>
struct Projected {
  State state;       // normalized state on the logical register
  double post_prob;  // weight of the ancilla-zero sector before normalization
};

//------------------------------------------------------------------------------
// Gate kernels
//------------------------------------------------------------------------------

inline bool is_unitary(const Gate& g, double tol = 1e-10) {
  return ((g.adjoint() * g) - Gate::Identity()).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

inline std::size_t insert_zero_bit(std::size_t x, int pos) {
  const std::size_t low = x & ((std::size_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | low;
}

/// Applies a 4x4 gate to the 2^n-length vector stored at base[m * stride].
/// Local index of the pair is 2 * bit_i + bit_j, so the first tensor factor of
/// the gate acts on qubit i.
inline void apply_gate_strided(Complex* base, std::size_t stride, int n_qubits, const Gate& g, int qi, int qj) {
  const int lo = std::min(qi, qj);
  const int hi = std::max(qi, qj);
  const std::size_t mi = std::size_t{1} << qi;
  const std::size_t mj = std::size_t{1} << qj;
  const std::size_t groups = dim_of(n_qubits) >> 2;
  // Copy once: the fixed-size Eigen access would otherwise bounds-check in debug.
  Complex u[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) u[r][c] = g(r, c);
  for (std::size_t t = 0; t < groups; ++t) {
    const std::size_t m0 = insert_zero_bit(insert_zero_bit(t, lo), hi);
    Complex* p[4] = {base + m0 * stride, base + (m0 | mj) * stride, base + (m0 | mi) * stride,
                     base + (m0 | mi | mj) * stride};
    const Complex v0 = *p[0], v1 = *p[1], v2 = *p[2], v3 = *p[3];
    for (int r = 0; r < 4; ++r) *p[r] = u[r][0] * v0 + u[r][1] * v1 + u[r][2] * v2 + u[r][3] * v3;
  }
}

inline void check_pair(int n_qubits, int qi, int qj) {
  require(qi != qj, "apply_two_qubit_gate: qubits must differ");
  require(qi >= 0 && qj >= 0 && qi < n_qubits && qj < n_qubits, "apply_two_qubit_gate: qubit out of range");
}

// Unchecked variants used by circuits whose gates were validated at build time.
inline void apply_gate_unchecked(PureState& s, const Gate& g, int qi, int qj) {
  apply_gate_strided(s.amplitudes.data(), 1, s.n_qubits, g, qi, qj);
}

inline void apply_gate_unchecked(MixedState& s, const Gate& g, int qi, int qj) {
  const std::size_t d = s.dim();
  Complex* data = s.matrix.data();  // column-major
  for (std::size_t c = 0; c < d; ++c) apply_gate_strided(data + c * d, 1, s.n_qubits, g, qi, qj);
  const Gate gc = g.conjugate();
  for (std::size_t r = 0; r < d; ++r) apply_gate_strided(data + r, d, s.n_qubits, gc, qi, qj);
}

}  // namespace detail

/// U_(i,j) |psi>, in place.
inline void apply_two_qubit_gate(PureState& s, const Gate& g, int qi, int qj) {
  detail::check_pair(s.n_qubits, qi, qj);
  detail::require(is_unitary(g), "apply_two_qubit_gate: gate is not unitary");
  detail::apply_gate_unchecked(s, g, qi, qj);
}

/// U rho U^dag, in place.
inline void apply_two_qubit_gate(MixedState& s, const Gate& g, int qi, int qj) {
  detail::check_pair(s.n_qubits, qi, qj);
  detail::require(is_unitary(g), "apply_two_qubit_gate: gate is not unitary");
  detail::apply_gate_unchecked(s, g, qi, qj);
}

//------------------------------------------------------------------------------
// Ancilla projection. Logical qubits are the k low-order bits, so the
// ancilla-zero sector is the leading 2^k block.
//------------------------------------------------------------------------------

inline Projected<PureState> project_ancillas(const PureState& s, int n_logical) {
  detail::require(n_logical >= 1 && n_logical < s.n_qubits, "project_ancillas: need 1 <= k < N");
  const auto dk = static_cast<Eigen::Index>(dim_of(n_logical));
  Vector block = s.amplitudes.head(dk);
  const double p = block.squaredNorm();
  if (!(p >= kDegeneratePostProb))
    throw DegeneratePostSelection("project_ancillas: ancilla-zero sector has probability " + std::to_string(p), p);
  block /= std::sqrt(p);
  return {PureState{n_logical, std::move(block)}, p};
}

inline Projected<MixedState> project_ancillas(const MixedState& s, int n_logical) {
  detail::require(n_logical >= 1 && n_logical < s.n_qubits, "project_ancillas: need 1 <= k < N");
  const auto dk = static_cast<Eigen::Index>(dim_of(n_logical));
  Matrix block = s.matrix.topLeftCorner(dk, dk);
  const double p = block.trace().real();
  if (!(p >= kDegeneratePostProb))
    throw DegeneratePostSelection("project_ancillas: ancilla-zero sector has probability " + std::to_string(p), p);
  block /= p;
  return {MixedState{n_logical, std::move(block)}, p};
}

//------------------------------------------------------------------------------
// Partial trace
//------------------------------------------------------------------------------

namespace detail {

inline std::vector<int> checked_keep(int n_qubits, std::vector<int> keep) {
  require(!keep.empty(), "reduced_density_matrix: empty keep set");
  std::sort(keep.begin(), keep.end());
  require(std::adjacent_find(keep.begin(), keep.end()) == keep.end(), "reduced_density_matrix: repeated qubit");
  require(keep.front() >= 0 && keep.back() < n_qubits, "reduced_density_matrix: qubit out of range");
  return keep;
}

inline std::vector<int> complement(int n_qubits, const std::vector<int>& keep) {
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) rest.push_back(q);
  return rest;
}

}  // namespace detail

/// Reduced state on `keep`; kept qubit keep[j] (ascending) becomes qubit j.
inline MixedState reduced_density_matrix(const PureState& s, std::vector<int> keep) {
  keep = detail::checked_keep(s.n_qubits, std::move(keep));
  const std::vector<int> rest = detail::complement(s.n_qubits, keep);
  const auto dk = static_cast<Eigen::Index>(dim_of(static_cast<int>(keep.size())));
  const auto dr = static_cast<Eigen::Index>(dim_of(static_cast<int>(rest.size())));
  Matrix psi(dk, dr);
  for (std::size_t m = 0; m < s.dim(); ++m)
    psi(static_cast<Eigen::Index>(gather_bits(m, keep)), static_cast<Eigen::Index>(gather_bits(m, rest))) =
        s.amplitudes(static_cast<Eigen::Index>(m));
  Matrix rho = psi * psi.adjoint();
  return MixedState{static_cast<int>(keep.size()), std::move(rho)};
}

inline MixedState reduced_density_matrix(const MixedState& s, std::vector<int> keep) {
  keep = detail::checked_keep(s.n_qubits, std::move(keep));
  const std::vector<int> rest = detail::complement(s.n_qubits, keep);
  const std::size_t dk = dim_of(static_cast<int>(keep.size()));
  const std::size_t dr = dim_of(static_cast<int>(rest.size()));
  std::vector<std::size_t> kept_idx(dk), rest_idx(dr);
  for (std::size_t a = 0; a < dk; ++a) kept_idx[a] = scatter_bits(a, keep);
  for (std::size_t t = 0; t < dr; ++t) rest_idx[t] = scatter_bits(t, rest);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t b = 0; b < dk; ++b)
    for (std::size_t a = 0; a < dk; ++a) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dr; ++t)
        acc += s.matrix(static_cast<Eigen::Index>(kept_idx[a] | rest_idx[t]),
                        static_cast<Eigen::Index>(kept_idx[b] | rest_idx[t]));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  return MixedState{static_cast<int>(keep.size()), std::move(out)};
}

//------------------------------------------------------------------------------
// Spectra
//------------------------------------------------------------------------------

/// Eigenvalues of a Hermitian matrix, ascending, with round-off negatives
/// clipped to zero. Values below -kEigenClip signal a non-positive input.
inline std::vector<double> hermitian_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("hermitian_spectrum: eigensolver failed");
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  for (double& x : ev) {
    if (x < -kEigenClip) throw Error("hermitian_spectrum: eigenvalue " + std::to_string(x) + " below clip threshold");
    if (x < 0) x = 0;
  }
  return ev;
}

inline std::vector<double> spectrum(const MixedState& s) { return hermitian_spectrum(s.matrix); }

/// Computational-basis weights |<m|psi>|^2 or <m|rho|m>.
inline std::vector<double> diagonal_weights(const PureState& s) {
  std::vector<double> p(s.dim());
  for (std::size_t m = 0; m < p.size(); ++m) p[m] = std::norm(s.amplitudes(static_cast<Eigen::Index>(m)));
  return p;
}

inline std::vector<double> diagonal_weights(const MixedState& s) {
  std::vector<double> p(s.dim());
  for (std::size_t m = 0; m < p.size(); ++m)
    p[m] = s.matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).real();
  return p;
}

}  // namespace encdec
