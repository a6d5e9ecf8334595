#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <vector>

#include "encdec/common.hpp"
#include "encdec/stats.hpp"

namespace encdec {

// Linear functionals tr(O E(rho)) of a product depolarizing channel E. In the
// Pauli basis E scales a string Q by prod_{i in supp Q} (1 - lambda_i), so the
// functional is a multilinear polynomial in t_i = 1 - lambda_i whose
// coefficients, indexed by the support set S, depend only on rho and O:
//   tr(O E(rho)) = sum_S c_S prod_{i in S} t_i,
//   c_S = (1/D) sum_{supp Q = S} Re[conj(tr(Q rho)) tr(Q O)].
// With Q = X^a Z^b, tr(Q M) = sum_m (-1)^{b.m} M(m, m ^ a), a Walsh-Hadamard
// transform of one generalized diagonal of M, so all coefficients cost
// O(N 4^N) once; each strength vector then costs O(2^N).

/// Unnormalized in-place Walsh-Hadamard transform.
inline void walsh_hadamard(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex x = v[j], y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
}

class SupportPolynomial {
 public:
  SupportPolynomial(int n_qubits, std::vector<double> coeffs) : n_(n_qubits), c_(std::move(coeffs)) {
    detail::require(c_.size() == dim_of(n_), "SupportPolynomial: need 2^N coefficients");
  }

  int n_qubits() const { return n_; }
  const std::vector<double>& coefficients() const { return c_; }

  /// Value for per-site depolarizing strengths lambda_i.
  double operator()(std::span<const double> lambdas) const {
    detail::require(static_cast<int>(lambdas.size()) == n_, "SupportPolynomial: need one strength per qubit");
    std::vector<double> prod(c_.size());
    prod[0] = 1.0;
    stats::CompensatedSum acc;
    acc.add(c_[0]);
    for (std::size_t s = 1; s < c_.size(); ++s) {
      prod[s] = prod[s & (s - 1)] * (1 - lambdas[static_cast<std::size_t>(std::countr_zero(s))]);
      acc.add(c_[s] * prod[s]);
    }
    return acc.value();
  }

 private:
  int n_;
  std::vector<double> c_;
};

/// Coefficients of tr(O E(rho)) for entry accessors rho(m, m') and o(m, m'),
/// both Hermitian operators on n qubits.
template <class RhoEntry, class ObsEntry>
SupportPolynomial depolarizing_support_polynomial(int n_qubits, RhoEntry rho, ObsEntry obs) {
  detail::require(n_qubits >= 1 && n_qubits <= 14, "depolarizing_support_polynomial: N outside [1, 14]");
  const std::size_t d = dim_of(n_qubits);
  std::vector<double> coeffs(d, 0.0);
  std::vector<Complex> vr(d), vo(d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t m = 0; m < d; ++m) {
      vr[m] = rho(m, m ^ a);
      vo[m] = obs(m, m ^ a);
    }
    walsh_hadamard(vr);
    walsh_hadamard(vo);
    for (std::size_t b = 0; b < d; ++b) coeffs[a | b] += (std::conj(vr[b]) * vo[b]).real();
  }
  for (double& c : coeffs) c /= static_cast<double>(d);
  return SupportPolynomial(n_qubits, std::move(coeffs));
}

/// Numerator and denominator of the post-selected fidelity for a pure encoded
/// state psi_U = U|psi_X, 0>: m2 = <psi_U|E(rho)|psi_U> and
/// p2 = tr(W W^dag E(rho)), W the code-space isometry.
struct DepolarizedFidelity {
  SupportPolynomial m2;
  SupportPolynomial p2;
};

inline DepolarizedFidelity depolarized_fidelity_polynomials(int n_qubits, const Vector& encoded, const Matrix& isometry) {
  detail::require(static_cast<std::size_t>(encoded.size()) == dim_of(n_qubits), "depolarized_fidelity_polynomials: state size");
  detail::require(isometry.rows() == encoded.size(), "depolarized_fidelity_polynomials: isometry rows");
  const std::size_t d = dim_of(n_qubits);
  const Matrix proj = isometry * isometry.adjoint();
  std::vector<double> cm(d, 0.0), cp(d, 0.0);
  std::vector<Complex> vr(d), vp(d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t m = 0; m < d; ++m) {
      const auto i = static_cast<Eigen::Index>(m), j = static_cast<Eigen::Index>(m ^ a);
      vr[m] = encoded(i) * std::conj(encoded(j));
      vp[m] = proj(i, j);
    }
    walsh_hadamard(vr);
    walsh_hadamard(vp);
    for (std::size_t b = 0; b < d; ++b) {
      cm[a | b] += std::norm(vr[b]);
      cp[a | b] += (std::conj(vr[b]) * vp[b]).real();
    }
  }
  for (std::size_t s = 0; s < d; ++s) {
    cm[s] /= static_cast<double>(d);
    cp[s] /= static_cast<double>(d);
  }
  return {SupportPolynomial(n_qubits, std::move(cm)), SupportPolynomial(n_qubits, std::move(cp))};
}

}  // namespace encdec
