#pragma once

#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "encdec/common.hpp"
#include "encdec/noise.hpp"
#include "encdec/theory/symmetric_group.hpp"

namespace encdec::theory {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Weingarten function Wg(g; D) on S_n from characters:
/// (1/n!^2) sum_lambda d_lambda^2 chi_lambda(g) / s_lambda(1^D),
/// s_lambda(1^D) = prod_cells (D + j - i) / hook(i, j). Irreps with more rows
/// than D do not contribute.
inline Rational weingarten_by_characters(const Partition& cycle_type_of_g, const BigInt& dim) {
  int n = std::accumulate(cycle_type_of_g.begin(), cycle_type_of_g.end(), 0);
  Rational total = 0;
  for (const Partition& lambda : partitions(n)) {
    if (BigInt(static_cast<long>(lambda.size())) > dim) continue;
    Rational schur = 1;
    for (int i = 0; i < static_cast<int>(lambda.size()); ++i)
      for (int j = 0; j < lambda[static_cast<std::size_t>(i)]; ++j)
        schur *= Rational(dim + (j - i), BigInt(hook_length(lambda, i, j)));
    const BigInt d = irrep_dimension(lambda);
    total += Rational(d * d * character(lambda, cycle_type_of_g)) / schur;
  }
  const BigInt nf = factorial(n);
  return total / Rational(nf * nf);
}

enum class WeingartenMethod { gram_inverse, characters };

/// Gram matrix Q_{s,t} = D^{#cycles(s t)} over S_n and its inverse W, in exact
/// rational arithmetic. W_{p,s} = Wg(p s). The Gram inverse route is practical
/// up to n = 4; n = 6 uses the character route.
class WeingartenTable {
 public:
  WeingartenTable(int n_replicas, BigInt dim, WeingartenMethod method)
      : n_(n_replicas), dim_(std::move(dim)), perms_(all_permutations(n_replicas)) {
    encdec::detail::require(n_ == 2 || n_ == 4 || n_ == 6, "WeingartenTable: supported replica counts are 2, 4, 6");
    encdec::detail::require(dim_ >= 1, "WeingartenTable: dimension must be >= 1");
    encdec::detail::require(method == WeingartenMethod::characters || n_ <= 4,
                    "WeingartenTable: Gram inversion limited to n <= 4");
    const std::size_t m = perms_.size();
    if (method == WeingartenMethod::gram_inverse) {
      // Gram entries grow as D^n; invert by exact Gauss-Jordan.
      std::vector<std::vector<Rational>> a(m, std::vector<Rational>(2 * m, Rational(0)));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = gram(i, j);
        a[i][m + i] = 1;
      }
      for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        while (piv < m && a[piv][c] == 0) ++piv;
        if (piv == m) throw Error("WeingartenTable: Gram matrix is singular (D < n with gram_inverse)");
        std::swap(a[c], a[piv]);
        const Rational inv = Rational(1) / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t r = 0; r < m; ++r) {
          if (r == c || a[r][c] == 0) continue;
          const Rational f = a[r][c];
          for (std::size_t j = c; j < 2 * m; ++j) a[r][j] -= f * a[c][j];
        }
      }
      w_.assign(m, std::vector<Rational>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) w_[i][j] = a[i][m + j];
    } else {
      std::map<Partition, Rational> cache;
      w_.assign(m, std::vector<Rational>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const Partition ct = cycle_type(compose(perms_[i], perms_[j]));
          auto it = cache.find(ct);
          if (it == cache.end()) it = cache.emplace(ct, weingarten_by_characters(ct, dim_)).first;
          w_[i][j] = it->second;
        }
    }
  }

  /// Table for a register of N qubits, D = 2^N.
  static WeingartenTable for_qubits(int n_replicas, int n_qubits,
                                    WeingartenMethod method = WeingartenMethod::gram_inverse) {
    encdec::detail::require(n_qubits >= 1, "WeingartenTable: need N >= 1");
    return WeingartenTable(n_replicas, BigInt(1) << n_qubits, method);
  }

  int replicas() const { return n_; }
  const BigInt& dim() const { return dim_; }
  const std::vector<Permutation>& permutations() const { return perms_; }
  std::size_t size() const { return perms_.size(); }

  Rational gram(std::size_t i, std::size_t j) const {
    const int c = cycle_count(compose(perms_[i], perms_[j]));
    return Rational(boost::multiprecision::pow(dim_, static_cast<unsigned>(c)));
  }

  const Rational& weingarten(std::size_t i, std::size_t j) const { return w_[i][j]; }

  std::size_t index_of(const Permutation& p) const {
    const auto it = std::lower_bound(perms_.begin(), perms_.end(), p);
    encdec::detail::require(it != perms_.end() && *it == p, "WeingartenTable: permutation not in table");
    return static_cast<std::size_t>(it - perms_.begin());
  }

 private:
  int n_;
  BigInt dim_;
  std::vector<Permutation> perms_;
  std::vector<std::vector<Rational>> w_;
};

//------------------------------------------------------------------------------
// Two-replica oracle for the annealed fidelity.
//------------------------------------------------------------------------------

namespace detail {

/// sum_mu K_mu (x) K_mu^dag as a 4x4 matrix (first factor = replica 1).
inline Gate replica_channel_operator(const std::vector<Mat2>& kraus) {
  Gate out = Gate::Zero();
  for (const Mat2& k : kraus) {
    const Mat2 kd = k.adjoint();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) out(2 * a + c, 2 * b + d) += k(a, b) * kd(c, d);
  }
  return out;
}

inline Gate replica_swap() {
  Gate s = Gate::Zero();
  s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = 1.0;
  return s;
}

}  // namespace detail

struct ReplicaWeights {
  double identity;  // b_id
  double swap;      // b_swap
};

/// b_pi = sum_tau W_{pi,tau} t_tau with t_tau = prod_i tr(T_tau K2_i), from an
/// explicit Kraus set.
inline ReplicaWeights replica_weights(const KrausSet& kraus, const WeingartenTable& table) {
  encdec::detail::require(table.replicas() == 2, "replica_weights: needs the 2-replica table");
  const Gate swap = detail::replica_swap();
  double t_id = 1.0, t_sw = 1.0;
  for (const auto& site : kraus.sites) {
    const Gate k2 = detail::replica_channel_operator(site);
    t_id *= k2.trace().real();
    t_sw *= (swap * k2).trace().real();
  }
  const std::size_t id = table.index_of({0, 1}), sw = table.index_of({1, 0});
  const double w_ii = table.weingarten(id, id).convert_to<double>();
  const double w_is = table.weingarten(id, sw).convert_to<double>();
  const double w_si = table.weingarten(sw, id).convert_to<double>();
  const double w_ss = table.weingarten(sw, sw).convert_to<double>();
  return {w_ii * t_id + w_is * t_sw, w_si * t_id + w_ss * t_sw};
}

/// Annealed fidelity by contracting the replica weights with the numerator
/// boundary rho0 (x) rho0 and the denominator boundary (rho0 (x) P) T_swap,
/// P the ancilla-zero projector. Traces are evaluated on dense matrices.
inline double weingarten_fidelity_oracle(int n, int k, const ErrorModel& model, const Vector& logical_state) {
  encdec::detail::require(n >= 1 && n <= 10, "weingarten_fidelity_oracle: N outside [1, 10]");
  encdec::detail::require(k >= 1 && k <= n, "weingarten_fidelity_oracle: need 1 <= k <= N");
  encdec::detail::require(static_cast<std::size_t>(logical_state.size()) == dim_of(k), "weingarten_fidelity_oracle: state size");
  const WeingartenTable table = WeingartenTable::for_qubits(2, n);
  const ReplicaWeights b = replica_weights(kraus_set(model, n), table);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  const auto dk = static_cast<Eigen::Index>(dim_of(k));
  Vector psi0 = Vector::Zero(d);
  psi0.head(dk) = logical_state.normalized();
  const Matrix rho0 = psi0 * psi0.adjoint();
  Matrix proj = Matrix::Zero(d, d);
  proj.topLeftCorner(dk, dk).setIdentity();
  auto contract = [&](const Matrix& a1, const Matrix& a2, bool swapped) {
    // tr(T_id (A1 (x) A2) [T_swap]) and tr(T_swap (A1 (x) A2) [T_swap]).
    const double sep = (a1.trace() * a2.trace()).real();
    const double joint = a1.transpose().cwiseProduct(a2).sum().real();
    return swapped ? b.identity * joint + b.swap * sep : b.identity * sep + b.swap * joint;
  };
  const double num = contract(rho0, rho0, false);
  const double den = contract(rho0, proj, true);
  return num / den;
}

inline double weingarten_fidelity_oracle(int n, int k, const ErrorModel& model) {
  Vector zero = Vector::Zero(static_cast<Eigen::Index>(dim_of(k)));
  zero(0) = 1.0;
  return weingarten_fidelity_oracle(n, k, model, zero);
}

}  // namespace encdec::theory
