#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace encdec {

using Complex = std::complex<double>;
using Gate = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Thrown when the ancilla-zero sector carries (numerically) no weight.
struct DegeneratePostSelection : Error {
  DegeneratePostSelection(const std::string& what, double prob)
      : Error(what), post_prob(prob) {}
  double post_prob;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace detail

//------------------------------------------------------------------------------
// Bit helpers. Qubit i is bit i of the basis index.
//------------------------------------------------------------------------------

inline constexpr std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

inline constexpr bool bit(std::size_t m, int i) { return (m >> i) & 1U; }

// Compress the bits of m selected by `qubits` (ascending) into a dense index.
inline std::size_t gather_bits(std::size_t m, const std::vector<int>& qubits) {
  std::size_t out = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) out |= static_cast<std::size_t>(bit(m, qubits[j])) << j;
  return out;
}

// Inverse of gather_bits: place the bits of `packed` at positions `qubits`.
inline std::size_t scatter_bits(std::size_t packed, const std::vector<int>& qubits) {
  std::size_t out = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) out |= static_cast<std::size_t>(bit(packed, static_cast<int>(j))) << qubits[j];
  return out;
}

//------------------------------------------------------------------------------
// SystemLayout
//------------------------------------------------------------------------------

/// Register layout of an encoding-decoding circuit: N qubits, of which the k
/// low-order ones are logical (X) and the rest ancillas (X-bar). An optional
/// bipartition X = X1 u X2 selects the entanglement cut inside X.
class SystemLayout {
 public:
  SystemLayout(int n_qubits, int n_logical, std::vector<int> x1 = {})
      : n_(n_qubits), k_(n_logical), x1_(std::move(x1)) {
    detail::require(n_ >= 2 && n_ % 2 == 0, "SystemLayout: N must be even and >= 2");
    detail::require(n_ <= 30, "SystemLayout: N > 30 not supported by dense states");
    detail::require(k_ >= 1 && k_ <= n_, "SystemLayout: need 1 <= k <= N");
    std::vector<bool> seen(static_cast<std::size_t>(k_), false);
    for (int q : x1_) {
      detail::require(q >= 0 && q < k_, "SystemLayout: X1 must be a subset of the logical qubits");
      detail::require(!seen[static_cast<std::size_t>(q)], "SystemLayout: repeated qubit in X1");
      seen[static_cast<std::size_t>(q)] = true;
    }
    std::sort(x1_.begin(), x1_.end());
    detail::require(2 * x1_.size() <= static_cast<std::size_t>(k_), "SystemLayout: need |X1| <= |X2|");
  }

  /// Layout whose X1 is the first `x1_size` logical qubits.
  static SystemLayout with_cut(int n_qubits, int n_logical, int x1_size) {
    std::vector<int> x1(static_cast<std::size_t>(x1_size));
    for (int i = 0; i < x1_size; ++i) x1[static_cast<std::size_t>(i)] = i;
    return SystemLayout(n_qubits, n_logical, std::move(x1));
  }

  int n_qubits() const { return n_; }
  int n_logical() const { return k_; }
  int n_ancillas() const { return n_ - k_; }
  double code_rate() const { return static_cast<double>(k_) / n_; }
  std::size_t dim() const { return dim_of(n_); }
  std::size_t logical_dim() const { return dim_of(k_); }

  std::vector<int> logical_set() const { return range(0, k_); }
  std::vector<int> ancilla_set() const { return range(k_, n_); }
  const std::vector<int>& x1() const { return x1_; }
  std::vector<int> x2() const {
    std::vector<int> out;
    for (int q = 0; q < k_; ++q)
      if (!std::binary_search(x1_.begin(), x1_.end(), q)) out.push_back(q);
    return out;
  }
  bool has_cut() const { return !x1_.empty(); }

  friend bool operator==(const SystemLayout& a, const SystemLayout& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.x1_ == b.x1_;
  }

 private:
  static std::vector<int> range(int lo, int hi) {
    std::vector<int> out;
    for (int q = lo; q < hi; ++q) out.push_back(q);
    return out;
  }

  int n_;
  int k_;
  std::vector<int> x1_;
};

}  // namespace encdec
