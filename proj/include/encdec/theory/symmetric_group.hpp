#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "encdec/common.hpp"

namespace encdec::theory {

/// Permutation of {0..n-1} in one-line notation: p[i] is the image of i.
using Permutation = std::vector<int>;

/// Integer partition, parts in non-increasing order.
using Partition = std::vector<int>;

inline Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// All n! permutations in lexicographic order (identity first).
inline std::vector<Permutation> all_permutations(int n) {
  encdec::detail::require(n >= 1 && n <= 8, "all_permutations: n outside [1, 8]");
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// (a b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return out;
}

/// Cycle lengths, non-increasing.
inline Partition cycle_type(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  Partition out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline int cycle_count(const Permutation& p) { return static_cast<int>(cycle_type(p).size()); }

/// Partitions of n in reverse lexicographic order ((n) first).
inline std::vector<Partition> partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// Character chi_lambda at cycle type mu by the Murnaghan-Nakayama rule,
/// removing border strips via beta-numbers (first-column hook lengths).
inline std::int64_t character(const Partition& lambda, const Partition& mu) {
  const int len = static_cast<int>(lambda.size());
  std::set<int> beta;
  for (int i = 0; i < len; ++i) beta.insert(lambda[static_cast<std::size_t>(i)] + (len - 1 - i));
  std::function<std::int64_t(const std::set<int>&, std::size_t)> rec = [&](const std::set<int>& b,
                                                                             std::size_t idx) -> std::int64_t {
    if (idx == mu.size()) return 1;
    const int m = mu[idx];
    std::int64_t total = 0;
    for (int x : b) {
      const int y = x - m;
      if (y < 0 || b.count(y)) continue;
      // Height of the strip = number of beta-numbers strictly between y and x.
      int between = 0;
      for (int z : b)
        if (z > y && z < x) ++between;
      std::set<int> next = b;
      next.erase(x);
      next.insert(y);
      const std::int64_t sub = rec(next, idx + 1);
      total += (between % 2 ? -sub : sub);
    }
    return total;
  };
  return rec(beta, 0);
}

inline std::int64_t irrep_dimension(const Partition& lambda) {
  int n = std::accumulate(lambda.begin(), lambda.end(), 0);
  return character(lambda, Partition(static_cast<std::size_t>(n), 1));
}

/// Hook length of cell (i, j), zero-based.
inline int hook_length(const Partition& lambda, int i, int j) {
  int arm = lambda[static_cast<std::size_t>(i)] - j - 1;
  int leg = 0;
  for (std::size_t r = static_cast<std::size_t>(i) + 1; r < lambda.size(); ++r)
    if (lambda[r] > j) ++leg;
  return arm + leg + 1;
}

}  // namespace encdec::theory
