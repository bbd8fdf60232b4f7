#pragma once

// Independent reference computations used by the unit tests. They are
// deliberately naive and share no code with the library algorithms they check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "depthzero/exact.hpp"

namespace oracle {

using depthzero::Integer;
using depthzero::IntMatrix;
using depthzero::Rational;

inline Integer det_bareiss(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Invariant factors via determinantal divisors: d_k = gcd of k x k minors,
/// factor_k = d_k / d_{k-1}. Zeros (rank deficiency) come last.
inline std::vector<Integer> invariant_factors(const IntMatrix& m) {
  const std::size_t k_max = std::min(m.rows(), m.cols());
  std::vector<Integer> d{1};
  for (std::size_t k = 1; k <= k_max; ++k) {
    Integer g = 0;
    combinations(m.rows(), k, [&](const std::vector<std::size_t>& rows) {
      combinations(m.cols(), k, [&](const std::vector<std::size_t>& cols) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = static_cast<long>(m(rows[i], cols[j]));
        Integer det = det_bareiss(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
      });
    });
    d.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k <= k_max; ++k) out.push_back(d[k] == 0 ? Integer(0) : Integer(d[k] / d[k - 1]));
  return out;
}

/// Permutation matrix of i -> perm[i] acting on column vectors.
inline IntMatrix permutation_matrix(const std::vector<std::size_t>& perm) {
  IntMatrix m(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) m(perm[i], i) = 1;
  return m;
}

/// The cycle e_i -> e_{i+1}, e_n -> e_1.
inline IntMatrix n_cycle(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = (i + 1) % n;
  return permutation_matrix(perm);
}

inline std::uint64_t factorial(std::uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace oracle
