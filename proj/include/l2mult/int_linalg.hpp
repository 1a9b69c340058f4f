#pragma once

#include <cstdint>
#include <vector>

#include "l2mult/rational.hpp"

namespace l2mult {

/// Dense square integer matrix, row major.
struct IntMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> a;

  explicit IntMatrix(std::size_t size = 0) : n(size), a(size * size, 0) {}
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Characteristic polynomial det(xI - M); coefficient k multiplies x^k.
/// Multimodular Hessenberg reduction with a rigorous coefficient bound.
std::vector<Integer> charpoly_exact(const IntMatrix& m);

struct NonzeroEigenProduct {
  std::size_t rank = 0;
  /// Product of the nonzero eigenvalues, i.e. the lowest-degree nonzero
  /// coefficient of the characteristic polynomial up to sign.
  Integer value;
};

/// For a symmetric positive semidefinite integer matrix.  Uses
/// det(M + K K^T) / det(K^T K) with K a kernel basis, one prime at a time.
NonzeroEigenProduct nonzero_eigen_product_modular(const IntMatrix& m);

/// Same quantity read off `charpoly_exact`.
NonzeroEigenProduct nonzero_eigen_product_charpoly(const IntMatrix& m);

/// Rank over F_p for a prime p below 2^31.
std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p);

/// Primes below 2^31, descending, deterministic.
std::uint64_t nth_large_prime(std::size_t k);

}  // namespace l2mult
