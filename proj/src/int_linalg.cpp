#include "l2mult/int_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return (a * b) % p; }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

u64 reduce(std::int64_t v, u64 p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return static_cast<u64>(r);
}

using ModMatrix = std::vector<u64>;

ModMatrix to_mod(const IntMatrix& m, u64 p) {
  ModMatrix out(m.a.size());
  for (std::size_t i = 0; i < m.a.size(); ++i) out[i] = reduce(m.a[i], p);
  return out;
}

/// Forward elimination; returns the determinant mod p (0 when singular).
u64 det_mod(ModMatrix a, std::size_t n, u64 p) {
  u64 det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
      det = (p - det) % p;
    }
    const u64 pv = a[c * n + c];
    det = mulmod(det, pv, p);
    const u64 inv = invmod(pv, p);
    for (std::size_t r = c + 1; r < n; ++r) {
      u64 f = a[r * n + c];
      if (f == 0) continue;
      f = mulmod(f, inv, p);
      const u64 nf = p - f;
      u64* row = &a[r * n];
      const u64* prow = &a[c * n];
      for (std::size_t k = c; k < n; ++k) row[k] = (row[k] + nf * prow[k]) % p;
    }
  }
  return det;
}

struct Rref {
  std::size_t rank = 0;
  std::vector<std::vector<u64>> kernel;
};

Rref rref_mod(ModMatrix a, std::size_t n, u64 p) {
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && a[piv * n + c] == 0) ++piv;
    if (piv == n) continue;
    if (piv != r)
      for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[r * n + k]);
    const u64 inv = invmod(a[r * n + c], p);
    for (std::size_t k = 0; k < n; ++k) a[r * n + k] = mulmod(a[r * n + k], inv, p);
    for (std::size_t o = 0; o < n; ++o) {
      if (o == r) continue;
      const u64 f = a[o * n + c];
      if (f == 0) continue;
      const u64 nf = p - f;
      for (std::size_t k = 0; k < n; ++k) a[o * n + k] = (a[o * n + k] + nf * a[r * n + k]) % p;
    }
    pivot_cols.push_back(c);
    ++r;
  }
  Rref out;
  out.rank = r;
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<u64> v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = (p - a[i * n + f]) % p;
    out.kernel.push_back(std::move(v));
  }
  return out;
}

bool is_prime(u64 v) {
  if (v < 2) return false;
  for (u64 d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

class Crt {
 public:
  void add(u64 residue, u64 p) {
    if (modulus_ == 0) {
      value_ = residue;
      modulus_ = p;
      return;
    }
    Integer xm = value_ % Integer(static_cast<unsigned long>(p));
    u64 x = xm.get_ui();
    u64 diff = (residue + p - x) % p;
    u64 mm = Integer(modulus_ % Integer(static_cast<unsigned long>(p))).get_ui();
    u64 t = mulmod(diff, invmod(mm, p), p);
    value_ += modulus_ * Integer(static_cast<unsigned long>(t));
    modulus_ *= Integer(static_cast<unsigned long>(p));
  }
  double bits() const { return modulus_ == 0 ? 0.0 : static_cast<double>(mpz_sizeinbase(modulus_.get_mpz_t(), 2)) - 1; }
  Integer symmetric() const {
    Integer half = modulus_ / 2;
    return value_ > half ? Integer(value_ - modulus_) : value_;
  }
  void reset() {
    value_ = 0;
    modulus_ = 0;
  }

 private:
  Integer value_ = 0;
  Integer modulus_ = 0;
};

double log2_binomial(std::size_t n, std::size_t k) {
  return (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
          std::lgamma(static_cast<double>(n - k) + 1)) /
         std::log(2.0);
}

std::vector<u64> charpoly_mod(const IntMatrix& m, u64 p) {
  const std::size_t n = m.n;
  ModMatrix a = to_mod(m, p);
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return a[i * n + j]; };
  for (std::size_t col = 0; col + 2 < n; ++col) {
    const std::size_t piv_row = col + 1;
    std::size_t i = piv_row;
    while (i < n && at(i, col) == 0) ++i;
    if (i == n) continue;
    if (i != piv_row) {
      for (std::size_t k = 0; k < n; ++k) std::swap(at(i, k), at(piv_row, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(at(k, i), at(k, piv_row));
    }
    const u64 inv = invmod(at(piv_row, col), p);
    for (std::size_t r = piv_row + 1; r < n; ++r) {
      u64 u = at(r, col);
      if (u == 0) continue;
      u = mulmod(u, inv, p);
      const u64 nu = p - u;
      for (std::size_t k = 0; k < n; ++k) at(r, k) = (at(r, k) + nu * at(piv_row, k)) % p;
      for (std::size_t k = 0; k < n; ++k) at(k, piv_row) = (at(k, piv_row) + u * at(k, r)) % p;
    }
  }
  // polys[m] has degree m; coefficient k multiplies x^k.
  std::vector<std::vector<u64>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t mm = 1; mm <= n; ++mm) {
    std::vector<u64> cur(mm + 1, 0);
    const auto& prev = polys[mm - 1];
    const u64 hmm = at(mm - 1, mm - 1);
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] = (cur[k + 1] + prev[k]) % p;
      cur[k] = (cur[k] + (p - mulmod(hmm, prev[k], p))) % p;
    }
    u64 t = 1;
    for (std::size_t i = 1; i < mm; ++i) {
      t = mulmod(t, at(mm - i, mm - i - 1), p);
      if (t == 0) break;
      const u64 coef = mulmod(t, at(mm - i - 1, mm - 1), p);
      if (coef == 0) continue;
      const auto& q = polys[mm - i - 1];
      for (std::size_t k = 0; k < q.size(); ++k) cur[k] = (cur[k] + (p - mulmod(coef, q[k], p))) % p;
    }
    polys[mm] = std::move(cur);
  }
  return polys[n];
}

}  // namespace

std::uint64_t nth_large_prime(std::size_t k) {
  static std::mutex mu;
  static std::vector<u64> primes;
  std::lock_guard<std::mutex> lock(mu);
  u64 next = primes.empty() ? (u64{1} << 31) - 1 : primes.back() - 2;
  while (primes.size() <= k) {
    while (!is_prime(next)) next -= 2;
    primes.push_back(next);
    next -= 2;
  }
  return primes[k];
}

std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p) { return rref_mod(to_mod(m, p), m.n, p).rank; }

std::vector<Integer> charpoly_exact(const IntMatrix& m) {
  const std::size_t n = m.n;
  double row_bound = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::fabs(static_cast<double>(m(i, j)));
    row_bound = std::max(row_bound, s);
  }
  double bits = 0;
  const double lb = row_bound > 1 ? std::log2(row_bound) : 0.0;
  for (std::size_t k = 0; k <= n; ++k) bits = std::max(bits, log2_binomial(n, k) + static_cast<double>(k) * lb);
  bits += 8;

  std::vector<Crt> crt(n + 1);
  for (std::size_t idx = 0; crt[0].bits() < bits + 1; ++idx) {
    const u64 p = nth_large_prime(idx);
    auto cp = charpoly_mod(m, p);
    for (std::size_t k = 0; k <= n; ++k) crt[k].add(cp[k], p);
  }
  std::vector<Integer> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = crt[k].symmetric();
  return out;
}

NonzeroEigenProduct nonzero_eigen_product_charpoly(const IntMatrix& m) {
  auto cp = charpoly_exact(m);
  NonzeroEigenProduct out;
  std::size_t k = 0;
  while (k < cp.size() && cp[k] == 0) ++k;
  out.rank = m.n - k;
  out.value = abs(cp[k]);
  return out;
}

NonzeroEigenProduct nonzero_eigen_product_modular(const IntMatrix& m) {
  const std::size_t n = m.n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) fail(ErrorKind::InvalidArgument, "matrix is not symmetric");
  Integer trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += Integer(static_cast<long>(m(i, i)));
  if (trace < 0) fail(ErrorKind::InvalidArgument, "matrix is not positive semidefinite");

  Crt crt;
  std::size_t best_rank = 0;
  bool have = false;
  std::size_t agreeing = 0;
  for (std::size_t idx = 0; idx < 4000; ++idx) {
    const u64 p = nth_large_prime(idx);
    ModMatrix a = to_mod(m, p);
    std::size_t rank;
    u64 residue;
    const u64 d = det_mod(a, n, p);
    if (d != 0) {
      rank = n;
      residue = d;
    } else {
      Rref rr = rref_mod(a, n, p);
      rank = rr.rank;
      const std::size_t s = rr.kernel.size();
      ModMatrix gram(s * s, 0);
      for (std::size_t x = 0; x < s; ++x)
        for (std::size_t y = 0; y < s; ++y) {
          u64 acc = 0;
          for (std::size_t k = 0; k < n; ++k) acc = (acc + mulmod(rr.kernel[x][k], rr.kernel[y][k], p)) % p;
          gram[x * s + y] = acc;
        }
      const u64 dg = det_mod(gram, s, p);
      if (dg == 0) continue;
      ModMatrix b = a;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          u64 acc = b[i * n + j];
          for (std::size_t x = 0; x < s; ++x) acc = (acc + mulmod(rr.kernel[x][i], rr.kernel[x][j], p)) % p;
          b[i * n + j] = acc;
        }
      residue = mulmod(det_mod(b, n, p), invmod(dg, p), p);
    }
    if (!have || rank > best_rank) {
      best_rank = rank;
      have = true;
      crt.reset();
      agreeing = 0;
    } else if (rank < best_rank) {
      continue;
    }
    crt.add(residue, p);
    ++agreeing;
    double bound_bits = 4;
    if (best_rank > 0) {
      Integer r(static_cast<unsigned long>(best_rank));
      double ratio = mpq_class(trace, r).get_d();
      bound_bits += static_cast<double>(best_rank) * std::log2(std::max(ratio, 1.0));
    }
    if (agreeing >= 3 && crt.bits() > bound_bits + 1) {
      NonzeroEigenProduct out;
      out.rank = best_rank;
      out.value = crt.symmetric();
      if (out.value <= 0) fail(ErrorKind::NumericalDegeneracy, "nonpositive eigenvalue product");
      return out;
    }
  }
  fail(ErrorKind::NumericalDegeneracy, "modular eigenvalue product did not stabilize");
}

}  // namespace l2mult
