#include "l2mult/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

double log_abs(const Integer& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::abs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

std::size_t numeric_rank(const ComplexMatrix& m, double threshold) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

double norm_scale(const GroupAlgebraMatrix& a) { return std::max(1.0, to_double(a.sup_norm_bound())); }

}  // namespace

GroupAlgebraMatrix push_forward(const GroupHom& alpha, const GroupAlgebraMatrix& a) {
  if (a.group() != alpha.source()) fail(ErrorKind::InvalidArgument, "matrix does not live on the source group");
  GroupAlgebraMatrix r(alpha.target(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& [g, c] : a.at(i, j)) add_term(r.at(i, j), alpha(g), c);
  return r;
}

ComplexMatrix operator_matrix(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.group() != rho.group()) fail(ErrorKind::InvalidArgument, "matrix and representation live on different groups");
  const std::size_t d = rho.dim(), b = rho.block_dim();
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<long>(a.rows() * d), static_cast<long>(a.cols() * d));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& [g, c] : a.at(i, j)) {
        const double cd = to_double(c);
        for (std::size_t blk = 0; blk < rho.blocks(); ++blk) {
          const std::size_t t = rho.block_target(g, blk);
          for (std::size_t r = 0; r < b; ++r)
            for (std::size_t cc = 0; cc < b; ++cc)
              m(static_cast<long>(i * d + t * b + r), static_cast<long>(j * d + blk * b + cc)) +=
                  cd * rho.block_entry(g, blk, r, cc);
        }
      }
  return m;
}

SparseRationalMatrix operator_matrix_exact(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.group() != rho.group()) fail(ErrorKind::InvalidArgument, "matrix and representation live on different groups");
  if (!rho.is_rational()) fail(ErrorKind::InvalidArgument, "exact operator needs a signed permutation representation");
  const std::size_t d = rho.dim();
  SparseRationalMatrix m(a.rows() * d, a.cols() * d);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& [g, c] : a.at(i, j))
        for (std::size_t blk = 0; blk < d; ++blk)
          m.add(i * d + rho.block_target(g, blk), j * d + blk, rho.sign(g, blk) > 0 ? c : Rational(-c));
  return m;
}

IntMatrix operator_matrix_integer(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "square matrix required");
  if (!a.is_integral()) fail(ErrorKind::InvalidArgument, "integer coefficients required");
  if (!rho.is_rational()) fail(ErrorKind::InvalidArgument, "integer operator needs a signed permutation representation");
  const std::size_t d = rho.dim();
  IntMatrix m(a.rows() * d);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& [g, c] : a.at(i, j)) {
        const long v = c.get_num().get_si();
        for (std::size_t blk = 0; blk < d; ++blk) m(i * d + rho.block_target(g, blk), j * d + blk) += rho.sign(g, blk) * v;
      }
  return m;
}

Rational normalized_trace_exact(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (!rho.is_rational()) fail(ErrorKind::InvalidArgument, "exact trace needs a signed permutation representation");
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "square matrix required");
  Rational t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& [g, c] : a.at(i, i)) t += c * static_cast<long>(std::lround(rho.trace(g).real()));
  t /= static_cast<long>(rho.dim());
  t.canonicalize();
  return t;
}

double normalized_trace(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "square matrix required");
  Complex t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& [g, c] : a.at(i, i)) t += to_double(c) * rho.trace(g);
  return t.real() / static_cast<double>(rho.dim());
}

std::size_t SpectralMeasure::total_multiplicity() const {
  std::size_t s = 0;
  for (const auto& a : atoms) s += a.multiplicity;
  return s;
}

double SpectralMeasure::moment(unsigned k) const {
  double s = 0;
  for (const auto& a : atoms) s += static_cast<double>(a.multiplicity) * std::pow(a.value, static_cast<int>(k));
  return s / static_cast<double>(normalizer);
}

double SpectralMeasure::zero_mass() const {
  for (const auto& a : atoms)
    if (exact_zero ? a.value == 0 : std::abs(a.value) <= kAtomTolerance)
      return static_cast<double>(a.multiplicity) / static_cast<double>(normalizer);
  return 0;
}

SpectralMeasure cluster_eigenvalues(std::vector<double> ev, std::size_t normalizer, std::size_t matrix_size,
                                    std::optional<std::size_t> exact_nullity, double tol) {
  SpectralMeasure mu;
  mu.normalizer = normalizer;
  mu.matrix_size = matrix_size;
  if (exact_nullity) {
    if (*exact_nullity > ev.size()) fail(ErrorKind::InvalidArgument, "nullity exceeds the matrix size");
    std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    ev.erase(ev.begin(), ev.begin() + static_cast<long>(*exact_nullity));
    if (*exact_nullity > 0) mu.atoms.push_back({0.0, *exact_nullity});
    mu.exact_zero = true;
  }
  std::sort(ev.begin(), ev.end());
  std::vector<Atom> rest;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ev.size(); ++i)
    if (i == ev.size() || ev[i] - ev[start] > tol) {
      double s = 0;
      for (std::size_t k = start; k < i; ++k) s += ev[k];
      rest.push_back({s / static_cast<double>(i - start), i - start});
      start = i;
    }
  mu.atoms.insert(mu.atoms.end(), rest.begin(), rest.end());
  std::stable_sort(mu.atoms.begin(), mu.atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  return mu;
}

SpectralMeasure spectral_measure(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "spectral measure needs a square matrix");
  const std::size_t size = a.rows() * rho.dim();
  std::vector<double> ev;
  std::optional<std::size_t> nullity;
  if (size == 0) return cluster_eigenvalues({}, rho.dim(), a.rows());
  if (rho.is_rational()) {
    const Eigen::MatrixXd m = operator_matrix(a, rho).real();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) fail(ErrorKind::NotHermitian, "operator is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    nullity = size - exact_rank(operator_matrix_exact(a, rho));
  } else {
    const ComplexMatrix m = operator_matrix(a, rho);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) fail(ErrorKind::NotHermitian, "operator is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    ev.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  return cluster_eigenvalues(std::move(ev), rho.dim(), a.rows(), nullity);
}

std::size_t operator_rank(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if (rho.is_rational()) return exact_rank(operator_matrix_exact(a, rho));
  return numeric_rank(operator_matrix(a, rho), 1e-8 * norm_scale(a));
}

RankNullity rank_nullity(const GroupAlgebraMatrix& a, const FiniteRep& rho) {
  const std::size_t r = operator_rank(a, rho);
  const long d = static_cast<long>(rho.dim());
  RankNullity out;
  out.exact = rho.is_rational();
  out.rank = Rational(static_cast<long>(r), d);
  out.nullity = Rational(static_cast<long>(a.cols()) * d - static_cast<long>(r), d);
  out.rank.canonicalize();
  out.nullity.canonicalize();
  return out;
}

double log_fk_det(const SpectralMeasure& mu) {
  double s = 0;
  for (const auto& a : mu.atoms) {
    const bool zero = mu.exact_zero ? a.value == 0 : std::abs(a.value) <= kAtomTolerance;
    if (!zero) s += static_cast<double>(a.multiplicity) * std::log(std::abs(a.value));
  }
  return s / static_cast<double>(mu.normalizer);
}

double fk_det(const SpectralMeasure& mu) { return std::exp(log_fk_det(mu)); }

std::vector<MomentRow> moments_check(const GroupAlgebraMatrix& a, const FiniteRep& rho, unsigned kmax) {
  const auto mu = spectral_measure(a, rho);
  const double c = to_double(a.sup_norm_bound());
  std::vector<MomentRow> rows;
  GroupAlgebraMatrix power = GroupAlgebraMatrix::identity(a.group(), a.rows());
  for (unsigned k = 0; k <= kmax; ++k) {
    if (k > 0) power = power * a;
    MomentRow row;
    row.k = k;
    row.moment = mu.moment(k);
    row.trace = normalized_trace(power, rho);
    row.tolerance = 1e-6 * std::pow(c, static_cast<int>(k));
    if (k == 0) row.tolerance = 1e-6;
    if (std::abs(row.moment - row.trace) > row.tolerance)
      fail(ErrorKind::MomentMismatch,
           "moment " + std::to_string(k) + " is " + std::to_string(row.moment) + ", trace " + std::to_string(row.trace),
           static_cast<int>(k));
    rows.push_back(row);
  }
  return rows;
}

LuckReport luck_bound_check(const GroupAlgebraMatrix& a, const FiniteRep& rho, unsigned d) {
  if (!a.is_integral()) fail(ErrorKind::InvalidArgument, "determinant bound needs integer coefficients");
  if (d == 0) fail(ErrorKind::InvalidArgument, "arithmetic degree must be positive");
  const auto mu = spectral_measure(a, rho);
  LuckReport rep;
  rep.log_det = log_fk_det(mu);
  rep.det = std::exp(rep.log_det);
  // max(c_A, 1) only weakens the bound.
  const double c = std::max(1.0, to_double(a.sup_norm_bound()));
  rep.log_bound = -static_cast<double>(d - 1) * static_cast<double>(a.rows()) * std::log(c);
  rep.bound_ok = rep.log_det >= rep.log_bound - 1e-9 * std::max(1.0, std::abs(rep.log_bound));
  if (d == 1 && rho.is_rational()) {
    const IntMatrix m = operator_matrix_integer(a, rho);
    const auto p = m.n <= 96 ? nonzero_eigen_product_charpoly(m) : nonzero_eigen_product_modular(m);
    rep.exact_det_power = abs(p.value);
    rep.integrality_error = std::abs(static_cast<double>(rho.dim()) * rep.log_det - log_abs(p.value));
    std::size_t zero = 0;
    for (const auto& at : mu.atoms)
      if (at.value == 0) zero = at.multiplicity;
    rep.integrality_ok = rep.integrality_error <= 1e-6 && m.n - p.rank == zero;
  }
  if (!rep.bound_ok)
    fail(ErrorKind::BoundViolated, "det " + std::to_string(rep.det) + " below exp(" + std::to_string(rep.log_bound) + ")");
  if (!rep.integrality_ok)
    fail(ErrorKind::BoundViolated,
         "det^dim differs from the exact integer by " + std::to_string(rep.integrality_error) + " in log scale");
  return rep;
}

void PointAction::validate() const {
  if (!group) fail(ErrorKind::InvalidArgument, "point action without a group");
  if (group->family() == Family::FreeByFinite)
    fail(ErrorKind::UnsupportedFamily, "point actions of free-by-finite groups are not supported");
  if (images.size() != group->generator_count())
    fail(ErrorKind::InvalidArgument, "need one permutation per generator");
  const std::size_t n = points();
  for (const auto& p : images) {
    if (p.size() != n) fail(ErrorKind::InvalidArgument, "permutations of different sizes");
    std::vector<char> seen(n, 0);
    for (auto y : p) {
      if (y >= n || seen[y]) fail(ErrorKind::InvalidArgument, "generator image is not a permutation");
      seen[y] = 1;
    }
  }
  auto relator = [&](const Letters& w, const char* what) {
    for (std::uint32_t x = 0; x < n; ++x)
      if (apply(w, x) != x) fail(ErrorKind::InvalidArgument, std::string("relation fails: ") + what);
  };
  if (group->family() == Family::FreeAbelian)
    for (std::uint32_t i = 0; i < images.size(); ++i)
      for (std::uint32_t j = i + 1; j < images.size(); ++j)
        relator({{i, 1}, {j, 1}, {i, -1}, {j, -1}}, "generators commute");
  if (group->family() == Family::DihedralInfinite) {
    relator({{1, 1}, {1, 1}}, "s^2 = 1");
    relator({{0, 1}, {1, 1}, {0, 1}, {1, 1}}, "(ts)^2 = 1");
  }
}

std::uint32_t PointAction::apply(const Letters& w, std::uint32_t x) const {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& p = images[it->gen];
    if (it->exp > 0) {
      x = p[x];
    } else {
      // Inverse image by search keeps the struct a plain aggregate.
      x = static_cast<std::uint32_t>(std::find(p.begin(), p.end(), x) - p.begin());
    }
  }
  return x;
}

IntMatrix operator_matrix_integer(const GroupRingMatrix& a, const PointAction& act) {
  act.validate();
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "square matrix required");
  const std::size_t n = act.points();
  std::vector<std::vector<std::uint32_t>> inverse(act.images.size(), std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < act.images.size(); ++i)
    for (std::uint32_t x = 0; x < n; ++x) inverse[i][act.images[i][x]] = x;
  IntMatrix m(a.rows() * n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& [w, c] : a.at(i, j).terms()) {
        if (c.get_den() != 1) fail(ErrorKind::InvalidArgument, "integer coefficients required");
        const long v = c.get_num().get_si();
        for (std::uint32_t x = 0; x < n; ++x) {
          std::uint32_t y = x;
          for (auto it = w.rbegin(); it != w.rend(); ++it) y = it->exp > 0 ? act.images[it->gen][y] : inverse[it->gen][y];
          m(i * n + y, j * n + x) += v;
        }
      }
  return m;
}

LuckReport luck_bound_check(const GroupRingMatrix& a, const PointAction& act) {
  const IntMatrix m = operator_matrix_integer(a, act);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) fail(ErrorKind::InvalidArgument, "determinant bound needs a self-adjoint matrix");
  Eigen::MatrixXd dm(static_cast<long>(m.n), static_cast<long>(m.n));
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) dm(static_cast<long>(i), static_cast<long>(j)) = static_cast<double>(m(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dm, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const auto p = m.n <= 96 ? nonzero_eigen_product_charpoly(m) : nonzero_eigen_product_modular(m);
  const auto mu = cluster_eigenvalues(std::move(ev), act.points(), m.n, m.n - p.rank);
  LuckReport rep;
  rep.log_det = log_fk_det(mu);
  rep.det = std::exp(rep.log_det);
  rep.log_bound = 0;
  rep.bound_ok = rep.log_det >= -1e-9;
  rep.exact_det_power = abs(p.value);
  rep.integrality_error = std::abs(static_cast<double>(act.points()) * rep.log_det - log_abs(p.value));
  rep.integrality_ok = rep.integrality_error <= 1e-6;
  if (!rep.bound_ok) fail(ErrorKind::BoundViolated, "det " + std::to_string(rep.det) + " below 1");
  if (!rep.integrality_ok)
    fail(ErrorKind::BoundViolated,
         "det^n differs from the exact integer by " + std::to_string(rep.integrality_error) + " in log scale");
  return rep;
}

GroupAlgebraMatrix compress(const GroupAlgebraMatrix& a, const CellStabilizers& rows, const CellStabilizers& cols) {
  if (rows.stabilizers.size() != a.rows() || cols.stabilizers.size() != a.cols())
    fail(ErrorKind::InvalidArgument, "stabilizer lists do not match the matrix shape");
  const auto& g = *a.group();
  GroupAlgebraMatrix r(a.group(), a.rows(), a.cols());
  std::vector<AlgebraElement> er, ec;
  for (const auto& s : rows.stabilizers) er.push_back(averaging_idempotent(s));
  for (const auto& s : cols.stabilizers) ec.push_back(averaging_idempotent(s));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).empty()) r.at(i, j) = algebra_mul(g, algebra_mul(g, er[i], a.at(i, j)), ec[j]);
  return r;
}

GroupAlgebraMatrix idempotent_matrix(const GroupPtr& g, const CellStabilizers& cells) {
  const std::size_t n = cells.stabilizers.size();
  GroupAlgebraMatrix r(g, n, n);
  for (std::size_t i = 0; i < n; ++i) r.at(i, i) = averaging_idempotent(cells.stabilizers[i]);
  return r;
}

PhiBetti phi_betti(const PhiBettiInput& in, const FiniteRep& rho) {
  const auto& g = rho.group();
  const GroupAlgebraMatrix bp = compress(in.boundary_p, in.cells_pm1, in.cells_p);
  const GroupAlgebraMatrix bp1 = compress(in.boundary_p1, in.cells_p, in.cells_p1);
  if (bp.cols() != bp1.rows()) fail(ErrorKind::InvalidArgument, "boundary shapes do not compose");
  if (bp.rows() > 0 && bp1.cols() > 0 && bp.cols() > 0 && !(bp * bp1).is_zero())
    fail(ErrorKind::NotAComplex, "compressed boundaries do not compose to zero");
  const std::size_t rp = operator_rank(idempotent_matrix(g, in.cells_p), rho);
  const std::size_t r1 = operator_rank(bp, rho);
  const std::size_t r2 = operator_rank(bp1, rho);
  PhiBetti out;
  out.exact = rho.is_rational();
  out.value = Rational(static_cast<long>(rp) - static_cast<long>(r1) - static_cast<long>(r2),
                       static_cast<long>(rho.dim()));
  out.value.canonicalize();
  out.numeric = to_double(out.value);
  return out;
}

}  // namespace l2mult
