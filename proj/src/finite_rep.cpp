#include "l2mult/finite_rep.hpp"

#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

unsigned euler_phi(std::size_t n) {
  std::size_t r = n;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return static_cast<unsigned>(r);
}

std::size_t exponent(const FiniteGroup& g) {
  std::size_t e = 1;
  for (Element x = 0; x < g.order(); ++x) e = std::lcm(e, g.element_order(x));
  return e;
}

bool is_sign(Complex z) { return z.imag() == 0 && (z.real() == 1 || z.real() == -1); }

}  // namespace

FiniteRep FiniteRep::from_action(const GroupAction& action) {
  action.validate();
  FiniteRep r;
  r.group_ = action.group;
  r.blocks_ = action.points;
  r.block_dim_ = 1;
  r.signed_ = true;
  r.degree_ = 1;
  r.perm_ = action.image;
  r.data_.assign(action.group->order(), std::vector<Complex>(action.points, 1.0));
  return r;
}

FiniteRep FiniteRep::regular(const GroupPtr& g) { return from_action(GroupAction::regular(g)); }

FiniteRep FiniteRep::trivial(const GroupPtr& g) { return from_action(GroupAction::trivial(g)); }

FiniteRep FiniteRep::from_matrices(GroupPtr g, std::vector<ComplexMatrix> mats, unsigned arithmetic_degree) {
  if (mats.size() != g->order()) fail(ErrorKind::InvalidArgument, "one matrix per group element required");
  const auto d = static_cast<std::size_t>(mats[0].rows());
  FiniteRep r;
  r.group_ = std::move(g);
  r.blocks_ = 1;
  r.block_dim_ = d;
  r.degree_ = arithmetic_degree;
  r.perm_.assign(mats.size(), std::vector<std::uint32_t>{0});
  r.data_.resize(mats.size());
  bool sign = d == 1;
  for (std::size_t x = 0; x < mats.size(); ++x) {
    if (static_cast<std::size_t>(mats[x].rows()) != d || static_cast<std::size_t>(mats[x].cols()) != d)
      fail(ErrorKind::InvalidArgument, "matrices must be square of one size");
    auto& blk = r.data_[x];
    blk.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) blk[i * d + j] = mats[x](static_cast<long>(i), static_cast<long>(j));
    if (d == 1 && !is_sign(blk[0])) sign = false;
  }
  r.signed_ = sign;
  if (r.unitarity_defect() > 1e-9) fail(ErrorKind::InvalidArgument, "representation matrices are not unitary");
  if (r.multiplicativity_defect() > 1e-9) fail(ErrorKind::InvalidArgument, "matrices do not form a representation");
  return r;
}

FiniteRep FiniteRep::irreducible(const OrdinaryCharacter& chi, std::uint64_t seed) {
  const auto& g = chi.group();
  const std::size_t n = g->order();
  const long d = chi.degree_int();
  if (d == 1) {
    std::vector<ComplexMatrix> mats(n, ComplexMatrix(1, 1));
    bool real = true;
    for (Element x = 0; x < n; ++x) {
      mats[x](0, 0) = chi(x);
      if (!is_sign(chi(x))) real = false;
    }
    return from_matrices(g, std::move(mats), real ? 1u : euler_phi(exponent(*g)));
  }

  const auto N = static_cast<long>(n);
  ComplexMatrix proj(N, N);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      proj(a, b) = static_cast<double>(d) / static_cast<double>(n) * std::conj(chi(g->mul(a, g->inv(b))));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> pe(0.5 * (proj + proj.adjoint()));
  const long iso = d * d;
  ComplexMatrix u = pe.eigenvectors().rightCols(iso);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 8; ++attempt) {
    // Random Hermitian element of the commutant: right translations.
    ComplexMatrix b = ComplexMatrix::Zero(N, N);
    for (Element y = 0; y < n; ++y) {
      // Complex weights: real ones stay degenerate for quaternionic characters.
      const Complex c(gauss(rng), gauss(rng));
      for (Element x = 0; x < n; ++x) {
        b(g->mul(x, y), x) += c;
        b(x, g->mul(x, y)) += std::conj(c);
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> be(u.adjoint() * b * u);
    const auto& ev = be.eigenvalues();
    const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
    if (ev(d - 1) - ev(0) > 1e-9 * scale || ev(d) - ev(d - 1) < 1e-6 * scale) continue;
    ComplexMatrix w = u * be.eigenvectors().leftCols(d);
    std::vector<ComplexMatrix> mats(n, ComplexMatrix(d, d));
    for (Element h = 0; h < n; ++h) {
      ComplexMatrix shifted(N, d);
      for (Element x = 0; x < n; ++x) shifted.row(g->mul(h, x)) = w.row(x);
      mats[h] = w.adjoint() * shifted;
    }
    FiniteRep r = from_matrices(g, std::move(mats), euler_phi(exponent(*g)));
    double err = 0;
    for (Element x = 0; x < n; ++x) err = std::max(err, std::abs(r.trace(x) - chi(x)));
    if (err < 1e-8) return r;
  }
  fail(ErrorKind::NumericalDegeneracy, "could not split an irreducible summand of the regular representation");
}

ComplexMatrix FiniteRep::matrix(Element g) const {
  const auto n = static_cast<long>(dim());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const std::size_t b = block_dim_;
  for (std::size_t j = 0; j < blocks_; ++j) {
    const std::size_t t = perm_[g][j];
    for (std::size_t r = 0; r < b; ++r)
      for (std::size_t c = 0; c < b; ++c)
        m(static_cast<long>(t * b + r), static_cast<long>(j * b + c)) = block_entry(g, j, r, c);
  }
  return m;
}

Complex FiniteRep::trace(Element g) const {
  Complex t = 0;
  for (std::size_t j = 0; j < blocks_; ++j)
    if (perm_[g][j] == j)
      for (std::size_t r = 0; r < block_dim_; ++r) t += block_entry(g, j, r, r);
  return t;
}

OrdinaryCharacter FiniteRep::character() const {
  std::vector<Complex> v(group_->class_count());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = trace(group_->class_rep(k));
  return OrdinaryCharacter(group_, std::move(v));
}

double FiniteRep::multiplicativity_defect() const {
  double err = 0;
  for (auto s : group_->generators()) {
    const ComplexMatrix ms = matrix(s);
    for (Element h = 0; h < group_->order(); ++h)
      err = std::max(err, (ms * matrix(h) - matrix(group_->mul(s, h))).cwiseAbs().maxCoeff());
  }
  err = std::max(err, (matrix(0) - ComplexMatrix::Identity(static_cast<long>(dim()), static_cast<long>(dim())))
                          .cwiseAbs()
                          .maxCoeff());
  return err;
}

double FiniteRep::unitarity_defect() const {
  double err = 0;
  const auto n = static_cast<long>(dim());
  for (auto s : group_->generators()) {
    const ComplexMatrix ms = matrix(s);
    err = std::max(err, (ms * ms.adjoint() - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  return err;
}

FiniteRep FiniteRep::pullback(const GroupHom& alpha) const {
  if (alpha.target() != group_) fail(ErrorKind::InvalidArgument, "homomorphism does not land in the representation's group");
  FiniteRep r = *this;
  r.group_ = alpha.source();
  r.perm_.resize(alpha.source()->order());
  r.data_.resize(alpha.source()->order());
  for (Element x = 0; x < alpha.source()->order(); ++x) {
    r.perm_[x] = perm_[alpha(x)];
    r.data_[x] = data_[alpha(x)];
  }
  return r;
}

FiniteRep induced_rep(const FiniteSubgroup& h, const FiniteRep& rho_h) {
  if (rho_h.group() != h.abstract_group())
    fail(ErrorKind::InvalidArgument, "representation must live on the subgroup's abstract group");
  const auto& q = h.parent();
  const auto& reps = h.left_coset_reps();
  const std::size_t cosets = reps.size();
  const std::size_t inner = rho_h.blocks();
  const std::size_t b = rho_h.block_dim();

  FiniteRep r;
  r.group_ = q;
  r.blocks_ = cosets * inner;
  r.block_dim_ = b;
  r.signed_ = rho_h.is_rational();
  r.degree_ = rho_h.arithmetic_degree();
  r.perm_.assign(q->order(), std::vector<std::uint32_t>(r.blocks_));
  r.data_.assign(q->order(), std::vector<Complex>(r.blocks_ * b * b));
  for (Element g = 0; g < q->order(); ++g)
    for (std::size_t c = 0; c < cosets; ++c) {
      const Element gr = q->mul(g, reps[c]);
      const std::size_t c2 = h.left_coset_of(gr);
      const Element hh = h.local(q->mul(q->inv(reps[c2]), gr));
      for (std::size_t j = 0; j < inner; ++j) {
        const std::size_t src = c * inner + j;
        r.perm_[g][src] = static_cast<std::uint32_t>(c2 * inner + rho_h.block_target(hh, j));
        for (std::size_t i = 0; i < b * b; ++i) r.data_[g][src * b * b + i] = rho_h.block_entry(hh, j, i / b, i % b);
      }
    }

  const auto got = r.character();
  const auto want = induce_ordinary(h, rho_h.character());
  for (std::size_t k = 0; k < q->class_count(); ++k)
    if (std::abs(got.at_class(k) - want.at_class(k)) > 1e-8)
      fail(ErrorKind::CharacterMismatch, "induced representation character differs from the induction formula at class " +
                                             std::to_string(k));
  return r;
}

}  // namespace l2mult
