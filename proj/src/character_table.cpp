#include "l2mult/character_table.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

double snap(double x) {
  double r = std::round(x);
  if (std::fabs(x - r) < 1e-9) return r == 0 ? 0.0 : r;
  return x;
}

Complex snap(Complex z) { return {snap(z.real()), snap(z.imag())}; }

bool table_valid(const GroupPtr& g, const std::vector<std::vector<Complex>>& rows) {
  const double n = static_cast<double>(g->order());
  double deg_sq = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const double d = rows[a][0].real();
    if (std::fabs(d - std::round(d)) > 1e-6 || d < 0.5) return false;
    deg_sq += d * d;
    for (std::size_t b = a; b < rows.size(); ++b) {
      Complex s = 0;
      for (std::size_t k = 0; k < rows[a].size(); ++k)
        s += static_cast<double>(g->class_size(k)) * rows[a][k] * std::conj(rows[b][k]);
      s /= n;
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(s - want) > 1e-6) return false;
    }
  }
  return std::fabs(deg_sq - n) < 1e-6 * n;
}

}  // namespace

OrdinaryCharacter::OrdinaryCharacter(GroupPtr group, std::vector<Complex> class_values)
    : group_(std::move(group)), values_(std::move(class_values)) {
  if (values_.size() != group_->class_count()) fail(ErrorKind::InvalidArgument, "one value per class required");
}

long OrdinaryCharacter::degree_int() const { return std::lround(values_[0].real()); }

CharacterTable CharacterTable::compute(GroupPtr group, std::uint64_t seed) {
  if (group->order() > kOrderCap)
    fail(ErrorKind::InvalidArgument, "character table limited to order " + std::to_string(kOrderCap));
  const std::size_t r = group->class_count();
  const std::size_t n = group->order();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Complex> coeff(r);
    for (auto& c : coeff) c = Complex(normal(rng), normal(rng));
    // M[j][k] = sum_i c_i a_{ijk}, a_{ijk} = #{x in C_i, y in C_j : x y = z_k}.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k) {
      const Element z = group->class_rep(k);
      for (Element x = 0; x < n; ++x) {
        const Element y = group->mul(group->inv(x), z);
        m(static_cast<Eigen::Index>(group->class_of(y)), static_cast<Eigen::Index>(k)) += coeff[group->class_of(x)];
      }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) continue;
    std::vector<std::vector<Complex>> rows;
    bool ok = true;
    for (std::size_t e = 0; e < r && ok; ++e) {
      Eigen::VectorXcd w = solver.eigenvectors().col(static_cast<Eigen::Index>(e));
      if (std::abs(w(0)) < 1e-12) {
        ok = false;
        break;
      }
      w /= w(0);
      double s = 0;
      for (std::size_t k = 0; k < r; ++k)
        s += std::norm(w(static_cast<Eigen::Index>(k))) / static_cast<double>(group->class_size(k));
      const double deg = std::round(std::sqrt(static_cast<double>(n) / s));
      std::vector<Complex> row(r);
      for (std::size_t k = 0; k < r; ++k)
        row[k] = snap(deg * w(static_cast<Eigen::Index>(k)) / static_cast<double>(group->class_size(k)));
      rows.push_back(std::move(row));
    }
    if (!ok || !table_valid(group, rows)) continue;
    auto less = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::fabs(a[k].real() - b[k].real()) > 1e-9) return a[k].real() > b[k].real();
        if (std::fabs(a[k].imag() - b[k].imag()) > 1e-9) return a[k].imag() > b[k].imag();
      }
      return false;
    };
    auto is_trivial = [](const std::vector<Complex>& a) {
      return std::all_of(a.begin(), a.end(), [](Complex z) { return std::abs(z - 1.0) < 1e-9; });
    };
    std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
      if (is_trivial(a) != is_trivial(b)) return is_trivial(a);
      if (std::fabs(a[0].real() - b[0].real()) > 0.5) return a[0].real() < b[0].real();
      return less(a, b);
    });
    CharacterTable t;
    t.group_ = group;
    for (auto& row : rows) t.chars_.emplace_back(group, std::move(row));
    return t;
  }
  fail(ErrorKind::NumericalDegeneracy, "class-matrix eigenvectors did not separate the characters");
}

Complex inner_product(const OrdinaryCharacter& a, const OrdinaryCharacter& b) {
  if (a.group() != b.group()) fail(ErrorKind::InvalidArgument, "characters of different groups");
  const auto& g = a.group();
  Complex s = 0;
  for (std::size_t k = 0; k < g->class_count(); ++k)
    s += static_cast<double>(g->class_size(k)) * a.at_class(k) * std::conj(b.at_class(k));
  return s / static_cast<double>(g->order());
}

long multiplicity(const OrdinaryCharacter& chi, const OrdinaryCharacter& theta) {
  const Complex m = inner_product(theta, chi);
  const double r = std::round(m.real());
  if (std::abs(m - Complex(r, 0)) > 1e-6)
    fail(ErrorKind::NotIntegral, "multiplicity " + std::to_string(m.real()) + "+" + std::to_string(m.imag()) + "i");
  return static_cast<long>(r);
}

OrdinaryCharacter induce_ordinary(const FiniteSubgroup& h, const OrdinaryCharacter& chi) {
  if (chi.group() != h.abstract_group()) fail(ErrorKind::InvalidArgument, "character is not on the subgroup");
  const auto& g = h.parent();
  std::vector<Complex> values(g->class_count());
  for (std::size_t k = 0; k < g->class_count(); ++k) {
    const Element x = g->class_rep(k);
    Complex s = 0;
    for (Element t = 0; t < g->order(); ++t) {
      const Element c = g->mul(t, g->mul(x, g->inv(t)));
      if (h.contains(c)) s += chi(h.local(c));
    }
    values[k] = snap(s / static_cast<double>(h.order()));
  }
  return OrdinaryCharacter(g, std::move(values));
}

OrdinaryCharacter restrict_to(const OrdinaryCharacter& theta, const FiniteSubgroup& h) {
  if (theta.group() != h.parent()) fail(ErrorKind::InvalidArgument, "character is not on the parent group");
  const auto& hg = h.abstract_group();
  std::vector<Complex> values(hg->class_count());
  for (std::size_t k = 0; k < hg->class_count(); ++k) values[k] = theta(h.embed(hg->class_rep(k)));
  return OrdinaryCharacter(hg, std::move(values));
}

FrobeniusReport frobenius_check(const FiniteSubgroup& h, const OrdinaryCharacter& chi,
                                const OrdinaryCharacter& theta) {
  FrobeniusReport r;
  r.induced_side = multiplicity(theta, induce_ordinary(h, chi));
  r.restricted_side = multiplicity(chi, restrict_to(theta, h));
  r.ok = r.induced_side == r.restricted_side;
  return r;
}

}  // namespace l2mult
