#include <gtest/gtest.h>

#include "hlat/random.hpp"
#include "hlat/refine.hpp"

using namespace hlat;

namespace {

const Prime p3(3), p5(5), p7(7);

AmbientForm standard(const Prime& p, const QMatrix& g) { return AmbientForm(p, g, QMatrix::identity(g.rows())); }

QMatrix random_rational_symmetric(Rng& rng, const Prime& p, std::size_t n) {
  for (;;) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Rational x = uniform(rng, 0, 4) == 0 ? Rational(0) : random_with_valuation(rng, p, uniform(rng, -2, 2));
        m(i, j) = m(j, i) = x;
      }
    if (determinant(m) != 0) return m;
  }
}

}  // namespace

TEST(AmbientForm, RejectsBadInput) {
  EXPECT_THROW(standard(p3, QMatrix{{1, 1}, {1, 1}}), SingularForm);
  EXPECT_THROW(standard(p3, QMatrix{{1, 2}, {0, 1}}), InputError);
  EXPECT_THROW(AmbientForm(p3, QMatrix::identity(2), QMatrix(2, 2)), InputError);
}

TEST(DualLattice, Examples) {
  auto d = dual_lattice(standard(p3, QMatrix{{1, 0}, {0, 9}}));
  EXPECT_EQ(d.quotient.exponents, (std::vector<long>{0, 2}));
  EXPECT_EQ(d.dual_basis, (QMatrix{{1, 0}, {0, make_rational(1, 9)}}));

  auto i = dual_lattice(standard(p5, QMatrix::identity(3)));
  EXPECT_EQ(i.quotient.finite_sum(), 0);
  EXPECT_TRUE(lattice_equal(i.dual_basis, i.basis, p5));

  AmbientForm a = standard(p3, QMatrix{{1, 0}, {0, make_rational(1, 3)}});
  auto da = dual_lattice(a);
  EXPECT_FALSE(lattice_contains(da.dual_basis, a.basis(), p3));
  AmbientForm b = intersect_with_dual(a);
  EXPECT_EQ(smith_normal_form(b.lattice_gram(), p3).profile.exponents, (std::vector<long>{0, 1}));
  // the intersection is Z ⊕ 3Z, whose Gram is diag(1,3)
  EXPECT_TRUE(lattice_equal(b.basis(), QMatrix{{1, 0}, {0, 3}}, p3));
}

TEST(DualLattice, PairingIsPerfectAndInvolutive) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const Prime& p = (t % 3 == 0) ? p3 : (t % 3 == 1) ? p5 : p7;
    std::size_t n = uniform(rng, 1, 4);
    AmbientForm a(p, random_rational_symmetric(rng, p, n), prime_power(p, uniform(rng, -1, 1)) * random_gl(rng, p, n));
    auto d = dual_lattice(a);
    EXPECT_EQ(d.basis.transpose() * a.gram() * d.dual_basis, QMatrix::identity(n));
    auto dd = dual_lattice(a.with_basis(d.dual_basis));
    EXPECT_EQ(dd.dual_basis, a.basis());
  }
}

TEST(Refine, SquareNineBecomesUnimodular) {
  auto r = refine_to_nearly_unimodular(standard(p3, QMatrix{{1, 0}, {0, 9}}));
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].n, 1);
  EXPECT_TRUE(lattice_equal(r.lattice.basis(), QMatrix{{1, 0}, {0, make_rational(1, 3)}}, p3));
  EXPECT_EQ(r.lattice.lattice_gram(), QMatrix::identity(2));
  EXPECT_EQ(rational_class(r.lattice.lattice_gram(), p3), rational_class(QMatrix{{1, 0}, {0, 9}}, p3));
}

TEST(Refine, NearlyUnimodularStartIsUnchanged) {
  AmbientForm a = standard(p3, QMatrix{{1, 0}, {0, 3}});
  auto r = refine_to_nearly_unimodular(a);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.lattice.basis(), a.basis());
}

TEST(Refine, OutputDependsOnStartLattice) {
  QMatrix g{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}};
  auto a = refine_to_nearly_unimodular(standard(p3, g));
  QMatrix b{{1, 0, 0}, {0, 2, 1}, {0, 1, 2}};
  auto r = refine_to_nearly_unimodular(AmbientForm(p3, g, b));
  GramForm fa(p3, 1, a.lattice.lattice_gram());
  GramForm fb(p3, 1, r.lattice.lattice_gram());
  EXPECT_EQ(jordan_invariant_oracle(fa), jordan_invariant_oracle(GramForm::diagonal(p3, {1, 1, -1})));
  EXPECT_EQ(jordan_invariant_oracle(fb), jordan_invariant_oracle(GramForm::diagonal(p3, {1, 3, -3})));
  EXPECT_NE(jordan_invariant_oracle(fa), jordan_invariant_oracle(fb));
  EXPECT_TRUE(isometric_rational(fa, fb));

  // scaling the last two coordinates by 3 refines back to the standard lattice
  auto s = refine_to_nearly_unimodular(AmbientForm(p3, g, QMatrix{{1, 0, 0}, {0, 3, 0}, {0, 0, 3}}));
  EXPECT_TRUE(lattice_equal(s.lattice.basis(), QMatrix::identity(3), p3));
}

TEST(Refine, DefaultStartClearsDenominators) {
  auto a = AmbientForm::with_default_lattice(p3, QMatrix{{make_rational(1, 27), 0}, {0, 1}});
  EXPECT_TRUE(is_integral(a.lattice_gram(), p3));
  EXPECT_EQ(a.basis(), 9 * QMatrix::identity(2));
}

TEST(Refine, RandomFormsReachNearlyUnimodular) {
  Rng rng(500);
  for (int t = 0; t < 150; ++t) {
    const Prime& p = (t % 3 == 0) ? p3 : (t % 3 == 1) ? p5 : p7;
    std::size_t n = uniform(rng, 1, 5);
    QMatrix g = random_rational_symmetric(rng, p, n);
    auto r = refine_to_nearly_unimodular(standard(p, g));
    GramForm out(p, 1, r.lattice.lattice_gram());
    EXPECT_TRUE(is_nearly_unimodular(out));
    EXPECT_EQ(rational_class(out), rational_class(g, p));
    EXPECT_LE(static_cast<long>(r.trace.size()), r.initial_colength);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      EXPECT_TRUE(r.trace[i].chain_holds);
      if (i > 0) EXPECT_LT(r.trace[i].colength, r.trace[i - 1].colength);
    }
  }
}
