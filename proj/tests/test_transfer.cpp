#include <gtest/gtest.h>

#include "hlat/transfer.hpp"

using namespace hlat;

namespace {

const Prime p3(3), p5(5);

}  // namespace

TEST(MorphismTriple, IsoTestExamples) {
  auto m = [](QMatrix x) { return MorphismTriple(p3, std::move(x)); };
  EXPECT_TRUE(morphism_iso_test(m(QMatrix{{1, 0}, {0, 3}}), m(QMatrix{{3, 0}, {0, 1}})));
  EXPECT_FALSE(morphism_iso_test(m(QMatrix{{1, 0}, {0, 9}}), m(QMatrix{{3, 0}, {0, 3}})));
  EXPECT_TRUE(morphism_iso_test(m(QMatrix{{1, 0}, {0, 9}}), m(QMatrix{{3, 1}, {0, 3}})));
  EXPECT_FALSE(morphism_iso_test(m(QMatrix(2, 3)), m(QMatrix(3, 2))));
  EXPECT_THROW(m(QMatrix{{make_rational(1, 3)}}), InputError);
}

TEST(MorphismTriple, ExplicitIsomorphismWheneverTestPasses) {
  Rng rng(44);
  int found = 0;
  for (int t = 0; t < 300; ++t) {
    const Prime& p = (t % 2) ? p3 : p5;
    std::size_t r = uniform(rng, 1, 4), c = uniform(rng, 1, 4);
    MorphismTriple a(p, random_integral_matrix(rng, p, r, c, 2));
    QMatrix fb = (t % 3 == 0) ? random_integral_matrix(rng, p, r, c, 2) : random_gl(rng, p, r) * a.map * random_gl(rng, p, c);
    MorphismTriple b(p, fb);
    auto iso = morphism_isomorphism(a, b);
    ASSERT_EQ(iso.has_value(), morphism_iso_test(a, b));
    if (!iso) continue;
    ++found;
    EXPECT_EQ(iso->psi * a.map, b.map * iso->phi);
    EXPECT_TRUE(is_invertible_over(iso->phi, p));
    EXPECT_TRUE(is_invertible_over(iso->psi, p));
  }
  EXPECT_GE(found, 200);
}

TEST(TransferContext, Examples) {
  TransferContext id(GramForm(p3, 1, QMatrix::identity(3)));
  EXPECT_EQ(id.order().sizes(), (std::vector<std::size_t>{3}));
  QMatrix x{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}};
  EXPECT_EQ(id.tau(x), x.transpose());

  TransferContext c13(GramForm::diagonal(p3, {1, 3}));
  EXPECT_EQ(c13.order().sizes(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(c13.order().tiled().ideal().bounds, (Bounds{{0, 1}, {0, 0}}));

  TransferContext c113(GramForm::diagonal(p3, {1, 1, 3}));
  EXPECT_EQ(c113.order().sizes(), (std::vector<std::size_t>{2, 1}));
  EXPECT_LE(c113.block_groups(), 2u);

  TransferContext only_p(GramForm::diagonal(p5, {5, 10}));
  EXPECT_EQ(only_p.order().sizes(), (std::vector<std::size_t>{2}));
}

TEST(TransferContext, RejectsBadForms) {
  EXPECT_THROW(TransferContext(GramForm::diagonal(p3, {3, 1})), InputError);
  EXPECT_THROW(TransferContext(GramForm::diagonal(p3, {1, 9})), InputError);
  EXPECT_THROW(TransferContext(GramForm(p3, 1, QMatrix{{1, 1}, {1, 2}})), InputError);
}

TEST(TransferContext, InvolutionPreservesOrderAndIdempotents) {
  Rng rng(9);
  for (auto f : {GramForm::diagonal(p3, {1, 3}), GramForm::diagonal(p3, {1, 2, 3}), GramForm::diagonal(p5, {2, 5, 10})}) {
    TransferContext ctx(f);
    const std::size_t n = ctx.rank();
    for (std::size_t i = 0; i < n; ++i) {
      QMatrix e(n, n);
      e(i, i) = 1;
      EXPECT_EQ(ctx.tau(e), e);
    }
    for (int t = 0; t < 100; ++t) {
      QMatrix x = prime_power(f.prime(), uniform(rng, -1, 0)) * random_integral_matrix(rng, f.prime(), n, n, 2);
      EXPECT_EQ(ctx.tau(ctx.tau(x)), x);
      EXPECT_EQ(ctx.in_order(x), ctx.in_order(ctx.tau(x)));
    }
    EXPECT_TRUE(ctx.order().tiled().is_hereditary());
  }
}

TEST(TransferContext, ResidueAnisotropy) {
  EXPECT_TRUE(TransferContext(GramForm::diagonal(p3, {1, 3})).residue_anisotropic());
  EXPECT_TRUE(TransferContext(GramForm::diagonal(p3, {1, 1, 3})).residue_anisotropic());   // x²+y² anisotropic mod 3
  EXPECT_FALSE(TransferContext(GramForm::diagonal(p3, {1, -1})).residue_anisotropic());
  EXPECT_FALSE(TransferContext(GramForm::diagonal(p5, {1, 1})).residue_anisotropic());     // −1 is a square mod 5
  EXPECT_TRUE(TransferContext(GramForm::diagonal(p5, {1, 2, 5, 10})).residue_anisotropic());
  EXPECT_FALSE(TransferContext(GramForm::diagonal(p3, {1, 1, 1})).residue_anisotropic());
}

TEST(TransferForm, Examples) {
  TransferContext ctx(GramForm::diagonal(p3, {1, 3}));
  EXPECT_EQ(transfer_form(ctx, ctx.form()), QMatrix::identity(2));

  QMatrix a = transfer_form(ctx, GramForm(p3, 1, QMatrix{{1, 3}, {3, 3}}));
  EXPECT_EQ(a, (QMatrix{{1, 3}, {1, 1}}));
  EXPECT_TRUE(ctx.in_order(a));
  EXPECT_TRUE(ctx.is_unit(a));
  EXPECT_EQ(inverse(a), make_rational(-1, 2) * (QMatrix{{1, -3}, {-1, 1}}));
  EXPECT_EQ(ctx.tau(a), a);

  QMatrix b = transfer_form(ctx, GramForm::diagonal(p3, {1, 9}));
  EXPECT_EQ(b, (QMatrix{{1, 0}, {0, 3}}));
  EXPECT_TRUE(ctx.in_order(b));
  EXPECT_FALSE(ctx.is_unit(b));

  EXPECT_THROW(transfer_form(ctx, GramForm::diagonal(p3, {1})), InputError);
}

TEST(TransferForm, UnitIffSameCoradical) {
  Rng rng(10);
  TransferContext ctx(GramForm::diagonal(p3, {1, 2, 3}));
  for (int t = 0; t < 200; ++t) {
    QMatrix m = random_integral_matrix(rng, p3, 3, 3, 2);
    GramForm h(p3, 1, m + m.transpose());
    if (!h.is_nonsingular()) continue;
    QMatrix a = transfer_form(ctx, h);
    EXPECT_EQ(ctx.tau(a), a);
    if (ctx.in_order(a)) EXPECT_EQ(ctx.is_unit(a), coradical(h) == coradical(ctx.form()));
  }
}

TEST(TransferForm, CommutesWithClearingDenominators) {
  TransferContext ctx(GramForm::diagonal(p5, {1, 5}));
  QMatrix h{{make_rational(1, 2), make_rational(5, 3)}, {make_rational(5, 3), 10}};
  QMatrix cleared = Rational(6) * h;
  QMatrix a = transfer_form(ctx, GramForm(p5, 1, h));
  EXPECT_EQ(make_rational(1, 6) * transfer_form(ctx, GramForm(p5, 1, cleared)), a);
  EXPECT_EQ(inverse(ctx.form().gram()) * h, a);
}

TEST(CongruenceVerify, Examples) {
  TransferContext ctx(GramForm::diagonal(p3, {1, 3}));
  QMatrix id = QMatrix::identity(2);
  EXPECT_EQ(congruence_verify(ctx, id, id), CongruenceVerdict::integral_witness);
  EXPECT_EQ(congruence_verify(ctx, id, Rational(3) * id), CongruenceVerdict::not_witness);
  // x ∈ E but not a unit of E
  QMatrix x{{1, 0}, {0, 3}};
  EXPECT_EQ(congruence_verify(ctx, ctx.tau(x) * x, x), CongruenceVerdict::rational_only_witness);
}

TEST(RandomUnitary, CayleyIdentity) {
  Rng rng(1);
  TransferContext ctx(GramForm::diagonal(p3, {1, 3}));
  QMatrix z{{0, 1}, {make_rational(-1, 3), 0}};
  EXPECT_EQ(ctx.tau(z), -z);
  QMatrix id = QMatrix::identity(2);
  QMatrix u = (id - z) * inverse(id + z);
  EXPECT_EQ(ctx.tau(u) * u, id);
  for (int t = 0; t < 100; ++t) {
    QMatrix r = random_unitary(ctx, rng);
    EXPECT_EQ(ctx.tau(r) * r, id);
  }
}

TEST(Descent, AnisotropicContextsAreClean) {
  for (auto f : {GramForm::diagonal(p3, {1, 3}), GramForm::diagonal(p3, {1, 1, 3, 3}), GramForm::diagonal(p5, {1, 2, 5})}) {
    TransferContext ctx(f);
    auto rep = descent_experiment(ctx, 60, 7);
    EXPECT_EQ(rep.integral_witness_count, 60);
    EXPECT_TRUE(rep.clean());
  }
}

TEST(Descent, IsotropicNeedsOptIn) {
  TransferContext ctx(GramForm::diagonal(p3, {1, -1}));
  EXPECT_THROW(descent_experiment(ctx, 5, 1), PreconditionError);
  auto rep = descent_experiment(ctx, 40, 1, true);
  EXPECT_FALSE(rep.anisotropic);
  EXPECT_EQ(rep.trials, 40);
  EXPECT_EQ(rep.shift_law_violations, 0);
  // the rational unitary group is unbounded here, so witnesses escape E
  EXPECT_LT(rep.integral_witness_count, 40);
}

TEST(CongruenceLabel, Examples) {
  Rng rng(2);
  TransferContext ctx(GramForm::diagonal(p3, {1, 3}));
  auto base = congruence_class_label(ctx, QMatrix::identity(2));
  EXPECT_EQ(base, jordan_invariant_oracle(ctx.form()));
  for (int t = 0; t < 30; ++t) {
    QMatrix v = random_order_unit(ctx, rng);
    EXPECT_EQ(congruence_class_label(ctx, ctx.tau(v) * v), base);
  }
  QMatrix minus{{-1, 0}, {0, -1}};
  EXPECT_NE(congruence_class_label(ctx, minus), base);
  EXPECT_THROW(congruence_class_label(ctx, QMatrix{{1, 0}, {0, 3}}), InputError);
}
