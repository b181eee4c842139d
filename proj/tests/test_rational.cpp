#include <gtest/gtest.h>

#include "stf/cyclotomic.hpp"
#include "stf/errors.hpp"
#include "stf/rational.hpp"

using namespace stf;

TEST(Rational, ParsesFractions) {
    EXPECT_EQ(parse_rational("3/6"), frac(1, 2));
    EXPECT_EQ(parse_rational("-4"), Q(-4));
    EXPECT_EQ(parse_rational("-2/8"), frac(-1, 4));
    EXPECT_ANY_THROW(parse_rational("1/0"));
    EXPECT_ANY_THROW(parse_rational("abc"));
}

TEST(Rational, FracIsCanonical) {
    EXPECT_EQ(frac(2, 4), frac(1, 2));
    EXPECT_EQ(frac(6, 3).get_den(), 1);
    EXPECT_EQ(to_string(frac(-3, 9)), "-1/3");
}

TEST(Rational, DeterminantAndInverse) {
    QMat a = {{Q(2), Q(-1)}, {Q(-1), Q(2)}};
    EXPECT_EQ(det(a), Q(3));
    QMat b = mat_mul(a, inverse(a));
    EXPECT_EQ(b, identity(2));
    EXPECT_EQ(rank(QMat{{Q(1), Q(2)}, {Q(2), Q(4)}}), 1);
}

TEST(Cyclotomic, RootsOfUnity) {
    Cyc i = Cyc::imag_unit();
    EXPECT_EQ(i * i, Cyc(-1));
    EXPECT_EQ(Cyc::exp_turns(Q(1, 4)), i);
    Cyc w = Cyc::root_of_unity(3, 1);
    EXPECT_EQ(Cyc(1) + w + w * w, Cyc(0));
    EXPECT_EQ(w.conj(), w * w);
    EXPECT_EQ(Cyc::exp_turns(Q(5, 4)), i);
}

TEST(Cyclotomic, MixedConductors) {
    Cyc a = Cyc::root_of_unity(4, 1) * Cyc::root_of_unity(3, 1);
    EXPECT_EQ(a, Cyc::root_of_unity(12, 7));
    EXPECT_EQ(a * a.inverse(), Cyc(1));
    Cyc sum(0);
    for (int k = 0; k < 12; ++k) sum += Cyc::root_of_unity(12, k);
    EXPECT_TRUE(sum.is_zero());
}

TEST(Cyclotomic, RationalDetection) {
    Cyc z = Cyc::root_of_unity(8, 1);
    Cyc r = z + z.conj();  // sqrt 2
    EXPECT_FALSE(r.is_rational());
    EXPECT_EQ(r * r, Cyc(2));
    EXPECT_TRUE((r * r).is_rational());
    EXPECT_EQ((r * r).rational(), Q(2));
    EXPECT_NEAR(r.to_complex().real(), std::sqrt(2.0), 1e-15);
}

TEST(Cyclotomic, MinimizedPrinting) {
    Cyc a = Cyc::root_of_unity(12, 3);
    EXPECT_EQ(a.minimized().conductor(), 4);
    EXPECT_EQ(a.str(), "z4");
    EXPECT_EQ(Cyc(frac(1, 2)).str(), "1/2");
}

TEST(Value, ExactAndNumeric) {
    Value a(Q(1, 3));
    Value b = Value::numeric({1.0 / 3.0, 0.0});
    EXPECT_TRUE(a.is_exact());
    EXPECT_FALSE(b.is_exact());
    EXPECT_TRUE(a.close_to(b, 1e-12));
    EXPECT_FALSE((a + b).is_exact());
    EXPECT_TRUE((a * Value(3)).close_to(Value(1), 0.0));
}
