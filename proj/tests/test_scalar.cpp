#include <random>

#include <gtest/gtest.h>

#include "loopalg/scalar.hpp"

using namespace loopalg;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime(5);

Scalar q(const std::string& s) { return Scalar::parse(Q, s); }

}  // namespace

TEST(Scalar, RationalAddition) { EXPECT_EQ((q("1/2") + q("1/3")).to_string(), "5/6"); }

TEST(Scalar, PrimeFieldMultiplication) {
    auto r = scalar_arith(Scalar::from_int(F5, 3), Scalar::from_int(F5, 4), ScalarOp::mul);
    EXPECT_EQ(r.to_string(), "2");
}

TEST(Scalar, PrimeFieldInverse) {
    auto two = Scalar::from_int(F5, 2);
    EXPECT_EQ(scalar_arith(two, two, ScalarOp::inv).to_string(), "3");
    EXPECT_EQ(scalar_arith(two, two, ScalarOp::neg).to_string(), "3");
}

TEST(Scalar, InverseOfZeroThrows) {
    EXPECT_THROW(Scalar::from_int(Q, 0).inverse(), InvalidInverse);
    EXPECT_THROW(Scalar::from_int(F5, 5).inverse(), InvalidInverse);
}

TEST(Scalar, MixedFieldsThrow) {
    EXPECT_THROW(Scalar::from_int(Q, 1) + Scalar::from_int(F5, 1), FieldMismatch);
    EXPECT_THROW(Scalar::from_int(FieldSpec::prime(3), 1) * Scalar::from_int(F5, 1), FieldMismatch);
}

TEST(Scalar, CanonicalForms) {
    EXPECT_EQ(q("6/-4").to_string(), "-3/2");
    EXPECT_EQ(q("-6/4").to_string(), "-3/2");
    EXPECT_EQ(q("+4/2").to_string(), "2");
    EXPECT_EQ(Scalar::from_int(F5, -1).to_string(), "4");
    EXPECT_EQ(Scalar::parse(F5, "1/2").to_string(), "3");
    EXPECT_EQ(Scalar::from_int(F5, 12), Scalar::from_int(F5, 2));
}

TEST(Scalar, ParseErrors) {
    EXPECT_THROW(q("abc"), ParseError);
    EXPECT_THROW(q("1/0"), ParseError);
    EXPECT_THROW(Scalar::parse(F5, "1/5"), ParseError);
    EXPECT_THROW(FieldSpec::prime(4), ParseError);
    EXPECT_THROW(FieldSpec::prime(1), ParseError);
}

TEST(Scalar, FieldAxiomsOnRandomTriples) {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
    for (const auto& field : {Q, F5, FieldSpec::prime(2), FieldSpec::prime(101)}) {
        auto draw = [&] { return Scalar::from_rational(field, mpq_class(num(rng), den(rng))); };
        for (int trial = 0; trial < 300; ++trial) {
            Scalar a, b, c;
            try {
                a = draw();
                b = draw();
                c = draw();
            } catch (const InvalidInverse&) {
                continue;  // denominator divisible by p
            }
            EXPECT_EQ((a + b) + c, a + (b + c));
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a + b, b + a);
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_TRUE((a - a).is_zero());
            EXPECT_EQ(a + (-a), Scalar::from_int(field, 0));
            if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), Scalar::from_int(field, 1));
        }
    }
}

TEST(Scalar, SerializationIsCanonical) {
    // Equal elements produce identical strings.
    EXPECT_EQ(q("2/4").to_string(), q("1/2").to_string());
    EXPECT_EQ(Scalar::parse(F5, "7").to_string(), Scalar::parse(F5, "-3").to_string());
}
