#include <gtest/gtest.h>

#include "common.hpp"

using namespace loopalg;
using testing_util::load;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime(5);

std::vector<std::string> builtin_list() {
    return {"sphere:2", "sphere:3", "sphere:4", "cp:2", "cp:3", "product(sphere:2,sphere:3)",
            "product(sphere:3,sphere:3)", "product(sphere:2,sphere:2)", "connected-sum-s3x3"};
}

std::map<int, int> degree_counts(const FDGA& a) {
    std::map<int, int> out;
    for (std::size_t i = 0; i < a.dim(); ++i) ++out[a.upper(i)];
    return out;
}

// Counts products e_i e_j with the given label pair; -1 if absent.
std::string product_label(const FDGA& a, const std::string& x, const std::string& y) {
    auto i = a.basis.find(x), j = a.basis.find(y);
    if (!i || !j) return "?";
    const auto& c = a.product(*i, *j);
    if (c.empty()) return "0";
    std::string out;
    for (const auto& [k, v] : c) out += (out.empty() ? "" : "+") + v.to_string() + "*" + a.basis.label(k);
    return out;
}

}  // namespace

TEST(Validate, SphereIsValidCommutativePoincare) {
    auto r = validate_fdga(sphere(2, Q));
    EXPECT_TRUE(r.valid());
    EXPECT_TRUE(r.commutative);
    EXPECT_TRUE(r.poincare);
}

TEST(Validate, AssociativityViolationIsReported) {
    // x in degree 2, y = x^2 in degree 4, z in degree 6; (xx)x = z but x(xx) = 2z.
    FDGA a;
    a.name = "bad";
    a.field = Q;
    a.formal_dimension = 6;
    auto x = a.basis.add("x", -2), y = a.basis.add("y", -4), z = a.basis.add("z", -6);
    a.differential.resize(3);
    a.products[{x, x}] = {{y, Scalar::from_int(Q, 1)}};
    a.products[{y, x}] = {{z, Scalar::from_int(Q, 1)}};
    a.products[{x, y}] = {{z, Scalar::from_int(Q, 2)}};
    auto r = validate_fdga(a);
    EXPECT_FALSE(r.valid());
    EXPECT_TRUE(r.has("associativity"));
}

TEST(Validate, DegreeAndConnectivityViolations) {
    FDGA a;
    a.name = "bad";
    a.field = Q;
    a.formal_dimension = 4;
    auto x = a.basis.add("x", -2);
    auto w = a.basis.add("w", -1);
    auto t = a.basis.add("t", -6);
    a.differential.resize(3);
    a.products[{x, x}] = {{x, Scalar::from_int(Q, 1)}};
    (void)w;
    (void)t;
    auto r = validate_fdga(a);
    EXPECT_TRUE(r.has("connectivity"));
    EXPECT_TRUE(r.has("degree"));
}

TEST(Validate, LeibnizViolationNamesThePair) {
    auto a = load("broken.json");
    auto r = validate_fdga(a);
    ASSERT_TRUE(r.has("leibniz"));
    bool named = false;
    for (const auto& v : r.violations)
        if (v.kind == "leibniz" && v.message.find("a*a") != std::string::npos) named = true;
    EXPECT_TRUE(named);
}

TEST(Validate, DSquaredViolation) {
    FDGA a;
    a.name = "dd";
    a.field = Q;
    a.formal_dimension = 4;
    auto x = a.basis.add("x", -2), y = a.basis.add("y", -3), z = a.basis.add("z", -4);
    a.differential = {{{y, Scalar::from_int(Q, 1)}}, {{z, Scalar::from_int(Q, 1)}}, {}};
    (void)x;
    EXPECT_TRUE(validate_fdga(a).has("d_squared"));
}

TEST(Validate, EveryBuiltinOverQAndF5) {
    for (const auto& name : builtin_list())
        for (const auto& f : {Q, F5}) {
            auto r = validate_fdga(builtin_example(name, f));
            EXPECT_TRUE(r.valid()) << name << " over " << f.to_string();
            EXPECT_TRUE(r.commutative) << name;
            EXPECT_TRUE(r.poincare) << name;
        }
}

TEST(Validate, SampleFiles) {
    for (const auto& file : {"s2.json", "cp2.json", "twisted_s2s2.json", "twisted_s3s3.json"}) {
        auto r = validate_fdga(load(file));
        EXPECT_TRUE(r.valid()) << file;
        EXPECT_TRUE(r.poincare) << file;
    }
    auto nc = validate_fdga(load("noncommutative.json"));
    EXPECT_TRUE(nc.valid());
    EXPECT_FALSE(nc.commutative);
}

TEST(Builtins, Examples) {
    auto s3 = builtin_example("sphere(3)", Q);
    ASSERT_EQ(s3.dim(), 1u);
    EXPECT_EQ(s3.upper(0), 3);
    EXPECT_TRUE(s3.products.empty());

    auto cp2 = builtin_example("cp:2", Q);
    ASSERT_EQ(cp2.dim(), 2u);
    EXPECT_EQ(cp2.upper(0), 2);
    EXPECT_EQ(cp2.upper(1), 4);
    EXPECT_EQ(product_label(cp2, "x", "x"), "1*x^2");
    EXPECT_THROW(builtin_example("torus", Q), ConstructionError);
    EXPECT_THROW(builtin_example("sphere:1", Q), ConstructionError);
}

TEST(TensorProduct, S3TimesS3) {
    auto t = tensor_product(sphere(3, Q), sphere(3, Q));
    EXPECT_EQ(t.dim(), 3u);  // u1, u2, u1u2 plus the implicit unit
    EXPECT_EQ(t.formal_dimension, 6);
    EXPECT_EQ(degree_counts(t), (std::map<int, int>{{3, 2}, {6, 1}}));
    EXPECT_EQ(product_label(t, "u_1", "u_2"), "1*u_1*u_2");
    EXPECT_EQ(product_label(t, "u_2", "u_1"), "-1*u_1*u_2");
    EXPECT_TRUE(validate_fdga(t).valid());
}

TEST(TensorProduct, S2TimesS2) {
    auto t = tensor_product(sphere(2, Q), sphere(2, Q));
    EXPECT_EQ(degree_counts(t), (std::map<int, int>{{2, 2}, {4, 1}}));
    EXPECT_EQ(product_label(t, "u_1", "u_2"), "1*u_1*u_2");
    EXPECT_EQ(product_label(t, "u_1", "u_1"), "0");
    EXPECT_EQ(product_label(t, "u_2", "u_2"), "0");
}

TEST(TensorProduct, S2TimesS3HasDimensionFive) {
    auto t = tensor_product(sphere(2, Q), sphere(3, Q));
    auto r = validate_fdga(t);
    EXPECT_TRUE(r.valid());
    EXPECT_TRUE(r.poincare);
    EXPECT_EQ(t.formal_dimension, 5);
}

TEST(TensorProduct, TrivialAlgebraIsAUnit) {
    FDGA k;
    k.name = "k";
    k.field = Q;
    auto cp2 = complex_projective(2, Q);
    auto t = tensor_product(cp2, k);
    EXPECT_EQ(t.dim(), cp2.dim());
    EXPECT_EQ(degree_counts(t), degree_counts(cp2));
    EXPECT_EQ(t.formal_dimension, cp2.formal_dimension);
    EXPECT_EQ(t.products.size(), cp2.products.size());
}

TEST(TensorProduct, ValidOnBuiltinPairs) {
    std::vector<std::string> small = {"sphere:2", "sphere:3", "cp:2", "product(sphere:2,sphere:3)"};
    for (const auto& x : small)
        for (const auto& y : small) {
            auto t = tensor_product(builtin_example(x, Q), builtin_example(y, Q));
            auto r = validate_fdga(t);
            EXPECT_TRUE(r.valid()) << x << " (x) " << y;
            EXPECT_TRUE(r.poincare) << x << " (x) " << y;
        }
    EXPECT_THROW(tensor_product(sphere(2, Q), sphere(2, F5)), FieldMismatch);
}

TEST(ConnectedSum, TripleProducts) {
    auto m = connected_sum_example(Q);
    EXPECT_EQ(degree_counts(m), (std::map<int, int>{{3, 6}, {6, 6}, {9, 1}}));
    auto r = validate_fdga(m);
    EXPECT_TRUE(r.valid());
    EXPECT_TRUE(r.poincare);
    // a1 a2 a3 = omega and e1 e2 e3 = omega; cross products vanish.
    auto ab = m.multiply(m.element(*m.basis.find("a")), m.element(*m.basis.find("b")));
    auto abc = m.multiply(ab, m.element(*m.basis.find("c")));
    auto ef = m.multiply(m.element(*m.basis.find("e")), m.element(*m.basis.find("f")));
    auto efg = m.multiply(ef, m.element(*m.basis.find("g")));
    auto omega = m.element(*m.basis.find("omega"));
    EXPECT_EQ(abc, omega);
    EXPECT_EQ(efg, omega);
    EXPECT_TRUE(m.multiply(m.element(*m.basis.find("a")), m.element(*m.basis.find("e"))).empty());
}

TEST(ConnectedSum, TwoThreeSpheresGiveAThreeSphere) {
    auto m = connected_sum(sphere(3, Q, "x"), sphere(3, Q, "y"));
    ASSERT_EQ(m.dim(), 1u);
    EXPECT_EQ(m.upper(0), 3);
    EXPECT_EQ(m.basis.label(0), "omega");
    EXPECT_TRUE(validate_fdga(m).poincare);
}

TEST(ConnectedSum, PreconditionErrors) {
    using K = ConstructionError::Kind;
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const ConstructionError& e) {
            return e.kind();
        }
        return K::invalid_argument;
    };
    EXPECT_EQ(kind_of([] { connected_sum(complex_projective(2, Q), tensor_product(sphere(3, Q), sphere(3, Q))); }),
              K::dimension_mismatch);
    EXPECT_EQ(kind_of([] { connected_sum(sphere(2, Q), sphere(2, Q)); }), K::dimension_too_small);
    EXPECT_EQ(kind_of([] { connected_sum(load("twisted_s3s3.json"), load("twisted_s3s3.json")); }),
              K::nonzero_differential);
    EXPECT_EQ(kind_of([] { connected_sum(load("noncommutative.json"), complex_projective(2, Q)); }), K::not_commutative);
}

TEST(ConnectedSum, PoincarePairingIsNondegenerate) {
    auto cp2 = complex_projective(2, Q);
    auto s2s2 = tensor_product(sphere(2, Q), sphere(2, Q));
    EXPECT_TRUE(validate_fdga(connected_sum(cp2, s2s2)).poincare);
    EXPECT_TRUE(validate_fdga(connected_sum(cp2, cp2)).poincare);
}

TEST(Bimodule, DualOfS2) {
    auto s2 = sphere(2, Q);
    auto m = dual_bimodule(s2);
    ASSERT_EQ(m.dim(), 2u);
    EXPECT_EQ(m.lower(0), 0);
    EXPECT_EQ(m.lower(1), 2);
    EXPECT_TRUE(validate_bimodule(s2, m).empty());
}

TEST(Bimodule, AxiomsHoldForEveryCoefficientKind) {
    std::vector<FDGA> algebras;
    for (const auto& name : builtin_list())
        if (name != "connected-sum-s3x3") algebras.push_back(builtin_example(name, Q));
    for (const auto& file : {"twisted_s2s2.json", "twisted_s3s3.json", "noncommutative.json"})
        algebras.push_back(load(file));
    algebras.push_back(connected_sum_example(F5));
    for (const auto& a : algebras) {
        ASSERT_LE(a.dim() + 1, 16u);
        EXPECT_TRUE(validate_bimodule(a, self_bimodule(a)).empty()) << a.name;
        EXPECT_TRUE(validate_bimodule(a, dual_bimodule(a)).empty()) << a.name;
        EXPECT_TRUE(validate_bimodule(a, trivial_bimodule(a)).empty()) << a.name;
    }
}

TEST(Bimodule, TrivialActionsFactorThroughAugmentation) {
    auto a = complex_projective(2, Q);
    auto k = trivial_bimodule(a);
    ASSERT_EQ(k.dim(), 1u);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        EXPECT_TRUE(k.left[i][0].empty());
        EXPECT_TRUE(k.right[i][0].empty());
    }
}

TEST(Bimodule, BrokenActionIsRejected) {
    auto a = complex_projective(2, Q);
    auto m = self_bimodule(a);
    // Break (x x) n = x (x n) on n = 1.
    m.left[0][0] = {};
    EXPECT_FALSE(validate_bimodule(a, m).empty());
}

TEST(Cohomology, TwistedModelsMatchTheirFormalCousins) {
    auto h = cohomology(load("twisted_s3s3.json"));
    std::map<int, std::size_t> dims;
    for (const auto& [p, reps] : h.representatives) dims[p] = reps.size();
    EXPECT_EQ(dims[3], 2u);
    EXPECT_EQ(dims[4], 0u);
    EXPECT_EQ(dims[6], 1u);
    auto ha = cohomology_algebra(load("twisted_s3s3.json"));
    EXPECT_TRUE(validate_fdga(ha).valid());
    EXPECT_TRUE(ha.has_zero_differential());
}

TEST(Canonicalize, SortsByDegreeThenLabel) {
    FDGA a;
    a.name = "t";
    a.field = Q;
    a.formal_dimension = 4;
    a.basis.add("z", -4);
    a.basis.add("y", -2);
    a.basis.add("x", -2);
    a.differential.resize(3);
    auto c = canonicalize(a);
    EXPECT_EQ(c.basis.label(0), "x");
    EXPECT_EQ(c.basis.label(1), "y");
    EXPECT_EQ(c.basis.label(2), "z");
}
