#include <gtest/gtest.h>

#include <random>

#include "orbiqrr/trunc_series.hpp"

using namespace orbiqrr;

namespace {

Scalar lam() { return Scalar::lambda(); }

ScalarSeries q_series(std::initializer_list<long> coeffs, int D) {
    ScalarSeries s(1, D, 0, 0, true);
    int d = 0;
    for (long c : coeffs) s.set(d++, 0, Scalar(c));
    return s;
}

Scalar random_scalar(std::mt19937& rng) {
    std::uniform_int_distribution<int> small(-4, 4), pick(0, 5);
    Scalar s(Rational(small(rng), 1 + std::abs(small(rng))));
    switch (pick(rng)) {
    case 0: return s + lam();
    case 1: return s / (lam() + Scalar(1 + std::abs(small(rng))));
    case 2: return s * Scalar::root_of_unity(6, small(rng)) + Scalar::lambda(Rational(1, 2));
    case 3: return s * Scalar::ell() + Scalar::root_of_unity(4, 1);
    case 4: return (lam() * lam() - Scalar(small(rng))) / (lam() - Scalar(7));
    default: return s;
    }
}

} // namespace

TEST(Cyclotomic, PolynomialTable) {
    EXPECT_EQ(cyclotomic_polynomial(12).coeffs(), (std::vector<Rational>{1, 0, -1, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(2).coeffs(), (std::vector<Rational>{1, 1}));
}

TEST(Cyclotomic, RootsOfUnity) {
    EXPECT_EQ(root_of_unity(1, 0), Scalar(1));
    EXPECT_EQ(root_of_unity(2, 1), Scalar(-1));
    EXPECT_EQ(root_of_unity(12, 1).pow(6), Scalar(-1));
    for (int n = 1; n <= 12; ++n)
        for (int k = -3; k < n + 3; ++k) EXPECT_EQ(root_of_unity(n, k).pow(n), Scalar(1)) << n << " " << k;
    EXPECT_EQ(root_of_unity(12, 2), root_of_unity(6, 1));
    EXPECT_EQ(root_of_unity(12, 4) + root_of_unity(12, 8), Scalar(-1));
}

TEST(Cyclotomic, ReductionIdempotent) {
    QPoly p({1, 2, 3, 4, 5, 6, 7, 8, 9});
    Cyclo once = Cyclo::from_poly(12, p);
    Cyclo twice = Cyclo::from_poly(12, once.as_poly());
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.coeffs(), twice.coeffs());
}

TEST(Cyclotomic, InverseAndEmbedding) {
    Cyclo a = Cyclo::root_of_unity(5, 1) + Cyclo(Rational(2, 3));
    EXPECT_EQ(a * a.inverse(), Cyclo(1));
    EXPECT_TRUE(Cyclo(Rational(3, 7)).is_rational());
    EXPECT_EQ(Scalar(Rational(3, 7)) * root_of_unity(3, 1) * root_of_unity(3, 2), Scalar(Rational(3, 7)));
}

TEST(Scalar, CanonicalFractions) {
    Scalar a = (lam() * lam() - Scalar(1)) / (lam() - Scalar(1));
    EXPECT_EQ(a, lam() + Scalar(1));
    EXPECT_TRUE(a.den().is_one());
    Scalar b = Scalar(1) / (Scalar(2) * lam() + Scalar(4));
    EXPECT_EQ(b.den(), QPoly({2, 1}));
    EXPECT_EQ(b * (lam() + Scalar(2)), Scalar(Rational(1, 2)));
}

TEST(Scalar, HalfPowers) {
    Scalar h = Scalar::lambda(Rational(1, 2));
    EXPECT_EQ(h * h, lam());
    EXPECT_EQ(h.root(), 2);
    EXPECT_EQ((h * h).root(), 1);
    EXPECT_EQ(h.inverse() * lam(), h);
}

TEST(Scalar, CyclotomicNumeratorInverse) {
    Scalar a = lam() + root_of_unity(3, 1);
    Scalar inv = a.inverse();
    EXPECT_EQ(a * inv, Scalar(1));
    Scalar b = Scalar::lambda(Rational(1, 2)) * root_of_unity(12, 1) + Scalar(3);
    EXPECT_EQ(b * b.inverse(), Scalar(1));
}

TEST(Scalar, EllIsFormal) {
    Scalar l = Scalar::ell();
    EXPECT_EQ(l * Scalar(2) - l - l, Scalar(0));
    EXPECT_THROW(l.inverse(), NonInvertible);
    EXPECT_EQ((l * l + lam() * l).ell_degree(), 2);
}

TEST(Scalar, RingAxiomsRandomized) {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a - a, Scalar(0));
        if (!a.is_zero() && !a.has_ell()) EXPECT_EQ(a * a.inverse(), Scalar(1));
    }
}

TEST(Scalar, NonequivLimit) {
    EXPECT_EQ(nonequiv_limit(lam() + Scalar(5)), Scalar(5));
    EXPECT_THROW(nonequiv_limit(Scalar(1) / lam()), PoleAtZero);
    EXPECT_THROW(nonequiv_limit(Scalar::ell()), LogObstruction);
    EXPECT_EQ(nonequiv_limit(Scalar(3) / (lam() + Scalar(2))), Scalar(Rational(3, 2)));
    // prod_{k=1}^{5} (lambda + k z) at lambda = 0
    ScalarSeries prod = ScalarSeries::constant(Scalar(1), 0, 0);
    for (int k = 1; k <= 5; ++k) {
        ScalarSeries f(0, 0, 0, 1, true);
        f.set(Multidegree{}, 0, lam());
        f.set(Multidegree{}, 1, Scalar(k));
        prod *= f;
    }
    ScalarSeries lim = nonequiv_limit(prod);
    EXPECT_EQ(lim.coefficients().size(), 1u);
    EXPECT_EQ(lim.at(Multidegree{}, 5), Scalar(120));
}

TEST(Scalar, NonequivLimitIsHomomorphism) {
    std::mt19937 rng(11);
    auto pole_free = [&]() {
        std::uniform_int_distribution<int> c(-5, 5);
        return (Scalar(c(rng)) * lam() + Scalar(c(rng))) / (lam() + Scalar(1 + std::abs(c(rng)))) + root_of_unity(4, c(rng));
    };
    for (int i = 0; i < 30; ++i) {
        Scalar a = pole_free(), b = pole_free();
        EXPECT_EQ(nonequiv_limit(a + b), nonequiv_limit(a) + nonequiv_limit(b));
        EXPECT_EQ(nonequiv_limit(a * b), nonequiv_limit(a) * nonequiv_limit(b));
    }
}

TEST(Series, InvertExamples) {
    EXPECT_EQ(series_invert(q_series({1}, 3)), q_series({1}, 3));
    EXPECT_EQ(series_invert(q_series({1, 1}, 4)), q_series({1, -1, 1, -1, 1}, 4));
    EXPECT_EQ(series_invert(q_series({1, 120}, 2)), q_series({1, -120, 14400}, 2));
    ScalarSeries check = q_series({1, 120}, 2) * q_series({1, -120, 14400}, 2);
    EXPECT_EQ(check, q_series({1}, 2));
}

TEST(Series, InvertErrors) {
    EXPECT_THROW(series_invert(q_series({0, 1}, 2)), NonUnitConstantTerm);
    ScalarSeries s(1, 2, 0, 0, true);
    s.set(0, 0, Scalar::ell());
    EXPECT_THROW(series_invert(s), NonUnitConstantTerm);
}

TEST(Series, InvertRandomUnits) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> c(-9, 9);
    for (int i = 0; i < 100; ++i) {
        const int D = 1 + i % 4, zmax = i % 3;
        ScalarSeries a(1, D, 0, zmax, false);
        for (int d = 0; d <= D; ++d)
            for (int n = 0; n <= zmax; ++n) a.set(d, n, Scalar(Rational(c(rng), 1 + std::abs(c(rng)))));
        a.set(0, 0, Scalar(1 + std::abs(c(rng))) + (i % 2 ? lam() : Scalar(0)));
        ScalarSeries one = a * series_invert(a);
        ScalarSeries expect(1, D, 0, zmax, false);
        expect.set(0, 0, Scalar(1));
        EXPECT_TRUE(agree(one, expect)) << i;
    }
}

TEST(Series, TruncationNeverWidens) {
    ScalarSeries a(1, 3, -1, 2, false), b(1, 2, 0, 4, false);
    a.set(0, -1, Scalar(1));
    b.set(0, 0, Scalar(1));
    ScalarSeries p = a * b;
    EXPECT_EQ(p.max_degree(), 2);
    EXPECT_EQ(p.zmin(), -1);
    EXPECT_EQ(p.zmax(), 2);
    EXPECT_THROW(p.at(0, 3), TruncationTooNarrow);
}
