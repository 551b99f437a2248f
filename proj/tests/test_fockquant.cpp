#include <gtest/gtest.h>

#include "orbiqrr/fock.hpp"
#include "support.hpp"

using namespace orbiqrr;
using orbiqrr::testing::random_matrix;
using orbiqrr::testing::random_rational;

namespace {

/// Projection of a random matrix onto B* = (-1)^{m+1} B.
Matrix random_symplectic(const Matrix& G, int m, std::mt19937& rng) {
    const Matrix R = random_matrix(G.size(), rng);
    const Matrix adj = adjoint_matrix(G, R);
    return scaled(m % 2 ? R + adj : R - adj, Scalar(Rational(1, 2)));
}

Exponents vars(std::initializer_list<int> v) {
    Exponents e;
    for (int x : v) e[x] += 1;
    return e;
}

}  // namespace

TEST(Quantize, StringOperatorOnPoint) {
    const Matrix G = identity_matrix(1);
    const FockOperator op = quantize_monomial(G, identity_matrix(1), -1, 5);
    WeylElement expected = WeylElement::monomial(-1, vars({0, 0}), {}, Scalar(Rational(-1, 2)));
    for (int k = 1; k <= 5; ++k) expected += WeylElement::monomial(0, vars({k}), vars({k - 1}), Scalar(-1));
    EXPECT_EQ(op.terms, expected);
    EXPECT_TRUE(op.has_only_quantization_shapes());
    EXPECT_TRUE(op.truncated);
}

TEST(Quantize, PositivePowerOnPoint) {
    const Matrix G = identity_matrix(1);
    const FockOperator op = quantize_monomial(G, identity_matrix(1), 1, 5);
    WeylElement expected = WeylElement::monomial(1, {}, vars({0, 0}), Scalar(Rational(1, 2)));
    for (int k = 0; k + 1 <= 5; ++k) expected += WeylElement::monomial(0, vars({k}), vars({k + 1}), Scalar(-1));
    EXPECT_EQ(op.terms, expected);
}

TEST(Quantize, DegreeZeroNeedsSkewEndomorphism) {
    const TargetModel bmu2 = build_bmu(2);
    EXPECT_THROW(quantize_monomial(bmu2, identity_matrix(2), 0, 3), NotInfinitesimallySymplectic);
    Matrix B = zero_matrix(2);
    B[0][1] = Scalar(1);
    B[1][0] = Scalar(-1);
    const FockOperator op = quantize_monomial(bmu2, B, 0, 3);
    WeylElement expected;
    for (int k = 0; k <= 3; ++k) {
        expected += WeylElement::monomial(0, vars({2 * k + 1}), vars({2 * k}), Scalar(-1));
        expected += WeylElement::monomial(0, vars({2 * k}), vars({2 * k + 1}), Scalar(1));
    }
    EXPECT_EQ(op.terms, expected);
    EXPECT_EQ(quantize_via_hamiltonian(gram_matrix(bmu2), B, 0, 3).terms, op.terms);
}

TEST(Quantize, FormulaMatchesHamiltonian) {
    std::mt19937 rng(11);
    for (const TargetModel& t : {build_point(), build_bmu(2), build_bmu(3), build_pn(2), build_wps({1, 1, 2})}) {
        const Matrix G = gram_matrix(t);
        for (int m = -3; m <= 3; ++m) {
            const Matrix B = random_symplectic(G, m, rng);
            ASSERT_TRUE(is_infinitesimally_symplectic(G, B, m));
            const FockOperator a = quantize_monomial(G, B, m, 5);
            const FockOperator b = quantize_via_hamiltonian(G, B, m, 5);
            EXPECT_EQ(a.terms, b.terms) << t.name << " m=" << m;
            EXPECT_TRUE(a.has_only_quantization_shapes());
        }
    }
}

TEST(Quantize, NotSymplecticRejected) {
    EXPECT_THROW(quantize_monomial(identity_matrix(1), identity_matrix(1), 0, 2), NotInfinitesimallySymplectic);
    EXPECT_THROW(quantize_monomial(identity_matrix(1), identity_matrix(1), 2, 3), NotInfinitesimallySymplectic);
    EXPECT_THROW(quantize_monomial(identity_matrix(1), identity_matrix(1), -3, 2), TruncationTooNarrow);
}

TEST(Quantize, Linear) {
    std::mt19937 rng(5);
    const Matrix G = gram_matrix(build_bmu(3));
    for (int m = -2; m <= 2; ++m) {
        const Matrix B1 = random_symplectic(G, m, rng), B2 = random_symplectic(G, m, rng);
        const FockOperator sum = quantize_monomial(G, B1 + B2, m, 4);
        const FockOperator parts = quantize_monomial(G, B1, m, 4) + quantize_monomial(G, B2, m, 4);
        EXPECT_EQ(sum.terms, parts.terms);
    }
    const Matrix B1 = random_symplectic(G, 1, rng), B0 = random_symplectic(G, -1, rng);
    EXPECT_EQ(quantize(G, {{1, B1}, {-1, B0}}, 4).terms, (quantize_monomial(G, B1, 1, 4) + quantize_monomial(G, B0, -1, 4)).terms);
}

TEST(Apply, Examples) {
    const FockIndex ix{1, 4};
    const Matrix G = identity_matrix(1);
    const FockOperator string_op = quantize_monomial(G, identity_matrix(1), -1, 4);
    EXPECT_TRUE(apply(string_op, FockPolynomial(ix, 6)).is_zero());

    FockOperator dd{ix, WeylElement::monomial(1, {}, vars({0, 0}), Scalar(Rational(1, 2))), false};
    FockPolynomial q0sq(ix, 4);
    q0sq.add(0, vars({0, 0}), Scalar(1));
    const FockPolynomial r = apply(dd, q0sq);
    EXPECT_EQ(r.terms().size(), 1u);
    EXPECT_EQ(r.coefficient(1, {}), Scalar(1));
    EXPECT_EQ(r.cutoff(), 2);
}

TEST(Apply, LeibnizAndLinearity) {
    std::mt19937 rng(9);
    const FockIndex ix{2, 3};
    const Matrix G = gram_matrix(build_bmu(2));
    const FockOperator op = quantize_monomial(G, random_symplectic(G, 1, rng), 1, 3);
    const auto random_poly = [&] {
        FockPolynomial p(ix, 4);
        for (int j = 0; j < 6; ++j) {
            Exponents e;
            std::uniform_int_distribution<int> v(0, ix.count() - 1), d(1, 2);
            e[v(rng)] += d(rng);
            e[v(rng)] += 1;
            p.add(0, e, Scalar(random_rational(rng)));
        }
        return p;
    };
    const FockPolynomial P = random_poly(), Q = random_poly();
    const Scalar c(random_rational(rng));
    EXPECT_EQ((apply(op, P * c + Q) - (apply(op, P) * c + apply(op, Q))).is_zero(), true);

    // first-order part obeys Leibniz on products
    FockOperator first{ix, {}, false};
    for (auto& [k, v] : op.terms.terms())
        if (shape_of(k) == FockShape::QD) first.terms.add(k, v);
    const FockPolynomial lhs = apply(first, P * Q);
    const FockPolynomial rhs = apply(first, P) * Q + P * apply(first, Q);
    const int cut = std::min(lhs.cutoff(), rhs.cutoff());
    EXPECT_TRUE((lhs.with_cutoff(cut) - rhs.with_cutoff(cut)).is_zero());
}

TEST(Apply, IndexOverflow) {
    const FockOperator op = quantize_monomial(identity_matrix(1), identity_matrix(1), -1, 5);
    EXPECT_THROW(apply(op, FockPolynomial(FockIndex{1, 3}, 4)), IndexOverflow);
    EXPECT_THROW(apply(op, FockPolynomial(FockIndex{2, 5}, 4)), IndexOverflow);
}

TEST(Weyl, CanonicalCommutator) {
    const WeylElement q = WeylElement::monomial(0, vars({0}), {}, Scalar(1));
    const WeylElement d = WeylElement::monomial(0, {}, vars({0}), Scalar(1));
    EXPECT_EQ(commutator(d, q), WeylElement::constant(Scalar(1)));
    const WeylElement dd = d * d, qq = q * q;
    // [d^2, q^2] = 4 q d + 2
    EXPECT_EQ(commutator(dd, qq), WeylElement::monomial(0, vars({0}), vars({0}), Scalar(4)) + WeylElement::constant(Scalar(2)));
}

TEST(Cocycle, ZAgainstInverseZOnPoint) {
    const Matrix G = identity_matrix(1), one = identity_matrix(1);
    EXPECT_EQ(commutator_cocycle(G, {one, 1}, {one, -1}, 6), Scalar(Rational(-1, 2)));
    EXPECT_EQ(cocycle_closed_form(G, {one, 1}, {one, -1}), Scalar(Rational(-1, 2)));
    EXPECT_EQ(commutator_cocycle(G, {one, -1}, {one, 1}, 6), Scalar(Rational(1, 2)));
}

TEST(Cocycle, RandomPairsMatchClosedForm) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> pick_m(-3, 3);
    int nonzero = 0;
    const TargetModel targets[] = {build_point(), build_bmu(2)};
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix G = gram_matrix(targets[trial % 2]);
        const int m1 = pick_m(rng), m2 = pick_m(rng);
        const Matrix B1 = random_symplectic(G, m1, rng), B2 = random_symplectic(G, m2, rng);
        const int K = std::abs(m1) + std::abs(m2) + 3;
        const Scalar direct = commutator_cocycle(G, {B1, m1}, {B2, m2}, K);
        EXPECT_EQ(direct, cocycle_closed_form(G, {B1, m1}, {B2, m2})) << "m=" << m1 << "," << m2;
        if (m1 >= 0 && m2 >= 0) EXPECT_TRUE(direct.is_zero());
        if (!direct.is_zero()) ++nonzero;
    }
    EXPECT_GT(nonzero, 0);
}

TEST(Cocycle, SelfAndPositivePairsVanish) {
    std::mt19937 rng(3);
    const Matrix G = gram_matrix(build_bmu(2));
    for (int m = -3; m <= 3; ++m) {
        const Matrix B = random_symplectic(G, m, rng);
        EXPECT_TRUE(commutator_cocycle(G, {B, m}, {B, m}, 2 * std::abs(m) + 2).is_zero());
    }
    const Matrix B1 = random_symplectic(G, 1, rng), B2 = random_symplectic(G, 2, rng);
    EXPECT_TRUE(commutator_cocycle(G, {B1, 1}, {B2, 2}, 5).is_zero());
}

TEST(Cocycle, NeedsRoom) {
    const Matrix one = identity_matrix(1);
    EXPECT_THROW(commutator_cocycle(one, {one, 1}, {one, -1}, 3), TruncationTooNarrow);
}

TEST(StringEquation, PointPotentialResidualVanishes) {
    for (int nmax = 3; nmax <= 6; ++nmax) {
        const FockPolynomial F = point_genus0_potential(nmax, nmax - 2);
        const StringResidual r = string_residual(F);
        EXPECT_EQ(r.exact_through, nmax - 1);
        EXPECT_TRUE(r.vanishes) << "n<=" << nmax << ": " << r.residual.to_string();
    }
}

TEST(StringEquation, PotentialCoefficients) {
    const FockPolynomial F = point_genus0_potential(5, 3);
    const FockIndex& ix = F.index();
    EXPECT_EQ(F.coefficient(0, vars({0, 0, 0})), Scalar(Rational(1, 6)));
    // <tau_0^3 tau_1>/3! = 1/6
    EXPECT_EQ(F.coefficient(0, {{ix.var(0, 0), 3}, {ix.var(1, 0), 1}}), Scalar(Rational(1, 6)));
    // <tau_0^4 tau_2>/4!, <tau_0^3 tau_1^2>/(3! 2!)
    EXPECT_EQ(F.coefficient(0, {{ix.var(0, 0), 4}, {ix.var(2, 0), 1}}), Scalar(Rational(1, 24)));
    EXPECT_EQ(F.coefficient(0, {{ix.var(0, 0), 3}, {ix.var(1, 0), 2}}), Scalar(Rational(1, 6)));
}

TEST(StringEquation, CorruptedPotentialDetected) {
    FockPolynomial F = point_genus0_potential(6, 4);
    const FockIndex& ix = F.index();
    F.add(0, {{ix.var(0, 0), 4}, {ix.var(1, 0), 1}}, Scalar(Rational(1, 7)));
    const StringResidual r = string_residual(F);
    EXPECT_FALSE(r.vanishes);
}

TEST(OperatorJson, Shapes) {
    const nlohmann::json j = operator_json(quantize_monomial(identity_matrix(1), identity_matrix(1), 1, 2));
    EXPECT_EQ(j["K"], 2);
    int dd = 0;
    for (auto& term : j["terms"]) dd += term["shape"] == "dd";
    EXPECT_EQ(dd, 1);
}
