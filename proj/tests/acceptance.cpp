// Acceptance criteria 1-9: one PASS/FAIL line each, with runtime against its limit.
// Usage: acceptance [--criterion N]

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mirror_oracle.hpp"
#include "orbiqrr/orbiqrr.hpp"
#include "support.hpp"

using namespace orbiqrr;
using orbiqrr::testing::random_bundle;
using orbiqrr::testing::random_rational;
using orbiqrr::testing::random_s_values;

namespace {

class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok) failed_.push_back(what);
    }
    template <class F>
    void expect_throw(F&& f, const std::string& error, const std::string& what) {
        bool ok = false;
        try {
            f();
        } catch (const Error& e) {
            ok = e.name() == error;
        }
        expect(ok, what);
    }
    int count() const { return count_; }
    const std::vector<std::string>& failed() const { return failed_; }

private:
    int count_ = 0;
    std::vector<std::string> failed_;
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<void(Checks&)> body;
};

const Multidegree none{};

// ---------------------------------------------------------------------------

void bernoulli_suite(Checks& c) {
    c.expect(bernoulli_number(0) == 1, "B_0 = 1");
    c.expect(BernoulliPoly(1).coeffs() == std::vector<Rational>{Rational(-1, 2), 1}, "B_1(x) = x - 1/2");
    c.expect(BernoulliPoly(2).coeffs() == std::vector<Rational>{Rational(1, 6), -1, 1}, "B_2(x) = x^2 - x + 1/6");
    c.expect(bernoulli_value(2, Rational(1, 2)) == Rational(-1, 12), "B_2(1/2) = -1/12");
    std::mt19937 rng(2024);
    for (int k = 0; k < 50; ++k) {
        const Rational x = random_rational(rng, 9);
        for (unsigned m = 0; m <= 20; ++m) {
            const Rational lhs = bernoulli_value(m, 1 - x), rhs = (m % 2 ? -1 : 1) * bernoulli_value(m, x);
            c.expect(lhs == rhs, "reflection m=" + std::to_string(m) + " x=" + x.get_str());
        }
    }
}

void adjointness_suite(Checks& c) {
    std::mt19937 rng(31);
    std::vector<TargetModel> targets;
    for (int r = 1; r <= 6; ++r) targets.push_back(build_bmu(r));
    targets.push_back(build_wps({1, 1, 2}));
    for (const TargetModel& t : targets)
        for (int trial = 0; trial < 2; ++trial) {
            const BundleModel F = random_bundle(t, rng, 2);
            const SValues s = random_s_values(rng, 3, false);
            const std::vector<std::pair<std::string, Matrix>> pairings{{"orbifold", gram_matrix(t)}, {"twisted", twisted_gram_matrix(t, F, s)}};
            for (auto& [pname, G] : pairings)
                for (int m = 0; m <= 4; ++m) {
                    CohClass a = class_Am(t, F, m);
                    if (m == 1) {
                        CohClass inv = CohClass::zero(t);
                        for (int i = 0; i < static_cast<int>(t.components.size()); ++i) inv.part(i) = eigen_ch(t, F, i, 0);
                        a = a + inv * Scalar(Rational(1, 2));
                    }
                    const Matrix A = multiplication_matrix(t, a);
                    const Matrix expected = m % 2 ? scaled(A, Scalar(-1)) : A;
                    c.expect(is_zero(adjoint_matrix(G, A) - expected), t.name + " " + pname + " pairing A_" + std::to_string(m));
                }
        }
}

void symplectomorphism_suite(Checks& c) {
    std::mt19937 rng(47);
    const TargetModel b3 = build_bmu(3), w = build_wps({1, 1, 2});
    for (bool with_log : {false, true}) {
        for (const BundleModel& F : {character_bundle(b3, 1), random_bundle(b3, rng, 2)}) {
            const SValues s = random_s_values(rng, 3, with_log);
            const SymplecticReport rep = check_symplectomorphism(b3, delta_operator(b3, F, s, 4), 4);
            c.expect(rep.holds && rep.max_vanishing_degree == 4, "Bmu3 " + F.name + (with_log ? " with ell" : ""));
        }
        for (int k = 0; k < 2; ++k) {
            const BundleModel F = random_bundle(w, rng, 2);
            const SValues s = random_s_values(rng, 3, with_log);
            const LoopOperator D = delta_operator(w, F, s, 6);
            c.expect(check_symplectomorphism(w, D, 4).holds, "WPS(1,1,2) random bundle" + std::string(with_log ? " with ell" : ""));
        }
    }
}

/// Coefficient of z^n in log of the gamma factor of a Chern root rho = a h,
/// on a sector where the generator acts by exp(2 pi i x); entries are [1, h].
std::vector<Scalar> gamma_log(int n, const Rational& x, const Rational& a) {
    const Scalar lam = Scalar::lambda();
    if (n == -1) return {Scalar(), Scalar(a) * Scalar::ell()};
    if (n == 0) {
        if (x == 0) return {Scalar(), Scalar()};
        const Scalar w(x - Rational(1, 2));
        return {w * Scalar::ell(), w * Scalar(a) / lam};
    }
    const int m = n + 1;
    const Scalar k(Rational(m % 2 ? -1 : 1) * bernoulli_value(static_cast<unsigned>(m), x) / Rational(m * (m - 1)));
    return {k / lam.pow(m - 1), -k * Scalar(m - 1) * Scalar(a) / lam.pow(m)};
}

void euler_gamma_suite(Checks& c) {
    const Scalar lam = Scalar::lambda();
    {
        const TargetModel t = build_point();
        const MultiplierSeries L = log_delta_multipliers(t, trivial_bundle(t, 1), euler_s_values(6), 3);
        c.expect(L.at(none, 1).get(0, 0) == Scalar(1) / (Scalar(12) * lam), "point z^1 = 1/(12 lambda)");
        for (int n = 0; n <= 3; ++n) c.expect(L.at(none, n).get(0, 0) == gamma_log(n, 0, 0)[0], "point z^" + std::to_string(n));
        const MultiplierSeries D = delta_multipliers(t, trivial_bundle(t, 1), euler_s_values(8), 3);
        const std::vector<Rational> stirling{1, Rational(1, 12), Rational(1, 288), Rational(-139, 51840)};
        for (int n = 0; n <= 3; ++n) c.expect(D.at(none, n).get(0, 0) == Scalar(stirling[n]) / lam.pow(n), "Stirling z^" + std::to_string(n));
    }
    for (int r : {2, 3, 4}) {
        const TargetModel t = build_bmu(r);
        const MultiplierSeries L = log_delta_multipliers(t, character_bundle(t, 1), euler_s_values(6), 3);
        for (int i = 1; i < r; ++i) {
            const Rational x(i, r);
            for (int n = 0; n <= 3; ++n)
                c.expect(L.at(none, n).get(i, 0) == gamma_log(n, x, 0)[0], "Bmu" + std::to_string(r) + " sector " + std::to_string(i) + " z^" + std::to_string(n));
            c.expect(L.at(none, 0).get(i, 0) == Scalar(x - Rational(1, 2)) * Scalar::ell(), "ell (l/r - 1/2) term on Bmu" + std::to_string(r));
        }
    }
    {
        const TargetModel t = build_pn(1);
        const MultiplierSeries L = log_delta_multipliers(t, pn_line_bundle(t, 1), euler_s_values(6), 3);
        for (int n = -1; n <= 3; ++n) {
            const auto g = gamma_log(n, 0, 1);
            c.expect(L.at(none, n).get(0, 0) == g[0] && L.at(none, n).get(0, 1) == g[1], "P1 O(1) z^" + std::to_string(n));
        }
    }
}

void lefschetz_suite(Checks& c) {
    const int D = 3;
    const oracle::Periods P = oracle::periods({5}, 4, D);
    const auto N = oracle::yukawa_invariants({5}, 4, D);
    const JFunction J = j_closed_form_Pn(4, Scalar(), Scalar(), D);
    const BundleModel F = pn_line_bundle(J.target, 5);
    const MirrorResult m = mirror_map(nonequivariant_limit(hypergeometric_modification(J, F)));
    const std::size_t p = J.target.index(0, 1);

    c.expect(m.expansion.F.at(0, 0) == Scalar(1) && m.expansion.F.at(1, 0) == Scalar(120), "F = 1 + 120 Q + ...");
    c.expect(m.expansion.G.at(p).at(1, 0) == Scalar(770), "G^p = 770 Q + ...");
    for (int d = 0; d <= D; ++d) {
        c.expect(m.expansion.F.at(d, 0) == Scalar(P.w0[static_cast<std::size_t>(d)]), "F matches oracle at Q^" + std::to_string(d));
        c.expect(m.tau.at(p).at(d, 0) == Scalar(P.ratio[static_cast<std::size_t>(d)]), "tau^p matches oracle at Q^" + std::to_string(d));
    }
    const Scalar tau1 = m.tau.at(p).at(1, 0);
    c.expect(tau1 == Scalar(Rational(77, 12)), "mirror-map p-coefficient 77/12 (pipeline and oracle give " + scalar_json(tau1).get<std::string>() + ")");

    const InvariantTable tab = extract_invariants(m, F);
    c.expect(tab.N.at(1) == Rational(2875) && tab.N.at(1) == N.at(1), "N_1 = 2875");
    c.expect(tab.N.at(2) == Rational(4876875, 8) && tab.N.at(2) == N.at(2), "N_2 = 4876875/8");
    c.expect(tab.n.at(2) == Rational(609250), "n_2 = 609250");
    c.expect(tab.N.at(3) == N.at(3), "N_3 matches oracle");
}

void quantization_suite(Checks& c) {
    std::mt19937 rng(71);
    const auto random_pair = [&](const Matrix& G, int m) {
        const Matrix R = orbiqrr::testing::random_matrix(G.size(), rng);
        return symplectic_projection(G, R, m);
    };
    const auto shapes = [](const FockOperator& op) {
        std::set<FockShape> s;
        for (auto& [k, v] : op.terms.terms()) s.insert(shape_of(k));
        return s;
    };
    for (const TargetModel& t : {build_point(), build_bmu(3), build_pn(2)}) {
        const Matrix G = gram_matrix(t);
        for (int m = -3; m <= 3; ++m) {
            const Matrix B = random_pair(G, m);
            const FockOperator a = quantize_monomial(G, B, m, 5), b = quantize_via_hamiltonian(G, B, m, 5);
            const std::set<FockShape> got = shapes(a);
            const std::set<FockShape> allowed = m < 0 ? std::set<FockShape>{FockShape::QQ, FockShape::QD}
                                                      : m == 0 ? std::set<FockShape>{FockShape::QD} : std::set<FockShape>{FockShape::QD, FockShape::DD};
            c.expect(std::includes(allowed.begin(), allowed.end(), got.begin(), got.end()), t.name + " shape m=" + std::to_string(m));
            c.expect(a.terms == b.terms, t.name + " formula = hamiltonian m=" + std::to_string(m));
        }
    }
    const Matrix one = identity_matrix(1);
    const Scalar zz = commutator_cocycle(one, {one, 1}, {one, -1}, 8);
    c.expect(zz == Scalar(Rational(-1, 2)), "[z^, (1/z)^] = -1/2 on the point");
    const int delta = 1;
    c.expect(cocycle_closed_form(one, {one, 1}, {one, -1}) == Scalar(Rational(-1, 4) * (1 + delta)), "-(1/4)(1 + delta) matches");
    c.expect(cocycle_closed_form(one, {one, 1}, {one, -1}) == zz, "commutator equals closed form");
    for (const TargetModel& t : {build_point(), build_bmu(2)}) {
        const Matrix G = gram_matrix(t);
        std::uniform_int_distribution<int> pick(-3, 3);
        for (int k = 0; k < 20; ++k) {
            const int m1 = pick(rng), m2 = pick(rng);
            const SymplecticMonomial A{random_pair(G, m1), m1}, A2{random_pair(G, m2), m2};
            c.expect(commutator_cocycle(G, A, A2, 8) == cocycle_closed_form(G, A, A2),
                     t.name + " cocycle pair " + std::to_string(k) + " m=" + std::to_string(m1) + "," + std::to_string(m2));
        }
    }
    for (int n = 3; n <= 6; ++n) {
        const StringResidual r = string_residual(point_genus0_potential(n, std::max(1, n - 3)));
        c.expect(r.vanishes, "string residual n <= " + std::to_string(n));
    }
}

void universal_suite(Checks& c) {
    const CorrelatorTable table = point_table(8);
    for (auto kind : {UniversalKind::string, UniversalKind::dilaton, UniversalKind::trr}) {
        const UniversalReport rep = check_universal_equation(kind, table);
        c.expect(rep.ok() && rep.checked > 0, "point " + rep.kind + " n <= 8");
    }
    c.expect(check_universal_equation(UniversalKind::divisor, table).vacuous, "divisor vacuous on the point");
    for (int n = 1; n <= 3; ++n) {
        const GiventalElement r = divisor_shift_residual(n, Scalar(Rational(1, 3)), Scalar(Rational(-2, 5)), Scalar(Rational(3, 7)), 3);
        c.expect(r.is_zero(), "P" + std::to_string(n) + " divisor shift");
    }
}

void serre_suite(Checks& c) {
    std::mt19937 rng(83);
    for (int r = 1; r <= 4; ++r) {
        const TargetModel t = build_bmu(r);
        for (int k = 0; k < 3; ++k) {
            const BundleModel F = random_bundle(t, rng, 2);
            const SValues s = random_s_values(rng, 3, false);
            const BundleModel FF = dual_bundle(t, dual_bundle(t, F));
            c.expect(target_json(t, {FF}) == target_json(t, {F}), "F^vv = F on " + t.name);
            const SValues ss = dual_s_values(dual_s_values(s));
            c.expect(ss.values == s.values, "s^vv = s");
            const CohClass prod = invariant_char_class(t, dual_bundle(t, F), dual_s_values(s)) * invariant_char_class(t, F, s);
            c.expect(prod == CohClass::ones(t), "c^v(F^v) c(F) = 1 on " + t.name);
            for (int m = 0; m <= 4; ++m) c.expect(dual_am_residual(t, F, m).is_zero(), "A_m^v identity m=" + std::to_string(m) + " on " + t.name);
        }
        if (r > 1) {
            const BundleModel chi = character_bundle(t, 1);
            const CohClass anomaly = dual_am_residual(t, chi, 1, false);
            c.expect(!anomaly.is_zero(), "m=1 anomaly present without the ch(F^(0))/2 term on " + t.name);
        }
    }
    const TargetModel p1 = build_pn(1), b2 = build_bmu(2);
    for (bool with_log : {false, true}) {
        const SValues s = random_s_values(rng, 2, with_log);
        c.expect(check_serre_cone(p1, pn_line_bundle(p1, 1), s, 3).holds, "cone P1/O(1) through z^3");
        c.expect(check_serre_cone(b2, character_bundle(b2, 1), s, 3).holds, "cone Bmu2 through z^3");
    }
    const TargetModel b3 = build_bmu(3);
    c.expect(serre_M_operator(b3, character_bundle(b3, 1)).get(1, 0) == Scalar::root_of_unity(12, 1), "M(Bmu3, chi1, sector 1) = zeta12");
}

void negative_controls(Checks& c) {
    const JFunction J = j_closed_form_Pn(1, Scalar(), Scalar(), 2);
    c.expect_throw([&] { small_expansion(hypergeometric_modification(J, pn_line_bundle(J.target, 3))); }, "PositivityViolated", "P1/O(3) raises PositivityViolated");
    c.expect_throw([&] { small_expansion(nonequivariant_limit(hypergeometric_modification(J, pn_line_bundle(J.target, 3)))); }, "PositivityViolated",
                   "P1/O(3) at lambda = 0 raises PositivityViolated");
    CorrelatorTable table = point_table(6);
    const std::vector<Insertion> bad{{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 2}};
    table.set({}, bad, Scalar(5));
    const UniversalReport rep = check_universal_equation(UniversalKind::string, table);
    c.expect(!rep.ok(), "corrupted table fails the string check");
    if (!rep.ok()) {
        const UniversalFailure& f = rep.failures.front();
        c.expect(f.n == 5 && f.residual == Scalar(4), "first failure at n = 5 with residual 4");
        c.expect(f.instance == correlator_string(table.target(), {}, bad), "failure names the corrupted correlator");
    }
    c.expect(check_universal_equation(UniversalKind::string, point_table(6)).ok(), "uncorrupted table passes");
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "--criterion" && k + 1 < argc)
            only = std::atoi(argv[++k]);
        else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    const std::vector<Criterion> criteria{
        {1, "Bernoulli suite", 1, bernoulli_suite},
        {2, "adjointness of A_m", 5, adjointness_suite},
        {3, "Delta is a symplectomorphism", 10, symplectomorphism_suite},
        {4, "Euler gamma-factor consistency", 5, euler_gamma_suite},
        {5, "quantum Lefschetz for the quintic", 30, lefschetz_suite},
        {6, "quantization and cocycle", 10, quantization_suite},
        {7, "universal equations", 10, universal_suite},
        {8, "Serre duality", 15, serre_suite},
        {9, "negative controls", 10, negative_controls},
    };
    int failures = 0;
    for (const Criterion& cr : criteria) {
        if (only && cr.id != only) continue;
        Checks checks;
        std::string crash;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(checks);
        } catch (const Error& e) {
            crash = e.name() + ": " + e.what();
        } catch (const std::exception& e) {
            crash = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < cr.limit_seconds;
        const bool pass = crash.empty() && checks.failed().empty() && in_time;
        failures += pass ? 0 : 1;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << " criterion " << cr.id << " (" << cr.name << "): " << checks.count() - static_cast<int>(checks.failed().size())
             << "/" << checks.count() << " checks, " << std::fixed << std::setprecision(3) << secs << "s (limit " << std::defaultfloat << cr.limit_seconds << "s)";
        std::cout << line.str() << "\n";
        if (!crash.empty()) std::cout << "  aborted: " << crash << "\n";
        if (!in_time) std::cout << "  over the time limit\n";
        for (auto& f : checks.failed()) std::cout << "  failed: " << f << "\n";
    }
    return failures == 0 ? 0 : 1;
}
