// Delta for the Euler twist on B mu_3, its symplectic check, and the Serre-dual comparison.

#include <iostream>

#include "orbiqrr/orbiqrr.hpp"

using namespace orbiqrr;

int main() {
    const TargetModel t = build_bmu(3);
    const BundleModel F = character_bundle(t, 1);

    const LoopOperator D = delta_operator(t, F, euler_s_values(1), 3);
    std::cout << loop_operator_json(t, D).dump(2) << "\n";
    const SymplecticReport rep = check_symplectomorphism(t, D, 3);
    std::cout << "Delta*(-z) Delta(z) = 1 through z^3: " << (rep.holds ? "yes" : "no") << "\n";

    SValues s{{Scalar(), Scalar(Rational(1, 2)), Scalar(Rational(-1, 3))}, false};
    const SerreConeReport cone = check_serre_cone(t, F, s, 3);
    std::cout << "dual bundle: " << dual_bundle(t, F).name << ", cone identity through z^3: " << (cone.holds ? "yes" : "no") << "\n";
    const CohClass M = serre_M_operator(t, F);
    for (int i = 0; i < 3; ++i) std::cout << "M on sector " << t.component(i).id << ": " << M.get(i, 0) << "\n";
}
