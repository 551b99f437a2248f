// Genus-zero invariants of the quintic threefold from the hypergeometric modification of J(P^4).

#include <iostream>

#include "orbiqrr/orbiqrr.hpp"

using namespace orbiqrr;

int main(int argc, char** argv) {
    const int D = argc > 1 ? std::atoi(argv[1]) : 4;
    const JFunction J = j_closed_form_Pn(4, Scalar(), Scalar(), D);
    const BundleModel F = pn_line_bundle(J.target, 5);
    const MirrorResult m = mirror_map(nonequivariant_limit(hypergeometric_modification(J, F)));
    const std::size_t p = J.target.index(0, 1);

    std::cout << "F(Q)   =";
    for (int d = 0; d <= D; ++d) std::cout << " " << m.expansion.F.at(d, 0) << " Q^" << d << (d < D ? " +" : "\n");
    std::cout << "tau(Q) =";
    for (int d = 1; d <= D; ++d) std::cout << " " << m.tau.at(p).at(d, 0) << " Q^" << d << (d < D ? " +" : "\n");

    const InvariantTable tab = extract_invariants(m, F);
    for (auto& [d, N] : tab.N) std::cout << "d=" << d << "  N_d=" << N.get_str() << "  n_d=" << tab.n.at(d).get_str() << "\n";
}
