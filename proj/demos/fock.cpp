// Quantized operators on the point: the string operator, a commutator cocycle, and the string equation.

#include <iostream>

#include "orbiqrr/orbiqrr.hpp"

using namespace orbiqrr;

int main() {
    const Matrix one = identity_matrix(1);
    std::cout << "(1/z)^ = " << quantize_monomial(one, one, -1, 3).to_string() << "\n";
    std::cout << "z^     = " << quantize_monomial(one, one, 1, 3).to_string() << "\n";
    std::cout << "[z^, (1/z)^] = " << commutator_cocycle(one, {one, 1}, {one, -1}, 6) << "\n";

    const FockPolynomial F = point_genus0_potential(6, 3);
    std::cout << "F_0 = " << F.to_string() << "\n";
    const StringResidual r = string_residual(F);
    std::cout << "string residual through degree " << r.exact_through << ": " << (r.vanishes ? "0" : r.residual.to_string()) << "\n";
}
