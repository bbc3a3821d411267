#ifndef CRMAP_SEGRE_HPP
#define CRMAP_SEGRE_HPP

#include <array>
#include <string>
#include <vector>

#include <crmap/autgroups.hpp>
#include <crmap/normalform.hpp>

namespace crmap
{

struct FormulaCheck {
    bool pass = false;
    // First differing monomial and the two coefficients, empty on pass.
    std::string detail;
};

// Series comparison: exact for exact inputs, else within tol.
FormulaCheck compare_series(const Series &computed, const Series &expected, double tol = 1e-10);

// H normalized, as (f1, f2, phi, g) about the origin of H5.
struct SegreRestriction {
    Series f1, f2, g;
    Series f1_expected, f2_expected;
    FormulaCheck f_check, g_check;
};
SegreRestriction first_segre_restrict(const SeriesTuple &H, int order, double tol = 1e-10);

struct GwOnSegre {
    Series gw;
    // 1 + i conj(lambda) f f^t with f from the first Segre set.
    FormulaCheck closed_form;
    // The displayed 1 + 4i conj(lambda) z z^t / (1 + sqrt(1 - 4i conj(lambda) z z^t)).
    FormulaCheck printed_form;
};
GwOnSegre gw_on_segre(const SeriesTuple &H, int order, double tol = 1e-10);

// H_w(z, 0) against (i/2 zA, 0, 1) for lambda = 0.
FormulaCheck hw_on_segre(const SeriesTuple &H, int order, double tol = 1e-10);

// The mapping equation along the complexified H5 in coordinates (z, zb, wb),
// w = wb + 2i z zb^t. The holomorphic side is left symbolic: the variable named
// f1, f1_w, f1_ww, ... stands for d^k f1/dw^k at (z, 0).
struct MappingEquation {
    VarSpecPtr spec;
    Series eq;
    int depth = 0;
};

// Conjugate side from the jet of H of degree <= jet_degree, which bounds the
// length of the operator words that can be applied.
MappingEquation symbolic_mapping_equation(const SeriesTuple &H, int depth, int jet_degree = 3);
// Normalized jet f = z + (i/2) w zA + nu w^2, phi = lambda w + zAz^t + w mu z^t + sigma w^2, g = w.
SeriesTuple normalized_jet(const NormalFormInvariants &inv, int order = 6);

enum class LOp { L1, L2, T };
std::string lop_name(LOp);

// Applies the word left to right, then sets zb = wb = 0.
Series apply_L_operators(const Series &expr, const std::vector<LOp> &word);
// Replaces the symbolic holomorphic values by those of H along the Segre set.
Series evaluate_on_segre(const Series &expr, const SeriesTuple &H, int order);

struct HIdentitySet {
    std::array<Series, 5> h;
    bool zero(double tol = 0) const;
    // Index of the first nonvanishing identity, -1 if none.
    int first_nonzero(double tol = 0) const;
};

// The five holomorphic identities with the corrected sign of the g term in h1
// (or the displayed sign when printed_h1 is set).
HIdentitySet h_identities(const SeriesTuple &H, const Scalar &alpha, const Scalar &beta, int order,
                          bool printed_h1 = false);
HIdentitySet h_identities(const SeriesTuple &H, int order, bool printed_h1 = false);

// Polynomials in z1, z2, w and the symbols a, b (alpha, beta), g, Psi.
VarSpecPtr system_spec();

struct RationalEntry {
    Series num, den;
};

struct LinearSystemResult {
    // Coefficient matrix of (h1), (h2), (h5) in the unknowns (f1, f2, phi, g, Psi).
    std::vector<std::vector<Series>> matrix;
    int rank = 0;
    std::vector<int> pivots;
    std::vector<std::vector<RationalEntry>> rref;
    FormulaCheck matches_display;
    // f, phi in terms of g, Psi agree with f = (g/w) z + (w Psi / 2zz^t) zA, phi = -i zAz^t Psi / zz^t.
    FormulaCheck matches_solution;
    // The solution annihilates all five identities.
    FormulaCheck solves_all;
};

// Symbolic alpha, beta when both are omitted.
LinearSystemResult solve_linear_system();
LinearSystemResult solve_linear_system(const Scalar &alpha, const Scalar &beta);

// Polynomial identities of the Case-1 elimination.
struct CaseOneIdentities {
    // Substituting the solved (f, phi) into the H_w identity reproduces the (g, Psi) equation.
    FormulaCheck s1_into_s2;
    // (g, Psi) of the reconstructed family satisfy both equations.
    FormulaCheck first_equation, second_equation;
    // The displayed first equation with the zz^t factor missing from the g term.
    FormulaCheck first_equation_printed;
};
CaseOneIdentities case1_identities();
CaseOneIdentities case1_identities(const Scalar &alpha, const Scalar &beta);

MapDef reconstruct_case1(const Scalar &alpha, const Scalar &beta);

struct RescaleWitness {
    MapDef gamma, psi;
    Scalar scale;      // sqrt(rho/2) on z, rho/2 on w.
    Scalar cos_half, sin_half;
    Field field = Field::exact;
    bool verified = false;
    double discrepancy = 0;
    // The displayed scalings sqrt(rho), rho.
    bool literal_verified = false;
    double literal_discrepancy = 0;
};
RescaleWitness rescale_witness(const Scalar &alpha, const Scalar &beta, int order = 8);

struct CaseTwoObstruction {
    // M(z) sqrt(1 - 4i conj(lambda) zz^t) + N(z) = 0.
    Series M, N;
    Scalar z1_4, z1_3z2;
    // Ratio of the computed leading coefficients to 4 conj(lambda) beta and -8 conj(lambda) alpha.
    Scalar ratio;
    bool ratio_defined = false;
    bool vanishes = false;
    // The L1 L1 and L2 L1 derivations with g(z, 0) = 0.
    std::vector<Series> equations;
};
CaseTwoObstruction case2_obstruction(const SeriesTuple &H);
CaseTwoObstruction case2_obstruction(const NormalFormInvariants &inv);

} // namespace crmap

#endif
