#ifndef CRMAP_AUTGROUPS_HPP
#define CRMAP_AUTGROUPS_HPP

#include <array>
#include <string>
#include <vector>

#include <crmap/expr.hpp>
#include <crmap/models.hpp>

namespace crmap
{

// Parameters of Aut_0(H5): psi = s (z + c w) U / delta, s^2 w / delta, with
// U = (u a, -u b; conj b, conj a).
struct SourceAutParams {
    Scalar s = 1;
    Scalar u = 1;
    Scalar a = 1;
    Scalar b = 0;
    std::array<Scalar, 2> c{};
    Scalar r = 0;
};

// Parameters of Aut_0(X). P = (pc, -ps; ps, pc), composed with diag(1,-1) when reflect is set.
struct TargetAutParams {
    Scalar s = 1;
    Scalar u = 1;
    std::array<Scalar, 2> a{};
    Scalar r = 0;
    Scalar pc = 1;
    Scalar ps = 0;
    bool reflect = false;
};

// The target group as displayed has "-2 z a^t" in the third component; the
// corrected form reads "-2i z a^t". The conj_delta variants replace conj(aa^t) by aa^t in delta.
enum class TargetVariant { corrected, printed, corrected_conj_delta, printed_conj_delta };

std::string variant_name(TargetVariant);
const std::vector<TargetVariant> &all_target_variants();

void validate(const SourceAutParams &, double tol = 1e-12);
void validate(const TargetAutParams &, double tol = 1e-12);

MapDef source_aut(const SourceAutParams &);
MapDef target_aut(const TargetAutParams &, TargetVariant v = TargetVariant::corrected);
// gamma(z, zeta, w) = (t z B, zeta, t^2 w) for a real t and orthogonal B given by (pc, ps).
MapDef target_scaling(const Scalar &t, const Scalar &pc, const Scalar &ps);

// Reads an aut block ("aut name : H5 { s=...; ... }"). Keys: s, u, a, b, c1, c2, r for H5;
// s, u, a1, a2, r, pc, ps, reflect for X.
MapDef aut_from_def(const AutDef &);

struct VariantCheck {
    TargetVariant variant;
    bool zero;
    std::optional<int> min_violating_order;
};
// Residual of each target variant at a generic parameter choice.
std::vector<VariantCheck> check_target_variants(int order);

// Linear part (Jacobian at the base) inversion followed by fixed-point iteration.
SeriesTuple invert_aut(const MapDef &aut, int order, Field field = Field::exact);
SeriesTuple invert_series(const SeriesTuple &H, int order);

// Automorphism of the model sending point to the origin. Exact for H5 (Heisenberg
// translation); numeric for X via F∘A∘G with an affine automorphism A of the tube.
MapDef translate_to_origin(ModelId m, const std::vector<Scalar> &point, double tol = 1e-10);
// Inverse Heisenberg translation: origin to point.
MapDef heisenberg_from_origin(const std::vector<Scalar> &point);

// Random parameters near the identity, rational entries.
SourceAutParams random_source_params(std::uint64_t seed);
TargetAutParams random_target_params(std::uint64_t seed);

} // namespace crmap

#endif
