#ifndef CRMAP_NORMALFORM_HPP
#define CRMAP_NORMALFORM_HPP

#include <array>
#include <string>

#include <crmap/autgroups.hpp>
#include <crmap/models.hpp>

namespace crmap
{

struct NormalFormInvariants {
    Scalar alpha, beta;
    Scalar lambda;
    std::array<Scalar, 2> mu{}, nu{};
    Scalar sigma;
    bool transversal = true;
    bool exact = true;
};

struct Normalization {
    NormalFormInvariants inv;
    // Normalized components (f1, f2, phi, g).
    SeriesTuple normalized;
    // gamma ∘ H ∘ psi_inv = normalized.
    MapDef gamma;
    SeriesTuple psi_inv;
    // f's quadratic matrix and phi's quadratic matrix, both as (a11, a12, a22).
    std::array<Scalar, 3> f_matrix, phi_matrix;
    bool relations_hold = false;
};

struct NormalizeOptions {
    double tol = 1e-10;
    // Recompute in binary64 when an exact stage leaves the scalar field.
    bool float_fallback = true;
    // Check the residual before normalizing.
    bool check_residual = true;
};

// H as (f1, f2, phi, g) about the origin of H5, H(0) = 0.
Normalization normalize(const SeriesTuple &H, int order, const NormalizeOptions &opt = {});

int geometric_rank(const NormalFormInvariants &inv, double tol = 1e-7);

enum class Label { Linear, Rational, Irrational, Degenerate };
std::string label_name(Label);

struct ClassLabel {
    Label label;
    NormalFormInvariants inv;
    int rank = 0;
    std::string note;
};

struct ClassifyOptions {
    double tol = 1e-10;
    // In binary64, a g_w(0) within borderline of zero is retested at nearby base points.
    bool borderline_retry = false;
    double borderline = 1e-6;
    int retry_points = 4;
    std::uint64_t seed = 0;
};

ClassLabel classify(const SeriesTuple &H, int order, const ClassifyOptions &opt = {});
ClassLabel classify(const MapDef &H, int order, Field field = Field::exact, const ClassifyOptions &opt = {});

// True iff f and g vanish to the working order.
bool detect_degenerate(const SeriesTuple &H, int order, double tol = 0);

// gamma ∘ H ∘ psi^{-1} for H into X.
SeriesTuple conjugate_map(const SeriesTuple &H, const MapDef &gamma, const MapDef &psi, int order,
                          Field field = Field::exact);

} // namespace crmap

#endif
