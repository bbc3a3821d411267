#ifndef CRMAP_MODELS_HPP
#define CRMAP_MODELS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <crmap/ambient.hpp>
#include <crmap/expr.hpp>
#include <crmap/series.hpp>

namespace crmap
{

// Which form of the 𝒳 numerator: Re(conj(zeta) z z^t) or Re(zeta z z^t).
enum class XConvention { zeta_bar, zeta };

using Point = std::vector<std::complex<double>>;

struct HypersurfaceModel {
    ModelId id;
    std::string name;
    std::vector<std::string> coords;
    std::vector<int> weights;
    // Coordinates followed by their conjugates (suffix "b").
    VarSpecPtr spec;
    // spec plus the level variable "u".
    VarSpecPtr spec_u;
    // Defining function in coords and conjugates; null for bare ambient spaces.
    ExprPtr rho;
    // Index of the coordinate solved from rho = u, and the solving expression.
    std::optional<std::size_t> solved;
    ExprPtr level_set;
    std::vector<Scalar> base_point;
    XConvention convention = XConvention::zeta_bar;

    bool is_hypersurface() const
    {
        return static_cast<bool>(rho);
    }
    std::vector<std::string> conj_coords() const;
};

const HypersurfaceModel &model(ModelId);
const HypersurfaceModel &x_model(XConvention);

std::vector<Scalar> resolved_base(const MapDef &);
Point to_point(const std::vector<Scalar> &);

// Components of H about its base point, as series in the local holomorphic
// coordinates of the source spec (values are absolute, constants = image point).
SeriesTuple expand_map(const MapDef &H, int order, Field field = Field::exact);

struct Residual {
    Series series;
    int order;
    std::optional<int> min_violating_order;
    std::optional<std::pair<Monomial, Scalar>> first_term;

    bool zero() const
    {
        return series.is_zero();
    }
    bool zero_within(double tol) const
    {
        return series.is_zero_within(tol);
    }
};

Residual make_residual(Series s);

Residual mapping_residual(const MapDef &H, int order, Field field = Field::exact,
                          const HypersurfaceModel *target = nullptr);
// H given as series in the local coordinates of the source base point.
Residual mapping_residual(const SeriesTuple &H, const HypersurfaceModel &source, const HypersurfaceModel &target,
                          int order);

// Segre (level-set) substitution for the solved coordinate, local at the base
// point, in source.spec_u (or source.spec when with_u is false).
Series level_set_series(const HypersurfaceModel &source, int order, Field field, bool with_u);
// Target defining function composed with (H, conj H) where the conjugate
// components are given separately.
Series compose_rho(const HypersurfaceModel &target, const SeriesTuple &hol, const SeriesTuple &conj, int order,
                   Field field);

struct Transversality {
    bool transversal;
    Scalar gw;
};

Transversality transversality_at_origin(const MapDef &H, Field field = Field::exact, double tol = 1e-10);
Transversality transversality_at_origin(const SeriesTuple &H, double tol = 1e-10);

std::vector<Point> sample_points(const HypersurfaceModel &m, std::size_t count, std::uint64_t seed,
                                 double radius = 0.3, const Point *base = nullptr);
std::vector<Point> sample_points(ModelId m, std::size_t count, std::uint64_t seed, double radius = 0.3,
                                 const Point *base = nullptr);

std::complex<double> eval_rho(const HypersurfaceModel &m, const Point &p);
Point eval_map(const MapDef &H, const Point &p);

struct BoundaryReport {
    double max_residual = 0;
    std::size_t points_used = 0;
    std::size_t excluded = 0;
    std::uint64_t seed = 0;
    double tol = 0;
    bool pass = false;
};

BoundaryReport numeric_boundary_check(const MapDef &H, ModelId source, ModelId target, std::size_t count,
                                      std::uint64_t seed, double tol = 1e-10, double radius = 0.3,
                                      const HypersurfaceModel *target_model = nullptr);

// Model self-checks.
bool rho_is_real(const HypersurfaceModel &m, int order);
bool level_set_annihilates_rho(const HypersurfaceModel &m, int order);

} // namespace crmap

#endif
