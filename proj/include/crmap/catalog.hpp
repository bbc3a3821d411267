#ifndef CRMAP_CATALOG_HPP
#define CRMAP_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include <crmap/expr.hpp>
#include <crmap/models.hpp>

namespace crmap
{

struct CatalogEntry {
    std::string name;
    MapDef map;
    // Source base point and its image.
    std::vector<Scalar> base;
    std::vector<Scalar> image;
    std::string reference;
};

// Names accepted by catalog_get; parametrized families are listed as HA(a,b) and PB(c,s).
std::vector<std::string> catalog_names();
// Also accepts "HA(a,b)" and "PB(c,s)" with constant expressions as arguments.
CatalogEntry catalog_get(const std::string &name);

// H_{A_{a,b}}: the rational maps with A = (a b; b -a).
CatalogEntry ha_entry(const Scalar &a, const Scalar &b);
// P_B for B = v^t v, v = (c, s).
CatalogEntry pb_entry(const Scalar &c, const Scalar &s);
// T2 with the fourth component as originally printed (differs from G∘r).
MapDef t2_printed();

// Map-file text for an entry, with the base point as a comment.
std::string catalog_show(const std::string &name);

// Components of outer∘inner about the inner base point. When outer contains a square
// root, the inner image must be the outer base point (branch choice).
SeriesTuple compose_maps(const MapDef &outer, const MapDef &inner, int order, Field field = Field::exact);
// outer applied to a tuple of absolute-valued series (inner given in local source coordinates).
SeriesTuple compose_with(const MapDef &outer, const SeriesTuple &inner, int order, Field field = Field::exact);
// The identity map of a model about a base point, as local series with absolute values.
SeriesTuple identity_tuple(ModelId m, const std::vector<Scalar> &base, int order, Field field = Field::exact);

struct IdentityCheck {
    bool equal = true;
    std::size_t component = 0;
    std::optional<Monomial> monomial;
    Scalar lhs, rhs;
    std::string detail;
};

IdentityCheck verify_identity(const SeriesTuple &lhs, const SeriesTuple &rhs);
IdentityCheck verify_identity(const Series &lhs, const Series &rhs);

// rho~∘Psi and rho' as exact polynomials in the complexified 𝒳 variables.
std::pair<Series, Series> hyperquadric_pullback(XConvention c = XConvention::zeta_bar);
// rho'∘ell and rho of the Heisenberg hypersurface, as exact polynomials.
std::pair<Series, Series> ell_pullback(XConvention c = XConvention::zeta_bar);

// P restricted to z1 = 0, z2 = 0 and w = 0, paired with the displayed formulas.
struct Restriction {
    std::string name;
    SeriesTuple restricted;
    SeriesTuple displayed;
};
std::vector<Restriction> p_restrictions();

struct ConventionRow {
    std::string name;
    bool zeta_bar = false;
    bool zeta = false;
};
// For each catalog map touching 𝒳, whether its residual (or identity) holds under each convention.
std::vector<ConventionRow> convention_report(int order);

} // namespace crmap

#endif
