#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <crmap/catalog.hpp>
#include <crmap/error.hpp>

using namespace crmap;

namespace
{

std::string components(const MapDef &m)
{
    std::string s;
    for (const auto &c : m.components) {
        s += print_expr(c) + ";";
    }
    return s;
}

} // namespace

TEST(Catalog, Lookup)
{
    EXPECT_EQ(components(catalog_get("ell").map), "z1;z2;0;w;");
    EXPECT_EQ(print_expr(catalog_get("r").map.components[3]), "w/(1-w^2)");
    auto P = catalog_get("P").map;
    EXPECT_EQ(components(P), "z1;z2*w;(w^2-z2^2)/2;i*(w^2+z2^2)/2;");
    EXPECT_THROW(catalog_get("nope"), error);
    EXPECT_THROW(catalog_get("HA(1)"), error);
    EXPECT_THROW(catalog_get("PB(1,1)"), error);
    auto names = catalog_names();
    EXPECT_NE(std::find(names.begin(), names.end(), "T2"), names.end());
}

TEST(Catalog, BaseAndImagePoints)
{
    auto G = catalog_get("G");
    EXPECT_EQ(G.image, (std::vector<Scalar>{Scalar(), Scalar(), Scalar::rational(-1, 2), Scalar::rational(1, 2)}));
    auto Phi = catalog_get("Phi");
    EXPECT_EQ(Phi.image, (std::vector<Scalar>{Scalar(), Scalar(), Scalar::rational(1, 2), Scalar(0, mpq_class(1, 2))}));
    auto C1 = catalog_get("C1");
    EXPECT_EQ(C1.image, std::vector<Scalar>(3));
}

TEST(Catalog, ParametrizedFamilies)
{
    auto a = catalog_get("HA(2,0)");
    auto r = catalog_get("r");
    EXPECT_TRUE(verify_identity(expand_map(a.map, 8), expand_map(r.map, 8)).equal);
    auto h = catalog_get("HA(-1/2,0)");
    EXPECT_TRUE(mapping_residual(h.map, 8).zero());
    auto pb = catalog_get("PB(3/5,4/5)");
    EXPECT_TRUE(mapping_residual(pb.map, 6).zero());
}

TEST(Catalog, EveryEntryHasZeroResidual)
{
    for (const auto &n : catalog_names()) {
        if (n.find('(') != std::string::npos) {
            continue;
        }
        auto e = catalog_get(n);
        const auto &S = model(e.map.source);
        if (!S.level_set) {
            continue;
        }
        auto res = mapping_residual(e.map, 8);
        EXPECT_TRUE(res.zero()) << n << ": " << res.series;
    }
}

TEST(Catalog, CompositionIdentities)
{
    auto G = catalog_get("G").map;
    auto check = [](const SeriesTuple &a, const SeriesTuple &b) {
        auto r = verify_identity(a, b);
        EXPECT_TRUE(r.equal) << r.detail;
    };
    check(compose_maps(G, catalog_get("ell").map, 8), expand_map(catalog_get("T1").map, 8));
    check(compose_maps(G, catalog_get("r").map, 8), expand_map(catalog_get("T2").map, 8));
    check(compose_maps(catalog_get("F").map, G, 8), identity_tuple(ModelId::X, {}, 8));
    auto Phi = catalog_get("Phi").map;
    check(compose_with(Phi, compose_maps(catalog_get("ell").map, catalog_get("C1").map, 6), 6),
          expand_map(catalog_get("R0").map, 6));
    check(compose_with(Phi, compose_maps(catalog_get("HA(-1/2,0)").map, catalog_get("C2").map, 6), 6),
          expand_map(catalog_get("P").map, 6));
}

TEST(Catalog, PrintedT2IsNotGofR)
{
    auto lhs = compose_maps(catalog_get("G").map, catalog_get("r").map, 8);
    auto r = verify_identity(lhs, expand_map(t2_printed(), 8));
    EXPECT_FALSE(r.equal);
    EXPECT_EQ(r.component, 3u);
    ASSERT_TRUE(r.monomial.has_value());
    EXPECT_EQ(lhs[3].monomial_string(*r.monomial), "w");
    EXPECT_FALSE(mapping_residual(t2_printed(), 6).zero());
}

TEST(Catalog, CompositionRejectsMismatchedBase)
{
    auto shift = parse_maps("map s : H5 -> H5 { f1=z1+1/2; f2=z2; g=w+i/4+i*z1; }").at(0);
    EXPECT_THROW(compose_maps(catalog_get("iota").map, shift, 4), error);
    EXPECT_THROW(compose_maps(catalog_get("G").map, catalog_get("C1").map, 4), error);
    EXPECT_NO_THROW(compose_maps(catalog_get("r").map, shift, 4));
}

TEST(Catalog, PolynomialIdentities)
{
    auto [a, b] = hyperquadric_pullback();
    EXPECT_TRUE(verify_identity(a, b).equal);
    EXPECT_TRUE(a.is_polynomial());
    auto [c, d] = ell_pullback();
    EXPECT_TRUE(verify_identity(c, d).equal);
    auto [e, f] = hyperquadric_pullback(XConvention::zeta);
    EXPECT_FALSE(verify_identity(e, f).equal);
}

TEST(Catalog, RestrictionsOfP)
{
    for (const auto &r : p_restrictions()) {
        auto v = verify_identity(r.restricted, r.displayed);
        EXPECT_TRUE(v.equal) << r.name << " " << v.detail;
    }
}

TEST(Catalog, ConventionReport)
{
    for (const auto &row : convention_report(6)) {
        EXPECT_TRUE(row.zeta_bar) << row.name;
        if (row.name == "ell") {
            EXPECT_TRUE(row.zeta);
        }
        if (row.name == "r" || row.name == "iota" || row.name == "Psi") {
            EXPECT_FALSE(row.zeta) << row.name;
        }
    }
}

TEST(Catalog, NumericBoundaryOfBallMaps)
{
    for (const char *n : {"R0", "I", "P"}) {
        auto e = catalog_get(n);
        auto rep = numeric_boundary_check(e.map, ModelId::S5, ModelId::DIV4, 500, 1, 1e-10);
        EXPECT_TRUE(rep.pass) << n << " " << rep.max_residual;
    }
    std::mt19937_64 rng(4);
    for (int k = 0; k < 5; ++k) {
        double s = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
        auto e = pb_entry(Scalar(std::complex<double>(std::cos(s), 0)), Scalar(std::complex<double>(std::sin(s), 0)));
        auto rep = numeric_boundary_check(e.map, ModelId::S5, ModelId::DIV4, 500, 1, 1e-10);
        EXPECT_TRUE(rep.pass) << s << " " << rep.max_residual;
    }
    for (const char *n : {"T1", "T2"}) {
        auto rep = numeric_boundary_check(catalog_get(n).map, ModelId::H5, ModelId::T, 500, 2, 1e-10);
        EXPECT_TRUE(rep.pass) << n << " " << rep.max_residual;
    }
    auto rep = numeric_boundary_check(catalog_get("Phi").map, ModelId::X, ModelId::DIV4, 500, 2, 1e-10);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(Catalog, ShowIsParseable)
{
    for (const auto &n : {"ell", "r", "iota", "F", "G", "T1", "T2", "Phi", "C1", "C2", "R0", "I", "P", "Psi"}) {
        auto text = catalog_show(n);
        auto maps = parse_maps(text);
        ASSERT_EQ(maps.size(), 1u) << n;
        auto e = catalog_get(n);
        for (std::size_t k = 0; k < maps[0].components.size(); ++k) {
            EXPECT_TRUE(expr_equal(fold_constants(maps[0].components[k]), e.map.components[k])) << n << " " << k;
        }
    }
}
