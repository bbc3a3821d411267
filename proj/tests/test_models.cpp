#include <random>

#include <gtest/gtest.h>

#include <crmap/error.hpp>
#include <crmap/models.hpp>

#include "test_util.hpp"

using namespace crmap;
using namespace crmap_test;

namespace
{

MapDef one_map(const std::string &text)
{
    return parse_maps(text).at(0);
}

const char *ell_text = "map ell : H5 -> X { f1=z1; f2=z2; phi=0; g=w; }";
const char *r_text = "map r : H5 -> X { f1=z1*(1+i*w)/(1-w^2); f2=z2*(1-i*w)/(1-w^2);"
                     " phi=2*(z1^2-z2^2)/(1-w^2); g=w/(1-w^2); }";
const char *iota_text = "map iota : H5 -> X { f1=2*z1/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)));"
                        " f2=2*z2/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)));"
                        " phi=2*w/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)));"
                        " g=2*w/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2))); }";

} // namespace

TEST(Models, DefiningFunctionsAreRealAndKilledBySegre)
{
    for (auto id : {ModelId::H5, ModelId::X, ModelId::T, ModelId::S5, ModelId::DIV4, ModelId::HYP1}) {
        const auto &m = model(id);
        EXPECT_TRUE(rho_is_real(m, 8)) << m.name;
        if (m.level_set) {
            EXPECT_TRUE(level_set_annihilates_rho(m, 10)) << m.name;
        }
    }
    EXPECT_TRUE(rho_is_real(x_model(XConvention::zeta), 8));
    EXPECT_TRUE(level_set_annihilates_rho(x_model(XConvention::zeta), 10));
}

TEST(Models, SegreRuleForHeisenberg)
{
    const auto &m = model(ModelId::H5);
    auto s = level_set_series(m, 6, Field::exact, false);
    auto expect = Series::variable(m.spec, 6, "wb") + Scalar(0, 2) * Series::variable(m.spec, 6, "z1") *
                                                          Series::variable(m.spec, 6, "z1b");
    expect += Scalar(0, 2) * Series::variable(m.spec, 6, "z2") * Series::variable(m.spec, 6, "z2b");
    EXPECT_EQ(s, expect);
}

TEST(Models, ResidualsOfTheThreeMapsVanish)
{
    for (const char *t : {ell_text, r_text, iota_text}) {
        auto H = one_map(t);
        auto res = mapping_residual(H, 8);
        EXPECT_TRUE(res.zero()) << H.name << ": " << res.series;
        EXPECT_FALSE(res.min_violating_order.has_value());
    }
}

TEST(Models, DegenerateMapsHaveZeroResidual)
{
    std::mt19937_64 rng(11);
    const auto &S = model(ModelId::H5);
    auto hol = make_complexified(S.coords, S.weights);
    for (int trial = 0; trial < 5; ++trial) {
        auto phi = random_series(rng, make_varspec({"z1", "z2", "w"}, {1, 1, 2}), 8, 6);
        SeriesTuple H{Series(S.spec, 8), Series(S.spec, 8), series_reembed(phi, S.spec), Series(S.spec, 8)};
        EXPECT_TRUE(mapping_residual(H, S, model(ModelId::X), 8).zero());
    }
}

TEST(Models, NonzeroResidualReportsMinimalOrder)
{
    auto H = one_map("map bad : H5 -> X { f1=z1; f2=z2; phi=0; g=w+w^2; }");
    auto res = mapping_residual(H, 6);
    ASSERT_FALSE(res.zero());
    ASSERT_TRUE(res.min_violating_order.has_value());
    // (w^2 - conj)/(2i) along the Segre variety has weighted order 4.
    EXPECT_EQ(*res.min_violating_order, 4);
    ASSERT_TRUE(res.first_term.has_value());
}

TEST(Models, ResidualUnderOtherXConvention)
{
    EXPECT_TRUE(mapping_residual(one_map(ell_text), 8, Field::exact, &x_model(XConvention::zeta)).zero());
    EXPECT_FALSE(mapping_residual(one_map(r_text), 6, Field::exact, &x_model(XConvention::zeta)).zero());
}

TEST(Models, Transversality)
{
    auto t = transversality_at_origin(one_map(ell_text));
    EXPECT_TRUE(t.transversal);
    EXPECT_EQ(t.gw, Scalar(1));
    t = transversality_at_origin(one_map(iota_text));
    EXPECT_TRUE(t.transversal);
    EXPECT_EQ(t.gw, Scalar(1));
    t = transversality_at_origin(one_map("map d : H5 -> X { f1=0; f2=0; phi=z1+w^2; g=0; }"));
    EXPECT_FALSE(t.transversal);
    EXPECT_TRUE(t.gw.is_zero());
    EXPECT_THROW(transversality_at_origin(one_map("map c : H5 -> X { f1=1+z1; f2=z2; phi=0; g=w; }")), error);
}

TEST(Models, SamplersStayOnTheModel)
{
    for (auto id : {ModelId::H5, ModelId::X, ModelId::T, ModelId::S5, ModelId::DIV4, ModelId::HYP1}) {
        const auto &m = model(id);
        double worst = 0;
        for (const auto &p : sample_points(m, 200, 5)) {
            worst = std::max(worst, std::abs(eval_rho(m, p)));
        }
        EXPECT_LE(worst, 1e-14) << m.name;
    }
    double worst = 0;
    for (const auto &p : sample_points(x_model(XConvention::zeta), 200, 5)) {
        worst = std::max(worst, std::abs(eval_rho(x_model(XConvention::zeta), p)));
    }
    EXPECT_LE(worst, 1e-14);
}

TEST(Models, SamplingIsDeterministic)
{
    auto a = sample_points(ModelId::X, 10, 42);
    auto b = sample_points(ModelId::X, 10, 42);
    auto c = sample_points(ModelId::X, 10, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_THROW(sample_points(ModelId::H5, 0, 1), error);
    EXPECT_THROW(sample_points(ModelId::C3, 1, 1), model_error);
}

TEST(Models, HeisenbergExamplePoint)
{
    Point p{{0.5, 0}, {0, 0}, {0, 0.25}};
    EXPECT_EQ(eval_rho(model(ModelId::H5), p), std::complex<double>(0, 0));
}

TEST(Models, NumericBoundaryCheck)
{
    for (const char *t : {ell_text, r_text, iota_text}) {
        auto rep = numeric_boundary_check(one_map(t), ModelId::H5, ModelId::X, 500, 3, 1e-10);
        EXPECT_TRUE(rep.pass) << t << " " << rep.max_residual;
        EXPECT_EQ(rep.points_used + rep.excluded, 500u);
    }
    auto bad = numeric_boundary_check(one_map("map bad : H5 -> X { f1=z1; f2=z2; phi=0; g=w+w^2; }"), ModelId::H5,
                                      ModelId::X, 100, 3, 1e-10);
    EXPECT_FALSE(bad.pass);
}

TEST(Models, SymbolicAndNumericPathsAgree)
{
    auto H = one_map(r_text);
    ASSERT_TRUE(mapping_residual(H, 8).zero());
    EXPECT_TRUE(numeric_boundary_check(H, ModelId::H5, ModelId::X, 200, 9, 1e-8, 0.1).pass);
}
