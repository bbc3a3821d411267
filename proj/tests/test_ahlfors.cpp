#include <random>

#include <gtest/gtest.h>

#include <crmap/ahlfors.hpp>
#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/normalform.hpp>
#include <crmap/segre.hpp>

using namespace crmap;

namespace
{

const MapDef &cat(const char *name)
{
    static std::map<std::string, MapDef> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        it = cache.emplace(name, catalog_get(name).map).first;
    }
    return it->second;
}

double max_diff(const AhlforsMatrix &a, const AhlforsMatrix &b)
{
    double d = 0;
    for (int k = 0; k < 4; ++k) {
        d = std::max(d, std::abs(a.m[k].to_complex() - b.m[k].to_complex()));
    }
    return d;
}

} // namespace

TEST(Ahlfors, QOfLinearMapIsOne)
{
    auto Q = compute_Q(cat("ell"), 8);
    EXPECT_EQ(Q.order, 6);
    EXPECT_EQ(Q.certificate_order, 8);
    EXPECT_TRUE(Q.positive);
    ASSERT_EQ(Q.q.terms().size(), 1u);
    EXPECT_TRUE(Q.q.constant_term().is_one());
}

TEST(Ahlfors, QOfIotaIsHHbar)
{
    auto Q = compute_Q(cat("iota"), 8);
    auto c = compare_series(Q.q, iota_q_closed_form(6));
    EXPECT_TRUE(c.pass) << c.detail;
    // |h| alone is not the factor.
    auto h = expand_expr(parse_expr("2/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))"), {}, Q.q.spec(), 6);
    EXPECT_FALSE(compare_series(Q.q, h).pass);
}

TEST(Ahlfors, CertificateForCatalogMaps)
{
    for (const char *name : {"ell", "r", "iota", "HA(1,1)", "HA(1/2,-3)"}) {
        auto Q = compute_Q(cat(name), 8);
        EXPECT_EQ(Q.certificate_order, 8) << name;
        EXPECT_TRUE(Q.q.constant_term().is_real()) << name;
    }
}

TEST(Ahlfors, Errors)
{
    auto d = parse_maps("map d : H5 -> X { f1=0; f2=0; phi=z1+w^2; g=0; }").at(0);
    EXPECT_THROW(compute_Q(d, 6), not_transversal);
    auto bad = parse_maps("map b : H5 -> X { f1=z1; f2=z2; phi=0; g=w+w^2; }").at(0);
    EXPECT_THROW(compute_Q(bad, 6), division_inconsistency);
}

TEST(Ahlfors, PluriharmonicTest)
{
    EXPECT_TRUE(pluriharmonic_test(compute_Q(cat("ell"), 6), 6).pass);
    auto i = pluriharmonic_test(compute_Q(cat("iota"), 8), 8);
    EXPECT_TRUE(i.pass);
    EXPECT_EQ(i.checked_order, 6);
    auto r = pluriharmonic_test(compute_Q(cat("r"), 6), 6);
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.violating_weight.has_value());
    EXPECT_EQ(*r.violating_weight, 2);
    EXPECT_FALSE(r.monomial.empty());
}

TEST(Ahlfors, MatrixAtOrigin)
{
    auto zero = [](const AhlforsMatrix &A) {
        for (const auto &x : A.m) {
            if (!x.is_zero()) {
                return false;
            }
        }
        return true;
    };
    EXPECT_TRUE(zero(ahlfors_matrix(compute_Q(cat("ell"), 6))));
    EXPECT_TRUE(zero(ahlfors_matrix(compute_Q(cat("iota"), 6))));
    auto r = ahlfors_matrix(compute_Q(cat("r"), 6));
    EXPECT_TRUE(r.hermitian(0));
    EXPECT_EQ(r(0, 0), Scalar(2));
    EXPECT_EQ(r(1, 1), Scalar(-2));
    EXPECT_EQ(matrix_rank(r), 2);
}

TEST(Ahlfors, MatchesNumericOracle)
{
    auto pts = sample_points(ModelId::H5, 6, 11);
    for (const char *name : {"ell", "r", "iota"}) {
        for (const auto &p : pts) {
            auto A = ahlfors_matrix(cat(name), p);
            auto B = ahlfors_matrix_numeric(cat(name), p);
            EXPECT_LT(max_diff(A, B), 1e-5) << name;
            EXPECT_TRUE(A.hermitian()) << name;
            EXPECT_TRUE(B.hermitian()) << name;
            EXPECT_EQ(matrix_rank(A), matrix_rank(B)) << name;
        }
    }
}

TEST(Ahlfors, RankMatchesGeometricRank)
{
    auto pts = sample_points(ModelId::H5, 30, 5);
    for (const char *name : {"ell", "r", "iota"}) {
        auto ranks = ahlfors_rank(cat(name), pts);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            auto n = normalize(germ_at(cat(name), pts[k], 6), 6);
            EXPECT_EQ(ranks[k], geometric_rank(n.inv)) << name << " " << k;
        }
    }
}

TEST(Ahlfors, FrameIndependence)
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    auto pts = sample_points(ModelId::H5, 8, 23);
    for (const char *name : {"ell", "r", "iota"}) {
        for (const auto &p : pts) {
            auto A = ahlfors_matrix(cat(name), p);
            std::array<std::complex<double>, 4> M;
            for (auto &x : M) {
                x = {g(rng), g(rng)};
            }
            auto B = change_frame(A, M);
            EXPECT_TRUE(B.hermitian(1e-10)) << name;
            EXPECT_EQ(matrix_rank(B), matrix_rank(A)) << name;
        }
    }
}

TEST(Ahlfors, IsometryChain)
{
    auto pts = sample_points(ModelId::H5, 10, 31);
    for (const char *name : {"ell", "r", "iota", "HA(1,1)"}) {
        bool flat = pluriharmonic_test(compute_Q(cat(name), 6), 6).pass;
        bool zero = true;
        for (int k : ahlfors_rank(cat(name), pts)) {
            zero = zero && k == 0;
        }
        EXPECT_EQ(flat, zero) << name;
    }
}

TEST(Ahlfors, KeDeterminant)
{
    auto rep = ke_determinant_check(20, 1);
    EXPECT_TRUE(rep.log_pass);
    EXPECT_FALSE(rep.plain_pass);
    EXPECT_EQ(rep.interpretation, "log rho'");
    EXPECT_TRUE(rep.dilation_pass);
    EXPECT_EQ(rep.points.size(), 20u);
}

TEST(Ahlfors, KeRejectsExteriorPoints)
{
    Point p{0.1, 0.2, 0.0, {0.0, -0.5}};
    EXPECT_THROW(ke_evaluate(p), error);
    EXPECT_THROW(ke_evaluate({0.0, 0.0, 0.0}), error);
}
