#include <random>

#include <gtest/gtest.h>

#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/normalform.hpp>

#include "test_util.hpp"

using namespace crmap;
using namespace crmap_test;

namespace
{

SeriesTuple cat(const char *name, int order)
{
    return expand_map(catalog_get(name).map, order);
}

SeriesTuple degenerate(std::mt19937_64 &rng, int order)
{
    const auto &S = model(ModelId::H5);
    auto phi = random_series(rng, make_varspec({"z1", "z2", "w"}, {1, 1, 2}), order, 5);
    return {Series(S.spec, order), Series(S.spec, order), series_reembed(phi, S.spec), Series(S.spec, order)};
}

// Small rational automorphisms keep the exact coefficients manageable.
SourceAutParams small_source(std::mt19937_64 &rng)
{
    auto q = [&](int lo, int hi, int d) { return Scalar::rational(std::uniform_int_distribution<int>(lo, hi)(rng), d); };
    SourceAutParams p;
    p.s = q(1, 3, 2);
    Scalar t = q(-1, 1, 2);
    p.u = (Scalar(1) - t * t + Scalar(0, 2) * t) / (Scalar(1) + t * t);
    p.a = Scalar::rational(3, 5);
    p.b = Scalar(0, mpq_class(4, 5));
    p.c = {q(-1, 1, 2), Scalar(0) + Scalar::i() * q(-1, 1, 2)};
    p.r = q(-1, 1, 2);
    return p;
}

TargetAutParams small_target(std::mt19937_64 &rng)
{
    auto q = [&](int lo, int hi, int d) { return Scalar::rational(std::uniform_int_distribution<int>(lo, hi)(rng), d); };
    TargetAutParams p;
    p.s = q(1, 3, 2);
    Scalar t = q(-1, 1, 2);
    p.u = (Scalar(1) - t * t + Scalar(0, 2) * t) / (Scalar(1) + t * t);
    p.a = {q(-1, 1, 2), Scalar::i() * q(-1, 1, 2)};
    p.r = q(-1, 1, 2);
    p.pc = Scalar::rational(4, 5);
    p.ps = Scalar::rational(-3, 5);
    return p;
}

} // namespace

TEST(Normalform, ExpectedInvariants)
{
    auto l = normalize(cat("ell", 6), 6);
    EXPECT_TRUE(l.relations_hold);
    EXPECT_TRUE(l.inv.alpha.is_zero() && l.inv.beta.is_zero() && l.inv.lambda.is_zero() && l.inv.sigma.is_zero());
    auto r = normalize(cat("r", 6), 6);
    EXPECT_TRUE(r.relations_hold);
    EXPECT_EQ(r.inv.alpha, Scalar(2));
    EXPECT_EQ(r.inv.beta, Scalar(0));
    EXPECT_TRUE(r.inv.lambda.is_zero());
    EXPECT_TRUE(r.inv.mu[0].is_zero() && r.inv.mu[1].is_zero() && r.inv.nu[0].is_zero() && r.inv.nu[1].is_zero());
    EXPECT_TRUE(r.inv.sigma.is_zero());
    auto i = normalize(cat("iota", 6), 6);
    EXPECT_TRUE(i.relations_hold);
    EXPECT_EQ(i.inv.lambda, Scalar(1));
    EXPECT_TRUE(i.inv.alpha.is_zero() && i.inv.beta.is_zero());
}

TEST(Normalform, GeometricRank)
{
    EXPECT_EQ(geometric_rank(normalize(cat("ell", 6), 6).inv), 0);
    EXPECT_EQ(geometric_rank(normalize(cat("r", 6), 6).inv), 2);
    EXPECT_EQ(geometric_rank(normalize(cat("iota", 6), 6).inv), 0);
}

TEST(Normalform, NormalizedOutputIsConjugateOfInput)
{
    auto H = cat("r", 6);
    std::mt19937_64 rng(3);
    auto moved = conjugate_map(H, target_aut(small_target(rng)), source_aut(small_source(rng)), 6);
    auto n = normalize(moved, 6);
    EXPECT_TRUE(n.relations_hold);
    auto rebuilt = compose_with(n.gamma, tuple_substitute(moved, {{"z1", n.psi_inv[0]}, {"z2", n.psi_inv[1]},
                                                                  {"w", n.psi_inv[2]}},
                                                          moved[0].spec(), 6),
                                6);
    EXPECT_TRUE(verify_identity(rebuilt, n.normalized).equal);
}

TEST(Normalform, Idempotence)
{
    for (const char *name : {"ell", "r", "iota", "HA(1,1)"}) {
        auto H = expand_map(catalog_get(name).map, 6);
        auto once = normalize(H, 6);
        auto twice = normalize(once.normalized, 6);
        EXPECT_EQ(once.inv.alpha, twice.inv.alpha) << name;
        EXPECT_EQ(once.inv.beta, twice.inv.beta) << name;
        EXPECT_EQ(once.inv.lambda, twice.inv.lambda) << name;
        EXPECT_EQ(once.inv.sigma, twice.inv.sigma) << name;
    }
}

TEST(Normalform, Classification)
{
    EXPECT_EQ(classify(cat("ell", 6), 6).label, Label::Linear);
    auto r = classify(cat("r", 6), 6);
    EXPECT_EQ(r.label, Label::Rational);
    EXPECT_EQ(r.rank, 2);
    EXPECT_EQ(classify(cat("iota", 6), 6).label, Label::Irrational);
    EXPECT_EQ(classify(catalog_get("HA(1,1)").map, 6).label, Label::Rational);
    auto d = parse_maps("map d : H5 -> X { f1=0; f2=0; phi=z1+w^2; g=0; }").at(0);
    EXPECT_EQ(classify(d, 6).label, Label::Degenerate);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 5; ++k) {
        EXPECT_EQ(classify(degenerate(rng, 6), 6).label, Label::Degenerate);
    }
}

TEST(Normalform, LabelInvariance)
{
    std::mt19937_64 rng(21);
    for (const char *name : {"ell", "r", "iota"}) {
        auto H = cat(name, 6);
        auto base = classify(H, 6);
        for (int k = 0; k < 20; ++k) {
            auto moved = conjugate_map(H, target_aut(small_target(rng)), source_aut(small_source(rng)), 6);
            auto c = classify(moved, 6);
            EXPECT_EQ(c.label, base.label) << name << " " << k;
            EXPECT_EQ(c.rank, base.rank) << name << " " << k;
        }
    }
}

TEST(Normalform, DegenerateDetection)
{
    auto w3 = expand_map(parse_maps("map d : H5 -> X { f1=0; f2=0; phi=w^3; g=0; }").at(0), 8);
    EXPECT_TRUE(detect_degenerate(w3, 8));
    EXPECT_FALSE(detect_degenerate(cat("ell", 8), 8));
    std::mt19937_64 rng(5);
    auto phi = degenerate(rng, 6);
    auto moved = conjugate_map(phi, target_aut({}), source_aut(small_source(rng)), 6);
    EXPECT_TRUE(detect_degenerate(moved, 6));
    moved = conjugate_map(phi, target_aut(small_target(rng)), source_aut({}), 6);
    EXPECT_TRUE(detect_degenerate(moved, 6));
}

TEST(Normalform, Errors)
{
    auto bad = expand_map(parse_maps("map b : H5 -> X { f1=z1; f2=z2; phi=0; g=w+w^2; }").at(0), 6);
    EXPECT_THROW(normalize(bad, 6), residual_nonzero);
    EXPECT_THROW(classify(bad, 6), residual_nonzero);
    auto d = expand_map(parse_maps("map d : H5 -> X { f1=0; f2=0; phi=z1; g=0; }").at(0), 6);
    EXPECT_THROW(normalize(d, 6), not_transversal);
}

TEST(Normalform, FloatMode)
{
    auto r = classify(catalog_get("r").map, 6, Field::f64);
    EXPECT_EQ(r.label, Label::Rational);
    EXPECT_NEAR(r.inv.alpha.to_complex().real(), 2.0, 1e-12);
    EXPECT_EQ(classify(catalog_get("iota").map, 6, Field::f64).label, Label::Irrational);
    ClassifyOptions o;
    o.borderline_retry = true;
    EXPECT_EQ(classify(catalog_get("ell").map, 6, Field::f64, o).label, Label::Linear);
}
