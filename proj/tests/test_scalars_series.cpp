#include <random>

#include <gtest/gtest.h>

#include <crmap/error.hpp>
#include <crmap/series.hpp>

#include "test_util.hpp"

using namespace crmap;
using namespace crmap_test;

namespace
{

VarSpecPtr h5()
{
    return make_complexified({"z1", "z2", "w"}, {1, 1, 2});
}

Series var(const std::string &n, int order = 8)
{
    return Series::variable(h5(), order, n);
}

} // namespace

TEST(scalar, exact_arithmetic_is_exact)
{
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; ++k) {
        Scalar a = small_gaussian(rng, 50), b = small_gaussian(rng, 50);
        EXPECT_EQ((a + b) - b, a);
        EXPECT_EQ(a.conj().conj(), a);
        if (!b.is_zero()) {
            EXPECT_EQ((a / b) * b, a);
        }
    }
}

TEST(scalar, surds)
{
    auto r2 = Scalar(2).sqrt();
    ASSERT_TRUE(r2);
    EXPECT_EQ(r2->surd_radicand(), 2);
    EXPECT_EQ(*r2 * *r2, Scalar(2));
    EXPECT_EQ(Scalar(1) / *r2 * Scalar(2), *r2);
    auto h = Scalar::rational(1, 2).sqrt();
    EXPECT_EQ(*h * *r2, Scalar(1));
    EXPECT_EQ(Scalar(-4).sqrt(), Scalar(0, 2));
    EXPECT_EQ(Scalar(0, 2).sqrt(), Scalar(1, 1));
    EXPECT_FALSE(Scalar(9, 4).sqrt());
    EXPECT_EQ(Scalar(mpq_class(37, 4)).sqrt()->to_string(), "(1/2)*sqrt(37)");
    EXPECT_EQ((Scalar(1) + *r2).sign(), 1);
    EXPECT_EQ((Scalar(1) - *r2).sign(), -1);
    EXPECT_THROW(*r2 + *Scalar(3).sqrt(), field_error);
    EXPECT_NEAR(r2->to_complex().real(), std::sqrt(2.0), 1e-15);
}

TEST(scalar, float_mode)
{
    Scalar a(std::complex<double>(1.5, -2));
    Scalar b = Scalar::rational(1, 3);
    EXPECT_FALSE((a * b).is_exact());
    EXPECT_TRUE(approx_equal(a * b, Scalar(std::complex<double>(0.5, -2.0 / 3)), 1e-15));
}

TEST(series, examples)
{
    auto z1 = var("z1"), w = var("w");
    EXPECT_EQ((z1 * z1).coeff({{"z1", 2}}), Scalar(1));
    auto one = Series::constant(h5(), 4, Scalar(1));
    auto w4 = Series::variable(h5(), 4, "w");
    auto p = (one + w4) * (one - w4);
    EXPECT_EQ(p, one - w4 * w4);
    EXPECT_EQ(p.terms().size(), 2u);
    auto w2 = Series::variable(h5(), 2, "w");
    EXPECT_TRUE((w2 * w2).is_zero());
}

TEST(series, invert_unit)
{
    auto s = Series::constant(h5(), 6, Scalar(1)) - var("w", 6);
    auto inv = series_invert_unit(s);
    EXPECT_EQ(inv.terms().size(), 4u);
    EXPECT_EQ(inv.coeff({{"w", 3}}), Scalar(1));
    EXPECT_EQ(series_invert_unit(Series::constant(h5(), 6, Scalar(2))).constant_term(), Scalar::rational(1, 2));
    auto z1 = var("z1", 4), z2 = var("z2", 4), w = var("w", 4);
    auto d = Series::constant(h5(), 4, Scalar(1)) - w * w - Scalar::i() * (z1 * z1 + z2 * z2);
    // weight-4 terms of (i z z^t)^2 survive at order 4
    auto q = Scalar::i() * (z1 * z1 + z2 * z2);
    auto expect = Series::constant(h5(), 4, Scalar(1)) + w * w + q + q * q;
    EXPECT_EQ(series_invert_unit(d), expect);
    EXPECT_THROW(series_invert_unit(w), non_unit_error);
}

TEST(series, sqrt_unit)
{
    auto z1 = var("z1", 4), z2 = var("z2", 4), w = var("w", 4);
    auto one = Series::constant(h5(), 4, Scalar(1));
    auto s = one - Scalar(4) * w * w - Scalar(0, 4) * (z1 * z1 + z2 * z2);
    auto q = Scalar(0, 2) * (z1 * z1 + z2 * z2);
    auto expect = one - Scalar(2) * w * w - q - Scalar::rational(1, 2) * q * q;
    EXPECT_EQ(series_sqrt_unit(s), expect);
    EXPECT_EQ(series_sqrt_unit(s.truncated(3)), (one - q).truncated(3));
    auto u = Series::constant(h5(), 8, Scalar(1)) + var("z1") * var("z2");
    auto r = series_sqrt_unit(u);
    EXPECT_EQ(r * r, u);
    EXPECT_THROW(series_sqrt_unit(one * Scalar(2)), non_unit_error);
}

TEST(series, substitute_segre)
{
    auto spec = h5();
    auto g = var("w");
    std::map<std::string, Series> b{{"w", var("wb") + Scalar(0, 2) * (var("z1") * var("z1b") + var("z2") * var("z2b"))}};
    auto r = series_substitute(g, b, spec, 8);
    EXPECT_EQ(r, b.at("w"));
    auto z = series_substitute(var("z1") * var("z1b") + var("wb"), {{"z1", Series(spec, 8)}, {"wb", Series(spec, 8)}}, spec, 8);
    EXPECT_TRUE(z.is_zero());
    auto h = series_invert_unit(Series::constant(spec, 6, Scalar(1)) - var("w", 6) * var("w", 6)) * var("w", 6);
    EXPECT_TRUE(series_substitute(h, {{"w", Series(spec, 6)}}, spec, 6).is_zero());
    auto shift = var("w") + Scalar(1);
    EXPECT_THROW(series_substitute(h, {{"w", shift}}, spec, 6), non_unit_error);
}

TEST(series, conjugate_and_partial)
{
    auto c = series_conjugate(Scalar::i() * var("z1"));
    EXPECT_EQ(c, Scalar(0, -1) * var("z1b"));
    auto w = var("w");
    EXPECT_EQ(series_partial(w * w, "w"), Scalar(2) * var("w"));
    EXPECT_EQ(series_partial(var("z1") * var("z1b"), "z1b"), var("z1"));
    auto s = var("wb") + Scalar(0, 2) * var("z1") * var("z1b");
    auto l1 = series_partial(s, "z1b") - Scalar(0, 2) * var("z1") * series_partial(s, "wb");
    EXPECT_TRUE(l1.is_zero());
}

TEST(series_property, ring_axioms)
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 30; ++k) {
        auto a = random_series(rng, h5(), 8, 6), b = random_series(rng, h5(), 8, 6), c = random_series(rng, h5(), 8, 6);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(series_conjugate(series_conjugate(a)), a);
    }
}

TEST(series_property, inverse_and_sqrt)
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        auto u = random_series(rng, h5(), 6, 5, true);
        auto one = Series::constant(h5(), 6, Scalar(1));
        EXPECT_EQ(u * series_invert_unit(u), one);
        auto r = series_sqrt_unit(u);
        EXPECT_EQ(r * r, u);
    }
}

TEST(series_property, partials_commute)
{
    std::mt19937_64 rng(5);
    auto spec = h5();
    for (int k = 0; k < 20; ++k) {
        auto s = random_series(rng, spec, 8, 10);
        for (std::size_t a = 0; a < spec->size(); ++a) {
            for (std::size_t b = 0; b < spec->size(); ++b) {
                EXPECT_EQ(series_partial(series_partial(s, a), b), series_partial(series_partial(s, b), a));
            }
        }
    }
}

TEST(series_property, float_matches_exact)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 30; ++k) {
        auto a = random_series(rng, h5(), 6, 6, true), b = random_series(rng, h5(), 6, 6, true);
        auto e = a * series_invert_unit(b);
        auto f = a.to_float() * series_invert_unit(b.to_float());
        ASSERT_EQ(f.field(), Field::f64);
        for (const auto &[m, c] : e.terms()) {
            EXPECT_TRUE(approx_equal(f.coeff(m), c, 1e-12));
        }
        EXPECT_LE((f - e.to_float()).max_abs(), 1e-12 * std::max(1.0, e.to_float().max_abs()));
    }
}
