#include <gtest/gtest.h>

#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/segre.hpp>

using namespace crmap;

namespace
{

SeriesTuple normal(const std::string &name, int order = 10)
{
    return normalize(expand_map(catalog_get(name).map, order), order).normalized;
}

Series symbol(const Series &like, const char *n)
{
    return Series::variable(like.spec(), poly_order, n);
}

Series drop_g(const MappingEquation &me, const Series &s)
{
    std::map<std::string, Series> b;
    for (const auto &n : me.spec->names()) {
        b.emplace(n, n == "g" ? Series(me.spec, poly_order) : Series::variable(me.spec, poly_order, n));
    }
    return series_substitute(s, b, me.spec, poly_order);
}

} // namespace

TEST(Segre, FirstSegreSet)
{
    for (const char *name : {"ell", "r", "iota", "HA(1,1)"}) {
        auto s = first_segre_restrict(normal(name), 8);
        EXPECT_TRUE(s.f_check.pass) << name << " " << s.f_check.detail;
        EXPECT_TRUE(s.g_check.pass) << name;
    }
    auto l = first_segre_restrict(normal("ell"), 8);
    EXPECT_EQ(l.f1, Series::variable(l.f1.spec(), 8, "z1"));
    auto r = first_segre_restrict(normal("r"), 8);
    EXPECT_EQ(r.f2, Series::variable(r.f2.spec(), 8, "z2"));
    auto i = first_segre_restrict(normal("iota"), 8);
    EXPECT_EQ(i.f1.coeff({{"z1", 3}}), Scalar(0, 1));
}

TEST(Segre, FirstSegreSetFlagsNonNormalInput)
{
    auto H = expand_map(catalog_get("r").map, 8);
    H[0] = H[0] + Series::variable(H[0].spec(), 8, "z2").pow(2);
    auto s = first_segre_restrict(H, 8);
    EXPECT_FALSE(s.f_check.pass);
    EXPECT_NE(s.f_check.detail.find("z2^2"), std::string::npos) << s.f_check.detail;
}

TEST(Segre, GwOnSegreSet)
{
    for (const char *name : {"ell", "r", "iota"}) {
        auto g = gw_on_segre(normal(name), 8);
        EXPECT_TRUE(g.closed_form.pass) << name << " " << g.closed_form.detail;
    }
    EXPECT_TRUE(gw_on_segre(normal("ell"), 8).printed_form.pass);
    auto i = gw_on_segre(normal("iota"), 8);
    EXPECT_FALSE(i.printed_form.pass);
    EXPECT_NE(i.printed_form.detail.find("computed i, expected 2*i"), std::string::npos) << i.printed_form.detail;
}

TEST(Segre, HwOnSegreSet)
{
    for (const char *name : {"ell", "r", "HA(1,1)", "HA(1/2,-3)"}) {
        auto c = hw_on_segre(normal(name), 8);
        EXPECT_TRUE(c.pass) << name << " " << c.detail;
    }
}

TEST(Segre, LOperatorsAnnihilateTheSegreSubstitution)
{
    auto spec = make_varspec({"z1", "z2", "z1b", "z2b", "wb"}, {1, 1, 1, 1, 2});
    auto w = Series::variable(spec, poly_order, "wb") +
             Series::variable(spec, poly_order, "z1") * Series::variable(spec, poly_order, "z1b") * Scalar(0, 2);
    auto full = w + Series::variable(spec, poly_order, "z2") * Series::variable(spec, poly_order, "z2b") * Scalar(0, 2);
    EXPECT_TRUE(apply_L_operators(w, {LOp::L1}).is_zero());
    EXPECT_TRUE(apply_L_operators(full.pow(3), {LOp::L1}).is_zero());
    EXPECT_TRUE(apply_L_operators(full.pow(2), {LOp::L2, LOp::L1}).is_zero());
    EXPECT_FALSE(apply_L_operators(full, {LOp::T}).is_zero());
}

TEST(Segre, DerivationsVanishOnValidMaps)
{
    std::vector<std::vector<LOp>> words{{LOp::L1}, {LOp::L2}, {LOp::L1, LOp::T}, {LOp::L2, LOp::T},
                                        {LOp::L1, LOp::L1}, {LOp::L2, LOp::L1}, {LOp::T, LOp::T}};
    for (const char *name : {"ell", "r", "iota", "HA(1,1)"}) {
        auto H = normal(name);
        auto me = symbolic_mapping_equation(H, 2);
        for (const auto &w : words) {
            EXPECT_TRUE(evaluate_on_segre(apply_L_operators(me.eq, w), H, 6).is_zero()) << name;
        }
    }
}

TEST(Segre, FirstDerivationReproducesTheFirstSegreEquation)
{
    // z1 - f1 + i conj(lambda) z1 F = 0 along the Segre set.
    for (const char *name : {"r", "iota"}) {
        auto H = normal(name);
        Scalar lb = H[2].coeff({{"w", 1}}).conj();
        auto me = symbolic_mapping_equation(H, 1);
        auto e = drop_g(me, apply_L_operators(me.eq, {LOp::L1}));
        auto z1 = symbol(e, "z1"), f1 = symbol(e, "f1"), f2 = symbol(e, "f2");
        auto expected = z1 - f1 + z1 * (f1 * f1 + f2 * f2) * (Scalar::i() * lb);
        EXPECT_EQ(e, expected) << name << ": " << e.to_string();
    }
}

TEST(Segre, KeyDerivative)
{
    // L1 then T gives f1_w(z, 0) = (i/2)(alpha z1 + beta z2) once H(z, 0) = (z, zAz^t, 0).
    auto H = normal("HA(1,1)");
    auto me = symbolic_mapping_equation(H, 1);
    auto e = apply_L_operators(me.eq, {LOp::L1, LOp::T});
    auto n = H[0].spec();
    auto z1 = Series::variable(n, 8, "z1"), z2 = Series::variable(n, 8, "z2");
    std::map<std::string, Series> b{{"z1", z1}, {"z2", z2}, {"f1", z1}, {"f2", z2},
                                    {"phi", z1 * z1 - z2 * z2 + z1 * z2 * Scalar(2)},
                                    {"g", Series(n, 8)}, {"g_w", Series::constant(n, 8, 1)},
                                    {"phi_w", Series(n, 8)}, {"f2_w", Series(n, 8)},
                                    {"f1_w", (z1 + z2) * Scalar(0, mpq_class(1, 2))}};
    for (const auto &name : {"z1b", "z2b", "wb"}) {
        b.emplace(name, Series(n, 8));
    }
    EXPECT_TRUE(series_substitute(e, b, n, 8).is_zero());
    EXPECT_EQ(e.coeff({{"f1_w", 1}}), Scalar(-1));
}

TEST(Segre, SecondOrderDerivations)
{
    // L1 L1 along the Segre set for lambda = 0: 2 alpha z1 f1 + 2 beta z1 f2 - alpha F - phi.
    auto H = normal("HA(1,1)");
    auto me = symbolic_mapping_equation(H, 2);
    auto e = drop_g(me, apply_L_operators(me.eq, {LOp::L1, LOp::L1}));
    auto z1 = symbol(e, "z1"), f1 = symbol(e, "f1"), f2 = symbol(e, "f2"), phi = symbol(e, "phi");
    EXPECT_EQ(e, z1 * f1 * Scalar(2) + z1 * f2 * Scalar(2) - (f1 * f1 + f2 * f2) - phi) << e.to_string();
    // iota: -(1 - 4i z1^2) phi.
    auto I = normal("iota");
    auto mi = symbolic_mapping_equation(I, 2);
    auto ei = drop_g(mi, apply_L_operators(mi.eq, {LOp::L1, LOp::L1}));
    auto zi = symbol(ei, "z1"), pi = symbol(ei, "phi");
    EXPECT_EQ(ei, -(pi - zi * zi * pi * Scalar(0, 4)));
}

TEST(Segre, HIdentities)
{
    for (const char *name : {"ell", "r", "HA(1,1)", "HA(1/2,-3)"}) {
        auto h = h_identities(normal(name), 8);
        EXPECT_TRUE(h.zero()) << name << " h" << h.first_nonzero() + 1;
    }
    EXPECT_EQ(h_identities(normal("r"), 8, true).first_nonzero(), 0);
    auto H = expand_map(catalog_get("r").map, 8);
    H[3] = H[3] + Series::variable(H[3].spec(), 8, "w").pow(3);
    EXPECT_EQ(h_identities(H, 8).first_nonzero(), 0);
}

TEST(Segre, LinearSystem)
{
    auto generic = solve_linear_system();
    EXPECT_EQ(generic.rank, 3);
    EXPECT_EQ(generic.pivots, (std::vector<int>{0, 1, 2}));
    EXPECT_TRUE(generic.matches_display.pass) << generic.matches_display.detail;
    EXPECT_TRUE(generic.matches_solution.pass) << generic.matches_solution.detail;
    EXPECT_TRUE(generic.solves_all.pass) << generic.solves_all.detail;
    auto r = solve_linear_system(2, 0);
    EXPECT_TRUE(r.matches_display.pass);
    // Row 3: phi + i zAz^t / zz^t Psi with zAz^t = 2(z1^2 - z2^2).
    const auto &e = r.rref[2][4];
    auto spec = system_spec();
    auto z1 = Series::variable(spec, poly_order, "z1"), z2 = Series::variable(spec, poly_order, "z2");
    EXPECT_TRUE((e.num * (z1 * z1 + z2 * z2) - e.den * (z1 * z1 - z2 * z2) * Scalar(0, 2)).is_zero());
    auto zero = solve_linear_system(0, 0);
    EXPECT_EQ(zero.rank, 3);
    EXPECT_TRUE(zero.rref[2][4].num.is_zero());
}

TEST(Segre, CaseOneIdentities)
{
    auto g = case1_identities();
    EXPECT_TRUE(g.s1_into_s2.pass) << g.s1_into_s2.detail;
    EXPECT_TRUE(g.first_equation.pass);
    EXPECT_TRUE(g.second_equation.pass);
    EXPECT_FALSE(g.first_equation_printed.pass);
    auto n = case1_identities(Scalar::rational(3, 7), -2);
    EXPECT_TRUE(n.s1_into_s2.pass && n.first_equation.pass && n.second_equation.pass);
}

TEST(Segre, Reconstruction)
{
    auto r = expand_map(reconstruct_case1(2, 0), 8);
    EXPECT_TRUE(verify_identity(r, expand_map(catalog_get("r").map, 8)).equal);
    auto l = expand_map(reconstruct_case1(0, 0), 8);
    EXPECT_TRUE(verify_identity(l, expand_map(catalog_get("ell").map, 8)).equal);
    auto m = reconstruct_case1(1, 1);
    EXPECT_TRUE(mapping_residual(m, 8).zero());
    auto n = normalize(expand_map(m, 8), 8);
    EXPECT_EQ(n.inv.alpha, Scalar(1));
    EXPECT_EQ(n.inv.beta, Scalar(1));
    for (const auto &ab : std::vector<std::pair<Scalar, Scalar>>{{Scalar::rational(-3, 4), 5}, {0, -1}}) {
        auto k = normalize(expand_map(reconstruct_case1(ab.first, ab.second), 8), 8);
        EXPECT_EQ(k.inv.alpha, ab.first);
        EXPECT_EQ(k.inv.beta, ab.second);
    }
}

TEST(Segre, RescaleWitness)
{
    auto id = rescale_witness(2, 0);
    EXPECT_EQ(id.field, Field::exact);
    EXPECT_TRUE(id.verified);
    EXPECT_EQ(id.scale, Scalar(1));
    EXPECT_EQ(id.cos_half, Scalar(1));
    auto rot = rescale_witness(0, 2);
    EXPECT_TRUE(rot.verified);
    EXPECT_EQ(rot.scale, Scalar(1));
    EXPECT_EQ(rot.cos_half * rot.cos_half, Scalar::rational(1, 2));
    EXPECT_FALSE(rot.literal_verified);
    auto unit = rescale_witness(1, 0);
    EXPECT_TRUE(unit.verified);
    EXPECT_FALSE(unit.literal_verified);
    for (double s : {0.3, 2.0, 4.4}) {
        auto w = rescale_witness(Scalar(std::complex<double>(2 * std::cos(s), 0)),
                                 Scalar(std::complex<double>(2 * std::sin(s), 0)));
        EXPECT_TRUE(w.verified) << s << " " << w.discrepancy;
        EXPECT_NEAR(w.scale.to_complex().real(), 1.0, 1e-12);
    }
    EXPECT_THROW(rescale_witness(0, 0), error);
}

TEST(Segre, CaseTwoObstruction)
{
    auto i = case2_obstruction(normal("iota"));
    EXPECT_TRUE(i.vanishes);
    EXPECT_TRUE(i.M.is_zero() && i.N.is_zero());
    NormalFormInvariants a;
    a.lambda = 1;
    a.alpha = 1;
    auto oa = case2_obstruction(a);
    EXPECT_FALSE(oa.vanishes);
    EXPECT_EQ(oa.z1_3z2, Scalar(0, 16));
    EXPECT_TRUE(oa.ratio_defined);
    EXPECT_EQ(oa.ratio, Scalar(0, -2));
    NormalFormInvariants b;
    b.lambda = Scalar(0, 1);
    b.beta = 1;
    auto ob = case2_obstruction(b);
    EXPECT_FALSE(ob.vanishes);
    EXPECT_EQ(ob.z1_4, Scalar(0, -8) * b.lambda.conj());
    EXPECT_EQ(ob.ratio, Scalar(0, -2));
    EXPECT_THROW(case2_obstruction(normal("r")), error);
}
