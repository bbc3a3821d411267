#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/segre.hpp>

#include <cmath>
#include <sstream>

namespace crmap
{

namespace
{

const HypersurfaceModel &src()
{
    return model(ModelId::H5);
}

Field field_of(const SeriesTuple &H)
{
    for (const auto &h : H) {
        if (h.field() == Field::f64) {
            return Field::f64;
        }
    }
    return Field::exact;
}

Series var(const VarSpecPtr &spec, int order, const std::string &n, Field field = Field::exact)
{
    return Series::variable(spec, order, n, field);
}

Series cst(const VarSpecPtr &spec, int order, const Scalar &c, Field field = Field::exact)
{
    return Series::constant(spec, order, c, field);
}

struct Jet {
    Scalar lambda, alpha, beta;
};

Jet jet_of(const SeriesTuple &H)
{
    if (H.size() != 4) {
        throw error("Segre analysis needs a map into X (four components)");
    }
    return {H[2].coeff({{"w", 1}}), H[2].coeff({{"z1", 2}}), H[2].coeff({{"z1", 1}, {"z2", 1}}) * Scalar::rational(1, 2)};
}

// 2/(1 + sqrt(1 - 4i lb zz^t)) in the source spec.
Series segre_factor(const Scalar &lb, int order, Field field)
{
    const auto &S = src();
    auto zz = var(S.spec, order, "z1", field).pow(2) + var(S.spec, order, "z2", field).pow(2);
    auto root = series_sqrt_unit(cst(S.spec, order, 1, field) + zz * (Scalar(0, -4) * lb));
    return series_invert_unit((root + Scalar(1)) * Scalar::rational(1, 2));
}

Series restrict_w0(const Series &s, int order)
{
    return series_set_zero(s.truncated(order), {"w"});
}

Series poly(const std::string &text, const std::map<std::string, Series> &b)
{
    return expand_expr(parse_expr(text), b, system_spec(), poly_order);
}

std::map<std::string, Series> ab_bindings(const Scalar *alpha, const Scalar *beta)
{
    std::map<std::string, Series> b;
    if (alpha != nullptr) {
        b.emplace("a", cst(system_spec(), poly_order, *alpha));
        b.emplace("b", cst(system_spec(), poly_order, *beta));
    }
    return b;
}

// Rows of (h1)..(h5) over the unknowns (f1, f2, phi, g, Psi).
const char *h_rows[5][5] = {
    {"0", "4*w*z2", "-i*w^2", "-4*z2^2", "a*w^2"},
    {"-4*w*z1", "0", "i*w^2", "4*z1^2", "a*w^2"},
    {"-2*z2^2", "2*z1*z2", "-i*w*z1", "0", "w*(a*z1+b*z2)"},
    {"2*z1*z2", "-2*z1^2", "-i*w*z2", "0", "w*(b*z1-a*z2)"},
    {"0", "0", "-i*(z1^2+z2^2)", "0", "a*(z1^2-z2^2)+2*b*z1*z2"},
};

const char *h1_printed_g = "4*z2^2";

// Displayed reduced row-echelon form, entries as (numerator, denominator).
const char *rref_display[3][5][2] = {
    {{"1", "1"}, {"0", "1"}, {"0", "1"}, {"-z1", "w"}, {"-w*(a*z1+b*z2)", "2*(z1^2+z2^2)"}},
    {{"0", "1"}, {"1", "1"}, {"0", "1"}, {"-z2", "w"}, {"w*(a*z2-b*z1)", "2*(z1^2+z2^2)"}},
    {{"0", "1"}, {"0", "1"}, {"1", "1"}, {"0", "1"}, {"i*(a*z1^2+2*b*z1*z2-a*z2^2)", "z1^2+z2^2"}},
};

// f and phi from the displayed solution, over the common denominator 2 w zz^t.
const char *solution_num[3] = {
    "2*(z1^2+z2^2)*z1*g+w^2*(a*z1+b*z2)*Psi",
    "2*(z1^2+z2^2)*z2*g+w^2*(b*z1-a*z2)*Psi",
    "-2*i*w*(a*z1^2+2*b*z1*z2-a*z2^2)*Psi",
};
const char *solution_den = "2*w*(z1^2+z2^2)";

FormulaCheck ok()
{
    return {true, ""};
}

FormulaCheck fail(std::string d)
{
    return {false, std::move(d)};
}

LinearSystemResult solve_impl(const Scalar *alpha, const Scalar *beta)
{
    auto b = ab_bindings(alpha, beta);
    LinearSystemResult out;
    for (int r : {0, 1, 4}) {
        std::vector<Series> row;
        for (int j = 0; j < 5; ++j) {
            row.push_back(poly(h_rows[r][j], b));
        }
        out.matrix.push_back(row);
    }
    // Fraction-free Gauss-Jordan elimination: row i of the result divided by its
    // pivot entry is row i of the reduced row-echelon form.
    auto M = out.matrix;
    std::size_t r = 0;
    for (int c = 0; c < 5 && r < M.size(); ++c) {
        std::size_t p = r;
        while (p < M.size() && M[p][static_cast<std::size_t>(c)].is_zero()) {
            ++p;
        }
        if (p == M.size()) {
            continue;
        }
        std::swap(M[r], M[p]);
        auto piv = M[r][static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < M.size(); ++i) {
            if (i == r || M[i][static_cast<std::size_t>(c)].is_zero()) {
                continue;
            }
            auto f = M[i][static_cast<std::size_t>(c)];
            for (std::size_t j = 0; j < 5; ++j) {
                M[i][j] = piv * M[i][j] - f * M[r][j];
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = static_cast<int>(r);
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<RationalEntry> row;
        auto den = M[i][static_cast<std::size_t>(out.pivots[i])];
        for (std::size_t j = 0; j < 5; ++j) {
            row.push_back({M[i][j], den});
        }
        out.rref.push_back(row);
    }

    out.matches_display = ok();
    if (out.rank != 3 || out.pivots != std::vector<int>{0, 1, 2}) {
        out.matches_display = fail("rank " + std::to_string(out.rank) + " with pivots other than f1, f2, phi");
        out.matches_solution = out.matches_display;
        out.solves_all = out.matches_display;
        return out;
    }
    for (std::size_t i = 0; i < 3 && out.matches_display.pass; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            auto n = poly(rref_display[i][j][0], b);
            auto d = poly(rref_display[i][j][1], b);
            if (!(out.rref[i][j].num * d - n * out.rref[i][j].den).is_zero()) {
                out.matches_display = fail("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
                break;
            }
        }
    }

    // Unknowns in terms of g and Psi: row i gives x_i = -(R_i3 g + R_i4 Psi) / R_ii.
    auto g = var(system_spec(), poly_order, "g");
    auto psi = var(system_spec(), poly_order, "Psi");
    std::vector<Series> num, den;
    for (std::size_t i = 0; i < 3; ++i) {
        num.push_back(-(M[i][3] * g + M[i][4] * psi));
        den.push_back(M[i][i]);
    }
    out.matches_solution = ok();
    auto sd = poly(solution_den, b);
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(num[i] * sd - poly(solution_num[i], b) * den[i]).is_zero()) {
            out.matches_solution = fail(std::string("unknown ") + (i == 0 ? "f1" : i == 1 ? "f2" : "phi"));
            break;
        }
    }
    out.solves_all = ok();
    auto D = den[0] * den[1] * den[2];
    for (int h = 0; h < 5; ++h) {
        Series acc = (poly(h_rows[h][3], b) * g + poly(h_rows[h][4], b) * psi) * D;
        for (std::size_t i = 0; i < 3; ++i) {
            auto others = cst(system_spec(), poly_order, 1);
            for (std::size_t k = 0; k < 3; ++k) {
                if (k != i) {
                    others = others * den[k];
                }
            }
            acc += poly(h_rows[h][i], b) * num[i] * others;
        }
        if (!acc.is_zero()) {
            out.solves_all = fail("identity h" + std::to_string(h + 1));
            break;
        }
    }
    return out;
}

CaseOneIdentities case1_impl(const Scalar *alpha, const Scalar *beta)
{
    auto b = ab_bindings(alpha, beta);
    auto P = [&](const char *t) { return poly(t, b); };
    CaseOneIdentities out;
    // e:s2 times 2 w zz^t with f, phi replaced by the solution numerators.
    auto lhs = P("a*w*Psi*2*w*(z1^2+z2^2)") - P("z1*(2+i*a*w)") * P(solution_num[0]) -
               P("i*b*z1*w") * P(solution_num[1]) + P("i*w") * P(solution_num[2]) + P("2*z1^2*2*w*(z1^2+z2^2)");
    const char *cg = "2*i*z1*(z1^2+z2^2)*(2*i*z1-w*(a*z1+b*z2))";
    const char *cg_printed = "2*i*z1*(2*i*z1-w*(a*z1+b*z2))";
    const char *cpsi = "z1*w^2*(2*a*z1+2*b*z2-i*w*z1*(a^2+b^2))";
    const char *c0 = "4*w*z1^2*(z1^2+z2^2)";
    auto rhs = P(cg) * P("g") + P(cpsi) * P("Psi") + P(c0);
    out.s1_into_s2 = (lhs - rhs).is_zero() ? ok() : fail((lhs - rhs).to_string());
    // g = 4w/D, Psi = 4i zz^t/D with D = 4 - (a^2+b^2) w^2.
    auto gn = P("4*w");
    auto pn = P("4*i*(z1^2+z2^2)");
    auto D = P("4-(a^2+b^2)*w^2");
    auto e1 = P(cg) * gn + P(cpsi) * pn + P(c0) * D;
    out.first_equation = e1.is_zero() ? ok() : fail(e1.to_string());
    auto e1p = P(cg_printed) * gn + P(cpsi) * pn + P(c0) * D;
    out.first_equation_printed = e1p.is_zero() ? ok() : fail(e1p.to_string());
    auto e2 = P("4*(z1^2+z2^2)^2") * gn * gn + P("w^4*(a^2+b^2)") * pn * pn + P("4*i*w^2*(z1^2+z2^2)") * pn * D;
    out.second_equation = e2.is_zero() ? ok() : fail(e2.to_string());
    return out;
}

std::string component_name(const std::string &base, int k)
{
    return k == 0 ? base : base + "_" + std::string(static_cast<std::size_t>(k), 'w');
}

const char *comp_names[4] = {"f1", "f2", "phi", "g"};

struct HalfAngle {
    Scalar rho, c, s;
};

// rho = |(alpha, beta)|, (c, s) = (cos, sin) of half the angle of (alpha, beta) in [0, 2 pi).
HalfAngle half_angle(const Scalar &alpha, const Scalar &beta, bool exact)
{
    if (exact) {
        auto rho = (alpha * alpha + beta * beta).sqrt();
        if (rho) {
            auto cs = alpha / *rho;
            auto c = ((Scalar(1) + cs) * Scalar::rational(1, 2)).sqrt();
            auto s = ((Scalar(1) - cs) * Scalar::rational(1, 2)).sqrt();
            if (c && s) {
                if (beta.sign() < 0) {
                    *c = -*c;
                }
                return {*rho, *c, *s};
            }
        }
        throw field_error("half-angle rotation leaves the exact field");
    }
    double a = alpha.to_complex().real(), b = beta.to_complex().real();
    double t = std::atan2(b, a);
    if (t < 0) {
        t += 2 * M_PI;
    }
    auto f = [](double x) { return Scalar(std::complex<double>(x, 0)); };
    return {f(std::hypot(a, b)), f(std::cos(t / 2)), f(std::sin(t / 2))};
}

struct WitnessCheck {
    bool ok;
    double discrepancy;
};

WitnessCheck check_witness(const MapDef &gamma, const MapDef &psi, const SeriesTuple &H, const SeriesTuple &target,
                           int order, Field field)
{
    const auto &S = src();
    auto pinv = invert_aut(psi, order, field);
    auto inner = tuple_substitute(H, {{"z1", pinv[0]}, {"z2", pinv[1]}, {"w", pinv[2]}}, S.spec, order);
    auto moved = compose_with(gamma, inner, order, field);
    double worst = 0;
    bool exact_ok = true;
    for (std::size_t k = 0; k < 4; ++k) {
        auto d = (moved[k] - target[k]).truncated(order);
        worst = std::max(worst, d.max_abs());
        exact_ok = exact_ok && d.is_zero();
    }
    return {field == Field::exact ? exact_ok : worst <= 1e-10, worst};
}

struct WitnessPair {
    MapDef gamma, psi;
};

WitnessPair witness_pair(const Scalar &scale, const HalfAngle &h)
{
    TargetAutParams tp;
    tp.s = scale;
    tp.pc = h.c;
    tp.ps = h.s;
    SourceAutParams sp;
    sp.s = scale;
    sp.a = h.c;
    sp.b = h.s;
    return {target_aut(tp), source_aut(sp)};
}

bool nonzero(const Scalar &x)
{
    return x.is_exact() ? !x.is_zero() : std::abs(x.to_complex()) > 1e-12;
}

CaseTwoObstruction obstruction(const SeriesTuple &H, const Scalar &lambda, const Scalar &alpha, const Scalar &beta)
{
    const auto &S = src();
    auto me = symbolic_mapping_equation(H, 2);
    const auto &spec = me.spec;
    Field field = me.eq.field();
    auto E1 = apply_L_operators(me.eq, {LOp::L1, LOp::L1});
    auto E2 = apply_L_operators(me.eq, {LOp::L2, LOp::L1});
    // g vanishes along the Segre set.
    std::map<std::string, Series> gz;
    for (const auto &n : spec->names()) {
        gz.emplace(n, n == "g" ? Series(spec, poly_order, field) : var(spec, poly_order, n, field));
    }
    E1 = series_substitute(E1, gz, spec, poly_order);
    E2 = series_substitute(E2, gz, spec, poly_order);
    auto d1 = series_partial(E1, "phi");
    auto d2 = series_partial(E2, "phi");
    if (!series_partial(d1, "phi").is_zero() || !series_partial(d2, "phi").is_zero()) {
        throw error("the L-derivations are not linear in phi");
    }
    auto R = E1 * d2 - E2 * d1;
    // f_j = 2 z_j t with t = 1/(1 + sqrt(1 - 4i conj(lambda) zz^t)).
    auto tspec = make_varspec({"z1", "z2", "t"}, {1, 1, 1});
    std::map<std::string, Series> sub;
    for (const auto &n : spec->names()) {
        if (n == "z1" || n == "z2") {
            sub.emplace(n, var(tspec, poly_order, n, field));
        } else if (n == "f1" || n == "f2") {
            auto z = var(tspec, poly_order, n == "f1" ? "z1" : "z2", field);
            sub.emplace(n, z * var(tspec, poly_order, "t", field) * Scalar(2));
        } else {
            sub.emplace(n, Series(tspec, poly_order, field));
        }
    }
    auto Rt = series_substitute(R, sub, tspec, poly_order);
    std::array<Series, 3> c{Series(S.spec, poly_order, field), Series(S.spec, poly_order, field),
                            Series(S.spec, poly_order, field)};
    auto i1 = S.spec->index("z1"), i2 = S.spec->index("z2");
    for (const auto &[m, v] : Rt.terms()) {
        if (m.e[2] > 2) {
            throw error("elimination left a power of f above two");
        }
        Monomial mm;
        mm.e[i1] = m.e[0];
        mm.e[i2] = m.e[1];
        c[m.e[2]].add_term(mm, v);
    }
    // (1 + sqrt)^2 (c0 + c1 t + c2 t^2) = M sqrt + N.
    auto zz = var(S.spec, poly_order, "z1", field).pow(2) + var(S.spec, poly_order, "z2", field).pow(2);
    auto lb = lambda.conj();
    CaseTwoObstruction out{c[0] * Scalar(2) + c[1], Series(S.spec, poly_order, field), {}, {}, {}, false, false, {E1, E2}};
    out.N = c[0] * (cst(S.spec, poly_order, 2, field) + zz * (Scalar(0, -4) * lb)) + c[1] + c[2];
    out.z1_4 = out.M.coeff({{"z1", 4}});
    out.z1_3z2 = out.M.coeff({{"z1", 3}, {"z2", 1}});
    Scalar p4 = Scalar(4) * lb * beta, p3 = Scalar(-8) * lb * alpha;
    if (nonzero(p4)) {
        out.ratio = out.z1_4 / p4;
        out.ratio_defined = true;
    } else if (nonzero(p3)) {
        out.ratio = out.z1_3z2 / p3;
        out.ratio_defined = true;
    }
    out.vanishes = field == Field::exact ? out.M.is_zero() && out.N.is_zero()
                                         : out.M.is_zero_within(1e-10) && out.N.is_zero_within(1e-10);
    return out;
}

} // namespace

FormulaCheck compare_series(const Series &computed, const Series &expected, double tol)
{
    auto d = computed - expected;
    bool exact = computed.field() == Field::exact && expected.field() == Field::exact;
    if (exact ? d.is_zero() : d.is_zero_within(tol)) {
        return ok();
    }
    std::optional<std::pair<Monomial, Scalar>> first;
    for (const auto &[m, v] : d.terms()) {
        if (exact || std::abs(v.to_complex()) > tol) {
            if (!first || d.degree(m) < d.degree(first->first)) {
                first = std::make_pair(m, v);
            }
        }
    }
    std::ostringstream os;
    os << "monomial " << d.monomial_string(first->first) << ": computed " << computed.coeff(first->first).to_string()
       << ", expected " << expected.coeff(first->first).to_string();
    return fail(os.str());
}

SegreRestriction first_segre_restrict(const SeriesTuple &H, int order, double tol)
{
    const auto &S = src();
    auto j = jet_of(H);
    Field field = field_of(H);
    SegreRestriction out{restrict_w0(H[0], order), restrict_w0(H[1], order), restrict_w0(H[3], order),
                         Series(S.spec, order, field), Series(S.spec, order, field), {}, {}};
    auto k = segre_factor(j.lambda.conj(), order, field);
    out.f1_expected = var(S.spec, order, "z1", field) * k;
    out.f2_expected = var(S.spec, order, "z2", field) * k;
    out.f_check = compare_series(out.f1, out.f1_expected, tol);
    if (out.f_check.pass) {
        out.f_check = compare_series(out.f2, out.f2_expected, tol);
    }
    out.g_check = compare_series(out.g, Series(S.spec, order, field), tol);
    return out;
}

GwOnSegre gw_on_segre(const SeriesTuple &H, int order, double tol)
{
    const auto &S = src();
    auto j = jet_of(H);
    Field field = field_of(H);
    auto lb = j.lambda.conj();
    GwOnSegre out{restrict_w0(series_partial(H[3].truncated(order), "w"), order), {}, {}};
    auto k = segre_factor(lb, order, field);
    auto zz = var(S.spec, order, "z1", field).pow(2) + var(S.spec, order, "z2", field).pow(2);
    auto ff = zz * k * k;
    auto one = cst(S.spec, order, 1, field);
    out.closed_form = compare_series(out.gw, one + ff * (Scalar::i() * lb), tol);
    out.printed_form = compare_series(out.gw, one + zz * k * (Scalar(0, 2) * lb), tol);
    return out;
}

FormulaCheck hw_on_segre(const SeriesTuple &H, int order, double tol)
{
    const auto &S = src();
    auto j = jet_of(H);
    Field field = field_of(H);
    auto z1 = var(S.spec, order, "z1", field), z2 = var(S.spec, order, "z2", field);
    Scalar h(0, mpq_class(1, 2));
    std::array<Series, 4> expected{(z1 * j.alpha + z2 * j.beta) * h, (z1 * j.beta - z2 * j.alpha) * h,
                                   Series(S.spec, order, field), cst(S.spec, order, 1, field)};
    for (std::size_t k = 0; k < 4; ++k) {
        auto c = compare_series(restrict_w0(series_partial(H[k].truncated(order), "w"), order), expected[k], tol);
        if (!c.pass) {
            c.detail = std::string(comp_names[k]) + "_w: " + c.detail;
            return c;
        }
    }
    return ok();
}

MappingEquation symbolic_mapping_equation(const SeriesTuple &H, int depth, int jet_degree)
{
    if (depth < 0 || depth > 2) {
        throw error("mapping equation depth must be 0, 1 or 2");
    }
    if (H.size() != 4) {
        throw error("mapping equation needs a map into X");
    }
    const auto &S = src();
    std::vector<std::string> names{"z1", "z2", "z1b", "z2b", "wb"};
    std::vector<int> weights{1, 1, 1, 1, 2};
    for (const auto *c : comp_names) {
        for (int k = 0; k <= depth; ++k) {
            names.push_back(component_name(c, k));
            weights.push_back(1);
        }
    }
    auto spec = make_varspec(names, weights);
    Field field = field_of(H);
    int P = poly_order;
    auto w = var(spec, P, "wb", field) +
             (var(spec, P, "z1", field) * var(spec, P, "z1b", field) +
              var(spec, P, "z2", field) * var(spec, P, "z2b", field)) *
                 Scalar(0, 2);
    SeriesTuple hol, conj;
    auto iz1 = S.spec->index("z1"), iz2 = S.spec->index("z2"), iw = S.spec->index("w");
    for (std::size_t j = 0; j < 4; ++j) {
        Series h(spec, P, field);
        Series wk = cst(spec, P, 1, field);
        Scalar fact(1);
        for (int k = 0; k <= depth; ++k) {
            if (k > 0) {
                wk = wk * w;
                fact = fact * Scalar(k);
            }
            h += var(spec, P, component_name(comp_names[j], k), field) * wk * (Scalar(1) / fact);
        }
        hol.push_back(h);
        Series c(spec, P, field);
        for (const auto &[m, v] : H[j].terms()) {
            int deg = m.e[iz1] + m.e[iz2] + m.e[iw];
            if (deg > jet_degree) {
                continue;
            }
            Monomial mm;
            mm.e[spec->index("z1b")] = m.e[iz1];
            mm.e[spec->index("z2b")] = m.e[iz2];
            mm.e[spec->index("wb")] = m.e[iw];
            c.add_term(mm, v.conj());
        }
        if (H[j].order() < 2 * jet_degree) {
            throw error("map is truncated below the jet order needed");
        }
        conj.push_back(c);
    }
    return {spec, compose_rho(model(ModelId::X), hol, conj, P, field), depth};
}

SeriesTuple normalized_jet(const NormalFormInvariants &inv, int order)
{
    const auto &S = src();
    Field field = inv.exact ? Field::exact : Field::f64;
    auto z1 = var(S.spec, order, "z1", field), z2 = var(S.spec, order, "z2", field), w = var(S.spec, order, "w", field);
    Scalar h(0, mpq_class(1, 2));
    auto zA1 = z1 * inv.alpha + z2 * inv.beta;
    auto zA2 = z1 * inv.beta - z2 * inv.alpha;
    return {
        z1 + w * zA1 * h + w * w * inv.nu[0],
        z2 + w * zA2 * h + w * w * inv.nu[1],
        w * inv.lambda + z1 * zA1 + z2 * zA2 + w * (z1 * inv.mu[0] + z2 * inv.mu[1]) + w * w * inv.sigma,
        w,
    };
}

std::string lop_name(LOp op)
{
    switch (op) {
        case LOp::L1:
            return "L1";
        case LOp::L2:
            return "L2";
        case LOp::T:
            return "T";
    }
    return "?";
}

Series apply_L_operators(const Series &expr, const std::vector<LOp> &word)
{
    Series s = expr;
    for (auto op : word) {
        if (op == LOp::T) {
            s = series_partial(s, "wb");
            continue;
        }
        const char *z = op == LOp::L1 ? "z1" : "z2";
        const char *zb = op == LOp::L1 ? "z1b" : "z2b";
        auto zv = var(s.spec(), s.order(), z, s.field());
        s = series_partial(s, zb) - zv * series_partial(s, "wb") * Scalar(0, 2);
    }
    return series_set_zero(s, {"z1b", "z2b", "wb"});
}

Series evaluate_on_segre(const Series &expr, const SeriesTuple &H, int order)
{
    const auto &S = src();
    Field field = field_of(H);
    std::map<std::string, Series> b;
    for (const auto &n : expr.spec()->names()) {
        if (n == "z1" || n == "z2") {
            b.emplace(n, var(S.spec, order, n, field));
            continue;
        }
        if (n == "z1b" || n == "z2b" || n == "wb") {
            b.emplace(n, Series(S.spec, order, field));
            continue;
        }
        auto us = n.find('_');
        std::string base = n.substr(0, us);
        int k = us == std::string::npos ? 0 : static_cast<int>(n.size() - us - 1);
        std::size_t j = 0;
        while (j < 4 && base != comp_names[j]) {
            ++j;
        }
        if (j == 4) {
            throw error("unknown symbol " + n + " in a mapping equation");
        }
        auto s = H[j].truncated(order);
        for (int d = 0; d < k; ++d) {
            s = series_partial(s, "w");
        }
        b.emplace(n, restrict_w0(s, order));
    }
    return series_substitute(expr, b, S.spec, order);
}

bool HIdentitySet::zero(double tol) const
{
    return first_nonzero(tol) < 0;
}

int HIdentitySet::first_nonzero(double tol) const
{
    for (int k = 0; k < 5; ++k) {
        const auto &s = h[static_cast<std::size_t>(k)];
        if (tol > 0 || s.field() == Field::f64 ? !s.is_zero_within(tol) : !s.is_zero()) {
            return k;
        }
    }
    return -1;
}

HIdentitySet h_identities(const SeriesTuple &H, const Scalar &alpha, const Scalar &beta, int order, bool printed_h1)
{
    const auto &S = src();
    Field field = field_of(H);
    auto T = tuple_truncated(H, order);
    auto psi = T[3] * T[2] + (T[0] * T[0] + T[1] * T[1]) * Scalar::i();
    std::array<Series, 5> u{T[0], T[1], T[2], T[3], psi};
    std::map<std::string, Series> b{{"a", cst(S.spec, order, alpha, field)}, {"b", cst(S.spec, order, beta, field)}};
    HIdentitySet out{{Series(S.spec, order, field), Series(S.spec, order, field), Series(S.spec, order, field),
                      Series(S.spec, order, field), Series(S.spec, order, field)}};
    for (std::size_t r = 0; r < 5; ++r) {
        Series acc(S.spec, order, field);
        for (std::size_t j = 0; j < 5; ++j) {
            const char *text = (printed_h1 && r == 0 && j == 3) ? h1_printed_g : h_rows[r][j];
            acc += expand_expr(parse_expr(text), b, S.spec, order, field) * u[j];
        }
        out.h[r] = acc.truncated(order);
    }
    return out;
}

HIdentitySet h_identities(const SeriesTuple &H, int order, bool printed_h1)
{
    auto j = jet_of(H);
    return h_identities(H, j.alpha, j.beta, order, printed_h1);
}

VarSpecPtr system_spec()
{
    static const VarSpecPtr spec = make_varspec({"z1", "z2", "w", "a", "b", "g", "Psi"}, {1, 1, 2, 1, 1, 1, 1});
    return spec;
}

LinearSystemResult solve_linear_system()
{
    return solve_impl(nullptr, nullptr);
}

LinearSystemResult solve_linear_system(const Scalar &alpha, const Scalar &beta)
{
    return solve_impl(&alpha, &beta);
}

CaseOneIdentities case1_identities()
{
    return case1_impl(nullptr, nullptr);
}

CaseOneIdentities case1_identities(const Scalar &alpha, const Scalar &beta)
{
    return case1_impl(&alpha, &beta);
}

MapDef reconstruct_case1(const Scalar &alpha, const Scalar &beta)
{
    auto m = ha_entry(alpha, beta).map;
    m.name = "H_A";
    return m;
}

RescaleWitness rescale_witness(const Scalar &alpha, const Scalar &beta, int order)
{
    if (!alpha.is_real() || !beta.is_real()) {
        throw error("rescale witness needs real (alpha, beta)");
    }
    if (!nonzero(alpha) && !nonzero(beta)) {
        throw error("rescale witness needs (alpha, beta) != (0, 0)");
    }
    RescaleWitness out;
    bool exact = alpha.is_exact() && beta.is_exact();
    HalfAngle h;
    std::optional<Scalar> scale, literal;
    if (exact) {
        try {
            h = half_angle(alpha, beta, true);
            scale = (h.rho * Scalar::rational(1, 2)).sqrt();
            literal = h.rho.sqrt();
            if (scale && literal) {
                // Products of distinct surds leave the field; probe them up front.
                (void)(*scale * h.c * *literal * h.s);
            }
        } catch (const field_error &) {
            scale.reset();
        }
        if (!scale || !literal) {
            exact = false;
        }
    }
    Field field = exact ? Field::exact : Field::f64;
    if (!exact) {
        h = half_angle(alpha.to_float(), beta.to_float(), false);
        double r = h.rho.to_complex().real();
        scale = Scalar(std::complex<double>(std::sqrt(r / 2), 0));
        literal = Scalar(std::complex<double>(std::sqrt(r), 0));
    }
    out.field = field;
    out.scale = *scale;
    out.cos_half = h.c;
    out.sin_half = h.s;
    auto H = expand_map(reconstruct_case1(alpha, beta), order, field);
    auto target = expand_map(catalog_get("r").map, order, field);
    auto run = [&](const Scalar &s, double &disc) {
        try {
            auto p = witness_pair(s, h);
            auto c = check_witness(p.gamma, p.psi, H, target, order, field);
            disc = c.discrepancy;
            return std::make_pair(c.ok, p);
        } catch (const field_error &) {
            auto hf = HalfAngle{h.rho.to_float(), h.c.to_float(), h.s.to_float()};
            auto p = witness_pair(s.to_float(), hf);
            auto Hf = expand_map(reconstruct_case1(alpha, beta), order, Field::f64);
            auto tf = expand_map(catalog_get("r").map, order, Field::f64);
            auto c = check_witness(p.gamma, p.psi, Hf, tf, order, Field::f64);
            disc = c.discrepancy;
            return std::make_pair(c.ok, p);
        }
    };
    auto main = run(*scale, out.discrepancy);
    out.verified = main.first;
    out.gamma = main.second.gamma;
    out.psi = main.second.psi;
    out.literal_verified = run(*literal, out.literal_discrepancy).first;
    return out;
}

CaseTwoObstruction case2_obstruction(const SeriesTuple &H)
{
    auto j = jet_of(H);
    if (!nonzero(j.lambda)) {
        throw error("Case-2 obstruction needs lambda != 0");
    }
    return obstruction(tuple_truncated(H, 6), j.lambda, j.alpha, j.beta);
}

CaseTwoObstruction case2_obstruction(const NormalFormInvariants &inv)
{
    if (!nonzero(inv.lambda)) {
        throw error("Case-2 obstruction needs lambda != 0");
    }
    return obstruction(normalized_jet(inv, 6), inv.lambda, inv.alpha, inv.beta);
}

} // namespace crmap
