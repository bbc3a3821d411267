#include <crmap/autgroups.hpp>
#include <crmap/catalog.hpp>
#include <crmap/error.hpp>

#include <cmath>
#include <map>
#include <random>

namespace crmap
{

namespace
{

ExprPtr k(const Scalar &c)
{
    return expr_constant(c);
}

MapDef build(const std::string &name, ModelId m, const std::vector<const char *> &texts,
             const std::map<std::string, ExprPtr> &params)
{
    MapDef out;
    out.name = name;
    out.source = m;
    out.target = m;
    for (const auto *t : texts) {
        out.components.push_back(fold_constants(expr_substitute(parse_expr(t), params)));
    }
    validate_mapdef(out);
    return out;
}

bool near_one(const Scalar &x, double tol)
{
    return x.is_exact() ? x == Scalar(1) : approx_equal(x, Scalar(1), tol);
}

bool real_scalar(const Scalar &x, double tol)
{
    return x.is_exact() ? x.is_real() : std::abs(x.to_complex().imag()) <= tol;
}

bool positive(const Scalar &x, double tol)
{
    return real_scalar(x, tol) && (x.is_exact() ? x.sign() > 0 : x.to_complex().real() > tol);
}

// Gauss-Jordan inverse over the scalar field.
std::vector<std::vector<Scalar>> invert_matrix(std::vector<std::vector<Scalar>> a)
{
    std::size_t n = a.size();
    std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        double best = 0;
        for (std::size_t r = col; r < n; ++r) {
            double m = std::abs(a[r][col].to_complex());
            if (!a[r][col].is_zero() && m > best) {
                best = m;
                piv = r;
            }
        }
        if (piv == n || (!a[piv][col].is_exact() && best < 1e-14)) {
            throw error("automorphism has a singular linear part");
        }
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Scalar p = Scalar(1) / a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] = a[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) {
                continue;
            }
            Scalar f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] = a[r][j] - f * a[col][j];
                inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

Scalar rat(std::mt19937_64 &rng, int lo, int hi, int den)
{
    return Scalar::rational(std::uniform_int_distribution<int>(lo, hi)(rng), den);
}

// (1 - t^2 + 2 i t) / (1 + t^2), unimodular for rational t.
Scalar unimodular(const Scalar &t)
{
    return (Scalar(1) - t * t + Scalar(0, 2) * t) / (Scalar(1) + t * t);
}

} // namespace

std::string variant_name(TargetVariant v)
{
    switch (v) {
        case TargetVariant::corrected:
            return "corrected";
        case TargetVariant::printed:
            return "printed";
        case TargetVariant::corrected_conj_delta:
            return "corrected, aa^t in delta";
        case TargetVariant::printed_conj_delta:
            return "printed, aa^t in delta";
    }
    return "?";
}

const std::vector<TargetVariant> &all_target_variants()
{
    static const std::vector<TargetVariant> v = {TargetVariant::corrected, TargetVariant::printed,
                                                 TargetVariant::corrected_conj_delta,
                                                 TargetVariant::printed_conj_delta};
    return v;
}

void validate(const SourceAutParams &p, double tol)
{
    if (!positive(p.s, tol)) {
        throw error("source automorphism needs s > 0");
    }
    if (!near_one(p.u.abs2(), tol)) {
        throw error("source automorphism needs |u| = 1");
    }
    if (!near_one(p.a.abs2() + p.b.abs2(), tol)) {
        throw error("source automorphism needs |a|^2 + |b|^2 = 1");
    }
    if (!real_scalar(p.r, tol)) {
        throw error("source automorphism needs real r");
    }
}

void validate(const TargetAutParams &p, double tol)
{
    if (!positive(p.s, tol)) {
        throw error("target automorphism needs s' > 0");
    }
    if (!near_one(p.u.abs2(), tol)) {
        throw error("target automorphism needs |u'| = 1");
    }
    if (!real_scalar(p.r, tol)) {
        throw error("target automorphism needs real r'");
    }
    if (!real_scalar(p.pc, tol) || !real_scalar(p.ps, tol) || !near_one(p.pc * p.pc + p.ps * p.ps, tol)) {
        throw error("target automorphism needs an orthogonal P");
    }
}

MapDef source_aut(const SourceAutParams &p)
{
    validate(p);
    std::map<std::string, ExprPtr> m = {
        {"s", k(p.s)},          {"u", k(p.u)},          {"a", k(p.a)},          {"ab", k(p.a.conj())},
        {"b", k(p.b)},          {"bb", k(p.b.conj())},  {"c1", k(p.c[0])},      {"c2", k(p.c[1])},
        {"c1b", k(p.c[0].conj())}, {"c2b", k(p.c[1].conj())}, {"r", k(p.r)},
    };
    const char *delta = "(1-2*i*(z1*c1b+z2*c2b)+(r-i*(c1*c1b+c2*c2b))*w)";
    std::string f1 = std::string("s*((z1+c1*w)*u*a+(z2+c2*w)*bb)/") + delta;
    std::string f2 = std::string("s*((z1+c1*w)*(0-u*b)+(z2+c2*w)*ab)/") + delta;
    std::string g = std::string("s^2*w/") + delta;
    return build("psi", ModelId::H5, {f1.c_str(), f2.c_str(), g.c_str()}, m);
}

MapDef target_aut(const TargetAutParams &p, TargetVariant v)
{
    validate(p);
    Scalar p11 = p.pc, p12 = -p.ps, p21 = p.ps, p22 = p.pc;
    if (p.reflect) {
        p12 = -p12;
        p22 = -p22;
    }
    std::map<std::string, ExprPtr> m = {
        {"s", k(p.s)},           {"u", k(p.u)},           {"a1", k(p.a[0])},  {"a2", k(p.a[1])},
        {"a1b", k(p.a[0].conj())}, {"a2b", k(p.a[1].conj())}, {"r", k(p.r)},      {"p11", k(p11)},
        {"p12", k(p12)},         {"p21", k(p21)},         {"p22", k(p22)},
    };
    bool conj_delta = v == TargetVariant::corrected_conj_delta || v == TargetVariant::printed_conj_delta;
    bool corrected = v == TargetVariant::corrected || v == TargetVariant::corrected_conj_delta;
    std::string q = "(w*zeta+i*(z1^2+z2^2))";
    std::string delta = "(1-(r+i*(a1*a1b+a2*a2b))*w-2*i*(z1*a1b+z2*a2b)+i*" +
                        std::string(conj_delta ? "(a1^2+a2^2)" : "(a1b^2+a2b^2)") + "*" + q + ")";
    std::string e1 = "(z1+w*a1-" + q + "*a1b)";
    std::string e2 = "(z2+w*a2-" + q + "*a2b)";
    std::string f1 = "s*u*(" + e1 + "*p11+" + e2 + "*p21)/" + delta;
    std::string f2 = "s*u*(" + e1 + "*p12+" + e2 + "*p22)/" + delta;
    std::string phi = "u^2*(zeta-2*" + std::string(corrected ? "i*" : "") +
                      "(z1*a1+z2*a2)-i*(a1^2+a2^2)*w-(r-i*(a1b*a1+a2b*a2))*" + q + ")/" + delta;
    std::string g = "s^2*w/" + delta;
    return build("gamma", ModelId::X, {f1.c_str(), f2.c_str(), phi.c_str(), g.c_str()}, m);
}

MapDef target_scaling(const Scalar &t, const Scalar &pc, const Scalar &ps)
{
    TargetAutParams p;
    p.s = t;
    p.pc = pc;
    p.ps = ps;
    auto m = target_aut(p);
    m.name = "scaling";
    return m;
}

MapDef aut_from_def(const AutDef &d)
{
    std::map<std::string, Scalar> v;
    for (const auto &[key, e] : d.params) {
        auto f = fold_constants(e);
        if (f->kind != ExprKind::constant) {
            throw error("aut " + d.name + ": parameter " + key + " is not constant");
        }
        v[key] = f->value;
    }
    auto take = [&](const char *key, Scalar dflt) {
        auto it = v.find(key);
        if (it == v.end()) {
            return dflt;
        }
        Scalar out = it->second;
        v.erase(it);
        return out;
    };
    MapDef out;
    if (d.model == ModelId::H5) {
        SourceAutParams p;
        p.s = take("s", 1);
        p.u = take("u", 1);
        p.a = take("a", 1);
        p.b = take("b", 0);
        p.c = {take("c1", 0), take("c2", 0)};
        p.r = take("r", 0);
        out = source_aut(p);
    } else if (d.model == ModelId::X) {
        TargetAutParams p;
        p.s = take("s", 1);
        p.u = take("u", 1);
        p.a = {take("a1", 0), take("a2", 0)};
        p.r = take("r", 0);
        p.pc = take("pc", 1);
        p.ps = take("ps", 0);
        p.reflect = !take("reflect", 0).is_zero();
        out = target_aut(p);
    } else {
        throw error("aut " + d.name + ": no stability group for model " + ambient(d.model).name);
    }
    if (!v.empty()) {
        throw error("aut " + d.name + ": unknown parameter " + v.begin()->first);
    }
    out.name = d.name;
    return out;
}

std::vector<VariantCheck> check_target_variants(int order)
{
    TargetAutParams p;
    p.s = Scalar::rational(3, 2);
    p.u = Scalar(mpq_class(3, 5), mpq_class(4, 5));
    p.a = {Scalar::rational(1, 2), Scalar(mpq_class(1, 3), mpq_class(1, 3))};
    p.r = Scalar::rational(1, 3);
    p.pc = Scalar::rational(3, 5);
    p.ps = Scalar::rational(4, 5);
    std::vector<VariantCheck> out;
    for (auto v : all_target_variants()) {
        auto res = mapping_residual(target_aut(p, v), order);
        out.push_back({v, res.zero(), res.min_violating_order});
    }
    return out;
}

SeriesTuple invert_series(const SeriesTuple &H, int order)
{
    if (H.empty()) {
        throw error("cannot invert an empty map");
    }
    const auto &spec = H[0].spec();
    std::size_t n = H.size();
    // Holomorphic coordinates are the first n variables of the spec.
    std::vector<std::vector<Scalar>> J(n, std::vector<Scalar>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!H[i].constant_term().is_zero() && std::abs(H[i].constant_term().to_complex()) > 1e-13) {
            throw error("inversion needs a map fixing the origin");
        }
        for (std::size_t j = 0; j < n; ++j) {
            Monomial m;
            m.e[j] = 1;
            J[i][j] = H[i].coeff(m);
        }
    }
    auto L = invert_matrix(J);
    auto apply = [&](const SeriesTuple &v) {
        SeriesTuple out;
        for (std::size_t i = 0; i < n; ++i) {
            Series s(spec, order, H[0].field());
            for (std::size_t j = 0; j < n; ++j) {
                if (!L[i][j].is_zero()) {
                    s += v[j] * L[i][j];
                }
            }
            out.push_back(s);
        }
        return out;
    };
    SeriesTuple y;
    for (std::size_t j = 0; j < n; ++j) {
        y.push_back(Series::variable(spec, order, spec->name(j), H[0].field()));
    }
    auto x = apply(y);
    for (int it = 0; it <= order; ++it) {
        std::map<std::string, Series> b;
        for (std::size_t j = 0; j < n; ++j) {
            b.emplace(spec->name(j), x[j]);
        }
        auto hx = tuple_substitute(H, b, spec, order);
        SeriesTuple diff;
        bool done = true;
        for (std::size_t j = 0; j < n; ++j) {
            diff.push_back(y[j] - hx[j]);
            if (H[0].field() == Field::exact ? !diff.back().is_zero() : !diff.back().is_zero_within(1e-14)) {
                done = false;
            }
        }
        if (done) {
            break;
        }
        auto corr = apply(diff);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] += corr[j];
        }
    }
    return x;
}

SeriesTuple invert_aut(const MapDef &aut, int order, Field field)
{
    return invert_series(expand_map(aut, order, field), order);
}

MapDef heisenberg_from_origin(const std::vector<Scalar> &p)
{
    std::map<std::string, ExprPtr> m = {{"x1", k(p[0])}, {"x2", k(p[1])}, {"x3", k(p[2])},
                                        {"x1b", k(p[0].conj())}, {"x2b", k(p[1].conj())}};
    auto out = build("tau_inv", ModelId::H5, {"z1+x1", "z2+x2", "w+x3+2*i*(z1*x1b+z2*x2b)"}, m);
    return out;
}

MapDef translate_to_origin(ModelId id, const std::vector<Scalar> &p, double tol)
{
    const auto &M = model(id);
    if (p.size() != M.coords.size()) {
        throw error("point has the wrong dimension for " + M.name);
    }
    bool exact = true;
    for (const auto &x : p) {
        exact = exact && x.is_exact();
    }
    if (id == ModelId::H5 || id == ModelId::SIEGEL) {
        Scalar rho = (p[2] - p[2].conj()) / Scalar(0, 2) - p[0].abs2() - p[1].abs2();
        if (exact ? !rho.is_zero() : std::abs(rho.to_complex()) > tol) {
            throw error("point is not on " + M.name);
        }
        std::map<std::string, ExprPtr> m = {{"x1", k(p[0])}, {"x2", k(p[1])}, {"x3", k(p[2])},
                                            {"x1b", k(p[0].conj())}, {"x2b", k(p[1].conj())}};
        return build("tau", id, {"z1-x1", "z2-x2", "w-x3-2*i*((z1-x1)*x1b+(z2-x2)*x2b)"}, m);
    }
    if (id != ModelId::X) {
        throw error("no transitive family stored for " + M.name);
    }
    auto pt = to_point(p);
    if (std::abs(eval_rho(M, pt)) > tol) {
        throw error("point is not on " + M.name);
    }
    if (std::abs(pt[2]) >= 1 || std::abs(1.0 + pt[2]) < 1e-8) {
        throw error("point outside the domain of the stored translations of " + M.name);
    }
    auto G = catalog_get("G").map;
    auto F = catalog_get("F").map;
    auto q = eval_map(G, pt);
    std::array<double, 3> x{q[0].real(), q[1].real(), q[2].real()};
    double len = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (len < 1e-12) {
        throw error("point maps to the cone vertex");
    }
    std::array<double, 3> a{x[0] / len, x[1] / len, x[2] / len}, e{0, 0, -1};
    // Rotation taking a to e (Rodrigues).
    std::array<std::array<double, 3>, 3> R{};
    double c = a[0] * e[0] + a[1] * e[1] + a[2] * e[2];
    if (c < -1 + 1e-12) {
        R = {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
    } else {
        std::array<double, 3> v{a[1] * e[2] - a[2] * e[1], a[2] * e[0] - a[0] * e[2], a[0] * e[1] - a[1] * e[0]};
        std::array<std::array<double, 3>, 3> K{{{0, -v[2], v[1]}, {v[2], 0, -v[0]}, {-v[1], v[0], 0}}};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double k2 = 0;
                for (int l = 0; l < 3; ++l) {
                    k2 += K[i][l] * K[l][j];
                }
                R[i][j] = (i == j ? 1.0 : 0.0) + K[i][j] + k2 / (1 + c);
            }
        }
    }
    double lam = 1 / (2 * len);
    const auto &tc = ambient(ModelId::T).coords;
    std::vector<ExprPtr> Aexpr;
    for (int i = 0; i < 4; ++i) {
        ExprPtr s = k(Scalar(0));
        for (int j = 0; j < 4; ++j) {
            double rij = (i < 3 && j < 3) ? R[i][j] : (i == 3 && j == 3 ? 1.0 : 0.0);
            if (rij == 0) {
                continue;
            }
            auto shifted = expr_binary(ExprKind::sub, expr_variable(tc[j]),
                                       k(Scalar(std::complex<double>(0, q[j].imag()))));
            s = expr_binary(ExprKind::add, s,
                            expr_binary(ExprKind::mul, k(Scalar(std::complex<double>(lam * rij, 0))), shifted));
        }
        Aexpr.push_back(s);
    }
    std::map<std::string, ExprPtr> g;
    for (std::size_t j = 0; j < 4; ++j) {
        g[tc[j]] = G.components[j];
    }
    std::map<std::string, ExprPtr> ag;
    for (std::size_t j = 0; j < 4; ++j) {
        ag[tc[j]] = expr_substitute(Aexpr[j], g);
    }
    MapDef out;
    out.name = "tau";
    out.source = ModelId::X;
    out.target = ModelId::X;
    for (const auto &f : F.components) {
        out.components.push_back(expr_substitute(f, ag));
    }
    validate_mapdef(out);
    return out;
}

SourceAutParams random_source_params(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    SourceAutParams p;
    p.s = rat(rng, 3, 6, 4);
    p.u = unimodular(rat(rng, -2, 2, 3));
    Scalar x1 = rat(rng, -2, 2, 5), x2 = rat(rng, -2, 2, 5), x3 = rat(rng, -2, 2, 5);
    Scalar nn = x1 * x1 + x2 * x2 + x3 * x3;
    Scalar den = Scalar(1) + nn;
    p.a = ((Scalar(1) - nn) + Scalar::i() * Scalar(2) * x1) / den;
    p.b = (Scalar(2) * x2 + Scalar::i() * Scalar(2) * x3) / den;
    p.c = {Scalar(mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4),
                  mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4)),
           Scalar(mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4),
                  mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4))};
    p.r = rat(rng, -2, 2, 3);
    return p;
}

TargetAutParams random_target_params(std::uint64_t seed)
{
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    TargetAutParams p;
    p.s = rat(rng, 3, 6, 4);
    p.u = unimodular(rat(rng, -2, 2, 3));
    p.a = {Scalar(mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4),
                  mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4)),
           Scalar(mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4),
                  mpq_class(std::uniform_int_distribution<int>(-2, 2)(rng), 4))};
    p.r = rat(rng, -2, 2, 3);
    Scalar t = rat(rng, -2, 2, 3);
    p.pc = (Scalar(1) - t * t) / (Scalar(1) + t * t);
    p.ps = Scalar(2) * t / (Scalar(1) + t * t);
    p.reflect = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    return p;
}

} // namespace crmap
