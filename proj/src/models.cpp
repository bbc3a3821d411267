#include <crmap/error.hpp>
#include <crmap/models.hpp>

#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace crmap
{

namespace
{

HypersurfaceModel build(ModelId id, const char *rho, const char *level, int solved, std::vector<Scalar> base,
                        XConvention conv = XConvention::zeta_bar)
{
    const auto &a = ambient(id);
    HypersurfaceModel m;
    m.id = id;
    m.name = a.name;
    m.coords = a.coords;
    m.weights = a.weights;
    m.spec = make_complexified(a.coords, a.weights);
    std::vector<std::string> names = m.spec->names();
    std::vector<int> weights;
    std::vector<std::string> partners;
    for (std::size_t k = 0; k < m.spec->size(); ++k) {
        weights.push_back(m.spec->weight(k));
        partners.push_back(m.spec->name(static_cast<std::size_t>(m.spec->partner(k))));
    }
    names.push_back("u");
    weights.push_back(solved >= 0 ? a.weights[static_cast<std::size_t>(solved)] : 1);
    partners.push_back("");
    m.spec_u = make_varspec(names, weights, partners);
    if (rho != nullptr) {
        m.rho = parse_expr(rho);
    }
    if (level != nullptr) {
        m.level_set = parse_expr(level);
        m.solved = static_cast<std::size_t>(solved);
    }
    m.base_point = base.empty() ? std::vector<Scalar>(a.coords.size()) : std::move(base);
    m.convention = conv;
    return m;
}

const char *x_rho(XConvention c)
{
    return c == XConvention::zeta_bar
               ? "(1-zeta*zetab)*(w-wb)/(2*i)-z1*z1b-z2*z2b-(zetab*(z1^2+z2^2)+zeta*(z1b^2+z2b^2))/2"
               : "(1-zeta*zetab)*(w-wb)/(2*i)-z1*z1b-z2*z2b-(zeta*(z1^2+z2^2)+zetab*(z1b^2+z2b^2))/2";
}

const char *x_level(XConvention c)
{
    return c == XConvention::zeta_bar
               ? "wb+2*i*(z1*z1b+z2*z2b+(zetab*(z1^2+z2^2)+zeta*(z1b^2+z2b^2))/2+u)/(1-zeta*zetab)"
               : "wb+2*i*(z1*z1b+z2*z2b+(zeta*(z1^2+z2^2)+zetab*(z1b^2+z2b^2))/2+u)/(1-zeta*zetab)";
}

struct Registry {
    std::map<ModelId, HypersurfaceModel> models;
    HypersurfaceModel x_zeta;

    Registry()
    {
        const char *h5_rho = "(w-wb)/(2*i)-z1*z1b-z2*z2b";
        const char *h5_level = "wb+2*i*(z1*z1b+z2*z2b+u)";
        models.emplace(ModelId::H5, build(ModelId::H5, h5_rho, h5_level, 2, {}));
        models.emplace(ModelId::SIEGEL, build(ModelId::SIEGEL, h5_rho, h5_level, 2, {}));
        models.emplace(ModelId::X, build(ModelId::X, x_rho(XConvention::zeta_bar), x_level(XConvention::zeta_bar), 3,
                                         {}, XConvention::zeta_bar));
        x_zeta = build(ModelId::X, x_rho(XConvention::zeta), x_level(XConvention::zeta), 3, {}, XConvention::zeta);
        x_zeta.name = "X[zeta]";
        models.emplace(ModelId::T,
                       build(ModelId::T, "((z1+z1b)/2)^2+((z2+z2b)/2)^2+((z3+z3b)/2)^2-((w+wb)/2)^2",
                             "-wb+sqrt((z1+z1b)^2+(z2+z2b)^2+(z3+z3b)^2-4*u)", 3,
                             {Scalar(), Scalar(), Scalar::rational(-1, 2), Scalar::rational(1, 2)}));
        models.emplace(ModelId::S5, build(ModelId::S5, "z1*z1b+z2*z2b+w*wb-1", "(1+u-z1*z1b-z2*z2b)/wb", 2,
                                          {Scalar(), Scalar(), Scalar(1)}));
        models.emplace(ModelId::DIV4,
                       build(ModelId::DIV4,
                             "1-2*(z1*z1b+z2*z2b+z3*z3b+z4*z4b)+(z1^2+z2^2+z3^2+z4^2)*(z1b^2+z2b^2+z3b^2+z4b^2)",
                             nullptr, -1, {Scalar(), Scalar(), Scalar::rational(1, 2), Scalar(0, mpq_class(1, 2))}));
        models.emplace(ModelId::HYP1, build(ModelId::HYP1, "(y5-y5b)/(2*i)-y1*y1b-y2*y2b-y3*y3b+y4*y4b",
                                            "y5b+2*i*(y1*y1b+y2*y2b+y3*y3b-y4*y4b+u)", 4, {}));
        models.emplace(ModelId::C3, build(ModelId::C3, nullptr, nullptr, -1, {}));
        models.emplace(ModelId::C4, build(ModelId::C4, nullptr, nullptr, -1, {}));
    }
};

const Registry &registry()
{
    static const Registry r;
    return r;
}

Scalar in_field(const Scalar &c, Field f)
{
    return f == Field::f64 ? c.to_float() : c;
}

// Bindings coordinate -> base + local coordinate (and conjugates when asked).
std::map<std::string, Series> local_bindings(const HypersurfaceModel &m, const std::vector<Scalar> &base,
                                             const VarSpecPtr &spec, int order, Field field, bool conj)
{
    std::map<std::string, Series> b;
    for (std::size_t k = 0; k < m.coords.size(); ++k) {
        const auto &c = m.coords[k];
        b.emplace(c, Series::variable(spec, order, c, field) + in_field(base[k], field));
        if (conj) {
            b.emplace(c + "b", Series::variable(spec, order, c + "b", field) + in_field(base[k].conj(), field));
        }
    }
    return b;
}

} // namespace

std::vector<std::string> HypersurfaceModel::conj_coords() const
{
    std::vector<std::string> out;
    for (const auto &c : coords) {
        out.push_back(c + "b");
    }
    return out;
}

const HypersurfaceModel &model(ModelId id)
{
    return registry().models.at(id);
}

const HypersurfaceModel &x_model(XConvention c)
{
    return c == XConvention::zeta_bar ? model(ModelId::X) : registry().x_zeta;
}

std::vector<Scalar> resolved_base(const MapDef &H)
{
    return H.base.empty() ? model(H.source).base_point : H.base;
}

Point to_point(const std::vector<Scalar> &v)
{
    Point p;
    for (const auto &s : v) {
        p.push_back(s.to_complex());
    }
    return p;
}

SeriesTuple expand_map(const MapDef &H, int order, Field field)
{
    const auto &S = model(H.source);
    auto b = local_bindings(S, resolved_base(H), S.spec, order, field, false);
    SeriesTuple out;
    for (const auto &c : H.components) {
        out.push_back(expand_expr(c, b, S.spec, order, field));
    }
    return out;
}

Residual make_residual(Series s)
{
    Residual r{s, s.order(), std::nullopt, std::nullopt};
    if (auto t = s.lowest_term()) {
        r.first_term = t;
        r.min_violating_order = s.degree(t->first);
    }
    return r;
}

Series level_set_series(const HypersurfaceModel &S, int order, Field field, bool with_u)
{
    if (!S.level_set) {
        throw model_error("model " + S.name + " has no Segre substitution rule");
    }
    const auto &spec = with_u ? S.spec_u : S.spec;
    auto b = local_bindings(S, S.base_point, spec, order, field, true);
    b.emplace("u", with_u ? Series::variable(spec, order, "u", field) : Series(spec, order, field));
    auto abs = expand_expr(S.level_set, b, spec, order, field);
    return abs - in_field(S.base_point[*S.solved], field);
}

Series compose_rho(const HypersurfaceModel &T, const SeriesTuple &hol, const SeriesTuple &conj, int order, Field field)
{
    if (!T.rho) {
        throw model_error("model " + T.name + " has no defining function");
    }
    if (hol.size() != T.coords.size() || conj.size() != T.coords.size()) {
        throw error("map arity does not match target " + T.name);
    }
    std::map<std::string, Series> b;
    for (std::size_t k = 0; k < T.coords.size(); ++k) {
        b.emplace(T.coords[k], hol[k]);
        b.emplace(T.coords[k] + "b", conj[k]);
    }
    return expand_expr(T.rho, b, hol[0].spec(), order, field);
}

Residual mapping_residual(const MapDef &H, int order, Field field, const HypersurfaceModel *target)
{
    const auto &S = model(H.source);
    const auto &T = target != nullptr ? *target : model(H.target);
    if (!S.level_set) {
        throw model_error("source " + S.name + " has no Segre substitution rule");
    }
    auto base = resolved_base(H);
    // H is expanded at the base point of H, which must be the model base for the Segre rule.
    HypersurfaceModel Sb = S;
    Sb.base_point = base;
    auto seg = level_set_series(Sb, order, field, false);
    auto hb = local_bindings(S, base, S.spec, order, field, false);
    auto sb = hb;
    const auto &sname = S.coords[*S.solved];
    sb.erase(sname);
    sb.emplace(sname, seg + in_field(base[*S.solved], field));
    SeriesTuple hs, hc;
    for (const auto &c : H.components) {
        hs.push_back(expand_expr(c, sb, S.spec, order, field));
        hc.push_back(series_conjugate(expand_expr(c, hb, S.spec, order, field)));
    }
    return make_residual(compose_rho(T, hs, hc, order, field));
}

Residual mapping_residual(const SeriesTuple &H, const HypersurfaceModel &S, const HypersurfaceModel &T, int order)
{
    Field field = Field::exact;
    for (const auto &h : H) {
        if (h.field() == Field::f64) {
            field = Field::f64;
        }
    }
    auto seg = level_set_series(S, order, field, false);
    auto hs = tuple_substitute(H, {{S.coords[*S.solved], seg}}, S.spec, order);
    SeriesTuple hc;
    for (const auto &h : H) {
        hc.push_back(series_conjugate(h.truncated(order)));
    }
    return make_residual(compose_rho(T, hs, hc, order, field));
}

namespace
{

Transversality judge(const Scalar &gw, double tol)
{
    if (gw.is_exact()) {
        return {gw.is_real() && gw.sign() > 0, gw};
    }
    auto z = gw.to_complex();
    return {std::abs(z.imag()) <= tol && z.real() > tol, gw};
}

} // namespace

Transversality transversality_at_origin(const SeriesTuple &H, double tol)
{
    for (const auto &h : H) {
        if (std::abs(h.constant_term().to_complex()) > tol || (h.field() == Field::exact && !h.constant_term().is_zero())) {
            throw error("transversality test needs H(0) = 0");
        }
    }
    const auto &g = H.back();
    Monomial m;
    m.e[g.spec()->size() / 2 - 1] = 1;
    return judge(g.coeff(m), tol);
}

Transversality transversality_at_origin(const MapDef &H, Field field, double tol)
{
    return transversality_at_origin(expand_map(H, 2, field), tol);
}

namespace
{

std::complex<double> disc(std::mt19937_64 &rng, double r)
{
    std::uniform_real_distribution<double> u(0, 1);
    double rad = r * std::sqrt(u(rng));
    double th = 2 * std::numbers::pi * u(rng);
    return std::polar(rad, th);
}

double sym(std::mt19937_64 &rng, double r)
{
    return std::uniform_real_distribution<double>(-r, r)(rng);
}

Point ball(std::mt19937_64 &rng, std::size_t n, double r)
{
    std::normal_distribution<double> g;
    Point v(n);
    double norm = 0;
    for (auto &x : v) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    double s = r * std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 1.0 / (2.0 * double(n))) / std::sqrt(norm);
    for (auto &x : v) {
        x *= s;
    }
    return v;
}

Point sample_one(const HypersurfaceModel &m, std::mt19937_64 &rng, double r, const Point &b)
{
    const std::complex<double> I(0, 1);
    switch (m.id) {
        case ModelId::H5:
        case ModelId::SIEGEL: {
            auto z1 = b[0] + disc(rng, r), z2 = b[1] + disc(rng, r);
            double t = b[2].real() + sym(rng, r);
            return {z1, z2, t + I * (std::norm(z1) + std::norm(z2))};
        }
        case ModelId::X: {
            auto z1 = b[0] + disc(rng, r), z2 = b[1] + disc(rng, r), zeta = b[2] + disc(rng, r);
            double t = b[3].real() + sym(rng, r);
            auto F = z1 * z1 + z2 * z2;
            auto c = m.convention == XConvention::zeta_bar ? std::conj(zeta) * F : zeta * F;
            double h = (std::norm(z1) + std::norm(z2) + c.real()) / (1 - std::norm(zeta));
            return {z1, z2, zeta, t + I * h};
        }
        case ModelId::T: {
            double x1 = b[0].real() + sym(rng, r), x2 = b[1].real() + sym(rng, r), x3 = b[2].real() + sym(rng, r);
            double x4 = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
            return {x1 + I * (b[0].imag() + sym(rng, r)), x2 + I * (b[1].imag() + sym(rng, r)),
                    x3 + I * (b[2].imag() + sym(rng, r)), x4 + I * (b[3].imag() + sym(rng, r))};
        }
        case ModelId::S5: {
            auto v = ball(rng, 3, r);
            double n = 0;
            for (std::size_t k = 0; k < 3; ++k) {
                v[k] += b[k];
                n += std::norm(v[k]);
            }
            for (auto &x : v) {
                x /= std::sqrt(n);
            }
            return v;
        }
        case ModelId::DIV4: {
            auto v = ball(rng, 4, r);
            double a = 0;
            std::complex<double> q = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                v[k] += b[k];
                a += std::norm(v[k]);
                q += v[k] * v[k];
            }
            double bb = std::norm(q);
            double s = 1 / (a + std::sqrt(std::max(a * a - bb, 0.0)));
            for (auto &x : v) {
                x *= std::sqrt(s);
            }
            return v;
        }
        case ModelId::HYP1: {
            Point y(5);
            double h = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                y[k] = b[k] + disc(rng, r);
                h += (k == 3 ? -1 : 1) * std::norm(y[k]);
            }
            y[4] = b[4].real() + sym(rng, r) + I * h;
            return y;
        }
        default:
            throw model_error("model " + m.name + " has no sampler");
    }
}

} // namespace

std::vector<Point> sample_points(const HypersurfaceModel &m, std::size_t count, std::uint64_t seed, double radius,
                                 const Point *base)
{
    if (count == 0) {
        throw error("sample count must be positive");
    }
    Point b = base != nullptr ? *base : to_point(m.base_point);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k)};
        std::mt19937_64 rng(seq);
        out.push_back(sample_one(m, rng, radius, b));
    }
    return out;
}

std::vector<Point> sample_points(ModelId m, std::size_t count, std::uint64_t seed, double radius, const Point *base)
{
    return sample_points(model(m), count, seed, radius, base);
}

std::complex<double> eval_rho(const HypersurfaceModel &m, const Point &p)
{
    if (!m.rho) {
        throw model_error("model " + m.name + " has no defining function");
    }
    std::map<std::string, std::complex<double>> v;
    for (std::size_t k = 0; k < m.coords.size(); ++k) {
        v[m.coords[k]] = p[k];
        v[m.coords[k] + "b"] = std::conj(p[k]);
    }
    return eval_numeric(m.rho, v);
}

Point eval_map(const MapDef &H, const Point &p)
{
    const auto &coords = ambient(H.source).coords;
    std::map<std::string, std::complex<double>> v;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        v[coords[k]] = p[k];
    }
    Point out;
    for (const auto &c : H.components) {
        out.push_back(eval_numeric(c, v));
    }
    return out;
}

BoundaryReport numeric_boundary_check(const MapDef &H, ModelId source, ModelId target, std::size_t count,
                                      std::uint64_t seed, double tol, double radius,
                                      const HypersurfaceModel *target_model)
{
    const auto &S = model(source);
    const auto &T = target_model != nullptr ? *target_model : model(target);
    Point base = to_point(resolved_base(H));
    BoundaryReport rep;
    rep.seed = seed;
    rep.tol = tol;
    for (const auto &p : sample_points(S, count, seed, radius, &base)) {
        try {
            auto q = eval_map(H, p);
            double r = std::abs(eval_rho(T, q));
            if (!std::isfinite(r)) {
                ++rep.excluded;
                continue;
            }
            rep.max_residual = std::max(rep.max_residual, r);
            ++rep.points_used;
        } catch (const singular_point &) {
            ++rep.excluded;
        }
    }
    rep.pass = rep.points_used > 0 && rep.max_residual <= tol;
    return rep;
}

bool rho_is_real(const HypersurfaceModel &m, int order)
{
    auto s = expand_expr(m.rho, m.spec, order);
    return series_conjugate(s) == s;
}

bool level_set_annihilates_rho(const HypersurfaceModel &m, int order)
{
    auto seg = level_set_series(m, order, Field::exact, false);
    SeriesTuple hol, conj;
    for (std::size_t k = 0; k < m.coords.size(); ++k) {
        auto x = Series::variable(m.spec, order, m.coords[k]) + m.base_point[k];
        if (k == *m.solved) {
            x = seg + m.base_point[k];
        }
        hol.push_back(x);
        conj.push_back(Series::variable(m.spec, order, m.coords[k] + "b") + m.base_point[k].conj());
    }
    return compose_rho(m, hol, conj, order, Field::exact).is_zero();
}

} // namespace crmap
