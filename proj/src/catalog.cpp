#include <crmap/catalog.hpp>
#include <crmap/error.hpp>

#include <map>
#include <sstream>

namespace crmap
{

namespace
{

struct Template {
    const char *name;
    ModelId source;
    ModelId target;
    std::vector<const char *> components;
    std::vector<Scalar> base;
    const char *reference;
};

Scalar q(long p, long d = 1)
{
    return Scalar::rational(p, d);
}

const std::vector<Template> &templates()
{
    static const std::vector<Template> t = {
        {"ell", ModelId::H5, ModelId::X, {"z1", "z2", "0", "w"}, {}, "linear embedding"},
        {"r",
         ModelId::H5,
         ModelId::X,
         {"z1*(1+i*w)/(1-w^2)", "z2*(1-i*w)/(1-w^2)", "2*(z1^2-z2^2)/(1-w^2)", "w/(1-w^2)"},
         {},
         "rational embedding, A = diag(1,-1)"},
        {"iota",
         ModelId::H5,
         ModelId::X,
         {"2*z1/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))", "2*z2/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))",
          "2*w/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))", "2*w/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))"},
         {},
         "irrational embedding"},
        {"F",
         ModelId::T,
         ModelId::X,
         {"2*z1/(1+w-z3)", "2*z2/(1+w-z3)", "(1-w+z3)/(1+w-z3)", "2*i*(w+w^2-(z1^2+z2^2)+z3-z3^2)/(1+w-z3)"},
         {},
         "light cone tube to the local model"},
        {"G",
         ModelId::X,
         ModelId::T,
         {"z1/(1+zeta)", "z2/(1+zeta)", "(-2+z1^2+z2^2+2*zeta-i*w*(1+zeta))/(4*(1+zeta))",
          "(2+z1^2+z2^2-2*zeta-i*w*(1+zeta))/(4*(1+zeta))"},
         {},
         "local inverse of F"},
        {"T1",
         ModelId::H5,
         ModelId::T,
         {"z1", "z2", "(z1^2+z2^2-i*w-2)/4", "(z1^2+z2^2-i*w+2)/4"},
         {},
         "G composed with ell"},
        {"T2",
         ModelId::H5,
         ModelId::T,
         {"z1*(1+i*w)/(1-w^2+2*(z1^2-z2^2))", "z2*(1-i*w)/(1-w^2+2*(z1^2-z2^2))",
          "(2*w^2-i*w-2+5*z1^2-3*z2^2)/(4*(1-w^2+2*(z1^2-z2^2)))",
          "(2-2*w^2-i*w-3*z1^2+5*z2^2)/(4*(1-w^2+2*(z1^2-z2^2)))"},
         {},
         "G composed with r"},
        {"Phi",
         ModelId::X,
         ModelId::DIV4,
         {"2*i*z1/(2*i+w)", "2*i*z2/(2*i+w)", "(2*i-w-2*i*zeta-(w*zeta+i*(z1^2+z2^2)))/(2*(2*i+w))",
          "i*(2*i-w+2*i*zeta+(w*zeta+i*(z1^2+z2^2)))/(2*(2*i+w))"},
         {},
         "local model to the type IV boundary"},
        {"C1",
         ModelId::S5,
         ModelId::H5,
         {"sqrt(2)*z1/(1+w)", "sqrt(2)*z2/(1+w)", "2*i*(1-w)/(1+w)"},
         {q(0), q(0), q(1)},
         "modified Cayley transform"},
        {"C2",
         ModelId::S5,
         ModelId::SIEGEL,
         {"2*z1/(1-w)", "-2*z2/(1-w)", "4*i*(1+w)/(1-w)"},
         {q(0), q(0), q(-1)},
         "Cayley transform to the Siegel domain"},
        {"R0",
         ModelId::S5,
         ModelId::DIV4,
         {"z1/sqrt(2)", "z2/sqrt(2)", "(2*w^2+2*w-(z1^2+z2^2))/(4*(w+1))", "i*(2*w^2+2*w+(z1^2+z2^2))/(4*(w+1))"},
         {q(0), q(0), q(1)},
         "rational isometry of the ball"},
        {"I",
         ModelId::S5,
         ModelId::DIV4,
         {"z1/sqrt(2)", "z2/sqrt(2)", "w/sqrt(2)", "(1-sqrt(1-(z1^2+z2^2)-w^2))/sqrt(2)"},
         {q(0), q(0), Scalar::i()},
         "irrational isometry of the ball"},
        {"P",
         ModelId::S5,
         ModelId::DIV4,
         {"z1", "z2*w", "(w^2-z2^2)/2", "i*(w^2+z2^2)/2"},
         {q(0), q(0), q(-1)},
         "non-isometric quadratic map"},
        {"Psi",
         ModelId::X,
         ModelId::HYP1,
         {"z1", "z2", "(w*zeta+i*(z1^2+z2^2)+i*zeta)/2", "(w*zeta+i*(z1^2+z2^2)-i*zeta)/2", "w"},
         {},
         "local model to the indefinite hyperquadric"},
    };
    return t;
}

const char *ha_components[] = {
    "2*(2*z1+i*w*(a*z1+b*z2))/(4-(a^2+b^2)*w^2)",
    "2*(2*z2+i*w*(b*z1-a*z2))/(4-(a^2+b^2)*w^2)",
    "4*(z1*(a*z1+b*z2)+z2*(b*z1-a*z2))/(4-(a^2+b^2)*w^2)",
    "4*w/(4-(a^2+b^2)*w^2)",
};

const char *pb_components[] = {
    "z1+(w-1)*(c*z1+s*z2)*c",
    "z2+(w-1)*(c*z1+s*z2)*s",
    "(w^2-(c*z1+s*z2)^2)/2",
    "(w^2+(c*z1+s*z2)^2)/(2*i)",
};

bool has_sqrt(const ExprPtr &e)
{
    if (e->kind == ExprKind::sqrt) {
        return true;
    }
    for (const auto &a : e->args) {
        if (has_sqrt(a)) {
            return true;
        }
    }
    return false;
}

std::vector<Scalar> image_of(const MapDef &m)
{
    std::vector<Scalar> out;
    for (const auto &s : expand_map(m, 0)) {
        out.push_back(s.constant_term());
    }
    return out;
}

CatalogEntry finish(std::string name, ModelId src, ModelId tgt, std::vector<ExprPtr> comps, std::vector<Scalar> base,
                    std::string ref)
{
    CatalogEntry e;
    e.name = name;
    e.map.name = std::move(name);
    e.map.source = src;
    e.map.target = tgt;
    e.map.components = std::move(comps);
    e.map.base = base;
    validate_mapdef(e.map);
    e.base = resolved_base(e.map);
    e.image = image_of(e.map);
    e.reference = std::move(ref);
    return e;
}

CatalogEntry from_template(const Template &t)
{
    std::vector<ExprPtr> comps;
    for (const auto *c : t.components) {
        comps.push_back(fold_constants(parse_expr(c)));
    }
    return finish(t.name, t.source, t.target, std::move(comps), t.base, t.reference);
}

std::vector<ExprPtr> instantiate(const char *const *texts, std::size_t n, const std::map<std::string, ExprPtr> &params)
{
    std::vector<ExprPtr> out;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(fold_constants(expr_substitute(parse_expr(texts[k]), params)));
    }
    return out;
}

std::string family_name(const char *f, const Scalar &a, const Scalar &b)
{
    return std::string(f) + "(" + a.to_string() + "," + b.to_string() + ")";
}

// Splits "NAME(x,y)" into its two constant arguments.
std::optional<std::pair<Scalar, Scalar>> family_args(const std::string &name, const std::string &prefix)
{
    if (name.size() < prefix.size() + 2 || name.compare(0, prefix.size() + 1, prefix + "(") != 0 || name.back() != ')') {
        return std::nullopt;
    }
    std::string inner = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    int depth = 0;
    std::size_t cut = std::string::npos;
    for (std::size_t k = 0; k < inner.size(); ++k) {
        if (inner[k] == '(') {
            ++depth;
        } else if (inner[k] == ')') {
            --depth;
        } else if (inner[k] == ',' && depth == 0) {
            cut = k;
        }
    }
    if (cut == std::string::npos) {
        throw error("catalog family " + prefix + " takes two arguments");
    }
    auto arg = [&](const std::string &s) {
        auto e = fold_constants(parse_expr(s));
        if (e->kind != ExprKind::constant) {
            throw error("catalog argument '" + s + "' is not a constant");
        }
        return e->value;
    };
    return std::make_pair(arg(inner.substr(0, cut)), arg(inner.substr(cut + 1)));
}

} // namespace

std::vector<std::string> catalog_names()
{
    std::vector<std::string> out;
    for (const auto &t : templates()) {
        out.push_back(t.name);
    }
    out.push_back("HA(a,b)");
    out.push_back("PB(c,s)");
    return out;
}

CatalogEntry ha_entry(const Scalar &a, const Scalar &b)
{
    auto comps = instantiate(ha_components, 4, {{"a", expr_constant(a)}, {"b", expr_constant(b)}});
    return finish(family_name("HA", a, b), ModelId::H5, ModelId::X, std::move(comps), {}, "rational family H_A");
}

CatalogEntry pb_entry(const Scalar &c, const Scalar &s)
{
    if (c.is_exact() && s.is_exact() && c * c + s * s != Scalar(1)) {
        throw error("PB needs c^2 + s^2 = 1");
    }
    if (!approx_equal(c * c + s * s, Scalar(1), 1e-12)) {
        throw error("PB needs c^2 + s^2 = 1");
    }
    auto comps = instantiate(pb_components, 4, {{"c", expr_constant(c)}, {"s", expr_constant(s)}});
    return finish(family_name("PB", c, s), ModelId::S5, ModelId::DIV4, std::move(comps), {q(0), q(0), q(1)},
                  "quadratic family P_B");
}

CatalogEntry catalog_get(const std::string &name)
{
    for (const auto &t : templates()) {
        if (name == t.name) {
            return from_template(t);
        }
    }
    if (auto a = family_args(name, "HA")) {
        return ha_entry(a->first, a->second);
    }
    if (auto a = family_args(name, "PB")) {
        return pb_entry(a->first, a->second);
    }
    throw error("unknown catalog map '" + name + "'");
}

MapDef t2_printed()
{
    auto m = catalog_get("T2").map;
    m.name = "T2_printed";
    m.components[3] = fold_constants(parse_expr("(2*w^2+i*w+2-3*z1^2+5*z2^2)/(4*(1-w^2+2*(z1^2-z2^2)))"));
    return m;
}

std::string catalog_show(const std::string &name)
{
    auto e = catalog_get(name);
    std::ostringstream os;
    os << "# " << e.reference << "\n# base (";
    for (std::size_t k = 0; k < e.base.size(); ++k) {
        os << (k ? ", " : "") << e.base[k];
    }
    os << ") -> (";
    for (std::size_t k = 0; k < e.image.size(); ++k) {
        os << (k ? ", " : "") << e.image[k];
    }
    os << ")\n" << print_mapdef(e.map);
    return os.str();
}

SeriesTuple compose_with(const MapDef &outer, const SeriesTuple &inner, int order, Field field)
{
    const auto &src = ambient(outer.source);
    if (inner.size() != src.coords.size()) {
        throw error("cannot compose " + outer.name + ": inner map has " + std::to_string(inner.size()) +
                    " components, expected " + std::to_string(src.coords.size()));
    }
    if (inner.empty()) {
        throw error("cannot compose with an empty map");
    }
    auto obase = resolved_base(outer);
    bool branched = false;
    for (const auto &c : outer.components) {
        branched = branched || has_sqrt(c);
    }
    for (std::size_t k = 0; branched && k < inner.size(); ++k) {
        if (!approx_equal(inner[k].constant_term(), obase[k], 1e-12)) {
            throw error("cannot compose " + outer.name + ": inner image " + inner[k].constant_term().to_string() +
                        " differs from its base point " + obase[k].to_string());
        }
    }
    std::map<std::string, Series> b;
    for (std::size_t k = 0; k < inner.size(); ++k) {
        b.emplace(src.coords[k], inner[k]);
    }
    SeriesTuple out;
    for (const auto &c : outer.components) {
        out.push_back(expand_expr(c, b, inner[0].spec(), order, field));
    }
    return out;
}

SeriesTuple compose_maps(const MapDef &outer, const MapDef &inner, int order, Field field)
{
    if (ambient(inner.target).coords.size() != ambient(outer.source).coords.size()) {
        throw error("cannot compose " + outer.name + " with " + inner.name + ": dimension mismatch");
    }
    return compose_with(outer, expand_map(inner, order, field), order, field);
}

SeriesTuple identity_tuple(ModelId id, const std::vector<Scalar> &base, int order, Field field)
{
    const auto &m = model(id);
    auto b = base.empty() ? m.base_point : base;
    SeriesTuple out;
    for (std::size_t k = 0; k < m.coords.size(); ++k) {
        out.push_back(Series::variable(m.spec, order, m.coords[k], field) +
                      (field == Field::f64 ? b[k].to_float() : b[k]));
    }
    return out;
}

IdentityCheck verify_identity(const Series &lhs, const Series &rhs)
{
    return verify_identity(SeriesTuple{lhs}, SeriesTuple{rhs});
}

IdentityCheck verify_identity(const SeriesTuple &lhs, const SeriesTuple &rhs)
{
    IdentityCheck r;
    if (lhs.size() != rhs.size()) {
        r.equal = false;
        r.detail = "component counts differ: " + std::to_string(lhs.size()) + " vs " + std::to_string(rhs.size());
        return r;
    }
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        auto d = lhs[k] - rhs[k];
        if (auto t = d.lowest_term()) {
            r.equal = false;
            r.component = k;
            r.monomial = t->first;
            r.lhs = lhs[k].coeff(t->first);
            r.rhs = rhs[k].coeff(t->first);
            r.detail = "component " + std::to_string(k + 1) + ", monomial " + d.monomial_string(t->first) + ": " +
                       r.lhs.to_string() + " vs " + r.rhs.to_string();
            return r;
        }
    }
    return r;
}

std::pair<Series, Series> hyperquadric_pullback(XConvention c)
{
    const auto &X = x_model(c);
    auto psi = catalog_get("Psi").map;
    auto conj = [&](const ExprPtr &e) {
        std::map<std::string, std::string> rn;
        for (const auto &v : X.coords) {
            rn[v] = v + "b";
        }
        return expr_conjugate(e, rn);
    };
    SeriesTuple hol, cj;
    for (const auto &e : psi.components) {
        hol.push_back(expand_expr(e, X.spec, poly_order));
        cj.push_back(expand_expr(conj(e), X.spec, poly_order));
    }
    const auto &T = model(ModelId::HYP1);
    std::map<std::string, Series> b;
    for (std::size_t k = 0; k < T.coords.size(); ++k) {
        b.emplace(T.coords[k], hol[k]);
        b.emplace(T.coords[k] + "b", cj[k]);
    }
    return {expand_expr(T.rho, b, X.spec, poly_order), expand_expr(X.rho, X.spec, poly_order)};
}

std::pair<Series, Series> ell_pullback(XConvention c)
{
    const auto &X = x_model(c);
    const auto &S = model(ModelId::H5);
    std::map<std::string, Series> b;
    for (const auto &v : {"z1", "z2", "w"}) {
        b.emplace(v, Series::variable(S.spec, poly_order, v));
        b.emplace(std::string(v) + "b", Series::variable(S.spec, poly_order, std::string(v) + "b"));
    }
    b.emplace("zeta", Series(S.spec, poly_order));
    b.emplace("zetab", Series(S.spec, poly_order));
    return {expand_expr(X.rho, b, S.spec, poly_order), expand_expr(S.rho, S.spec, poly_order)};
}

std::vector<Restriction> p_restrictions()
{
    auto P = catalog_get("P").map;
    auto spec = make_varspec({"z1", "z2", "w"}, {1, 1, 1});
    SeriesTuple full;
    for (const auto &e : P.components) {
        full.push_back(expand_expr(e, spec, poly_order));
    }
    auto poly = [&](std::initializer_list<const char *> texts) {
        SeriesTuple t;
        for (const auto *s : texts) {
            t.push_back(expand_expr(parse_expr(s), spec, poly_order));
        }
        return t;
    };
    auto restrict_to = [&](const char *v) {
        SeriesTuple t;
        for (const auto &s : full) {
            t.push_back(series_set_zero(s, {v}));
        }
        return t;
    };
    // The w = 0 display lists three entries; the vanishing second component is omitted there.
    return {
        {"z1=0", restrict_to("z1"), poly({"0", "z2*w", "(w^2-z2^2)/2", "i*(z2^2+w^2)/2"})},
        {"z2=0", restrict_to("z2"), poly({"z1", "0", "w^2/2", "i*w^2/2"})},
        {"w=0", restrict_to("w"), poly({"z1", "0", "0-z2^2/2", "i*z2^2/2"})},
    };
}

std::vector<ConventionRow> convention_report(int order)
{
    std::vector<ConventionRow> rows;
    auto conv = {XConvention::zeta_bar, XConvention::zeta};
    auto set = [](ConventionRow &row, XConvention c, bool ok) { (c == XConvention::zeta_bar ? row.zeta_bar : row.zeta) = ok; };
    std::vector<CatalogEntry> into_x = {catalog_get("ell"), catalog_get("r"), catalog_get("iota"), catalog_get("F"),
                                        ha_entry(q(1), q(1))};
    for (const auto &e : into_x) {
        ConventionRow row{e.name};
        for (auto c : conv) {
            set(row, c, mapping_residual(e.map, order, Field::exact, &x_model(c)).zero());
        }
        rows.push_back(row);
    }
    for (const char *n : {"G", "Phi"}) {
        auto e = catalog_get(n);
        ConventionRow row{e.name};
        auto H = expand_map(e.map, order);
        for (auto c : conv) {
            set(row, c, mapping_residual(H, x_model(c), model(e.map.target), order).zero());
        }
        rows.push_back(row);
    }
    ConventionRow psi{"Psi"};
    for (auto c : conv) {
        auto [lhs, rhs] = hyperquadric_pullback(c);
        set(psi, c, verify_identity(lhs, rhs).equal);
    }
    rows.push_back(psi);
    return rows;
}

} // namespace crmap
