#include <crmap/ahlfors.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include <crmap/autgroups.hpp>
#include <crmap/catalog.hpp>
#include <crmap/error.hpp>

namespace crmap
{

namespace
{

using cd = std::complex<double>;

Field field_of(const SeriesTuple &H)
{
    for (const auto &h : H) {
        if (h.field() == Field::f64) {
            return Field::f64;
        }
    }
    return Field::exact;
}

// The w-free part of rho: -wb/(2i) - z zb^t.
Series rho_rest(const VarSpecPtr &spec, int order, Field field)
{
    auto v = [&](const char *n) { return Series::variable(spec, order, n, field); };
    return v("wb") * Scalar(0, mpq_class(1, 2)) - v("z1") * v("z1b") - v("z2") * v("z2b");
}

Series model_rho(const VarSpecPtr &spec, int order, Field field)
{
    return Series::variable(spec, order, "w", field) * Scalar(0, mpq_class(-1, 2)) + rho_rest(spec, order, field);
}

// Drops the w-free terms and divides the rest by w.
Series divide_w(const Series &s, std::size_t w)
{
    Series out(s.spec(), s.order(), s.field());
    for (const auto &[m, c] : s.terms()) {
        if (m.e[w] == 0) {
            continue;
        }
        Monomial q = m;
        q.e[w] -= 1;
        out.add_term(q, c);
    }
    return out;
}

std::size_t index_of(const VarSpecPtr &spec, const std::string &name)
{
    Monomial m = Series(spec, 1).monomial({{name, 1}});
    for (std::size_t k = 0; k < spec->size(); ++k) {
        if (m.e[k] != 0) {
            return k;
        }
    }
    throw error("unknown variable " + name);
}

bool positive(const Scalar &q0, double tol)
{
    if (q0.is_exact()) {
        return q0.is_real() && q0.sign() > 0;
    }
    auto z = q0.to_complex();
    return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z)) && z.real() > tol;
}

std::vector<Scalar> scalars(const Point &p)
{
    std::vector<Scalar> out;
    for (auto z : p) {
        out.emplace_back(z);
    }
    return out;
}

// H about p in the coordinates of the Heisenberg translation from the origin.
SeriesTuple translated(const MapDef &H, const Point &p, int order)
{
    if (H.source != ModelId::H5) {
        throw error("map " + H.name + " does not have source H5");
    }
    if (p.size() != 3) {
        throw error("point has the wrong dimension for H5");
    }
    const auto &S = model(ModelId::H5);
    MapDef Hp = H;
    Hp.base = scalars(p);
    // The shifted w has weight-one terms, so each power of w costs one order.
    auto local = expand_map(Hp, 2 * order, Field::f64);
    auto v = [&](const char *n) { return Series::variable(S.spec, 2 * order, n, Field::f64); };
    Series w = v("w") + (v("z1") * Scalar(std::conj(p[0])) + v("z2") * Scalar(std::conj(p[1]))) * Scalar(0, 2);
    return tuple_truncated(tuple_substitute(local, {{"z1", v("z1")}, {"z2", v("z2")}, {"w", w}}, S.spec, 2 * order),
                           order);
}

std::string first_term(const Series &s, double tol)
{
    std::vector<std::pair<int, Monomial>> t;
    for (const auto &[m, c] : s.terms()) {
        if (s.field() == Field::exact || std::abs(c.to_complex()) > tol) {
            t.emplace_back(s.degree(m), m);
        }
    }
    if (t.empty()) {
        return {};
    }
    auto it = std::min_element(t.begin(), t.end());
    return s.monomial_string(it->second) + ": " + s.coeff(it->second).to_string();
}

} // namespace

QFactor compute_Q(const SeriesTuple &H, const HypersurfaceModel &target, int order)
{
    if (order < 2) {
        throw error("Q needs order at least 2");
    }
    const auto &S = model(ModelId::H5);
    if (H.empty() || !same_spec(H[0].spec(), S.spec)) {
        throw varspec_mismatch("Q is computed for maps given in the coordinates of H5");
    }
    Field field = field_of(H);
    SeriesTuple hol, conj;
    for (const auto &h : H) {
        hol.push_back(h.truncated(order));
        conj.push_back(series_conjugate(hol.back()));
    }
    auto R = compose_rho(target, hol, conj, order, field);
    auto rest = rho_rest(S.spec, order, field);
    auto w = index_of(S.spec, "w");
    Series q(S.spec, order, field);
    // Each pass fixes one more power of w, starting from the highest.
    for (int k = 0; k <= order / 2 + 1; ++k) {
        q = divide_w(R - q * rest, w) * Scalar(0, 2);
    }
    auto remainder = R - q * model_rho(S.spec, order, field);
    double tol = field == Field::exact ? 0 : 1e-9 * std::max(1.0, R.max_abs());
    if (field == Field::exact ? !remainder.is_zero() : !remainder.is_zero_within(tol)) {
        throw division_inconsistency("rho' o H is not divisible by rho; first remainder term " +
                                     first_term(remainder, tol));
    }
    QFactor out{q.truncated(order - 2), order - 2, false, order};
    out.positive = positive(out.q.constant_term(), 1e-10);
    if (!out.positive) {
        throw not_transversal("Q(0) = " + out.q.constant_term().to_string() + " is not positive");
    }
    return out;
}

QFactor compute_Q(const MapDef &H, int order, Field field, const HypersurfaceModel *target)
{
    const auto &T = target != nullptr ? *target : model(H.target);
    if (H.source != ModelId::H5) {
        throw error("map " + H.name + " does not have source H5");
    }
    auto base = resolved_base(H);
    bool origin = std::all_of(base.begin(), base.end(), [](const Scalar &s) { return s.is_zero(); });
    if (!origin) {
        return compute_Q_at(H, to_point(base), order, target);
    }
    auto series = expand_map(H, order, field);
    for (const auto &h : series) {
        if (std::abs(h.constant_term().to_complex()) > 1e-12) {
            throw error("compute_Q needs H(0) = 0");
        }
    }
    return compute_Q(series, T, order);
}

QFactor compute_Q_at(const MapDef &H, const Point &p, int order, const HypersurfaceModel *target)
{
    const auto &T = target != nullptr ? *target : model(H.target);
    return compute_Q(translated(H, p, order), T, order);
}

Series iota_q_closed_form(int order, Field field)
{
    const auto &S = model(ModelId::H5);
    auto h = expand_expr(parse_expr("2/(1+sqrt(1-4*w^2-4*i*(z1^2+z2^2)))"), {}, S.spec, order, field);
    return h * series_conjugate(h);
}

bool AhlforsMatrix::hermitian(double tol) const
{
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const auto &x = (*this)(a, b);
            auto y = (*this)(b, a).conj();
            if (x.is_exact() && y.is_exact()) {
                if (!(x == y)) {
                    return false;
                }
            } else if (std::abs(x.to_complex() - y.to_complex()) > tol) {
                return false;
            }
        }
    }
    return true;
}

AhlforsMatrix ahlfors_matrix(const QFactor &Q)
{
    if (Q.order < 2) {
        throw error("the Ahlfors matrix needs Q to order 2");
    }
    Scalar q0 = Q.q.constant_term();
    if (!positive(q0, 1e-12)) {
        throw not_transversal("Q(0) = " + q0.to_string() + " is not positive");
    }
    static const char *z[] = {"z1", "z2"};
    static const char *zb[] = {"z1b", "z2b"};
    AhlforsMatrix A;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Scalar qa = Q.q.coeff({{z[a], 1}});
            Scalar qb = Q.q.coeff({{zb[b], 1}});
            Scalar qab = Q.q.coeff({{z[a], 1}, {zb[b], 1}});
            A.m[static_cast<std::size_t>(2 * a + b)] = qab / q0 - qa * qb / (q0 * q0);
        }
    }
    A.point = Point(3);
    return A;
}

AhlforsMatrix ahlfors_matrix(const MapDef &H, const Point &p, int order)
{
    auto A = ahlfors_matrix(compute_Q_at(H, p, order));
    A.point = p;
    return A;
}

AhlforsMatrix ahlfors_matrix_numeric(const MapDef &H, const Point &p, double h)
{
    const auto &T = model(H.target);
    const int K = 32;
    const int R = 4;
    // Z_a at p.
    std::array<std::array<cd, 3>, 2> Z{};
    for (int a = 0; a < 2; ++a) {
        Z[a][static_cast<std::size_t>(a)] = 1;
        Z[a][2] = cd(0, 2) * std::conj(p[static_cast<std::size_t>(a)]);
    }
    auto levi = [&](cd c1, cd c2) {
        std::array<cd, 3> V{};
        for (std::size_t k = 0; k < 3; ++k) {
            V[k] = c1 * Z[0][k] + c2 * Z[1][k];
        }
        double v2 = std::norm(V[0]) + std::norm(V[1]);
        Eigen::Matrix4d M;
        Eigen::Vector4d means;
        for (int j = 0; j < R; ++j) {
            double r = h * (j + 1);
            double sum = 0;
            for (int k = 0; k < K; ++k) {
                cd zeta = std::polar(r, 2 * M_PI * k / K);
                Point q(3);
                for (std::size_t n = 0; n < 3; ++n) {
                    q[n] = p[n] + zeta * V[n];
                }
                double rho = -r * r * v2;
                sum += std::log(eval_rho(T, eval_map(H, q)).real() / rho);
            }
            means[j] = sum / K;
            for (int n = 0; n < R; ++n) {
                M(j, n) = std::pow(r * r, n);
            }
        }
        Eigen::Vector4d a = M.fullPivLu().solve(means);
        return a[1];
    };
    double d1 = levi(1, 0);
    double d2 = levi(0, 1);
    double re = (levi(1, 1) - d1 - d2) / 2;
    double im = (levi(1, cd(0, 1)) - d1 - d2) / 2;
    AhlforsMatrix A;
    A.m = {Scalar(cd(d1, 0)), Scalar(cd(re, im)), Scalar(cd(re, -im)), Scalar(cd(d2, 0))};
    A.point = p;
    return A;
}

AhlforsMatrix change_frame(const AhlforsMatrix &A, const std::array<cd, 4> &M)
{
    AhlforsMatrix out = A;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            cd s = 0;
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    s += M[static_cast<std::size_t>(2 * a + c)] * A(c, d).to_complex() *
                         std::conj(M[static_cast<std::size_t>(2 * b + d)]);
                }
            }
            out.m[static_cast<std::size_t>(2 * a + b)] = Scalar(s);
        }
    }
    return out;
}

int matrix_rank(const AhlforsMatrix &A, double tol)
{
    Eigen::Matrix2cd M;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            M(a, b) = A(a, b).to_complex();
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(M);
    auto s = svd.singularValues();
    double cut = tol * std::max(s.maxCoeff(), 1.0);
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        rank += s[k] >= cut ? 1 : 0;
    }
    return rank;
}

std::vector<int> ahlfors_rank(const MapDef &H, const std::vector<Point> &points, double tol, int order)
{
    std::vector<int> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        out.push_back(matrix_rank(ahlfors_matrix(H, p, order), tol));
    }
    return out;
}

SeriesTuple germ_at(const MapDef &H, const Point &p, int order)
{
    auto moved = translated(H, p, order);
    std::vector<Scalar> img;
    for (const auto &s : moved) {
        img.push_back(s.constant_term());
    }
    return compose_with(translate_to_origin(H.target, img, 1e-8), moved, order, Field::f64);
}

PluriharmonicReport pluriharmonic_test(const QFactor &Q, int order, double tol)
{
    Scalar q0 = Q.q.constant_term();
    if (!positive(q0, 1e-12)) {
        throw not_transversal("Q(0) = " + q0.to_string() + " is not positive");
    }
    PluriharmonicReport rep;
    rep.checked_order = std::min(order - 2, Q.order);
    auto q = Q.q.truncated(rep.checked_order);
    auto L = series_log_unit(q * (Scalar(1) / q0));
    const auto n = L.spec()->size() / 2;
    std::vector<std::pair<int, Monomial>> mixed;
    for (const auto &[m, c] : L.terms()) {
        if (L.field() == Field::f64 && std::abs(c.to_complex()) <= tol) {
            continue;
        }
        bool hol = false, anti = false;
        for (std::size_t k = 0; k < n; ++k) {
            hol = hol || m.e[k] != 0;
            anti = anti || m.e[k + n] != 0;
        }
        if (hol && anti) {
            mixed.emplace_back(L.degree(m), m);
        }
    }
    rep.pass = mixed.empty();
    if (!rep.pass) {
        auto it = std::min_element(mixed.begin(), mixed.end());
        rep.violating_weight = it->first;
        rep.monomial = L.monomial_string(it->second);
        rep.coefficient = L.coeff(it->second);
    }
    return rep;
}

namespace
{

struct RhoJet {
    Series rho;
    std::vector<Series> d, db;
    std::vector<std::vector<Series>> ddb;
};

const RhoJet &rho_jet()
{
    static const RhoJet jet = [] {
        const auto &X = model(ModelId::X);
        auto rho = expand_expr(X.rho, {}, X.spec, 16);
        RhoJet j{rho, {}, {}, {}};
        const auto n = X.coords.size();
        for (std::size_t a = 0; a < n; ++a) {
            j.d.push_back(series_partial(rho, a));
            j.db.push_back(series_partial(rho, a + n));
        }
        for (std::size_t a = 0; a < n; ++a) {
            j.ddb.emplace_back();
            for (std::size_t b = 0; b < n; ++b) {
                j.ddb.back().push_back(series_partial(j.d[a], b + n));
            }
        }
        return j;
    }();
    return jet;
}

} // namespace

KePoint ke_evaluate(const Point &p, int m)
{
    const auto &J = rho_jet();
    const auto n = J.d.size();
    if (static_cast<std::size_t>(m) != n || p.size() != n) {
        throw error("the determinant identity is evaluated on X in dimension " + std::to_string(n));
    }
    std::vector<cd> v(p.begin(), p.end());
    for (auto z : p) {
        v.push_back(std::conj(z));
    }
    double rho = J.rho.evaluate(v).real();
    if (!(rho > 0)) {
        throw error("point is not in {rho' > 0}");
    }
    Eigen::Matrix4cd plain, lg;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            cd h = J.ddb[a][b].evaluate(v);
            plain(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = h;
            lg(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                h / rho - J.d[a].evaluate(v) * J.db[b].evaluate(v) / (rho * rho);
        }
    }
    double target = 0.25 * std::pow(rho, -m);
    KePoint out;
    out.point = p;
    out.rho = rho;
    out.log_error = std::abs(lg.determinant() - target) / target;
    out.plain_error = std::abs(plain.determinant() - target) / target;
    return out;
}

std::vector<Point> sample_interior_points(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-0.3, 0.3), level(0.05, 0.5), disc(0, 0.4), angle(0, 2 * M_PI);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
        cd z1(box(rng), box(rng)), z2(box(rng), box(rng));
        cd zeta = std::polar(disc(rng), angle(rng));
        double t = level(rng);
        double re = box(rng);
        double im = (t + std::norm(z1) + std::norm(z2) + (std::conj(zeta) * (z1 * z1 + z2 * z2)).real()) /
                    (1 - std::norm(zeta));
        out.push_back({z1, z2, zeta, cd(re, im)});
    }
    return out;
}

KeReport ke_determinant_check(std::size_t count, std::uint64_t seed, double tol, int m, double dilation)
{
    KeReport rep;
    rep.m = m;
    rep.tol = tol;
    rep.seed = seed;
    rep.dilation = dilation;
    rep.log_pass = rep.plain_pass = true;
    for (const auto &p : sample_interior_points(count, seed)) {
        rep.points.push_back(ke_evaluate(p, m));
        rep.log_pass = rep.log_pass && rep.points.back().log_error <= tol;
        rep.plain_pass = rep.plain_pass && rep.points.back().plain_error <= tol;
    }
    if (rep.log_pass != rep.plain_pass) {
        rep.interpretation = rep.log_pass ? "log rho'" : "rho'";
    }
    rep.dilation_pass = !rep.interpretation.empty();
    for (const auto &pt : rep.points) {
        const auto &p = pt.point;
        Point q{dilation * p[0], dilation * p[1], p[2], dilation * dilation * p[3]};
        auto e = ke_evaluate(q, m);
        double err = rep.log_pass ? e.log_error : e.plain_error;
        rep.dilation_pass = rep.dilation_pass && err <= tol;
    }
    return rep;
}

} // namespace crmap
