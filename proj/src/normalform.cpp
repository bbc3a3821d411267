#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/normalform.hpp>

#include <cmath>

namespace crmap
{

namespace
{

const HypersurfaceModel &src()
{
    return model(ModelId::H5);
}

bool vanishes(const Scalar &x, double tol)
{
    return x.is_exact() ? x.is_zero() : std::abs(x.to_complex()) <= tol;
}

bool same(const Scalar &a, const Scalar &b, double tol)
{
    return vanishes(a - b, tol);
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

SeriesTuple to_float(const SeriesTuple &H)
{
    SeriesTuple out;
    for (const auto &h : H) {
        out.push_back(h.to_float());
    }
    return out;
}

std::map<std::string, Series> var_binding(const SeriesTuple &psi)
{
    return {{"z1", psi[0]}, {"z2", psi[1]}, {"w", psi[2]}};
}

Normalization normalize_impl(const SeriesTuple &H0, int order, const NormalizeOptions &opt)
{
    const auto &S = src();
    Field field = field_of(H0);
    double tol = opt.tol;
    if (H0.size() != 4) {
        throw error("normalization needs a map into X (four components)");
    }
    for (const auto &h : H0) {
        if (!vanishes(h.constant_term(), tol)) {
            throw error("normalization needs H(0) = 0");
        }
    }
    SeriesTuple H = tuple_truncated(H0, order);
    auto c = [](const Series &s, std::initializer_list<std::pair<std::string, int>> m) { return s.coeff(m); };

    // Stage 1: linear normalization of f and g, then phi_z(0) via the target group.
    Scalar kappa = c(H[3], {{"w", 1}});
    if (!(kappa.is_exact() ? kappa.is_real() && kappa.sign() > 0
                           : std::abs(kappa.to_complex().imag()) <= tol && kappa.to_complex().real() > tol)) {
        throw not_transversal("g_w(0) = " + kappa.to_string() + " is not positive");
    }
    Scalar E[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            E[i][j] = c(H[static_cast<std::size_t>(j)], {{i == 0 ? "z1" : "z2", 1}});
        }
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Scalar g = E[i][0] * E[j][0].conj() + E[i][1] * E[j][1].conj();
            if (!same(g, i == j ? kappa : Scalar(0), std::sqrt(tol))) {
                throw not_transversal("f_z(0) is not a multiple of a unitary matrix");
            }
        }
    }
    Scalar det = E[0][0] * E[1][1] - E[0][1] * E[1][0];
    if (vanishes(det, tol)) {
        throw not_transversal("f_z(0) is singular");
    }
    Scalar V[2][2] = {{E[1][1] / det, -E[0][1] / det}, {-E[1][0] / det, E[0][0] / det}};
    auto var = [&](const char *n) { return Series::variable(S.spec, order, n, field); };
    SeriesTuple psi_inv = {var("z1") * V[0][0] + var("z2") * V[1][0], var("z1") * V[0][1] + var("z2") * V[1][1],
                           var("w") * (Scalar(1) / kappa)};
    H = tuple_substitute(H, var_binding(psi_inv), S.spec, order);

    TargetAutParams tp;
    Scalar mi2(0, mpq_class(-1, 2));
    tp.a = {c(H[2], {{"z1", 1}}) * mi2, c(H[2], {{"z2", 1}}) * mi2};
    if (field == Field::f64) {
        tp.a = {tp.a[0].to_float(), tp.a[1].to_float()};
    }
    // The zz part of phi depends on r only through -i r zz^t: pick r to make it trace-free.
    auto trial = compose_with(target_aut(tp), H, order, field);
    Scalar tr = (c(trial[2], {{"z1", 2}}) + c(trial[2], {{"z2", 2}})) * Scalar(0, mpq_class(-1, 2));
    if (!(tr.is_exact() ? tr.is_real() : std::abs(tr.to_complex().imag()) <= std::sqrt(tol))) {
        throw residual_nonzero("trace of the phi quadratic part is not imaginary");
    }
    tp.r = tr.is_exact() ? tr : Scalar(std::complex<double>(tr.to_complex().real(), 0));
    MapDef gamma = target_aut(tp);
    H = compose_with(gamma, H, order, field);

    // Stage 2: remove f_w(0).
    SourceAutParams sp;
    sp.c = {-c(H[0], {{"w", 1}}), -c(H[1], {{"w", 1}})};
    auto step = [&](const SourceAutParams &p) {
        auto psi = expand_map(source_aut(p), order, field);
        H = tuple_substitute(H, var_binding(psi), S.spec, order);
        psi_inv = tuple_substitute(psi_inv, var_binding(psi), S.spec, order);
    };
    step(sp);

    // Stage 3: remove the w^2 coefficient of g.
    Scalar r = c(H[3], {{"w", 2}});
    if (!(r.is_exact() ? r.is_real() : std::abs(r.to_complex().imag()) <= std::sqrt(tol))) {
        throw residual_nonzero("g_{ww}(0) = " + r.to_string() + " is not real");
    }
    SourceAutParams rp;
    rp.r = r.is_exact() ? r : Scalar(std::complex<double>(r.to_complex().real(), 0));
    step(rp);

    Normalization out;
    out.normalized = H;
    out.gamma = gamma;
    out.psi_inv = psi_inv;
    auto &inv = out.inv;
    inv.exact = field == Field::exact;
    Scalar m2i(0, -2);
    // f = z + (i/2) w zA + ...: coefficient of w z_j in f_i is (i/2) A_ji.
    Scalar a11 = m2i * c(H[0], {{"w", 1}, {"z1", 1}});
    Scalar a21 = m2i * c(H[0], {{"w", 1}, {"z2", 1}});
    Scalar a12 = m2i * c(H[1], {{"w", 1}, {"z1", 1}});
    Scalar a22 = m2i * c(H[1], {{"w", 1}, {"z2", 1}});
    out.f_matrix = {a11, a12, a22};
    Scalar b11 = c(H[2], {{"z1", 2}});
    Scalar b12 = c(H[2], {{"z1", 1}, {"z2", 1}}) * Scalar::rational(1, 2);
    Scalar b22 = c(H[2], {{"z2", 2}});
    out.phi_matrix = {b11, b12, b22};
    inv.alpha = b11;
    inv.beta = b12;
    inv.lambda = c(H[2], {{"w", 1}});
    inv.mu = {c(H[2], {{"w", 1}, {"z1", 1}}), c(H[2], {{"w", 1}, {"z2", 1}})};
    inv.nu = {c(H[0], {{"w", 2}}), c(H[1], {{"w", 2}})};
    inv.sigma = c(H[2], {{"w", 2}});
    inv.transversal = true;

    double rt = std::sqrt(tol);
    bool ok = same(a12, a21, rt) && same(a11, b11, rt) && same(a12, b12, rt) && same(a22, b22, rt) &&
              same(b11, -b22, rt) && vanishes(b11.imag_part(), rt) && vanishes(b12.imag_part(), rt);
    // f = z + O(w z, w^2) and g = w + O(3) through unweighted degree 2.
    for (std::size_t k = 0; k < 4; ++k) {
        for (const auto &[m, v] : H[k].terms()) {
            int deg = m.e[0] + m.e[1] + m.e[2];
            bool expected = false;
            if (deg == 1) {
                expected = (k < 2 && m.e[k] == 1) || (k == 3 && m.e[2] == 1) || (k == 2 && m.e[2] == 1);
            } else if (deg == 2) {
                expected = k == 2 || (k < 2 && m.e[2] >= 1);
            } else {
                expected = true;
            }
            if (!expected && !vanishes(v, rt)) {
                ok = false;
            }
        }
    }
    if (!same(c(H[0], {{"z1", 1}}), Scalar(1), rt) || !same(c(H[1], {{"z2", 1}}), Scalar(1), rt) ||
        !same(c(H[3], {{"w", 1}}), Scalar(1), rt)) {
        ok = false;
    }
    out.relations_hold = ok;
    return out;
}

bool nonzero(const Scalar &x, double tol)
{
    return x.is_exact() ? !x.is_zero() : std::abs(x.to_complex()) > tol;
}

} // namespace

Normalization normalize(const SeriesTuple &H, int order, const NormalizeOptions &opt)
{
    if (opt.check_residual) {
        auto res = mapping_residual(tuple_truncated(H, order), src(), model(ModelId::X), order);
        if (field_of(H) == Field::exact ? !res.zero() : !res.zero_within(std::sqrt(opt.tol))) {
            throw residual_nonzero("mapping residual is nonzero at weighted order " +
                                   std::to_string(res.min_violating_order.value_or(-1)));
        }
    }
    try {
        return normalize_impl(H, order, opt);
    } catch (const field_error &) {
        if (!opt.float_fallback || field_of(H) == Field::f64) {
            throw;
        }
        return normalize_impl(to_float(H), order, opt);
    }
}

int geometric_rank(const NormalFormInvariants &inv, double tol)
{
    return nonzero(inv.alpha, tol) || nonzero(inv.beta, tol) ? 2 : 0;
}

std::string label_name(Label l)
{
    switch (l) {
        case Label::Linear:
            return "Linear";
        case Label::Rational:
            return "Rational";
        case Label::Irrational:
            return "Irrational";
        case Label::Degenerate:
            return "Degenerate";
    }
    return "?";
}

bool detect_degenerate(const SeriesTuple &H, int order, double tol)
{
    if (H.size() != 4) {
        return false;
    }
    for (std::size_t k : {0u, 1u, 3u}) {
        auto s = H[k].truncated(order);
        if (tol > 0 ? !s.is_zero_within(tol) : !s.is_zero()) {
            return false;
        }
    }
    return true;
}

ClassLabel classify(const SeriesTuple &H, int order, const ClassifyOptions &opt)
{
    auto res = mapping_residual(tuple_truncated(H, order), src(), model(ModelId::X), order);
    bool exact = field_of(H) == Field::exact;
    if (exact ? !res.zero() : !res.zero_within(std::sqrt(opt.tol))) {
        throw residual_nonzero("mapping residual is nonzero at weighted order " +
                               std::to_string(res.min_violating_order.value_or(-1)));
    }
    ClassLabel out;
    auto t = transversality_at_origin(H, opt.tol);
    if (!t.transversal) {
        if (detect_degenerate(H, order, exact ? 0 : opt.tol)) {
            out.label = Label::Degenerate;
            out.inv.transversal = false;
            out.inv.exact = exact;
            out.note = "f and g vanish to order " + std::to_string(order);
            return out;
        }
        throw inconsistent_invariants("g_w(0) = " + t.gw.to_string() +
                                      " but the map is not of the form (0, 0, phi, 0)");
    }
    NormalizeOptions no;
    no.tol = opt.tol;
    no.check_residual = false;
    auto n = normalize(H, order, no);
    if (!n.relations_hold) {
        throw inconsistent_invariants("normalized map violates the coefficient relations");
    }
    out.inv = n.inv;
    double pt = exact ? 0 : 1e-7;
    out.rank = geometric_rank(n.inv, pt > 0 ? pt : 1e-7);
    if (nonzero(n.inv.lambda, pt)) {
        out.label = Label::Irrational;
    } else if (out.rank != 0) {
        out.label = Label::Rational;
    } else {
        out.label = Label::Linear;
        if (nonzero(n.inv.sigma, pt) || nonzero(n.inv.mu[0], pt) || nonzero(n.inv.mu[1], pt) ||
            nonzero(n.inv.nu[0], pt) || nonzero(n.inv.nu[1], pt)) {
            throw inconsistent_invariants("lambda = 0 and A = 0 but sigma, mu or nu is nonzero");
        }
    }
    return out;
}

ClassLabel classify(const MapDef &H, int order, Field field, const ClassifyOptions &opt)
{
    auto series = expand_map(H, order, field);
    if (field == Field::f64 && opt.borderline_retry) {
        auto t = transversality_at_origin(series, opt.tol);
        if (!t.transversal && std::abs(t.gw.to_complex()) <= opt.borderline) {
            // Transversality at one point propagates; look at nearby base points.
            for (const auto &p : sample_points(ModelId::H5, static_cast<std::size_t>(opt.retry_points), opt.seed, 1e-3)) {
                std::vector<Scalar> ps;
                for (auto z : p) {
                    ps.push_back(Scalar(z));
                }
                auto moved = compose_maps(H, heisenberg_from_origin(ps), order, Field::f64);
                std::vector<Scalar> img;
                for (const auto &s : moved) {
                    img.push_back(s.constant_term());
                }
                auto tau = translate_to_origin(ModelId::X, img, 1e-8);
                auto local = compose_with(tau, moved, order, Field::f64);
                if (transversality_at_origin(local, opt.tol).transversal) {
                    auto out = classify(local, order, opt);
                    out.note = "transversal at a nearby base point";
                    return out;
                }
            }
        }
    }
    return classify(series, order, opt);
}

SeriesTuple conjugate_map(const SeriesTuple &H, const MapDef &gamma, const MapDef &psi, int order, Field field)
{
    const auto &S = src();
    auto pinv = invert_aut(psi, order, field);
    auto inner = tuple_substitute(tuple_truncated(H, order), var_binding(pinv), S.spec, order);
    return compose_with(gamma, inner, order, field);
}

} // namespace crmap
