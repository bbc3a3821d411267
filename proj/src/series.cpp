#include <crmap/error.hpp>
#include <crmap/series.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crmap
{

VarSpec::VarSpec(std::vector<std::string> names, std::vector<int> weights, std::vector<std::string> partners)
    : m_names(std::move(names)), m_weights(std::move(weights)), m_partner(m_names.size(), -1)
{
    if (m_names.size() > max_vars) {
        throw error("too many variables in a VarSpec");
    }
    if (m_weights.size() != m_names.size()) {
        throw error("VarSpec weights and names differ in length");
    }
    for (int w : m_weights) {
        if (w <= 0) {
            throw error("VarSpec weights must be positive");
        }
    }
    for (std::size_t k = 0; k < partners.size() && k < m_names.size(); ++k) {
        if (partners[k].empty()) {
            continue;
        }
        auto j = find(partners[k]);
        if (!j) {
            throw error("unknown conjugate partner " + partners[k]);
        }
        m_partner[k] = static_cast<int>(*j);
    }
    for (std::size_t k = 0; k < m_names.size(); ++k) {
        int p = m_partner[k];
        if (p >= 0 && m_partner[static_cast<std::size_t>(p)] != static_cast<int>(k)) {
            throw error("conjugate pairing is not symmetric for " + m_names[k]);
        }
    }
}

std::optional<std::size_t> VarSpec::find(const std::string &n) const
{
    auto it = std::find(m_names.begin(), m_names.end(), n);
    if (it == m_names.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - m_names.begin());
}

std::size_t VarSpec::index(const std::string &n) const
{
    auto k = find(n);
    if (!k) {
        throw error("unknown variable " + n);
    }
    return *k;
}

bool operator==(const VarSpec &a, const VarSpec &b)
{
    return a.m_names == b.m_names && a.m_weights == b.m_weights && a.m_partner == b.m_partner;
}

VarSpecPtr make_varspec(std::vector<std::string> names, std::vector<int> weights, std::vector<std::string> partners)
{
    return std::make_shared<const VarSpec>(std::move(names), std::move(weights), std::move(partners));
}

VarSpecPtr make_complexified(const std::vector<std::string> &names, const std::vector<int> &weights)
{
    std::vector<std::string> all(names), partners;
    std::vector<int> w(weights);
    for (const auto &n : names) {
        all.push_back(n + "b");
        partners.push_back(n + "b");
    }
    for (const auto &n : names) {
        partners.push_back(n);
    }
    w.insert(w.end(), weights.begin(), weights.end());
    return make_varspec(all, w, partners);
}

bool same_spec(const VarSpecPtr &a, const VarSpecPtr &b)
{
    return a == b || *a == *b;
}

Monomial Monomial::operator*(const Monomial &o) const
{
    Monomial r;
    for (std::size_t k = 0; k < max_vars; ++k) {
        unsigned s = unsigned(e[k]) + o.e[k];
        if (s > 255) {
            throw error("monomial exponent overflow");
        }
        r.e[k] = static_cast<std::uint8_t>(s);
    }
    return r;
}

bool Monomial::is_one() const
{
    return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

bool Monomial::divides(const Monomial &o) const
{
    for (std::size_t k = 0; k < max_vars; ++k) {
        if (e[k] > o.e[k]) {
            return false;
        }
    }
    return true;
}

Monomial Monomial::operator/(const Monomial &o) const
{
    Monomial r;
    for (std::size_t k = 0; k < max_vars; ++k) {
        r.e[k] = static_cast<std::uint8_t>(e[k] - o.e[k]);
    }
    return r;
}

Series::Series(VarSpecPtr spec, int order, Field field) : m_spec(std::move(spec)), m_order(order), m_field(field)
{
    if (order < 0) {
        throw error("negative truncation order");
    }
}

Series Series::constant(VarSpecPtr spec, int order, const Scalar &c, Field field)
{
    Series s(std::move(spec), order, field);
    s.add_term(Monomial{}, c);
    return s;
}

Series Series::variable(VarSpecPtr spec, int order, const std::string &name, Field field)
{
    Series s(std::move(spec), order, field);
    Monomial m;
    m.e[s.m_spec->index(name)] = 1;
    s.add_term(m, Scalar(1));
    return s;
}

Series Series::polynomial(VarSpecPtr spec, const std::vector<std::pair<Monomial, Scalar>> &terms)
{
    Series s(std::move(spec), poly_order);
    for (const auto &[m, c] : terms) {
        s.add_term(m, c);
    }
    return s;
}

int Series::degree(const Monomial &m) const
{
    int d = 0;
    for (std::size_t k = 0; k < m_spec->size(); ++k) {
        d += m.e[k] * m_spec->weight(k);
    }
    return d;
}

Monomial Series::monomial(std::initializer_list<std::pair<std::string, int>> vars) const
{
    Monomial m;
    for (const auto &[n, e] : vars) {
        m.e[m_spec->index(n)] = static_cast<std::uint8_t>(e);
    }
    return m;
}

Scalar Series::coeff(const Monomial &m) const
{
    auto it = m_terms.find(m);
    if (it == m_terms.end()) {
        return m_field == Field::exact ? Scalar() : Scalar(std::complex<double>(0));
    }
    return it->second;
}

Scalar Series::constant_term() const
{
    return coeff(Monomial{});
}

void Series::promote_to_float()
{
    if (m_field == Field::f64) {
        return;
    }
    m_field = Field::f64;
    for (auto &[m, c] : m_terms) {
        c = c.to_float();
    }
}

void Series::add_term(const Monomial &m, const Scalar &c)
{
    if (c.is_zero() || (m_order != poly_order && degree(m) > m_order)) {
        return;
    }
    if (!c.is_exact()) {
        promote_to_float();
    }
    auto it = m_terms.find(m);
    if (it == m_terms.end()) {
        m_terms.emplace(m, m_field == Field::f64 ? c.to_float() : c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) {
        m_terms.erase(it);
    }
}

int Series::valuation() const
{
    int v = poly_order;
    for (const auto &t : m_terms) {
        v = std::min(v, degree(t.first));
    }
    return v;
}

std::optional<std::pair<Monomial, Scalar>> Series::lowest_term() const
{
    std::optional<std::pair<Monomial, Scalar>> best;
    int bd = 0;
    for (const auto &[m, c] : m_terms) {
        int d = degree(m);
        if (!best || d < bd) {
            best = std::make_pair(m, c);
            bd = d;
        }
    }
    return best;
}

int Series::max_degree_in(const std::vector<std::size_t> &vars) const
{
    int best = 0;
    for (const auto &t : m_terms) {
        int d = 0;
        for (auto k : vars) {
            d += t.first.e[k];
        }
        best = std::max(best, d);
    }
    return best;
}

Series Series::truncated(int order) const
{
    Series s(m_spec, std::min(order, m_order), m_field);
    for (const auto &[m, c] : m_terms) {
        if (degree(m) <= s.m_order) {
            s.m_terms.emplace(m, c);
        }
    }
    return s;
}

Series Series::to_float() const
{
    Series s(*this);
    s.promote_to_float();
    return s;
}

Series Series::chop(double tol) const
{
    Series s(m_spec, m_order, m_field);
    for (const auto &[m, c] : m_terms) {
        if (c.is_exact() || std::abs(c.to_complex()) > tol) {
            s.m_terms.emplace(m, c);
        }
    }
    return s;
}

double Series::max_abs() const
{
    double r = 0;
    for (const auto &t : m_terms) {
        r = std::max(r, std::abs(t.second.to_complex()));
    }
    return r;
}

void Series::check_spec(const Series &o) const
{
    if (!same_spec(m_spec, o.m_spec)) {
        throw varspec_mismatch("series operands have different variable specs");
    }
}

Series Series::operator-() const
{
    Series s(*this);
    for (auto &t : s.m_terms) {
        t.second = -t.second;
    }
    return s;
}

Series &Series::operator+=(const Series &o)
{
    check_spec(o);
    if (o.m_order < m_order) {
        *this = truncated(o.m_order);
    }
    for (const auto &[m, c] : o.m_terms) {
        add_term(m, c);
    }
    return *this;
}

Series &Series::operator-=(const Series &o)
{
    return *this += -o;
}

Series &Series::operator*=(const Series &o)
{
    *this = *this * o;
    return *this;
}

Series &Series::operator*=(const Scalar &c)
{
    if (c.is_zero()) {
        m_terms.clear();
        return *this;
    }
    if (!c.is_exact()) {
        promote_to_float();
    }
    for (auto it = m_terms.begin(); it != m_terms.end();) {
        it->second *= c;
        if (it->second.is_zero()) {
            it = m_terms.erase(it);
        } else {
            ++it;
        }
    }
    return *this;
}

Series operator*(const Series &a, const Series &b)
{
    a.check_spec(b);
    Field f = (a.m_field == Field::f64 || b.m_field == Field::f64) ? Field::f64 : Field::exact;
    Series r(a.m_spec, std::min(a.m_order, b.m_order), f);
    if (a.m_terms.empty() || b.m_terms.empty()) {
        return r;
    }
    std::vector<std::pair<int, const std::pair<const Monomial, Scalar> *>> bt;
    bt.reserve(b.m_terms.size());
    for (const auto &t : b.m_terms) {
        bt.emplace_back(b.degree(t.first), &t);
    }
    std::stable_sort(bt.begin(), bt.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    for (const auto &[ma, ca] : a.m_terms) {
        int da = a.degree(ma);
        if (r.m_order != poly_order && da > r.m_order) {
            continue;
        }
        for (const auto &[db, tb] : bt) {
            if (r.m_order != poly_order && da + db > r.m_order) {
                break;
            }
            r.add_term(ma * tb->first, ca * tb->second);
        }
    }
    return r;
}

Series operator+(Series a, const Scalar &b)
{
    a.add_term(Monomial{}, b);
    return a;
}

Series operator-(Series a, const Scalar &b)
{
    a.add_term(Monomial{}, -b);
    return a;
}

Series Series::pow(int n) const
{
    if (n < 0) {
        return series_invert_unit(*this).pow(-n);
    }
    Series result = constant(m_spec, m_order, Scalar(1), m_field);
    Series base(*this);
    while (n > 0) {
        if ((n & 1) != 0) {
            result *= base;
        }
        n >>= 1;
        if (n > 0) {
            base *= base;
        }
    }
    return result;
}

bool operator==(const Series &a, const Series &b)
{
    if (!same_spec(a.m_spec, b.m_spec)) {
        return false;
    }
    int n = std::min(a.m_order, b.m_order);
    auto ta = a.truncated(n);
    auto tb = b.truncated(n);
    if (ta.m_terms.size() != tb.m_terms.size()) {
        return false;
    }
    for (auto i = ta.m_terms.begin(), j = tb.m_terms.begin(); i != ta.m_terms.end(); ++i, ++j) {
        if (!(i->first == j->first) || !(i->second == j->second)) {
            return false;
        }
    }
    return true;
}

std::complex<double> Series::evaluate(const std::vector<std::complex<double>> &point) const
{
    if (point.size() != m_spec->size()) {
        throw error("evaluation point has the wrong dimension");
    }
    std::complex<double> sum = 0;
    for (const auto &[m, c] : m_terms) {
        std::complex<double> v = c.to_complex();
        for (std::size_t k = 0; k < m_spec->size(); ++k) {
            for (int j = 0; j < m.e[k]; ++j) {
                v *= point[k];
            }
        }
        sum += v;
    }
    return sum;
}

std::string Series::monomial_string(const Monomial &m) const
{
    std::string s;
    for (std::size_t k = 0; k < m_spec->size(); ++k) {
        if (m.e[k] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += m_spec->name(k);
        if (m.e[k] > 1) {
            s += "^" + std::to_string(m.e[k]);
        }
    }
    return s.empty() ? "1" : s;
}

std::string Series::to_string() const
{
    std::vector<std::pair<int, const std::pair<const Monomial, Scalar> *>> v;
    for (const auto &t : m_terms) {
        v.emplace_back(degree(t.first), &t);
    }
    std::stable_sort(v.begin(), v.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    std::ostringstream os;
    bool first = true;
    for (const auto &[d, t] : v) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << t->second << ")";
        if (!t->first.is_one()) {
            os << "*" << monomial_string(t->first);
        }
    }
    if (first) {
        os << "0";
    }
    if (m_order != poly_order) {
        os << " + O(" << m_order + 1 << ")";
    }
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const Series &s)
{
    return os << s.to_string();
}

namespace
{

// Conservative exactness bound of s(bindings) given valuations of the bindings.
int substitution_order(const Series &s, const std::vector<std::optional<Series>> &b, int target_order)
{
    int order = target_order;
    for (const auto &x : b) {
        if (x) {
            order = std::min(order, x->order());
        }
    }
    if (s.is_polynomial()) {
        return order;
    }
    long long n1 = static_cast<long long>(s.order()) + 1;
    for (std::size_t k = 0; k < s.spec()->size(); ++k) {
        if (!b[k] || b[k]->is_zero()) {
            continue;
        }
        if (!b[k]->constant_term().is_zero()) {
            throw non_unit_error("binding for " + s.spec()->name(k) +
                                 " has a nonzero constant term; substitution into a truncated series is undefined");
        }
        long long val = b[k]->valuation();
        long long w = s.spec()->weight(k);
        long long bound = (n1 * val + w - 1) / w - 1;
        if (bound < order) {
            order = static_cast<int>(bound);
        }
    }
    return order;
}

} // namespace

Series series_substitute(const Series &s, const std::map<std::string, Series> &bindings, const VarSpecPtr &target,
                         int target_order)
{
    const auto &spec = *s.spec();
    std::vector<std::optional<Series>> b(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        auto it = bindings.find(spec.name(k));
        if (it != bindings.end()) {
            if (!same_spec(it->second.spec(), target)) {
                throw varspec_mismatch("binding for " + spec.name(k) + " is not in the target spec");
            }
            b[k] = it->second;
        } else if (target->find(spec.name(k))) {
            b[k] = Series::variable(target, poly_order, spec.name(k));
        }
    }
    for (const auto &t : s.terms()) {
        for (std::size_t k = 0; k < spec.size(); ++k) {
            if (t.first.e[k] != 0 && !b[k]) {
                throw varspec_mismatch("variable " + spec.name(k) + " has no binding and no target counterpart");
            }
        }
    }
    int order = substitution_order(s, b, target_order);
    Series result(target, order, s.field());

    // Single-term bindings act on monomials directly; the rest go through cached powers.
    std::vector<bool> mono(spec.size(), false);
    std::vector<Monomial> bm(spec.size());
    std::vector<Scalar> bc(spec.size());
    std::vector<std::vector<Series>> powers(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (b[k] && b[k]->terms().size() == 1) {
            mono[k] = true;
            bm[k] = b[k]->terms().begin()->first;
            bc[k] = b[k]->terms().begin()->second;
        }
    }
    auto power = [&](std::size_t k, int e) -> const Series & {
        auto &p = powers[k];
        if (p.empty()) {
            p.push_back(Series::constant(target, order, Scalar(1)));
        }
        while (static_cast<int>(p.size()) <= e) {
            p.push_back(p.back() * b[k]->truncated(order));
        }
        return p[static_cast<std::size_t>(e)];
    };
    for (const auto &[m, c] : s.terms()) {
        Scalar coef = c;
        Monomial mm;
        bool zero = false;
        std::vector<std::pair<std::size_t, int>> rest;
        for (std::size_t k = 0; k < spec.size() && !zero; ++k) {
            int e = m.e[k];
            if (e == 0) {
                continue;
            }
            if (b[k]->is_zero()) {
                zero = true;
            } else if (mono[k]) {
                for (int j = 0; j < e; ++j) {
                    mm = mm * bm[k];
                }
                coef *= bc[k].pow(e);
            } else {
                rest.emplace_back(k, e);
            }
        }
        if (zero) {
            continue;
        }
        if (rest.empty()) {
            result.add_term(mm, coef);
            continue;
        }
        Series prod = power(rest[0].first, rest[0].second);
        for (std::size_t j = 1; j < rest.size(); ++j) {
            prod *= power(rest[j].first, rest[j].second);
        }
        for (const auto &[pm, pc] : prod.terms()) {
            result.add_term(pm * mm, pc * coef);
        }
    }
    return result;
}

Series series_invert_unit(const Series &s)
{
    Scalar c0 = s.constant_term();
    if (c0.is_zero()) {
        throw non_unit_error("series has zero constant term and is not invertible");
    }
    Scalar inv = Scalar(1) / c0;
    if (s.terms().size() == 1) {
        return Series::constant(s.spec(), s.order(), inv, s.field());
    }
    if (s.is_polynomial()) {
        throw non_unit_error("inverse of a non-constant polynomial needs a finite order");
    }
    Series u = s * (-inv) + Scalar(1); // 1 - s/c0
    Series term = Series::constant(s.spec(), s.order(), inv, s.field());
    Series sum = term;
    while (true) {
        term *= u;
        if (term.is_zero()) {
            break;
        }
        sum += term;
    }
    return sum;
}

namespace
{

Series binomial_series(const Series &s, const char *what, Scalar (*coef)(int))
{
    if (!s.constant_term().is_one() &&
        !(s.field() == Field::f64 && std::abs(s.constant_term().to_complex() - 1.0) <= 1e-12)) {
        throw non_unit_error(std::string(what) + " requires constant term 1");
    }
    if (s.terms().size() == 1) {
        return Series::constant(s.spec(), s.order(), coef(0), s.field());
    }
    if (s.is_polynomial()) {
        throw non_unit_error(std::string(what) + " of a non-constant polynomial needs a finite order");
    }
    Series u = s - s.constant_term();
    Series sum = Series::constant(s.spec(), s.order(), coef(0), s.field());
    Series p = Series::constant(s.spec(), s.order(), Scalar(1), s.field());
    for (int k = 1;; ++k) {
        p *= u;
        if (p.is_zero()) {
            break;
        }
        sum += p * coef(k);
    }
    return sum;
}

Scalar sqrt_coef(int k)
{
    // binomial(1/2, k)
    Scalar c(1);
    for (int j = 0; j < k; ++j) {
        c *= Scalar::rational(1, 2) - Scalar(j);
        c /= Scalar(j + 1);
    }
    return c;
}

Scalar log_coef(int k)
{
    if (k == 0) {
        return Scalar();
    }
    return Scalar::rational(k % 2 == 1 ? 1 : -1, k);
}

} // namespace

Series series_sqrt_unit(const Series &s)
{
    return binomial_series(s, "sqrt", sqrt_coef);
}

Series series_log_unit(const Series &s)
{
    return binomial_series(s, "log", log_coef);
}

Series series_conjugate(const Series &s)
{
    const auto &spec = *s.spec();
    Series r(s.spec(), s.order(), s.field());
    for (const auto &[m, c] : s.terms()) {
        Monomial cm;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            if (m.e[k] == 0) {
                continue;
            }
            int p = spec.partner(k);
            if (p < 0) {
                throw error("variable " + spec.name(k) + " has no conjugate partner");
            }
            cm.e[static_cast<std::size_t>(p)] = m.e[k];
        }
        r.add_term(cm, c.conj());
    }
    return r;
}

Series series_partial(const Series &s, std::size_t k)
{
    if (k >= s.spec()->size()) {
        throw error("partial derivative in an unknown variable");
    }
    int order = s.is_polynomial() ? poly_order : s.order() - s.spec()->weight(k);
    Series r(s.spec(), std::max(order, 0), s.field());
    if (order < 0) {
        return r;
    }
    for (const auto &[m, c] : s.terms()) {
        if (m.e[k] == 0) {
            continue;
        }
        Monomial d = m;
        d.e[k] -= 1;
        r.add_term(d, c * Scalar(m.e[k]));
    }
    return r;
}

Series series_partial(const Series &s, const std::string &var)
{
    auto k = s.spec()->find(var);
    if (!k) {
        throw error("partial derivative in unknown variable " + var);
    }
    return series_partial(s, *k);
}

Series series_derivation(const Series &s, const std::map<std::string, Series> &images)
{
    std::optional<Series> sum;
    for (const auto &[v, img] : images) {
        Series t = series_partial(s, v) * img;
        sum = sum ? *sum + t : t;
    }
    if (!sum) {
        return Series(s.spec(), s.order(), s.field());
    }
    return *sum;
}

Series series_set_zero(const Series &s, const std::vector<std::string> &vars)
{
    std::vector<std::size_t> idx;
    for (const auto &v : vars) {
        idx.push_back(s.spec()->index(v));
    }
    Series r(s.spec(), s.order(), s.field());
    for (const auto &[m, c] : s.terms()) {
        bool keep = std::all_of(idx.begin(), idx.end(), [&m = m](std::size_t k) { return m.e[k] == 0; });
        if (keep) {
            r.add_term(m, c);
        }
    }
    return r;
}

Series series_reembed(const Series &s, const VarSpecPtr &target)
{
    const auto &spec = *s.spec();
    std::vector<int> map(spec.size(), -1);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (auto j = target->find(spec.name(k))) {
            map[k] = static_cast<int>(*j);
        }
    }
    Series r(target, s.order(), s.field());
    for (const auto &[m, c] : s.terms()) {
        Monomial t;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            if (m.e[k] == 0) {
                continue;
            }
            if (map[k] < 0) {
                throw varspec_mismatch("variable " + spec.name(k) + " is absent from the target spec");
            }
            t.e[static_cast<std::size_t>(map[k])] = m.e[k];
        }
        r.add_term(t, c);
    }
    return r;
}

SeriesTuple tuple_substitute(const SeriesTuple &t, const std::map<std::string, Series> &bindings,
                             const VarSpecPtr &target, int target_order)
{
    SeriesTuple r;
    for (const auto &s : t) {
        r.push_back(series_substitute(s, bindings, target, target_order));
    }
    return r;
}

SeriesTuple tuple_truncated(const SeriesTuple &t, int order)
{
    SeriesTuple r;
    for (const auto &s : t) {
        r.push_back(s.truncated(order));
    }
    return r;
}

int tuple_order(const SeriesTuple &t)
{
    int n = poly_order;
    for (const auto &s : t) {
        n = std::min(n, s.order());
    }
    return n;
}

} // namespace crmap
