#include <crmap/error.hpp>
#include <crmap/scalar.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace crmap
{

namespace
{

void gauss_mul(mpq_class &ar, mpq_class &ai, const mpq_class &br, const mpq_class &bi)
{
    mpq_class r = ar * br - ai * bi;
    mpq_class im = ar * bi + ai * br;
    ar = std::move(r);
    ai = std::move(im);
}

bool perfect_square(const mpz_class &n, mpz_class &root)
{
    if (n < 0) {
        return false;
    }
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) {
        return false;
    }
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return true;
}

bool rational_sqrt(const mpq_class &q, mpq_class &root)
{
    mpz_class a, b;
    if (!perfect_square(q.get_num(), a) || !perfect_square(q.get_den(), b)) {
        return false;
    }
    root = mpq_class(a, b);
    root.canonicalize();
    return true;
}

// Writes n = k^2 * d with d squarefree. Fails when n has a cofactor too large to factor.
bool squarefree_split(mpz_class n, mpz_class &k, mpz_class &d)
{
    constexpr unsigned long limit = 100000;
    k = 1;
    d = 1;
    for (unsigned long p = 2; p < limit && p * p <= n; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
            n /= p;
            ++e;
        }
        for (unsigned j = 0; j < e / 2; ++j) {
            k *= p;
        }
        if (e % 2 == 1) {
            d *= p;
        }
    }
    mpz_class r;
    if (n == 1) {
        return true;
    }
    if (perfect_square(n, r)) {
        k *= r;
        return true;
    }
    if (n < mpz_class(limit) * limit) {
        d *= n;
        return true;
    }
    return false;
}

std::string gauss_string(const mpq_class &re, const mpq_class &im)
{
    std::ostringstream os;
    if (im == 0) {
        os << re;
        return os.str();
    }
    if (re != 0) {
        os << re << (im > 0 ? "+" : "-");
    } else if (im < 0) {
        os << "-";
    }
    mpq_class a = abs(im);
    if (a != 1) {
        os << a << "*";
    }
    os << "i";
    return os.str();
}

} // namespace

Scalar::Scalar() : m_v(exact_rep{}) {}

Scalar::Scalar(long n) : m_v(exact_rep{mpq_class(n), mpq_class(0), nullptr}) {}

Scalar::Scalar(const mpq_class &re, const mpq_class &im) : m_v(exact_rep{re, im, nullptr})
{
    auto &e = std::get<exact_rep>(m_v);
    e.re.canonicalize();
    e.im.canonicalize();
}

Scalar::Scalar(std::complex<double> z) : m_v(z) {}

Scalar::Scalar(const Scalar &other)
{
    if (const auto *e = std::get_if<exact_rep>(&other.m_v)) {
        exact_rep c{e->re, e->im, nullptr};
        if (e->s) {
            c.s = std::make_unique<surd_part>(*e->s);
        }
        m_v = std::move(c);
    } else {
        m_v = std::get<std::complex<double>>(other.m_v);
    }
}

Scalar &Scalar::operator=(const Scalar &other)
{
    if (this != &other) {
        Scalar tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

Scalar::~Scalar() = default;

Scalar Scalar::i()
{
    return Scalar(0, 1);
}

Scalar Scalar::rational(long p, long q)
{
    mpq_class r(p, q);
    r.canonicalize();
    return Scalar(r);
}

Scalar Scalar::surd(const Scalar &a, const Scalar &b, long d)
{
    if (!a.is_gaussian() || !b.is_gaussian()) {
        throw field_error("surd parts must be Gaussian rationals");
    }
    Scalar out(a);
    if (d < 2) {
        throw field_error("surd radicand must be a squarefree integer > 1");
    }
    if (b.is_zero()) {
        return out;
    }
    auto &e = std::get<exact_rep>(out.m_v);
    e.s = std::make_unique<surd_part>(surd_part{b.re(), b.im(), d});
    return out;
}

Field Scalar::field() const
{
    return std::holds_alternative<exact_rep>(m_v) ? Field::exact : Field::f64;
}

bool Scalar::is_zero() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        return e->re == 0 && e->im == 0 && !e->s;
    }
    return std::get<std::complex<double>>(m_v) == 0.0;
}

bool Scalar::is_one() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        return e->re == 1 && e->im == 0 && !e->s;
    }
    return std::get<std::complex<double>>(m_v) == 1.0;
}

bool Scalar::is_gaussian() const
{
    const auto *e = std::get_if<exact_rep>(&m_v);
    return e != nullptr && !e->s;
}

bool Scalar::is_real() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        return e->im == 0 && (!e->s || e->s->im == 0);
    }
    return std::get<std::complex<double>>(m_v).imag() == 0.0;
}

int Scalar::sign() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        int sa = sgn(e->re);
        if (!e->s) {
            return sa;
        }
        int sb = sgn(e->s->re);
        if (sa == 0 || sa == sb) {
            return sb;
        }
        mpq_class a2 = e->re * e->re;
        mpq_class b2d = e->s->re * e->s->re * e->s->d;
        return a2 > b2d ? sa : sb;
    }
    double r = std::get<std::complex<double>>(m_v).real();
    return (r > 0) - (r < 0);
}

const mpq_class &Scalar::re() const
{
    if (!is_gaussian()) {
        throw field_error("re() requires a Gaussian rational scalar");
    }
    return std::get<exact_rep>(m_v).re;
}

const mpq_class &Scalar::im() const
{
    if (!is_gaussian()) {
        throw field_error("im() requires a Gaussian rational scalar");
    }
    return std::get<exact_rep>(m_v).im;
}

long Scalar::surd_radicand() const
{
    const auto *e = std::get_if<exact_rep>(&m_v);
    return (e != nullptr && e->s) ? e->s->d : 0;
}

void Scalar::normalize()
{
    auto *e = std::get_if<exact_rep>(&m_v);
    if (e != nullptr && e->s && e->s->re == 0 && e->s->im == 0) {
        e->s.reset();
    }
}

Scalar Scalar::conj() const
{
    Scalar out(*this);
    if (auto *e = std::get_if<exact_rep>(&out.m_v)) {
        e->im = -e->im;
        if (e->s) {
            e->s->im = -e->s->im;
        }
    } else {
        auto &z = std::get<std::complex<double>>(out.m_v);
        z = std::conj(z);
    }
    return out;
}

Scalar Scalar::real_part() const
{
    return (*this + conj()) * Scalar::rational(1, 2);
}

Scalar Scalar::imag_part() const
{
    return (*this - conj()) * Scalar(0, mpq_class(-1, 2));
}

Scalar Scalar::abs2() const
{
    return *this * conj();
}

Scalar Scalar::to_float() const
{
    return Scalar(to_complex());
}

std::complex<double> Scalar::to_complex() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        std::complex<double> z(e->re.get_d(), e->im.get_d());
        if (e->s) {
            z += std::complex<double>(e->s->re.get_d(), e->s->im.get_d()) * std::sqrt(static_cast<double>(e->s->d));
        }
        return z;
    }
    return std::get<std::complex<double>>(m_v);
}

std::optional<Scalar> Scalar::sqrt() const
{
    if (!is_exact()) {
        return Scalar(std::sqrt(std::get<std::complex<double>>(m_v)));
    }
    if (!is_gaussian()) {
        return std::nullopt;
    }
    const auto &e = std::get<exact_rep>(m_v);
    if (e.im == 0) {
        mpq_class a = abs(e.re);
        mpz_class k, d;
        if (!squarefree_split(a.get_num() * a.get_den(), k, d) || !d.fits_slong_p()) {
            return std::nullopt;
        }
        mpq_class c(k, a.get_den());
        c.canonicalize();
        bool neg = e.re < 0;
        if (d == 1) {
            return neg ? Scalar(0, c) : Scalar(c);
        }
        return neg ? surd(Scalar(), Scalar(0, c), d.get_si()) : surd(Scalar(), Scalar(c), d.get_si());
    }
    mpq_class m;
    if (!rational_sqrt(e.re * e.re + e.im * e.im, m)) {
        return std::nullopt;
    }
    mpq_class a;
    if (!rational_sqrt((e.re + m) / 2, a)) {
        return std::nullopt;
    }
    return Scalar(a, e.im / (2 * a));
}

Scalar Scalar::pow(int n) const
{
    if (n < 0) {
        return Scalar(1) / pow(-n);
    }
    Scalar result(1), base(*this);
    if (!is_exact()) {
        result = result.to_float();
    }
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

Scalar Scalar::operator-() const
{
    Scalar out(*this);
    if (auto *e = std::get_if<exact_rep>(&out.m_v)) {
        e->re = -e->re;
        e->im = -e->im;
        if (e->s) {
            e->s->re = -e->s->re;
            e->s->im = -e->s->im;
        }
    } else {
        auto &z = std::get<std::complex<double>>(out.m_v);
        z = -z;
    }
    return out;
}

Scalar &Scalar::operator+=(const Scalar &b)
{
    if (!is_exact() || !b.is_exact()) {
        m_v = to_complex() + b.to_complex();
        return *this;
    }
    auto &x = std::get<exact_rep>(m_v);
    const auto &y = std::get<exact_rep>(b.m_v);
    x.re += y.re;
    x.im += y.im;
    if (y.s) {
        if (!x.s) {
            x.s = std::make_unique<surd_part>(*y.s);
        } else {
            if (x.s->d != y.s->d) {
                throw field_error("scalars with different square-root extensions");
            }
            x.s->re += y.s->re;
            x.s->im += y.s->im;
        }
        normalize();
    }
    return *this;
}

Scalar &Scalar::operator-=(const Scalar &b)
{
    return *this += -b;
}

Scalar &Scalar::operator*=(const Scalar &b)
{
    if (!is_exact() || !b.is_exact()) {
        m_v = to_complex() * b.to_complex();
        return *this;
    }
    auto &x = std::get<exact_rep>(m_v);
    const auto &y = std::get<exact_rep>(b.m_v);
    if (!x.s && !y.s) {
        gauss_mul(x.re, x.im, y.re, y.im);
        return *this;
    }
    if (!y.s) {
        gauss_mul(x.re, x.im, y.re, y.im);
        gauss_mul(x.s->re, x.s->im, y.re, y.im);
        normalize();
        return *this;
    }
    if (!x.s) {
        x.s = std::make_unique<surd_part>(surd_part{x.re, x.im, y.s->d});
        gauss_mul(x.s->re, x.s->im, y.s->re, y.s->im);
        gauss_mul(x.re, x.im, y.re, y.im);
        normalize();
        return *this;
    }
    if (x.s->d != y.s->d) {
        throw field_error("scalars with different square-root extensions");
    }
    // (a + b r)(c + e r) = (ac + be d) + (ae + bc) r
    mpq_class ar = x.re, ai = x.im, br = x.s->re, bi = x.s->im;
    mpq_class acr = ar, aci = ai;
    gauss_mul(acr, aci, y.re, y.im);
    mpq_class ber = br, bei = bi;
    gauss_mul(ber, bei, y.s->re, y.s->im);
    mpq_class aer = ar, aei = ai;
    gauss_mul(aer, aei, y.s->re, y.s->im);
    mpq_class bcr = br, bci = bi;
    gauss_mul(bcr, bci, y.re, y.im);
    x.re = acr + ber * x.s->d;
    x.im = aci + bei * x.s->d;
    x.s->re = aer + bcr;
    x.s->im = aei + bci;
    normalize();
    return *this;
}

Scalar &Scalar::operator/=(const Scalar &b)
{
    if (b.is_zero()) {
        throw non_unit_error("division by zero scalar");
    }
    if (!is_exact() || !b.is_exact()) {
        m_v = to_complex() / b.to_complex();
        return *this;
    }
    const auto &y = std::get<exact_rep>(b.m_v);
    if (!y.s) {
        mpq_class n = y.re * y.re + y.im * y.im;
        *this *= Scalar(y.re / n, -y.im / n);
        return *this;
    }
    // 1/(c + e r) = (c - e r)/(c^2 - e^2 d)
    Scalar c(y.re, y.im);
    Scalar e(y.s->re, y.s->im);
    Scalar norm = c * c - e * e * Scalar(y.s->d);
    *this *= surd(c, -e, y.s->d);
    *this /= norm;
    return *this;
}

bool operator==(const Scalar &a, const Scalar &b)
{
    if (a.is_exact() != b.is_exact()) {
        return a.to_complex() == b.to_complex();
    }
    if (!a.is_exact()) {
        return std::get<std::complex<double>>(a.m_v) == std::get<std::complex<double>>(b.m_v);
    }
    const auto &x = std::get<Scalar::exact_rep>(a.m_v);
    const auto &y = std::get<Scalar::exact_rep>(b.m_v);
    if (x.re != y.re || x.im != y.im || static_cast<bool>(x.s) != static_cast<bool>(y.s)) {
        return false;
    }
    return !x.s || (x.s->d == y.s->d && x.s->re == y.s->re && x.s->im == y.s->im);
}

std::string Scalar::to_string() const
{
    if (const auto *e = std::get_if<exact_rep>(&m_v)) {
        if (!e->s) {
            return gauss_string(e->re, e->im);
        }
        std::string s = "(" + gauss_string(e->s->re, e->s->im) + ")*sqrt(" + std::to_string(e->s->d) + ")";
        if (e->re == 0 && e->im == 0) {
            return s;
        }
        return "(" + gauss_string(e->re, e->im) + ")+" + s;
    }
    std::ostringstream os;
    os.precision(17);
    auto z = std::get<std::complex<double>>(m_v);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "*i";
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const Scalar &s)
{
    return os << s.to_string();
}

bool approx_equal(const Scalar &a, const Scalar &b, double tol)
{
    auto x = a.to_complex();
    auto y = b.to_complex();
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

} // namespace crmap
