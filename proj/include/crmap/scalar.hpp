#ifndef CRMAP_SCALAR_HPP
#define CRMAP_SCALAR_HPP

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace crmap
{

enum class Field { exact, f64 };

// A complex scalar. The exact variant is (re + i im) + (sre + i sim) * sqrt(d)
// with Gaussian rational parts and a squarefree integer d > 1; the surd part is
// absent for plain Gaussian rationals. Only one d may occur in an expression.
class Scalar
{
public:
    Scalar();
    Scalar(long n);
    Scalar(const mpq_class &re, const mpq_class &im = 0);
    explicit Scalar(std::complex<double> z);

    Scalar(const Scalar &);
    Scalar(Scalar &&) noexcept = default;
    Scalar &operator=(const Scalar &);
    Scalar &operator=(Scalar &&) noexcept = default;
    ~Scalar();

    static Scalar i();
    static Scalar rational(long p, long q);
    // a + b*sqrt(d), d squarefree > 1.
    static Scalar surd(const Scalar &a, const Scalar &b, long d);

    Field field() const;
    bool is_exact() const
    {
        return field() == Field::exact;
    }
    bool is_zero() const;
    bool is_one() const;
    // Gaussian rational without surd part.
    bool is_gaussian() const;
    bool is_real() const;
    // Sign of a real scalar.
    int sign() const;

    const mpq_class &re() const;
    const mpq_class &im() const;
    long surd_radicand() const;

    Scalar conj() const;
    Scalar real_part() const;
    Scalar imag_part() const;
    Scalar abs2() const;
    Scalar to_float() const;
    std::complex<double> to_complex() const;
    // Principal square root. Exact when the result is representable, always for floats.
    std::optional<Scalar> sqrt() const;
    Scalar pow(int n) const;

    Scalar operator-() const;
    Scalar &operator+=(const Scalar &);
    Scalar &operator-=(const Scalar &);
    Scalar &operator*=(const Scalar &);
    Scalar &operator/=(const Scalar &);

    friend Scalar operator+(Scalar a, const Scalar &b)
    {
        return a += b;
    }
    friend Scalar operator-(Scalar a, const Scalar &b)
    {
        return a -= b;
    }
    friend Scalar operator*(Scalar a, const Scalar &b)
    {
        return a *= b;
    }
    friend Scalar operator/(Scalar a, const Scalar &b)
    {
        return a /= b;
    }
    friend bool operator==(const Scalar &, const Scalar &);

    std::string to_string() const;

private:
    struct surd_part {
        mpq_class re, im;
        long d;
    };
    struct exact_rep {
        mpq_class re, im;
        std::unique_ptr<surd_part> s;
    };
    void normalize();

    std::variant<exact_rep, std::complex<double>> m_v;
};

std::ostream &operator<<(std::ostream &, const Scalar &);

bool approx_equal(const Scalar &, const Scalar &, double tol);

} // namespace crmap

#endif
