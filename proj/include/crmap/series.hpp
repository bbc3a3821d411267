#ifndef CRMAP_SERIES_HPP
#define CRMAP_SERIES_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <crmap/scalar.hpp>

namespace crmap
{

inline constexpr std::size_t max_vars = 20;

// Order of a series that is an exact polynomial (no truncation).
inline constexpr int poly_order = std::numeric_limits<int>::max();

class VarSpec
{
public:
    // partners[k] names the conjugate partner of variable k, or is empty.
    VarSpec(std::vector<std::string> names, std::vector<int> weights, std::vector<std::string> partners = {});

    std::size_t size() const
    {
        return m_names.size();
    }
    const std::string &name(std::size_t k) const
    {
        return m_names[k];
    }
    int weight(std::size_t k) const
    {
        return m_weights[k];
    }
    // Index of the conjugate partner, -1 if none.
    int partner(std::size_t k) const
    {
        return m_partner[k];
    }
    const std::vector<std::string> &names() const
    {
        return m_names;
    }
    std::optional<std::size_t> find(const std::string &) const;
    std::size_t index(const std::string &) const;

    friend bool operator==(const VarSpec &, const VarSpec &);

private:
    std::vector<std::string> m_names;
    std::vector<int> m_weights;
    std::vector<int> m_partner;
};

using VarSpecPtr = std::shared_ptr<const VarSpec>;

VarSpecPtr make_varspec(std::vector<std::string> names, std::vector<int> weights,
                        std::vector<std::string> partners = {});
// Holomorphic variables followed by their conjugates, named with a "b" suffix.
VarSpecPtr make_complexified(const std::vector<std::string> &names, const std::vector<int> &weights);

bool same_spec(const VarSpecPtr &, const VarSpecPtr &);

struct Monomial {
    std::array<std::uint8_t, max_vars> e{};

    friend bool operator==(const Monomial &a, const Monomial &b)
    {
        return a.e == b.e;
    }
    friend bool operator<(const Monomial &a, const Monomial &b)
    {
        return a.e < b.e;
    }
    Monomial operator*(const Monomial &) const;
    bool is_one() const;
    bool divides(const Monomial &) const;
    Monomial operator/(const Monomial &) const;
};

class Series
{
public:
    using term_map = std::map<Monomial, Scalar>;

    Series(VarSpecPtr spec, int order, Field field = Field::exact);

    static Series constant(VarSpecPtr spec, int order, const Scalar &c, Field field = Field::exact);
    static Series variable(VarSpecPtr spec, int order, const std::string &name, Field field = Field::exact);
    static Series polynomial(VarSpecPtr spec, const std::vector<std::pair<Monomial, Scalar>> &terms);

    const VarSpecPtr &spec() const
    {
        return m_spec;
    }
    int order() const
    {
        return m_order;
    }
    Field field() const
    {
        return m_field;
    }
    const term_map &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    bool is_polynomial() const
    {
        return m_order == poly_order;
    }

    int degree(const Monomial &) const;
    Monomial monomial(std::initializer_list<std::pair<std::string, int>>) const;
    Scalar coeff(const Monomial &) const;
    Scalar coeff(std::initializer_list<std::pair<std::string, int>> m) const
    {
        return coeff(monomial(m));
    }
    Scalar constant_term() const;

    // Adds c * m, honouring truncation and canonical form.
    void add_term(const Monomial &m, const Scalar &c);

    // Lowest weighted degree of a stored term; poly_order when zero.
    int valuation() const;
    // First term in (weighted degree, exponent) order.
    std::optional<std::pair<Monomial, Scalar>> lowest_term() const;
    // Largest unweighted degree in the given variables.
    int max_degree_in(const std::vector<std::size_t> &vars) const;

    Series truncated(int order) const;
    Series to_float() const;
    Series chop(double tol) const;
    double max_abs() const;
    bool is_zero_within(double tol) const
    {
        return max_abs() <= tol;
    }

    Series operator-() const;
    Series &operator+=(const Series &);
    Series &operator-=(const Series &);
    Series &operator*=(const Series &);
    Series &operator*=(const Scalar &);

    friend Series operator+(Series a, const Series &b)
    {
        return a += b;
    }
    friend Series operator-(Series a, const Series &b)
    {
        return a -= b;
    }
    friend Series operator*(const Series &a, const Series &b);
    friend Series operator*(Series a, const Scalar &b)
    {
        return a *= b;
    }
    friend Series operator*(const Scalar &b, Series a)
    {
        return a *= b;
    }
    friend Series operator+(Series a, const Scalar &b);
    friend Series operator-(Series a, const Scalar &b);

    Series pow(int n) const;

    // Equality of coefficient tables up to the smaller of the two orders.
    friend bool operator==(const Series &, const Series &);

    std::complex<double> evaluate(const std::vector<std::complex<double>> &point) const;

    std::string to_string() const;
    std::string monomial_string(const Monomial &) const;

private:
    void check_spec(const Series &) const;
    void promote_to_float();

    VarSpecPtr m_spec;
    int m_order;
    Field m_field;
    term_map m_terms;
};

using SeriesTuple = std::vector<Series>;

Series series_substitute(const Series &s, const std::map<std::string, Series> &bindings, const VarSpecPtr &target,
                         int target_order);
Series series_invert_unit(const Series &s);
Series series_sqrt_unit(const Series &s);
Series series_log_unit(const Series &s);
Series series_conjugate(const Series &s);
Series series_partial(const Series &s, const std::string &var);
Series series_partial(const Series &s, std::size_t var);
// Sum over v of d s/d v * images[v].
Series series_derivation(const Series &s, const std::map<std::string, Series> &images);
// Drops every term containing one of the variables (substitution by zero).
Series series_set_zero(const Series &s, const std::vector<std::string> &vars);
// Moves a series to another spec by variable name; absent variables must not occur.
Series series_reembed(const Series &s, const VarSpecPtr &target);

SeriesTuple tuple_substitute(const SeriesTuple &t, const std::map<std::string, Series> &bindings,
                             const VarSpecPtr &target, int target_order);
SeriesTuple tuple_truncated(const SeriesTuple &t, int order);
int tuple_order(const SeriesTuple &t);

std::ostream &operator<<(std::ostream &, const Series &);

} // namespace crmap

#endif
