#ifndef CRMAP_EXPR_HPP
#define CRMAP_EXPR_HPP

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <crmap/ambient.hpp>
#include <crmap/scalar.hpp>
#include <crmap/series.hpp>

namespace crmap
{

enum class ExprKind { constant, variable, add, sub, mul, div, pow, sqrt, neg };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    Scalar value;
    std::string name;
    int exponent = 0;
    std::vector<ExprPtr> args;
};

ExprPtr expr_constant(const Scalar &);
ExprPtr expr_variable(const std::string &);
ExprPtr expr_binary(ExprKind, ExprPtr, ExprPtr);
ExprPtr expr_pow(ExprPtr, int);
ExprPtr expr_sqrt(ExprPtr);
ExprPtr expr_neg(ExprPtr);

// Thin value wrapper for writing formulas in C++.
class Ex
{
public:
    Ex(ExprPtr p) : m_p(std::move(p)) {}
    Ex(long n) : m_p(expr_constant(Scalar(n))) {}
    Ex(const Scalar &c) : m_p(expr_constant(c)) {}
    static Ex var(const std::string &n)
    {
        return Ex(expr_variable(n));
    }
    const ExprPtr &ptr() const
    {
        return m_p;
    }
    operator ExprPtr() const
    {
        return m_p;
    }
    friend Ex operator+(const Ex &a, const Ex &b)
    {
        return expr_binary(ExprKind::add, a.m_p, b.m_p);
    }
    friend Ex operator-(const Ex &a, const Ex &b)
    {
        return expr_binary(ExprKind::sub, a.m_p, b.m_p);
    }
    friend Ex operator*(const Ex &a, const Ex &b)
    {
        return expr_binary(ExprKind::mul, a.m_p, b.m_p);
    }
    friend Ex operator/(const Ex &a, const Ex &b)
    {
        return expr_binary(ExprKind::div, a.m_p, b.m_p);
    }
    Ex operator-() const
    {
        return expr_neg(m_p);
    }

private:
    ExprPtr m_p;
};

inline Ex pow(const Ex &a, int n)
{
    return expr_pow(a.ptr(), n);
}
inline Ex sqrt(const Ex &a)
{
    return expr_sqrt(a.ptr());
}

ExprPtr parse_expr(const std::string &text);
std::string print_expr(const ExprPtr &);
ExprPtr fold_constants(const ExprPtr &);
bool expr_equal(const ExprPtr &, const ExprPtr &);
std::set<std::string> expr_variables(const ExprPtr &);
ExprPtr expr_substitute(const ExprPtr &, const std::map<std::string, ExprPtr> &);
// Conjugates constants and renames variables through the given map.
ExprPtr expr_conjugate(const ExprPtr &, const std::map<std::string, std::string> &rename);

// Expands e with each variable bound to a series (all in spec); unbound variables
// resolve to the same-named variable of spec.
Series expand_expr(const ExprPtr &e, const std::map<std::string, Series> &bindings, const VarSpecPtr &spec, int order,
                   Field field = Field::exact);
Series expand_expr(const ExprPtr &e, const VarSpecPtr &spec, int order, Field field = Field::exact);

std::complex<double> eval_numeric(const ExprPtr &e, const std::map<std::string, std::complex<double>> &values);

struct MapDef {
    std::string name;
    ModelId source = ModelId::H5;
    ModelId target = ModelId::X;
    std::vector<ExprPtr> components;
    // Source base point; empty means the default base point of the source model.
    std::vector<Scalar> base;
};

struct AutDef {
    std::string name;
    ModelId model = ModelId::H5;
    std::vector<std::pair<std::string, ExprPtr>> params;
};

struct MapFile {
    std::vector<MapDef> maps;
    std::vector<AutDef> auts;
};

MapFile parse_mapfile(const std::string &text);
std::vector<MapDef> parse_maps(const std::string &text);
std::string print_mapdef(const MapDef &);
void validate_mapdef(const MapDef &);

} // namespace crmap

#endif
