#include <crmap/error.hpp>
#include <crmap/expr.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace crmap
{

ExprPtr expr_constant(const Scalar &c)
{
    return std::make_shared<const Expr>(Expr{ExprKind::constant, c, {}, 0, {}});
}

ExprPtr expr_variable(const std::string &n)
{
    return std::make_shared<const Expr>(Expr{ExprKind::variable, Scalar(), n, 0, {}});
}

ExprPtr expr_binary(ExprKind k, ExprPtr a, ExprPtr b)
{
    return std::make_shared<const Expr>(Expr{k, Scalar(), {}, 0, {std::move(a), std::move(b)}});
}

ExprPtr expr_pow(ExprPtr a, int n)
{
    if (n < 0) {
        throw error("negative exponent in expression");
    }
    return std::make_shared<const Expr>(Expr{ExprKind::pow, Scalar(), {}, n, {std::move(a)}});
}

ExprPtr expr_sqrt(ExprPtr a)
{
    return std::make_shared<const Expr>(Expr{ExprKind::sqrt, Scalar(), {}, 0, {std::move(a)}});
}

ExprPtr expr_neg(ExprPtr a)
{
    return std::make_shared<const Expr>(Expr{ExprKind::neg, Scalar(), {}, 0, {std::move(a)}});
}

namespace
{

struct Token {
    enum Type { ident, uint, sym, end } type;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(const std::string &s)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t k = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j, ++k) {
            if (s[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (k < s.size()) {
        char c = s[k];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (k < s.size() && s[k] != '\n') {
                advance(1);
            }
            continue;
        }
        int l = line, cc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
            std::size_t j = k;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) != 0 || s[j] == '_')) {
                ++j;
            }
            out.push_back({Token::ident, s.substr(k, j - k), l, cc});
            advance(j - k);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t j = k;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) != 0) {
                ++j;
            }
            out.push_back({Token::uint, s.substr(k, j - k), l, cc});
            advance(j - k);
            continue;
        }
        if (c == '-' && k + 1 < s.size() && s[k + 1] == '>') {
            out.push_back({Token::sym, "->", l, cc});
            advance(2);
            continue;
        }
        if (std::string("+-*/^()=;:{}").find(c) != std::string::npos) {
            out.push_back({Token::sym, std::string(1, c), l, cc});
            advance(1);
            continue;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", l, cc);
    }
    out.push_back({Token::end, "", line, col});
    return out;
}

class Parser
{
public:
    explicit Parser(const std::string &text) : m_toks(lex(text)) {}

    ExprPtr expression_only()
    {
        auto e = expr();
        if (peek().type != Token::end) {
            fail("unexpected '" + peek().text + "' after expression");
        }
        return e;
    }

    MapFile file()
    {
        MapFile f;
        while (peek().type != Token::end) {
            const Token &t = peek();
            if (t.type == Token::ident && t.text == "map") {
                f.maps.push_back(mapdef());
            } else if (t.type == Token::ident && t.text == "aut") {
                f.auts.push_back(autdef());
            } else {
                fail("expected 'map' or 'aut'");
            }
        }
        return f;
    }

private:
    const Token &peek(std::size_t ahead = 0) const
    {
        return m_toks[std::min(m_pos + ahead, m_toks.size() - 1)];
    }
    const Token &next()
    {
        const Token &t = peek();
        if (m_pos < m_toks.size() - 1) {
            ++m_pos;
        }
        return t;
    }
    [[noreturn]] void fail(const std::string &msg, const Token *at = nullptr) const
    {
        const Token &t = at != nullptr ? *at : peek();
        throw parse_error(msg, t.line, t.col);
    }
    bool is_sym(const std::string &s, std::size_t ahead = 0) const
    {
        return peek(ahead).type == Token::sym && peek(ahead).text == s;
    }
    void expect_sym(const std::string &s)
    {
        if (!is_sym(s)) {
            fail("expected '" + s + "'" + (peek().type == Token::end ? " before end of input" : ""));
        }
        next();
    }
    std::string expect_ident(const char *what)
    {
        if (peek().type != Token::ident) {
            fail(std::string("expected ") + what);
        }
        return next().text;
    }
    ModelId model()
    {
        const Token &t = peek();
        if (t.type != Token::ident) {
            fail("expected model id");
        }
        auto id = parse_model_id(t.text);
        if (!id) {
            fail("unknown model id '" + t.text + "'");
        }
        next();
        return *id;
    }

    MapDef mapdef()
    {
        const Token &start = next();
        MapDef m;
        m.name = expect_ident("map name");
        expect_sym(":");
        m.source = model();
        expect_sym("->");
        m.target = model();
        const auto &src = ambient(m.source);
        const auto &tgt = ambient(m.target);
        std::set<std::string> allowed(src.coords.begin(), src.coords.end());
        m_allowed = &allowed;
        expect_sym("{");
        m.components.assign(tgt.labels.size(), nullptr);
        std::size_t count = 0;
        do {
            const Token &lt = peek();
            std::string label = expect_ident("component label");
            auto it = std::find(tgt.labels.begin(), tgt.labels.end(), label);
            if (it == tgt.labels.end()) {
                fail("unknown component label '" + label + "' for target " + tgt.name, &lt);
            }
            auto idx = static_cast<std::size_t>(it - tgt.labels.begin());
            if (m.components[idx]) {
                fail("duplicate component '" + label + "'", &lt);
            }
            expect_sym("=");
            m.components[idx] = expr();
            expect_sym(";");
            ++count;
        } while (!is_sym("}") && peek().type != Token::end);
        expect_sym("}");
        m_allowed = nullptr;
        if (count != tgt.labels.size()) {
            fail("arity mismatch: map '" + m.name + "' has " + std::to_string(count) + " components, target " +
                     tgt.name + " needs " + std::to_string(tgt.labels.size()),
                 &start);
        }
        return m;
    }

    AutDef autdef()
    {
        next();
        AutDef a;
        a.name = expect_ident("automorphism name");
        expect_sym(":");
        a.model = model();
        std::set<std::string> none;
        m_allowed = &none;
        expect_sym("{");
        do {
            std::string p = expect_ident("parameter name");
            expect_sym("=");
            a.params.emplace_back(p, expr());
            expect_sym(";");
        } while (!is_sym("}") && peek().type != Token::end);
        expect_sym("}");
        m_allowed = nullptr;
        return a;
    }

    ExprPtr expr()
    {
        auto e = term();
        while (is_sym("+") || is_sym("-")) {
            auto k = next().text == "+" ? ExprKind::add : ExprKind::sub;
            e = expr_binary(k, e, term());
        }
        return e;
    }
    ExprPtr term()
    {
        auto e = factor();
        while (is_sym("*") || is_sym("/")) {
            auto k = next().text == "*" ? ExprKind::mul : ExprKind::div;
            e = expr_binary(k, e, factor());
        }
        return e;
    }
    ExprPtr factor()
    {
        auto b = base();
        if (is_sym("^")) {
            next();
            if (peek().type != Token::uint) {
                fail("expected unsigned integer exponent");
            }
            b = expr_pow(b, uint_value(next()));
        }
        return b;
    }
    int uint_value(const Token &t) const
    {
        if (t.text.size() > 6) {
            fail("exponent too large", &t);
        }
        return std::stoi(t.text);
    }
    ExprPtr base()
    {
        const Token &t = peek();
        if (t.type == Token::uint) {
            next();
            mpz_class num(t.text);
            if (is_sym("/") && peek(1).type == Token::uint) {
                next();
                const Token &d = next();
                mpz_class den(d.text);
                if (den == 0) {
                    fail("zero denominator in number literal", &d);
                }
                return expr_constant(Scalar(mpq_class(num, den)));
            }
            return expr_constant(Scalar(mpq_class(num)));
        }
        if (t.type == Token::ident) {
            if (t.text == "i") {
                next();
                return expr_constant(Scalar::i());
            }
            if (t.text == "sqrt") {
                next();
                expect_sym("(");
                auto e = expr();
                expect_sym(")");
                return expr_sqrt(e);
            }
            if (m_allowed != nullptr && m_allowed->count(t.text) == 0) {
                fail("unknown variable '" + t.text + "'");
            }
            next();
            return expr_variable(t.text);
        }
        if (is_sym("(")) {
            next();
            auto e = expr();
            expect_sym(")");
            return e;
        }
        if (is_sym("-")) {
            next();
            return expr_neg(base());
        }
        if (t.type == Token::end) {
            fail("unexpected end of input");
        }
        fail("unexpected '" + t.text + "'");
    }

    std::vector<Token> m_toks;
    std::size_t m_pos = 0;
    const std::set<std::string> *m_allowed = nullptr;
};

int precedence(const Expr &e)
{
    switch (e.kind) {
        case ExprKind::add:
        case ExprKind::sub:
            return 1;
        case ExprKind::mul:
        case ExprKind::div:
            return 2;
        case ExprKind::neg:
            return 3;
        case ExprKind::pow:
            return 4;
        default:
            return 5;
    }
}

bool simple_constant(const Scalar &c)
{
    if (c == Scalar::i()) {
        return true;
    }
    return c.is_gaussian() && c.im() == 0 && c.re() >= 0 && c.re().get_den() == 1;
}

void print_node(std::ostream &os, const ExprPtr &e, int ctx)
{
    switch (e->kind) {
        case ExprKind::constant:
            if (ctx == 0 || simple_constant(e->value)) {
                os << e->value.to_string();
            } else {
                os << "(" << e->value.to_string() << ")";
            }
            return;
        case ExprKind::variable:
            os << e->name;
            return;
        case ExprKind::sqrt:
            os << "sqrt(";
            print_node(os, e->args[0], 0);
            os << ")";
            return;
        default:
            break;
    }
    bool paren = precedence(*e) < ctx;
    if (paren) {
        os << "(";
    }
    switch (e->kind) {
        case ExprKind::add:
        case ExprKind::sub: {
            print_node(os, e->args[0], 1);
            os << (e->kind == ExprKind::add ? "+" : "-");
            const auto &r = e->args[1];
            print_node(os, r, r->kind == ExprKind::neg ? 5 : 2);
            break;
        }
        case ExprKind::mul:
        case ExprKind::div:
            print_node(os, e->args[0], 2);
            os << (e->kind == ExprKind::mul ? "*" : "/");
            print_node(os, e->args[1], 3);
            break;
        case ExprKind::neg:
            os << "-";
            print_node(os, e->args[0], 5);
            break;
        case ExprKind::pow: {
            const auto &b = e->args[0];
            if (b->kind == ExprKind::constant) {
                os << "(" << b->value.to_string() << ")";
            } else {
                print_node(os, b, 5);
            }
            os << "^" << e->exponent;
            break;
        }
        default:
            break;
    }
    if (paren) {
        os << ")";
    }
}

} // namespace

ExprPtr parse_expr(const std::string &text)
{
    Parser p(text);
    return p.expression_only();
}

MapFile parse_mapfile(const std::string &text)
{
    Parser p(text);
    return p.file();
}

std::vector<MapDef> parse_maps(const std::string &text)
{
    return parse_mapfile(text).maps;
}

std::string print_expr(const ExprPtr &e)
{
    std::ostringstream os;
    print_node(os, e, 0);
    return os.str();
}

ExprPtr fold_constants(const ExprPtr &e)
{
    if (e->kind == ExprKind::constant || e->kind == ExprKind::variable) {
        return e;
    }
    std::vector<ExprPtr> args;
    bool all_const = true;
    for (const auto &a : e->args) {
        args.push_back(fold_constants(a));
        all_const = all_const && args.back()->kind == ExprKind::constant;
    }
    if (all_const) {
        const Scalar &x = args[0]->value;
        switch (e->kind) {
            case ExprKind::add:
                return expr_constant(x + args[1]->value);
            case ExprKind::sub:
                return expr_constant(x - args[1]->value);
            case ExprKind::mul:
                return expr_constant(x * args[1]->value);
            case ExprKind::div:
                if (!args[1]->value.is_zero()) {
                    return expr_constant(x / args[1]->value);
                }
                break;
            case ExprKind::neg:
                return expr_constant(-x);
            case ExprKind::pow:
                return expr_constant(x.pow(e->exponent));
            case ExprKind::sqrt:
                if (x.is_exact()) {
                    if (auto r = x.sqrt()) {
                        return expr_constant(*r);
                    }
                }
                break;
            default:
                break;
        }
    }
    return std::make_shared<const Expr>(Expr{e->kind, e->value, e->name, e->exponent, std::move(args)});
}

bool expr_equal(const ExprPtr &a, const ExprPtr &b)
{
    if (a->kind != b->kind || a->exponent != b->exponent || a->name != b->name || a->args.size() != b->args.size()) {
        return false;
    }
    if (a->kind == ExprKind::constant && !(a->value == b->value)) {
        return false;
    }
    for (std::size_t k = 0; k < a->args.size(); ++k) {
        if (!expr_equal(a->args[k], b->args[k])) {
            return false;
        }
    }
    return true;
}

std::set<std::string> expr_variables(const ExprPtr &e)
{
    std::set<std::string> out;
    if (e->kind == ExprKind::variable) {
        out.insert(e->name);
    }
    for (const auto &a : e->args) {
        auto s = expr_variables(a);
        out.insert(s.begin(), s.end());
    }
    return out;
}

ExprPtr expr_substitute(const ExprPtr &e, const std::map<std::string, ExprPtr> &b)
{
    if (e->kind == ExprKind::variable) {
        auto it = b.find(e->name);
        return it == b.end() ? e : it->second;
    }
    if (e->kind == ExprKind::constant) {
        return e;
    }
    std::vector<ExprPtr> args;
    for (const auto &a : e->args) {
        args.push_back(expr_substitute(a, b));
    }
    return std::make_shared<const Expr>(Expr{e->kind, e->value, e->name, e->exponent, std::move(args)});
}

ExprPtr expr_conjugate(const ExprPtr &e, const std::map<std::string, std::string> &rename)
{
    if (e->kind == ExprKind::variable) {
        auto it = rename.find(e->name);
        return it == rename.end() ? e : expr_variable(it->second);
    }
    if (e->kind == ExprKind::constant) {
        return expr_constant(e->value.conj());
    }
    std::vector<ExprPtr> args;
    for (const auto &a : e->args) {
        args.push_back(expr_conjugate(a, rename));
    }
    return std::make_shared<const Expr>(Expr{e->kind, e->value, e->name, e->exponent, std::move(args)});
}

namespace
{

struct Expander {
    const std::map<std::string, Series> &bindings;
    const VarSpecPtr &spec;
    int order;
    Field field;

    Series constant(const Scalar &c) const
    {
        return Series::constant(spec, order, field == Field::f64 ? c.to_float() : c, field);
    }

    Series run(const ExprPtr &e) const
    {
        switch (e->kind) {
            case ExprKind::constant:
                return constant(e->value);
            case ExprKind::variable: {
                auto it = bindings.find(e->name);
                if (it != bindings.end()) {
                    return field == Field::f64 ? it->second.truncated(order).to_float() : it->second.truncated(order);
                }
                if (!spec->find(e->name)) {
                    throw error("unbound variable " + e->name + " in expansion");
                }
                return Series::variable(spec, order, e->name, field);
            }
            case ExprKind::add:
                return run(e->args[0]) + run(e->args[1]);
            case ExprKind::sub:
                return run(e->args[0]) - run(e->args[1]);
            case ExprKind::mul:
                return run(e->args[0]) * run(e->args[1]);
            case ExprKind::neg:
                return -run(e->args[0]);
            case ExprKind::pow:
                return run(e->args[0]).pow(e->exponent);
            case ExprKind::div: {
                Series num = run(e->args[0]);
                Series den = run(e->args[1]);
                Scalar c0 = den.constant_term();
                if (c0.is_zero()) {
                    throw non_unit_error("denominator " + print_expr(e->args[1]) + " vanishes at the base point");
                }
                if (den.terms().size() == 1) {
                    return num * (Scalar(1) / c0);
                }
                if (den.is_polynomial()) {
                    throw non_unit_error("non-constant denominator " + print_expr(e->args[1]) +
                                         " in polynomial expansion");
                }
                return num * series_invert_unit(den);
            }
            case ExprKind::sqrt: {
                Series rad = run(e->args[0]);
                Scalar c0 = rad.constant_term();
                if (c0.is_zero()) {
                    throw non_unit_error("sqrt radicand " + print_expr(e->args[0]) + " vanishes at the base point");
                }
                auto r0 = c0.sqrt();
                if (!r0) {
                    throw field_error("sqrt of radicand constant " + c0.to_string() + " is not exact");
                }
                if (rad.terms().size() == 1) {
                    return constant(*r0);
                }
                if (rad.is_polynomial()) {
                    throw non_unit_error("non-constant sqrt radicand in polynomial expansion");
                }
                if (c0.is_one()) {
                    return series_sqrt_unit(rad);
                }
                return series_sqrt_unit(rad * (Scalar(1) / c0)) * *r0;
            }
        }
        throw error("bad expression node");
    }
};

} // namespace

Series expand_expr(const ExprPtr &e, const std::map<std::string, Series> &bindings, const VarSpecPtr &spec, int order,
                   Field field)
{
    return Expander{bindings, spec, order, field}.run(e);
}

Series expand_expr(const ExprPtr &e, const VarSpecPtr &spec, int order, Field field)
{
    static const std::map<std::string, Series> none;
    return Expander{none, spec, order, field}.run(e);
}

std::complex<double> eval_numeric(const ExprPtr &e, const std::map<std::string, std::complex<double>> &values)
{
    switch (e->kind) {
        case ExprKind::constant:
            return e->value.to_complex();
        case ExprKind::variable: {
            auto it = values.find(e->name);
            if (it == values.end()) {
                throw error("no value for variable " + e->name);
            }
            return it->second;
        }
        case ExprKind::add:
            return eval_numeric(e->args[0], values) + eval_numeric(e->args[1], values);
        case ExprKind::sub:
            return eval_numeric(e->args[0], values) - eval_numeric(e->args[1], values);
        case ExprKind::mul:
            return eval_numeric(e->args[0], values) * eval_numeric(e->args[1], values);
        case ExprKind::neg:
            return -eval_numeric(e->args[0], values);
        case ExprKind::pow: {
            auto b = eval_numeric(e->args[0], values);
            std::complex<double> r = 1;
            for (int k = 0; k < e->exponent; ++k) {
                r *= b;
            }
            return r;
        }
        case ExprKind::div: {
            auto d = eval_numeric(e->args[1], values);
            if (std::abs(d) < 1e-14) {
                throw singular_point("denominator " + print_expr(e->args[1]) + " vanishes");
            }
            return eval_numeric(e->args[0], values) / d;
        }
        case ExprKind::sqrt:
            return std::sqrt(eval_numeric(e->args[0], values));
    }
    throw error("bad expression node");
}

void validate_mapdef(const MapDef &m)
{
    const auto &src = ambient(m.source);
    const auto &tgt = ambient(m.target);
    if (m.components.size() != tgt.labels.size()) {
        throw error("map " + m.name + ": component count " + std::to_string(m.components.size()) +
                    " differs from target dimension " + std::to_string(tgt.labels.size()));
    }
    std::set<std::string> allowed(src.coords.begin(), src.coords.end());
    for (const auto &c : m.components) {
        if (!c) {
            throw error("map " + m.name + ": missing component");
        }
        for (const auto &v : expr_variables(c)) {
            if (allowed.count(v) == 0) {
                throw error("map " + m.name + ": unknown variable " + v);
            }
        }
    }
    if (!m.base.empty() && m.base.size() != src.coords.size()) {
        throw error("map " + m.name + ": base point has the wrong dimension");
    }
}

namespace
{

// Family names such as HA(1,1) become identifiers such as HA_1_1.
std::string identifier(const std::string &name)
{
    std::string out;
    for (char c : name) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
        if (ok) {
            out += c;
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    while (!out.empty() && out.back() == '_') {
        out.pop_back();
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) != 0) {
        out = "m_" + out;
    }
    return out;
}

} // namespace

std::string print_mapdef(const MapDef &m)
{
    const auto &tgt = ambient(m.target);
    std::ostringstream os;
    os << "map " << identifier(m.name) << " : " << ambient(m.source).name << " -> " << tgt.name << " {\n";
    for (std::size_t k = 0; k < m.components.size(); ++k) {
        os << "  " << tgt.labels[k] << " = " << print_expr(m.components[k]) << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace crmap
