#ifndef ECRCF_PARSE_HPP
#define ECRCF_PARSE_HPP

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <ecrcf/curve.hpp>
#include <ecrcf/error.hpp>
#include <ecrcf/puiseux.hpp>

namespace ecrcf
{

// Series grammar:
//   series   := term (('+' | '-') term)*
//   term     := ['-' | '+'] (product | 'O' '(' power ')')
//   product  := factor ('*' factor)*
//   factor   := rational | power | 'sqrt' '(' series ')' | '(' series ')'
//   power    := 't' ['^' (integer | '(' ['-'] rational ')')] | '1'   (the '1' only inside O(...))
//   rational := integer ['/' positive-integer]
// Arguments of sqrt must be constants.
class SeriesParser
{
public:
    explicit SeriesParser(std::string_view text) : m_text(text) {}

    PuiseuxNumber parse_all()
    {
        PuiseuxNumber r = series();
        skip_ws();
        if (m_pos != m_text.size()) {
            fail({"'+'", "'-'", "end of input"}, "unexpected character");
        }
        return r;
    }

    // Parses a series and stops before the first character that cannot continue it.
    PuiseuxNumber parse_prefix()
    {
        return series();
    }

    std::size_t position() const noexcept
    {
        return m_pos;
    }
    void seek(std::size_t pos) noexcept
    {
        m_pos = pos;
    }
    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            ++m_pos;
        }
    }
    bool peek(char c)
    {
        skip_ws();
        return m_pos < m_text.size() && m_text[m_pos] == c;
    }
    bool accept(char c)
    {
        if (peek(c)) {
            ++m_pos;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c)) {
            fail({std::string("'") + c + "'"}, std::string("expected '") + c + "'");
        }
    }
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string &msg) const
    {
        throw ParseError(m_pos, std::move(expected), msg);
    }

private:
    PuiseuxNumber series()
    {
        PuiseuxNumber acc = term();
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (peek('-')) {
                ++m_pos;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    PuiseuxNumber term()
    {
        bool negative = false;
        if (accept('-')) {
            negative = true;
        } else {
            accept('+');
        }
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == 'O') {
            ++m_pos;
            expect('(');
            skip_ws();
            Exponent h;
            if (accept('1')) {
                h = Exponent(0);
            } else {
                h = power_exponent();
            }
            expect(')');
            return PuiseuxNumber::big_o(h);
        }
        PuiseuxNumber p = factor();
        while (accept('*')) {
            p *= factor();
        }
        return negative ? -p : p;
    }

    PuiseuxNumber factor()
    {
        skip_ws();
        if (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            return PuiseuxNumber(rational());
        }
        if (m_text.substr(m_pos, 4) == "sqrt") {
            m_pos += 4;
            expect('(');
            const std::size_t at = m_pos;
            PuiseuxNumber arg = series();
            expect(')');
            if (!arg.is_exact() || arg.terms().size() > 1
                || (arg.terms().size() == 1 && arg.terms().front().exponent.sign() != 0)) {
                throw ParseError(at, {"constant"}, "sqrt takes a constant argument");
            }
            const Real c = arg.terms().empty() ? Real() : arg.terms().front().coefficient;
            if (c.sign() < 0) {
                throw ParseError(at, {"nonnegative constant"}, "sqrt of a negative constant");
            }
            return PuiseuxNumber(Real::sqrt(c));
        }
        if (accept('(')) {
            PuiseuxNumber inner = series();
            expect(')');
            return inner;
        }
        if (m_pos < m_text.size() && m_text[m_pos] == 't') {
            return PuiseuxNumber::monomial(Real(1), power_exponent());
        }
        fail({"integer", "'t'", "'sqrt'", "'('"}, "expected a factor");
    }

    // 't' ['^' exponent]
    Exponent power_exponent()
    {
        skip_ws();
        if (m_pos >= m_text.size() || m_text[m_pos] != 't') {
            fail({"'t'"}, "expected 't'");
        }
        ++m_pos;
        if (m_pos >= m_text.size() || m_text[m_pos] != '^') {
            return Exponent(1);
        }
        ++m_pos;
        if (m_pos < m_text.size() && m_text[m_pos] == '(') {
            ++m_pos;
            skip_ws();
            bool negative = false;
            if (m_pos < m_text.size() && m_text[m_pos] == '-') {
                negative = true;
                ++m_pos;
            }
            skip_ws();
            const Rational q = rational();
            expect(')');
            return to_exponent(negative ? Rational(-q) : q);
        }
        if (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            return to_exponent(Rational(integer()));
        }
        fail({"integer", "'('"}, "expected an exponent");
    }

    Exponent to_exponent(const Rational &q) const
    {
        if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
            fail({"smaller exponent"}, "exponent out of range");
        }
        return Exponent(q.get_num().get_si(), q.get_den().get_si());
    }

    mpz_class integer()
    {
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            ++m_pos;
        }
        if (start == m_pos) {
            fail({"integer"}, "expected an integer");
        }
        return mpz_class(std::string(m_text.substr(start, m_pos - start)));
    }

    Rational rational()
    {
        const mpz_class n = integer();
        if (m_pos < m_text.size() && m_text[m_pos] == '/') {
            ++m_pos;
            const mpz_class d = integer();
            if (d == 0) {
                fail({"positive integer"}, "zero denominator");
            }
            Rational q(n, d);
            q.canonicalize();
            return q;
        }
        return Rational(n);
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
};

inline PuiseuxNumber parse_series(std::string_view text)
{
    return SeriesParser(text).parse_all();
}

// "O", "(x, y)" or "(x, +)" / "(x, -)" where the sign picks the y branch.
struct PointSpec {
    bool infinity = false;
    PuiseuxNumber x;
    std::optional<PuiseuxNumber> y;
    Branch branch = Branch::Plus;
};

inline PointSpec parse_point(std::string_view text)
{
    SeriesParser p(text);
    PointSpec spec;
    if (p.accept('O')) {
        p.skip_ws();
        if (p.position() != text.size()) {
            p.fail({"end of input"}, "unexpected character after O");
        }
        spec.infinity = true;
        return spec;
    }
    if (!p.accept('(')) {
        p.fail({"'O'", "'('"}, "expected a point");
    }
    spec.x = p.parse_prefix();
    p.expect(',');
    p.skip_ws();
    const std::size_t save = p.position();
    for (char sign : {'+', '-'}) {
        if (p.accept(sign)) {
            if (p.accept(')')) {
                spec.branch = sign == '+' ? Branch::Plus : Branch::Minus;
                p.skip_ws();
                if (p.position() != text.size()) {
                    p.fail({"end of input"}, "unexpected character after point");
                }
                return spec;
            }
            break;
        }
    }
    p.seek(save);
    spec.y = p.parse_prefix();
    p.expect(')');
    p.skip_ws();
    if (p.position() != text.size()) {
        p.fail({"end of input"}, "unexpected character after point");
    }
    return spec;
}

// Builds the point on the curve, checking the curve equation for explicit y.
inline CurvePoint resolve_point(const MinimalCurve &c, const PointSpec &spec)
{
    if (spec.infinity) {
        return CurvePoint();
    }
    if (!spec.y) {
        return lift_y(c, spec.x, spec.branch);
    }
    CurvePoint p(spec.x, *spec.y);
    if (!on_curve(c, p)) {
        throw Error(ErrorKind::NotOnCurve, "point " + p.str() + " is not on the curve");
    }
    return p;
}

} // namespace ecrcf

#endif
