#ifndef ECRCF_RATIONAL_HPP
#define ECRCF_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include <gmpxx.h>

#include <ecrcf/error.hpp>

namespace ecrcf
{

// Arbitrary precision rationals, always kept canonical.
using Rational = mpq_class;

inline std::string to_string(const Rational &q)
{
    return q.get_str();
}

// Small exact rational used for exponents and valuations. Exponents in this
// library have tiny denominators (powers of two times the user's input
// denominators), so 64-bit parts with overflow checks are plenty.
class Exponent
{
public:
    constexpr Exponent() = default;

    Exponent(std::int64_t n, std::int64_t d = 1)
    {
        if (d == 0) {
            throw Error(ErrorKind::DivisionByZero, "exponent with zero denominator");
        }
        assign(static_cast<__int128>(n), static_cast<__int128>(d));
    }

    std::int64_t num() const noexcept
    {
        return m_num;
    }
    std::int64_t den() const noexcept
    {
        return m_den;
    }
    bool is_integer() const noexcept
    {
        return m_den == 1;
    }
    int sign() const noexcept
    {
        return (m_num > 0) - (m_num < 0);
    }

    friend Exponent operator+(const Exponent &a, const Exponent &b)
    {
        Exponent r;
        r.assign(static_cast<__int128>(a.m_num) * b.m_den + static_cast<__int128>(b.m_num) * a.m_den,
                 static_cast<__int128>(a.m_den) * b.m_den);
        return r;
    }
    friend Exponent operator-(const Exponent &a, const Exponent &b)
    {
        return a + (-b);
    }
    friend Exponent operator*(const Exponent &a, const Exponent &b)
    {
        Exponent r;
        r.assign(static_cast<__int128>(a.m_num) * b.m_num, static_cast<__int128>(a.m_den) * b.m_den);
        return r;
    }
    friend Exponent operator/(const Exponent &a, const Exponent &b)
    {
        if (b.m_num == 0) {
            throw Error(ErrorKind::DivisionByZero, "exponent division by zero");
        }
        Exponent r;
        r.assign(static_cast<__int128>(a.m_num) * b.m_den, static_cast<__int128>(a.m_den) * b.m_num);
        return r;
    }
    Exponent operator-() const
    {
        Exponent r;
        r.m_num = -m_num;
        r.m_den = m_den;
        return r;
    }
    Exponent &operator+=(const Exponent &o)
    {
        return *this = *this + o;
    }

    friend bool operator==(const Exponent &, const Exponent &) = default;
    friend std::strong_ordering operator<=>(const Exponent &a, const Exponent &b)
    {
        const auto l = static_cast<__int128>(a.m_num) * b.m_den;
        const auto r = static_cast<__int128>(b.m_num) * a.m_den;
        return l <=> r;
    }

    Exponent abs() const
    {
        return sign() < 0 ? -*this : *this;
    }

    // Position on the grid (1/L)Z; L must be a multiple of den().
    std::int64_t on_grid(std::int64_t L) const
    {
        if (L % m_den != 0) {
            throw Error(ErrorKind::InvalidArgument, "grid does not contain exponent " + str());
        }
        return checked(static_cast<__int128>(m_num) * (L / m_den));
    }

    Rational to_rational() const
    {
        return Rational(mpz_class(static_cast<long>(m_num)), mpz_class(static_cast<long>(m_den)));
    }

    std::string str() const
    {
        return m_den == 1 ? std::to_string(m_num) : std::to_string(m_num) + "/" + std::to_string(m_den);
    }

private:
    static std::int64_t checked(__int128 v)
    {
        if (v > INT64_MAX || v < -INT64_MAX) {
            throw Error(ErrorKind::ExponentOverflow, "exponent arithmetic overflowed 64 bits");
        }
        return static_cast<std::int64_t>(v);
    }

    static __int128 gcd128(__int128 a, __int128 b)
    {
        if (a < 0) {
            a = -a;
        }
        if (b < 0) {
            b = -b;
        }
        while (b != 0) {
            const auto t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void assign(__int128 n, __int128 d)
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const auto g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        m_num = checked(n);
        m_den = checked(d);
    }

    std::int64_t m_num = 0;
    std::int64_t m_den = 1;
};

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b)
{
    const auto l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l > INT64_MAX) {
        throw Error(ErrorKind::ExponentOverflow, "exponent grid too fine");
    }
    return static_cast<std::int64_t>(l);
}

} // namespace ecrcf

#endif
