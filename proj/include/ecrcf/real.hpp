#ifndef ECRCF_REAL_HPP
#define ECRCF_REAL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <ecrcf/error.hpp>
#include <ecrcf/rational.hpp>

namespace ecrcf
{

class Radical;
using RadicalPtr = std::shared_ptr<const Radical>;

// Floating-point enclosure: the exact value lies in [value - error, value + error].
struct Approx {
    double value = 0;
    double error = 0;
};

// Exact real constructible numbers: the closure of Q under field operations and
// square roots of positive elements.
//
// An element is either a rational or lo + hi * sqrt(r), where sqrt(r) is an
// interned radical and lo, hi only involve radicals created before it. The
// representation is the normal form of a multilinear polynomial in the
// radicals modulo rho_i^2 = r_i; it is unique up to algebraic relations among
// radicals, so equality is decided by the exact sign procedure, never by
// comparing structure.
class Real
{
public:
    Real() = default;
    Real(int v) : m_q(v) {}
    Real(long v) : m_q(v) {}
    Real(const Rational &q) : m_q(q) {}
    Real(Rational &&q) : m_q(std::move(q)) {}

    static Real fraction(long n, long d)
    {
        if (d == 0) {
            throw Error(ErrorKind::DivisionByZero, "fraction with zero denominator");
        }
        Rational q(n, d);
        q.canonicalize();
        return Real(std::move(q));
    }

    bool is_rational() const noexcept
    {
        return !m_node;
    }
    const Rational &rational() const
    {
        if (m_node) {
            throw Error(ErrorKind::InvalidArgument, "element is not rational: " + str());
        }
        return m_q;
    }
    bool is_structural_zero() const noexcept
    {
        return !m_node && sgn(m_q) == 0;
    }

    int sign() const;
    bool is_zero() const
    {
        return sign() == 0;
    }
    Approx approx() const;
    double to_double() const
    {
        return approx().value;
    }

    Real inverse() const;

    // Square root of a nonnegative element; adjoins a new radical only when
    // no square root exists over the radicals already involved.
    static Real sqrt(const Real &x);
    // Square root without adjoining radicals (denesting included), if any.
    static std::optional<Real> exact_sqrt(const Real &x);

    Real operator-() const;
    friend Real operator+(const Real &a, const Real &b);
    friend Real operator-(const Real &a, const Real &b);
    friend Real operator*(const Real &a, const Real &b);
    friend Real operator/(const Real &a, const Real &b)
    {
        return a * b.inverse();
    }
    Real &operator+=(const Real &o);
    Real &operator-=(const Real &o)
    {
        return *this = *this - o;
    }
    Real &operator*=(const Real &o)
    {
        return *this = *this * o;
    }
    // *this += a * b
    void add_mul(const Real &a, const Real &b);

    friend bool operator==(const Real &a, const Real &b)
    {
        if (!a.m_node && !b.m_node) {
            return a.m_q == b.m_q;
        }
        return (a - b).sign() == 0;
    }
    friend std::strong_ordering operator<=>(const Real &a, const Real &b)
    {
        if (!a.m_node && !b.m_node) {
            const int c = cmp(a.m_q, b.m_q);
            return c <=> 0;
        }
        return (a - b).sign() <=> 0;
    }

    // Parseable text: rationals as p/q, radicals as sqrt(...).
    std::string str() const;
    // Number of distinct radicals the element involves.
    std::size_t radical_count() const;

    // Expansion as rational multiples of products of distinct radicals, keyed
    // by the sorted radical ids; rads receives the radicals met.
    using MonomialKey = std::vector<std::uint64_t>;
    using RadicalMap = std::map<std::uint64_t, RadicalPtr>;
    std::map<MonomialKey, Rational> monomials(RadicalMap &rads) const
    {
        std::map<MonomialKey, Rational> out;
        MonomialKey prefix;
        expand(out, prefix, rads);
        return out;
    }
    static Real radical_product(const MonomialKey &key, const RadicalMap &rads)
    {
        Real r(1);
        for (auto id : key) {
            r = r * from_radical(rads.at(id));
        }
        return r;
    }

private:
    struct Node;
    friend class RadicalTable;

    static Real make(RadicalPtr top, Real lo, Real hi);
    static Real from_radical(RadicalPtr rad);
    static Real rational_sqrt(const Rational &q);
    static std::uint64_t top_id(const Real &x) noexcept;
    int exact_sign() const;
    void write_key(std::string &out) const;
    void expand(std::map<std::vector<std::uint64_t>, Rational> &out, std::vector<std::uint64_t> &prefix,
                std::map<std::uint64_t, RadicalPtr> &rads) const;
    void collect_radicals(std::map<std::uint64_t, const Radical *> &rads) const;

    Rational m_q;
    std::shared_ptr<const Node> m_node;
};

class Radical
{
public:
    Radical(std::uint64_t id, Real radicand, Approx approx)
        : m_id(id), m_radicand(std::move(radicand)), m_approx(approx)
    {
    }
    std::uint64_t id() const noexcept
    {
        return m_id;
    }
    const Real &radicand() const noexcept
    {
        return m_radicand;
    }
    const Approx &approx() const noexcept
    {
        return m_approx;
    }

private:
    std::uint64_t m_id;
    Real m_radicand;
    Approx m_approx;
};

struct Real::Node {
    RadicalPtr top;
    Real lo;
    Real hi;
    Approx approx;
};

// Append-only intern table: equal radicands share one radical, and ids give
// the creation order the normal form relies on.
class RadicalTable
{
public:
    static RadicalTable &instance()
    {
        static RadicalTable table;
        return table;
    }

    RadicalPtr intern(const Real &radicand)
    {
        std::string key;
        radicand.write_key(key);
        std::lock_guard<std::mutex> lock(m_mutex);
        if (auto it = m_table.find(key); it != m_table.end()) {
            return it->second;
        }
        auto rad = std::make_shared<const Radical>(++m_next, radicand, sqrt_enclosure(radicand.approx()));
        m_table.emplace(std::move(key), rad);
        return rad;
    }

    std::size_t size()
    {
        std::lock_guard<std::mutex> lock(m_mutex);
        return m_table.size();
    }

private:
    static Approx sqrt_enclosure(const Approx &r)
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
            return {0, inf};
        }
        const double v = std::max(r.value, 0.0);
        const double s = std::sqrt(v);
        double err;
        if (r.value - r.error > 0) {
            err = r.error / (std::sqrt(r.value - r.error) + s);
        } else {
            err = std::sqrt(v + r.error);
        }
        return {s, (err + s * 0x1p-51) * (1 + 0x1p-40)};
    }

    std::mutex m_mutex;
    std::unordered_map<std::string, RadicalPtr> m_table;
    std::uint64_t m_next = 0;
};

inline std::uint64_t Real::top_id(const Real &x) noexcept
{
    return x.m_node ? x.m_node->top->id() : 0;
}

inline Approx Real::approx() const
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (m_node) {
        return m_node->approx;
    }
    if (sgn(m_q) == 0) {
        return {0, 0};
    }
    const double v = m_q.get_d();
    if (v == 0 || !std::isfinite(v)) {
        return {0, inf};
    }
    return {v, std::fabs(v) * 0x1p-52};
}

inline Real Real::make(RadicalPtr top, Real lo, Real hi)
{
    if (hi.is_structural_zero()) {
        return lo;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Approx a = lo.approx();
    const Approx b = hi.approx();
    const Approx &r = top->approx();
    const double prod = b.value * r.value;
    Approx out{a.value + prod, 0};
    out.error = a.error + std::fabs(b.value) * r.error + b.error * std::fabs(r.value) + b.error * r.error
                + (std::fabs(a.value) + std::fabs(prod)) * 0x1p-51;
    out.error *= 1 + 0x1p-40;
    if (!std::isfinite(out.value) || !std::isfinite(out.error)) {
        out = {0, inf};
    }
    Real res;
    res.m_node = std::make_shared<const Node>(Node{std::move(top), std::move(lo), std::move(hi), out});
    return res;
}

inline Real Real::from_radical(RadicalPtr rad)
{
    return make(std::move(rad), Real(), Real(1));
}

inline Real Real::operator-() const
{
    if (!m_node) {
        return Real(Rational(-m_q));
    }
    return make(m_node->top, -m_node->lo, -m_node->hi);
}

inline Real operator+(const Real &a, const Real &b)
{
    if (!a.m_node && !b.m_node) {
        return Real(Rational(a.m_q + b.m_q));
    }
    const auto ia = Real::top_id(a);
    const auto ib = Real::top_id(b);
    if (ia == ib) {
        return Real::make(a.m_node->top, a.m_node->lo + b.m_node->lo, a.m_node->hi + b.m_node->hi);
    }
    if (ia > ib) {
        return Real::make(a.m_node->top, a.m_node->lo + b, a.m_node->hi);
    }
    return Real::make(b.m_node->top, a + b.m_node->lo, b.m_node->hi);
}

inline Real operator-(const Real &a, const Real &b)
{
    if (!a.m_node && !b.m_node) {
        return Real(Rational(a.m_q - b.m_q));
    }
    return a + (-b);
}

inline Real operator*(const Real &a, const Real &b)
{
    if (!a.m_node && !b.m_node) {
        return Real(Rational(a.m_q * b.m_q));
    }
    if (a.is_structural_zero() || b.is_structural_zero()) {
        return Real();
    }
    const auto ia = Real::top_id(a);
    const auto ib = Real::top_id(b);
    if (ia == ib) {
        const auto &x = *a.m_node;
        const auto &y = *b.m_node;
        Real ac = x.lo * y.lo;
        Real bd = x.hi * y.hi;
        Real mid = (x.lo + x.hi) * (y.lo + y.hi) - ac - bd;
        return Real::make(x.top, ac + bd * x.top->radicand(), std::move(mid));
    }
    if (ia > ib) {
        return Real::make(a.m_node->top, a.m_node->lo * b, a.m_node->hi * b);
    }
    return Real::make(b.m_node->top, a * b.m_node->lo, a * b.m_node->hi);
}

inline Real &Real::operator+=(const Real &o)
{
    if (!m_node && !o.m_node) {
        m_q += o.m_q;
        return *this;
    }
    return *this = *this + o;
}

inline void Real::add_mul(const Real &a, const Real &b)
{
    if (!m_node && !a.m_node && !b.m_node) {
        thread_local Rational tmp;
        mpq_mul(tmp.get_mpq_t(), a.m_q.get_mpq_t(), b.m_q.get_mpq_t());
        m_q += tmp;
        return;
    }
    *this = *this + a * b;
}

inline int Real::sign() const
{
    if (!m_node) {
        return sgn(m_q);
    }
    const Approx &a = m_node->approx;
    if (std::isfinite(a.error) && std::fabs(a.value) > a.error) {
        return a.value > 0 ? 1 : -1;
    }
    return exact_sign();
}

// sign(lo + hi*sqrt(r)) from signs over the lower radicals only.
inline int Real::exact_sign() const
{
    const auto &n = *m_node;
    const int sl = n.lo.sign();
    const int sh = n.hi.sign();
    if (sh == 0) {
        return sl;
    }
    if (sl == 0 || sl == sh) {
        return sh;
    }
    const int d = (n.lo * n.lo - n.hi * n.hi * n.top->radicand()).sign();
    if (d == 0) {
        return 0;
    }
    return d > 0 ? sl : sh;
}

inline Real Real::inverse() const
{
    if (!m_node) {
        if (sgn(m_q) == 0) {
            throw Error(ErrorKind::DivisionByZero, "inverse of zero");
        }
        return Real(Rational(1 / m_q));
    }
    const auto &n = *m_node;
    Real norm = n.lo * n.lo - n.hi * n.hi * n.top->radicand();
    if (norm.sign() != 0) {
        Real inv = norm.inverse();
        return make(n.top, n.lo * inv, -(n.hi * inv));
    }
    // The top radical is expressible below it: lo^2 = hi^2 r.
    const int sh = n.hi.sign();
    if (sh == 0) {
        return n.lo.inverse();
    }
    const int sl = n.lo.sign();
    if (sl * sh < 0) {
        throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    }
    return (n.lo + n.lo).inverse();
}

inline Real Real::rational_sqrt(const Rational &q)
{
    mpz_class m = q.get_num() * q.get_den();
    mpz_class s = 1;
    for (unsigned long p = 2; p < 1000; p += (p == 2 ? 1 : 2)) {
        const unsigned long p2 = p * p;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p2) != 0) {
            m /= p2;
            s *= p;
        }
    }
    if (mpz_perfect_square_p(m.get_mpz_t()) != 0) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
        s *= r;
        m = 1;
    }
    Rational coeff(s, q.get_den());
    coeff.canonicalize();
    if (m == 1) {
        return Real(std::move(coeff));
    }
    return Real(std::move(coeff)) * from_radical(RadicalTable::instance().intern(Real(Rational(m))));
}

inline std::optional<Real> Real::exact_sqrt(const Real &x)
{
    if (!x.m_node) {
        if (sgn(x.m_q) < 0) {
            return std::nullopt;
        }
        const mpz_class &num = x.m_q.get_num();
        const mpz_class &den = x.m_q.get_den();
        if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
            return std::nullopt;
        }
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        return Real(Rational(rn, rd));
    }
    const int s = x.sign();
    if (s < 0) {
        return std::nullopt;
    }
    if (s == 0) {
        return Real();
    }
    // sqrt(a + b*rho) = p + q*rho with p^2 = (a +- sqrt(a^2 - b^2 r)) / 2.
    const auto &n = *x.m_node;
    const Real norm = n.lo * n.lo - n.hi * n.hi * n.top->radicand();
    if (norm.sign() < 0) {
        return std::nullopt;
    }
    const auto root = exact_sqrt(norm);
    if (!root) {
        return std::nullopt;
    }
    const Real half = fraction(1, 2);
    for (const Real &c : {(n.lo + *root) * half, (n.lo - *root) * half}) {
        if (c.sign() <= 0) {
            continue;
        }
        const auto p = exact_sqrt(c);
        if (!p) {
            continue;
        }
        Real cand = make(n.top, *p, n.hi * (*p + *p).inverse());
        if (cand.sign() < 0) {
            cand = -cand;
        }
        return cand;
    }
    return std::nullopt;
}

inline Real Real::sqrt(const Real &x)
{
    const int s = x.sign();
    if (s < 0) {
        throw Error(ErrorKind::NegativeRadicand, "square root of negative element " + x.str());
    }
    if (s == 0) {
        return Real();
    }
    if (auto r = exact_sqrt(x)) {
        return *r;
    }
    if (!x.m_node) {
        return rational_sqrt(x.m_q);
    }
    return from_radical(RadicalTable::instance().intern(x));
}

inline void Real::write_key(std::string &out) const
{
    if (!m_node) {
        out += m_q.get_str();
        return;
    }
    out += '[';
    out += std::to_string(m_node->top->id());
    out += '|';
    m_node->lo.write_key(out);
    out += '|';
    m_node->hi.write_key(out);
    out += ']';
}

inline void Real::expand(std::map<std::vector<std::uint64_t>, Rational> &out, std::vector<std::uint64_t> &prefix,
                         std::map<std::uint64_t, RadicalPtr> &rads) const
{
    if (!m_node) {
        if (sgn(m_q) != 0) {
            auto key = prefix;
            std::sort(key.begin(), key.end());
            out[key] += m_q;
        }
        return;
    }
    m_node->lo.expand(out, prefix, rads);
    rads.emplace(m_node->top->id(), m_node->top);
    prefix.push_back(m_node->top->id());
    m_node->hi.expand(out, prefix, rads);
    prefix.pop_back();
}

inline void Real::collect_radicals(std::map<std::uint64_t, const Radical *> &rads) const
{
    if (!m_node) {
        return;
    }
    rads[m_node->top->id()] = m_node->top.get();
    m_node->lo.collect_radicals(rads);
    m_node->hi.collect_radicals(rads);
}

inline std::size_t Real::radical_count() const
{
    std::map<std::uint64_t, const Radical *> rads;
    collect_radicals(rads);
    return rads.size();
}

inline std::string Real::str() const
{
    if (!m_node) {
        return m_q.get_str();
    }
    std::map<std::vector<std::uint64_t>, Rational> mono;
    std::vector<std::uint64_t> prefix;
    std::map<std::uint64_t, RadicalPtr> rads;
    expand(mono, prefix, rads);
    std::vector<std::pair<std::vector<std::uint64_t>, Rational>> terms(mono.begin(), mono.end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto &a, const auto &b) { return a.first.size() < b.first.size(); });
    std::string out;
    bool first = true;
    for (const auto &[key, c] : terms) {
        if (sgn(c) == 0) {
            continue;
        }
        Rational mag = abs(c);
        if (first) {
            if (sgn(c) < 0) {
                out += "-";
            }
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
        first = false;
        std::string body;
        if (key.empty() || mag != 1) {
            body = mag.get_str();
        }
        for (auto id : key) {
            if (!body.empty()) {
                body += "*";
            }
            body += "sqrt(" + rads.at(id)->radicand().str() + ")";
        }
        out += body;
    }
    return first ? "0" : out;
}

} // namespace ecrcf

#endif
