#ifndef ECRCF_PUISEUX_HPP
#define ECRCF_PUISEUX_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <ecrcf/error.hpp>
#include <ecrcf/rational.hpp>
#include <ecrcf/real.hpp>

namespace ecrcf
{

// Working precision for the non-polynomial operations. The window is the
// relative precision (in exponent units) kept by invert and sqrt; exponents
// produced by them must have denominators at most 2^denominator_bits.
struct Precision {
    Exponent window{16};
    int denominator_bits = 8;

    std::int64_t denominator_cap() const
    {
        return std::int64_t{1} << denominator_bits;
    }
};

// nullopt stands for +infinity (the series is exact).
using Horizon = std::optional<Exponent>;

inline bool below(const Exponent &e, const Horizon &h)
{
    return !h || e < *h;
}

inline Horizon min_horizon(const Horizon &a, const Horizon &b)
{
    if (!a) {
        return b;
    }
    if (!b) {
        return a;
    }
    return std::min(*a, *b);
}

inline std::string horizon_str(const Horizon &h)
{
    return h ? h->str() : "inf";
}

// Element of the model field: a finite Puiseux series in the positive
// infinitesimal t with constructible real coefficients, exact for every
// exponent below the horizon.
class PuiseuxNumber
{
public:
    struct Term {
        Exponent exponent;
        Real coefficient;
    };

    PuiseuxNumber() = default;
    PuiseuxNumber(int c) : PuiseuxNumber(Real(c)) {}
    PuiseuxNumber(const Rational &c) : PuiseuxNumber(Real(c)) {}
    PuiseuxNumber(const Real &c)
    {
        if (!c.is_zero()) {
            m_terms.push_back({Exponent(0), c});
        }
    }
    // Terms in any order; repeated exponents are summed, zero coefficients and
    // terms at or beyond the horizon dropped.
    PuiseuxNumber(std::vector<Term> terms, Horizon horizon = std::nullopt) : m_horizon(horizon)
    {
        std::stable_sort(terms.begin(), terms.end(),
                         [](const Term &a, const Term &b) { return a.exponent < b.exponent; });
        for (auto &term : terms) {
            if (!m_terms.empty() && m_terms.back().exponent == term.exponent) {
                m_terms.back().coefficient += term.coefficient;
            } else {
                m_terms.push_back(std::move(term));
            }
        }
        normalize();
    }

    static PuiseuxNumber t()
    {
        return monomial(Real(1), Exponent(1));
    }
    static PuiseuxNumber monomial(const Real &c, const Exponent &e)
    {
        return PuiseuxNumber({{e, c}});
    }
    // O(t^h): known to vanish below h, nothing known beyond.
    static PuiseuxNumber big_o(const Exponent &h)
    {
        PuiseuxNumber r;
        r.m_horizon = h;
        return r;
    }

    const std::vector<Term> &terms() const noexcept
    {
        return m_terms;
    }
    const Horizon &horizon() const noexcept
    {
        return m_horizon;
    }
    bool is_exact() const noexcept
    {
        return !m_horizon;
    }
    bool is_exact_zero() const noexcept
    {
        return m_terms.empty() && !m_horizon;
    }
    // True when the valuation (and hence the sign) is known.
    bool is_determinate() const noexcept
    {
        return !m_terms.empty() || !m_horizon;
    }

    // Leading exponent, nullopt for exact zero (valuation +infinity).
    std::optional<Exponent> valuation() const
    {
        if (!m_terms.empty()) {
            return m_terms.front().exponent;
        }
        if (m_horizon) {
            detail::indeterminate("valuation of O(t^" + m_horizon->str() + ")");
        }
        return std::nullopt;
    }
    // Valuation of an element known to be nonzero.
    Exponent val() const
    {
        auto v = valuation();
        if (!v) {
            throw Error(ErrorKind::DivisionByZero, "valuation of exact zero is infinite");
        }
        return *v;
    }

    int sign() const
    {
        if (!m_terms.empty()) {
            return m_terms.front().coefficient.sign();
        }
        if (m_horizon) {
            detail::indeterminate("sign of O(t^" + m_horizon->str() + ")");
        }
        return 0;
    }

    const Term &leading() const
    {
        (void)val();
        return m_terms.front();
    }

    Real coefficient(const Exponent &e) const
    {
        if (!below(e, m_horizon)) {
            detail::indeterminate("coefficient of t^" + e.str() + " is beyond the horizon");
        }
        for (const auto &term : m_terms) {
            if (term.exponent == e) {
                return term.coefficient;
            }
            if (e < term.exponent) {
                break;
            }
        }
        return Real();
    }

    Real standard_part() const
    {
        if (!m_terms.empty() && m_terms.front().exponent.sign() < 0) {
            throw Error(ErrorKind::NotFinite, "standard part of an infinite element " + str());
        }
        if (m_horizon && m_horizon->sign() <= 0) {
            detail::indeterminate("standard part needs a positive horizon");
        }
        return coefficient(Exponent(0));
    }

    PuiseuxNumber operator-() const
    {
        PuiseuxNumber r(*this);
        for (auto &term : r.m_terms) {
            term.coefficient = -term.coefficient;
        }
        return r;
    }

    friend PuiseuxNumber operator+(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        PuiseuxNumber r;
        r.m_horizon = min_horizon(a.m_horizon, b.m_horizon);
        r.m_terms.reserve(a.m_terms.size() + b.m_terms.size());
        auto i = a.m_terms.begin();
        auto j = b.m_terms.begin();
        while (i != a.m_terms.end() || j != b.m_terms.end()) {
            if (j == b.m_terms.end() || (i != a.m_terms.end() && i->exponent < j->exponent)) {
                r.m_terms.push_back(*i++);
            } else if (i == a.m_terms.end() || j->exponent < i->exponent) {
                r.m_terms.push_back(*j++);
            } else {
                r.m_terms.push_back({i->exponent, i->coefficient + j->coefficient});
                ++i;
                ++j;
            }
        }
        r.normalize();
        return r;
    }
    friend PuiseuxNumber operator-(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        return a + (-b);
    }
    friend PuiseuxNumber operator*(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        return multiply(a, b);
    }
    PuiseuxNumber &operator+=(const PuiseuxNumber &o)
    {
        return *this = *this + o;
    }
    PuiseuxNumber &operator-=(const PuiseuxNumber &o)
    {
        return *this = *this - o;
    }
    PuiseuxNumber &operator*=(const PuiseuxNumber &o)
    {
        return *this = *this * o;
    }

    PuiseuxNumber scaled(const Real &c) const
    {
        if (c.is_structural_zero()) {
            return PuiseuxNumber();
        }
        PuiseuxNumber r(*this);
        for (auto &term : r.m_terms) {
            term.coefficient = term.coefficient * c;
        }
        r.normalize();
        return r;
    }
    // Multiplication by t^e.
    PuiseuxNumber shifted(const Exponent &e) const
    {
        PuiseuxNumber r(*this);
        for (auto &term : r.m_terms) {
            term.exponent += e;
        }
        if (r.m_horizon) {
            *r.m_horizon += e;
        }
        return r;
    }
    // Forget everything at or beyond h.
    PuiseuxNumber truncated(const Exponent &h) const
    {
        PuiseuxNumber r(*this);
        r.m_horizon = min_horizon(m_horizon, h);
        r.normalize();
        return r;
    }

    PuiseuxNumber pow(unsigned n) const
    {
        PuiseuxNumber result(1);
        PuiseuxNumber base(*this);
        while (n > 0) {
            if (n & 1U) {
                result *= base;
            }
            n >>= 1U;
            if (n > 0) {
                base *= base;
            }
        }
        return result;
    }

    // Multiplicative inverse to relative precision prec.window.
    PuiseuxNumber inverse(const Precision &prec = {}) const
    {
        if (is_exact_zero()) {
            throw Error(ErrorKind::DivisionByZero, "inverse of exact zero");
        }
        return unit_power(prec, false);
    }

    // Positive square root to relative precision prec.window.
    PuiseuxNumber sqrt(const Precision &prec = {}) const
    {
        const int s = sign();
        if (s < 0) {
            throw Error(ErrorKind::NegativeRadicand, "square root of negative element " + str());
        }
        if (s == 0) {
            return PuiseuxNumber();
        }
        return unit_power(prec, true);
    }

    // The difference has no known nonzero term: equal as far as both are known.
    bool agrees(const PuiseuxNumber &o) const
    {
        return (*this - o).m_terms.empty();
    }
    // Same terms and the same horizon.
    bool identical(const PuiseuxNumber &o) const
    {
        if (m_horizon != o.m_horizon || m_terms.size() != o.m_terms.size()) {
            return false;
        }
        for (std::size_t i = 0; i < m_terms.size(); ++i) {
            if (m_terms[i].exponent != o.m_terms[i].exponent
                || !(m_terms[i].coefficient == o.m_terms[i].coefficient)) {
                return false;
            }
        }
        return true;
    }

    friend std::strong_ordering compare(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        return (a - b).sign() <=> 0;
    }
    friend std::strong_ordering operator<=>(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        return compare(a, b);
    }
    // Order equality; throws when the horizon hides the answer.
    friend bool operator==(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        return compare(a, b) == 0;
    }

    std::string str() const
    {
        std::string out;
        for (const auto &term : m_terms) {
            Real c = term.coefficient;
            const bool negative = c.sign() < 0;
            if (negative) {
                c = -c;
            }
            if (out.empty()) {
                out += negative ? "-" : "";
            } else {
                out += negative ? " - " : " + ";
            }
            const std::string mono = monomial_str(term.exponent);
            std::string body;
            if (c.is_rational()) {
                if (mono.empty() || c.rational() != 1) {
                    body = c.rational().get_str();
                }
            } else {
                body = c.str();
                if (body.find(' ') != std::string::npos) {
                    body = "(" + body + ")";
                }
            }
            if (!body.empty() && !mono.empty()) {
                body += "*";
            }
            out += body + mono;
        }
        if (m_horizon) {
            const std::string o = "O(" + (m_horizon->sign() == 0 ? std::string("1") : monomial_str(*m_horizon)) + ")";
            out += out.empty() ? o : " + " + o;
        }
        return out.empty() ? "0" : out;
    }

private:
    static std::string monomial_str(const Exponent &e)
    {
        if (e.sign() == 0) {
            return "";
        }
        if (e == Exponent(1)) {
            return "t";
        }
        if (e.is_integer() && e.sign() > 0) {
            return "t^" + e.str();
        }
        return "t^(" + e.str() + ")";
    }

    void normalize()
    {
        auto keep = [this](const Term &term) {
            return below(term.exponent, m_horizon) && !term.coefficient.is_zero();
        };
        m_terms.erase(std::stable_partition(m_terms.begin(), m_terms.end(), keep), m_terms.end());
    }

    // Lowest exponent that can carry a nonzero value: leading exponent, or the
    // horizon of a series with no known terms.
    std::optional<Exponent> low() const
    {
        if (!m_terms.empty()) {
            return m_terms.front().exponent;
        }
        return m_horizon;
    }

    static std::int64_t ceil_of(const Exponent &x)
    {
        const auto q = x.num() / x.den();
        return q + (x.num() % x.den() > 0 ? 1 : 0);
    }

    PuiseuxNumber exact_part() const
    {
        PuiseuxNumber r(*this);
        r.m_horizon.reset();
        return r;
    }

    static PuiseuxNumber multiply(const PuiseuxNumber &a, const PuiseuxNumber &b)
    {
        if (a.is_exact_zero() || b.is_exact_zero()) {
            return PuiseuxNumber();
        }
        const Exponent la = *a.low();
        const Exponent lb = *b.low();
        Horizon h;
        if (a.m_horizon) {
            h = *a.m_horizon + lb;
        }
        if (b.m_horizon) {
            h = min_horizon(h, la + *b.m_horizon);
        }
        PuiseuxNumber r;
        r.m_horizon = h;
        if (a.m_terms.empty() || b.m_terms.empty()) {
            return r;
        }
        std::int64_t L = 1;
        for (const auto &term : a.m_terms) {
            L = lcm_checked(L, term.exponent.den());
        }
        for (const auto &term : b.m_terms) {
            L = lcm_checked(L, term.exponent.den());
        }
        const Exponent base = la + lb;
        const std::int64_t limit = h ? ceil_of((*h - base) * Exponent(L))
                                     : (a.m_terms.back().exponent + b.m_terms.back().exponent - base).on_grid(L) + 1;
        if (limit <= 0) {
            return r;
        }
        std::vector<std::int64_t> ia;
        std::vector<std::int64_t> ib;
        ia.reserve(a.m_terms.size());
        ib.reserve(b.m_terms.size());
        for (const auto &term : a.m_terms) {
            ia.push_back((term.exponent - la).on_grid(L));
        }
        for (const auto &term : b.m_terms) {
            ib.push_back((term.exponent - lb).on_grid(L));
        }
        const auto pairs = static_cast<std::int64_t>(ia.size() * ib.size());
        if (pairs <= 64) {
            std::vector<Term> prods;
            for (std::size_t i = 0; i < ia.size(); ++i) {
                for (std::size_t j = 0; j < ib.size() && ia[i] + ib[j] < limit; ++j) {
                    prods.push_back({base + Exponent(ia[i] + ib[j], L),
                                     a.m_terms[i].coefficient * b.m_terms[j].coefficient});
                }
            }
            return PuiseuxNumber(std::move(prods), h);
        }
        if (limit <= 8 * pairs + 4096) {
            r.m_terms = dense_product(a, ia, b, ib, limit, base, L);
            r.normalize();
            return r;
        }
        std::vector<Term> prods;
        for (std::size_t i = 0; i < ia.size(); ++i) {
            for (std::size_t j = 0; j < ib.size(); ++j) {
                const auto k = ia[i] + ib[j];
                if (k >= limit) {
                    break;
                }
                prods.push_back({base + Exponent(k, L), a.m_terms[i].coefficient * b.m_terms[j].coefficient});
            }
        }
        return PuiseuxNumber(std::move(prods), h);
    }

    // One radical monomial's share of a series, over a common denominator.
    struct Column {
        std::vector<std::int64_t> idx;
        std::vector<Rational> coeff;
        std::vector<mpz_class> num;
        mpz_class den = 1;

        void to_integers()
        {
            for (const auto &q : coeff) {
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
            }
            num.reserve(coeff.size());
            for (const auto &q : coeff) {
                num.emplace_back(q.get_num() * (den / q.get_den()));
            }
        }
    };

    static std::map<Real::MonomialKey, Column> split_columns(const PuiseuxNumber &s, const std::vector<std::int64_t> &idx,
                                                             Real::RadicalMap &rads)
    {
        std::map<Real::MonomialKey, Column> cols;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const Real &c = s.m_terms[i].coefficient;
            if (c.is_rational()) {
                auto &col = cols[{}];
                col.idx.push_back(idx[i]);
                col.coeff.push_back(c.rational());
                continue;
            }
            for (auto &[key, q] : c.monomials(rads)) {
                if (sgn(q) == 0) {
                    continue;
                }
                auto &col = cols[key];
                col.idx.push_back(idx[i]);
                col.coeff.push_back(std::move(q));
            }
        }
        for (auto &[key, col] : cols) {
            col.to_integers();
        }
        return cols;
    }

    // Truncated product on the grid (1/L)Z. Coefficients are split over the
    // radical monomials they involve, so the inner convolution runs on
    // integers; each pair of monomials is folded back in with its product.
    static std::vector<Term> dense_product(const PuiseuxNumber &a, const std::vector<std::int64_t> &ia,
                                           const PuiseuxNumber &b, const std::vector<std::int64_t> &ib,
                                           std::int64_t limit, const Exponent &base, std::int64_t L)
    {
        Real::RadicalMap rads;
        const auto ca = split_columns(a, ia, rads);
        const auto cb = split_columns(b, ib, rads);
        const auto n = static_cast<std::size_t>(limit);
        std::vector<mpz_class> acc(n);
        std::vector<char> touched(n, 0);
        std::vector<std::int64_t> hits;
        std::vector<Rational> rat(n);
        std::vector<Real> irr(n);
        std::vector<char> used(n, 0);
        for (const auto &[ka, x] : ca) {
            for (const auto &[kb, y] : cb) {
                hits.clear();
                for (std::size_t i = 0; i < x.idx.size(); ++i) {
                    if (x.idx[i] >= limit) {
                        break;
                    }
                    for (std::size_t j = 0; j < y.idx.size(); ++j) {
                        const auto k = x.idx[i] + y.idx[j];
                        if (k >= limit) {
                            break;
                        }
                        mpz_addmul(acc[k].get_mpz_t(), x.num[i].get_mpz_t(), y.num[j].get_mpz_t());
                        if (touched[k] == 0) {
                            touched[k] = 1;
                            hits.push_back(k);
                        }
                    }
                }
                if (hits.empty()) {
                    continue;
                }
                const Real w = ka.empty() && kb.empty()
                                   ? Real(1)
                                   : Real::radical_product(ka, rads) * Real::radical_product(kb, rads);
                const mpz_class dd = x.den * y.den;
                for (const auto k : hits) {
                    Rational v(acc[k], dd);
                    v.canonicalize();
                    if (w.is_rational()) {
                        rat[k] += v * w.rational();
                    } else {
                        irr[k].add_mul(Real(std::move(v)), w);
                    }
                    used[k] = 1;
                    acc[k] = 0;
                    touched[k] = 0;
                }
            }
        }
        std::vector<Term> out;
        for (std::size_t k = 0; k < n; ++k) {
            if (used[k] != 0) {
                out.push_back({base + Exponent(static_cast<std::int64_t>(k), L), Real(std::move(rat[k])) + irr[k]});
            }
        }
        return out;
    }

    // (1 + u)^alpha for alpha = -1 or 1/2 by the power recurrence
    //   f_k = (1/k) sum_j ((alpha + 1) j - k) u_j f_{k-j}
    // on the grid (1/L)Z; it costs |u| operations per coefficient, so it is
    // used when u has few terms.
    static PuiseuxNumber sparse_unit_power(const PuiseuxNumber &unit, const Exponent &p, std::int64_t L, bool half)
    {
        const std::int64_t n = ceil_of(p * Exponent(L));
        std::vector<std::pair<std::int64_t, Real>> u;
        for (std::size_t i = 1; i < unit.m_terms.size(); ++i) {
            u.emplace_back(unit.m_terms[i].exponent.on_grid(L), unit.m_terms[i].coefficient);
        }
        std::vector<Real> f(static_cast<std::size_t>(n));
        f[0] = Real(1);
        for (std::int64_t k = 1; k < n; ++k) {
            Real acc;
            for (const auto &[j, uj] : u) {
                if (j > k) {
                    break;
                }
                const Real &prev = f[k - j];
                if (prev.is_structural_zero()) {
                    continue;
                }
                if (half) {
                    acc.add_mul(uj * Real(3 * j - 2 * k), prev);
                } else {
                    acc.add_mul(uj, prev);
                }
            }
            f[k] = half ? acc * Real(Rational(1, 2 * k)) : -acc;
        }
        PuiseuxNumber r;
        r.m_horizon = p;
        for (std::int64_t k = 0; k < n; ++k) {
            if (!f[k].is_structural_zero()) {
                r.m_terms.push_back({Exponent(k, L), std::move(f[k])});
            }
        }
        r.normalize();
        return r;
    }

    // Newton iteration with doubling precision: g <- g (2 - U g) for the
    // inverse, g <- g (3 - U g^2) / 2 for the inverse square root.
    static PuiseuxNumber dense_unit_power(const PuiseuxNumber &unit, const Exponent &p, bool half)
    {
        const PuiseuxNumber one(1);
        PuiseuxNumber g = one;
        Exponent m = unit.m_terms[1].exponent;
        while (m < p) {
            m = std::min(m * Exponent(2), p);
            const PuiseuxNumber ut = unit.truncated(m);
            if (half) {
                const PuiseuxNumber g2 = g.truncated(m) * g;
                const PuiseuxNumber err = one - ut * g2;
                g = (g + (g * err).scaled(Real::fraction(1, 2))).exact_part();
            } else {
                const PuiseuxNumber err = one - ut * g;
                g = (g + g * err).exact_part();
            }
        }
        if (half) {
            return unit.truncated(p) * g;
        }
        return g.truncated(p);
    }

    // Writes the element as c t^e U with U = 1 + (higher terms) and returns
    // U^(-1) c^(-1) t^(-e) or U^(1/2) sqrt(c) t^(e/2).
    PuiseuxNumber unit_power(const Precision &prec, bool half) const
    {
        const Term &lead = leading();
        const Exponent e = lead.exponent;
        const Exponent out_e = half ? e / Exponent(2) : -e;
        std::int64_t L = 1;
        for (const auto &term : m_terms) {
            L = lcm_checked(L, (term.exponent - e).den());
        }
        if (lcm_checked(L, out_e.den()) > prec.denominator_cap()) {
            throw Error(ErrorKind::DenominatorCapExceeded,
                        "exponent denominators exceed 2^" + std::to_string(prec.denominator_bits));
        }
        const Real c = half ? Real::sqrt(lead.coefficient) : lead.coefficient.inverse();
        if (m_terms.size() == 1 && !m_horizon) {
            return monomial(c, out_e);
        }
        Exponent p = prec.window;
        if (m_horizon) {
            p = std::min(p, *m_horizon - e);
        }
        const Real lead_inv = half ? lead.coefficient.inverse() : c;
        std::vector<Term> ut;
        ut.reserve(m_terms.size());
        for (const auto &term : m_terms) {
            ut.push_back({term.exponent - e, term.coefficient * lead_inv});
        }
        const PuiseuxNumber unit(std::move(ut), p);
        PuiseuxNumber f;
        if (unit.m_terms.size() == 1) {
            f = big_o(p) + PuiseuxNumber(1);
        } else if (unit.m_terms.size() <= 16) {
            f = sparse_unit_power(unit, p, L, half);
        } else {
            f = dense_unit_power(unit, p, half);
        }
        return f.scaled(c).shifted(out_e);
    }

    std::vector<Term> m_terms;
    Horizon m_horizon;
};

} // namespace ecrcf

#endif
