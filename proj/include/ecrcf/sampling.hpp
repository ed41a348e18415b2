#ifndef ECRCF_SAMPLING_HPP
#define ECRCF_SAMPLING_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <ecrcf/curve.hpp>

namespace ecrcf
{

// Deterministic stream for trial i of a run seeded with seed.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32U)};
    return std::mt19937_64(seq);
}

// Points of E(K)^0 with prescribed x-valuation: x = t^v (c0 + c1 t^(1/2)),
// c0 > 0, y from either branch.
class PointSampler
{
public:
    PointSampler(const MinimalCurve &c, std::mt19937_64 &rng) : m_curve(c), m_rng(rng) {}

    // Valuations at every boundary of the case analysis.
    static std::vector<Exponent> boundary_valuations(const MinimalCurve &c)
    {
        const Exponent ve = c.epsilon().val();
        std::vector<Exponent> vals{Exponent(-3),   Exponent(-2),   Exponent(-1),   Exponent(-1, 2), Exponent(0),
                                   Exponent(1, 4), Exponent(1, 2), Exponent(3, 4), ve - Exponent(1, 8),
                                   ve,             ve + Exponent(1, 8)};
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    }

    Rational positive_rational()
    {
        std::uniform_int_distribution<long> num(1, 9);
        std::uniform_int_distribution<long> den(1, 8);
        Rational q(num(m_rng), den(m_rng));
        q.canonicalize();
        return q;
    }

    Rational signed_rational()
    {
        std::uniform_int_distribution<int> coin(0, 2);
        const int c = coin(m_rng);
        if (c == 0) {
            return Rational(0);
        }
        const Rational q = positive_rational();
        return c == 1 ? q : Rational(-q);
    }

    Branch branch()
    {
        std::uniform_int_distribution<int> coin(0, 1);
        return coin(m_rng) == 0 ? Branch::Plus : Branch::Minus;
    }

    PuiseuxNumber x_with_valuation(const Exponent &v)
    {
        const Rational c0 = positive_rational();
        const Rational c1 = signed_rational();
        return PuiseuxNumber({{v, Real(c0)}, {v + Exponent(1, 2), Real(c1)}});
    }

    CurvePoint point(const Exponent &v, Branch b)
    {
        return lift_y(m_curve, x_with_valuation(v), b);
    }
    CurvePoint point(const Exponent &v)
    {
        return point(v, branch());
    }
    CurvePoint point(const std::vector<Exponent> &vals)
    {
        return point(pick(vals));
    }

    const Exponent &pick(const std::vector<Exponent> &vals)
    {
        std::uniform_int_distribution<std::size_t> idx(0, vals.size() - 1);
        return vals[idx(m_rng)];
    }

    std::mt19937_64 &rng() noexcept
    {
        return m_rng;
    }

private:
    const MinimalCurve &m_curve;
    std::mt19937_64 &m_rng;
};

} // namespace ecrcf

#endif
