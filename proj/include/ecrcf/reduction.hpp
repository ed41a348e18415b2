#ifndef ECRCF_REDUCTION_HPP
#define ECRCF_REDUCTION_HPP

#include <string>
#include <utility>

#include <ecrcf/curve.hpp>
#include <ecrcf/error.hpp>

namespace ecrcf
{

enum class ReductionType { Good, NonsplitMultiplicative, SplitMultiplicative };

inline std::string to_string(ReductionType r)
{
    switch (r) {
    case ReductionType::Good:
        return "good";
    case ReductionType::NonsplitMultiplicative:
        return "nonsplit";
    case ReductionType::SplitMultiplicative:
        return "split";
    }
    return "?";
}

// Point of the reduced curve y^2 = x(x+1)(x+st(eps)) over the residue field.
class ReducedPoint
{
public:
    ReducedPoint() = default;
    ReducedPoint(Real x, Real y, bool singular)
        : m_affine(true), m_singular(singular), m_x(std::move(x)), m_y(std::move(y))
    {
    }

    bool is_infinity() const noexcept
    {
        return !m_affine;
    }
    // The node of a multiplicative reduction.
    bool is_singular() const noexcept
    {
        return m_singular;
    }
    const Real &x() const
    {
        require_affine();
        return m_x;
    }
    const Real &y() const
    {
        require_affine();
        return m_y;
    }

    friend bool operator==(const ReducedPoint &a, const ReducedPoint &b)
    {
        if (!a.m_affine || !b.m_affine) {
            return a.m_affine == b.m_affine;
        }
        return a.m_x == b.m_x && a.m_y == b.m_y;
    }

    std::string str() const
    {
        return m_affine ? "(" + m_x.str() + ", " + m_y.str() + ")" : "O~";
    }

private:
    void require_affine() const
    {
        if (!m_affine) {
            throw Error(ErrorKind::InvalidArgument, "the reduced point at infinity has no coordinates");
        }
    }

    bool m_affine = false;
    bool m_singular = false;
    Real m_x;
    Real m_y;
};

inline ReductionType reduction_type(const MinimalCurve &c)
{
    if (c.epsilon().val().sign() > 0) {
        return ReductionType::SplitMultiplicative;
    }
    if ((c.epsilon() - PuiseuxNumber(1)).val().sign() > 0) {
        return ReductionType::NonsplitMultiplicative;
    }
    return ReductionType::Good;
}

inline Real reduced_epsilon(const MinimalCurve &c)
{
    return c.epsilon().standard_part();
}

namespace detail
{

// Split reduction has its node at (0,0), nonsplit at (-1,0).
inline bool is_node(ReductionType type, const Real &x, const Real &y)
{
    if (!y.is_zero()) {
        return false;
    }
    switch (type) {
    case ReductionType::SplitMultiplicative:
        return x.is_zero();
    case ReductionType::NonsplitMultiplicative:
        return x == Real(-1);
    case ReductionType::Good:
        break;
    }
    return false;
}

} // namespace detail

inline bool reduced_on_curve(const Real &eps, const ReducedPoint &p)
{
    if (p.is_infinity()) {
        return true;
    }
    const Real &x = p.x();
    return p.y() * p.y() == x * (x + Real(1)) * (x + eps);
}

inline ReducedPoint reduce_point(const MinimalCurve &c, const CurvePoint &p)
{
    if (p.is_infinity()) {
        return {};
    }
    const auto v = p.x().valuation();
    if (v && v->sign() < 0) {
        return {};
    }
    Real x = p.x().standard_part();
    Real y = p.y().standard_part();
    const bool node = detail::is_node(reduction_type(c), x, y);
    return {std::move(x), std::move(y), node};
}

inline bool e1_membership(const MinimalCurve &, const CurvePoint &p)
{
    if (p.is_infinity()) {
        return true;
    }
    const auto v = p.x().valuation();
    return v && v->sign() < 0;
}

inline bool e0_membership(const MinimalCurve &c, const CurvePoint &p)
{
    return !reduce_point(c, p).is_singular();
}

// Chord-tangent law on the nonsingular locus of the reduced curve.
inline ReducedPoint reduced_add(const MinimalCurve &c, const ReducedPoint &a, const ReducedPoint &b)
{
    if (a.is_singular() || b.is_singular()) {
        throw Error(ErrorKind::SingularOperand, "the node is not in the group of nonsingular points");
    }
    if (a.is_infinity()) {
        return b;
    }
    if (b.is_infinity()) {
        return a;
    }
    const Real eps = reduced_epsilon(c);
    const Real one(1);
    Real lambda;
    if (a.x() == b.x()) {
        if (a.y() == -b.y()) {
            return {};
        }
        const Real &x = a.x();
        lambda = (Real(3) * x * x + Real(2) * (one + eps) * x + eps) / (Real(2) * a.y());
    } else {
        lambda = (b.y() - a.y()) / (b.x() - a.x());
    }
    Real x3 = lambda * lambda - (one + eps) - a.x() - b.x();
    Real y3 = lambda * (a.x() - x3) - a.y();
    const bool node = detail::is_node(reduction_type(c), x3, y3);
    return {std::move(x3), std::move(y3), node};
}

} // namespace ecrcf

#endif
