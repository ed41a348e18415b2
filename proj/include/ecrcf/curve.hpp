#ifndef ECRCF_CURVE_HPP
#define ECRCF_CURVE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <ecrcf/error.hpp>
#include <ecrcf/puiseux.hpp>

namespace ecrcf
{

// y^2 = x(x+1)(x+eps) with 0 < eps < 1.
class MinimalCurve
{
public:
    explicit MinimalCurve(PuiseuxNumber epsilon, Precision prec = {})
        : m_epsilon(std::move(epsilon)), m_prec(prec)
    {
        if (m_epsilon.sign() <= 0 || compare(m_epsilon, PuiseuxNumber(1)) >= 0) {
            throw Error(ErrorKind::InvalidCurve, "need 0 < eps < 1, got eps = " + m_epsilon.str());
        }
    }

    const PuiseuxNumber &epsilon() const noexcept
    {
        return m_epsilon;
    }
    const Precision &precision() const noexcept
    {
        return m_prec;
    }

    PuiseuxNumber cubic(const PuiseuxNumber &x) const
    {
        return x * (x + PuiseuxNumber(1)) * (x + m_epsilon);
    }

private:
    PuiseuxNumber m_epsilon;
    Precision m_prec;
};

class CurvePoint
{
public:
    // The point at infinity O.
    CurvePoint() = default;
    CurvePoint(PuiseuxNumber x, PuiseuxNumber y) : m_affine(true), m_x(std::move(x)), m_y(std::move(y)) {}

    static CurvePoint infinity()
    {
        return CurvePoint();
    }

    bool is_infinity() const noexcept
    {
        return !m_affine;
    }
    const PuiseuxNumber &x() const
    {
        require_affine();
        return m_x;
    }
    const PuiseuxNumber &y() const
    {
        require_affine();
        return m_y;
    }

    std::string str() const
    {
        return m_affine ? "(" + m_x.str() + ", " + m_y.str() + ")" : "O";
    }

private:
    void require_affine() const
    {
        if (!m_affine) {
            throw Error(ErrorKind::InvalidArgument, "the point at infinity has no coordinates");
        }
    }

    bool m_affine = false;
    PuiseuxNumber m_x;
    PuiseuxNumber m_y;
};

enum class Branch { Plus, Minus };

inline bool on_curve(const MinimalCurve &c, const CurvePoint &p)
{
    return p.is_infinity() || (p.y() * p.y()).agrees(c.cubic(p.x()));
}

// Equal as far as both points are known.
inline bool points_agree(const CurvePoint &p, const CurvePoint &q)
{
    if (p.is_infinity() || q.is_infinity()) {
        return p.is_infinity() && q.is_infinity();
    }
    return p.x().agrees(q.x()) && p.y().agrees(q.y());
}

inline CurvePoint lift_y(const MinimalCurve &c, const PuiseuxNumber &x, Branch branch)
{
    const PuiseuxNumber rhs = c.cubic(x);
    if (rhs.is_exact_zero()) {
        return {x, PuiseuxNumber()};
    }
    const PuiseuxNumber y = rhs.sqrt(c.precision());
    return {x, branch == Branch::Plus ? y : -y};
}

inline CurvePoint negate(const CurvePoint &p)
{
    return p.is_infinity() ? p : CurvePoint(p.x(), -p.y());
}

namespace detail
{

// y-coordinate on the curve for a computed x, keeping 2-torsion exact.
inline PuiseuxNumber settle_y(const MinimalCurve &c, const PuiseuxNumber &x, PuiseuxNumber y)
{
    if (x.is_exact() && c.cubic(x).is_exact_zero()) {
        return PuiseuxNumber();
    }
    return y;
}

// True if the x-coordinates are known equal, false if known different.
inline bool same_x(const CurvePoint &p, const CurvePoint &q)
{
    if (p.x().identical(q.x())) {
        return true;
    }
    const PuiseuxNumber d = q.x() - p.x();
    if (d.is_exact_zero()) {
        return true;
    }
    if (!d.is_determinate()) {
        indeterminate("cannot tell x-coordinates apart: " + p.x().str() + " vs " + q.x().str());
    }
    return false;
}

} // namespace detail

inline CurvePoint double_point(const MinimalCurve &c, const CurvePoint &p)
{
    if (p.is_infinity() || p.y().is_exact_zero()) {
        return CurvePoint();
    }
    if (!p.y().is_determinate()) {
        detail::indeterminate("cannot decide whether y vanishes at " + p.str());
    }
    const Precision &prec = c.precision();
    const PuiseuxNumber &x = p.x();
    const PuiseuxNumber &eps = c.epsilon();
    const PuiseuxNumber one(1);
    const PuiseuxNumber x2 = x * x;
    const PuiseuxNumber num = x2 - eps;
    PuiseuxNumber xr;
    if (!num.is_exact_zero()) {
        xr = num * num * (c.cubic(x).scaled(Real(4))).inverse(prec);
    }
    const PuiseuxNumber slope_num = x2.scaled(Real(3)) + (one + eps).scaled(Real(2)) * x + eps;
    const PuiseuxNumber lambda = slope_num * p.y().scaled(Real(2)).inverse(prec);
    PuiseuxNumber yr = lambda * (x - xr) - p.y();
    yr = detail::settle_y(c, xr, std::move(yr));
    return {std::move(xr), std::move(yr)};
}

inline CurvePoint add_points(const MinimalCurve &c, const CurvePoint &p, const CurvePoint &q)
{
    if (p.is_infinity()) {
        return q;
    }
    if (q.is_infinity()) {
        return p;
    }
    if (detail::same_x(p, q)) {
        if (q.y().identical(-p.y())) {
            return CurvePoint();
        }
        if (q.y().identical(p.y())) {
            return double_point(c, p);
        }
        const PuiseuxNumber s = p.y() + q.y();
        if (s.is_exact_zero()) {
            return CurvePoint();
        }
        if (!s.is_determinate()) {
            detail::indeterminate("cannot tell whether " + p.str() + " and " + q.str() + " are opposite");
        }
        return double_point(c, p);
    }
    const Precision &prec = c.precision();
    const PuiseuxNumber lambda = (q.y() - p.y()) * (q.x() - p.x()).inverse(prec);
    PuiseuxNumber xr = lambda * lambda - (PuiseuxNumber(1) + c.epsilon()) - p.x() - q.x();
    PuiseuxNumber yr = lambda * (p.x() - xr) - p.y();
    yr = detail::settle_y(c, xr, std::move(yr));
    return {std::move(xr), std::move(yr)};
}

inline CurvePoint subtract_points(const MinimalCurve &c, const CurvePoint &p, const CurvePoint &q)
{
    return add_points(c, p, negate(q));
}

inline CurvePoint scalar_multiple(const MinimalCurve &c, const CurvePoint &p, std::int64_t n)
{
    if (n < 0) {
        return scalar_multiple(c, negate(p), -n);
    }
    CurvePoint result;
    CurvePoint base = p;
    auto k = static_cast<std::uint64_t>(n);
    while (k > 0) {
        if (k & 1U) {
            result = add_points(c, result, base);
        }
        k >>= 1U;
        if (k > 0) {
            base = double_point(c, base);
        }
    }
    return result;
}

// [2]Q = P, checked through the doubling formulas cleared of denominators:
//   (x_Q^2 - eps)^2 = 4 x_P x_Q (x_Q + 1)(x_Q + eps)
//   (3 x_Q^2 + 2(1 + eps) x_Q + eps)(x_Q - x_P) = 2 y_Q (y_Q + y_P)
inline bool doubles_to(const MinimalCurve &c, const CurvePoint &q, const CurvePoint &p)
{
    if (q.is_infinity() || q.y().is_exact_zero()) {
        return p.is_infinity();
    }
    if (p.is_infinity()) {
        return false;
    }
    const PuiseuxNumber &x = q.x();
    const PuiseuxNumber &eps = c.epsilon();
    const PuiseuxNumber x2 = x * x;
    const PuiseuxNumber num = x2 - eps;
    if (!(num * num).agrees((p.x() * c.cubic(x)).scaled(Real(4)))) {
        return false;
    }
    const PuiseuxNumber slope_num = x2.scaled(Real(3)) + (PuiseuxNumber(1) + eps).scaled(Real(2)) * x + eps;
    return (slope_num * (x - p.x())).agrees((q.y() * (q.y() + p.y())).scaled(Real(2)));
}

// All K-rational Q with [2]Q = P. With r_e = sqrt(x_P - e) over the roots
// e of the cubic and signs chosen so that r_0 r_1 r_2 = y_P, the half is
//   x_Q = x_P + r_0 r_1 + r_0 r_2 + r_1 r_2,  y_Q = -y_P + (r_0 + r_1 + r_2)(x_Q - x_P).
inline std::vector<CurvePoint> halve_point(const MinimalCurve &c, const CurvePoint &p)
{
    if (p.is_infinity()) {
        throw Error(ErrorKind::InvalidArgument, "halving O is not supported");
    }
    const Precision &prec = c.precision();
    const PuiseuxNumber &x = p.x();
    const std::array<PuiseuxNumber, 3> radicands{x, x + PuiseuxNumber(1), x + c.epsilon()};
    std::array<PuiseuxNumber, 3> roots;
    for (std::size_t i = 0; i < 3; ++i) {
        const int s = radicands[i].sign();
        if (s < 0) {
            return {};
        }
        roots[i] = s == 0 ? PuiseuxNumber() : radicands[i].sqrt(prec);
    }
    const bool two_torsion = p.y().is_exact_zero();
    const int ysign = two_torsion ? 0 : p.y().sign();

    std::vector<CurvePoint> out;
    for (int mask = 0; mask < 8; ++mask) {
        const std::array<int, 3> sg{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
        if (!two_torsion && sg[0] * sg[1] * sg[2] != ysign) {
            continue;
        }
        std::array<PuiseuxNumber, 3> r;
        for (std::size_t i = 0; i < 3; ++i) {
            r[i] = sg[i] > 0 ? roots[i] : -roots[i];
        }
        PuiseuxNumber xq = x + r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        PuiseuxNumber yq = -p.y() + (r[0] + r[1] + r[2]) * (xq - x);
        yq = detail::settle_y(c, xq, std::move(yq));
        CurvePoint q(std::move(xq), std::move(yq));
        bool seen = false;
        for (const auto &o : out) {
            if (points_agree(o, q)) {
                seen = true;
                break;
            }
        }
        if (seen || !doubles_to(c, q, p)) {
            continue;
        }
        out.push_back(std::move(q));
    }
    return out;
}

// Cyclic order on E(K)^0 with T2 removed: O -> 0, y > 0 -> 1/(1+x), y < 0 -> -1/(1+x).
inline PuiseuxNumber orientation_key(const MinimalCurve &c, const CurvePoint &p)
{
    if (p.is_infinity()) {
        return PuiseuxNumber();
    }
    if (p.x().sign() < 0) {
        throw Error(ErrorKind::NotOnComponent, "point is not on the identity component: " + p.str());
    }
    const int ys = p.y().sign();
    if (ys == 0) {
        throw Error(ErrorKind::InvalidArgument, "T2 has no orientation key");
    }
    const PuiseuxNumber k = (p.x() + PuiseuxNumber(1)).inverse(c.precision());
    return ys > 0 ? k : -k;
}

inline bool on_identity_component(const CurvePoint &p)
{
    return p.is_infinity() || p.x().sign() >= 0;
}

// [T4, T8, ..., T_{2^depth}]: each term the half of the previous one lying on
// E(K)^0 with y > 0 that is closest to O.
inline std::vector<CurvePoint> bounding_torsion_chain(const MinimalCurve &c, int depth)
{
    if (depth < 2) {
        throw Error(ErrorKind::InvalidArgument, "chain depth must be at least 2");
    }
    std::vector<CurvePoint> chain;
    chain.push_back(lift_y(c, c.epsilon().sqrt(c.precision()), Branch::Plus));
    for (int k = 3; k <= depth; ++k) {
        std::optional<CurvePoint> best;
        std::optional<PuiseuxNumber> best_x;
        for (auto &q : halve_point(c, chain.back())) {
            if (!on_identity_component(q) || q.y().sign() <= 0) {
                continue;
            }
            // The key 1/(1+x) decreases in x, so the minimal key has the largest x.
            if (!best_x || compare(q.x(), *best_x) > 0) {
                best_x = q.x();
                best = std::move(q);
            }
        }
        if (!best) {
            throw Error(ErrorKind::HalvingFailed, "no rational half of T_" + std::to_string(1LL << (k - 1)));
        }
        chain.push_back(std::move(*best));
    }
    return chain;
}

// Change of variables taking y^2 = (x-e1)(x-e2)(x-e3) to minimal form:
// x -> (x - e3)/D, y -> y/D^(3/2) with D = e3 - e1.
struct LegendreTransform {
    MinimalCurve curve;
    PuiseuxNumber shift;
    PuiseuxNumber scale;
    PuiseuxNumber y_scale;

    CurvePoint map_point(const CurvePoint &p) const
    {
        if (p.is_infinity()) {
            return p;
        }
        const Precision &prec = curve.precision();
        return {(p.x() - shift) * scale.inverse(prec), p.y() * y_scale.inverse(prec)};
    }
};

inline LegendreTransform legendre_to_minimal(const PuiseuxNumber &e1, const PuiseuxNumber &e2,
                                             const PuiseuxNumber &e3, Precision prec = {})
{
    const auto c12 = compare(e1, e2);
    const auto c23 = compare(e2, e3);
    if (c12 == 0 || c23 == 0 || compare(e1, e3) == 0) {
        throw Error(ErrorKind::DegenerateRoots, "repeated root");
    }
    if (c12 > 0 || c23 > 0) {
        throw Error(ErrorKind::InvalidArgument, "roots must be given in increasing order");
    }
    const PuiseuxNumber d = e3 - e1;
    PuiseuxNumber eps = (e3 - e2) * d.inverse(prec);
    return {MinimalCurve(std::move(eps), prec), e3, d, d * d.sqrt(prec)};
}

} // namespace ecrcf

#endif
