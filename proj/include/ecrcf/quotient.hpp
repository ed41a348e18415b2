#ifndef ECRCF_QUOTIENT_HPP
#define ECRCF_QUOTIENT_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include <ecrcf/curve.hpp>
#include <ecrcf/error.hpp>
#include <ecrcf/reduction.hpp>

namespace ecrcf
{

enum class Scope { FullComponent, TruncatedBy };

enum class CaseLabel {
    FullGoodOrNonsplit,
    FullSplit,
    Trunc1_OutsideG00,
    Trunc2_NegVal,
    Trunc3_SplitPosVal,
    Trunc4_SplitZeroVal,
};

enum class Internality { ValueGroup, ResidueField };

enum class Witness {
    ReductionRepresentative,
    FStarToMultTruncation,
    ResidueCoordinates,
    FStarToSmallTruncation,
};

inline std::string to_string(Scope s)
{
    return s == Scope::FullComponent ? "full" : "truncated";
}

inline std::string to_string(CaseLabel c)
{
    switch (c) {
    case CaseLabel::FullGoodOrNonsplit:
        return "FullGoodOrNonsplit";
    case CaseLabel::FullSplit:
        return "FullSplit";
    case CaseLabel::Trunc1_OutsideG00:
        return "Trunc1_OutsideG00";
    case CaseLabel::Trunc2_NegVal:
        return "Trunc2_NegVal";
    case CaseLabel::Trunc3_SplitPosVal:
        return "Trunc3_SplitPosVal";
    case CaseLabel::Trunc4_SplitZeroVal:
        return "Trunc4_SplitZeroVal";
    }
    return "?";
}

inline std::string to_string(Internality i)
{
    return i == Internality::ValueGroup ? "value-group" : "residue-field";
}

inline std::string to_string(Witness w)
{
    switch (w) {
    case Witness::ReductionRepresentative:
        return "ReductionRepresentative";
    case Witness::FStarToMultTruncation:
        return "FStarToMultTruncation";
    case Witness::ResidueCoordinates:
        return "ResidueCoordinates";
    case Witness::FStarToSmallTruncation:
        return "FStarToSmallTruncation";
    }
    return "?";
}

// The group under study: E(K)^0 itself or its truncation [-S, S) by a point S.
class TruncationContext
{
public:
    static TruncationContext full(MinimalCurve curve)
    {
        return TruncationContext(std::move(curve), std::nullopt);
    }

    static TruncationContext truncated(MinimalCurve curve, CurvePoint s)
    {
        if (s.is_infinity() || !on_identity_component(s)) {
            throw Error(ErrorKind::InvalidTruncationPoint, "S must be an affine point of E(K)^0");
        }
        if (s.y().is_exact_zero() || s.y().sign() <= 0) {
            throw Error(ErrorKind::InvalidTruncationPoint, "S must have y_S > 0 (and S is not T2)");
        }
        return TruncationContext(std::move(curve), std::move(s));
    }

    const MinimalCurve &curve() const noexcept
    {
        return m_curve;
    }
    Scope scope() const noexcept
    {
        return m_s ? Scope::TruncatedBy : Scope::FullComponent;
    }
    const CurvePoint &truncation_point() const
    {
        if (!m_s) {
            throw Error(ErrorKind::WrongCase, "full component has no truncation point");
        }
        return *m_s;
    }
    ReductionType reduction() const noexcept
    {
        return m_reduction;
    }
    CaseLabel case_label() const noexcept
    {
        return m_case;
    }
    bool is_split_like() const noexcept
    {
        return m_case == CaseLabel::FullSplit || m_case == CaseLabel::Trunc3_SplitPosVal
               || m_case == CaseLabel::Trunc4_SplitZeroVal
               || (m_case == CaseLabel::Trunc1_OutsideG00 && m_reduction == ReductionType::SplitMultiplicative);
    }

private:
    TruncationContext(MinimalCurve curve, std::optional<CurvePoint> s)
        : m_curve(std::move(curve)), m_s(std::move(s)), m_reduction(reduction_type(m_curve))
    {
        m_case = route();
    }

    // Truncations are routed on v(x_S); in the split case S lies in E(K)^00
    // exactly when v(x_S) < v(eps), and v(x_S) >= v(eps) leaves the T2 class.
    CaseLabel route() const
    {
        const bool split = m_reduction == ReductionType::SplitMultiplicative;
        if (!m_s) {
            return split ? CaseLabel::FullSplit : CaseLabel::FullGoodOrNonsplit;
        }
        const Exponent v = m_s->x().val();
        if (v.sign() < 0) {
            return CaseLabel::Trunc2_NegVal;
        }
        if (!split) {
            return CaseLabel::Trunc1_OutsideG00;
        }
        if (v.sign() == 0) {
            return CaseLabel::Trunc4_SplitZeroVal;
        }
        return v < m_curve.epsilon().val() ? CaseLabel::Trunc3_SplitPosVal : CaseLabel::Trunc1_OutsideG00;
    }

    MinimalCurve m_curve;
    std::optional<CurvePoint> m_s;
    ReductionType m_reduction;
    CaseLabel m_case = CaseLabel::FullGoodOrNonsplit;
};

// ([b^-1, b), * mod b^2) for b > 1.
class MultTruncation
{
public:
    explicit MultTruncation(PuiseuxNumber b, Precision prec = {}) : m_b(std::move(b)), m_prec(prec)
    {
        if (compare(m_b, PuiseuxNumber(1)) <= 0) {
            throw Error(ErrorKind::InvalidArgument, "truncation bound must exceed 1");
        }
        m_b_inv = m_b.inverse(prec);
    }
    // The truncation whose lower end is a, with 0 < a < 1.
    static MultTruncation from_lower(const PuiseuxNumber &a, Precision prec = {})
    {
        MultTruncation h(a.inverse(prec), prec);
        h.m_b_inv = a;
        return h;
    }

    const PuiseuxNumber &bound() const noexcept
    {
        return m_b;
    }
    const PuiseuxNumber &lower() const noexcept
    {
        return m_b_inv;
    }
    const Precision &precision() const noexcept
    {
        return m_prec;
    }
    bool contains(const PuiseuxNumber &x) const
    {
        return compare(x, m_b_inv) >= 0 && compare(x, m_b) < 0;
    }

private:
    PuiseuxNumber m_b;
    PuiseuxNumber m_b_inv;
    Precision m_prec;
};

inline PuiseuxNumber mult_truncated_mul(const MultTruncation &h, const PuiseuxNumber &x, const PuiseuxNumber &y)
{
    PuiseuxNumber z = x * y;
    if (compare(z, h.bound()) >= 0) {
        return z * h.lower() * h.lower();
    }
    if (compare(z, h.lower()) < 0) {
        return z * h.bound() * h.bound();
    }
    return z;
}

inline PuiseuxNumber mult_truncated_inverse(const MultTruncation &h, const PuiseuxNumber &x)
{
    PuiseuxNumber z = x.inverse(h.precision());
    if (compare(z, h.bound()) >= 0) {
        return z * h.lower() * h.lower();
    }
    return z;
}

// |v(x)| < |v(b)| / n
inline bool h00_member(const MultTruncation &h, const PuiseuxNumber &x, int n)
{
    return x.val().abs() * Exponent(n) < h.bound().val().abs();
}

// Description of G^00 for a context: either the level family
// v(x_P) < bound / n or a single inequality v(x_P) < bound.
struct G00Criterion {
    CaseLabel case_label;
    bool level_indexed;
    Exponent bound;

    std::string str() const
    {
        if (level_indexed) {
            return "v(x_P) < (1/n)*" + bound.str();
        }
        return "v(x_P) < " + bound.str();
    }
};

inline G00Criterion g00_criterion(const TruncationContext &ctx)
{
    const Exponent veps = ctx.curve().epsilon().val();
    switch (ctx.case_label()) {
    case CaseLabel::FullSplit:
        return {ctx.case_label(), true, veps};
    case CaseLabel::FullGoodOrNonsplit:
    case CaseLabel::Trunc4_SplitZeroVal:
        return {ctx.case_label(), false, Exponent(0)};
    case CaseLabel::Trunc1_OutsideG00:
        if (ctx.reduction() == ReductionType::SplitMultiplicative) {
            return {ctx.case_label(), true, veps};
        }
        return {ctx.case_label(), false, Exponent(0)};
    case CaseLabel::Trunc2_NegVal:
        return {ctx.case_label(), false, ctx.truncation_point().x().val()};
    case CaseLabel::Trunc3_SplitPosVal:
        // The bounding chain of [-S, S) starts at S, so its valuations are v(x_S)/2^k.
        return {ctx.case_label(), true, ctx.truncation_point().x().val()};
    }
    throw Error(ErrorKind::WrongCase, "unknown case");
}

namespace detail
{

// v(x_P) with O at -infinity and exact zero at +infinity.
enum class Infinite { None, Minus, Plus };

inline std::pair<Infinite, Exponent> x_valuation(const CurvePoint &p)
{
    if (p.is_infinity()) {
        return {Infinite::Minus, Exponent()};
    }
    const auto v = p.x().valuation();
    if (!v) {
        return {Infinite::Plus, Exponent()};
    }
    return {Infinite::None, *v};
}

} // namespace detail

// Level-n test of the type-definable G^00.
inline bool g00_member(const TruncationContext &ctx, const CurvePoint &p, int n)
{
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "level must be at least 1");
    }
    const G00Criterion crit = g00_criterion(ctx);
    const auto [inf, v] = detail::x_valuation(p);
    if (inf != detail::Infinite::None) {
        return inf == detail::Infinite::Minus;
    }
    if (crit.level_indexed) {
        return v * Exponent(n) < crit.bound;
    }
    return v < crit.bound;
}

// The intersection over all levels, which in the model field (value group Q)
// collapses to a closed inequality for the level-indexed cases.
inline bool g00_member_exact(const TruncationContext &ctx, const CurvePoint &p)
{
    const G00Criterion crit = g00_criterion(ctx);
    const auto [inf, v] = detail::x_valuation(p);
    if (inf != detail::Infinite::None) {
        return inf == detail::Infinite::Minus;
    }
    if (crit.level_indexed) {
        return v.sign() <= 0;
    }
    return v < crit.bound;
}

// Level-n approximation of the class of T2: v(x_P) >= ((n-1)/n) v(eps).
inline bool t2_class_member(const MinimalCurve &c, const CurvePoint &p, int n)
{
    if (reduction_type(c) != ReductionType::SplitMultiplicative) {
        throw Error(ErrorKind::WrongCase, "the T2 class criterion needs split reduction");
    }
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "level must be at least 1");
    }
    const auto [inf, v] = detail::x_valuation(p);
    if (inf != detail::Infinite::None) {
        return inf == detail::Infinite::Plus;
    }
    return v * Exponent(n) >= Exponent(n - 1) * c.epsilon().val();
}

// Whether P lies in [-S, S) for the orientation key; T2 never does.
inline bool in_truncation(const TruncationContext &ctx, const CurvePoint &p)
{
    if (p.is_infinity()) {
        return true;
    }
    if (!on_identity_component(p) || p.y().is_exact_zero()) {
        return false;
    }
    const MinimalCurve &c = ctx.curve();
    const PuiseuxNumber ks = orientation_key(c, ctx.truncation_point());
    const PuiseuxNumber k = orientation_key(c, p);
    return compare(k, -ks) >= 0 && compare(k, ks) < 0;
}

// P (+) Q inside [-S, S), wrapping by [2]S.
inline CurvePoint truncated_add(const TruncationContext &ctx, const CurvePoint &p, const CurvePoint &q)
{
    if (ctx.scope() != Scope::TruncatedBy) {
        throw Error(ErrorKind::WrongCase, "truncated addition needs a truncation point");
    }
    if (!in_truncation(ctx, p) || !in_truncation(ctx, q)) {
        throw Error(ErrorKind::InvalidArgument, "operands must lie in [-S, S)");
    }
    const MinimalCurve &c = ctx.curve();
    const CurvePoint r = add_points(c, p, q);
    const int sp = p.is_infinity() ? 1 : orientation_key(c, p).sign();
    const int sq = q.is_infinity() ? 1 : orientation_key(c, q).sign();
    if (sp != sq || in_truncation(ctx, r)) {
        return r;
    }
    const CurvePoint s2 = double_point(c, ctx.truncation_point());
    return sp >= 0 ? subtract_points(c, r, s2) : add_points(c, r, s2);
}

// The multiplicative truncation targeted by f*: b = 1/eps for the full split
// component, b = 1/x_S for the split truncations.
inline MultTruncation fstar_target(const TruncationContext &ctx)
{
    const Precision &prec = ctx.curve().precision();
    switch (ctx.case_label()) {
    case CaseLabel::FullSplit:
        return MultTruncation::from_lower(ctx.curve().epsilon(), prec);
    case CaseLabel::Trunc3_SplitPosVal:
    case CaseLabel::Trunc4_SplitZeroVal:
        return MultTruncation::from_lower(ctx.truncation_point().x(), prec);
    default:
        break;
    }
    throw Error(ErrorKind::WrongCase, "f* is defined for split components and their truncations only");
}

//   1      if P = O or x_P >= 1
//   1/x_P  if y_P >= 0 and a < x_P < 1
//   x_P    if y_P < 0 and a < x_P < 1
//   a      if x_P <= a
// with a = eps, or a = x_S for truncations (there the clamp is our choice).
inline PuiseuxNumber f_star(const TruncationContext &ctx, const CurvePoint &p)
{
    const MultTruncation h = fstar_target(ctx);
    if (p.is_infinity() || compare(p.x(), PuiseuxNumber(1)) >= 0) {
        return PuiseuxNumber(1);
    }
    const PuiseuxNumber &a = h.lower();
    if (compare(p.x(), a) <= 0) {
        return a;
    }
    if (p.y().is_exact_zero() || p.y().sign() >= 0) {
        return p.x().inverse(h.precision());
    }
    return p.x();
}

struct ResidueCoordinate {
    int sign = 0;  // 0 for the identity class
    Real value;

    friend bool operator==(const ResidueCoordinate &a, const ResidueCoordinate &b)
    {
        return a.sign == b.sign && a.value == b.value;
    }
    std::string str() const
    {
        return sign == 0 ? "identity" : "(" + std::string(sign > 0 ? "+" : "-") + ", " + value.str() + ")";
    }
};

// Class of P in G/G^00 for a truncation with v(x_S) < 0:
// (sign y_P, st(x_P / t^v(x_S))), with G^00 sent to the identity.
inline ResidueCoordinate residue_coordinates(const TruncationContext &ctx, const CurvePoint &p)
{
    if (ctx.case_label() != CaseLabel::Trunc2_NegVal) {
        throw Error(ErrorKind::WrongCase, "residue coordinates need a truncation with v(x_S) < 0");
    }
    if (g00_member_exact(ctx, p)) {
        return {};
    }
    const Exponent vs = ctx.truncation_point().x().val();
    if (p.x().val() != vs) {
        throw Error(ErrorKind::InvalidArgument, "point lies outside the truncation: " + p.str());
    }
    return {p.y().sign(), p.x().shifted(-vs).standard_part()};
}

// Class of P in the value group: sign(y_P) v(x_P) / scale in (-1, 1], with
// scale = v(eps) for the component and v(x_S) for a split truncation. This is
// -v(f*(P))/v(eps) up to the identification of -1 with 1.
inline Exponent value_group_coordinate(const TruncationContext &ctx, const CurvePoint &p)
{
    const Exponent scale = ctx.case_label() == CaseLabel::Trunc3_SplitPosVal ? ctx.truncation_point().x().val()
                                                                              : ctx.curve().epsilon().val();
    const auto [inf, v] = detail::x_valuation(p);
    if (inf == detail::Infinite::Minus || (inf == detail::Infinite::None && v.sign() <= 0)) {
        return Exponent(0);
    }
    if (inf == detail::Infinite::Plus || v >= scale) {
        return Exponent(1);
    }
    const Exponent r = v / scale;
    return p.y().sign() >= 0 ? r : -r;
}

// st(f*(P)) for a truncation with v(x_S) = 0; 1/st(x_S) is the same class as st(x_S).
inline Real small_truncation_coordinate(const TruncationContext &ctx, const CurvePoint &p)
{
    if (ctx.case_label() != CaseLabel::Trunc4_SplitZeroVal) {
        throw Error(ErrorKind::WrongCase, "needs a split truncation with v(x_S) = 0");
    }
    const Real lo = ctx.truncation_point().x().standard_part();
    Real v = f_star(ctx, p).standard_part();
    if (v == lo.inverse()) {
        return lo;
    }
    return v;
}

using QuotientCoordinate = std::variant<ReducedPoint, Exponent, ResidueCoordinate, Real>;

inline QuotientCoordinate quotient_coordinate(const TruncationContext &ctx, const CurvePoint &p)
{
    switch (ctx.case_label()) {
    case CaseLabel::FullGoodOrNonsplit:
        return reduce_point(ctx.curve(), p);
    case CaseLabel::FullSplit:
    case CaseLabel::Trunc3_SplitPosVal:
        return value_group_coordinate(ctx, p);
    case CaseLabel::Trunc1_OutsideG00:
        if (ctx.reduction() == ReductionType::SplitMultiplicative) {
            return value_group_coordinate(ctx, p);
        }
        return reduce_point(ctx.curve(), p);
    case CaseLabel::Trunc2_NegVal:
        return residue_coordinates(ctx, p);
    case CaseLabel::Trunc4_SplitZeroVal:
        return small_truncation_coordinate(ctx, p);
    }
    throw Error(ErrorKind::WrongCase, "unknown case");
}

inline std::string to_string(const QuotientCoordinate &q)
{
    struct Printer {
        std::string operator()(const ReducedPoint &r) const
        {
            return r.str();
        }
        std::string operator()(const Exponent &e) const
        {
            return e.str();
        }
        std::string operator()(const ResidueCoordinate &r) const
        {
            return r.str();
        }
        std::string operator()(const Real &r) const
        {
            return r.str();
        }
    };
    return std::visit(Printer{}, q);
}

struct QuotientClassification {
    ReductionType reduction_type;
    Scope scope;
    CaseLabel case_label;
    bool one_based;
    Internality internality;
    Witness witness;
    // Lower end of the f* target when f* is the witness ("eps" or "x_S").
    std::optional<std::string> fstar_clamp;
};

inline QuotientClassification classify(const TruncationContext &ctx)
{
    QuotientClassification q{ctx.reduction(), ctx.scope(), ctx.case_label(), false,
                             Internality::ResidueField, Witness::ReductionRepresentative, std::nullopt};
    auto value_group = [&q](std::string clamp) {
        q.one_based = true;
        q.internality = Internality::ValueGroup;
        q.witness = Witness::FStarToMultTruncation;
        q.fstar_clamp = std::move(clamp);
    };
    switch (ctx.case_label()) {
    case CaseLabel::FullSplit:
        value_group("eps");
        break;
    case CaseLabel::FullGoodOrNonsplit:
        break;
    case CaseLabel::Trunc1_OutsideG00:
        if (ctx.reduction() == ReductionType::SplitMultiplicative) {
            value_group("eps");
        }
        break;
    case CaseLabel::Trunc2_NegVal:
        q.witness = Witness::ResidueCoordinates;
        break;
    case CaseLabel::Trunc3_SplitPosVal:
        value_group("x_S");
        break;
    case CaseLabel::Trunc4_SplitZeroVal:
        q.witness = Witness::FStarToSmallTruncation;
        q.fstar_clamp = "x_S";
        break;
    }
    return q;
}

} // namespace ecrcf

#endif
