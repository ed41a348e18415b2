#include <random>

#include <gtest/gtest.h>

#include <ecrcf/curve.hpp>
#include <ecrcf/parse.hpp>
#include <ecrcf/sampling.hpp>

using namespace ecrcf;

namespace
{

PuiseuxNumber P(const char *s)
{
    return parse_series(s);
}

MinimalCurve curve(const char *eps)
{
    return MinimalCurve(P(eps));
}

ErrorKind kind_of(auto &&f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

const CurvePoint T2{PuiseuxNumber(), PuiseuxNumber()};

// Oracle: P, Q and -(P + Q) lie on one line (slope from P and Q, or the tangent at P).
bool collinear_with_sum(const MinimalCurve &c, const CurvePoint &p, const CurvePoint &q, const CurvePoint &s)
{
    const CurvePoint r = negate(s);
    if (points_agree(p, q)) {
        const PuiseuxNumber &x = p.x();
        const PuiseuxNumber slope_num = PuiseuxNumber(3) * x * x + PuiseuxNumber(2) * (PuiseuxNumber(1) + c.epsilon()) * x
                                        + c.epsilon();
        return ((r.y() - p.y()) * PuiseuxNumber(2) * p.y()).agrees(slope_num * (r.x() - p.x()));
    }
    return ((q.y() - p.y()) * (r.x() - p.x())).agrees((r.y() - p.y()) * (q.x() - p.x()));
}

} // namespace

TEST(MinimalCurve, RejectsEpsilonOutsideUnitInterval)
{
    EXPECT_EQ(kind_of([] { (void)curve("0"); }), ErrorKind::InvalidCurve);
    EXPECT_EQ(kind_of([] { (void)curve("1"); }), ErrorKind::InvalidCurve);
    EXPECT_EQ(kind_of([] { (void)curve("1 + t"); }), ErrorKind::InvalidCurve);
    EXPECT_EQ(kind_of([] { (void)curve("-t"); }), ErrorKind::InvalidCurve);
    EXPECT_NO_THROW((void)curve("1 - t"));
}

TEST(LiftY, RootsAndT4)
{
    const MinimalCurve c = curve("t");
    const CurvePoint z = lift_y(c, PuiseuxNumber(), Branch::Plus);
    EXPECT_TRUE(z.x().is_exact_zero() && z.y().is_exact_zero());
    const CurvePoint t4 = lift_y(c, P("t").sqrt(), Branch::Plus);
    EXPECT_EQ(t4.y().sign(), 1);
    EXPECT_TRUE(on_curve(c, t4));
}

// The cubic at -1/4 is (-1/4)(3/4)(1/4) < 0.
TEST(LiftY, NegativeRadicand)
{
    const MinimalCurve c = curve("1/2");
    EXPECT_LT(c.cubic(P("-1/4")).sign(), 0);
    EXPECT_EQ(kind_of([&] { (void)lift_y(c, P("-1/4"), Branch::Plus); }), ErrorKind::NegativeRadicand);
}

TEST(GroupLaw, IdentityAndInverseAreExact)
{
    const MinimalCurve c = curve("1/2 + t");
    const CurvePoint p = lift_y(c, P("2 + t^(1/2)"), Branch::Minus);
    const CurvePoint s = add_points(c, p, CurvePoint());
    EXPECT_TRUE(s.x().identical(p.x()) && s.y().identical(p.y()));
    EXPECT_TRUE(add_points(c, p, negate(p)).is_infinity());
    EXPECT_TRUE(add_points(c, CurvePoint(), CurvePoint()).is_infinity());
}

TEST(GroupLaw, ChordAndTangentOracle)
{
    for (const char *eps : {"1/2", "1 - t", "t", "t^2"}) {
        const MinimalCurve c = curve(eps);
        auto rng = trial_rng(21, 0);
        PointSampler sampler(c, rng);
        const auto vals = PointSampler::boundary_valuations(c);
        for (int i = 0; i < 20; ++i) {
            const CurvePoint p = sampler.point(vals);
            const CurvePoint q = sampler.point(vals);
            const CurvePoint s = add_points(c, p, q);
            if (s.is_infinity()) {
                EXPECT_TRUE(points_agree(p, negate(q)));
                continue;
            }
            EXPECT_TRUE(on_curve(c, s)) << eps << " " << p.str() << " " << q.str();
            EXPECT_TRUE(collinear_with_sum(c, p, q, s)) << eps << " " << p.str() << " " << q.str();
            const CurvePoint d = double_point(c, p);
            EXPECT_TRUE(on_curve(c, d));
            EXPECT_TRUE(collinear_with_sum(c, p, p, d)) << eps << " " << p.str();
            EXPECT_TRUE(points_agree(d, add_points(c, p, p)));
        }
    }
}

TEST(GroupLaw, DoublingClosedFormForX)
{
    const MinimalCurve c = curve("1/3 + t");
    const CurvePoint p = lift_y(c, P("5 - t"), Branch::Plus);
    const PuiseuxNumber &x = p.x();
    const PuiseuxNumber num = x * x - c.epsilon();
    const PuiseuxNumber want = num * num * (PuiseuxNumber(4) * c.cubic(x)).inverse();
    EXPECT_TRUE(double_point(c, p).x().agrees(want));
}

TEST(Doubling, T4DoublesToT2AndT2ToO)
{
    const MinimalCurve c = curve("t");
    const CurvePoint t4 = lift_y(c, P("t^(1/2)"), Branch::Plus);
    const CurvePoint d = double_point(c, t4);
    ASSERT_FALSE(d.is_infinity());
    EXPECT_TRUE(d.x().is_exact_zero());
    EXPECT_TRUE(d.y().is_exact_zero());
    EXPECT_TRUE(double_point(c, T2).is_infinity());
    EXPECT_TRUE(double_point(c, CurvePoint{P("-1"), PuiseuxNumber()}).is_infinity());
}

TEST(Halving, T2HasHalfAtSqrtEpsilon)
{
    const MinimalCurve c = curve("t");
    const auto halves = halve_point(c, T2);
    ASSERT_FALSE(halves.empty());
    bool found = false;
    for (const auto &q : halves) {
        found = found || q.x().agrees(P("t^(1/2)"));
        EXPECT_TRUE(points_agree(double_point(c, q), T2));
    }
    EXPECT_TRUE(found);
}

TEST(Halving, EveryHalfDoublesBack)
{
    for (const char *eps : {"1/2", "t"}) {
        const MinimalCurve c = curve(eps);
        const CurvePoint p = lift_y(c, P("3 + t"), Branch::Plus);
        for (const CurvePoint &target : {T2, p}) {
            const auto halves = halve_point(c, target);
            EXPECT_FALSE(halves.empty()) << eps;
            for (const auto &q : halves) {
                EXPECT_TRUE(on_curve(c, q));
                EXPECT_TRUE(points_agree(double_point(c, q), target)) << eps << " " << q.str();
            }
        }
    }
}

TEST(OrientationKey, SignsAndMonotonicity)
{
    const MinimalCurve c = curve("t");
    EXPECT_TRUE(orientation_key(c, CurvePoint()).is_exact_zero());
    const CurvePoint t4 = lift_y(c, P("t^(1/2)"), Branch::Plus);
    EXPECT_EQ(orientation_key(c, t4).sign(), 1);
    EXPECT_EQ(orientation_key(c, negate(t4)).sign(), -1);
    const CurvePoint far = lift_y(c, P("5"), Branch::Plus);
    const CurvePoint near = lift_y(c, P("7"), Branch::Plus);
    EXPECT_TRUE(orientation_key(c, near) < orientation_key(c, far));
    EXPECT_EQ(kind_of([&] { (void)orientation_key(c, lift_y(c, P("-1/2"), Branch::Plus)); }), ErrorKind::NotOnComponent);
}

TEST(TorsionChain, SplitValuationsHalve)
{
    const MinimalCurve c = curve("t");
    const auto chain = bounding_torsion_chain(c, 6);
    ASSERT_EQ(chain.size(), 5U);
    const Exponent want[] = {Exponent(1, 2), Exponent(1, 4), Exponent(1, 8), Exponent(1, 16), Exponent(1, 32)};
    for (std::size_t k = 0; k < chain.size(); ++k) {
        EXPECT_EQ(chain[k].x().val(), want[k]);
        EXPECT_EQ(chain[k].y().sign(), 1);
    }
}

TEST(TorsionChain, GoodReductionGrowth)
{
    const MinimalCurve c = curve("1/2");
    const auto chain = bounding_torsion_chain(c, 4);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const int n = static_cast<int>(k) + 2;
        EXPECT_EQ(chain[k].x().val(), Exponent(0));
        if (n >= 3) {
            EXPECT_TRUE(chain[k].x() > c.epsilon().scaled(Real(Rational(1, 1L << (2 * (n - 3))))));
        }
    }
}

// Doubling down to T2 is exact for T4 only; deeper elements land on T2 below
// the horizon, and T2 itself doubles to O.
TEST(TorsionChain, EachElementIsTorsion)
{
    const MinimalCurve c = curve("t");
    const auto chain = bounding_torsion_chain(c, 5);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        CurvePoint d = chain[k];
        for (std::size_t j = 0; j < k + 1; ++j) {
            d = double_point(c, d);
        }
        ASSERT_FALSE(d.is_infinity()) << k;
        EXPECT_TRUE(points_agree(d, T2)) << k;
    }
    EXPECT_TRUE(double_point(c, double_point(c, chain.front())).is_infinity());
}

TEST(TorsionChain, RejectsShallowDepth)
{
    EXPECT_THROW((void)bounding_torsion_chain(curve("t"), 1), Error);
}

// Oracle: substituting x = D X + e3, y = D^(3/2) Y matches the coefficients
// exactly when D = e3 - e1 and eps D = e3 - e2.
TEST(Legendre, CoefficientOracle)
{
    struct Case {
        const char *e1, *e2, *e3, *eps;
    };
    for (const Case &k : {Case{"0", "1", "2", "1/2"}, Case{"0", "t", "1", "1 - t"}, Case{"0", "1 - t", "1", "t"}}) {
        const auto tr = legendre_to_minimal(P(k.e1), P(k.e2), P(k.e3));
        const PuiseuxNumber eps = tr.curve.epsilon();
        EXPECT_TRUE(eps.identical(P(k.eps))) << eps.str();
        EXPECT_TRUE((eps * tr.scale).agrees(P(k.e3) - P(k.e2)));
        EXPECT_TRUE(tr.scale.agrees(P(k.e3) - P(k.e1)));
        EXPECT_TRUE(tr.shift.agrees(P(k.e3)));
        const PuiseuxNumber x = P(k.e3) + P("3 + t");
        const PuiseuxNumber y2 = (x - P(k.e1)) * (x - P(k.e2)) * (x - P(k.e3));
        const CurvePoint image = tr.map_point(CurvePoint{x, y2.sqrt()});
        EXPECT_TRUE(on_curve(tr.curve, image));
    }
    EXPECT_EQ(P("1 - t").val(), Exponent(0));
    EXPECT_EQ(legendre_to_minimal(P("0"), P("1 - t"), P("1")).curve.epsilon().val(), Exponent(1));
}

TEST(Legendre, Errors)
{
    EXPECT_EQ(kind_of([] { (void)legendre_to_minimal(P("0"), P("0"), P("1")); }), ErrorKind::DegenerateRoots);
    EXPECT_EQ(kind_of([] { (void)legendre_to_minimal(P("1"), P("0"), P("2")); }), ErrorKind::InvalidArgument);
}

TEST(ScalarMultiple, MatchesRepeatedAddition)
{
    const MinimalCurve c = curve("1/2 + t");
    const CurvePoint p = lift_y(c, P("1 + t^(1/2)"), Branch::Plus);
    CurvePoint acc;
    for (int n = 1; n <= 5; ++n) {
        acc = add_points(c, acc, p);
        EXPECT_TRUE(points_agree(scalar_multiple(c, p, n), acc)) << n;
    }
    EXPECT_TRUE(points_agree(scalar_multiple(c, p, -2), negate(double_point(c, p))));
}
