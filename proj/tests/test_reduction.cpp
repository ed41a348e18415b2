#include <gtest/gtest.h>

#include <ecrcf/parse.hpp>
#include <ecrcf/reduction.hpp>
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

} // namespace

TEST(ReductionType, ThreeKinds)
{
    EXPECT_EQ(reduction_type(curve("1/2")), ReductionType::Good);
    EXPECT_EQ(reduction_type(curve("1 - t")), ReductionType::NonsplitMultiplicative);
    EXPECT_EQ(reduction_type(curve("t")), ReductionType::SplitMultiplicative);
    EXPECT_EQ(reduction_type(curve("1/2 + t")), ReductionType::Good);
    EXPECT_EQ(to_string(ReductionType::NonsplitMultiplicative), "nonsplit");
}

// Oracle: the output satisfies the reduced equation y^2 = x(x+1)(x+1/2).
TEST(ReducePoint, FiniteCoordinates)
{
    const MinimalCurve c = curve("1/2 + t");
    const CurvePoint p = lift_y(c, P("1"), Branch::Plus);
    const ReducedPoint r = reduce_point(c, p);
    ASSERT_FALSE(r.is_infinity());
    EXPECT_EQ(r.x(), Real(1));
    EXPECT_EQ(r.y(), Real::sqrt(Real(3)));
    EXPECT_FALSE(r.is_singular());
    EXPECT_TRUE(reduced_on_curve(reduced_epsilon(c), r));
    EXPECT_EQ(reduced_epsilon(c), Real::fraction(1, 2));
}

TEST(ReducePoint, NegativeValuationGoesToInfinity)
{
    const MinimalCurve c = curve("t");
    const CurvePoint p = lift_y(c, P("t^(-3)"), Branch::Minus);
    EXPECT_TRUE(reduce_point(c, p).is_infinity());
    EXPECT_EQ(reduce_point(c, p).str(), "O~");
    EXPECT_TRUE(e1_membership(c, p));
    EXPECT_TRUE(e0_membership(c, p));
    EXPECT_TRUE(e1_membership(c, CurvePoint()));
}

TEST(ReducePoint, SplitNode)
{
    const MinimalCurve c = curve("t");
    const ReducedPoint r = reduce_point(c, CurvePoint{PuiseuxNumber(), PuiseuxNumber()});
    ASSERT_FALSE(r.is_infinity());
    EXPECT_TRUE(r.is_singular());
    EXPECT_EQ(r.str(), "(0, 0)");
    EXPECT_FALSE(e0_membership(c, CurvePoint{PuiseuxNumber(), PuiseuxNumber()}));
    // Points of small positive valuation also reduce to the node.
    EXPECT_FALSE(e0_membership(c, lift_y(c, P("t^(1/4)"), Branch::Plus)));
}

TEST(ReducePoint, NonsplitNode)
{
    const MinimalCurve c = curve("1 - t");
    const ReducedPoint r = reduce_point(c, CurvePoint{P("-1"), PuiseuxNumber()});
    EXPECT_TRUE(r.is_singular());
    EXPECT_FALSE(reduce_point(c, CurvePoint{PuiseuxNumber(), PuiseuxNumber()}).is_singular());
}

TEST(ReducePoint, GoodReductionIsAlwaysNonsingular)
{
    const MinimalCurve c = curve("1/2");
    auto rng = trial_rng(3, 0);
    PointSampler sampler(c, rng);
    for (int i = 0; i < 30; ++i) {
        const CurvePoint p = sampler.point(PointSampler::boundary_valuations(c));
        EXPECT_TRUE(e0_membership(c, p)) << p.str();
    }
    for (const char *x : {"0", "-1", "-1/2"}) {
        EXPECT_TRUE(e0_membership(c, CurvePoint{P(x), PuiseuxNumber()}));
    }
}

TEST(ReducedAdd, IdentityAndTwoTorsion)
{
    const MinimalCurve good = curve("1/2");
    const ReducedPoint a(Real(0), Real(0), false);
    EXPECT_EQ(reduced_add(good, a, ReducedPoint()), a);
    EXPECT_EQ(reduced_add(good, ReducedPoint(), a), a);
    EXPECT_TRUE(reduced_add(good, a, a).is_infinity());
}

// Oracle: the tangent at (-1, 0) on y^2 = x^2(x+1) is vertical, so the double is O~.
TEST(ReducedAdd, SplitTwoTorsionOnNonsingularLocus)
{
    const MinimalCurve c = curve("t");
    const Real x(-1);
    EXPECT_EQ(Real(3) * x * x + Real(2) * x, Real(1));
    const ReducedPoint m(Real(-1), Real(0), false);
    EXPECT_TRUE(reduced_add(c, m, m).is_infinity());
}

TEST(ReducedAdd, NodeIsRejected)
{
    const MinimalCurve c = curve("t");
    const ReducedPoint node = reduce_point(c, CurvePoint{PuiseuxNumber(), PuiseuxNumber()});
    try {
        (void)reduced_add(c, node, ReducedPoint());
        FAIL() << "expected SingularOperand";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularOperand);
    }
}

TEST(ReductionHomomorphism, SampledPairs)
{
    for (const char *eps : {"1/2 + t", "1 - t", "t"}) {
        const MinimalCurve c = curve(eps);
        auto rng = trial_rng(17, 0);
        PointSampler sampler(c, rng);
        const auto vals = PointSampler::boundary_valuations(c);
        int tested = 0;
        for (int i = 0; i < 60; ++i) {
            const CurvePoint p = sampler.point(vals);
            const CurvePoint q = sampler.point(vals);
            if (!e0_membership(c, p) || !e0_membership(c, q)) {
                continue;
            }
            const CurvePoint s = add_points(c, p, q);
            if (!e0_membership(c, s)) {
                continue;
            }
            ++tested;
            const ReducedPoint lhs = reduce_point(c, s);
            EXPECT_EQ(lhs, reduced_add(c, reduce_point(c, p), reduce_point(c, q))) << eps << " " << p.str() << " " << q.str();
            EXPECT_TRUE(reduced_on_curve(reduced_epsilon(c), lhs));
        }
        EXPECT_GE(tested, 10) << eps;
    }
}
