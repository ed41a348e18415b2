#include <gtest/gtest.h>

#include <ecrcf/parse.hpp>
#include <ecrcf/quotient.hpp>
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

TruncationContext truncation(const char *eps, const char *xs)
{
    const MinimalCurve c = curve(eps);
    return TruncationContext::truncated(c, lift_y(c, P(xs), Branch::Plus));
}

CurvePoint point(const MinimalCurve &c, const char *x, Branch b = Branch::Plus)
{
    return lift_y(c, P(x), b);
}

ErrorKind kind_of(auto &&f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    return ErrorKind::ParseError;
}

} // namespace

TEST(Classify, SixScenarios)
{
    struct Row {
        const char *eps;
        const char *xs;
        ReductionType reduction;
        CaseLabel label;
        bool one_based;
        Internality internality;
        Witness witness;
    };
    const Row rows[] = {
        {"t", nullptr, ReductionType::SplitMultiplicative, CaseLabel::FullSplit, true, Internality::ValueGroup,
         Witness::FStarToMultTruncation},
        {"1/2", nullptr, ReductionType::Good, CaseLabel::FullGoodOrNonsplit, false, Internality::ResidueField,
         Witness::ReductionRepresentative},
        {"1 - t", nullptr, ReductionType::NonsplitMultiplicative, CaseLabel::FullGoodOrNonsplit, false,
         Internality::ResidueField, Witness::ReductionRepresentative},
        {"t", "t^(-1)", ReductionType::SplitMultiplicative, CaseLabel::Trunc2_NegVal, false, Internality::ResidueField,
         Witness::ResidueCoordinates},
        {"t", "t^(1/4)", ReductionType::SplitMultiplicative, CaseLabel::Trunc3_SplitPosVal, true,
         Internality::ValueGroup, Witness::FStarToMultTruncation},
        {"t", "1/2", ReductionType::SplitMultiplicative, CaseLabel::Trunc4_SplitZeroVal, false,
         Internality::ResidueField, Witness::FStarToSmallTruncation},
    };
    for (const Row &r : rows) {
        const TruncationContext ctx =
            r.xs ? truncation(r.eps, r.xs) : TruncationContext::full(curve(r.eps));
        const QuotientClassification q = classify(ctx);
        EXPECT_EQ(q.reduction_type, r.reduction) << r.eps;
        EXPECT_EQ(q.case_label, r.label) << r.eps << " " << (r.xs ? r.xs : "full");
        EXPECT_EQ(q.one_based, r.one_based);
        EXPECT_EQ(q.internality, r.internality);
        EXPECT_EQ(q.witness, r.witness);
        EXPECT_EQ(q.one_based, q.internality == Internality::ValueGroup);
    }
}

TEST(Classify, OutsideInfinitesimalSubgroupKeepsFullVerdict)
{
    const QuotientClassification split = classify(truncation("t", "t^2"));
    EXPECT_EQ(split.case_label, CaseLabel::Trunc1_OutsideG00);
    EXPECT_TRUE(split.one_based);
    const QuotientClassification good = classify(truncation("1/2", "1"));
    EXPECT_EQ(good.case_label, CaseLabel::Trunc1_OutsideG00);
    EXPECT_FALSE(good.one_based);
    EXPECT_EQ(classify(truncation("1/2", "t^(-2)")).case_label, CaseLabel::Trunc2_NegVal);
}

TEST(Classify, TruncationPointMustBeValid)
{
    const MinimalCurve c = curve("t");
    EXPECT_EQ(kind_of([&] { (void)TruncationContext::truncated(c, point(c, "t^(1/4)", Branch::Minus)); }),
              ErrorKind::InvalidTruncationPoint);
    EXPECT_EQ(kind_of([&] { (void)TruncationContext::truncated(c, CurvePoint{PuiseuxNumber(), PuiseuxNumber()}); }),
              ErrorKind::InvalidTruncationPoint);
    EXPECT_EQ(kind_of([&] { (void)TruncationContext::truncated(c, CurvePoint()); }), ErrorKind::InvalidTruncationPoint);
}

TEST(G00, LevelPredicates)
{
    const TruncationContext split = TruncationContext::full(curve("t"));
    const MinimalCurve &c = split.curve();
    EXPECT_FALSE(g00_member(split, point(c, "t^(1/2)"), 2));
    EXPECT_TRUE(g00_member(split, point(c, "t^(1/2)"), 1));
    for (int n : {1, 5, 100}) {
        EXPECT_TRUE(g00_member(split, point(c, "t^(-1)"), n));
    }
    EXPECT_TRUE(g00_member(split, CurvePoint(), 3));
    EXPECT_EQ(g00_criterion(split).str(), "v(x_P) < (1/n)*1");

    const TruncationContext good = TruncationContext::full(curve("1/2"));
    EXPECT_TRUE(g00_member(good, point(good.curve(), "t^(-1)"), 1));
    EXPECT_FALSE(g00_member(good, point(good.curve(), "2"), 1));
}

TEST(G00, TwoTorsionClass)
{
    const MinimalCurve c = curve("t");
    for (int n : {1, 2, 10}) {
        EXPECT_TRUE(t2_class_member(c, point(c, "t"), n));
    }
    EXPECT_FALSE(t2_class_member(c, point(c, "t^(1/2)"), 3));
    EXPECT_TRUE(t2_class_member(c, point(c, "t^(1/2)"), 2));
    EXPECT_THROW((void)t2_class_member(curve("1/2"), point(c, "t"), 2), Error);
}

TEST(MultTruncation, Multiplication)
{
    const MultTruncation h(P("t^(-1)"));
    EXPECT_TRUE(mult_truncated_mul(h, PuiseuxNumber(1), P("3 + t")).identical(P("3 + t")));
    const PuiseuxNumber x = P("t^(-1/2)");
    const PuiseuxNumber z = mult_truncated_mul(h, x, x);
    EXPECT_EQ(z.val(), Exponent(1));
    EXPECT_TRUE(h.contains(z));
    const PuiseuxNumber w = mult_truncated_mul(h, P("t^(1/2)"), P("t^(3/4)"));
    EXPECT_TRUE(h.contains(w));
    EXPECT_TRUE(mult_truncated_mul(h, w, mult_truncated_inverse(h, w)).agrees(PuiseuxNumber(1)));
    EXPECT_THROW(MultTruncation(P("1/2")), Error);
}

TEST(MultTruncation, InfinitesimalSubgroup)
{
    const MultTruncation h(P("t^(-1)"));
    for (int n : {1, 2, 50}) {
        EXPECT_TRUE(h00_member(h, PuiseuxNumber(1), n));
        EXPECT_TRUE(h00_member(h, PuiseuxNumber(2), n));
    }
    EXPECT_FALSE(h00_member(h, P("t^(1/2)"), 2));
    EXPECT_TRUE(h00_member(h, P("t^(1/2)"), 1));
}

TEST(FStar, Display)
{
    const TruncationContext ctx = TruncationContext::full(curve("t^2"));
    const MinimalCurve &c = ctx.curve();
    EXPECT_TRUE(f_star(ctx, point(c, "2")).identical(PuiseuxNumber(1)));
    EXPECT_TRUE(f_star(ctx, CurvePoint()).identical(PuiseuxNumber(1)));
    EXPECT_TRUE(f_star(ctx, point(c, "t", Branch::Minus)).identical(P("t")));
    EXPECT_TRUE(f_star(ctx, point(c, "t", Branch::Plus)).identical(P("t^(-1)")));
    EXPECT_TRUE(f_star(ctx, point(c, "t^3")).identical(P("t^2")));
    EXPECT_TRUE(f_star(ctx, CurvePoint{PuiseuxNumber(), PuiseuxNumber()}).identical(P("t^2")));
    EXPECT_THROW((void)f_star(TruncationContext::full(curve("1/2")), point(c, "2")), Error);
}

TEST(FStar, LandsInTarget)
{
    const TruncationContext ctx = TruncationContext::full(curve("t^2"));
    const MultTruncation h = fstar_target(ctx);
    auto rng = trial_rng(5, 0);
    PointSampler sampler(ctx.curve(), rng);
    for (int i = 0; i < 40; ++i) {
        const CurvePoint p = sampler.point(PointSampler::boundary_valuations(ctx.curve()));
        const PuiseuxNumber f = f_star(ctx, p);
        EXPECT_TRUE(h.contains(f) || f.agrees(h.lower())) << p.str();
    }
}

TEST(ResidueCoordinates, Examples)
{
    const TruncationContext ctx = truncation("t", "t^(-1)");
    const MinimalCurve &c = ctx.curve();
    const ResidueCoordinate r = residue_coordinates(ctx, point(c, "2*t^(-1) + 1"));
    EXPECT_EQ(r.sign, 1);
    EXPECT_EQ(r.value, Real(2));

    // v(x_P - x_Q) > v(x_S): same class.
    EXPECT_EQ(residue_coordinates(ctx, point(c, "3*t^(-1) + 5")), residue_coordinates(ctx, point(c, "3*t^(-1) - t")));
    // v(x_P - x_Q) = v(x_S): different classes.
    EXPECT_FALSE(residue_coordinates(ctx, point(c, "3*t^(-1)")) == residue_coordinates(ctx, point(c, "4*t^(-1)")));
    EXPECT_FALSE(residue_coordinates(ctx, point(c, "3*t^(-1)", Branch::Plus))
                 == residue_coordinates(ctx, point(c, "3*t^(-1)", Branch::Minus)));
    // Deeper points are in G^00.
    EXPECT_EQ(residue_coordinates(ctx, point(c, "t^(-2)")).sign, 0);
    EXPECT_THROW((void)residue_coordinates(TruncationContext::full(c), point(c, "t^(-1)")), Error);
}

TEST(QuotientCoordinate, FullComponent)
{
    const TruncationContext good = TruncationContext::full(curve("1/2"));
    const CurvePoint p = point(good.curve(), "1 + t");
    EXPECT_EQ(std::get<ReducedPoint>(quotient_coordinate(good, p)), reduce_point(good.curve(), p));

    const TruncationContext split = TruncationContext::full(curve("t"));
    const MinimalCurve &c = split.curve();
    const Exponent t2 = std::get<Exponent>(quotient_coordinate(split, CurvePoint{PuiseuxNumber(), PuiseuxNumber()}));
    EXPECT_EQ(t2.abs(), Exponent(1));
    EXPECT_EQ(std::get<Exponent>(quotient_coordinate(split, point(c, "t^(-2)"))), Exponent(0));
    EXPECT_EQ(std::get<Exponent>(quotient_coordinate(split, CurvePoint())), Exponent(0));
    EXPECT_EQ(std::get<Exponent>(quotient_coordinate(split, point(c, "t^(1/3)", Branch::Minus))), Exponent(-1, 3));
}

// Oracle: the value-group coordinate is -v(f*(P))/v(eps), with -1 and 1 identified.
TEST(QuotientCoordinate, MatchesFStarValuation)
{
    const TruncationContext ctx = TruncationContext::full(curve("t^2"));
    auto rng = trial_rng(8, 0);
    PointSampler sampler(ctx.curve(), rng);
    const Exponent ve = ctx.curve().epsilon().val();
    for (int i = 0; i < 40; ++i) {
        const CurvePoint p = sampler.point(PointSampler::boundary_valuations(ctx.curve()));
        Exponent want = -(f_star(ctx, p).val() / ve);
        if (want == Exponent(-1)) {
            want = Exponent(1);
        }
        EXPECT_EQ(std::get<Exponent>(quotient_coordinate(ctx, p)), want) << p.str();
    }
}

TEST(QuotientCoordinate, SmallTruncation)
{
    const TruncationContext ctx = truncation("t", "1/2");
    const MinimalCurve &c = ctx.curve();
    EXPECT_EQ(std::get<Real>(quotient_coordinate(ctx, point(c, "3/4", Branch::Minus))), Real::fraction(3, 4));
    EXPECT_EQ(std::get<Real>(quotient_coordinate(ctx, point(c, "3/4 + t", Branch::Minus))), Real::fraction(3, 4));
    EXPECT_EQ(std::get<Real>(quotient_coordinate(ctx, point(c, "3/4", Branch::Plus))), Real::fraction(4, 3));
}

TEST(TruncatedAdd, IdentityAndInRangeSums)
{
    const TruncationContext ctx = truncation("t", "t^(-1)");
    const MinimalCurve &c = ctx.curve();
    const CurvePoint p = point(c, "3*t^(-1)");
    const CurvePoint s = truncated_add(ctx, p, CurvePoint());
    EXPECT_TRUE(s.x().identical(p.x()) && s.y().identical(p.y()));
    const CurvePoint q = point(c, "5*t^(-1)", Branch::Minus);
    EXPECT_TRUE(points_agree(truncated_add(ctx, p, q), add_points(c, p, q)));
    EXPECT_THROW((void)truncated_add(TruncationContext::full(c), p, q), Error);
}

TEST(TruncatedAdd, WrapsBackIntoRange)
{
    const TruncationContext ctx = truncation("t", "t^(-1)");
    const MinimalCurve &c = ctx.curve();
    auto rng = trial_rng(4, 0);
    PointSampler sampler(c, rng);
    int wrapped = 0;
    for (int i = 0; i < 40; ++i) {
        const Branch b = sampler.branch();
        const CurvePoint p = lift_y(c, P("t^(-1)") * PuiseuxNumber(Real(Rational(1) + sampler.positive_rational())), b);
        const CurvePoint q = lift_y(c, P("t^(-1)") * PuiseuxNumber(Real(Rational(1) + sampler.positive_rational())), b);
        ASSERT_TRUE(in_truncation(ctx, p) && in_truncation(ctx, q));
        const CurvePoint r = truncated_add(ctx, p, q);
        EXPECT_TRUE(in_truncation(ctx, r)) << p.str() << " " << q.str();
        wrapped += in_truncation(ctx, add_points(c, p, q)) ? 0 : 1;
    }
    EXPECT_GT(wrapped, 0);
}
