#ifndef ECRCF_SUITES_HPP
#define ECRCF_SUITES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <ecrcf/curve.hpp>
#include <ecrcf/error.hpp>
#include <ecrcf/parse.hpp>
#include <ecrcf/quotient.hpp>
#include <ecrcf/reduction.hpp>
#include <ecrcf/sampling.hpp>

namespace ecrcf
{

struct SuiteOptions {
    std::optional<std::string> epsilon;
    // Unset means the suite's own default.
    std::optional<int> trials;
    std::uint64_t seed = 7;
    int depth = 6;
    int level = 8;
    Precision prec;
};

struct SuiteResult {
    explicit SuiteResult(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    std::vector<std::string> epsilons;
    int trials = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> counterexamples;
    std::vector<std::string> notes;

    bool passed() const noexcept
    {
        return failures == 0 && checks > 0;
    }

    // Counterexample text is built only on failure.
    void check(bool ok, const std::function<std::string()> &describe)
    {
        ++checks;
        if (!ok) {
            fail(describe());
        }
    }
    void fail(std::string what)
    {
        ++failures;
        if (counterexamples.size() < 20) {
            counterexamples.push_back(std::move(what));
        }
    }
};

namespace detail
{

inline std::string vstr(const std::optional<Exponent> &v)
{
    return v ? v->str() : "inf";
}

// Runs one trial; library errors become failures so nothing is silently skipped.
template <class F>
void guarded(SuiteResult &r, const std::string &where, F &&body)
{
    try {
        body();
    } catch (const Error &e) {
        r.fail(where + ": " + e.what());
    }
}

inline PuiseuxNumber random_series(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> quarter(-8, 8);
    std::uniform_int_distribution<long> num(1, 12);
    std::uniform_int_distribution<long> den(1, 6);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<PuiseuxNumber::Term> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        Rational q(num(rng) * (coin(rng) == 0 ? 1 : -1), den(rng));
        q.canonicalize();
        terms.push_back({Exponent(quarter(rng), 4), Real(q)});
    }
    PuiseuxNumber s(std::move(terms));
    return s.is_exact_zero() ? PuiseuxNumber(1) : s;
}

} // namespace detail

inline SuiteResult suite_valuation_axioms(const SuiteOptions &opt)
{
    SuiteResult r{"valuation-axioms"};
    r.trials = opt.trials.value_or(1000);
    for (int i = 0; i < r.trials; ++i) {
        auto rng = trial_rng(opt.seed, static_cast<std::uint64_t>(i));
        const PuiseuxNumber a = detail::random_series(rng);
        const PuiseuxNumber b = detail::random_series(rng);
        const PuiseuxNumber c = detail::random_series(rng);
        const std::string pair = "a = " + a.str() + ", b = " + b.str();
        detail::guarded(r, pair, [&] {
            const Exponent va = a.val();
            const Exponent vb = b.val();
            r.check((a * b).val() == va + vb, [&] { return "v(ab) != v(a) + v(b) for " + pair; });
            const PuiseuxNumber s = a + b;
            const auto vs = s.valuation();
            const Exponent m = std::min(va, vb);
            r.check(!vs || *vs >= m, [&] { return "ultrametric inequality fails for " + pair; });
            if (va != vb || a.sign() == b.sign()) {
                r.check(vs && *vs == m, [&] { return "ultrametric equality fails for " + pair; });
            }
            r.check(compare(a, b) == compare(a + c, b + c),
                    [&] { return "order not translation invariant for " + pair + ", c = " + c.str(); });

            const PuiseuxNumber ia = a.inverse(opt.prec);
            r.check(ia.val() == -va && (a * ia).agrees(PuiseuxNumber(1)),
                    [&] { return "a * invert(a) != 1 below horizon for a = " + a.str(); });

            const PuiseuxNumber pa = a.sign() > 0 ? a : -a;
            const PuiseuxNumber root = pa.sqrt(opt.prec);
            r.check(root.sign() == 1 && root.val() * Exponent(2) == pa.val() && (root * root).agrees(pa),
                    [&] { return "sqrt oracle fails for " + pa.str(); });

            const PuiseuxNumber fa = a.val().sign() < 0 ? a.shifted(-va) : a;
            const PuiseuxNumber fb = b.val().sign() < 0 ? b.shifted(-vb) : b;
            r.check(
                (fa + fb).standard_part() == fa.standard_part() + fb.standard_part()
                    && (fa * fb).standard_part() == fa.standard_part() * fb.standard_part(),
                [&] { return "standard part is not a ring map on " + fa.str() + ", " + fb.str(); });
        });
    }
    return r;
}

inline SuiteResult suite_group_law(const SuiteOptions &opt)
{
    SuiteResult r{"group-law"};
    r.trials = opt.trials.value_or(200);
    std::vector<std::string> eps = opt.epsilon ? std::vector<std::string>{*opt.epsilon}
                                               : std::vector<std::string>{"1/2", "1-t", "t"};
    std::vector<MinimalCurve> curves;
    for (const auto &e : eps) {
        curves.emplace_back(parse_series(e), opt.prec);
    }
    r.epsilons = eps;
    for (int i = 0; i < r.trials; ++i) {
        const MinimalCurve &c = curves[static_cast<std::size_t>(i) % curves.size()];
        auto rng = trial_rng(opt.seed, static_cast<std::uint64_t>(i));
        PointSampler sampler(c, rng);
        const auto vals = PointSampler::boundary_valuations(c);
        const CurvePoint p = sampler.point(vals);
        const CurvePoint q = sampler.point(vals);
        const CurvePoint s = sampler.point(vals);
        const std::string triple = "eps = " + c.epsilon().str() + ", P = " + p.str() + ", Q = " + q.str()
                                   + ", R = " + s.str();
        detail::guarded(r, triple, [&] {
            const CurvePoint po = add_points(c, p, CurvePoint());
            const CurvePoint op = add_points(c, CurvePoint(), p);
            r.check(!po.is_infinity() && po.x().identical(p.x()) && po.y().identical(p.y()) && !op.is_infinity()
                        && op.x().identical(p.x()) && op.y().identical(p.y()),
                    [&] { return "P + O != P for " + triple; });
            r.check(add_points(c, p, negate(p)).is_infinity(), [&] { return "P - P != O for " + triple; });
            const CurvePoint pq = add_points(c, p, q);
            r.check(on_curve(c, pq), [&] { return "P + Q is off the curve for " + triple; });
            const CurvePoint left = add_points(c, pq, s);
            const CurvePoint right = add_points(c, p, add_points(c, q, s));
            r.check(points_agree(left, right), [&] { return "associativity fails for " + triple; });
        });
    }
    return r;
}

inline SuiteResult suite_reduction_hom(const SuiteOptions &opt)
{
    SuiteResult r{"reduction-hom"};
    r.trials = opt.trials.value_or(100);
    const std::string eps = opt.epsilon.value_or("1/2+t");
    r.epsilons = {eps};
    const MinimalCurve c(parse_series(eps), opt.prec);
    const auto vals = PointSampler::boundary_valuations(c);
    std::size_t skipped = 0;
    for (int i = 0; i < r.trials; ++i) {
        auto rng = trial_rng(opt.seed, static_cast<std::uint64_t>(i));
        PointSampler sampler(c, rng);
        const CurvePoint p = sampler.point(vals);
        const CurvePoint q = sampler.point(vals);
        const std::string pair = "P = " + p.str() + ", Q = " + q.str();
        detail::guarded(r, pair, [&] {
            if (!e0_membership(c, p) || !e0_membership(c, q)) {
                ++skipped;
                return;
            }
            const CurvePoint s = add_points(c, p, q);
            if (!e0_membership(c, s)) {
                ++skipped;
                return;
            }
            const ReducedPoint lhs = reduce_point(c, s);
            const ReducedPoint rhs = reduced_add(c, reduce_point(c, p), reduce_point(c, q));
            r.check(lhs == rhs && reduced_on_curve(reduced_epsilon(c), lhs), [&] {
                return "reduce(P + Q) = " + lhs.str() + " but reduce(P) + reduce(Q) = " + rhs.str() + " for " + pair;
            });
            r.check(reduce_point(c, p).is_infinity() == e1_membership(c, p),
                    [&] { return "kernel of reduction is not E1 at " + p.str(); });
        });
    }
    if (skipped > 0) {
        r.notes.push_back(std::to_string(skipped) + " pairs outside E0 skipped");
    }
    return r;
}

inline SuiteResult suite_torsion_chain(const SuiteOptions &opt)
{
    SuiteResult r{"torsion-chain"};
    const std::string eps = opt.epsilon.value_or("t");
    r.epsilons = {eps};
    const MinimalCurve c(parse_series(eps), opt.prec);
    detail::guarded(r, "eps = " + eps, [&] {
        const auto chain = bounding_torsion_chain(c, opt.depth);
        const Exponent ve = c.epsilon().val();
        std::string vals;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const CurvePoint &t = chain[k];
            const int n = static_cast<int>(k) + 2;  // t = T_{2^n}
            const Exponent v = t.x().val();
            vals += (k == 0 ? "" : ", ") + v.str();
            r.check(on_curve(c, t) && t.y().sign() > 0, [&] { return "T_" + std::to_string(1 << n) + " is off the curve"; });
            CurvePoint d = t;
            for (int j = 1; j < n; ++j) {
                d = double_point(c, d);
            }
            const bool is_t2 = !d.is_infinity() && d.x().agrees(PuiseuxNumber()) && d.y().agrees(PuiseuxNumber());
            r.check(is_t2 && double_point(c, CurvePoint(PuiseuxNumber(), PuiseuxNumber())).is_infinity(),
                    [&] { return "[2^" + std::to_string(n - 1) + "]T_" + std::to_string(1 << n) + " != T2"; });
            if (ve.sign() > 0) {
                r.check(v == ve / Exponent(std::int64_t{1} << (n - 1)), [&] {
                    return "v(x_T" + std::to_string(1 << n) + ") = " + v.str() + ", expected v(eps)/2^" + std::to_string(n - 1);
                });
            } else {
                r.check(v.sign() == 0, [&] { return "v(x_T" + std::to_string(1 << n) + ") = " + v.str() + ", expected 0"; });
                if (n >= 3) {
                    const PuiseuxNumber bound = c.epsilon().scaled(Real(Rational(1, 1L << (2 * (n - 3)))));
                    r.check(compare(t.x(), bound) > 0 && compare(t.x(), chain[k - 1].x().scaled(Real(4))) > 0,
                            [&] { return "growth bound fails at T_" + std::to_string(1 << n); });
                }
            }
        }
        r.notes.push_back("valuations [" + vals + "]");
    });
    return r;
}

inline SuiteResult suite_fstar(const SuiteOptions &opt)
{
    SuiteResult r{"fstar"};
    r.trials = opt.trials.value_or(50);
    const std::string eps = opt.epsilon.value_or("t^2");
    r.epsilons = {eps};
    const MinimalCurve c(parse_series(eps), opt.prec);
    const auto ctx = TruncationContext::full(c);
    if (ctx.case_label() != CaseLabel::FullSplit) {
        r.fail("f* needs split reduction, eps = " + eps);
        return r;
    }
    const MultTruncation h = fstar_target(ctx);
    const Exponent ve = c.epsilon().val();
    const auto vals = PointSampler::boundary_valuations(c);
    for (int n = 1; n <= opt.level; ++n) {
        // Valuations of D below v(eps)/(2n), so P - Q = -D is in the level-2n set.
        const std::vector<Exponent> dvals{Exponent(-1), Exponent(-1, 2), Exponent(0),
                                          ve * Exponent(3, 8 * static_cast<std::int64_t>(n))};
        for (int i = 0; i < r.trials; ++i) {
            auto rng = trial_rng(opt.seed + static_cast<std::uint64_t>(n) * 1000003U, static_cast<std::uint64_t>(i));
            PointSampler sampler(c, rng);
            const CurvePoint p = sampler.point(vals);
            const CurvePoint d = sampler.point(dvals);
            const std::string pair = "n = " + std::to_string(n) + ", P = " + p.str() + ", D = " + d.str();
            detail::guarded(r, pair, [&] {
                const CurvePoint q = add_points(c, p, d);
                r.check(g00_member(ctx, subtract_points(c, p, q), 2 * n),
                        [&] { return "P - Q outside the level-2n set for " + pair; });
                const PuiseuxNumber ratio = mult_truncated_mul(h, f_star(ctx, p), mult_truncated_inverse(h, f_star(ctx, q)));
                const Exponent vr = ratio.val().abs();
                r.check(vr * Exponent(n) <= ve, [&] {
                    return "|v(f*(P)/f*(Q))| = " + vr.str() + " exceeds v(eps)/" + std::to_string(n) + " for " + pair;
                });
            });
        }
    }
    return r;
}

inline SuiteResult suite_difference_valuation(const SuiteOptions &opt)
{
    SuiteResult r{"remminus"};
    r.trials = opt.trials.value_or(100);
    const std::string eps = opt.epsilon.value_or("t^2");
    r.epsilons = {eps};
    const MinimalCurve c(parse_series(eps), opt.prec);
    const auto ctx = TruncationContext::full(c);
    const Exponent ve = c.epsilon().val();
    if (ve.sign() <= 0) {
        r.fail("the valuation difference law is stated for split reduction, eps = " + eps);
        return r;
    }
    // Points outside G^00 and the T2 class on one branch: 0 < v(x) < v(eps).
    std::vector<Exponent> vals;
    for (int k = 1; k < 8; ++k) {
        vals.push_back(ve * Exponent(k, 8));
    }
    for (int i = 0; i < r.trials; ++i) {
        auto rng = trial_rng(opt.seed, static_cast<std::uint64_t>(i));
        PointSampler sampler(c, rng);
        const Branch b = sampler.branch();
        const Exponent vp = sampler.pick(vals);
        Exponent vq = sampler.pick(vals);
        while (vq == vp) {
            vq = sampler.pick(vals);
        }
        const CurvePoint p = sampler.point(vp, b);
        const CurvePoint q = sampler.point(vq, b);
        const std::string pair = "P = " + p.str() + ", Q = " + q.str();
        detail::guarded(r, pair, [&] {
            r.check(to_string(quotient_coordinate(ctx, p)) != to_string(quotient_coordinate(ctx, q)),
                    [&] { return "P and Q share a class: " + pair; });
            const Exponent got = subtract_points(c, p, q).x().val();
            const Exponent want = vp + vq - Exponent(2) * std::min(vp, vq);
            r.check(got == want, [&] {
                return "v(x_(P-Q)) = " + got.str() + ", expected " + want.str() + " for " + pair;
            });
        });
    }
    return r;
}

inline SuiteResult suite_t2_class(const SuiteOptions &opt)
{
    SuiteResult r{"t2-class"};
    r.trials = opt.trials.value_or(50);
    const std::string eps = opt.epsilon.value_or("t");
    r.epsilons = {eps};
    const MinimalCurve c(parse_series(eps), opt.prec);
    const CurvePoint t2{PuiseuxNumber(), PuiseuxNumber()};
    const Exponent ve = c.epsilon().val();
    const auto vals = PointSampler::boundary_valuations(c);
    for (int i = 0; i < r.trials; ++i) {
        auto rng = trial_rng(opt.seed, static_cast<std::uint64_t>(i));
        PointSampler sampler(c, rng);
        const CurvePoint p = sampler.point(vals);
        detail::guarded(r, "P = " + p.str(), [&] {
            const Exponent got = subtract_points(c, p, t2).x().val();
            const Exponent want = ve - p.x().val();
            r.check(got == want, [&] {
                return "v(x_(P-T2)) = " + got.str() + ", expected " + want.str() + " for P = " + p.str();
            });
        });
    }
    return r;
}

struct Scenario {
    std::string epsilon;
    std::optional<std::string> trunc_x;
    ReductionType reduction;
    CaseLabel case_label;
    bool one_based;
    Internality internality;
};

inline std::vector<Scenario> classification_scenarios()
{
    using R = ReductionType;
    using C = CaseLabel;
    using I = Internality;
    return {
        {"t", std::nullopt, R::SplitMultiplicative, C::FullSplit, true, I::ValueGroup},
        {"1/2", std::nullopt, R::Good, C::FullGoodOrNonsplit, false, I::ResidueField},
        {"1-t", std::nullopt, R::NonsplitMultiplicative, C::FullGoodOrNonsplit, false, I::ResidueField},
        {"t", "t^(-1)", R::SplitMultiplicative, C::Trunc2_NegVal, false, I::ResidueField},
        {"t", "t^(1/4)", R::SplitMultiplicative, C::Trunc3_SplitPosVal, true, I::ValueGroup},
        {"t", "1/2", R::SplitMultiplicative, C::Trunc4_SplitZeroVal, false, I::ResidueField},
    };
}

inline TruncationContext make_context(const MinimalCurve &c, const std::optional<std::string> &trunc_x, Branch b = Branch::Plus)
{
    if (!trunc_x) {
        return TruncationContext::full(c);
    }
    return TruncationContext::truncated(c, lift_y(c, parse_series(*trunc_x), b));
}

inline SuiteResult suite_classification_table(const SuiteOptions &opt)
{
    SuiteResult r{"classification-table"};
    for (const auto &sc : classification_scenarios()) {
        const std::string name = "eps = " + sc.epsilon + (sc.trunc_x ? ", x_S = " + *sc.trunc_x : ", full");
        r.epsilons.push_back(sc.epsilon);
        detail::guarded(r, name, [&] {
            const MinimalCurve c(parse_series(sc.epsilon), opt.prec);
            const auto q = classify(make_context(c, sc.trunc_x));
            r.check(q.reduction_type == sc.reduction && q.case_label == sc.case_label && q.one_based == sc.one_based
                        && q.internality == sc.internality
                        && q.one_based == (q.internality == Internality::ValueGroup),
                    [&] {
                        return name + ": got " + to_string(q.reduction_type) + "/" + to_string(q.case_label) + "/"
                               + (q.one_based ? "1-based" : "non-1-based") + "/" + to_string(q.internality);
                    });
            r.notes.push_back(name + ": " + to_string(q.case_label));
        });
    }
    return r;
}

inline const std::vector<std::pair<std::string, std::function<SuiteResult(const SuiteOptions &)>>> &suite_registry()
{
    static const std::vector<std::pair<std::string, std::function<SuiteResult(const SuiteOptions &)>>> reg{
        {"valuation-axioms", suite_valuation_axioms},
        {"group-law", suite_group_law},
        {"reduction-hom", suite_reduction_hom},
        {"torsion-chain", suite_torsion_chain},
        {"fstar", suite_fstar},
        {"remminus", suite_difference_valuation},
        {"classification-table", suite_classification_table},
        {"t2-class", suite_t2_class},
    };
    return reg;
}

inline SuiteResult run_suite(const std::string &name, const SuiteOptions &opt)
{
    for (const auto &[n, f] : suite_registry()) {
        if (n == name) {
            return f(opt);
        }
    }
    throw Error(ErrorKind::UnknownSuite, "unknown suite '" + name + "'");
}

} // namespace ecrcf

#endif
