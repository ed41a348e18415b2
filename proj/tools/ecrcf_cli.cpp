// Command-line front end: classify curves, run property suites, inspect points.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ecrcf/ecrcf.hpp>
#include <ecrcf/report.hpp>

namespace
{

using namespace ecrcf;

// ECRCF_WINDOW sets the default precision window, e.g. "16" or "33/2".
Precision default_precision()
{
    Precision prec;
    if (const char *w = std::getenv("ECRCF_WINDOW")) {
        const PuiseuxNumber e = parse_series(w);
        if (!e.is_exact() || e.terms().size() != 1 || e.terms().front().exponent.sign() != 0
            || !e.terms().front().coefficient.is_rational() || e.sign() <= 0) {
            throw Error(ErrorKind::InvalidArgument, std::string("ECRCF_WINDOW must be a positive rational, got '") + w + "'");
        }
        const Rational q = e.terms().front().coefficient.rational();
        if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
            throw Error(ErrorKind::InvalidArgument, "ECRCF_WINDOW out of range");
        }
        prec.window = Exponent(q.get_num().get_si(), q.get_den().get_si());
    }
    return prec;
}

Branch parse_branch(const std::string &s)
{
    if (s == "+" || s == "plus") {
        return Branch::Plus;
    }
    if (s == "-" || s == "minus") {
        return Branch::Minus;
    }
    throw Error(ErrorKind::InvalidArgument, "branch must be '+' or '-', got '" + s + "'");
}

struct Common {
    std::string epsilon;
    std::optional<std::string> trunc_x;
    std::string branch = "+";
    std::optional<int> depth;
    int level = 8;
    std::optional<int> trials;
    std::uint64_t seed = 7;
    bool json = false;
};

TruncationContext context_for(const Common &o, const MinimalCurve &c)
{
    if (!o.trunc_x) {
        return TruncationContext::full(c);
    }
    return TruncationContext::truncated(c, lift_y(c, parse_series(*o.trunc_x), parse_branch(o.branch)));
}

int cmd_classify(const Common &o)
{
    const MinimalCurve c(parse_series(o.epsilon), default_precision());
    const TruncationContext ctx = context_for(o, c);
    const QuotientClassification q = classify(ctx);
    const auto chain = bounding_torsion_chain(c, o.depth.value_or(5));
    const nlohmann::json j = classification_json(ctx, q, chain);
    if (o.json) {
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    for (const auto &[k, v] : j.items()) {
        std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return 0;
}

int cmd_verify(const Common &o, const std::string &suite)
{
    SuiteOptions opt;
    if (!o.epsilon.empty()) {
        opt.epsilon = o.epsilon;
    }
    opt.trials = o.trials;
    opt.seed = o.seed;
    opt.depth = o.depth.value_or(opt.depth);
    opt.level = o.level;
    opt.prec = default_precision();
    const SuiteResult r = run_suite(suite, opt);
    if (o.json) {
        std::cout << suite_json(r, opt).dump(2) << '\n';
    } else {
        std::cout << r.name << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.checks << " checks, " << r.failures
                  << " failures, seed " << opt.seed << ")\n";
        for (const auto &n : r.notes) {
            std::cout << "  " << n << '\n';
        }
        for (const auto &ce : r.counterexamples) {
            std::cout << "  counterexample: " << ce << '\n';
        }
    }
    return r.passed() ? 0 : 1;
}

int cmd_torsion(const Common &o)
{
    const MinimalCurve c(parse_series(o.epsilon), default_precision());
    const auto chain = bounding_torsion_chain(c, o.depth.value_or(5));
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const std::string name = "T" + std::to_string(std::int64_t{1} << (k + 2));
        j.push_back({{"point", name}, {"x", chain[k].x().str()}, {"y", chain[k].y().str()},
                     {"valuation", chain[k].x().val().str()}});
        if (!o.json) {
            std::cout << name << "  v(x) = " << chain[k].x().val().str() << "  x = " << chain[k].x().str() << '\n';
        }
    }
    if (o.json) {
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_reduce(const Common &o, const std::string &point)
{
    const MinimalCurve c(parse_series(o.epsilon), default_precision());
    const CurvePoint p = resolve_point(c, parse_point(point));
    const ReducedPoint r = reduce_point(c, p);
    if (o.json) {
        std::cout << nlohmann::json{{"reduction_type", to_string(reduction_type(c))},
                                    {"point", p.str()},
                                    {"reduced", r.str()},
                                    {"singular", r.is_singular()},
                                    {"in_E0", !r.is_singular()},
                                    {"in_E1", e1_membership(c, p)}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << r.str() << (r.is_singular() ? "  (node)" : "") << '\n';
    }
    return 0;
}

int cmd_add(const Common &o, const std::string &a, const std::string &b)
{
    const MinimalCurve c(parse_series(o.epsilon), default_precision());
    const CurvePoint p = resolve_point(c, parse_point(a));
    const CurvePoint q = resolve_point(c, parse_point(b));
    if (o.trunc_x) {
        const TruncationContext ctx = context_for(o, c);
        const CurvePoint s = truncated_add(ctx, p, q);
        if (o.json) {
            std::cout << nlohmann::json{{"sum", s.str()}, {"class", to_string(quotient_coordinate(ctx, s))}}.dump(2) << '\n';
        } else {
            std::cout << s.str() << "  class " << to_string(quotient_coordinate(ctx, s)) << '\n';
        }
        return 0;
    }
    const CurvePoint s = add_points(c, p, q);
    if (o.json) {
        std::cout << nlohmann::json{{"sum", s.str()}}.dump(2) << '\n';
    } else {
        std::cout << s.str() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact elliptic-curve computations over real Puiseux series"};
    app.require_subcommand(1);
    Common o;
    std::string suite;
    std::string point_a;
    std::string point_b;

    auto add_epsilon = [&o](CLI::App *sub, bool required) {
        auto *opt = sub->add_option("--epsilon", o.epsilon, "curve parameter, 0 < eps < 1");
        if (required) {
            opt->required();
        }
    };

    auto *classify_cmd = app.add_subcommand("classify", "classify the quotient by its infinitesimal subgroup");
    add_epsilon(classify_cmd, true);
    classify_cmd->add_option("--trunc-x", o.trunc_x, "x-coordinate of the truncation point S");
    classify_cmd->add_option("--branch", o.branch, "y-branch of S, + or -");
    classify_cmd->add_option("--depth", o.depth, "torsion chain depth")->check(CLI::Range(2, 12));
    classify_cmd->add_flag("--json", o.json, "print JSON");

    auto *verify_cmd = app.add_subcommand("verify", "run a seeded property suite");
    verify_cmd->add_option("suite", suite, "suite name")->required();
    add_epsilon(verify_cmd, false);
    verify_cmd->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", o.seed, "random seed");
    verify_cmd->add_option("--depth", o.depth, "torsion chain depth")->check(CLI::Range(2, 12));
    verify_cmd->add_option("--level", o.level, "highest f* level")->check(CLI::Range(1, 64));
    verify_cmd->add_flag("--json", o.json, "print JSON");

    auto *torsion_cmd = app.add_subcommand("torsion", "print the bounding 2-power torsion chain");
    add_epsilon(torsion_cmd, true);
    torsion_cmd->add_option("--depth", o.depth, "chain depth")->check(CLI::Range(2, 12));
    torsion_cmd->add_flag("--json", o.json, "print JSON");

    auto *reduce_cmd = app.add_subcommand("reduce", "reduce a point to the residue curve");
    add_epsilon(reduce_cmd, true);
    reduce_cmd->add_option("point", point_a, "point: O, (x, y) or (x, +/-)")->required();
    reduce_cmd->add_flag("--json", o.json, "print JSON");

    auto *add_cmd = app.add_subcommand("add", "add two points");
    add_epsilon(add_cmd, true);
    add_cmd->add_option("p", point_a, "first point")->required();
    add_cmd->add_option("q", point_b, "second point")->required();
    add_cmd->add_option("--trunc-x", o.trunc_x, "add in the truncation by S");
    add_cmd->add_option("--branch", o.branch, "y-branch of S, + or -");
    add_cmd->add_flag("--json", o.json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*classify_cmd) {
            return cmd_classify(o);
        }
        if (*verify_cmd) {
            return cmd_verify(o, suite);
        }
        if (*torsion_cmd) {
            return cmd_torsion(o);
        }
        if (*reduce_cmd) {
            return cmd_reduce(o, point_a);
        }
        if (*add_cmd) {
            return cmd_add(o, point_a, point_b);
        }
    } catch (const Error &e) {
        if (o.json) {
            std::cerr << error_json(e).dump(2) << '\n';
        } else {
            std::cerr << "error: " << e.what() << '\n';
            if (const auto *pe = dynamic_cast<const ParseError *>(&e)) {
                std::cerr << "  at offset " << pe->offset() << '\n';
            }
        }
        return 2;
    }
    return 0;
}
