#ifndef ECRCF_REPORT_HPP
#define ECRCF_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <ecrcf/curve.hpp>
#include <ecrcf/quotient.hpp>
#include <ecrcf/suites.hpp>

namespace ecrcf
{

// Exact rationals go out as "p/q" strings.
inline nlohmann::json exponent_json(const Exponent &e)
{
    return e.str();
}

inline nlohmann::json classification_json(const TruncationContext &ctx, const QuotientClassification &q,
                                          const std::vector<CurvePoint> &chain)
{
    nlohmann::json j;
    j["epsilon"] = ctx.curve().epsilon().str();
    j["reduction_type"] = to_string(q.reduction_type);
    j["scope"] = to_string(q.scope);
    if (ctx.scope() == Scope::TruncatedBy) {
        j["truncation_point"] = ctx.truncation_point().str();
    }
    j["case_label"] = to_string(q.case_label);
    j["one_based"] = q.one_based;
    j["internality"] = to_string(q.internality);
    j["witness"] = to_string(q.witness);
    if (q.fstar_clamp) {
        j["fstar_clamp"] = *q.fstar_clamp;
    }
    nlohmann::json vals = nlohmann::json::array();
    for (const auto &p : chain) {
        vals.push_back(exponent_json(p.x().val()));
    }
    j["torsion_valuations"] = std::move(vals);
    return j;
}

inline nlohmann::json suite_json(const SuiteResult &r, const SuiteOptions &opt)
{
    return {
        {"suite", r.name},
        {"epsilons", r.epsilons},
        {"seed", opt.seed},
        {"trials", r.trials},
        {"checks", r.checks},
        {"failures", r.failures},
        {"pass", r.passed()},
        {"counterexamples", r.counterexamples},
        {"notes", r.notes},
    };
}

inline nlohmann::json error_json(const Error &e)
{
    nlohmann::json j{{"error", to_string(e.kind())}, {"message", e.what()}};
    if (const auto *pe = dynamic_cast<const ParseError *>(&e)) {
        j["offset"] = pe->offset();
        j["expected"] = pe->expected();
    }
    return j;
}

} // namespace ecrcf

#endif
