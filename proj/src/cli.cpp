#include "hhq/cli.hpp"

#include "hhq/errors.hpp"
#include "hhq/funcspec.hpp"
#include "hhq/maps.hpp"
#include "hhq/oracle.hpp"
#include "hhq/ostrowski.hpp"
#include "hhq/quadrature.hpp"
#include "hhq/refine.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

namespace hhq::cli {

using nlohmann::json;

namespace {

const char* command_name(Command c) {
    switch (c) {
    case Command::integrate: return "integrate";
    case Command::verify:    return "verify";
    case Command::sharpness: return "sharpness";
    case Command::maps:      return "maps";
    case Command::oracle:    return "oracle";
    }
    return "?";
}

// 17 significant digits: CSV consumers can reparse values exactly.
std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct VerifyRow {
    std::size_t trial;
    std::string theorem;
    std::size_t n;
    std::optional<double> y;
    double lhs;
    double rhs;
    double slack;
    bool holds;
};

json row_to_json(const VerifyRow& r) {
    json j;
    j["trial"] = r.trial;
    j["theorem"] = r.theorem;
    j["n"] = r.n;
    if (r.y)
        j["y"] = *r.y;
    else
        j["y"] = nullptr;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["holds"] = r.holds;
    return j;
}

std::string rows_to_csv(const std::vector<VerifyRow>& rows) {
    std::string out = "trial,theorem,n,y,lhs,rhs,slack,holds\n";
    for (const VerifyRow& r : rows) {
        out += std::to_string(r.trial);
        out += ',';
        out += r.theorem;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        if (r.y) out += csv_num(*r.y);
        out += ',';
        out += csv_num(r.lhs);
        out += ',';
        out += csv_num(r.rhs);
        out += ',';
        out += csv_num(r.slack);
        out += ',';
        out += r.holds ? "true" : "false";
        out += '\n';
    }
    return out;
}

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

// Random generated functions carry hinge kinks whose midpoint-rule error
// scales with (len/panels)^2; the suites integrate them at 2^18 panels so
// the oracle's uncertainty contract holds with margin.
constexpr OracleConfig kSuiteOracle{std::size_t{1} << 18};

Interval draw_interval(std::mt19937_64& rng) {
    double a = uniform(rng, -5.0, 5.0);
    double len = uniform(rng, 0.2, 5.0);
    return Interval(a, a + len);
}

FunctionSpec draw_function(std::mt19937_64& rng, Interval iv, ShapeTarget target) {
    ConvexGeneratorConfig cfg;
    cfg.seed = rng();
    cfg.shape_target = target;
    return generate_convex(cfg, iv);
}

void hh_suite(std::uint64_t seed, std::size_t trials, std::vector<VerifyRow>& rows) {
    std::mt19937_64 master(seed);
    const std::size_t ns[] = {1, 2, 3, 4, 8, 16, 64};
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Interval iv = draw_interval(master);
        FunctionSpec f = draw_function(master, iv, ShapeTarget::convex);
        FunctionSpec g = f.negated();
        double integral = reference_integral(f, iv, kSuiteOracle).value;
        double tol = verdict_tol(integral);

        double prev_width = std::numeric_limits<double>::infinity();
        for (std::size_t n : ns) {
            UniformPartition p(iv, n);
            double mid = midpoint_sum(f, p);
            double trap = trapezoid_sum(f, p);
            rows.push_back({trial, "hh_lower", n, {}, mid, integral,
                            integral - mid, integral - mid >= -tol});
            rows.push_back({trial, "hh_upper", n, {}, integral, trap,
                            trap - integral, trap - integral >= -tol});

            // concave reversal is exact negation symmetry
            Enclosure ef = hh_enclosure(f, p);
            Enclosure eg = hh_enclosure(g, p);
            double rev_diff = std::max(std::fabs(eg.lower + ef.upper),
                                       std::fabs(eg.upper + ef.lower));
            rows.push_back({trial, "hh_reversal_exact", n, {}, rev_diff, 0.0,
                            -rev_diff, rev_diff == 0.0});
        }

        // width shrinks under doubling (nested partitions only)
        for (std::size_t n = 1; n <= 64; n *= 2) {
            double width = hh_enclosure(f, UniformPartition(iv, n)).width();
            rows.push_back({trial, "hh_width_halving", n, {}, width,
                            prev_width, prev_width + 1e-12 - width,
                            width <= prev_width + 1e-12});
            prev_width = width;
        }

        Enclosure e1 = hh_enclosure(f, UniformPartition(iv, 1));
        Enclosure c1 = classical_hh(f, iv);
        double d1 = std::max(std::fabs(e1.lower - c1.lower),
                             std::fabs(e1.upper - c1.upper));
        rows.push_back({trial, "n1_reduction_exact", 1, {}, d1, 0.0, -d1, d1 == 0.0});

        for (int n = 2; n <= 4; ++n) {
            Enclosure hh = hh_enclosure(f, UniformPartition(iv, static_cast<std::size_t>(n)));
            Enclosure cf = corollary_closed_form(f, iv, n);
            double dl = std::fabs(hh.lower - cf.lower);
            double du = std::fabs(hh.upper - cf.upper);
            double budget = 1e-12 * (1.0 + std::max(std::fabs(hh.lower),
                                                    std::fabs(hh.upper)));
            double worst = std::max(dl, du);
            rows.push_back({trial, "corollary_agreement",
                            static_cast<std::size_t>(n), {}, worst, budget,
                            budget - worst, worst <= budget});
        }

        UniformPartition p8(iv, 8);
        double trap8 = trapezoid_sum(f, p8);
        double bf8 = composite_trapezoid_bf(f, iv, 8).value;
        double dt = std::fabs(trap8 - bf8);
        double budget = 1e-15 * (1.0 + std::fabs(trap8));
        rows.push_back({trial, "composite_trapezoid_agreement", 8, {}, dt, budget,
                        budget - dt, dt <= budget});
    }
}

void ostrowski_suite(std::uint64_t seed, std::size_t trials, bool weighted_unscaled,
                     std::vector<VerifyRow>& rows) {
    std::mt19937_64 master(seed);
    const std::size_t ns[] = {1, 2, 4, 8};
    constexpr std::size_t kYPoints = 33;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Interval iv = draw_interval(master);
        FunctionSpec f = draw_function(master, iv, ShapeTarget::positive_convex);
        FunctionSpec g =
            draw_function(master, iv, ShapeTarget::increasing_positive_convex);
        double fi = reference_integral(f, iv, kSuiteOracle).value;
        double gi = reference_integral(g, iv, kSuiteOracle).value;

        for (std::size_t n : ns) {
            UniformPartition p(iv, n);
            double global_mid = (iv.a + iv.b) / 2;
            for (std::size_t k = 0; k < kYPoints; ++k) {
                double frac = static_cast<double>(k) / (kYPoints - 1);
                double y = k + 1 == kYPoints ? iv.b : iv.a + iv.length() * frac;
                BoundReport t2 = thm2_bound(f, p, y, fi);
                rows.push_back({trial, t2.theorem_id, n, y, t2.lhs, t2.rhs,
                                t2.slack, t2.holds});
                BoundReport t3 = thm3_bound(f, p, y, fi);
                rows.push_back({trial, t3.theorem_id, n, y, t3.lhs, t3.rhs,
                                t3.slack, t3.holds});
                // the chain is provable only up to the interval midpoint,
                // where its sharpness case sits with equality
                double y5 = iv.a + (global_mid - iv.a) * frac;
                BoundReport t5 = thm5_bound(g, p, y5, gi);
                rows.push_back({trial, t5.theorem_id, n, y5, t5.lhs, t5.rhs,
                                t5.slack, t5.holds});
            }
            BoundReport t4 = thm4_bound(f, p, fi);
            rows.push_back({trial, t4.theorem_id, n, {}, t4.lhs, t4.rhs,
                            t4.slack, t4.holds});

            // weighted corollary points; the displayed (scaled) form can
            // leave [a,b], in which case the instance is skipped
            std::vector<double> alphas(n + 1);
            double total = 0.0;
            for (double& a : alphas) {
                a = u01(master);
                total += a;
            }
            for (double& a : alphas) a /= total;
            double yw = weighted_point(p, alphas, weighted_unscaled);
            if (yw >= iv.a && yw <= iv.b) {
                BoundReport t3w = thm3_bound(f, p, yw, fi);
                rows.push_back({trial, "thm3_weighted", n, yw, t3w.lhs, t3w.rhs,
                                t3w.slack, t3w.holds});
                if (yw <= (iv.a + iv.b) / 2) {
                    BoundReport t5w = thm5_bound(g, p, yw, gi);
                    rows.push_back({trial, "thm5_weighted", n, yw, t5w.lhs,
                                    t5w.rhs, t5w.slack, t5w.holds});
                }
            }
        }

        // thm1-level comparability of the two bounds only holds termwise at n=1
        UniformPartition p1(iv, 1);
        double ymid = uniform(master, iv.a, iv.b);
        BoundReport a2 = thm2_bound(f, p1, ymid, fi);
        BoundReport a3 = thm3_bound(f, p1, ymid, fi);
        rows.push_back({trial, "thm3_rhs_dominates_thm2_n1", 1, ymid, a2.rhs,
                        a3.rhs, a3.rhs - a2.rhs,
                        a3.rhs >= a2.rhs - verdict_tol(a3.rhs)});
    }
}

void maps_suite(std::uint64_t seed, std::size_t trials, bool f_map_halved,
                std::vector<VerifyRow>& rows) {
    std::mt19937_64 master(seed);
    const std::size_t ns[] = {1, 2, 4};
    MapConfig mc;
    mc.inner_panels = 4096; // suite profile; tolerance widened to match
    mc.f_halved = f_map_halved;
    const double tol = 1e-6;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Interval iv = draw_interval(master);
        FunctionSpec f = draw_function(master, iv, ShapeTarget::convex);
        double integral = reference_integral(f, iv, kSuiteOracle).value;
        for (std::size_t n : ns) {
            UniformPartition p(iv, n);
            auto checks = verify_map_properties(f, p, 21, tol, integral, mc);
            for (const MapPropertyCheck& c : checks)
                rows.push_back({trial, c.property, n, {}, c.observed,
                                c.reference, c.slack, c.holds});
        }
    }
}

json inputs_json(const CommandRequest& req) {
    json in;
    in["seed"] = req.seed;
    in["output"] = req.output == OutputFormat::json ? "json" : "csv";
    switch (req.command) {
    case Command::integrate:
        in["function"] = req.function_text;
        in["a"] = req.a;
        in["b"] = req.b;
        in["n"] = req.n ? json(*req.n) : json(nullptr);
        in["tol"] = req.tol ? json(*req.tol) : json(nullptr);
        in["n_max"] = req.n_max ? json(*req.n_max) : json(nullptr);
        in["shape"] = shape_name(req.shape);
        break;
    case Command::verify:
        in["suite"] = suite_name(req.suite.value_or(Suite::all));
        in["trials"] = req.trials;
        in["f_map_halved"] = req.f_map_halved;
        in["weighted_unscaled"] = req.weighted_unscaled;
        break;
    case Command::sharpness:
        in["a"] = req.a;
        in["b"] = req.b;
        in["n"] = req.n ? json(*req.n) : json(8);
        break;
    case Command::maps:
        in["function"] = req.function_text;
        in["a"] = req.a;
        in["b"] = req.b;
        in["n"] = req.n ? json(*req.n) : json(1);
        in["t_steps"] = req.t_steps;
        in["panels"] = req.panels;
        in["f_map_halved"] = req.f_map_halved;
        break;
    case Command::oracle:
        in["function"] = req.function_text;
        in["a"] = req.a;
        in["b"] = req.b;
        in["panels"] = req.panels;
        break;
    }
    return in;
}

RunOutcome render(const CommandRequest& req, json results, json verdicts,
                  int exit_code, std::string csv_body) {
    if (req.output == OutputFormat::csv)
        return {exit_code, std::move(csv_body)};
    json report;
    report["command"] = command_name(req.command);
    report["inputs"] = inputs_json(req);
    report["results"] = std::move(results);
    report["verdicts"] = std::move(verdicts);
    report["version"] = kVersion;
    return {exit_code, report.dump(2) + "\n"};
}

ShapeFlags resolve_shape(const FunctionSpec& unflagged, Interval iv,
                         ShapeRequest req) {
    ShapeFlags flags;
    switch (req) {
    case ShapeRequest::convex:
        flags.convex = true;
        return flags;
    case ShapeRequest::concave:
        flags.concave = true;
        return flags;
    case ShapeRequest::automatic: {
        ShapeReport rep = check_shape(unflagged, iv, 513, 1e-9);
        flags.convex = rep.convex.pass;
        flags.concave = rep.concave.pass;
        if (!flags.convex && !flags.concave)
            throw ShapeError(
                "shape auto-detection: function is neither convex nor concave "
                "on the interval at tolerance 1e-9");
        return flags;
    }
    }
    return flags;
}

const char* orientation_name(Orientation o) {
    return o == Orientation::convex ? "convex" : "concave";
}

RunOutcome run_integrate(const CommandRequest& req) {
    if (req.n.has_value() == req.tol.has_value())
        throw std::invalid_argument("integrate: provide exactly one of n / tol");
    Interval iv(req.a, req.b);
    ExprPtr tree = parse_expression(req.function_text);
    FunctionSpec probe(tree, {}, req.function_text);
    ShapeFlags flags = resolve_shape(probe, iv, req.shape);
    FunctionSpec f(tree, flags, req.function_text);

    ConvergenceTrace trace;
    Enclosure enc{0, 0, 0, Orientation::convex};
    if (req.n) {
        enc = hh_enclosure(f, UniformPartition(iv, *req.n));
        trace.rows.push_back({enc.n_used, enc.lower, enc.upper, enc.width()});
        trace.status = RefineStatus::converged;
    } else {
        RefinementPolicy policy;
        policy.abs_tol = *req.tol;
        if (req.n_max) policy.n_max = *req.n_max;
        auto [e, tr] = integrate_to_tolerance(f, iv, policy);
        enc = e;
        trace = std::move(tr);
    }

    json results;
    results["enclosure"] = {{"lower", enc.lower},
                            {"upper", enc.upper},
                            {"width", enc.width()},
                            {"n_used", enc.n_used},
                            {"orientation", orientation_name(enc.orientation)}};
    json rows = json::array();
    std::string csv = "n,lower,upper,width\n";
    for (const TraceRow& r : trace.rows) {
        rows.push_back({{"n", r.n},
                        {"lower", r.lower},
                        {"upper", r.upper},
                        {"width", r.width}});
        csv += std::to_string(r.n) + ',' + csv_num(r.lower) + ',' +
               csv_num(r.upper) + ',' + csv_num(r.width) + '\n';
    }
    results["trace"] = std::move(rows);
    results["status"] = trace.status == RefineStatus::converged
                            ? "converged"
                            : "n_max_reached";
    json verdicts;
    verdicts["converged"] = trace.status == RefineStatus::converged;
    return render(req, std::move(results), std::move(verdicts), 0, std::move(csv));
}

RunOutcome run_verify(const CommandRequest& req) {
    Suite suite = req.suite.value_or(Suite::all);
    std::vector<VerifyRow> rows;
    // each suite draws from its own decoupled stream
    if (suite == Suite::hh || suite == Suite::all)
        hh_suite(req.seed, req.trials, rows);
    if (suite == Suite::ostrowski || suite == Suite::all)
        ostrowski_suite(req.seed + 0x9e3779b97f4a7c15ULL, req.trials,
                        req.weighted_unscaled, rows);
    if (suite == Suite::maps || suite == Suite::all)
        maps_suite(req.seed + 2 * 0x9e3779b97f4a7c15ULL, req.trials,
                   req.f_map_halved, rows);

    std::size_t falsified = 0;
    for (const VerifyRow& r : rows)
        if (!r.holds) ++falsified;

    json results;
    json jrows = json::array();
    for (const VerifyRow& r : rows) jrows.push_back(row_to_json(r));
    results["rows"] = std::move(jrows);

    json verdicts;
    verdicts["checks"] = rows.size();
    verdicts["falsifications"] = falsified;
    verdicts["all_hold"] = falsified == 0;

    int exit_code = falsified == 0 ? 0 : 1;
    return render(req, std::move(results), std::move(verdicts), exit_code,
                  rows_to_csv(rows));
}

RunOutcome run_sharpness(const CommandRequest& req) {
    Interval iv(req.a, req.b);
    std::size_t n = req.n.value_or(8);
    const char* ids[] = {"thm1_left", "thm1_right", "thm2", "thm5"};

    json results = json::array();
    std::string csv = "theorem,fixture,measured,expected,pass\n";
    bool all_match = true;
    for (const char* id : ids) {
        SharpnessResult r = sharpness_probe(id, iv, n);
        bool pass = std::fabs(r.measured_constant - r.paper_constant) <= 1e-12;
        all_match = all_match && pass;
        results.push_back({{"theorem", r.theorem_id},
                           {"fixture", r.fixture},
                           {"measured", r.measured_constant},
                           {"expected", r.paper_constant},
                           {"pass", pass}});
        csv += r.theorem_id + ',' + r.fixture + ',' +
               csv_num(r.measured_constant) + ',' + csv_num(r.paper_constant) +
               ',' + (pass ? "true" : "false") + '\n';
    }
    json verdicts;
    verdicts["all_match"] = all_match;
    return render(req, json{{"constants", std::move(results)}},
                  std::move(verdicts), all_match ? 0 : 1, std::move(csv));
}

RunOutcome run_maps(const CommandRequest& req) {
    Interval iv(req.a, req.b);
    ExprPtr tree = parse_expression(req.function_text);
    FunctionSpec f(tree, {.convex = req.shape == ShapeRequest::convex,
                          .concave = req.shape == ShapeRequest::concave},
                   req.function_text);
    UniformPartition p(iv, req.n.value_or(1));
    MapConfig mc;
    mc.inner_panels = req.panels;
    mc.f_halved = req.f_map_halved;

    MapTable tab = map_table(f, p, req.t_steps + 1, mc);

    json table = json::array();
    std::string csv = "t,H,F\n";
    for (std::size_t i = 0; i < tab.t.size(); ++i) {
        table.push_back({{"t", tab.t[i]}, {"H", tab.H[i]}, {"F", tab.F[i]}});
        csv += csv_num(tab.t[i]) + ',' + csv_num(tab.H[i]) + ',' +
               csv_num(tab.F[i]) + '\n';
    }

    // endpoint identities against the oracle integral, informational;
    // the oracle keeps its own default resolution regardless of --panels
    double integral = reference_integral(f, iv).value;
    json identities = json::array();
    std::vector<double> mids(p.n);
    for (std::size_t k = 1; k <= p.n; ++k) mids[k - 1] = p.midpoint(k);
    double mid_sum = 0.0;
    for (double m : mids) mid_sum += f(m);
    double bracket = trapezoid_sum(f, p) / p.h;
    auto identity = [&](const char* name, double got, double want) {
        identities.push_back({{"name", name},
                              {"value", got},
                              {"target", want},
                              {"abs_error", std::fabs(got - want)}});
    };
    identity("H(0) = sum f(midpoints)", tab.H.front(), mid_sum);
    identity("H(1) = integral / h", tab.H.back(), integral / p.h);
    identity("F(1) = (f(a) + 2 sum f(x_k) + f(b)) / 2", tab.F.back(), bracket);
    identity("F(0) = integral / h", tab.F.front(), integral / p.h);

    json results;
    results["table"] = std::move(table);
    results["identities"] = std::move(identities);
    return render(req, std::move(results), json::object(), 0, std::move(csv));
}

RunOutcome run_oracle(const CommandRequest& req) {
    Interval iv(req.a, req.b);
    FunctionSpec f(parse_expression(req.function_text), {}, req.function_text);
    OracleResult r = reference_integral(f, iv, {req.panels});
    json results;
    results["value"] = r.value;
    results["uncertainty"] = r.uncertainty;
    std::string csv = "value,uncertainty\n" + csv_num(r.value) + ',' +
                      csv_num(r.uncertainty) + '\n';
    return render(req, std::move(results), json::object(), 0, std::move(csv));
}

} // namespace

const char* suite_name(Suite s) noexcept {
    switch (s) {
    case Suite::hh:        return "hh";
    case Suite::ostrowski: return "ostrowski";
    case Suite::maps:      return "maps";
    case Suite::all:       return "all";
    }
    return "?";
}

const char* shape_name(ShapeRequest s) noexcept {
    switch (s) {
    case ShapeRequest::convex:    return "convex";
    case ShapeRequest::concave:   return "concave";
    case ShapeRequest::automatic: return "auto";
    }
    return "?";
}

std::uint64_t seed_from_env_or_default() {
    const char* env = std::getenv("HH_SEED");
    if (!env || !*env) return kDefaultSeed;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        throw std::invalid_argument("HH_SEED: not an unsigned integer");
    return static_cast<std::uint64_t>(v);
}

RunOutcome run(const CommandRequest& request) {
    switch (request.command) {
    case Command::integrate: return run_integrate(request);
    case Command::verify:    return run_verify(request);
    case Command::sharpness: return run_sharpness(request);
    case Command::maps:      return run_maps(request);
    case Command::oracle:    return run_oracle(request);
    }
    throw std::invalid_argument("run: unknown command");
}

} // namespace hhq::cli
