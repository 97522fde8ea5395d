#include "silt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "silt/config.hpp"
#include "silt/errors.hpp"
#include "silt/function_io.hpp"
#include "silt/nondeterminism.hpp"
#include "silt/numerics.hpp"
#include "silt/regularization.hpp"
#include "silt/version.hpp"

namespace silt {

namespace {

using json = nlohmann::ordered_json;

struct Context {
    RunConfig cfg;
    Grid grid;
    ModelPtr model;
};

json config_json(const RunConfig& cfg)
{
    json j;
    j["model"] = cfg.model;
    j["T"] = cfg.length();
    j["n"] = cfg.n;
    j["min_gap"] = cfg.effective_min_gap();
    j["levels"] = cfg.levels;
    j["seed"] = cfg.seed;
    j["normalization"] = to_string(cfg.normalization);
    j["threads"] = cfg.threads ? json(*cfg.threads) : json(nullptr);
    return j;
}

json envelope(const std::string& command, const Context& ctx)
{
    json j;
    j["tool"] = "silt";
    j["version"] = version;
    j["command"] = command;
    j["config"] = config_json(ctx.cfg);
    j["grid"] = {{"T", ctx.grid.length()}, {"n", ctx.grid.size()}};
    j["convention"] = to_string(ctx.cfg.normalization);
    if (ctx.model && !ctx.model->warnings().empty()) {
        j["warnings"] = ctx.model->warnings();
    }
    return j;
}

json to_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(row);
    }
    return rows;
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& fallback)
    {
        if (!cfg.out.empty()) {
            file_.open(cfg.out);
            if (!file_) {
                throw ValidationError("cannot write output file '" + cfg.out + "'");
            }
        }
        stream_ = cfg.out.empty() ? &fallback : &file_;
    }

    void json_doc(const json& j) { *stream_ << j.dump(2) << '\n'; }

    void csv(const std::string& command, const Context& ctx, const std::string& key_name,
             const std::vector<double>& keys, const std::vector<double>& values, const json& extra = {})
    {
        json header = envelope(command, ctx);
        if (!extra.is_null()) {
            header["details"] = extra;
        }
        *stream_ << "# " << header.dump() << '\n';
        *stream_ << key_name << ",value\n" << std::setprecision(17);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            *stream_ << keys[i] << ',' << values[i] << '\n';
        }
    }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

Context make_context(const RunConfig& cfg)
{
    Context ctx{cfg, make_grid(cfg.length(), cfg.n), nullptr};
    ctx.model = make_model(cfg.model, ctx.grid);
    return ctx;
}

GridFunction function_for(const Context& ctx, const std::string& spec)
{
    return parse_function(spec, ctx.grid, ctx.model->aux_dim());
}

// An explicit --min-gap also guards user-supplied tuples.
TimeTuple tuple_for(const Context& ctx, const std::string& text)
{
    return TimeTuple(parse_real_list(text), ctx.cfg.min_gap.value_or(TimeTuple::default_min_gap));
}

struct Check {
    std::string name;
    std::function<bool()> body;
};

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

std::vector<Check> selftest_checks()
{
    return {
        {"grid midpoints", [] {
             const Grid g = make_grid(1.0, 4);
             return near(g.node(0), 0.125) && near(g.node(3), 0.875) && near(g.weight(), 0.25);
         }},
        {"grid rejects n < 2", [] {
             try {
                 make_grid(1.0, 1);
             } catch (const ValidationError&) {
                 return true;
             }
             return false;
         }},
        {"inner const1", [] {
             const Grid g = make_grid(1.0, 64);
             const auto one = parse_function("const1", g);
             return near(inner(one, one), 1.0);
         }},
        {"orthonormal aux", [] {
             const Grid g = make_grid(1.0, 8);
             const auto e = aux_direction(g, 1, 0);
             return near(inner(e, e), 1.0);
         }},
        {"indicator endpoints", [] {
             const Grid g = make_grid(1.0, 16);
             const auto zero = indicator(g, 0.0);
             const auto full = indicator(g, 1.0).cell_averages();
             return zero.norm_sq() == 0.0 &&
                    std::all_of(full.begin(), full.end(), [](double v) { return near(v, 1.0); });
         }},
        {"wiener covariance", [] {
             const auto m = wiener_model(make_grid(1.0, 32));
             return near(covariance(*m, 0.3, 0.7), 0.3) && near(covariance(*m, 0.2, 0.9), 0.2);
         }},
        {"counterexample norm", [] {
             const auto m = counterexample_model(make_grid(1.0, 32));
             return near(m->factor(0.5).norm_sq(), 1.0);
         }},
        {"k=2 gram is a squared norm", [] {
             const auto m = perturbed_model(make_grid(std::numbers::pi / 2, 64),
                                            sturm_liouville_operator(make_grid(std::numbers::pi / 2, 64)));
             const auto dec = decompose(*m, TimeTuple({0.2, 0.9}));
             return near(dec.gamma(), dec.increments()[0].norm_sq(), 1e-12);
         }},
        {"wiener gram is diagonal", [] {
             const auto m = wiener_model(make_grid(1.0, 32));
             const auto dec = decompose(*m, TimeTuple({0.2, 0.5, 0.9}));
             return dec.gram()(0, 1) == 0.0 && near(dec.gram()(0, 0), 0.3) && near(dec.gram()(1, 1), 0.4);
         }},
        {"orthogonal h projects to zero", [] {
             const Grid g = make_grid(1.0, 32);
             const auto m = wiener_model(g);
             const auto dec = decompose(*m, TimeTuple({0.5, 0.75}));
             return std::abs(projection_norm_sq(dec, indicator(g, 0.25))) < 1e-15;
         }},
        {"fw_limit zero shift", [] {
             const Grid g = make_grid(1.0, 32);
             TransformPoint p{wiener_model(g), TimeTuple({0.25, 0.75}), GridFunction(g), GridFunction(g)};
             return near(fw_limit(p), 2.0);
         }},
        {"fw_eps zero shift", [] {
             const Grid g = make_grid(1.0, 32);
             TransformPoint p{wiener_model(g), TimeTuple({0.25, 0.75}), GridFunction(g), GridFunction(g)};
             return near(fw_eps(p, 0.1), 1.0 / 0.6);
         }},
        {"regularized integrand vanishes at h = 0", [] {
             const Grid g = make_grid(1.0, 32);
             return regularized_integrand(*wiener_model(g), TimeTuple({0.1, 0.4, 0.8}), GridFunction(g),
                                          GridFunction(g)) == 0.0;
         }},
        {"inclusion-exclusion product identity", [] {
             const std::vector<double> a{0.1, 0.7, 0.35, 0.9};
             double prod = 1.0;
             for (double x : a) {
                 prod *= 1.0 - x;
             }
             return near(inclusion_exclusion_sum(a), prod, 1e-14);
         }},
        {"schur check at h = 0", [] {
             const auto r = schur_bound_check(GridFunction(make_grid(1.0, 32)), 0.0);
             return r.lhs == 0.0 && r.rhs == 0.0 && r.pass;
         }},
        {"wiener is strongly locally nondeterministic", [] {
             const auto m = wiener_model(make_grid(1.0, 32));
             return near(slnd_ratio(*m, TimeTuple({0.1, 0.3, 0.6, 0.9}), {1}), 1.0) &&
                    near(slnd_ratio(*m, TimeTuple({0.1, 0.3}), {}), 1.0);
         }},
        {"berman statistic of wiener", [] {
             const auto m = wiener_model(make_grid(1.0, 32));
             return near(berman_stat(*m, TimeTuple({0.2, 0.5, 0.6})), 1.0);
         }},
        {"conditional variance equals slnd ratio", [] {
             const Grid g = make_grid(std::numbers::pi / 2, 64);
             const auto m = perturbed_model(g, sturm_liouville_operator(g));
             const TimeTuple tt({0.1, 0.5, 0.9, 1.3});
             return near(conditional_variance_ratio(*m, tt, 1), slnd_ratio(*m, tt, {1}), 1e-12);
         }},
    };
}

int run_selftest(const Context& ctx, Emitter& emit)
{
    json j = envelope("selftest", ctx);
    json checks = json::array();
    int failed = 0;
    for (const auto& check : selftest_checks()) {
        bool ok = false;
        std::string error;
        try {
            ok = check.body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        failed += ok ? 0 : 1;
        json c = {{"name", check.name}, {"pass", ok}};
        if (!error.empty()) {
            c["error"] = error;
        }
        checks.push_back(c);
    }
    j["checks"] = checks;
    j["failed"] = failed;
    emit.json_doc(j);
    return failed == 0 ? exit_ok : exit_numerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"silt: regularized Fourier-Wiener transforms of planar self-intersection local time", "silt"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version);

    std::string config_path;
    std::string model;
    double T = 0.0;
    std::size_t n = 0;
    double min_gap = 0.0;
    int levels = 0;
    std::uint64_t seed = 0;
    std::string normalization;
    std::string out_path;
    unsigned threads = 0;
    app.add_option("--config", config_path, "INI config file ([grid] [model] [run])");
    auto* o_model = app.add_option("--model", model, "wiener | perturbed:sl | perturbed:file=<csv> | counterexample");
    auto* o_T = app.add_option("--T", T, "interval length");
    auto* o_n = app.add_option("--n", n, "number of grid cells");
    auto* o_gap = app.add_option("--min-gap", min_gap, "diagonal exclusion floor");
    auto* o_levels = app.add_option("--levels", levels, "quadrature refinement levels");
    auto* o_seed = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* o_norm = app.add_option("--normalization", normalization, "paper | analytic");
    auto* o_out = app.add_option("--out", out_path, "output file (default stdout)");
    auto* o_threads = app.add_option("--threads", threads, "worker cap");

    std::string times;
    std::string h = "";
    std::string h1 = "zero";
    std::string h2 = "zero";
    std::string subset;
    std::string scan;
    std::string deltas = "0.1,0.01,0.001,0.0001";
    double eps = 0.0;
    std::size_t mc = 0;
    std::size_t samples = 200000;
    std::size_t k = 2;
    double a = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    bool regularized = false;
    bool ladder = false;

    auto* gram = app.add_subcommand("gram", "Gram matrix, determinant and projections of increments");
    gram->add_option("--times", times, "t1,...,tk")->required();
    gram->add_option("--h", h, "function to project");

    auto* transform = app.add_subcommand("transform", "Fourier-Wiener transform at one time tuple");
    transform->add_option("--times", times, "t1,...,tk")->required();
    transform->add_option("--h1", h1, "first shift");
    transform->add_option("--h2", h2, "second shift");
    auto* o_eps = transform->add_option("--eps", eps, "mollifier width (omit for the eps -> 0 limit)");
    transform->add_option("--mc", mc, "Monte Carlo sample count");
    transform->add_flag("--ladder", ladder, "also report the default eps ladder");

    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate against the closed form (analytic convention)");
    mc_cmd->add_option("--times", times, "t1,...,tk")->required();
    mc_cmd->add_option("--h1", h1, "first shift");
    mc_cmd->add_option("--h2", h2, "second shift");
    mc_cmd->add_option("--eps", eps, "mollifier width")->required();
    mc_cmd->add_option("--samples", samples, "sample count");

    auto* regularize = app.add_subcommand("regularize", "integral of the regularized integrand over the simplex");
    regularize->add_option("--k", k, "multiplicity (2..4)");
    regularize->add_option("--h1", h1, "first shift");
    regularize->add_option("--h2", h2, "second shift");

    auto* diverge = app.add_subcommand("diverge", "truncated integrals over {gaps >= delta}");
    diverge->add_option("--k", k, "multiplicity");
    diverge->add_option("--h1", h1, "first shift");
    diverge->add_option("--h2", h2, "second shift");
    diverge->add_option("--deltas", deltas, "decreasing truncation levels");
    diverge->add_flag("--regularized", regularized, "integrate the regularized integrand instead");

    auto* schur = app.add_subcommand("schur", "Schur-test bound for the one-interval estimate");
    schur->add_option("--h", h, "nonnegative function")->required();
    schur->add_option("--a", a, "left endpoint");

    auto* slnd = app.add_subcommand("slnd", "strong local nondeterminism ratio");
    slnd->add_option("--times", times, "t1,...,tk")->required();
    slnd->add_option("--subset", subset, "1-based increment indices")->required();
    slnd->add_option("--scan", scan, "gap values to shrink the subset to");

    auto* berman = app.add_subcommand("berman", "Berman local nondeterminism statistic");
    berman->add_option("--times", times, "t1,...,tm")->required();
    berman->add_option("--scan", scan, "window lengths t_m - t_1");

    auto* pdecay = app.add_subcommand("pdecay", "projection of h on a single increment");
    pdecay->add_option("--t1", t1, "left time")->required();
    pdecay->add_option("--t2", t2, "right time");
    pdecay->add_option("--h", h, "function")->required();
    pdecay->add_option("--scan", scan, "gaps t2 - t1");

    auto* selftest = app.add_subcommand("selftest", "run built-in identity checks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "silt: " << e.what() << '\n';
        return exit_validation;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (o_model->count()) cfg.model = model;
        if (o_T->count()) cfg.T = T;
        if (o_n->count()) cfg.n = n;
        if (o_gap->count()) cfg.min_gap = min_gap;
        if (o_levels->count()) cfg.levels = levels;
        if (o_seed->count()) cfg.seed = seed;
        if (o_norm->count()) cfg.normalization = parse_normalization(normalization);
        if (o_out->count()) cfg.out = out_path;
        if (o_threads->count()) cfg.threads = threads;
        if (cfg.threads) {
            set_worker_count(*cfg.threads);
        }

        const Context ctx = make_context(cfg);
        Emitter emit(cfg, out);

        if (*selftest) {
            return run_selftest(ctx, emit);
        }

        if (*gram) {
            const TimeTuple tt = tuple_for(ctx, times);
            const GramDecomposition dec = decompose(*ctx.model, tt);
            json j = envelope("gram", ctx);
            j["times"] = tt.times();
            j["gamma"] = dec.gamma();
            j["gram"] = to_json(dec.gram());
            j["eigenvalues"] = to_json(dec.eigenvalues());
            j["condition_number"] = dec.condition_number();
            if (!h.empty()) {
                const GridFunction hf = function_for(ctx, h);
                const ProjectionPair p = projection_pair(dec, hf);
                j["h"] = h;
                j["projection_norm_sq"] = projection_norm_sq(dec, hf);
                j["quadratic_form"] = p.quadratic_form;
                j["ortho_sum"] = p.ortho_sum;
                j["ortho_coeffs"] = to_json(p.ortho_coeffs);
                j["h_norm_sq"] = hf.norm_sq();
            }
            emit.json_doc(j);
            return exit_ok;
        }

        if (*transform || *mc_cmd) {
            const TransformPoint point{ctx.model, tuple_for(ctx, times), function_for(ctx, h1), function_for(ctx, h2),
                                       ctx.cfg.normalization};
            json j = envelope(*transform ? "transform" : "mc", ctx);
            j["times"] = point.tt.times();
            j["h1"] = h1;
            j["h2"] = h2;
            if (*mc_cmd || mc > 0) {
                const std::size_t count = *mc_cmd ? samples : mc;
                const double e = (*mc_cmd || o_eps->count()) ? eps : 0.5;
                TransformPoint analytic = point;
                analytic.normalization = Normalization::analytic;
                const McEstimate est = mc_fw_estimate(analytic, e, count, ctx.cfg.seed);
                const double exact = fw_eps(analytic, e);
                j["convention"] = "analytic";
                j["eps"] = e;
                j["value"] = est.mean;
                j["stderr"] = est.std_error;
                j["samples"] = est.samples;
                j["seed"] = ctx.cfg.seed;
                j["closed_form"] = exact;
                j["z_score"] = est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0;
            } else if (o_eps->count()) {
                j["eps"] = eps;
                j["value"] = fw_eps(point, eps);
            } else {
                j["value"] = fw_limit(point);
            }
            if (ladder) {
                json rows = json::array();
                for (const double e : default_eps_ladder()) {
                    rows.push_back({{"eps", e}, {"value", fw_eps(point, e)}});
                }
                j["eps_ladder"] = rows;
                j["limit"] = fw_limit(point);
            }
            emit.json_doc(j);
            return exit_ok;
        }

        if (*regularize) {
            QuadratureSpec spec = QuadratureSpec::for_grid(k, ctx.grid);
            spec.levels = ctx.cfg.levels;
            spec.min_gap = ctx.cfg.effective_min_gap();
            const RegularizedValue r =
                regularized_integral(*ctx.model, function_for(ctx, h1), function_for(ctx, h2), spec);
            json j = envelope("regularize", ctx);
            j["k"] = k;
            j["h1"] = h1;
            j["h2"] = h2;
            j["value"] = r.value;
            j["level_estimates"] = r.level_estimates;
            j["refinement_ratios"] = r.refinement_ratios;
            j["converged"] = r.converged;
            j["tol"] = spec.tol;
            emit.json_doc(j);
            if (!r.converged) {
                err << "silt: regularized integral did not converge in " << spec.levels << " levels\n";
                return exit_numerical;
            }
            return exit_ok;
        }

        if (*diverge) {
            const auto ds = parse_real_list(deltas);
            const auto f1 = function_for(ctx, h1);
            const auto f2 = function_for(ctx, h2);
            const auto rows = regularized ? regularized_probe(*ctx.model, k, f1, f2, ds)
                                          : divergence_probe(*ctx.model, k, f1, f2, ds);
            std::vector<double> keys;
            std::vector<double> values;
            for (const auto& p : rows) {
                keys.push_back(p.delta);
                values.push_back(p.value);
            }
            emit.csv("diverge", ctx, "delta", keys, values,
                     {{"k", k}, {"h1", h1}, {"h2", h2}, {"integrand", regularized ? "regularized" : "limit"}});
            return exit_ok;
        }

        if (*schur) {
            const GridFunction hf = function_for(ctx, h);
            const SchurResult r = schur_bound_check(hf, a);
            const double kernel_norm = operator_norm(schur_kernel(ctx.grid.length() - a, ctx.grid.size()));
            json j = envelope("schur", ctx);
            j["h"] = h;
            j["a"] = a;
            j["lhs"] = r.lhs;
            j["rhs"] = r.rhs;
            j["pass"] = r.pass;
            j["kernel_norm"] = kernel_norm;
            j["kernel_norm_bound"] = 4.0;
            emit.json_doc(j);
            return exit_ok;
        }

        if (*slnd) {
            const TimeTuple tt = tuple_for(ctx, times);
            const auto m = parse_index_list(subset);
            std::vector<double> keys;
            std::vector<double> values;
            bool limit = false;
            if (scan.empty()) {
                double gap = 0.0;
                for (const auto i : m) {
                    gap = std::max(gap, tt[i + 1] - tt[i]);
                }
                keys.push_back(gap);
                values.push_back(slnd_ratio(*ctx.model, tt, m));
            } else {
                const ScanReport r = slnd_scan(*ctx.model, tt, m, parse_real_list(scan));
                keys = r.gaps;
                values = r.values;
                limit = r.limit_reached;
            }
            emit.csv("slnd", ctx, "gap", keys, values,
                     {{"times", tt.times()}, {"subset", subset}, {"limit_reached", limit}, {"tol", 0.05}});
            return exit_ok;
        }

        if (*berman) {
            const TimeTuple tt = tuple_for(ctx, times);
            std::vector<double> keys;
            std::vector<double> values;
            bool limit = false;
            if (scan.empty()) {
                keys.push_back(tt.times().back() - tt[0]);
                values.push_back(berman_stat(*ctx.model, tt));
            } else {
                const ScanReport r = berman_scan(*ctx.model, tt, parse_real_list(scan));
                keys = r.gaps;
                values = r.values;
                limit = r.limit_reached;
            }
            emit.csv("berman", ctx, "gap", keys, values,
                     {{"times", tt.times()},
                      {"limit_reached", limit},
                      {"tol", 0.05},
                      {"rule", "passes when stat >= 1 - tol at the smallest window"}});
            return exit_ok;
        }

        if (*pdecay) {
            const GridFunction hf = function_for(ctx, h);
            std::vector<double> keys;
            std::vector<double> values;
            if (scan.empty()) {
                keys.push_back(t2 - t1);
                values.push_back(projection_decay(*ctx.model, t1, t2, hf));
            } else {
                const ScanReport r = projection_decay_scan(*ctx.model, t1, hf, parse_real_list(scan));
                keys = r.gaps;
                values = r.values;
            }
            emit.csv("pdecay", ctx, "gap", keys, values, {{"t1", t1}, {"h", h}});
            return exit_ok;
        }
    } catch (const ValidationError& e) {
        err << "silt: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "silt: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_validation;
}

}  // namespace silt
