#include "polymerlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/errors.hpp"
#include "polymerlab/harness.hpp"
#include "polymerlab/montecarlo.hpp"
#include "polymerlab/numeric.hpp"
#include "polymerlab/ratefn.hpp"
#include "polymerlab/renewal.hpp"
#include "polymerlab/rng.hpp"
#include "polymerlab/selftest.hpp"

#ifndef POLYMERLAB_VERSION
#define POLYMERLAB_VERSION "0.1.0"
#endif

namespace polymerlab {

using nlohmann::json;

std::string version_stamp() { return POLYMERLAB_VERSION; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
    std::string command;
    std::string family = "simple";
    int L = 1;
    int n = 10;
    std::string beta = "0";
    double gamma = 0.0;
    double mu = 0.0;
    int strip_L = 0;
    std::string model;
    std::uint64_t samples = 10000;
    std::uint64_t tours = 500;
    std::uint32_t replicas = 16;
    std::uint64_t seed = 1;
    std::string config;
    std::string out;
    std::string format;
    int threads = 0;
    bool allow_invalid_schedule = false;
    double leaf_budget = kDefaultLeafBudget;

    // mc
    std::string sampler = "perm";
    double c_low = 0.2;
    double c_high = 5.0;
    bool no_prune = false;
    bool no_enrich = false;

    // rate
    std::string kind = "finite";
    std::string thetas;
    std::string b_grid;
    double mu_min = -3.0;
    double mu_max = 3.0;
    double mu_step = 0.05;
    std::string sign = "ge";

    // renewal
    int T = 2;
    int pieces = 4;
    double eta = 0.1;
    std::string window_center;
    double window_half_width = 0.0;
    std::string delta = "inf";

    // sweep
    std::string experiment;
    std::string betas;
    std::string Ls;
    std::string ns;
    double exponent = 0.75;
    std::string schedule = "beta";
    double gamma_exponent = 7.0 / 6.0;
    double n_coefficient = 200.0;
    double ess_threshold = 100.0;
};

double parse_real(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + " from '" + s + "'");
    }
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const double v = parse_real(item, what);
        if constexpr (std::is_integral_v<T>) {
            if (v != std::floor(v)) throw ConfigError(std::string(what) + " must be integers");
        }
        out.push_back(static_cast<T>(v));
    }
    return out;
}

json config_json(const Options& o) {
    return {{"command", o.command},
            {"family", o.family},
            {"L", o.L},
            {"n", o.n},
            {"beta", o.beta},
            {"gamma", o.gamma},
            {"mu", o.mu},
            {"strip_L", o.strip_L},
            {"model", o.model},
            {"samples", o.samples},
            {"tours", o.tours},
            {"replicas", o.replicas},
            {"seed", o.seed},
            {"format", o.format},
            {"allow_invalid_schedule", o.allow_invalid_schedule},
            {"leaf_budget", o.leaf_budget},
            {"sampler", o.sampler},
            {"c_low", o.c_low},
            {"c_high", o.c_high},
            {"no_prune", o.no_prune},
            {"no_enrich", o.no_enrich},
            {"kind", o.kind},
            {"thetas", o.thetas},
            {"b_grid", o.b_grid},
            {"mu_min", o.mu_min},
            {"mu_max", o.mu_max},
            {"mu_step", o.mu_step},
            {"sign", o.sign},
            {"T", o.T},
            {"pieces", o.pieces},
            {"eta", o.eta},
            {"window_center", o.window_center},
            {"window_half_width", o.window_half_width},
            {"delta", o.delta},
            {"experiment", o.experiment},
            {"betas", o.betas},
            {"Ls", o.Ls},
            {"ns", o.ns},
            {"exponent", o.exponent},
            {"schedule", o.schedule},
            {"gamma_exponent", o.gamma_exponent},
            {"n_coefficient", o.n_coefficient},
            {"ess_threshold", o.ess_threshold}};
}

json envelope(const Options& o) {
    return {{"version", version_stamp()}, {"seed", o.seed}, {"config", config_json(o)}};
}

std::string csv_preamble(const Options& o) {
    return "# version: " + version_stamp() + "\n# seed: " + std::to_string(o.seed) +
           "\n# config: " + config_json(o).dump() + "\n";
}

StepDistribution dist_from(const Options& o) { return make_distribution(family_from_string(o.family), o.L); }

ModelSpec model_from(const Options& o) {
    const double beta = parse_real(o.beta, "beta");
    ModelSpec m;
    if (!o.model.empty()) {
        switch (model_kind_from_string(o.model)) {
            case ModelKind::domb_joyce: m = ModelSpec::domb_joyce(beta); break;
            case ModelKind::saw: m = ModelSpec::saw(); break;
            case ModelKind::attraction: m = ModelSpec::attraction(beta, o.gamma); break;
            case ModelKind::strip: m = ModelSpec::strip(o.strip_L); break;
        }
    } else if (o.strip_L > 0) {
        m = ModelSpec::strip(o.strip_L);
    } else if (std::isinf(beta) && beta > 0) {
        m = ModelSpec::saw();
    } else if (o.gamma != 0.0) {
        m = ModelSpec::attraction(beta, o.gamma);
    } else {
        m = ModelSpec::domb_joyce(beta);
    }
    m.validate();
    return m;
}

PermParams perm_from(const Options& o) {
    PermParams p;
    p.c_low = o.c_low;
    p.c_high = o.c_high;
    p.pruning = !o.no_prune;
    p.enrichment = !o.no_enrich;
    return p;
}

/// Writes to --out when given, else to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw ConfigError("cannot open output file '" + o.out + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

json pmf_json(const std::map<long, double>& m) {
    json j = json::object();
    for (auto [x, p] : m) j[std::to_string(x)] = p;
    return j;
}

json jnum(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

int cmd_enumerate(const Options& o, std::ostream& out) {
    const auto d = dist_from(o);
    const auto m = model_from(o);
    const auto r = enumerate_measure(d, o.n, m, o.leaf_budget);
    json j = envelope(o);
    j["params"] = {{"distribution", d.describe()}, {"sigma", d.sigma()}, {"model", m.describe()}, {"n", o.n}};
    j["Z"] = r.Z;
    j["logZ"] = jnum(r.logZ);
    j["mean_abs_endpoint"] = r.Z > 0 ? json(r.mean_abs_endpoint()) : json(nullptr);
    j["endpoint_pmf"] = pmf_json(r.endpoint_pmf);
    emit(o, out, j.dump(2));
    return kExitOk;
}

json estimate_json(const Estimate& e) { return {{"value", jnum(e.value)}, {"stderr", jnum(e.stderr_)}}; }

int cmd_mc(const Options& o, std::ostream& out) {
    const auto d = dist_from(o);
    const auto m = model_from(o);
    std::vector<WeightedEnsemble> ens;
    if (o.sampler == "perm")
        ens = sample_perm(d, o.n, m, o.tours, o.replicas, o.seed, perm_from(o));
    else if (o.sampler == "importance")
        ens = sample_importance(d, o.n, m, o.samples, o.replicas, o.seed);
    else
        throw ConfigError("sampler must be perm or importance");
    const auto est = estimate_clt(ens, o.n);
    json j = envelope(o);
    j["params"] = {{"distribution", d.describe()}, {"sigma", d.sigma()}, {"model", m.describe()}, {"n", o.n}};
    j["theta_hat"] = estimate_json(est.theta);
    j["r_hat"] = estimate_json(est.r);
    j["sigma_star_hat"] = estimate_json(est.sigma_star);
    j["mean_abs_endpoint"] = estimate_json(est.mean_abs);
    j["mean_endpoint"] = estimate_json(est.mean);
    j["logZ"] = estimate_json(est.log_Z);
    j["Z"] = estimate_json(est.Z);
    j["ess"] = est.ess;
    j["samples"] = est.samples;
    j["warnings"] = est.warnings;
    auto reps = json::array();
    for (const auto& e : ens)
        reps.push_back({{"replica_id", e.replica_id},
                        {"seed", e.seed},
                        {"draws", e.draws},
                        {"samples", e.samples.size()},
                        {"zero_weight_draws", e.zero_weight_draws},
                        {"chains_grown", e.chains_grown},
                        {"ess", e.effective_sample_size()},
                        {"logZ", jnum(e.log_Z())}});
    j["replicas"] = reps;
    emit(o, out, j.dump(2));
    return kExitOk;
}

std::vector<double> default_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (int k = 0;; ++k) {
        const double v = lo + k * step;
        if (v > hi + 1e-12) break;
        g.push_back(v);
    }
    return g;
}

int cmd_rate(const Options& o, std::ostream& out) {
    const auto d = dist_from(o);
    const double beta = parse_real(o.beta, "beta");
    const std::string fmt = o.format.empty() ? "csv" : o.format;
    std::vector<double> thetas = o.thetas.empty() ? default_grid(0.0, d.max_step(), d.max_step() / 20.0)
                                                  : parse_list<double>(o.thetas, "thetas");
    RateCurve curve;
    if (o.kind == "finite") {
        const auto m = model_from(o);
        const auto measure = enumerate_measure(d, o.n, m, o.leaf_budget);
        for (Side side : {Side::ge, Side::le}) {
            for (double t : thetas) {
                RatePoint p;
                p.x = t;
                p.side = side;
                p.n = o.n;
                p.beta = m.beta;
                p.gamma = m.gamma;
                p.L = o.L;
                p.value = finite_rate(measure, t, side);
                p.infinite = std::isinf(p.value);
                curve.points.push_back(p);
            }
        }
    } else if (o.kind == "legendre") {
        SignRestriction sign = SignRestriction::nonnegative;
        if (o.sign == "none") sign = SignRestriction::none;
        else if (o.sign == "le") sign = SignRestriction::nonpositive;
        else if (o.sign != "ge") throw ConfigError("sign must be ge, le or none");
        const auto mus = default_grid(o.mu_min, o.mu_max, o.mu_step);
        const auto grid = finite_lambda_grid(d, o.n, beta, mus, sign, o.leaf_budget);
        curve = legendre(grid, thetas);
        for (auto& p : curve.points) {
            p.n = o.n;
            p.beta = beta;
            p.L = o.L;
        }
    } else if (o.kind == "scaled") {
        const auto bs = o.b_grid.empty() ? default_grid(0.2, 3.0, 0.2) : parse_list<double>(o.b_grid, "b grid");
        curve = scaled_rate_curve(d, o.n, beta, bs, o.leaf_budget);
        for (auto& p : curve.points) p.L = o.L;
    } else {
        throw ConfigError("rate kind must be finite, legendre or scaled");
    }
    std::ostringstream os;
    if (fmt == "csv") {
        os << csv_preamble(o);
        for (const auto& w : curve.warnings) os << "# warning: " << w << '\n';
        os << "b_or_theta,value,side,n,beta,gamma,L,scaled\n";
        os.precision(12);
        for (const auto& p : curve.points)
            os << p.x << ',' << (p.infinite ? std::string("inf") : jnum(p.value).dump()) << ','
               << to_string(p.side) << ',' << p.n << ',' << p.beta << ',' << p.gamma << ',' << p.L << ','
               << (curve.scaled ? 1 : 0) << '\n';
    } else {
        json j = envelope(o);
        auto pts = json::array();
        for (const auto& p : curve.points)
            pts.push_back({{"b_or_theta", p.x},
                           {"value", p.infinite ? json("inf") : jnum(p.value)},
                           {"side", to_string(p.side)},
                           {"n", p.n},
                           {"beta", p.beta},
                           {"gamma", p.gamma},
                           {"L", p.L},
                           {"scaled", curve.scaled}});
        j["points"] = pts;
        j["warnings"] = curve.warnings;
        os << j.dump(2);
    }
    emit(o, out, os.str());
    return kExitOk;
}

int cmd_lemma_bn(const Options& o, std::ostream& out) {
    const auto d = dist_from(o);
    const auto series = bn_series(d, o.n);
    const std::string fmt = o.format.empty() ? "csv" : o.format;
    std::ostringstream os;
    os.precision(15);
    if (fmt == "csv") {
        os << csv_preamble(o) << "n,B_n,expected_G,B_n_over_n\n";
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double n = static_cast<double>(k + 1);
            os << k + 1 << ',' << series[k] << ',' << 2.0 * (n + 1) + series[k] << ',' << series[k] / n << '\n';
        }
    } else {
        json j = envelope(o);
        j["B"] = series;
        j["expected_G"] = 2.0 * (o.n + 1) + series.back();
        os << j.dump(2);
    }
    emit(o, out, os.str());
    return kExitOk;
}

int cmd_renewal(const Options& o, std::ostream& out) {
    const double beta = parse_real(o.beta, "beta");
    PieceModel pm{dist_from(o), o.T};
    if (!o.model.empty() && o.model != "saw" && o.model != "domb_joyce")
        throw ConfigError("renewal pieces use the saw or domb_joyce model");
    const bool saw = o.model == "saw" || std::isinf(beta);
    pm.mode = saw ? PieceMode::saw : PieceMode::domb_joyce;
    pm.beta = saw ? 0.0 : beta;
    pm.mu = o.mu;
    if (!o.window_center.empty()) {
        pm.window_center = parse_real(o.window_center, "window center");
        pm.window_half_width = o.window_half_width;
    }
    pm.delta = parse_real(o.delta, "delta");
    const auto s = compute_sequences(pm, o.pieces, o.leaf_budget);
    json j = envelope(o);
    j["c"] = s.c;
    j["pi"] = s.pi;
    j["eps"] = jnum(s.eps);
    j["residuals"] = renewal_residuals(s);
    auto rows = json::array();
    for (const auto& r : verify_pi_bound(s))
        rows.push_back({{"m", r.m}, {"pi", r.pi}, {"bound", r.bound}, {"violated", r.violated}});
    j["pi_bound"] = rows;
    try {
        const auto c = contraction_iteration(s, o.eta);
        j["z"] = c.z;
        j["A"] = c.A;
        j["dA"] = c.dA;
        j["decay_rate"] = c.decay_rate;
        j["tail_bound"] = jnum(c.tail_bound);
        j["lower_bound_holds"] = c.lower_bound_holds;
        j["hypothesis_holds"] = true;
    } catch (const HypothesisError& e) {
        j["z"] = nullptr;
        j["A"] = nullptr;
        j["hypothesis_holds"] = false;
        j["hypothesis_failure"] = e.what();
    }
    emit(o, out, j.dump(2));
    return kExitOk;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
    return path.substr(0, dot) + ext;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    SweepOptions so;
    so.replicas = o.replicas;
    so.tours = o.tours;
    so.seed = o.seed;
    so.perm = perm_from(o);
    so.n_coefficient = o.n_coefficient;
    so.ess_threshold = o.ess_threshold;
    so.allow_invalid_schedule = o.allow_invalid_schedule;
    const auto exp = experiment_from_string(o.experiment);
    SweepReport rep;
    switch (exp) {
        case Experiment::beta: {
            const auto betas = parse_list<double>(o.betas.empty() ? "0.4,0.2,0.1,0.05,0.025" : o.betas, "betas");
            rep = sweep_beta(dist_from(o), betas, so);
            break;
        }
        case Experiment::sigma: {
            const auto Ls = parse_list<int>(o.Ls.empty() ? "2,4,8,16" : o.Ls, "Ls");
            const auto fam = o.family == "simple" ? Family::uniform_range : family_from_string(o.family);
            rep = sweep_sigma(fam, Ls, so);
            break;
        }
        case Experiment::coupled: {
            const auto ns = parse_list<int>(o.ns.empty() ? "250,500,1000,2000" : o.ns, "ns");
            Schedule sch;
            if (o.schedule == "beta") sch = Schedule::beta;
            else if (o.schedule == "strip") sch = Schedule::strip;
            else throw ConfigError("schedule must be beta or strip");
            rep = sweep_coupled(dist_from(o), sch, o.exponent, ns, so);
            break;
        }
        case Experiment::attraction: {
            const auto bs = parse_list<double>(o.betas.empty() ? "0.4,0.2,0.1,0.05" : o.betas, "betas");
            rep = sweep_attraction(dist_from(o), bs, o.gamma_exponent, so);
            break;
        }
        case Experiment::strip: {
            const auto Ls = parse_list<int>(o.Ls.empty() ? "1,2,4,8" : o.Ls, "Ls");
            rep = sweep_strip(dist_from(o), Ls, so);
            break;
        }
        case Experiment::flory: {
            const auto ns = parse_list<int>(o.ns.empty() ? "100,200,400,800" : o.ns, "ns");
            rep = sweep_flory(ns, so);
            break;
        }
    }
    std::ostringstream csv;
    csv << csv_preamble(o);
    write_csv(csv, rep);
    json j = envelope(o);
    j["report"] = json::parse(report_json(rep));
    if (o.format == "json") {
        emit(o, out, j.dump(2));
        return kExitOk;
    }
    emit(o, out, csv.str());
    if (!o.out.empty()) {
        std::ofstream f(replace_extension(o.out, ".json"));
        if (!f) throw ConfigError("cannot write the companion JSON report");
        f << j.dump(2) << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_selftest(std::ostream& out) {
    bool all = true;
    for (const auto& c : run_selftest()) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        all = all && c.pass;
    }
    out << "version " << version_stamp() << '\n';
    return all ? kExitOk : kExitInvariant;
}

/// Config-file entries become flags placed before the command-line ones, so explicit flags win.
std::vector<std::string> config_args(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    std::vector<std::string> args;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = it.key();
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "command" || key == "experiment" || key == "config") continue;
        const auto& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back("--" + key);
            continue;
        }
        std::string val;
        if (v.is_array()) {
            for (const auto& x : v) val += (val.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
        } else if (v.is_string()) {
            val = v.get<std::string>();
        } else {
            val = v.dump();
        }
        args.push_back("--" + key);
        args.push_back(val);
    }
    return args;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--family", o.family, "step family: simple, uniform_range, geometric_tail");
    app->add_option("--L", o.L, "family range parameter");
    app->add_option("--n", o.n, "number of steps");
    app->add_option("--beta", o.beta, "repulsion strength (inf for SAW)");
    app->add_option("--gamma", o.gamma, "attraction strength");
    app->add_option("--mu", o.mu, "tilt");
    app->add_option("--strip-L", o.strip_L, "strip half-width");
    app->add_option("--model", o.model, "domb_joyce, saw, attraction or strip");
    app->add_option("--samples", o.samples, "importance samples per replica");
    app->add_option("--tours", o.tours, "PERM tours per replica");
    app->add_option("--replicas", o.replicas, "independent replicas");
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--config", o.config, "JSON config file");
    app->add_option("--out", o.out, "output path");
    app->add_option("--format", o.format, "json or csv");
    app->add_option("--threads", o.threads, "worker threads (POLYMERLAB_THREADS overrides)");
    app->add_flag("--allow-invalid-schedule", o.allow_invalid_schedule, "accept schedules outside the hypotheses");
    app->add_option("--leaf-budget", o.leaf_budget, "enumeration leaf budget");
}

int dispatch(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"polymerlab: one-dimensional self-repellent polymer toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* en = app.add_subcommand("enumerate", "exact weighted endpoint law");
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
    auto* rate = app.add_subcommand("rate", "finite-n rate functions");
    auto* bn = app.add_subcommand("lemma-bn", "B_n and E(G_n) by convolution");
    auto* ren = app.add_subcommand("renewal", "renewal sequences and contraction");
    auto* sw = app.add_subcommand("sweep", "scaling sweeps");
    auto* st = app.add_subcommand("selftest", "exact-identity checks");
    for (auto* s : {en, mc, rate, bn, ren, sw, st}) {
        s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        add_common(s, o);
    }
    for (auto* s : {mc, sw}) {
        s->add_option("--c-low", o.c_low, "PERM prune threshold");
        s->add_option("--c-high", o.c_high, "PERM enrich threshold");
        s->add_flag("--no-prune", o.no_prune, "disable pruning");
        s->add_flag("--no-enrich", o.no_enrich, "disable enrichment");
    }
    mc->add_option("--sampler", o.sampler, "perm or importance");
    rate->add_option("--kind", o.kind, "finite, legendre or scaled");
    rate->add_option("--thetas", o.thetas, "comma-separated drift grid");
    rate->add_option("--b-grid", o.b_grid, "comma-separated scaled drift grid");
    rate->add_option("--mu-min", o.mu_min, "tilt grid start");
    rate->add_option("--mu-max", o.mu_max, "tilt grid end");
    rate->add_option("--mu-step", o.mu_step, "tilt grid spacing");
    rate->add_option("--sign", o.sign, "ge, le or none");
    ren->add_option("--T", o.T, "steps per piece");
    ren->add_option("--pieces", o.pieces, "number of pieces N");
    ren->add_option("--eta", o.eta, "contraction parameter");
    ren->add_option("--window-center", o.window_center, "piece endpoint window center");
    ren->add_option("--window-half-width", o.window_half_width, "piece endpoint window half-width");
    ren->add_option("--delta", o.delta, "confinement (inf disables)");
    sw->add_option("experiment", o.experiment, "beta, sigma, coupled, attraction, strip or flory")->required();
    sw->add_option("--betas", o.betas, "comma-separated couplings");
    sw->add_option("--Ls", o.Ls, "comma-separated L values");
    sw->add_option("--ns", o.ns, "comma-separated lengths");
    sw->add_option("--exponent", o.exponent, "schedule exponent");
    sw->add_option("--schedule", o.schedule, "beta or strip");
    sw->add_option("--gamma-exponent", o.gamma_exponent, "gamma = (beta - gamma)^e");
    sw->add_option("--n-coefficient", o.n_coefficient, "n rule coefficient");
    sw->add_option("--ess-threshold", o.ess_threshold, "minimum ESS for fitted rows");

    // Splice config-file flags in right after the subcommand (and sweep experiment).
    std::vector<std::string> args = raw;
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
        if (raw[i] == "--config") {
            const auto extra = config_args(raw[i + 1]);
            std::size_t at = args.empty() ? 0 : 1;
            if (!args.empty() && args[0] == "sweep" && args.size() > 1 && args[1].rfind("--", 0) != 0) at = 2;
            args.insert(args.begin() + static_cast<long>(at), extra.begin(), extra.end());
            break;
        }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    const char* env = std::getenv("POLYMERLAB_THREADS");
    if ((env == nullptr || *env == '\0') && o.threads > 0) set_worker_count(static_cast<std::size_t>(o.threads));

    if (en->parsed()) o.command = "enumerate";
    else if (mc->parsed()) o.command = "mc";
    else if (rate->parsed()) o.command = "rate";
    else if (bn->parsed()) o.command = "lemma-bn";
    else if (ren->parsed()) o.command = "renewal";
    else if (sw->parsed()) o.command = "sweep";
    else o.command = "selftest";

    if (o.command == "enumerate") return cmd_enumerate(o, out);
    if (o.command == "mc") return cmd_mc(o, out);
    if (o.command == "rate") return cmd_rate(o, out);
    if (o.command == "lemma-bn") return cmd_lemma_bn(o, out);
    if (o.command == "renewal") return cmd_renewal(o, out);
    if (o.command == "sweep") return cmd_sweep(o, out);
    return cmd_selftest(out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace polymerlab
