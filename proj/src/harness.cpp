#include "polymerlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/errors.hpp"
#include "polymerlab/numeric.hpp"
#include "polymerlab/ratefn.hpp"
#include "polymerlab/rng.hpp"

namespace polymerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAnchorLeafBudget = 2e7;

struct Point {
    StepDistribution dist;
    int n;
    ModelSpec model;
};

/// Runs every (point, replica) job through one pool and estimates each point.
std::vector<CltEstimate> run_points(const std::vector<Point>& points, const SweepOptions& opt,
                                    std::uint64_t stream_base) {
    if (opt.replicas < 2) throw ConfigError("sweeps need at least two replicas");
    const std::size_t R = opt.replicas;
    std::vector<WeightedEnsemble> ens(points.size() * R);
    parallel_for(ens.size(), [&](std::size_t job) {
        const std::size_t i = job / R;
        const auto r = static_cast<std::uint32_t>(job % R);
        const std::uint64_t point_seed = stream_seed(opt.seed, stream_base + i);
        ens[job] = sample_perm_replica(points[i].dist, points[i].n, points[i].model, opt.tours, point_seed, r, opt.perm);
    });
    std::vector<CltEstimate> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        out.push_back(estimate_clt(std::span<const WeightedEnsemble>(ens).subspan(i * R, R), points[i].n));
    return out;
}

constexpr std::uint64_t kPointStreams = 1ULL << 32;
constexpr std::uint64_t kAnchorStreams = 1ULL << 33;

/// Largest n <= 12 whose enumeration fits the anchor budget.
int anchor_n(const StepDistribution& dist) {
    int n = 12;
    while (n > 1 && enumeration_leaves(dist, n) > kAnchorLeafBudget) --n;
    return n;
}

AnchorCheck run_anchor(const StepDistribution& dist, int n, const ModelSpec& model, double param,
                       const SweepOptions& opt) {
    AnchorCheck a;
    a.n = n;
    a.param = param;
    const auto exact = enumerate_measure(dist, n, model, kAnchorLeafBudget);
    a.exact = exact.mean_abs_endpoint() / n;
    const auto est = run_points({Point{dist, n, model}}, opt, kAnchorStreams).front();
    a.mc = est.theta.value;
    a.mc_se = est.theta.stderr_;
    a.within_3se = std::abs(a.mc - a.exact) <= 3.0 * a.mc_se;
    return a;
}

void fill_row(SweepRow& row, const CltEstimate& est, double theta_scale, double r_scale) {
    row.est = est;
    row.scaled_theta = est.theta.value / theta_scale;
    row.scaled_theta_se = est.theta.stderr_ / theta_scale;
    row.scaled_r = est.r.value / r_scale;
    row.scaled_r_se = est.r.stderr_ / r_scale;
    row.warnings = est.warnings;
}

void sort_rows(SweepReport& rep) {
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.param < b.param; });
}

/// Fits column `y` (with stderr) against the swept parameter over rows passing the ESS cut.
std::optional<FitResult> fit_rows(SweepReport& rep, const SweepOptions& opt,
                                  double (*y)(const SweepRow&), double (*y_se)(const SweepRow&),
                                  const char* what) {
    std::vector<double> xs, ys, ses;
    for (const auto& row : rep.rows) {
        if (row.est.ess < opt.ess_threshold || !(y(row) > 0.0)) continue;
        xs.push_back(row.param);
        ys.push_back(y(row));
        ses.push_back(y_se(row));
    }
    if (xs.size() < 3) {
        rep.warnings.push_back(std::string("too few usable rows for the ") + what + " fit");
        return std::nullopt;
    }
    return fit_scaling(xs, ys, ses);
}

double row_theta(const SweepRow& r) { return r.est.theta.value; }
double row_theta_se(const SweepRow& r) { return r.est.theta.stderr_; }
double row_r(const SweepRow& r) { return r.est.r.value; }
double row_r_se(const SweepRow& r) { return r.est.r.stderr_; }
double row_mean_abs(const SweepRow& r) { return r.est.mean_abs.value; }
double row_mean_abs_se(const SweepRow& r) { return r.est.mean_abs.stderr_; }

void fit_theta_r(SweepReport& rep, const SweepOptions& opt) {
    rep.theta_fit = fit_rows(rep, opt, row_theta, row_theta_se, "theta");
    rep.r_fit = fit_rows(rep, opt, row_r, row_r_se, "r");
}

void check_beta(double beta) {
    if (!(beta > 0.0) || !(beta <= 1.0)) throw ConfigError("sweep couplings must lie in (0, 1]");
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::beta: return "beta";
        case Experiment::sigma: return "sigma";
        case Experiment::coupled: return "coupled";
        case Experiment::attraction: return "attraction";
        case Experiment::strip: return "strip";
        case Experiment::flory: return "flory";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& name) {
    for (auto e : {Experiment::beta, Experiment::sigma, Experiment::coupled, Experiment::attraction,
                   Experiment::strip, Experiment::flory})
        if (to_string(e) == name) return e;
    throw ConfigError("unknown experiment '" + name + "'");
}

FitResult fit_scaling(std::span<const double> x, std::span<const double> y, std::span<const double> y_se) {
    if (x.size() != y.size() || x.size() != y_se.size()) throw ConfigError("fit columns differ in length");
    if (x.size() < 3) throw ConfigError("fit needs at least 3 rows");
    const bool weighted = std::all_of(y_se.begin(), y_se.end(), [](double s) { return s > 0.0; });
    double sw = 0, sx = 0, sy = 0;
    std::vector<double> lx, ly, w;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("fit needs positive values");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        const double rel = y_se[i] / y[i];
        w.push_back(weighted ? 1.0 / (rel * rel) : 1.0);
        sw += w.back();
        sx += w.back() * lx.back();
        sy += w.back() * ly.back();
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
        sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 1e-300)) throw ConfigError("fit is rank deficient (all x equal)");
    FitResult f;
    f.points = static_cast<int>(x.size());
    f.slope = sxy / sxx;
    if (weighted) {
        f.slope_se = std::sqrt(1.0 / sxx);
    } else {
        double rss = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            const double e = ly[i] - my - f.slope * (lx[i] - mx);
            rss += e * e;
        }
        f.slope_se = lx.size() > 2 ? std::sqrt(rss / static_cast<double>(lx.size() - 2) / sxx) : 0.0;
    }
    const std::size_t k = static_cast<std::size_t>(std::min_element(x.begin(), x.end()) - x.begin());
    const double scale = std::pow(x[k], f.slope);
    f.amplitude = y[k] / scale;
    f.amplitude_se = y_se[k] / scale;
    return f;
}

int n_rule(double coefficient, double coupling) {
    if (!(coefficient > 0.0) || !(coupling > 0.0)) throw ConfigError("n rule needs positive inputs");
    return static_cast<int>(std::ceil(coefficient * std::pow(coupling, -2.0 / 3.0) - 1e-9));
}

SweepReport sweep_beta(const StepDistribution& dist, std::span<const double> betas, const SweepOptions& opt) {
    if (betas.empty()) throw ConfigError("empty beta list");
    for (double b : betas) check_beta(b);
    SweepReport rep;
    rep.experiment = Experiment::beta;
    rep.dist_description = dist.describe();
    const double s23 = std::pow(dist.sigma(), 2.0 / 3.0);
    std::vector<Point> pts;
    for (double b : betas) pts.push_back({dist, n_rule(opt.n_coefficient, b), ModelSpec::domb_joyce(b)});
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.param = row.beta = betas[i];
        row.L = dist.parameter();
        row.sigma = dist.sigma();
        row.n = pts[i].n;
        fill_row(row, est[i], std::cbrt(betas[i]) * s23, std::pow(betas[i], 2.0 / 3.0) / s23);
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    fit_theta_r(rep, opt);
    rep.theta_ref_slope = 1.0 / 3.0;
    rep.theta_ref_amplitude = ReferenceConstants::b_star;
    rep.r_ref_slope = 2.0 / 3.0;
    rep.r_ref_amplitude = ReferenceConstants::a_star;
    if (opt.anchor) {
        const double b = *std::max_element(betas.begin(), betas.end());
        rep.anchor = run_anchor(dist, anchor_n(dist), ModelSpec::domb_joyce(b), b, opt);
    }
    return rep;
}

SweepReport sweep_sigma(Family family, std::span<const int> Ls, const SweepOptions& opt) {
    if (Ls.empty()) throw ConfigError("empty L list");
    if (family != Family::uniform_range && family != Family::geometric_tail)
        throw ConfigError("the sigma sweep needs the uniform_range or geometric_tail family");
    SweepReport rep;
    rep.experiment = Experiment::sigma;
    std::vector<Point> pts;
    for (int L : Ls) {
        if (L < 2) throw ConfigError("L = 1 (simple SAW) is the trivial case and is excluded");
        auto d = make_distribution(family, L);
        const int n = static_cast<int>(std::ceil(opt.n_coefficient * std::pow(d.sigma(), 2.0 / 3.0) - 1e-9));
        pts.push_back({std::move(d), n, ModelSpec::saw()});
    }
    rep.dist_description = to_string(family);
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.beta = kInf;
        row.L = Ls[i];
        row.sigma = row.param = pts[i].dist.sigma();
        row.n = pts[i].n;
        const double s23 = std::pow(row.sigma, 2.0 / 3.0);
        fill_row(row, est[i], s23, 1.0 / s23);
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    fit_theta_r(rep, opt);
    rep.theta_ref_slope = 2.0 / 3.0;
    rep.theta_ref_amplitude = ReferenceConstants::b_star;
    rep.r_ref_slope = -2.0 / 3.0;
    rep.r_ref_amplitude = ReferenceConstants::a_star;
    if (opt.anchor) {
        const auto it = std::min_element(Ls.begin(), Ls.end());
        const auto& d = pts[static_cast<std::size_t>(it - Ls.begin())].dist;
        rep.anchor = run_anchor(d, anchor_n(d), ModelSpec::saw(), d.sigma(), opt);
    }
    return rep;
}

SweepReport sweep_coupled(const StepDistribution& dist, Schedule schedule, double exponent,
                          std::span<const int> ns, const SweepOptions& opt) {
    if (ns.empty()) throw ConfigError("empty n list");
    const bool valid = exponent > 0.0 && exponent < 1.5;
    if (!valid && !opt.allow_invalid_schedule) {
        std::ostringstream os;
        if (schedule == Schedule::beta)
            os << "beta_n = n^-" << exponent << " violates beta_n -> 0 and beta_n n^{3/2} -> infinity";
        else
            os << "L_n = n^" << exponent << " violates L_n -> infinity and L_n n^{-3/2} -> 0";
        throw ConfigError(os.str());
    }
    SweepReport rep;
    rep.experiment = Experiment::coupled;
    rep.dist_description = dist.describe();
    if (!valid) rep.warnings.push_back("schedule outside the theorem's hypotheses (negative control)");
    const double s23 = std::pow(dist.sigma(), 2.0 / 3.0);
    std::vector<Point> pts;
    std::vector<double> couplings;
    for (int n : ns) {
        if (n < 1) throw ConfigError("n must be >= 1");
        if (schedule == Schedule::beta) {
            const double b = std::pow(static_cast<double>(n), -exponent);
            couplings.push_back(b);
            pts.push_back({dist, n, ModelSpec::domb_joyce(b)});
        } else {
            const int L = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), exponent) - 1e-9));
            couplings.push_back(1.0 / (4.0 * L));
            pts.push_back({dist, n, ModelSpec::strip(std::max(L, 1))});
        }
    }
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.param = ns[i];
        row.n = ns[i];
        row.sigma = dist.sigma();
        if (schedule == Schedule::beta)
            row.beta = couplings[i];
        else
            row.L = pts[i].model.strip_L;
        fill_row(row, est[i], std::cbrt(couplings[i]) * s23, std::pow(couplings[i], 2.0 / 3.0) / s23);
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    rep.theta_fit = fit_rows(rep, opt, row_theta, row_theta_se, "theta");
    rep.theta_ref_slope = -exponent / 3.0;
    rep.theta_ref_amplitude = ReferenceConstants::b_star;
    if (opt.anchor) {
        const int n = anchor_n(dist);
        if (schedule == Schedule::beta)
            rep.anchor = run_anchor(dist, n, ModelSpec::domb_joyce(std::pow(n, -exponent)), n, opt);
        else
            rep.anchor = run_anchor(
                dist, std::min(n, 8),
                ModelSpec::strip(std::max(1, static_cast<int>(std::ceil(std::pow(std::min(n, 8), exponent) - 1e-9)))),
                std::min(n, 8), opt);
    }
    return rep;
}

SweepReport sweep_attraction(const StepDistribution& dist, std::span<const double> btildes, double gamma_exponent,
                             const SweepOptions& opt) {
    if (btildes.empty()) throw ConfigError("empty coupling list");
    const bool valid = gamma_exponent > 2.0 / 3.0;
    if (!valid && !opt.allow_invalid_schedule)
        throw ConfigError("gamma = (beta - gamma)^e needs e > 2/3 so that gamma (beta - gamma)^{-2/3} -> 0");
    SweepReport rep;
    rep.experiment = Experiment::attraction;
    rep.dist_description = dist.describe();
    if (!valid) rep.warnings.push_back("schedule outside the theorem's hypotheses (negative control)");
    const double s23 = std::pow(dist.sigma(), 2.0 / 3.0);
    std::vector<Point> pts;
    for (double bt : btildes) {
        check_beta(bt);
        const double gamma = std::pow(bt, gamma_exponent);
        auto model = ModelSpec::attraction(bt + gamma, gamma);
        model.validate();
        pts.push_back({dist, n_rule(opt.n_coefficient, bt), model});
    }
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.param = btildes[i];
        row.beta = pts[i].model.beta;
        row.gamma = pts[i].model.gamma;
        row.L = dist.parameter();
        row.sigma = dist.sigma();
        row.n = pts[i].n;
        fill_row(row, est[i], std::cbrt(btildes[i]) * s23, std::pow(btildes[i], 2.0 / 3.0) / s23);
        row.extra = compute_bn(dist, row.n).expected_G / row.n;
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    fit_theta_r(rep, opt);
    rep.theta_ref_slope = 1.0 / 3.0;
    rep.theta_ref_amplitude = ReferenceConstants::b_star;
    rep.r_ref_slope = 2.0 / 3.0;
    rep.r_ref_amplitude = ReferenceConstants::a_star;
    if (opt.anchor) {
        const auto& p = *std::max_element(pts.begin(), pts.end(),
                                          [](const Point& a, const Point& b) { return a.model.beta < b.model.beta; });
        rep.anchor = run_anchor(dist, anchor_n(dist), p.model, p.model.beta - p.model.gamma, opt);
    }
    return rep;
}

SweepReport sweep_strip(const StepDistribution& dist, std::span<const int> Ls, const SweepOptions& opt) {
    if (Ls.empty()) throw ConfigError("empty L list");
    SweepReport rep;
    rep.experiment = Experiment::strip;
    rep.dist_description = dist.describe();
    const double s23 = std::pow(dist.sigma(), 2.0 / 3.0);
    std::vector<Point> pts;
    for (int L : Ls) {
        if (L < 1) throw ConfigError("strip half-width must be >= 1");
        pts.push_back({dist, n_rule(opt.n_coefficient, 1.0 / (4.0 * L + 2.0)), ModelSpec::strip(L)});
    }
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.param = row.L = Ls[i];
        row.beta = 1.0 / (4.0 * Ls[i] + 2.0);
        row.sigma = dist.sigma();
        row.n = pts[i].n;
        const double c = 1.0 / (4.0 * Ls[i]);
        fill_row(row, est[i], std::cbrt(c) * s23, std::pow(c, 2.0 / 3.0) / s23);
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    fit_theta_r(rep, opt);
    rep.theta_ref_slope = -1.0 / 3.0;
    rep.theta_ref_amplitude = ReferenceConstants::b_star;
    rep.r_ref_slope = -2.0 / 3.0;
    rep.r_ref_amplitude = ReferenceConstants::a_star;
    if (opt.anchor) {
        const int L = *std::min_element(Ls.begin(), Ls.end());
        rep.anchor = run_anchor(dist, 5, ModelSpec::strip(L), L, opt);
    }
    return rep;
}

SweepReport sweep_flory(std::span<const int> ns, const SweepOptions& opt) {
    if (ns.empty()) throw ConfigError("empty n list");
    const auto dist = make_distribution(Family::simple, 1);
    SweepReport rep;
    rep.experiment = Experiment::flory;
    rep.dist_description = dist.describe();
    std::vector<Point> pts;
    for (int n : ns) {
        if (n < 1) throw ConfigError("n must be >= 1");
        const int L = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.75) - 1e-9));
        pts.push_back({dist, n, ModelSpec::strip(L)});
    }
    const auto est = run_points(pts, opt, kPointStreams);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SweepRow row;
        row.param = row.n = ns[i];
        row.L = pts[i].model.strip_L;
        row.beta = 1.0 / (4.0 * row.L + 2.0);
        row.sigma = 1.0;
        const double c = 1.0 / (4.0 * row.L);
        fill_row(row, est[i], std::cbrt(c), std::pow(c, 2.0 / 3.0));
        row.extra = est[i].mean_abs.value;
        rep.rows.push_back(std::move(row));
    }
    sort_rows(rep);
    rep.theta_fit = fit_rows(rep, opt, row_mean_abs, row_mean_abs_se, "E|S_n|");
    rep.theta_ref_slope = 0.75;
    rep.theta_ref_amplitude = ReferenceConstants::b_star * std::cbrt(0.25);
    if (opt.anchor) {
        const int n = 8;
        const int L = static_cast<int>(std::ceil(std::pow(n, 0.75) - 1e-9));
        rep.anchor = run_anchor(dist, n, ModelSpec::strip(L), n, opt);
    }
    return rep;
}

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

nlohmann::json jnum(double v) {
    if (std::isfinite(v)) return v;
    return num(v);
}

nlohmann::json fit_json(const std::optional<FitResult>& f) {
    if (!f) return nullptr;
    return {{"slope", f->slope},
            {"slope_se", f->slope_se},
            {"amplitude", f->amplitude},
            {"amplitude_se", f->amplitude_se},
            {"points", f->points}};
}

}  // namespace

void write_csv(std::ostream& os, const SweepReport& report) {
    os << "experiment,param,beta,gamma,L,sigma,n,theta_hat,theta_se,r_hat,r_se,sigma_star_hat,sigma_star_se,"
          "scaled_theta,scaled_theta_se,scaled_r,scaled_r_se,ess,extra,warnings\n";
    for (const auto& r : report.rows) {
        std::string w;
        for (const auto& s : r.warnings) w += (w.empty() ? "" : "; ") + s;
        std::replace(w.begin(), w.end(), ',', ' ');
        os << to_string(report.experiment) << ',' << num(r.param) << ',' << num(r.beta) << ',' << num(r.gamma)
           << ',' << r.L << ',' << num(r.sigma) << ',' << r.n << ',' << num(r.est.theta.value) << ','
           << num(r.est.theta.stderr_) << ',' << num(r.est.r.value) << ',' << num(r.est.r.stderr_) << ','
           << num(r.est.sigma_star.value) << ',' << num(r.est.sigma_star.stderr_) << ',' << num(r.scaled_theta)
           << ',' << num(r.scaled_theta_se) << ',' << num(r.scaled_r) << ',' << num(r.scaled_r_se) << ','
           << num(r.est.ess) << ',' << num(r.extra) << ',' << w << '\n';
    }
}

std::string report_json(const SweepReport& report) {
    nlohmann::json j;
    j["experiment"] = to_string(report.experiment);
    j["distribution"] = report.dist_description;
    j["theta_fit"] = fit_json(report.theta_fit);
    j["r_fit"] = fit_json(report.r_fit);
    j["reference"] = {{"theta_slope", report.theta_ref_slope},
                      {"theta_amplitude", report.theta_ref_amplitude},
                      {"r_slope", report.r_ref_slope},
                      {"r_amplitude", report.r_ref_amplitude}};
    if (report.anchor) {
        const auto& a = *report.anchor;
        j["anchor"] = {{"n", a.n},           {"param", a.param},   {"theta_mc", a.mc},
                       {"theta_se", a.mc_se}, {"theta_exact", a.exact}, {"within_3se", a.within_3se}};
    } else {
        j["anchor"] = nullptr;
    }
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"param", jnum(r.param)},
                        {"beta", jnum(r.beta)},
                        {"gamma", r.gamma},
                        {"L", r.L},
                        {"sigma", r.sigma},
                        {"n", r.n},
                        {"theta_hat", r.est.theta.value},
                        {"theta_se", r.est.theta.stderr_},
                        {"r_hat", r.est.r.value},
                        {"r_se", r.est.r.stderr_},
                        {"sigma_star_hat", r.est.sigma_star.value},
                        {"sigma_star_se", r.est.sigma_star.stderr_},
                        {"scaled_theta", r.scaled_theta},
                        {"scaled_theta_se", r.scaled_theta_se},
                        {"scaled_r", r.scaled_r},
                        {"scaled_r_se", r.scaled_r_se},
                        {"ess", r.est.ess},
                        {"extra", r.extra},
                        {"warnings", r.warnings}});
    }
    j["rows"] = rows;
    j["warnings"] = report.warnings;
    return j.dump(2);
}

}  // namespace polymerlab
