#include "trapcal/parametric_model.hpp"

#include <algorithm>
#include <cmath>

#include "trapcal/levmar.hpp"

namespace trapcal {

ModelEval eval_lorentz(const LorentzParams& p, double x) {
    const double u = x - p.x_c;
    const double g2 = p.gamma * p.gamma;
    const double den = u * u + g2;
    const double phi = p.A * p.gamma / den;
    const double ex = 2.0 * p.A * p.gamma * u / (den * den);
    const double d = 2.0 * p.A * p.gamma * (3.0 * u * u - g2) / (den * den * den);
    return {phi, ex, d};
}

ModelEval eval_lorentz_gauss(const LorentzGaussParams& p, double x) {
    const double u = x - p.x_c;
    const double g2 = p.gamma * p.gamma;
    const double den = u * u + g2;
    const double gauss = p.b * std::exp(-u * u / p.w);
    const double phi = p.a * p.gamma / den + gauss;
    const double ex = 2.0 * p.a * p.gamma * u / (den * den) + gauss * 2.0 * u / p.w;
    const double d = 2.0 * p.a * p.gamma * (3.0 * u * u - g2) / (den * den * den) +
                     gauss * (4.0 * u * u / (p.w * p.w) - 2.0 / p.w);
    return {phi, ex, d};
}

StrayEval eval_stray(const StrayCoeffs& s, double x) {
    return {s.a * x * x + s.b * x + s.c, -(2.0 * s.a * x + s.b)};
}

const LorentzParams& CalibratedTrapModel::params_for(int k) const {
    for (std::size_t i = 0; i < layout.active.size(); ++i)
        if (layout.active[i] == k) return pair_params[i];
    throw InputError("CalibratedTrapModel: no parameters for pair " + std::to_string(k));
}

void CalibratedTrapModel::validate() const {
    layout.validate();
    if (pair_params.size() != layout.active.size())
        throw InputError("CalibratedTrapModel: one parameter set per active pair required");
    for (const auto& p : pair_params) p.validate();
}

TotalEval eval_total(const CalibratedTrapModel& m, const VoltageSetting& u, double x) {
    TotalEval out{0.0, 0.0};
    for (std::size_t i = 0; i < m.layout.active.size(); ++i) {
        const int k = m.layout.active[i];
        auto it = u.volts.find(k);
        if (it == u.volts.end())
            throw InputError("eval_total: setting '" + u.id + "' missing voltage for active pair " +
                             std::to_string(k));
        if (it->second == 0.0) continue;
        const ModelEval ev = eval_lorentz(m.pair_params[i], x);
        out.e += it->second * ev.ex;
        out.d += it->second * ev.d;
    }
    const StrayEval s = eval_stray(m.stray, x);
    out.e += s.es;
    out.d += s.ds;
    return out;
}

double ProfileFit::phi_at(double x) const {
    return kind == ProfileKind::lorentz ? eval_lorentz(lorentz, x).phi
                                        : eval_lorentz_gauss(lorentz_gauss, x).phi;
}

namespace {

FitStats profile_stats(std::span<const double> xs, std::span<const double> phis,
                       const ProfileFit& fit) {
    FitStats st;
    const double max_phi = *std::max_element(phis.begin(), phis.end());
    double sum_abs = 0.0, sum_abs2 = 0.0, sum_rel = 0.0, sum_rel2 = 0.0, sum_sq = 0.0;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = fit.phi_at(xs[i]) - phis[i];
        const double ar = std::abs(r);
        const double rel = std::abs(phis[i]) > 0.0 ? ar / std::abs(phis[i]) : 0.0;
        sum_abs += ar;
        sum_abs2 += ar * ar;
        sum_rel += rel;
        sum_rel2 += rel * rel;
        sum_sq += r * r;
    }
    const double mean_abs = sum_abs / n;
    const double mean_rel = sum_rel / n;
    st.normalized_error = mean_abs / max_phi;
    st.normalized_error_std =
        std::sqrt(std::max(0.0, sum_abs2 / n - mean_abs * mean_abs)) / max_phi;
    st.relative_error = mean_rel;
    st.relative_error_std = std::sqrt(std::max(0.0, sum_rel2 / n - mean_rel * mean_rel));
    st.residual_norm = std::sqrt(sum_sq);
    return st;
}

// Half width at half maximum read off the samples; falls back to a fraction
// of the sampled range when the data does not contain the half level.
double estimate_hwhm(std::span<const double> xs, std::span<const double> phis, double x_peak) {
    const double peak = *std::max_element(phis.begin(), phis.end());
    const double half = 0.5 * peak;
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if ((phis[i] - half) * (phis[i + 1] - half) <= 0.0) {
            const double t = (half - phis[i]) / (phis[i + 1] - phis[i]);
            const double x_half = xs[i] + t * (xs[i + 1] - xs[i]);
            const double w = std::abs(x_half - x_peak);
            if (best == 0.0 || w < best) best = w;
        }
    }
    if (best > 0.0) return best;
    return 0.25 * (xs.back() - xs.front());
}

LorentzParams run_lorentz_fit(std::span<const double> xs, std::span<const double> phis,
                              double x_c, bool free_center, FitStats& stats_out) {
    const double gamma0 = estimate_hwhm(xs, phis, x_c);
    const double a0 = gamma0 * *std::max_element(phis.begin(), phis.end());
    const int np = free_center ? 3 : 2;

    Eigen::VectorXd p0(np);
    p0[0] = a0;
    p0[1] = gamma0;
    if (free_center) p0[2] = x_c;

    auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double a = p[0], g = p[1];
        const double xc = free_center ? p[2] : x_c;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double u = xs[i] - xc;
            const double den = u * u + g * g;
            r[i] = a * g / den - phis[i];
            if (jac) {
                (*jac)(i, 0) = g / den;
                (*jac)(i, 1) = a * (u * u - g * g) / (den * den);
                if (free_center) (*jac)(i, 2) = 2.0 * a * g * u / (den * den);
            }
        }
    };

    LevMarOptions opts;
    opts.lower = Eigen::VectorXd::Constant(np, 1e-300);
    opts.upper = Eigen::VectorXd::Constant(np, 1e300);
    if (free_center) {
        opts.lower[2] = xs.front();
        opts.upper[2] = xs.back();
    }
    auto res = levmar(fn, p0, static_cast<int>(xs.size()), opts);
    if (!res.converged)
        throw FitError("lorentz profile fit did not converge", res.residual_norm);
    stats_out.iterations = res.iterations;
    LorentzParams out;
    out.A = res.params[0];
    out.gamma = res.params[1];
    out.x_c = free_center ? res.params[2] : x_c;
    return out;
}

LorentzGaussParams run_lg_fit(std::span<const double> xs, std::span<const double> phis,
                              double x_c, const LorentzParams& seed, FitStats& stats_out) {
    // Seeded from the plain Lorentz fit so the richer family never does worse.
    auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double a = p[0], g = p[1], b = p[2], w = p[3];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double u = xs[i] - x_c;
            const double den = u * u + g * g;
            const double e = std::exp(-u * u / w);
            r[i] = a * g / den + b * e - phis[i];
            if (jac) {
                (*jac)(i, 0) = g / den;
                (*jac)(i, 1) = a * (u * u - g * g) / (den * den);
                (*jac)(i, 2) = e;
                (*jac)(i, 3) = b * e * u * u / (w * w);
            }
        }
    };

    const double peak = *std::max_element(phis.begin(), phis.end());
    LevMarOptions opts;
    opts.lower = Eigen::VectorXd::Constant(4, 1e-300);
    opts.upper = Eigen::VectorXd::Constant(4, 1e300);
    opts.lower[2] = -1e300;  // b may take any sign
    opts.max_iters = 400;

    LevMarResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (double b_frac : {1e-9, 0.1, -0.1}) {
        Eigen::VectorXd p0(4);
        p0 << seed.A, seed.gamma, b_frac * peak, seed.gamma * seed.gamma;
        auto res = levmar(fn, p0, static_cast<int>(xs.size()), opts);
        if (res.cost < best.cost) best = res;
    }
    if (!std::isfinite(best.cost))
        throw FitError("lorentz+gauss profile fit did not converge", 0.0);
    stats_out.iterations = best.iterations;
    LorentzGaussParams out;
    out.a = best.params[0];
    out.gamma = best.params[1];
    out.b = best.params[2];
    out.w = best.params[3];
    out.x_c = x_c;
    return out;
}

}  // namespace

ProfileFit fit_profile(std::span<const double> xs, std::span<const double> phis,
                       ProfileKind kind, double x_c, bool free_center) {
    const std::size_t min_n = kind == ProfileKind::lorentz ? 8 : 12;
    if (xs.size() != phis.size())
        throw InputError("fit_profile: xs/phis size mismatch");
    if (xs.size() < min_n)
        throw InputError("fit_profile: need at least " + std::to_string(min_n) + " samples");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1])) throw InputError("fit_profile: xs must be strictly increasing");

    ProfileFit fit;
    fit.kind = kind;
    FitStats stats;
    fit.lorentz = run_lorentz_fit(xs, phis, x_c, free_center && kind == ProfileKind::lorentz, stats);
    if (kind == ProfileKind::lorentz_gauss)
        fit.lorentz_gauss = run_lg_fit(xs, phis, x_c, fit.lorentz, stats);
    const int iters = stats.iterations;
    fit.stats = profile_stats(xs, phis, fit);
    fit.stats.iterations = iters;
    return fit;
}

LorentzParams fit_lorentz_field(std::span<const double> xs, std::span<const double> exs,
                                double x_c, const LorentzParams& init) {
    if (xs.size() != exs.size() || xs.size() < 4)
        throw InputError("fit_lorentz_field: need >= 4 matching samples");
    auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double a = p[0], g = p[1];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double u = xs[i] - x_c;
            const double den = u * u + g * g;
            const double den2 = den * den;
            r[i] = 2.0 * a * g * u / den2 - exs[i];
            if (jac) {
                (*jac)(i, 0) = 2.0 * g * u / den2;
                (*jac)(i, 1) = 2.0 * a * u * (u * u - 3.0 * g * g) / (den2 * den);
            }
        }
    };
    Eigen::VectorXd p0(2);
    p0 << init.A, init.gamma;
    LevMarOptions opts;
    opts.lower = Eigen::VectorXd::Constant(2, 1e-300);
    opts.upper = Eigen::VectorXd::Constant(2, 1e300);
    auto res = levmar(fn, p0, static_cast<int>(xs.size()), opts);
    if (!res.converged)
        throw FitError("lorentz field fit did not converge", res.residual_norm);
    LorentzParams out;
    out.A = res.params[0];
    out.gamma = res.params[1];
    out.x_c = x_c;
    return out;
}

}  // namespace trapcal
