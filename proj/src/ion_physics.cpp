#include "trapcal/ion_physics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace trapcal {

void IonChainState::validate() const {
    if (positions.empty() || positions.size() > 50)
        throw InputError("IonChainState: requires 1 <= n <= 50 ions");
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
        if (!(positions[i] < positions[i + 1]))
            throw InputError("IonChainState: positions must be strictly increasing");
}

AxialField field_from_model(const CalibratedTrapModel& m, const VoltageSetting& u) {
    u.validate_against(m.layout);
    return {[m, u](double x) { return eval_total(m, u, x).e; },
            [m, u](double x) { return eval_total(m, u, x).d; }};
}

namespace {

// Coulomb force on each ion, F_i = k e^2 sum_j sign(x_i - x_j) / (x_i - x_j)^2.
void coulomb_forces(const std::vector<double>& x, double ke2, std::vector<double>& f) {
    const std::size_t n = x.size();
    std::fill(f.begin(), f.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            if (d == 0.0) throw InputError("coulomb force: coincident ions");
            const double g = ke2 / (d * d);
            // d < 0 since x sorted ascending: ion i pushed left, j right
            f[i] -= g;
            f[j] += g;
        }
    }
}

}  // namespace

std::vector<double> coulomb_probe(const IonChainState& chain, const PhysicalConstants& consts) {
    chain.validate();
    const std::size_t n = chain.n_ions();
    std::vector<double> f(n);
    coulomb_forces(chain.positions, consts.k_coulomb() * consts.e * consts.e, f);
    std::vector<double> e_ext(n);
    for (std::size_t i = 0; i < n; ++i) e_ext[i] = -f[i] / consts.e;
    return e_ext;
}

namespace {

// Newton iterations on the force balance F(x) = 0. Returns false if the
// Jacobian is singular or the step cannot reduce the force norm.
bool newton_polish(std::vector<double>& x, const AxialField& field, double e_charge, double ke2,
                   double force_tol) {
    const int n = static_cast<int>(x.size());
    std::vector<double> fc(n);
    Eigen::VectorXd f(n);
    Eigen::MatrixXd jac(n, n);

    auto total_force = [&](const std::vector<double>& pos, Eigen::VectorXd& out) {
        coulomb_forces(pos, ke2, fc);
        for (int i = 0; i < n; ++i) out[i] = e_charge * field.e(pos[i]) + fc[i];
    };

    total_force(x, f);
    double fnorm = f.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 60 && fnorm > 0.0; ++it) {
        jac.setZero();
        for (int i = 0; i < n; ++i) {
            jac(i, i) = -e_charge * field.d(x[i]);  // dE/dx = -D
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = x[i] - x[j];
                const double c = 2.0 * ke2 / std::abs(d * d * d);
                jac(i, i) -= c;
                jac(i, j) += c;
            }
        }
        Eigen::VectorXd step = jac.partialPivLu().solve(-f);
        if (!step.allFinite()) return false;
        double scale = 1.0;
        for (int tries = 0; tries < 30; ++tries, scale *= 0.5) {
            std::vector<double> x_new(x);
            for (int i = 0; i < n; ++i) x_new[i] += scale * step[i];
            if (!std::is_sorted(x_new.begin(), x_new.end())) continue;
            Eigen::VectorXd f_new(n);
            total_force(x_new, f_new);
            const double fn = f_new.lpNorm<Eigen::Infinity>();
            if (fn < fnorm) {
                x = std::move(x_new);
                f = f_new;
                fnorm = fn;
                break;
            }
        }
        if (fnorm <= 0.01 * force_tol) return true;
    }
    return fnorm <= force_tol;
}

}  // namespace

IonChainState equilibrium_positions(const AxialField& field, int n_ions,
                                    const IonChainState& init, const EquilibriumOptions& opts,
                                    const PhysicalConstants& consts) {
    init.validate();
    if (static_cast<int>(init.n_ions()) != n_ions)
        throw InputError("equilibrium_positions: init size must equal n_ions");

    const double e = consts.e;
    const double ke2 = consts.k_coulomb() * e * e;
    const double m = consts.m_ion;

    // Stiffness estimate over the initial span (plus margin) sets the step,
    // the damping and the force tolerance.
    const double span = std::max(init.positions.back() - init.positions.front(), 20e-6);
    const double x_lo = init.positions.front() - 0.5 * span;
    const double x_hi = init.positions.back() + 0.5 * span;
    double d_max = 0.0;
    for (int i = 0; i <= 32; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / 32.0;
        d_max = std::max(d_max, std::abs(field.d(x)));
    }
    d_max = std::max(d_max, 1e3);
    const double omega_max = std::sqrt(e * d_max / m);
    const double dt = opts.dt > 0.0 ? opts.dt : 0.02 / omega_max;
    const double damping = opts.damping > 0.0 ? opts.damping : 0.5 * omega_max;
    const double force_tol =
        opts.force_tol > 0.0 ? opts.force_tol : 1e-4 * e * d_max * 1e-6;

    // Escape bound: generous box around the initial chain.
    const double margin = std::max(4.0 * span, 400e-6);
    const double esc_lo = init.positions.front() - margin;
    const double esc_hi = init.positions.back() + margin;

    std::vector<double> x = init.positions;
    std::vector<double> v(x.size(), 0.0), a(x.size(), 0.0), fc(x.size());
    const int n = n_ions;

    auto accelerations = [&](const std::vector<double>& pos, const std::vector<double>& vel,
                             std::vector<double>& acc) {
        coulomb_forces(pos, ke2, fc);
        for (int i = 0; i < n; ++i)
            acc[i] = (e * field.e(pos[i]) + fc[i]) / m - damping * vel[i];
    };

    accelerations(x, v, a);
    bool converged = false;
    const long check_every = 50;
    for (long step = 0; step < opts.max_steps; ++step) {
        for (int i = 0; i < n; ++i) {
            x[i] += v[i] * dt + 0.5 * a[i] * dt * dt;
            v[i] += 0.5 * a[i] * dt;
        }
        if (!std::is_sorted(x.begin(), x.end())) {
            // ions crossed; reorder all state arrays together
            std::vector<int> idx(n);
            for (int i = 0; i < n; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](int i, int j) { return x[i] < x[j]; });
            std::vector<double> x2(n), v2(n);
            for (int i = 0; i < n; ++i) {
                x2[i] = x[idx[i]];
                v2[i] = v[idx[i]];
            }
            x = std::move(x2);
            v = std::move(v2);
        }
        accelerations(x, v, a);
        for (int i = 0; i < n; ++i) v[i] += 0.5 * a[i] * dt;

        if (step % check_every == 0) {
            if (x.front() < esc_lo || x.back() > esc_hi)
                throw SolverError("equilibrium_positions: chain escaped the field region");
            double fmax = 0.0;
            for (int i = 0; i < n; ++i)
                fmax = std::max(fmax, std::abs(e * field.e(x[i]) + fc[i]));
            if (fmax < force_tol) {
                converged = true;
                break;
            }
        }
    }

    if (opts.newton_polish) converged = newton_polish(x, field, e, ke2, force_tol) || converged;
    if (!converged)
        throw SolverError("equilibrium_positions: no convergence within max_steps");

    IonChainState out;
    out.positions = std::move(x);
    out.validate();
    return out;
}

RootResult single_ion_equilibrium(const AxialField& field, double x_lo, double x_hi) {
    if (!(x_lo < x_hi)) throw InputError("single_ion_equilibrium: bad bracket");
    double f_lo = field.e(x_lo);
    double f_hi = field.e(x_hi);
    if (f_lo == 0.0) return {x_lo, false};
    if (f_hi == 0.0) return {x_hi, false};
    if (f_lo * f_hi > 0.0)
        throw InputError("single_ion_equilibrium: no sign change in bracket");

    // Scan for multiple roots; keep the bracket whose root lies nearest the midpoint.
    const int n_scan = 256;
    const double mid = 0.5 * (x_lo + x_hi);
    double best_lo = x_lo, best_hi = x_hi;
    int n_roots = 0;
    double prev_x = x_lo, prev_f = f_lo;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n_scan; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / n_scan;
        const double f = field.e(x);
        if (prev_f == 0.0 || prev_f * f < 0.0 || (f == 0.0 && i == n_scan)) {
            ++n_roots;
            const double c = 0.5 * (prev_x + x);
            if (std::abs(c - mid) < best_dist) {
                best_dist = std::abs(c - mid);
                best_lo = prev_x;
                best_hi = x;
            }
        }
        prev_x = x;
        prev_f = f;
    }
    if (n_roots == 0) {
        best_lo = x_lo;
        best_hi = x_hi;
    }

    double lo = best_lo, hi = best_hi;
    double flo = field.e(lo);
    for (int i = 0; i < 80 && hi - lo > 1e-15; ++i) {
        const double c = 0.5 * (lo + hi);
        const double f = field.e(c);
        if (f == 0.0) {
            lo = hi = c;
            break;
        }
        if (flo * f < 0.0)
            hi = c;
        else {
            lo = c;
            flo = f;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {  // Newton refinement, dE/dx = -D
        const double d = field.d(x);
        if (d == 0.0) break;
        const double step = field.e(x) / d;
        const double x_new = x + step;
        if (x_new < best_lo || x_new > best_hi) break;
        x = x_new;
        if (std::abs(step) < 1e-13) break;
    }
    return {x, n_roots > 1};
}

double secular_frequency(double d_curvature, const PhysicalConstants& consts) {
    if (!(d_curvature > 0.0))
        throw InputError("secular_frequency: D <= 0, axis not confining");
    return std::sqrt(consts.e * d_curvature / consts.m_ion);
}

double secular_frequency(const CalibratedTrapModel& m, const VoltageSetting& u, double x_eq,
                         const PhysicalConstants& consts) {
    return secular_frequency(eval_total(m, u, x_eq).d, consts);
}

}  // namespace trapcal
