#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>

namespace trapcal {

struct LevMarOptions {
    int max_iters = 200;
    double ftol = 1e-15;      // relative cost decrease considered converged
    double gtol = 1e-14;      // gradient infinity norm considered converged
    double lambda0 = 1e-3;
    Eigen::VectorXd lower;    // optional box, empty = unbounded
    Eigen::VectorXd upper;
};

struct LevMarResult {
    Eigen::VectorXd params;
    double cost = 0.0;           // 0.5 * ||r||^2
    double residual_norm = 0.0;  // ||r||
    int iterations = 0;
    bool converged = false;
};

// Damped Gauss-Newton on r(p); fn fills the residual vector and, when jac is
// non-null, the Jacobian dr/dp. Box bounds are enforced by projection.
inline LevMarResult levmar(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd*)>& fn,
    Eigen::VectorXd p0, int n_resid, const LevMarOptions& opts = {}) {
    const int n = static_cast<int>(p0.size());
    const bool boxed = opts.lower.size() == n && opts.upper.size() == n;
    auto project = [&](Eigen::VectorXd& p) {
        if (boxed)
            for (int i = 0; i < n; ++i) p[i] = std::min(opts.upper[i], std::max(opts.lower[i], p[i]));
    };
    project(p0);

    Eigen::VectorXd r(n_resid);
    Eigen::MatrixXd jac(n_resid, n);
    fn(p0, r, &jac);
    double cost = 0.5 * r.squaredNorm();
    double lambda = opts.lambda0;

    LevMarResult out;
    out.params = p0;
    out.cost = cost;

    for (int it = 0; it < opts.max_iters; ++it) {
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < opts.gtol) {
            out.converged = true;
            break;
        }
        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
            Eigen::VectorXd step = a.ldlt().solve(-g);
            Eigen::VectorXd p_new = out.params + step;
            project(p_new);
            Eigen::VectorXd r_new(n_resid);
            fn(p_new, r_new, nullptr);
            const double cost_new = 0.5 * r_new.squaredNorm();
            if (cost_new < cost) {
                const double drop = (cost - cost_new) / std::max(cost, 1e-300);
                out.params = p_new;
                cost = cost_new;
                lambda = std::max(lambda * 0.3, 1e-12);
                fn(out.params, r, &jac);
                stepped = true;
                if (drop < opts.ftol) {
                    out.converged = true;
                    it = opts.max_iters;  // done
                }
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) break;
        }
        out.iterations = it + 1;
        if (!stepped) {
            out.converged = true;  // stuck at a (possibly bound-constrained) minimum
            break;
        }
    }
    out.cost = cost;
    out.residual_norm = std::sqrt(2.0 * cost);
    return out;
}

}  // namespace trapcal
