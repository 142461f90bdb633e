#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trapcal/geometry.hpp"

namespace trapcal {

// Unnormalized Lorentzian ansatz for a pair's axial unit-voltage potential:
// phi(x) = A gamma / ((x - x_c)^2 + gamma^2)
struct LorentzParams {
    double A = 0.0;      // V m
    double gamma = 0.0;  // m
    double x_c = 0.0;    // m, fixed from geometry

    void validate() const {
        if (!(A > 0.0) || !(gamma > 0.0))
            throw InputError("LorentzParams: requires A > 0 and gamma > 0");
    }
};

// Lorentz plus Gaussian for wide electrodes:
// phi(x) = a gamma / (gamma^2 + u^2) + b exp(-u^2 / w), u = x - x_c.
// w carries area units (m^2) by convention.
struct LorentzGaussParams {
    double a = 0.0;      // V m
    double gamma = 0.0;  // m
    double b = 0.0;      // V, any sign
    double w = 0.0;      // m^2
    double x_c = 0.0;    // m

    void validate() const {
        if (!(a > 0.0) || !(gamma > 0.0) || !(w > 0.0))
            throw InputError("LorentzGaussParams: requires a > 0, gamma > 0, w > 0");
    }
};

// Stray field E_s(x) = a x^2 + b x + c (field, not potential).
struct StrayCoeffs {
    double a = 0.0;  // V/m^3
    double b = 0.0;  // V/m^2
    double c = 0.0;  // V/m
};

struct ModelEval {
    double phi;  // V
    double ex;   // V/m, -dphi/dx
    double d;    // V/m^2, d2phi/dx2
};

ModelEval eval_lorentz(const LorentzParams& p, double x);
ModelEval eval_lorentz_gauss(const LorentzGaussParams& p, double x);

struct StrayEval {
    double es;  // V/m
    double ds;  // V/m^2, D_s = -dE_s/dx
};
StrayEval eval_stray(const StrayCoeffs& s, double x);

struct ModelMetadata {
    std::string method;     // "opt", "interp", ...
    std::string timestamp;  // caller-supplied; empty keeps outputs reproducible
    double objective_t1 = 0.0;
    double objective_t2 = 0.0;
    double constraint_violation = 0.0;
    int generations = 0;
    bool flagged = false;   // infeasible or non-converged calibration
};

// The 2N+3 parameter model: per-active-pair Lorentz params plus stray coeffs.
struct CalibratedTrapModel {
    TrapLayout layout;
    std::vector<LorentzParams> pair_params;  // same order as layout.active
    StrayCoeffs stray;
    ModelMetadata meta;

    const LorentzParams& params_for(int k) const;
    std::size_t parameter_count() const { return 2 * pair_params.size() + 3; }
    void validate() const;
};

struct TotalEval {
    double e;  // V/m
    double d;  // V/m^2
};
// Superposition of voltage-scaled pair fields plus stray.
TotalEval eval_total(const CalibratedTrapModel& m, const VoltageSetting& u, double x);

enum class ProfileKind { lorentz, lorentz_gauss };

// Residual statistics over the fit grid, both normalized by max potential
// and relative pointwise.
struct FitStats {
    double normalized_error = 0.0;      // mean |r| / max(phi)
    double normalized_error_std = 0.0;  // std |r| / max(phi)
    double relative_error = 0.0;        // mean |r / phi|
    double relative_error_std = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

struct ProfileFit {
    ProfileKind kind = ProfileKind::lorentz;
    LorentzParams lorentz;
    LorentzGaussParams lorentz_gauss;
    FitStats stats;

    double phi_at(double x) const;
};

// Nonlinear least squares of a sampled potential profile. x_c stays fixed
// unless free_center is set (diagnostic use only).
ProfileFit fit_profile(std::span<const double> xs, std::span<const double> phis,
                       ProfileKind kind, double x_c, bool free_center = false);

// Least squares of the Lorentz *field* form Ex(x) = 2 A g u / (u^2 + g^2)^2
// against sampled field values; used by the interpolation pipeline where the
// potential carries an unknown offset. Initial guess required.
LorentzParams fit_lorentz_field(std::span<const double> xs, std::span<const double> exs,
                                double x_c, const LorentzParams& init);

}  // namespace trapcal
