#pragma once

#include <functional>
#include <vector>

#include "trapcal/constants.hpp"
#include "trapcal/geometry.hpp"
#include "trapcal/parametric_model.hpp"

namespace trapcal {

// Sorted 1D ion chain positions (m).
struct IonChainState {
    std::vector<double> positions;

    std::size_t n_ions() const { return positions.size(); }
    void validate() const;
};

// Axial external field and its curvature D = -dE/dx, both in SI.
struct AxialField {
    std::function<double(double)> e;
    std::function<double(double)> d;
};

AxialField field_from_model(const CalibratedTrapModel& m, const VoltageSetting& u);

struct EquilibriumOptions {
    double dt = 0.0;         // s; 0 = auto (0.02 / omega_max)
    double damping = 0.0;    // 1/s; 0 = auto (0.5 * omega_max)
    double force_tol = 0.0;  // N; 0 = auto
    long max_steps = 2'000'000;
    bool newton_polish = true;
};

// External field each ion must feel for the observed chain to be stationary:
// E_ext(x_i) = -F_ion(x_i)/e with F_ion the Coulomb sum over neighbors.
std::vector<double> coulomb_probe(const IonChainState& chain,
                                  const PhysicalConstants& consts = {});

// Damped velocity-Verlet relaxation of n ions in the given field, optionally
// polished by Newton iterations on the force-balance system.
IonChainState equilibrium_positions(const AxialField& field, int n_ions,
                                    const IonChainState& init, const EquilibriumOptions& opts = {},
                                    const PhysicalConstants& consts = {});

struct RootResult {
    double x = 0.0;
    bool multiple_roots = false;  // more than one sign change seen in the bracket
};

// Root of E(x) = 0 inside [x_lo, x_hi]; bisection then Newton refinement.
RootResult single_ion_equilibrium(const AxialField& field, double x_lo, double x_hi);

// omega_x = sqrt(e D / M); throws on D <= 0 (no confinement along x).
double secular_frequency(double d_curvature, const PhysicalConstants& consts = {});
double secular_frequency(const CalibratedTrapModel& m, const VoltageSetting& u, double x_eq,
                         const PhysicalConstants& consts = {});

}  // namespace trapcal
