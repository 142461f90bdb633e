#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trapcal/field_table.hpp"
#include "trapcal/geometry.hpp"
#include "trapcal/ion_physics.hpp"
#include "trapcal/parametric_model.hpp"

namespace trapcal {

enum class HeightMode { fixed, voltage_dependent };

// Combined E(x)/D(x) of one voltage setting, tabulated for fast solves.
struct SettingField {
    CubicTable e;  // V/m
    CubicTable d;  // V/m^2
    AxialField axial() const {
        return {[this](double x) { return e(x); }, [this](double x) { return d(x); }};
    }
};

// Ground truth standing in for the physical trap: analytic rectangle fields
// tabulated per active pair at the probe height, plus a quadratic stray field.
struct TruthModel {
    TrapLayout layout;
    StrayCoeffs stray_truth;
    HeightMode height_mode = HeightMode::fixed;
    // Height response y(U) = y0 + sum_k beta_k (V_k - V_base_k); beta from the
    // analytic vertical field gradient against a nominal radial stiffness.
    std::vector<double> beta;  // m/V, per active pair
    VoltageSetting height_base;
    double radial_curvature = 0.0;  // V/m^2, kappa_y used to derive beta

    double grid_x0 = 0.0, grid_h = 0.0;
    std::vector<CubicTable> pair_ex;  // per active pair, unit-voltage Ex at y0
    std::vector<CubicTable> pair_d;   // per active pair, unit-voltage D at y0

    double height_for(const VoltageSetting& u) const;
    // Unit-voltage field of active pair (by position in layout.active) at y0.
    double unit_ex(std::size_t active_idx, double x) const { return pair_ex[active_idx](x); }
    TotalEval eval(const VoltageSetting& u, double x) const;
    // Bakes the setting (and, in voltage_dependent mode, its height) into one table.
    SettingField prepare(const VoltageSetting& u) const;
};

struct TruthConfig {
    double grid_half_span = 900e-6;  // covers all active pairs plus probe travel
    double grid_step = 0.5e-6;
    double radial_frequency = 2.0 * kPi * 2.6e6;  // rad/s, fixed trap metadata
};

TruthModel build_truth(const TrapLayout& layout, const StrayCoeffs& stray_truth,
                       HeightMode height_mode, const TruthConfig& cfg = {});

struct NoiseSpec {
    double sigma_pos = 0.4e-6;               // m
    double sigma_freq = 2.0 * kPi * 500.0;   // rad/s
    double magnification_bias = 0.0;         // positions scaled by (1+bias) about x=0
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (sigma_pos < 0.0 || sigma_freq < 0.0)
            throw InputError("NoiseSpec: sigmas must be >= 0");
    }
};

struct IonStringObservation {
    VoltageSetting setting;
    std::vector<double> positions;  // m, sorted, noisy
    double sigma_pos = 0.0;
};

struct FrequencyObservation {
    VoltageSetting setting;
    double x_eq = 0.0;     // m, image-derived (noisy)
    double omega_x = 0.0;  // rad/s, noisy
    double sigma_omega = 0.0;
};

struct SingleIonObservation {
    VoltageSetting setting;
    double x = 0.0;  // m, noisy
    double sigma_pos = 0.0;
};

struct Dataset {
    std::vector<IonStringObservation> strings;
    std::vector<FrequencyObservation> freqs;
    std::vector<SingleIonObservation> singles;
    int n_freq_fit = 20;  // leading freqs used for fitting; the rest validate
    std::vector<std::string> skipped;  // setting ids dropped as unconfined
};

// Settings differing from base only in V_k by j*delta, j = 0..n_steps-1.
std::vector<VoltageSetting> sweep_protocol(const TrapLayout& layout, int k,
                                           const VoltageSetting& base, double delta, int n_steps);

struct ProtocolPlan {
    struct Sweep {
        int k = 0;
        double delta = 0.0;
        std::vector<VoltageSetting> settings;
    };
    std::vector<Sweep> sweeps;
    std::vector<VoltageSetting> freq_settings;    // first n_fit are fit points
    std::vector<VoltageSetting> single_settings;  // also measured in freq_settings
};

struct ProtocolConfig {
    int steps_per_sweep = 19;     // two sweeps per pair; >= 30 settings per pair total
    double delta = 0.02;          // V
    double well_start = -0.06;    // V, swept-pair voltage at step 0
    double wall_voltage = 2.4;    // V, flanking hills at k +/- 3
    double push_voltage = 1.1;    // V, extra on one wall to displace the string
    int n_freq_fit = 20;
    int n_freq_validation = 11;
};

ProtocolPlan default_protocol(const TrapLayout& layout, const ProtocolConfig& cfg = {});

struct GenerateOptions {
    std::pair<int, int> n_ions_range{6, 19};
    bool fail_on_unconfined = false;  // default: skip with report
    int n_freq_fit = 20;
};

// Solves the true equilibrium for every setting and emits noisy observations;
// deterministic for a fixed NoiseSpec::rng_seed (per-setting RNG substreams).
Dataset generate_dataset(const TruthModel& truth, const ProtocolPlan& plan,
                         const GenerateOptions& opts, const NoiseSpec& noise);

}  // namespace trapcal
