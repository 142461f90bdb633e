#pragma once

#include <numbers>

#include "trapcal/errors.hpp"

namespace trapcal {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

// SI throughout. File I/O converts um/V/kHz at the boundary only.
struct PhysicalConstants {
    double e = 1.602176634e-19;          // elementary charge, C
    double eps0 = 8.8541878128e-12;      // vacuum permittivity, F/m
    double m_ion = 40.0 * kAtomicMassUnit;  // calcium-40, kg

    // Coulomb constant 1/(4 pi eps0), N m^2 / C^2
    double k_coulomb() const { return 1.0 / (4.0 * kPi * eps0); }

    void validate() const {
        if (e <= 0.0 || eps0 <= 0.0 || m_ion <= 0.0)
            throw InputError("PhysicalConstants: all constants must be strictly positive");
    }
};

}  // namespace trapcal
