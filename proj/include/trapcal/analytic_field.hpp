#pragma once

#include <span>
#include <vector>

#include "trapcal/geometry.hpp"

namespace trapcal {

// Per-unit-volt sample of the electrode field along the axis.
struct FieldSample {
    double x;    // m
    double phi;  // V per electrode volt
    double ex;   // V/m per volt, Ex = -dphi/dx
    double d;    // V/m^2 per volt, D = d2phi/dx2
};

// Closed-form potential of a unit-voltage rectangle in an infinite grounded
// plane, evaluated at a point strictly above the plane (y > 0).
double rect_potential(const ElectrodeRect& rect, double x, double y, double z);

struct RectDerivs {
    double ex;  // -dphi/dx, V/m per volt
    double d;   // d2phi/dx2, V/m^2 per volt
};
// Analytic x-derivatives of rect_potential.
RectDerivs rect_axial_derivatives(const ElectrodeRect& rect, double x, double y, double z);

// phi/Ex/D of pair k (sum of both rectangles) along (x, y, z = 0).
std::vector<FieldSample> pair_profile(const TrapLayout& layout, int k, double y,
                                      std::span<const double> xs);

// Ex(x, y+dy) - Ex(x, y) for pair k, the height-variation systematic probe.
std::vector<double> height_sensitivity(const TrapLayout& layout, int k, double y, double dy,
                                       std::span<const double> xs);

// CSV export: columns x_um, phi_V, Ex_V_per_m, D_V_per_m2.
void write_profile_csv(const std::string& path, std::span<const FieldSample> samples);

}  // namespace trapcal
