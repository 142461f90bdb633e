#include "trapcal/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace trapcal {

void ElectrodePair::validate() const {
    rect_a.validate();
    rect_b.validate();
    const double tol = 1e-12;
    if (std::abs(rect_a.x1 - rect_b.x1) > tol || std::abs(rect_a.x2 - rect_b.x2) > tol)
        throw InputError("ElectrodePair: rect_a and rect_b must share the same x extent");
    if (std::abs(rect_a.x_center() - x_center) > tol)
        throw InputError("ElectrodePair: x_center must match the rectangle centers");
    // mirror placement in z about the trap axis
    if (std::abs(rect_a.z1 + rect_b.z2) > tol || std::abs(rect_a.z2 + rect_b.z1) > tol)
        throw InputError("ElectrodePair: rectangles must be mirror-placed in z");
}

const ElectrodePair& TrapLayout::pair(int k) const {
    for (const auto& p : pairs)
        if (p.k == k) return p;
    throw InputError("TrapLayout: unknown pair index " + std::to_string(k));
}

bool TrapLayout::is_active(int k) const {
    return std::binary_search(active.begin(), active.end(), k);
}

void TrapLayout::validate() const {
    if (probe_height <= 0.0)
        throw InputError("TrapLayout: probe_height must be > 0");
    if (!std::is_sorted(active.begin(), active.end()))
        throw InputError("TrapLayout: active set must be sorted");
    for (const auto& p : pairs) p.validate();
    for (int k : active) pair(k);  // throws on unknown index
}

void VoltageSetting::validate_against(const TrapLayout& layout) const {
    for (int k : layout.active)
        if (!volts.count(k))
            throw InputError("VoltageSetting '" + id + "': missing voltage for active pair " +
                             std::to_string(k));
    for (const auto& [k, v] : volts)
        if (!layout.is_active(k) && v != 0.0)
            throw InputError("VoltageSetting '" + id + "': nonzero voltage on inactive pair " +
                             std::to_string(k));
}

TrapLayout default_layout() {
    TrapLayout layout;
    const double width = 147e-6;      // x extent of every DC pair
    const double length = 0.94e-3;    // z extent of each rectangle
    const double separation = 514e-6; // gap between inner edges of a/b
    const int n_pairs = 15;
    const int center_k = 8;

    for (int k = 1; k <= n_pairs; ++k) {
        ElectrodePair p;
        p.k = k;
        p.x_center = (k - center_k) * width;
        const double x1 = p.x_center - 0.5 * width;
        const double x2 = p.x_center + 0.5 * width;
        const double z_in = 0.5 * separation;
        p.rect_a = {x1, z_in, x2, z_in + length};
        p.rect_b = {x1, -(z_in + length), x2, -z_in};
        layout.pairs.push_back(p);
    }
    for (int k = 4; k <= 12; ++k) layout.active.push_back(k);
    layout.probe_height = 150e-6;
    layout.validate();
    return layout;
}

}  // namespace trapcal
