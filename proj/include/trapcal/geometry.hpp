#pragma once

#include <map>
#include <string>
#include <vector>

#include "trapcal/errors.hpp"

namespace trapcal {

// Coordinates: x axial, y height above the chip, z transverse.
// Electrodes are rectangles in the y = 0 plane.
struct ElectrodeRect {
    double x1, z1, x2, z2;  // opposite corners, m

    void validate() const {
        if (!(x1 < x2) || !(z1 < z2))
            throw InputError("ElectrodeRect: requires x1 < x2 and z1 < z2");
    }
    double x_center() const { return 0.5 * (x1 + x2); }
    double x_width() const { return x2 - x1; }
};

// Two mirror-placed rectangles driven with the same voltage.
struct ElectrodePair {
    int k = 0;
    ElectrodeRect rect_a;  // +z side
    ElectrodeRect rect_b;  // -z side
    double x_center = 0.0;  // m, shared axial center, fixed by geometry

    void validate() const;
};

struct TrapLayout {
    std::vector<ElectrodePair> pairs;  // ordered by k
    std::vector<int> active;           // sorted pair indices
    double probe_height = 150e-6;      // y0, m

    const ElectrodePair& pair(int k) const;
    bool is_active(int k) const;
    void validate() const;
};

// Voltages applied per pair. Pairs absent from the map are grounded (0 V);
// every active pair must be present.
struct VoltageSetting {
    std::map<int, double> volts;
    std::string id;

    double at(int k) const {
        auto it = volts.find(k);
        return it == volts.end() ? 0.0 : it->second;
    }
    void validate_against(const TrapLayout& layout) const;
};

// The paper's trap: fifteen 147 um DC pairs, rectangles 0.94 mm long with a
// 514 um inner separation, probe height 150 um, pairs 4..12 active.
TrapLayout default_layout();

}  // namespace trapcal
