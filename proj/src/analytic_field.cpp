#include "trapcal/analytic_field.hpp"

#include <cmath>
#include <fstream>

#include "trapcal/constants.hpp"
#include "trapcal/io_util.hpp"

namespace trapcal {

namespace {

void require_above_plane(double y) {
    if (!(y > 0.0))
        throw InputError("rect_potential: point must be strictly above the electrode plane (y > 0)");
}

// One corner term: T = atan(X Z / (y R)), R = sqrt(y^2 + X^2 + Z^2),
// with X = xk - x, Z = zk - z.
inline double corner_term(double X, double Z, double y) {
    const double r = std::sqrt(y * y + X * X + Z * Z);
    return std::atan2(X * Z, y * r);
}

// dT/dx = -y Z / (R (y^2 + X^2))
inline double corner_term_dx(double X, double Z, double y) {
    const double r = std::sqrt(y * y + X * X + Z * Z);
    return -y * Z / (r * (y * y + X * X));
}

// d2T/dx2 = -y Z X (S + 2 R^2) / (R^3 S^2), S = y^2 + X^2
inline double corner_term_dxx(double X, double Z, double y) {
    const double s = y * y + X * X;
    const double r2 = y * y + X * X + Z * Z;
    const double r = std::sqrt(r2);
    return -y * Z * X * (s + 2.0 * r2) / (r * r2 * s * s);
}

}  // namespace

double rect_potential(const ElectrodeRect& rect, double x, double y, double z) {
    require_above_plane(y);
    const double x1 = rect.x1 - x, x2 = rect.x2 - x;
    const double z1 = rect.z1 - z, z2 = rect.z2 - z;
    const double sum = corner_term(x2, z2, y) - corner_term(x1, z2, y) -
                       corner_term(x2, z1, y) + corner_term(x1, z1, y);
    return sum / (2.0 * kPi);
}

RectDerivs rect_axial_derivatives(const ElectrodeRect& rect, double x, double y, double z) {
    require_above_plane(y);
    const double x1 = rect.x1 - x, x2 = rect.x2 - x;
    const double z1 = rect.z1 - z, z2 = rect.z2 - z;
    const double dphi = (corner_term_dx(x2, z2, y) - corner_term_dx(x1, z2, y) -
                         corner_term_dx(x2, z1, y) + corner_term_dx(x1, z1, y)) /
                        (2.0 * kPi);
    const double d2phi = (corner_term_dxx(x2, z2, y) - corner_term_dxx(x1, z2, y) -
                          corner_term_dxx(x2, z1, y) + corner_term_dxx(x1, z1, y)) /
                         (2.0 * kPi);
    return {-dphi, d2phi};
}

std::vector<FieldSample> pair_profile(const TrapLayout& layout, int k, double y,
                                      std::span<const double> xs) {
    const ElectrodePair& p = layout.pair(k);
    std::vector<FieldSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        const double phi = rect_potential(p.rect_a, x, y, 0.0) + rect_potential(p.rect_b, x, y, 0.0);
        const RectDerivs da = rect_axial_derivatives(p.rect_a, x, y, 0.0);
        const RectDerivs db = rect_axial_derivatives(p.rect_b, x, y, 0.0);
        out.push_back({x, phi, da.ex + db.ex, da.d + db.d});
    }
    return out;
}

std::vector<double> height_sensitivity(const TrapLayout& layout, int k, double y, double dy,
                                       std::span<const double> xs) {
    if (!(y > 0.0) || !(y + dy > 0.0))
        throw InputError("height_sensitivity: both heights must be > 0");
    const auto base = pair_profile(layout, k, y, xs);
    const auto shifted = pair_profile(layout, k, y + dy, xs);
    std::vector<double> delta(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) delta[i] = shifted[i].ex - base[i].ex;
    return delta;
}

void write_profile_csv(const std::string& path, std::span<const FieldSample> samples) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open for writing: " + path);
    f << "x_um,phi_V,Ex_V_per_m,D_V_per_m2\n";
    for (const auto& s : samples)
        f << fmt_double(s.x * 1e6) << ',' << fmt_double(s.phi) << ',' << fmt_double(s.ex) << ','
          << fmt_double(s.d) << '\n';
}

}  // namespace trapcal
