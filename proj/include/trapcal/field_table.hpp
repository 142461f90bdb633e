#pragma once

#include <cmath>
#include <vector>

#include "trapcal/errors.hpp"

namespace trapcal {

// Uniform-grid cubic Hermite table. Slopes are supplied by the builder
// (analytic where available), so interpolation error is O(h^4).
class CubicTable {
public:
    CubicTable() = default;
    CubicTable(double x0, double h, std::vector<double> values, std::vector<double> slopes)
        : x0_(x0), h_(h), v_(std::move(values)), s_(std::move(slopes)) {
        if (v_.size() < 2 || v_.size() != s_.size())
            throw InputError("CubicTable: need >= 2 nodes with matching slopes");
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * (static_cast<double>(v_.size()) - 1.0); }
    bool contains(double x) const { return x >= x_min() && x <= x_max(); }

    double operator()(double x) const {
        double t = (x - x0_) / h_;
        const double n1 = static_cast<double>(v_.size()) - 1.0;
        if (t < 0.0) t = 0.0;  // clamp; callers keep ions inside the table
        if (t > n1) t = n1;
        std::size_t i = static_cast<std::size_t>(t);
        if (i >= v_.size() - 1) i = v_.size() - 2;
        const double u = t - static_cast<double>(i);
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        return h00 * v_[i] + h10 * h_ * s_[i] + h01 * v_[i + 1] + h11 * h_ * s_[i + 1];
    }

private:
    double x0_ = 0.0, h_ = 1.0;
    std::vector<double> v_, s_;
};

// Central-difference slopes for tables where no analytic derivative exists.
inline std::vector<double> numeric_slopes(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> s(n);
    if (n < 2) return s;
    s[0] = (v[1] - v[0]) / h;
    s[n - 1] = (v[n - 1] - v[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    return s;
}

}  // namespace trapcal
