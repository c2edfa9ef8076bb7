#include "ssc/codebook.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ssc {

namespace {

void check_grid_index(GridIndex n, std::uint32_t n_points) {
    if (n < 1 || n > n_points) {
        throw std::invalid_argument("grid index " + std::to_string(n) + " outside [1, " +
                                    std::to_string(n_points) + "]");
    }
}

}  // namespace

double grid_sin(GridIndex n, std::uint32_t n_points) {
    check_grid_index(n, n_points);
    return -1.0 + 2.0 * (n - 1) / double(n_points);
}

std::vector<double> grid_angles(std::uint32_t n_points) {
    std::vector<double> angles;
    angles.reserve(n_points);
    for (GridIndex n = 1; n <= n_points; ++n) {
        angles.push_back(std::asin(grid_sin(n, n_points)));
    }
    return angles;
}

std::uint32_t phase_exponent(GridIndex n, std::uint32_t n_points) {
    check_grid_index(n, n_points);
    const std::uint32_t two_n = 2 * n_points;
    return (2 * (n - 1) + n_points) % two_n;  // ≡ 2(n-1) - N (mod 2N)
}

cplx unit_root(std::uint64_t k, std::uint32_t two_n) {
    const double angle = 2.0 * std::numbers::pi * double(k % two_n) / double(two_n);
    return std::polar(1.0, angle);
}

cplx alpha_of_index(GridIndex n, std::uint32_t n_points) {
    return unit_root(phase_exponent(n, n_points), 2 * n_points);
}

Codebook Codebook::build(const ArrayGeometry& geom) {
    Codebook book;
    book.geom_ = geom;
    book.n_ = geom.modulus;
    book.words_ = kernels::PlanarMatrix(geom.m, geom.modulus);

    const std::uint32_t n_points = geom.modulus;
    const std::uint32_t two_n = 2 * n_points;
    const double scale = 1.0 / std::sqrt(double(geom.m));
    for (GridIndex n = 1; n <= n_points; ++n) {
        const std::uint64_t u = phase_exponent(n, n_points);
        for (std::uint32_t m = 0; m < geom.m; ++m) {
            const std::uint64_t k = u * geom.positions[m] % two_n;
            book.words_.set(m, n - 1, scale * unit_root(k, two_n));
        }
    }
    return book;
}

cplx Codebook::entry(GridIndex n, std::uint32_t antenna) const {
    check_grid_index(n, n_);
    if (antenna >= geom_.m) throw std::invalid_argument("antenna index out of range");
    return words_.at(antenna, n - 1);
}

std::vector<cplx> Codebook::word(GridIndex n) const {
    check_grid_index(n, n_);
    std::vector<cplx> w(geom_.m);
    for (std::uint32_t m = 0; m < geom_.m; ++m) w[m] = words_.at(m, n - 1);
    return w;
}

void Codebook::export_csv(std::ostream& out) const {
    out << "n,sin_theta";
    for (std::uint32_t m = 0; m < geom_.m; ++m) {
        out << ",re" << m + 1 << ",im" << m + 1;
    }
    out << '\n';
    for (GridIndex n = 1; n <= n_; ++n) {
        out << n << ',' << grid_sin(n, n_);
        for (std::uint32_t m = 0; m < geom_.m; ++m) {
            const cplx w = words_.at(m, n - 1);
            out << ',' << w.real() << ',' << w.imag();
        }
        out << '\n';
    }
}

}  // namespace ssc
