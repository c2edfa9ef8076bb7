#include "ssc/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ssc/gf.hpp"

namespace ssc {

ArrayGeometry bose_chowla_set(std::uint32_t m) {
    if (m < 2 || !gf::is_prime(m)) {
        throw std::invalid_argument("antenna count must be prime (>= 2), got " +
                                    std::to_string(m));
    }
    const gf::QuadraticField field(m);
    const gf::Element theta = field.primitive_element();
    const std::uint32_t n = m * m - 1;

    // a belongs to the set iff theta^a - theta lies in the base field,
    // i.e. the x-coefficients agree. Walk the powers of theta once.
    ArrayGeometry geom;
    geom.m = m;
    geom.modulus = n;
    gf::Element power = theta;
    for (std::uint32_t a = 1; a < n; ++a) {
        if (power.c1 == theta.c1) geom.positions.push_back(a);
        power = field.mul(power, theta);
    }
    if (geom.positions.size() != m) {
        throw std::logic_error("Bose-Chowla construction yielded " +
                               std::to_string(geom.positions.size()) + " elements, expected " +
                               std::to_string(m));
    }
    std::sort(geom.positions.begin(), geom.positions.end());
    if (!verify_sidon(geom)) {
        throw std::logic_error("Bose-Chowla construction failed the Sidon check");
    }
    return geom;
}

bool verify_sidon(const ArrayGeometry& geom) {
    const std::uint32_t n = geom.modulus;
    if (n == 0) return false;
    std::vector<std::uint8_t> seen(n, 0);
    for (std::size_t a = 0; a < geom.positions.size(); ++a) {
        for (std::size_t b = 0; b < geom.positions.size(); ++b) {
            if (a == b) continue;
            const std::uint32_t pa = geom.positions[a] % n;
            const std::uint32_t pb = geom.positions[b] % n;
            const std::uint32_t diff = (pa + n - pb) % n;
            if (seen[diff]) return false;
            seen[diff] = 1;
        }
    }
    return true;
}

void validate_geometry(const ArrayGeometry& geom) {
    if (geom.m < 2) throw std::invalid_argument("geometry invariant violated: M >= 2");
    if (geom.positions.size() != geom.m) {
        throw std::invalid_argument("geometry invariant violated: |positions| = M");
    }
    if (geom.modulus != geom.m * geom.m - 1) {
        throw std::invalid_argument("geometry invariant violated: N = M^2 - 1");
    }
    for (const auto d : geom.positions) {
        if (d == 0) {
            throw std::invalid_argument(
                "geometry invariant violated: position 0 is not allowed");
        }
        if (d >= geom.modulus) {
            throw std::invalid_argument(
                "geometry invariant violated: positions must lie in [1, N)");
        }
    }
    std::vector<std::uint32_t> sorted = geom.positions;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("geometry invariant violated: positions must be distinct");
    }
    if (!verify_sidon(geom)) {
        throw std::invalid_argument(
            "geometry invariant violated: pairwise differences must be distinct (Sidon)");
    }
}

std::optional<std::uint64_t> mod_inverse(std::uint64_t a, std::uint64_t n) {
    if (n == 0) return std::nullopt;
    if (n == 1) return 0;
    // Extended Euclid on (a mod n, n).
    std::int64_t r0 = std::int64_t(n), r1 = std::int64_t(a % n);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t quot = r0 / r1;
        std::int64_t tmp = r0 - quot * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - quot * s1;
        s0 = s1;
        s1 = tmp;
    }
    if (r0 != 1) return std::nullopt;
    if (s0 < 0) s0 += std::int64_t(n);
    return std::uint64_t(s0);
}

std::vector<std::uint32_t> gcd_table(const ArrayGeometry& geom) {
    std::vector<std::uint32_t> table;
    table.reserve(geom.positions.size());
    for (const auto d : geom.positions) {
        table.push_back(std::gcd(d, geom.modulus));
    }
    return table;
}

ArrayGeometry load_geometry(std::istream& in) {
    ArrayGeometry geom;
    if (!(in >> geom.m >> geom.modulus)) {
        throw std::invalid_argument("geometry file: expected header line \"M N\"");
    }
    geom.positions.resize(geom.m);
    for (std::uint32_t i = 0; i < geom.m; ++i) {
        if (!(in >> geom.positions[i])) {
            throw std::invalid_argument("geometry file: expected " + std::to_string(geom.m) +
                                        " positions");
        }
    }
    std::sort(geom.positions.begin(), geom.positions.end());
    validate_geometry(geom);
    return geom;
}

ArrayGeometry load_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open geometry file: " + path);
    return load_geometry(in);
}

void save_geometry(const ArrayGeometry& geom, std::ostream& out) {
    out << geom.m << ' ' << geom.modulus << '\n';
    for (std::size_t i = 0; i < geom.positions.size(); ++i) {
        out << geom.positions[i] << (i + 1 < geom.positions.size() ? ' ' : '\n');
    }
}

}  // namespace ssc
