#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ssc {

/// Sparse-array geometry: M distinct antenna positions forming a difference
/// set (Sidon set) in Z_N with N = M^2 - 1. Positions are canonicalized
/// ascending and live in [1, N); position 0 is rejected (degenerate antenna,
/// gcd(0, N) = N).
struct ArrayGeometry {
    std::uint32_t m = 0;
    std::uint32_t modulus = 0;
    std::vector<std::uint32_t> positions;
};

/// Bose-Chowla Sidon set of size m in Z_{m^2-1}: the discrete logs
/// { a : theta^a - theta in GF(m) } for a deterministic primitive theta of
/// GF(m^2). Throws std::invalid_argument unless m is a prime >= 2 and
/// std::logic_error if the construction fails its own Sidon check.
ArrayGeometry bose_chowla_set(std::uint32_t m);

/// True iff all M(M-1) ordered pairwise differences mod N are distinct.
bool verify_sidon(const ArrayGeometry& geom);

/// Full invariant check (position count/range/distinctness, no zero
/// position, N = M^2 - 1, Sidon property). Throws std::invalid_argument
/// naming the violated invariant.
void validate_geometry(const ArrayGeometry& geom);

/// x in [0, n) with a*x ≡ 1 (mod n), or nullopt when gcd(a, n) != 1.
std::optional<std::uint64_t> mod_inverse(std::uint64_t a, std::uint64_t n);

/// gcd(d_m, N) per antenna.
std::vector<std::uint32_t> gcd_table(const ArrayGeometry& geom);

/// Geometry file format: line 1 = "M N", line 2 = M space-separated
/// positions. Loaders validate the full invariant set.
ArrayGeometry load_geometry(std::istream& in);
ArrayGeometry load_geometry_file(const std::string& path);
void save_geometry(const ArrayGeometry& geom, std::ostream& out);

}  // namespace ssc
