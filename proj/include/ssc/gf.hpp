#pragma once

#include <cstdint>
#include <vector>

namespace ssc::gf {

/// Element of GF(q^2), written c1*x + c0 over GF(q). Coefficients are kept
/// reduced mod q.
struct Element {
    std::uint32_t c0 = 0;
    std::uint32_t c1 = 0;

    friend bool operator==(const Element&, const Element&) = default;
};

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

/// GF(q^2) = GF(q)[x] / (f(x)) for a fixed monic irreducible quadratic f,
/// q prime. The reduction polynomial and the primitive element are found by
/// deterministic search, so the same q always yields the same field and the
/// same generator.
class QuadraticField {
public:
    /// Throws std::invalid_argument unless q is prime.
    explicit QuadraticField(std::uint32_t q);

    std::uint32_t q() const { return q_; }
    std::uint64_t group_order() const { return std::uint64_t(q_) * q_ - 1; }

    /// f(x) = x^2 + f1*x + f0 (coefficients mod q).
    std::uint32_t f0() const { return f0_; }
    std::uint32_t f1() const { return f1_; }

    Element zero() const { return {0, 0}; }
    Element one() const { return {1, 0}; }

    Element add(Element a, Element b) const;
    Element sub(Element a, Element b) const;
    Element mul(Element a, Element b) const;
    Element pow(Element a, std::uint64_t e) const;
    /// Throws std::domain_error on zero.
    Element inverse(Element a) const;

    /// Generator of the multiplicative group: order exactly q^2 - 1.
    /// Found once at construction by ascending (c1, c0) search; throws
    /// std::logic_error if no candidate passes (would mean f is reducible).
    Element primitive_element() const { return theta_; }

private:
    Element find_primitive() const;

    std::uint32_t q_ = 0;
    std::uint32_t f0_ = 0, f1_ = 0;
    std::uint32_t r0_ = 0, r1_ = 0;  // x^2 ≡ r1*x + r0 mod f
    Element theta_;
};

}  // namespace ssc::gf
