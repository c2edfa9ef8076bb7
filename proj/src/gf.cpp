#include "ssc/gf.hpp"

#include <stdexcept>
#include <string>

namespace ssc::gf {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

// Monic x^2 + b*x + c is irreducible over GF(q) iff it has no root.
bool quadratic_irreducible(std::uint32_t q, std::uint32_t b, std::uint32_t c) {
    for (std::uint64_t t = 0; t < q; ++t) {
        if ((t * t + b * t + c) % q == 0) return false;
    }
    return true;
}

}  // namespace

QuadraticField::QuadraticField(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) {
        throw std::invalid_argument("field characteristic must be prime, got " +
                                    std::to_string(q));
    }
    // First preference: x^2 - c with the smallest c >= 1 (c a non-residue).
    // Fallback (needed for q = 2): smallest (b, c) with x^2 + b*x + c
    // irreducible.
    bool found = false;
    for (std::uint32_t c = 1; c < q; ++c) {
        if (quadratic_irreducible(q, 0, q - c)) {  // x^2 - c = x^2 + (q - c)
            f1_ = 0;
            f0_ = q - c;
            found = true;
            break;
        }
    }
    if (!found) {
        for (std::uint32_t b = 0; b < q && !found; ++b) {
            for (std::uint32_t c = 0; c < q && !found; ++c) {
                if (quadratic_irreducible(q, b, c)) {
                    f1_ = b;
                    f0_ = c;
                    found = true;
                }
            }
        }
    }
    if (!found) throw std::logic_error("no irreducible quadratic found");
    r1_ = (q_ - f1_) % q_;
    r0_ = (q_ - f0_) % q_;
    theta_ = find_primitive();
}

Element QuadraticField::add(Element a, Element b) const {
    return {(a.c0 + b.c0) % q_, (a.c1 + b.c1) % q_};
}

Element QuadraticField::sub(Element a, Element b) const {
    return {(a.c0 + q_ - b.c0) % q_, (a.c1 + q_ - b.c1) % q_};
}

Element QuadraticField::mul(Element a, Element b) const {
    const std::uint64_t t0 = std::uint64_t(a.c0) * b.c0;
    const std::uint64_t t1 = std::uint64_t(a.c0) * b.c1 + std::uint64_t(a.c1) * b.c0;
    const std::uint64_t t2 = std::uint64_t(a.c1) * b.c1;
    // x^2 ≡ r1*x + r0
    const std::uint64_t c0 = (t0 + t2 % q_ * r0_) % q_;
    const std::uint64_t c1 = (t1 + t2 % q_ * r1_) % q_;
    return {std::uint32_t(c0), std::uint32_t(c1)};
}

Element QuadraticField::pow(Element a, std::uint64_t e) const {
    Element result = one();
    Element base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Element QuadraticField::inverse(Element a) const {
    if (a == zero()) throw std::domain_error("zero has no inverse");
    return pow(a, group_order() - 1);
}

Element QuadraticField::find_primitive() const {
    const std::uint64_t order = group_order();
    const auto primes = distinct_prime_factors(order);
    for (std::uint32_t c1 = 0; c1 < q_; ++c1) {
        for (std::uint32_t c0 = 0; c0 < q_; ++c0) {
            const Element cand{c0, c1};
            if (cand == zero()) continue;
            bool primitive = true;
            for (const auto p : primes) {
                if (pow(cand, order / p) == one()) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) return cand;
        }
    }
    throw std::logic_error("no primitive element found; reduction polynomial not irreducible?");
}

}  // namespace ssc::gf
