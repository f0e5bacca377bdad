#pragma once

#include <compare>
#include <string>

namespace rhoext {

// A degree in the representation ring of the order-2 group: a + b*sigma.
struct RODegree {
    int trivial_part = 0;
    int sign_part = 0;

    friend RODegree operator+(RODegree lhs, RODegree rhs) {
        return {lhs.trivial_part + rhs.trivial_part, lhs.sign_part + rhs.sign_part};
    }
    friend RODegree operator-(RODegree lhs, RODegree rhs) {
        return {lhs.trivial_part - rhs.trivial_part, lhs.sign_part - rhs.sign_part};
    }
    friend RODegree operator*(int n, RODegree d) {
        return {n * d.trivial_part, n * d.sign_part};
    }
    auto operator<=>(const RODegree&) const = default;

    int underlying_dimension() const { return trivial_part + sign_part; }
    int fixed_dimension() const { return trivial_part; }
    int coweight() const { return trivial_part - sign_part; }
};

inline RODegree sigma() { return {0, 1}; }
inline RODegree rho() { return {1, 1}; }  // the regular representation 1 + sigma
inline RODegree rho(int k) { return {k, k}; }

// RO degree plus the auxiliary filtrations the spectral-sequence layers sort by.
struct MultiDegree {
    RODegree ro;
    int adams_filtration = 0;
    int bockstein_filtration = 0;  // the a_sigma-adic exponent
    int snaith_weight = 0;

    friend MultiDegree operator+(const MultiDegree& lhs, const MultiDegree& rhs) {
        return {lhs.ro + rhs.ro, lhs.adams_filtration + rhs.adams_filtration,
                lhs.bockstein_filtration + rhs.bockstein_filtration,
                lhs.snaith_weight + rhs.snaith_weight};
    }
    friend MultiDegree operator*(int n, const MultiDegree& d) {
        return {n * d.ro, n * d.adams_filtration, n * d.bockstein_filtration,
                n * d.snaith_weight};
    }
    auto operator<=>(const MultiDegree&) const = default;
};

// Full multidegree of a registered generator name.
//
// Registered families (indices in decimal, e.g. "v2", "tau0"):
//   a_sigma          (0,-1)            bockstein 1
//   u_sigma          (1,-1)            invertible
//   v<i>             (2^i-1)*rho       adams 1
//   t<n>             (2^n-1)*rho + 1   weight 2^n
//   e<k>, k>=1       (2^k-1)*rho       weight 2^k
//   tau<i>           2^i*rho - sigma
//   xi<i>, i>=1      (2^i-1)*rho
//   x<i>, i>=1       (2^i-1, 0)        weight 2^(i-1)   (loop-space classes)
//   w                (0,0)             invertible       (Laurent ring generator)
//   e0               (1,0)                              (Laurent ring generator)
// Throws std::invalid_argument on an unknown name.
MultiDegree degree_of_generator(const std::string& name);

}  // namespace rhoext
