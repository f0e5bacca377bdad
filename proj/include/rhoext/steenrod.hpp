#pragma once

#include <map>
#include <string>
#include <vector>

#include "rhoext/algebra.hpp"

namespace rhoext {

// The dual-Steenrod-type hosts implemented.
enum class HostKind {
    GenuineA,    // (F2[a,u], A): tau_i, xi_i; tau_i^2 = u xi_{i+1} + a tau0 xi_{i+1} + a tau_{i+1}
    BorelA,      // same over F2[a,u^{±}], a-adically truncated
    BorelE,      // (F2[a,u^{±}], E^h): tau_i only; tau_i^2 = a tau_{i+1}
    GrE,         // associated graded of BorelE: tau_i exterior and primitive, no unit twist
    ClassicalA,  // (F2, polynomial xi_i), Milnor coproduct
    ClassicalE,  // (F2, exterior xi_i)
};

// A term of M (x) Gamma^{(x)s}: slot 0 is a module monomial (which carries all
// coefficients), slots 1..s are coefficient-free host monomials. Tensors are
// over the coefficients, with coefficients crossing slots through eta_R.
struct TensorTerm {
    Monomial module;
    std::vector<Monomial> slots;
    auto operator<=>(const TensorTerm&) const = default;
};

struct TensorElement {
    std::vector<TensorTerm> terms;

    static TensorElement zero() { return {}; }
    static TensorElement from(TensorTerm t) { return {{std::move(t)}}; }
    static TensorElement from_terms(std::vector<TensorTerm> ts);  // canonicalizes (F2)
    bool is_zero() const { return terms.empty(); }
    TensorElement plus(const TensorElement& other) const;
    auto operator<=>(const TensorElement&) const = default;
};

// A Hopf algebroid (coefficients, Gamma) with Gamma presented by the host
// generator table over the coefficient ring.
struct HopfAlgebroidSpec {
    std::string name;
    HostKind kind;
    AlgebraPresentation coefficients;
    GeneratorTable host;  // tau<i> and/or xi<i> only
    bool eta_r_twist = false;  // eta_R(u_sigma) = u_sigma + a_sigma tau0
    int a_cap = 1 << 20;       // coefficient a_sigma-exponent truncation (Borel forms)

    // Replacement for g^2 as sum of u^? a^? * host monomial; an entry with an
    // empty list means g^2 = 0 (exterior); no entry means g^2 is free.
    struct SquareTerm {
        int u_exp = 0, a_exp = 0;
        Monomial host;
    };
    std::map<uint32_t, std::vector<SquareTerm>> squares;

    std::optional<uint32_t> tau(int i) const { return host.find("tau" + std::to_string(i)); }
    std::optional<uint32_t> xi(int i) const { return host.find("xi" + std::to_string(i)); }

    // Milnor-type coproduct of a host generator, as a 2-slot tensor over the
    // coefficient module (xi_0 = 1 convention).
    TensorElement coproduct(uint32_t host_gen) const;
};

// Builders. index_cap bounds tau/xi indices.
HopfAlgebroidSpec genuine_dual_steenrod(int index_cap = 5);
HopfAlgebroidSpec borel_dual_steenrod(int index_cap = 5, int a_cap = 16);
HopfAlgebroidSpec borel_exterior(int index_cap = 5, int a_cap = 16);
HopfAlgebroidSpec gr_exterior(int index_cap = 5);
HopfAlgebroidSpec classical_dual_steenrod(int index_cap = 5);
HopfAlgebroidSpec classical_exterior(int index_cap = 5);

// Calculus in M (x) Gamma^{(x)s} for a module algebra M over the host's
// coefficients. All results are normalized: host squares reduced, emerging
// coefficients pushed left through eta_R into the module slot, module
// relations applied, a_sigma-exponents truncated at the host's cap.
class TensorCalc {
  public:
    TensorCalc(const AlgebraPresentation& module, const HopfAlgebroidSpec& host)
        : module_(&module), host_(&host) {}

    const AlgebraPresentation& module() const { return *module_; }
    const HopfAlgebroidSpec& host() const { return *host_; }

    TensorElement normalize(const TensorElement& e) const;
    // Componentwise product (equal slot counts).
    TensorElement multiply_pointwise(const TensorElement& a, const TensorElement& b) const;
    TensorElement times_module(const TensorElement& e, const Element& m) const;
    // Inserts the coefficient u^p a^q immediately left of slot `pos`
    // (pos = 0 multiplies the module) and normalizes. p may be negative only
    // at pos 0 or with an untwisted unit.
    TensorElement insert_coefficient(const TensorTerm& t, int u_exp, int a_exp,
                                     size_t pos) const;
    // Expands slot j (1-based) by the coproduct: slot count grows by one.
    TensorElement coproduct_on_slot(const TensorTerm& t, size_t j) const;
    TensorElement coproduct_on_slot(const TensorElement& e, size_t j) const;
    // Counit on 1-slot elements: keeps terms whose slot is trivial.
    Element counit(const TensorElement& e) const;
    // eta_R of a coefficient element, as a 1-slot tensor (the multiplicative
    // extension of eta_R(a) = a, eta_R(u) = u + a tau0; inverse powers of u
    // are expanded a-adically up to the host's cap).
    TensorElement eta_right(const Element& coefficient) const;

    std::string str(const TensorElement& e) const;

  private:
    friend class ComoduleSpec;
    TensorElement normalize_term(TensorTerm t) const;
    // Moves one factor u from just-left-of-slot `pos` further left.
    TensorElement move_u_left(TensorTerm t, size_t pos) const;
    const AlgebraPresentation* module_;
    const HopfAlgebroidSpec* host_;
};

// x in A^{C2} (1-slot tensor over the genuine coefficients) -> classical
// A_*[u^{±}]: tau_n -> xi_{n+1}/u^{2^n-1}, xi_n -> xi_n^2/u^{2^n-1},
// a -> 0, u -> u. `target` must contain u_sigma and classical xi's.
Element phi_underlying(const TensorElement& x, const HopfAlgebroidSpec& source,
                       const GeneratorTable& target);
// x -> classical A_*[a^{±}]: tau_i -> 0, xi_i -> xi_i/a^{2^i-1}, u -> 0.
Element phi_fixed(const TensorElement& x, const HopfAlgebroidSpec& source,
                  const GeneratorTable& target);

// Target tables for the comparison maps.
GeneratorTable classical_with_u(int index_cap = 5);  // u_sigma^{±}, xi1..cap
GeneratorTable classical_with_a(int index_cap = 5);  // a_sigma^{±}, xi1..cap

}  // namespace rhoext
