#pragma once

#include <optional>
#include <vector>

#include "rhoext/comodules.hpp"

namespace rhoext {

// Reduced (normalized) cobar complex of a comodule algebra: an s-cochain is
// an element of M (x) Gamma-bar^{(x)s}, terms with any trivial slot dropped.
// The internal RO degree of a term is the degree of the module part plus the
// degrees of all slot monomials; the differential preserves it.
class Cobar {
  public:
    explicit Cobar(const ComoduleSpec& spec) : spec_(&spec) {}
    const ComoduleSpec& spec() const { return *spec_; }

    // Drops terms with a trivial tensor slot.
    TensorElement reduce(const TensorElement& x) const;
    // d = (coaction on the module part) + (coproduct on each slot), reduced.
    TensorElement d(const TensorElement& x) const;
    // Cochain-level product: x * y twists y's module part across x's slots
    // through the iterated coaction. Associative, Leibniz-compatible with d.
    TensorElement product(const TensorElement& x, const TensorElement& y) const;

    RODegree internal_degree(const TensorTerm& t) const;
    // Common internal degree and slot count of a nonzero cochain (throws on
    // mixed input).
    std::pair<RODegree, int> bidegree(const TensorElement& x) const;

    // All reduced-cobar basis tensors with s slots and internal degree D.
    // Exact within the window caps (module weight, a-exponent, per-generator
    // caps); the slot budget is derived from D, so nothing in degree is lost.
    std::vector<TensorTerm> basis(RODegree D, int s, const TruncationWindow& win) const;

  private:
    std::vector<Monomial> host_monomials(int trivial_budget) const;
    const ComoduleSpec* spec_;
};

// Cohomology of one (internal degree, cohomological filtration) spot.
struct ExtSlice {
    std::vector<TensorTerm> basis;           // cochain basis at (D, s)
    size_t cocycle_dim = 0;
    size_t boundary_dim = 0;
    size_t dimension() const { return cocycle_dim - boundary_dim; }
    std::vector<TensorElement> representatives;  // cocycles spanning Ext
};

ExtSlice ext_slice(const Cobar& cobar, RODegree D, int s, const TruncationWindow& win);

// Finds a cochain with d(candidate) = target (one filtration down), if any.
std::optional<TensorElement> solve_boundary(const Cobar& cobar, const TensorElement& target,
                                            const TruncationWindow& win);

// Triple Massey product <x, y, z> of cocycles with x y and y z cobounding:
// representative u z + x w with d(u) = x y, d(w) = y z. The indeterminacy
// x Ext + Ext z is reported as a dimension, not resolved away.
struct MasseyResult {
    bool defined = false;
    TensorElement representative;
    std::vector<TensorElement> indeterminacy;  // spanning set of x Ext + Ext z
    size_t indeterminacy_dim = 0;
};
MasseyResult massey_triple(const Cobar& cobar, const TensorElement& x,
                           const TensorElement& y, const TensorElement& z,
                           const TruncationWindow& win);

// Checks that [tau_n] * e_1^{2^{n+1}-1} is a coboundary and returns a
// primitive (the degree-vanishing family of relations in low filtration).
std::optional<TensorElement> verify_vanishing_relation(const Cobar& cobar, int n,
                                                       const TruncationWindow& win);

}  // namespace rhoext
