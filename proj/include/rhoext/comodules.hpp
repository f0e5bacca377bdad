#pragma once

#include <map>
#include <string>
#include <vector>

#include "rhoext/steenrod.hpp"

namespace rhoext {

// A comodule algebra over a Hopf algebroid host: module presentation plus
// a coaction value (1-slot tensor) for each non-coefficient generator.
// Coefficients coact through the right unit.
struct ComoduleSpec {
    std::string name;
    AlgebraPresentation module;
    HopfAlgebroidSpec host;
    std::map<uint32_t, TensorElement> coaction_of;
    // Dyer-Lashof operations are additive only on classes coming from an
    // E-infinity structure; term-by-term application is refused otherwise.
    bool underlies_e_infty = false;

    TensorCalc calc() const { return TensorCalc(module, host); }
    // Multiplicative extension of the generator coactions; coefficients
    // (powers of u_sigma, a_sigma) pass through eta_R.
    TensorElement coact(const Element& e) const;
    // Applies the coaction to the module part of a tensor, splicing the new
    // host slot in first: m (x) gamma -> psi(m) (x) gamma.
    TensorElement coact_left(const TensorTerm& t) const;
    TensorElement coact_left(const TensorElement& e) const;
};

// The loop-space comodule algebra: coefficients[t_n, e_k] with
// t_n^2 = a t_{n+1} + u e_{n+1} (the a-term drops in the associated graded),
// closed-form coactions psi(t_k) = t_k (x) 1 + sum e_{k-j}^{2^j} (x) tau_j and
// psi(e_k) = sum e_{k-j}^{2^j} (x) xi_j. Host kinds: GenuineA, BorelA
// (full), BorelE / GrE (xi-terms dropped).
ComoduleSpec loop_space_comodule(HostKind kind, int index_cap = 5, int a_cap = 16);

// The classical double-loop-space comodule F2[x_1, x_2, ...] with
// psi(x_i) = sum_{k<i} x_{i-k}^{2^k} (x) xi_k; optionally adjoins an
// invertible degree-(1,-1) coefficient u_sigma (coacting trivially), the
// target of the underlying-restriction comparison.
ComoduleSpec classical_loop_comodule(int index_cap = 5, bool with_u = false);

// Dyer-Lashof operations Q_0, Q_1 with the two-case equivariant Cartan
// formula. Operations are defined only on classes whose degree is 0 or 1
// mod rho (detected by coweight); products of two odd-shaped factors and
// bare coefficients are refused.
class QOps {
  public:
    const ComoduleSpec* spec = nullptr;
    bool classical = false;  // ordinary Cartan formula, no shape analysis
    std::map<uint32_t, Element> module_rule[2];
    std::map<uint32_t, Element> host_rule[2];

    TensorElement q(int eps, const TensorTerm& t) const;
    TensorElement q(int eps, const TensorElement& x) const;  // needs E-infinity flag
    Element q_module(int eps, const Element& x) const;       // module-only convenience

  private:
    struct Atom {
        int slot;  // -1 for a module factor, otherwise 0-based slot index
        uint32_t gen;
    };
    std::pair<TensorElement, TensorElement> q_list(const std::vector<Atom>& atoms,
                                                   size_t from, size_t nslots) const;
    TensorElement place(const Atom& a, const Element& value, size_t nslots) const;
    int shape_of(const Atom& a) const;
};

// Q_0(e_k) = e_k^2, Q_1(e_k) = 0, Q_0(t_n) = e_{n+1}, Q_1(t_n) = t_{n+1};
// on the host: Q_0(tau_k) = xi_{k+1}, Q_1(tau_k) = tau_{k+1} + tau0 xi_{k+1},
// Q_0(xi_j) = xi_j^2, Q_1(xi_j) = 0. Requires a host carrying xi's.
QOps equivariant_dl_ops(const ComoduleSpec& spec);
// Classical replay: Q_0 squares, Q_1(x_i) = x_{i+1},
// Q_1(xi_k) = xi_{k+1} + xi_1 xi_k^2.
QOps classical_dl_ops(const ComoduleSpec& spec);

// Bottom-cell coaction data of the quadratic extended powers: the free
// square of an even-shaped cell has a primitive top class; for an
// odd-shaped cell the top class coacts with an extra (1 (x) tau0) times the
// squared bottom class.
struct ExtendedPowerTable {
    struct Row {
        int source_shape;       // bottom cell degree mod rho: 0 or 1
        bool tau0_correction;   // extra (1 (x) tau0) * Q_0-part in the coaction
    };
    std::vector<Row> rows;
    static ExtendedPowerTable standard();
    bool correction_for_shape(int shape) const;
};

// Rebuilds the coactions of t_k, e_k from the primitive bottom class t_0 by
// the operation recursion psi(e_{k+1}) = Q_0 psi(t_k),
// psi(t_{k+1}) = Q_1 psi(t_k) + [correction] Q_0 psi(t_k) * (1 (x) tau0).
std::map<std::string, TensorElement> derive_coaction(const ComoduleSpec& spec,
                                                     const QOps& ops,
                                                     const ExtendedPowerTable& table,
                                                     int index_cap);

// Classical replay of the same recursion:
// psi(x_{i+1}) = Q_1 psi(x_i) + (1 (x) xi_1) Q_0 psi(x_i).
std::map<std::string, TensorElement> derive_classical_coaction(const ComoduleSpec& spec,
                                                               const QOps& ops,
                                                               int index_cap);

// Transports an equivariant tensor along the underlying comparison:
// module generators via `images` (an empty element kills the term), host
// tau_n -> xi_{n+1} u^{-(2^n-1)}, xi_n -> xi_n^2 u^{-(2^n-1)}, with the u's
// landing in the classical module's coefficient.
TensorElement map_underlying(const TensorElement& x, const ComoduleSpec& source,
                             const ComoduleSpec& target,
                             const std::map<uint32_t, Element>& images);

// Solves the u-power in t_k -> x_{k+1} u^{g}, e_k -> x_k^2 u^{g} by brute
// force over g in [lo, hi], requiring the coaction square to commute; throws
// unless exactly one exponent works per generator.
std::map<std::string, int> solve_underlying_restriction(const ComoduleSpec& eq,
                                                        const ComoduleSpec& cl,
                                                        int index_cap, int lo = -40,
                                                        int hi = 8);

}  // namespace rhoext
