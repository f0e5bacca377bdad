#include "rhoext/ext.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "rhoext/gf2.hpp"

namespace rhoext {

// ---------- cochain calculus ----------

TensorElement Cobar::reduce(const TensorElement& x) const {
    std::vector<TensorTerm> kept;
    for (const auto& t : x.terms) {
        bool trivial_slot = false;
        for (const auto& s : t.slots)
            if (s.is_one()) trivial_slot = true;
        if (!trivial_slot) kept.push_back(t);
    }
    return TensorElement::from_terms(std::move(kept));
}

TensorElement Cobar::d(const TensorElement& x) const {
    TensorCalc calc = spec_->calc();
    TensorElement out;
    for (const auto& t : x.terms) {
        out = out.plus(spec_->coact_left(t));
        for (size_t i = 1; i <= t.slots.size(); ++i)
            out = out.plus(calc.coproduct_on_slot(t, i));
    }
    return reduce(out);
}

TensorElement Cobar::product(const TensorElement& x, const TensorElement& y) const {
    TensorCalc calc = spec_->calc();
    std::vector<TensorTerm> raw;
    for (const auto& xt : x.terms) {
        size_t s = xt.slots.size();
        for (const auto& yt : y.terms) {
            // Iterated coaction of the right module part across x's slots.
            TensorElement iter = TensorElement::from(TensorTerm{yt.module, {}});
            for (size_t k = 0; k < s; ++k) iter = spec_->coact_left(iter);
            for (const auto& w : iter.terms) {
                TensorTerm nt;
                nt.module = xt.module.times(w.module);
                for (size_t i = 0; i < s; ++i)
                    nt.slots.push_back(xt.slots[i].times(w.slots[i]));
                nt.slots.insert(nt.slots.end(), yt.slots.begin(), yt.slots.end());
                raw.push_back(std::move(nt));
            }
        }
    }
    return calc.normalize(TensorElement::from_terms(std::move(raw)));
}

RODegree Cobar::internal_degree(const TensorTerm& t) const {
    RODegree d = t.module.degree(spec_->module.table).ro;
    for (const auto& s : t.slots) d = d + s.degree(spec_->host.host).ro;
    return d;
}

std::pair<RODegree, int> Cobar::bidegree(const TensorElement& x) const {
    if (x.is_zero()) throw std::invalid_argument("bidegree of zero cochain");
    RODegree d = internal_degree(x.terms[0]);
    int s = static_cast<int>(x.terms[0].slots.size());
    for (const auto& t : x.terms)
        if (internal_degree(t) != d || static_cast<int>(t.slots.size()) != s)
            throw std::invalid_argument("cochain is not bihomogeneous");
    return {d, s};
}

// ---------- basis enumeration ----------

std::vector<Monomial> Cobar::host_monomials(int trivial_budget) const {
    const GeneratorTable& host = spec_->host.host;
    std::vector<Monomial> out;
    std::vector<std::pair<uint32_t, int>> current;
    auto rec = [&](auto&& self, uint32_t g, int budget) -> void {
        if (g == host.size()) {
            if (!current.empty()) {
                Monomial m;
                m.factors = current;
                out.push_back(std::move(m));
            }
            return;
        }
        int trivial = host.gen(g).degree.ro.trivial_part;
        int cap = spec_->host.squares.count(g) ? 1 : budget / trivial;
        self(self, g + 1, budget);
        for (int e = 1; e <= cap && e * trivial <= budget; ++e) {
            current.push_back({g, e});
            self(self, g + 1, budget - e * trivial);
            current.pop_back();
        }
    };
    rec(rec, 0, trivial_budget);
    return out;
}

std::vector<TensorTerm> Cobar::basis(RODegree D, int s, const TruncationWindow& win) const {
    int budget = D.underlying_dimension() + win.a_exponent_cap + win.weight_cap;
    if (budget < s) return {};
    std::vector<Monomial> host = host_monomials(budget);
    const GeneratorTable& host_tbl = spec_->host.host;
    std::vector<TensorTerm> out;
    std::vector<Monomial> slots;
    auto rec = [&](auto&& self, int slot, int left, RODegree rest) -> void {
        if (slot == s) {
            for (const auto& m : basis_slice(spec_->module, rest, win)) {
                TensorTerm t;
                t.module = m;
                t.slots = slots;
                out.push_back(std::move(t));
            }
            return;
        }
        for (const auto& g : host) {
            int trivial = g.degree(host_tbl).ro.trivial_part;
            if (trivial > left - (s - slot - 1)) continue;  // later slots need >= 1 each
            slots.push_back(g);
            self(self, slot + 1, left - trivial, rest - g.degree(host_tbl).ro);
            slots.pop_back();
        }
    };
    rec(rec, 0, budget, D);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------- Ext slices ----------

namespace {

GF2Vector coordinates(const TensorElement& x, const std::map<TensorTerm, size_t>& index) {
    GF2Vector v(index.size());
    for (const auto& t : x.terms) {
        auto it = index.find(t);
        if (it == index.end())
            throw std::runtime_error("differential image leaves the enumerated basis");
        v.flip(it->second);
    }
    return v;
}

std::map<TensorTerm, size_t> index_of(const std::vector<TensorTerm>& basis) {
    std::map<TensorTerm, size_t> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    return index;
}

}  // namespace

ExtSlice ext_slice(const Cobar& cobar, RODegree D, int s, const TruncationWindow& win) {
    ExtSlice slice;
    slice.basis = cobar.basis(D, s, win);
    auto target_index = index_of(cobar.basis(D, s + 1, win));
    auto here_index = index_of(slice.basis);

    GF2Matrix d_here{target_index.size(), {}};
    for (const auto& t : slice.basis)
        d_here.add_row(coordinates(cobar.d(TensorElement::from(t)), target_index));
    std::vector<GF2Vector> kernel = d_here.kernel_basis();
    slice.cocycle_dim = kernel.size();

    GF2RowSpace boundaries(slice.basis.size());
    if (s > 0)
        for (const auto& t : cobar.basis(D, s - 1, win))
            boundaries.insert(coordinates(cobar.d(TensorElement::from(t)), here_index));
    slice.boundary_dim = boundaries.rank();

    for (const auto& k : kernel) {
        if (boundaries.contains(k)) continue;
        boundaries.insert(k);
        std::vector<TensorTerm> terms;
        for (size_t i = 0; i < slice.basis.size(); ++i)
            if (k.get(i)) terms.push_back(slice.basis[i]);
        slice.representatives.push_back(TensorElement::from_terms(std::move(terms)));
    }
    return slice;
}

std::optional<TensorElement> solve_boundary(const Cobar& cobar, const TensorElement& target,
                                            const TruncationWindow& win) {
    if (target.is_zero()) return TensorElement::zero();
    auto [D, s] = cobar.bidegree(target);
    if (s == 0) return std::nullopt;
    auto target_index = index_of(cobar.basis(D, s, win));
    std::vector<TensorTerm> source = cobar.basis(D, s - 1, win);
    GF2Matrix m{target_index.size(), {}};
    for (const auto& t : source)
        m.add_row(coordinates(cobar.d(TensorElement::from(t)), target_index));
    auto sol = m.solve(coordinates(target, target_index));
    if (!sol) return std::nullopt;
    std::vector<TensorTerm> terms;
    for (size_t i = 0; i < source.size(); ++i)
        if (sol->get(i)) terms.push_back(source[i]);
    return TensorElement::from_terms(std::move(terms));
}

MasseyResult massey_triple(const Cobar& cobar, const TensorElement& x,
                           const TensorElement& y, const TensorElement& z,
                           const TruncationWindow& win) {
    MasseyResult res;
    if (!cobar.d(x).is_zero() || !cobar.d(y).is_zero() || !cobar.d(z).is_zero())
        return res;
    auto u = solve_boundary(cobar, cobar.product(x, y), win);
    auto w = solve_boundary(cobar, cobar.product(y, z), win);
    if (!u || !w) return res;
    res.defined = true;
    res.representative = cobar.product(*u, z).plus(cobar.product(x, *w));
    if (!cobar.d(res.representative).is_zero())
        throw std::runtime_error("Massey representative is not a cocycle");

    // Indeterminacy x * Ext + Ext * z at the representative's bidegree.
    if (res.representative.is_zero()) return res;
    auto [D, s] = cobar.bidegree(res.representative);
    auto [Dx, sx] = cobar.bidegree(x);
    auto [Dz, sz] = cobar.bidegree(z);
    std::vector<TensorElement> span;
    for (const auto& h : ext_slice(cobar, D - Dx, s - sx, win).representatives)
        span.push_back(cobar.product(x, h));
    for (const auto& h : ext_slice(cobar, D - Dz, s - sz, win).representatives)
        span.push_back(cobar.product(h, z));
    // Products may leave the reporting window (weight adds up), so index the
    // span by its own terms.
    std::map<TensorTerm, size_t> index;
    for (const auto& e : span)
        for (const auto& t : e.terms) index.emplace(t, index.size());
    GF2RowSpace space(index.size());
    for (const auto& e : span)
        if (!e.is_zero() && space.insert(coordinates(e, index)))
            res.indeterminacy.push_back(e);
    res.indeterminacy_dim = space.rank();
    return res;
}

std::optional<TensorElement> verify_vanishing_relation(const Cobar& cobar, int n,
                                                       const TruncationWindow& win) {
    const auto& spec = cobar.spec();
    TensorElement target = TensorElement::from(TensorTerm{
        Monomial::gen(spec.module.table.id("e1"), (1 << (n + 1)) - 1),
        {Monomial::gen(spec.host.host.id("tau" + std::to_string(n)))}});
    target = spec.calc().normalize(target);
    auto primitive = solve_boundary(cobar, target, win);
    if (primitive && cobar.d(*primitive) != target)
        throw std::runtime_error("solver returned a non-primitive");
    return primitive;
}

}  // namespace rhoext
