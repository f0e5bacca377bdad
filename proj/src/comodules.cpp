#include "rhoext/comodules.hpp"

#include <stdexcept>

namespace rhoext {

// ---------- ComoduleSpec ----------

TensorElement ComoduleSpec::coact(const Element& e) const {
    TensorCalc c = calc();
    auto u_id = module.table.find("u_sigma");
    auto a_id = module.table.find("a_sigma");
    TensorElement out;
    for (const auto& mono : e.terms) {
        Monomial coeff;
        TensorElement acc;  // set below
        bool started = false;
        for (auto [g, exp] : mono.factors) {
            if ((u_id && g == *u_id) || (a_id && g == *a_id)) {
                coeff = coeff.times(Monomial::gen(g, exp));
                continue;
            }
            auto it = coaction_of.find(g);
            if (it == coaction_of.end())
                throw std::invalid_argument("no coaction for generator " +
                                            module.table.gen(g).name);
            if (exp < 0)
                throw std::invalid_argument("negative power of non-coefficient generator");
            for (int k = 0; k < exp; ++k)
                acc = started ? c.multiply_pointwise(acc, it->second)
                              : (started = true, it->second);
        }
        TensorElement unit = c.eta_right(Element::from(coeff));
        acc = started ? c.multiply_pointwise(unit, acc) : unit;
        out = out.plus(acc);
    }
    return out;
}

TensorElement ComoduleSpec::coact_left(const TensorTerm& t) const {
    TensorElement psi = coact(Element::from(t.module));
    std::vector<TensorTerm> out;
    for (const auto& p : psi.terms) {
        TensorTerm nt;
        nt.module = p.module;
        nt.slots.push_back(p.slots[0]);
        nt.slots.insert(nt.slots.end(), t.slots.begin(), t.slots.end());
        out.push_back(std::move(nt));
    }
    return calc().normalize(TensorElement::from_terms(std::move(out)));
}

TensorElement ComoduleSpec::coact_left(const TensorElement& e) const {
    TensorElement out;
    for (const auto& t : e.terms) out = out.plus(coact_left(t));
    return out;
}

// ---------- builders ----------

ComoduleSpec loop_space_comodule(HostKind kind, int index_cap, int a_cap) {
    ComoduleSpec spec;
    spec.underlies_e_infty = true;
    switch (kind) {
        case HostKind::GenuineA:
            spec.name = "genuine_loop_space";
            spec.host = genuine_dual_steenrod(index_cap);
            break;
        case HostKind::BorelA:
            spec.name = "borel_loop_space";
            spec.host = borel_dual_steenrod(index_cap, a_cap);
            break;
        case HostKind::BorelE:
            spec.name = "borel_exterior_loop_space";
            spec.host = borel_exterior(index_cap, a_cap);
            break;
        case HostKind::GrE:
            spec.name = "gr_loop_space";
            spec.host = gr_exterior(index_cap);
            break;
        default:
            throw std::invalid_argument("loop_space_comodule needs an equivariant host");
    }
    auto& tbl = spec.module.table;
    tbl.add("a_sigma");
    tbl.add("u_sigma", kind != HostKind::GenuineA);
    for (int k = 0; k <= index_cap; ++k) tbl.add("t" + std::to_string(k));
    for (int k = 1; k <= index_cap; ++k) tbl.add("e" + std::to_string(k));
    for (int k = 0; k + 1 <= index_cap; ++k) {
        std::string next = std::to_string(k + 1);
        if (kind == HostKind::GrE)
            spec.module.rw.add("t" + std::to_string(k) + "^2", "u_sigma*e" + next);
        else
            spec.module.rw.add("t" + std::to_string(k) + "^2",
                               "a_sigma*t" + next + " + u_sigma*e" + next);
    }
    bool has_xi = kind == HostKind::GenuineA || kind == HostKind::BorelA;
    for (int k = 0; k <= index_cap; ++k) {
        // psi(t_k) = t_k (x) 1 + sum_{j<k} e_{k-j}^{2^j} (x) tau_j
        std::vector<TensorTerm> terms;
        terms.push_back({Monomial::gen(tbl.id("t" + std::to_string(k))), {Monomial::one()}});
        for (int j = 0; j < k; ++j)
            terms.push_back({Monomial::gen(tbl.id("e" + std::to_string(k - j)), 1 << j),
                             {Monomial::gen(spec.host.host.id("tau" + std::to_string(j)))}});
        spec.coaction_of[tbl.id("t" + std::to_string(k))] =
            TensorElement::from_terms(std::move(terms));
    }
    for (int k = 1; k <= index_cap; ++k) {
        // psi(e_k) = sum_{j<k} e_{k-j}^{2^j} (x) xi_j (only j = 0 without xi's)
        std::vector<TensorTerm> terms;
        terms.push_back({Monomial::gen(tbl.id("e" + std::to_string(k))), {Monomial::one()}});
        if (has_xi)
            for (int j = 1; j < k; ++j)
                terms.push_back(
                    {Monomial::gen(tbl.id("e" + std::to_string(k - j)), 1 << j),
                     {Monomial::gen(spec.host.host.id("xi" + std::to_string(j)))}});
        spec.coaction_of[tbl.id("e" + std::to_string(k))] =
            TensorElement::from_terms(std::move(terms));
    }
    return spec;
}

ComoduleSpec classical_loop_comodule(int index_cap, bool with_u) {
    ComoduleSpec spec;
    spec.name = "classical_loop_space";
    spec.underlies_e_infty = true;
    spec.host = classical_dual_steenrod(index_cap);
    auto& tbl = spec.module.table;
    if (with_u) tbl.add("u_sigma", true);
    for (int i = 1; i <= index_cap; ++i) tbl.add("x" + std::to_string(i));
    for (int i = 1; i <= index_cap; ++i) {
        std::vector<TensorTerm> terms;
        for (int k = 0; k < i; ++k) {
            Monomial slot = k == 0
                                ? Monomial::one()
                                : Monomial::gen(spec.host.host.id("xi" + std::to_string(k)));
            terms.push_back({Monomial::gen(tbl.id("x" + std::to_string(i - k)), 1 << k),
                             {slot}});
        }
        spec.coaction_of[tbl.id("x" + std::to_string(i))] =
            TensorElement::from_terms(std::move(terms));
    }
    return spec;
}

// ---------- Dyer-Lashof operations ----------

TensorElement QOps::place(const Atom& a, const Element& value, size_t nslots) const {
    std::vector<TensorTerm> out;
    for (const auto& m : value.terms) {
        TensorTerm t;
        t.slots.assign(nslots, Monomial::one());
        if (a.slot < 0) t.module = m;
        else t.slots[a.slot] = m;
        out.push_back(std::move(t));
    }
    return TensorElement::from_terms(std::move(out));
}

int QOps::shape_of(const Atom& a) const {
    const GeneratorTable& tbl = a.slot < 0 ? spec->module.table : spec->host.host;
    return tbl.gen(a.gen).degree.ro.coweight();
}

std::pair<TensorElement, TensorElement> QOps::q_list(const std::vector<Atom>& atoms,
                                                     size_t from, size_t nslots) const {
    TensorCalc calc = spec->calc();
    if (from == atoms.size()) {
        TensorTerm unit;
        unit.slots.assign(nslots, Monomial::one());
        return {TensorElement::from(unit), TensorElement::zero()};
    }
    const Atom& head = atoms[from];
    const auto& rules = head.slot < 0 ? module_rule : host_rule;
    auto lookup = [&](int eps) -> const Element& {
        auto it = rules[eps].find(head.gen);
        if (it == rules[eps].end()) {
            const GeneratorTable& tbl = head.slot < 0 ? spec->module.table : spec->host.host;
            throw std::invalid_argument("no Dyer-Lashof rule for " + tbl.gen(head.gen).name);
        }
        return it->second;
    };
    TensorElement x0 = place(head, lookup(0), nslots);
    TensorElement x1 = place(head, lookup(1), nslots);
    if (from + 1 == atoms.size()) return {calc.normalize(x0), calc.normalize(x1)};
    auto [y0, y1] = q_list(atoms, from + 1, nslots);

    auto mul = [&](const TensorElement& a, const TensorElement& b) {
        return calc.multiply_pointwise(a, b);
    };
    if (classical)
        return {mul(x0, y0), mul(x1, y0).plus(mul(x0, y1))};

    auto coeff = [&](const char* name, const TensorElement& e) {
        return calc.times_module(e, parse_element(name, spec->module.table));
    };
    int sx = shape_of(head);
    int sy = 0;
    for (size_t i = from + 1; i < atoms.size(); ++i) sy += shape_of(atoms[i]);
    if (sx == 0 && sy == 0) {
        TensorElement q0 = mul(x0, y0);
        TensorElement q1 =
            mul(x1, y0).plus(mul(x0, y1)).plus(coeff("a_sigma", mul(x1, y1)));
        return {q0, q1};
    }
    if (sx == 0 && sy == 1) {
        TensorElement q0 = mul(x0, y0).plus(coeff("a_sigma", mul(x1, y0)));
        TensorElement q1 = mul(x0, y1).plus(coeff("u_sigma", mul(x1, y0)));
        return {q0, q1};
    }
    if (sx == 1 && sy == 0) {
        TensorElement q0 = mul(x0, y0).plus(coeff("a_sigma", mul(x0, y1)));
        TensorElement q1 = mul(x1, y0).plus(coeff("u_sigma", mul(x0, y1)));
        return {q0, q1};
    }
    throw std::invalid_argument(
        "no Cartan rule: factor shapes must be 0 or 1 mod rho and not both odd");
}

TensorElement QOps::q(int eps, const TensorTerm& t) const {
    auto u_id = spec->module.table.find("u_sigma");
    auto a_id = spec->module.table.find("a_sigma");
    std::vector<Atom> atoms;
    for (auto [g, e] : t.module.factors) {
        if ((u_id && g == *u_id) || (a_id && g == *a_id))
            throw std::invalid_argument("Dyer-Lashof operations are undefined on " +
                                        spec->module.table.gen(g).name);
        if (e < 0) throw std::invalid_argument("negative exponent under a Dyer-Lashof op");
        for (int k = 0; k < e; ++k) atoms.push_back({-1, g});
    }
    for (size_t s = 0; s < t.slots.size(); ++s)
        for (auto [g, e] : t.slots[s].factors)
            for (int k = 0; k < e; ++k) atoms.push_back({static_cast<int>(s), g});
    auto [q0, q1] = q_list(atoms, 0, t.slots.size());
    return spec->calc().normalize(eps == 0 ? q0 : q1);
}

TensorElement QOps::q(int eps, const TensorElement& x) const {
    if (x.terms.size() > 1 && !spec->underlies_e_infty)
        throw std::invalid_argument(
            "term-by-term Dyer-Lashof application needs an E-infinity refinement");
    TensorElement out;
    for (const auto& t : x.terms) out = out.plus(q(eps, t));
    return out;
}

Element QOps::q_module(int eps, const Element& x) const {
    std::vector<TensorTerm> in;
    for (const auto& m : x.terms) in.push_back({m, {}});
    TensorElement res = q(eps, TensorElement::from_terms(std::move(in)));
    std::vector<Monomial> out;
    for (const auto& t : res.terms) out.push_back(t.module);
    return Element::from_terms(std::move(out));
}

QOps equivariant_dl_ops(const ComoduleSpec& spec) {
    if (!spec.host.xi(1))
        throw std::invalid_argument("equivariant Dyer-Lashof ops need a host with xi's");
    QOps ops;
    ops.spec = &spec;
    const auto& tbl = spec.module.table;
    const auto& host = spec.host.host;
    for (const auto& entry : tbl.entries) {
        if (entry.name.rfind("e", 0) == 0 && entry.name != "e0") {
            uint32_t g = tbl.id(entry.name);
            ops.module_rule[0][g] = Element::from(Monomial::gen(g, 2));
            ops.module_rule[1][g] = Element::zero();
        } else if (entry.name.rfind("t", 0) == 0 && entry.name != "tau0") {
            int n = std::stoi(entry.name.substr(1));
            if (auto e_next = tbl.find("e" + std::to_string(n + 1))) {
                uint32_t g = tbl.id(entry.name);
                ops.module_rule[0][g] = Element::from(Monomial::gen(*e_next));
                ops.module_rule[1][g] =
                    Element::from(Monomial::gen(tbl.id("t" + std::to_string(n + 1))));
            }
        }
    }
    for (const auto& entry : host.entries) {
        uint32_t g = host.id(entry.name);
        if (entry.name.rfind("tau", 0) == 0) {
            int n = std::stoi(entry.name.substr(3));
            if (auto xi_next = host.find("xi" + std::to_string(n + 1))) {
                ops.host_rule[0][g] = Element::from(Monomial::gen(*xi_next));
                ops.host_rule[1][g] = Element::from_terms(
                    {Monomial::gen(host.id("tau" + std::to_string(n + 1))),
                     Monomial::gen(host.id("tau0")).times(Monomial::gen(*xi_next))});
            }
        } else {
            ops.host_rule[0][g] = Element::from(Monomial::gen(g, 2));
            ops.host_rule[1][g] = Element::zero();
        }
    }
    return ops;
}

QOps classical_dl_ops(const ComoduleSpec& spec) {
    QOps ops;
    ops.spec = &spec;
    ops.classical = true;
    const auto& tbl = spec.module.table;
    const auto& host = spec.host.host;
    for (const auto& entry : tbl.entries) {
        if (entry.name.rfind("x", 0) != 0) continue;
        int n = std::stoi(entry.name.substr(1));
        uint32_t g = tbl.id(entry.name);
        ops.module_rule[0][g] = Element::from(Monomial::gen(g, 2));
        if (auto next = tbl.find("x" + std::to_string(n + 1)))
            ops.module_rule[1][g] = Element::from(Monomial::gen(*next));
    }
    for (const auto& entry : host.entries) {
        int n = std::stoi(entry.name.substr(2));
        uint32_t g = host.id(entry.name);
        ops.host_rule[0][g] = Element::from(Monomial::gen(g, 2));
        if (auto next = host.find("xi" + std::to_string(n + 1)))
            ops.host_rule[1][g] = Element::from_terms(
                {Monomial::gen(*next), Monomial::gen(host.id("xi1")).times(Monomial::gen(g, 2))});
    }
    return ops;
}

// ---------- extended-power coaction data ----------

ExtendedPowerTable ExtendedPowerTable::standard() {
    return {{{0, false}, {1, true}}};
}

bool ExtendedPowerTable::correction_for_shape(int shape) const {
    for (const auto& r : rows)
        if (r.source_shape == shape) return r.tau0_correction;
    throw std::invalid_argument("no extended-power row for this shape");
}

// ---------- coaction derivation ----------

std::map<std::string, TensorElement> derive_coaction(const ComoduleSpec& spec,
                                                     const QOps& ops,
                                                     const ExtendedPowerTable& table,
                                                     int index_cap) {
    TensorCalc calc = spec.calc();
    std::map<std::string, TensorElement> out;
    TensorElement psi = TensorElement::from(
        TensorTerm{Monomial::gen(spec.module.table.id("t0")), {Monomial::one()}});
    out["t0"] = psi;
    TensorElement tau0 = TensorElement::from(
        TensorTerm{Monomial::one(), {Monomial::gen(spec.host.host.id("tau0"))}});
    for (int k = 0; k + 1 <= index_cap; ++k) {
        TensorElement q0 = ops.q(0, psi);
        TensorElement q1 = ops.q(1, psi);
        out["e" + std::to_string(k + 1)] = q0;
        TensorElement next = q1;
        if (table.correction_for_shape(1))
            next = next.plus(calc.multiply_pointwise(q0, tau0));
        out["t" + std::to_string(k + 1)] = next;
        psi = std::move(next);
    }
    return out;
}

std::map<std::string, TensorElement> derive_classical_coaction(const ComoduleSpec& spec,
                                                               const QOps& ops,
                                                               int index_cap) {
    TensorCalc calc = spec.calc();
    std::map<std::string, TensorElement> out;
    TensorElement psi = TensorElement::from(
        TensorTerm{Monomial::gen(spec.module.table.id("x1")), {Monomial::one()}});
    out["x1"] = psi;
    TensorElement xi1 = TensorElement::from(
        TensorTerm{Monomial::one(), {Monomial::gen(spec.host.host.id("xi1"))}});
    for (int i = 1; i + 1 <= index_cap; ++i) {
        TensorElement next =
            ops.q(1, psi).plus(calc.multiply_pointwise(xi1, ops.q(0, psi)));
        out["x" + std::to_string(i + 1)] = next;
        psi = std::move(next);
    }
    return out;
}

// ---------- underlying restriction ----------

TensorElement map_underlying(const TensorElement& x, const ComoduleSpec& source,
                             const ComoduleSpec& target,
                             const std::map<uint32_t, Element>& images) {
    TensorCalc calc = target.calc();
    auto u_target = target.module.table.id("u_sigma");
    std::vector<TensorTerm> out;
    for (const auto& t : x.terms) {
        if (t.slots.size() != 1)
            throw std::invalid_argument("map_underlying takes 1-slot tensors");
        Element module_img = Element::from(Monomial::one());
        for (auto [g, e] : t.module.factors) {
            auto it = images.find(g);
            if (it == images.end())
                throw std::invalid_argument("no underlying image for " +
                                            source.module.table.gen(g).name);
            Element img = it->second;
            if (e < 0) {
                if (img.terms.size() != 1)
                    throw std::invalid_argument("cannot invert a sum-valued image");
                img = Element::from(img.terms[0].pow(e));
            } else {
                Element p = Element::from(Monomial::one());
                for (int k = 0; k < e; ++k) p = p.times(img);
                img = p;
            }
            module_img = module_img.times(img);
        }
        if (module_img.is_zero()) continue;
        Monomial slot_img;
        Monomial u_extra;
        for (auto [g, e] : t.slots[0].factors) {
            const std::string& name = source.host.host.gen(g).name;
            bool is_tau = name.rfind("tau", 0) == 0;
            int idx = std::stoi(name.substr(is_tau ? 3 : 2));
            if (is_tau) {
                slot_img = slot_img.times(
                    Monomial::gen(target.host.host.id("xi" + std::to_string(idx + 1)), e));
                u_extra = u_extra.times(Monomial::gen(u_target, -((1 << idx) - 1) * e));
            } else {
                slot_img = slot_img.times(Monomial::gen(target.host.host.id(name), 2 * e));
                u_extra = u_extra.times(Monomial::gen(u_target, -((1 << idx) - 1) * e));
            }
        }
        for (const auto& m : module_img.terms)
            out.push_back({m.times(u_extra), {slot_img}});
    }
    return calc.normalize(TensorElement::from_terms(std::move(out)));
}

std::map<std::string, int> solve_underlying_restriction(const ComoduleSpec& eq,
                                                        const ComoduleSpec& cl,
                                                        int index_cap, int lo, int hi) {
    std::map<uint32_t, Element> images;
    images[eq.module.table.id("a_sigma")] = Element::zero();
    images[eq.module.table.id("u_sigma")] =
        Element::from(Monomial::gen(cl.module.table.id("u_sigma")));
    std::map<std::string, int> solved;

    auto solve_one = [&](const std::string& name, const Monomial& base) {
        uint32_t g = eq.module.table.id(name);
        uint32_t u = cl.module.table.id("u_sigma");
        RODegree want = eq.module.table.gen(g).degree.ro;
        std::vector<int> winners;
        for (int c = lo; c <= hi; ++c) {
            Monomial cand = base.times(Monomial::gen(u, c));
            if (cand.degree(cl.module.table).ro != want) continue;
            images[g] = Element::from(cand);
            TensorElement lhs = map_underlying(eq.coaction_of.at(g), eq, cl, images);
            TensorElement rhs = cl.coact(images[g]);
            if (lhs == rhs) winners.push_back(c);
        }
        if (winners.size() != 1)
            throw std::runtime_error("underlying image of " + name + " is not unique (" +
                                     std::to_string(winners.size()) + " candidates)");
        images[g] = Element::from(base.times(Monomial::gen(u, winners[0])));
        solved[name] = winners[0];
    };

    solve_one("t0", Monomial::gen(cl.module.table.id("x1")));
    for (int k = 1; k <= index_cap; ++k) {
        solve_one("e" + std::to_string(k),
                  Monomial::gen(cl.module.table.id("x" + std::to_string(k)), 2));
        solve_one("t" + std::to_string(k),
                  Monomial::gen(cl.module.table.id("x" + std::to_string(k + 1))));
    }
    return solved;
}

}  // namespace rhoext
