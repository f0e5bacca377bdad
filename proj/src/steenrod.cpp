#include "rhoext/steenrod.hpp"

#include <algorithm>
#include <stdexcept>

#include "rhoext/presentation_io.hpp"

namespace rhoext {

// ---------- TensorElement ----------

TensorElement TensorElement::from_terms(std::vector<TensorTerm> ts) {
    std::sort(ts.begin(), ts.end());
    TensorElement out;
    for (size_t i = 0; i < ts.size();) {
        size_t j = i;
        while (j < ts.size() && ts[j] == ts[i]) ++j;
        if ((j - i) % 2 == 1) out.terms.push_back(ts[i]);
        i = j;
    }
    return out;
}

TensorElement TensorElement::plus(const TensorElement& other) const {
    std::vector<TensorTerm> all = terms;
    all.insert(all.end(), other.terms.begin(), other.terms.end());
    return from_terms(std::move(all));
}

// ---------- builders ----------

namespace {

Monomial hgen(const GeneratorTable& host, const std::string& name, int exp = 1) {
    return Monomial::gen(host.id(name), exp);
}

void add_equivariant_squares(HopfAlgebroidSpec& spec, int index_cap, bool with_xi) {
    for (int i = 0; i < index_cap; ++i) {
        uint32_t tau_i = *spec.tau(i);
        std::vector<HopfAlgebroidSpec::SquareTerm> repl;
        if (with_xi) {
            // tau_i^2 = u xi_{i+1} + a tau0 xi_{i+1} + a tau_{i+1}
            repl.push_back({1, 0, hgen(spec.host, "xi" + std::to_string(i + 1))});
            repl.push_back({0, 1, hgen(spec.host, "tau0").times(
                                      hgen(spec.host, "xi" + std::to_string(i + 1)))});
            repl.push_back({0, 1, hgen(spec.host, "tau" + std::to_string(i + 1))});
        } else {
            // tau_i^2 = a tau_{i+1}
            repl.push_back({0, 1, hgen(spec.host, "tau" + std::to_string(i + 1))});
        }
        spec.squares[tau_i] = std::move(repl);
    }
}

}  // namespace

HopfAlgebroidSpec genuine_dual_steenrod(int index_cap) {
    HopfAlgebroidSpec spec;
    spec.name = "genuine_dual_steenrod";
    spec.kind = HostKind::GenuineA;
    spec.eta_r_twist = eta_twist_axiom();
    spec.coefficients.table.add("a_sigma");
    spec.coefficients.table.add("u_sigma", false);
    for (int i = 0; i <= index_cap; ++i) spec.host.add("tau" + std::to_string(i));
    for (int i = 1; i <= index_cap; ++i) spec.host.add("xi" + std::to_string(i));
    add_equivariant_squares(spec, index_cap, true);
    return spec;
}

HopfAlgebroidSpec borel_dual_steenrod(int index_cap, int a_cap) {
    HopfAlgebroidSpec spec = genuine_dual_steenrod(index_cap);
    spec.name = "borel_dual_steenrod";
    spec.kind = HostKind::BorelA;
    spec.a_cap = a_cap;
    spec.coefficients = AlgebraPresentation();
    spec.coefficients.table.add("a_sigma");
    spec.coefficients.table.add("u_sigma", true);
    return spec;
}

HopfAlgebroidSpec borel_exterior(int index_cap, int a_cap) {
    HopfAlgebroidSpec spec;
    spec.name = "borel_exterior";
    spec.kind = HostKind::BorelE;
    spec.eta_r_twist = eta_twist_axiom();
    spec.a_cap = a_cap;
    spec.coefficients.table.add("a_sigma");
    spec.coefficients.table.add("u_sigma", true);
    for (int i = 0; i <= index_cap; ++i) spec.host.add("tau" + std::to_string(i));
    add_equivariant_squares(spec, index_cap, false);
    return spec;
}

HopfAlgebroidSpec gr_exterior(int index_cap) {
    HopfAlgebroidSpec spec;
    spec.name = "gr_exterior";
    spec.kind = HostKind::GrE;
    spec.eta_r_twist = false;
    spec.coefficients.table.add("a_sigma");
    spec.coefficients.table.add("u_sigma", true);
    for (int i = 0; i <= index_cap; ++i) {
        spec.host.add("tau" + std::to_string(i));
        spec.squares[*spec.tau(i)] = {};  // exterior on every tau_i
    }
    return spec;
}

namespace {

MultiDegree classical_xi_degree(int i) {
    return {RODegree{(1 << i) - 1, 0}, 0, 0, 0};
}

}  // namespace

HopfAlgebroidSpec classical_dual_steenrod(int index_cap) {
    HopfAlgebroidSpec spec;
    spec.name = "classical_dual_steenrod";
    spec.kind = HostKind::ClassicalA;
    for (int i = 1; i <= index_cap; ++i)
        spec.host.add("xi" + std::to_string(i), classical_xi_degree(i));
    return spec;
}

HopfAlgebroidSpec classical_exterior(int index_cap) {
    HopfAlgebroidSpec spec;
    spec.name = "classical_exterior";
    spec.kind = HostKind::ClassicalE;
    for (int i = 1; i <= index_cap; ++i) {
        uint32_t g = spec.host.add("xi" + std::to_string(i), classical_xi_degree(i));
        spec.squares[g] = {};
    }
    return spec;
}

// ---------- coproducts ----------

TensorElement HopfAlgebroidSpec::coproduct(uint32_t host_gen) const {
    const std::string& name = host.gen(host_gen).name;
    bool is_tau = name.rfind("tau", 0) == 0;
    int n = std::stoi(name.substr(is_tau ? 3 : 2));
    bool has_xi = kind == HostKind::GenuineA || kind == HostKind::BorelA ||
                  kind == HostKind::ClassicalA || kind == HostKind::ClassicalE;
    std::vector<TensorTerm> terms;
    auto xi_power = [&](int index, int exp) {  // xi_index^exp with xi_0 = 1
        if (index == 0) return Monomial::one();
        return Monomial::gen(host.id("xi" + std::to_string(index)), exp);
    };
    if (is_tau) {
        terms.push_back({Monomial::one(), {Monomial::gen(host_gen), Monomial::one()}});
        for (int i = 0; i <= n; ++i) {
            if (n - i > 0 && !has_xi) continue;  // xi's vanish in the E variants
            terms.push_back({Monomial::one(),
                             {xi_power(n - i, 1 << i),
                              Monomial::gen(host.id("tau" + std::to_string(i)))}});
        }
    } else {
        for (int i = 0; i <= n; ++i)
            terms.push_back({Monomial::one(),
                             {xi_power(n - i, 1 << i), xi_power(i, 1)}});
    }
    return TensorElement::from_terms(std::move(terms));
}

// ---------- TensorCalc ----------

namespace {
constexpr int kTensorGuard = 1 << 22;
}

TensorElement TensorCalc::move_u_left(TensorTerm t, size_t pos) const {
    // One factor u sits immediately left of slot `pos`; move it home.
    if (pos <= 1 || !host_->eta_r_twist) {
        auto u = module_->table.find("u_sigma");
        if (!u) throw std::runtime_error("module has no u_sigma to receive a coefficient");
        t.module = t.module.times(Monomial::gen(*u));
        return TensorElement::from(std::move(t));
    }
    // gamma_{pos-1} * eta_R(u) = u*gamma_{pos-1} + a*gamma_{pos-1}*tau0.
    TensorTerm with_tau = t;
    auto a = module_->table.find("a_sigma");
    auto tau0 = host_->tau(0);
    if (!a || !tau0) throw std::runtime_error("twisted unit needs a_sigma and tau0");
    with_tau.module = with_tau.module.times(Monomial::gen(*a));
    with_tau.slots[pos - 2] = with_tau.slots[pos - 2].times(Monomial::gen(*tau0));
    return move_u_left(std::move(t), pos - 1).plus(TensorElement::from(std::move(with_tau)));
}

TensorElement TensorCalc::normalize_term(TensorTerm t) const {
    std::vector<TensorTerm> work{std::move(t)};
    std::vector<TensorTerm> slot_normal;
    auto a_id = module_->table.find("a_sigma");
    int steps = 0;
    while (!work.empty()) {
        if (++steps > kTensorGuard) throw std::runtime_error("tensor normalization guard hit");
        TensorTerm cur = std::move(work.back());
        work.pop_back();
        if (a_id && cur.module.exponent(*a_id) > host_->a_cap) continue;  // a-adic stage
        bool reduced = false;
        for (size_t j = 0; j < cur.slots.size() && !reduced; ++j) {
            for (auto [g, e] : cur.slots[j].factors) {
                if (e < 2) continue;
                auto it = host_->squares.find(g);
                if (it == host_->squares.end()) continue;
                reduced = true;
                // g^2 -> sum of coefficient * host replacements.
                for (const auto& st : it->second) {
                    TensorTerm next = cur;
                    next.slots[j] =
                        next.slots[j].divided_by(Monomial::gen(g, 2)).times(st.host);
                    if (st.a_exp && a_id)
                        next.module = next.module.times(Monomial::gen(*a_id, st.a_exp));
                    if (st.u_exp == 0) {
                        work.push_back(std::move(next));
                    } else {
                        // Push each u factor left from slot j+1 one at a time.
                        std::vector<TensorTerm> batch{std::move(next)};
                        for (int k = 0; k < st.u_exp; ++k) {
                            std::vector<TensorTerm> moved;
                            for (auto& b : batch) {
                                auto res = move_u_left(std::move(b), j + 1);
                                moved.insert(moved.end(), res.terms.begin(), res.terms.end());
                            }
                            batch = std::move(moved);
                        }
                        for (auto& b : batch) work.push_back(std::move(b));
                    }
                }
                break;
            }
        }
        if (!reduced) slot_normal.push_back(std::move(cur));
    }
    // Module relations (they never touch the slots).
    std::vector<TensorTerm> out;
    for (auto& term : slot_normal) {
        Element nf = rhoext::normalize(Element::from(term.module), module_->rw);
        for (const auto& m : nf.terms) {
            if (a_id && m.exponent(*a_id) > host_->a_cap) continue;
            out.push_back({m, term.slots});
        }
    }
    return TensorElement::from_terms(std::move(out));
}

TensorElement TensorCalc::normalize(const TensorElement& e) const {
    std::vector<TensorTerm> all;
    for (const auto& t : e.terms) {
        auto n = normalize_term(t);
        all.insert(all.end(), n.terms.begin(), n.terms.end());
    }
    return TensorElement::from_terms(std::move(all));
}

TensorElement TensorCalc::multiply_pointwise(const TensorElement& a,
                                             const TensorElement& b) const {
    std::vector<TensorTerm> all;
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            if (x.slots.size() != y.slots.size())
                throw std::invalid_argument("pointwise product needs equal slot counts");
            TensorTerm t;
            t.module = x.module.times(y.module);
            for (size_t j = 0; j < x.slots.size(); ++j)
                t.slots.push_back(x.slots[j].times(y.slots[j]));
            auto n = normalize_term(std::move(t));
            all.insert(all.end(), n.terms.begin(), n.terms.end());
        }
    return TensorElement::from_terms(std::move(all));
}

TensorElement TensorCalc::times_module(const TensorElement& e, const Element& m) const {
    std::vector<TensorTerm> all;
    for (const auto& t : e.terms)
        for (const auto& mm : m.terms) {
            TensorTerm nt = t;
            nt.module = nt.module.times(mm);
            auto n = normalize_term(std::move(nt));
            all.insert(all.end(), n.terms.begin(), n.terms.end());
        }
    return TensorElement::from_terms(std::move(all));
}

TensorElement TensorCalc::insert_coefficient(const TensorTerm& t, int u_exp, int a_exp,
                                             size_t pos) const {
    TensorTerm start = t;
    auto a_id = module_->table.find("a_sigma");
    auto u_id = module_->table.find("u_sigma");
    if (a_exp) {
        if (!a_id) throw std::runtime_error("no a_sigma in module");
        start.module = start.module.times(Monomial::gen(*a_id, a_exp));
    }
    if (u_exp == 0 || pos == 0) {
        if (u_exp) {
            if (!u_id) throw std::runtime_error("no u_sigma in module");
            start.module = start.module.times(Monomial::gen(*u_id, u_exp));
        }
        return normalize_term(std::move(start));
    }
    if (u_exp < 0)
        throw std::invalid_argument("negative u coefficient cannot be inserted mid-tensor");
    std::vector<TensorTerm> batch{std::move(start)};
    for (int k = 0; k < u_exp; ++k) {
        std::vector<TensorTerm> moved;
        for (auto& b : batch) {
            auto res = move_u_left(std::move(b), pos);
            moved.insert(moved.end(), res.terms.begin(), res.terms.end());
        }
        batch = std::move(moved);
    }
    return normalize(TensorElement::from_terms(std::move(batch)));
}

TensorElement TensorCalc::coproduct_on_slot(const TensorTerm& t, size_t j) const {
    if (j < 1 || j > t.slots.size()) throw std::invalid_argument("slot index out of range");
    // Expand Delta over the factors of slot j.
    std::vector<std::pair<Monomial, Monomial>> partial{{Monomial::one(), Monomial::one()}};
    for (auto [g, e] : t.slots[j - 1].factors) {
        TensorElement dg = host_->coproduct(g);
        for (int k = 0; k < e; ++k) {
            std::vector<std::pair<Monomial, Monomial>> next;
            for (const auto& [p1, p2] : partial)
                for (const auto& term : dg.terms)
                    next.push_back({p1.times(term.slots[0]), p2.times(term.slots[1])});
            partial = std::move(next);
        }
    }
    std::vector<TensorTerm> out;
    for (const auto& [m1, m2] : partial) {
        TensorTerm nt;
        nt.module = t.module;
        for (size_t i = 0; i + 1 < j; ++i) nt.slots.push_back(t.slots[i]);
        nt.slots.push_back(m1);
        nt.slots.push_back(m2);
        for (size_t i = j; i < t.slots.size(); ++i) nt.slots.push_back(t.slots[i]);
        out.push_back(std::move(nt));
    }
    return normalize(TensorElement::from_terms(std::move(out)));
}

TensorElement TensorCalc::coproduct_on_slot(const TensorElement& e, size_t j) const {
    TensorElement out;
    for (const auto& t : e.terms) out = out.plus(coproduct_on_slot(t, j));
    return out;
}

Element TensorCalc::counit(const TensorElement& e) const {
    std::vector<Monomial> out;
    for (const auto& t : e.terms) {
        bool trivial = true;
        for (const auto& s : t.slots)
            if (!s.is_one()) trivial = false;
        if (trivial) out.push_back(t.module);
    }
    return Element::from_terms(std::move(out));
}

TensorElement TensorCalc::eta_right(const Element& coefficient) const {
    auto u_id = module_->table.find("u_sigma");
    auto a_id = module_->table.find("a_sigma");
    // eta_R(u)^{-1} as an a-adically truncated series, when needed.
    TensorElement u_inverse;
    auto build_u_inverse = [&]() {
        if (!u_inverse.is_zero()) return;
        TensorTerm base{Monomial::gen(*u_id, -1), {Monomial::one()}};
        u_inverse = TensorElement::from(base);
        while (true) {
            // Y <- u^{-1} + u^{-1} a tau0 Y
            std::vector<TensorTerm> next{base};
            for (const auto& t : u_inverse.terms) {
                TensorTerm nt = t;
                nt.module = nt.module.times(Monomial::gen(*u_id, -1))
                                .times(Monomial::gen(*a_id, 1));
                nt.slots[0] = nt.slots[0].times(Monomial::gen(*host_->tau(0)));
                next.push_back(std::move(nt));
            }
            TensorElement candidate = normalize(TensorElement::from_terms(std::move(next)));
            if (candidate == u_inverse) break;
            u_inverse = std::move(candidate);
        }
    };

    TensorElement out;
    for (const auto& mono : coefficient.terms) {
        int m = 0, n = 0;
        for (auto [g, e] : mono.factors) {
            if (u_id && g == *u_id) m = e;
            else if (a_id && g == *a_id) n = e;
            else throw std::invalid_argument("eta_right expects a coefficient element");
        }
        TensorTerm base{a_id ? Monomial::gen(*a_id, n) : Monomial::one(), {Monomial::one()}};
        if (!host_->eta_r_twist) {
            if (m) base.module = base.module.times(Monomial::gen(*u_id, m));
            out = out.plus(normalize_term(std::move(base)));
        } else if (m >= 0) {
            // eta_R(u)^m = (u (x) 1 + a (x) tau0)^m.
            TensorElement eta_u = TensorElement::from_terms(
                {{Monomial::gen(*u_id), {Monomial::one()}},
                 {Monomial::gen(*a_id), {Monomial::gen(*host_->tau(0))}}});
            TensorElement acc = TensorElement::from(base);
            for (int k = 0; k < m; ++k) acc = multiply_pointwise(acc, eta_u);
            out = out.plus(acc);
        } else {
            build_u_inverse();
            TensorElement acc = TensorElement::from(base);
            for (int k = 0; k < -m; ++k) acc = multiply_pointwise(acc, u_inverse);
            out = out.plus(acc);
        }
    }
    return out;
}

std::string TensorCalc::str(const TensorElement& e) const {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& t : e.terms) {
        if (!out.empty()) out += " + ";
        out += t.module.str(module_->table);
        for (const auto& s : t.slots) out += " # " + s.str(host_->host);
    }
    return out;
}

// ---------- comparison ring maps ----------

namespace {

Element phi_map(const TensorElement& x, const HopfAlgebroidSpec& source,
                const GeneratorTable& target, bool underlying) {
    auto src_u = source.coefficients.table.find("u_sigma");
    auto src_a = source.coefficients.table.find("a_sigma");
    std::vector<Monomial> out;
    for (const auto& t : x.terms) {
        if (t.slots.size() != 1)
            throw std::invalid_argument("phi maps take 1-slot tensors");
        Monomial image;
        bool dead = false;
        for (auto [g, e] : t.module.factors) {
            if (src_u && g == *src_u) {
                if (underlying) image = image.times(Monomial::gen(target.id("u_sigma"), e));
                else dead = true;  // u restricts to 0 on the fixed points side
            } else if (src_a && g == *src_a) {
                if (underlying) dead = true;  // a restricts to 0 underlying
                else image = image.times(Monomial::gen(target.id("a_sigma"), e));
            } else {
                throw std::invalid_argument("phi maps take coefficient x host inputs");
            }
        }
        for (auto [g, e] : t.slots[0].factors) {
            const std::string& name = source.host.gen(g).name;
            bool is_tau = name.rfind("tau", 0) == 0;
            int idx = std::stoi(name.substr(is_tau ? 3 : 2));
            if (underlying) {
                if (is_tau) {
                    // tau_n -> xi_{n+1} / u^{2^n - 1}
                    image = image.times(
                        Monomial::gen(target.id("xi" + std::to_string(idx + 1)), e));
                    image = image.times(
                        Monomial::gen(target.id("u_sigma"), -((1 << idx) - 1) * e));
                } else {
                    // xi_n -> xi_n^2 / u^{2^n - 1}
                    image = image.times(Monomial::gen(target.id(name), 2 * e));
                    image = image.times(
                        Monomial::gen(target.id("u_sigma"), -((1 << idx) - 1) * e));
                }
            } else {
                if (is_tau) {
                    dead = true;  // tau_i -> 0
                } else {
                    // xi_i -> xi_i / a^{2^i - 1}
                    image = image.times(Monomial::gen(target.id(name), e));
                    image = image.times(
                        Monomial::gen(target.id("a_sigma"), -((1 << idx) - 1) * e));
                }
            }
        }
        if (!dead) out.push_back(std::move(image));
    }
    return Element::from_terms(std::move(out));
}

}  // namespace

Element phi_underlying(const TensorElement& x, const HopfAlgebroidSpec& source,
                       const GeneratorTable& target) {
    return phi_map(x, source, target, true);
}

Element phi_fixed(const TensorElement& x, const HopfAlgebroidSpec& source,
                  const GeneratorTable& target) {
    return phi_map(x, source, target, false);
}

GeneratorTable classical_with_u(int index_cap) {
    GeneratorTable t;
    t.add("u_sigma", true);
    for (int i = 1; i <= index_cap; ++i)
        t.add("xi" + std::to_string(i), classical_xi_degree(i));
    return t;
}

GeneratorTable classical_with_a(int index_cap) {
    GeneratorTable t;
    t.add("a_sigma", true);
    for (int i = 1; i <= index_cap; ++i)
        t.add("xi" + std::to_string(i), classical_xi_degree(i));
    return t;
}

}  // namespace rhoext
