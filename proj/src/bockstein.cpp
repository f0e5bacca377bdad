#include "rhoext/bockstein.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "rhoext/runconfig.hpp"

namespace rhoext {

namespace {

std::string deg_str(RODegree d) {
    return "(" + std::to_string(d.trivial_part) + "," + std::to_string(d.sign_part) + ")";
}

// Largest a-exponent / weight / Adams filtration among the terms of x, used
// to widen a window so that products with x stay fully enumerable.
struct TermStats {
    int a_exp = 0;
    int weight = 0;
    int adams = 0;
};

TermStats stats_of(const Element& x, const GeneratorTable& table, uint32_t a_id) {
    TermStats s;
    for (const auto& t : x.terms) {
        MultiDegree d = t.degree(table);
        s.a_exp = std::max(s.a_exp, t.exponent(a_id));
        s.weight = std::max(s.weight, d.snaith_weight);
        s.adams = std::max(s.adams, d.adams_filtration);
    }
    return s;
}

TruncationWindow widen(const TruncationWindow& win, const TermStats& s) {
    TruncationWindow w = win;
    w.a_exponent_cap += s.a_exp;
    w.weight_cap += s.weight;
    w.adams_cap += s.adams;
    return w;
}

}  // namespace

// ---------- pages ----------

bool BssPage::member(const Monomial& m) const {
    int u_exp = m.exponent(u_id_);
    int g;
    if (limit_) {
        g = -1;
        for (size_t j = 0; j < v_ids_.size(); ++j)
            if (m.exponent(v_ids_[j]) > 0) {
                g = static_cast<int>(j) + 1;
                break;
            }
        if (g < 0) return u_exp == 0;
    } else {
        g = index_;
        for (int j = 0; j < index_ && j < static_cast<int>(v_ids_.size()); ++j)
            if (m.exponent(v_ids_[j]) > 0) {
                g = j + 1;
                break;
            }
    }
    return u_exp % (1 << g) == 0;
}

Element BssPage::d(const Monomial& m) const {
    if (limit_) throw std::logic_error("the limiting page carries no differential");
    if (!member(m))
        throw std::invalid_argument("differential of a non-member monomial");
    for (int j = 0; j < index_ && j < static_cast<int>(v_ids_.size()); ++j)
        if (m.exponent(v_ids_[j]) > 0) return Element::zero();
    int q = m.exponent(u_id_) / (1 << index_);
    if (q % 2 == 0) return Element::zero();
    if (index_ >= static_cast<int>(v_ids_.size()))
        throw std::logic_error("page index exceeds the registered v generators");
    Monomial out = m.times(Monomial::gen(u_id_, -(1 << index_)))
                       .times(Monomial::gen(a_id_, r()))
                       .times(Monomial::gen(v_ids_[index_]));
    return Element::from(std::move(out));
}

int BssPage::torsion_limit() const {
    int vc = static_cast<int>(v_ids_.size());
    return limit_ ? vc : std::min(index_, vc);
}

Element BssPage::d(const Element& e) const {
    Element out;
    for (const auto& t : e.terms) out = out.plus(d(t));
    return out;
}

// ---------- the spectral-sequence object ----------

Bss::Bss(BssOptions opts) : opts_(opts) {
    if (opts_.v_count < 1 || opts_.e_count < 1)
        throw std::invalid_argument("need at least one v and one e generator");
    GeneratorTable& t = ambient_.table;
    u_id_ = t.add("u_sigma", true);
    a_id_ = t.add("a_sigma");
    for (int j = 0; j < opts_.v_count; ++j)
        v_ids_.push_back(t.add("v" + std::to_string(j)));
    t0_id_ = t.add("t0");
    for (int k = 1; k <= opts_.e_count; ++k)
        e_ids_.push_back(t.add("e" + std::to_string(k)));

    ambient_.rw.add(Monomial::gen(t0_id_, 2),
                    Element::from(Monomial::gen(u_id_).times(Monomial::gen(e_id(1)))));
    for (int k = 1; k <= opts_.e_count; ++k) {
        Monomial lead = Monomial::gen(v_ids_[0]).times(Monomial::gen(e_id(k)));
        ambient_.rw.add(lead, relation(k).plus(Element::from(lead)));
    }
}

Element Bss::relation(int k) const {
    if (k < 1 || k > opts_.e_count) throw std::out_of_range("relation index");
    std::vector<Monomial> terms;
    for (int j = 0; j < k && j < opts_.v_count; ++j)
        terms.push_back(
            Monomial::gen(v_ids_[j]).times(Monomial::gen(e_id(k - j), 1 << j)));
    return Element::from_terms(std::move(terms));
}

BssPage Bss::page(int n) const {
    if (n < 0) throw std::out_of_range("page index");
    BssPage p;
    p.quot_ = ambient_;
    p.index_ = n;
    p.u_id_ = u_id_;
    p.a_id_ = a_id_;
    p.v_ids_ = v_ids_;
    return p;
}

BssPage Bss::limit() const {
    BssPage p = page(opts_.v_count);
    p.limit_ = true;
    auto parse = [&](const std::string& s) { return parse_element(s, p.quot_.table); };
    p.annotations_.push_back(
        {parse("v0*t0^2"), parse("a_sigma^2*v1*e1"),
         "the product v0*t0^2 is carried one a-power up"});
    p.annotations_.push_back(
        {parse("v1*e1*t0^4 + v1*a_sigma^2*e2*t0^2"), parse("a_sigma^4*v2*e1^3"),
         "the next v-product is carried two a-powers up"});
    return p;
}

SliceOptions bss_slice_options(const Bss& bss, const TruncationWindow& win) {
    SliceOptions opts;
    for (int j = 0; j < bss.v_count(); ++j)
        if (j > win.v_index_cap) opts.exponent_cap[bss.v_id(j)] = 0;
    return opts;
}

// ---------- slices ----------

namespace {

// Raw membership for the page of the given index (never the limit): the
// u-exponent is a multiple of 2^g with g = min(index, 1 + smallest v-index
// present below index).
bool member_raw(const Bss& bss, int index, const Monomial& m) {
    int g = index;
    for (int j = 0; j < index && j < bss.v_count(); ++j)
        if (m.exponent(bss.v_id(j)) > 0) {
            g = j + 1;
            break;
        }
    return m.exponent(bss.u_id()) % (1 << g) == 0;
}

}  // namespace

BssSlice::BssSlice(const Bss& bss, const BssPage& page, RODegree d,
                   const TruncationWindow& win)
    : page_(&page),
      degree_(d),
      quot_(page.quotient(), d, win, bss_slice_options(bss, win)),
      torsion_(quot_.ambient().size()) {
    const GeneratorTable& table = bss.ambient().table;
    // Torsion rows: a^{2^{j+1}-1} v_j times the members of the page where the
    // class dies. Cofactors are narrowed so the products respect the caps.
    for (int j = 0; j < page.torsion_limit(); ++j) {
        int r = (1 << (j + 1)) - 1;
        TruncationWindow cw = win;
        cw.a_exponent_cap -= r;
        cw.adams_cap -= 1;
        if (cw.a_exponent_cap < 0 || cw.adams_cap < 0) continue;
        Monomial y = Monomial::gen(bss.a_id(), r).times(Monomial::gen(bss.v_id(j)));
        SliceOptions copts = bss_slice_options(bss, win);
        copts.normal_forms_only = false;
        for (const auto& c : basis_slice(bss.ambient(), d - y.degree(table).ro, cw, copts)) {
            if (!member_raw(bss, j + 1, c)) continue;
            torsion_.insert(quot_.reduce(Element::from(y.times(c))));
        }
    }
    GF2RowSpace space = torsion_;
    for (const auto& m : quot_.ambient()) {
        if (!page.member(m)) continue;
        members_.push_back(m);
        if (space.insert(quot_.reduce(Element::from(m)))) basis_.push_back(m);
    }
}

size_t BssSlice::dimension_where(const std::function<bool(const Monomial&)>& keep) const {
    GF2RowSpace space(width());
    for (const auto& m : members_)
        if (keep(m)) space.insert(reduce(Element::from(m)));
    return space.rank();
}

std::vector<RODegree> window_degrees(const TruncationWindow& win) {
    std::vector<RODegree> out;
    for (int w = win.sigma_min; w <= win.sigma_max; ++w)
        for (int stem = win.stem_min; stem <= win.stem_max; ++stem)
            out.push_back({stem - w, w});
    return out;
}

// ---------- page-by-page verification ----------

BssPage run_to(const Bss& bss, int n, const TruncationWindow& win, CheckReport* report) {
    CheckReport local;
    CheckReport& rep = report ? *report : local;
    const GeneratorTable& table = bss.ambient().table;

    std::vector<BssPage> pages;
    pages.reserve(n + 1);
    for (int j = 0; j <= n; ++j) pages.push_back(bss.page(j));

    std::map<std::pair<int, RODegree>, std::unique_ptr<BssSlice>> cache;
    auto slice = [&](int pj, RODegree D) -> BssSlice& {
        auto key = std::make_pair(pj, D);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::make_unique<BssSlice>(bss, pages[pj], D, win))
                     .first;
        return *it->second;
    };

    std::vector<RODegree> degrees = window_degrees(win);
    for (int j = 0; j + 1 <= n; ++j) {
        int r = pages[j].r();
        for (RODegree D : degrees) {
            BssSlice& at = slice(j, D);
            BssSlice& nxt = slice(j + 1, D);
            for (const auto& m : nxt.members())
                if (!pages[j].member(m))
                    rep.fail("page " + std::to_string(j + 1) + " member " + m.str(table) +
                             " escapes page " + std::to_string(j) + " at " + deg_str(D));
            if (at.members().empty()) continue;

            // Graded pieces by (a-exponent, Adams filtration); the quotient
            // ideal is homogeneous for both.
            std::map<std::pair<int, int>, std::vector<Monomial>> groups;
            for (const auto& m : at.members())
                groups[{m.exponent(bss.a_id()), m.degree(table).adams_filtration}]
                    .push_back(m);

            for (const auto& [key, ms] : groups) {
                auto [alpha, s] = key;
                // Pieces whose differential target would leave the caps are
                // not exactly computable; the ideal preserves both gradings,
                // so the remaining pieces are exact.
                if (alpha + r > win.a_exponent_cap || s + 1 > win.adams_cap) continue;

                GF2Matrix at_rows{at.width(), {}};
                for (const auto& m : ms) at_rows.add_row(at.reduce(Element::from(m)));

                BssSlice& tgt = slice(j, D + RODegree{-1, 0});
                GF2Matrix d_rows{tgt.width(), {}};
                for (const auto& m : ms) d_rows.add_row(tgt.reduce(pages[j].d(m)));

                // Descent: combinations that vanish on the page must map to
                // zero, otherwise the monomial formula is no map at all.
                for (const auto& kv : at_rows.kernel_basis()) {
                    GF2Vector acc(tgt.width());
                    for (size_t i = 0; i < ms.size(); ++i)
                        if (kv.get(i)) acc ^= d_rows.rows[i];
                    if (!acc.zero())
                        rep.fail("differential fails to descend at " + deg_str(D) +
                                 " a^" + std::to_string(alpha) + " s=" + std::to_string(s) +
                                 " on page " + std::to_string(j));
                }

                GF2Matrix b_rows{at.width(), {}};
                if (alpha >= r && s >= 1) {
                    BssSlice& src = slice(j, D + RODegree{1, 0});
                    for (const auto& m : src.members()) {
                        if (m.exponent(bss.a_id()) != alpha - r) continue;
                        if (m.degree(table).adams_filtration != s - 1) continue;
                        b_rows.add_row(at.reduce(pages[j].d(m)));
                    }
                }

                size_t hom = at_rows.rank() - d_rows.rank() - b_rows.rank();
                size_t memb = nxt.dimension_where([&](const Monomial& m) {
                    return m.exponent(bss.a_id()) == alpha &&
                           m.degree(table).adams_filtration == s;
                });
                if (hom != memb)
                    rep.fail("homology of page " + std::to_string(j) + " at " + deg_str(D) +
                             " a^" + std::to_string(alpha) + " s=" + std::to_string(s) +
                             " is " + std::to_string(hom) + ", page " +
                             std::to_string(j + 1) + " has " + std::to_string(memb));
            }
        }
    }

    if (!report && !local.ok) {
        std::string msg = "page verification failed:";
        for (const auto& f : local.failures) msg += "\n  " + f;
        throw std::runtime_error(msg);
    }
    return pages.back();
}

// ---------- annihilators ----------

std::vector<Element> u_power_torsion_family(const Bss& bss, int j, int u_range) {
    std::vector<Element> out;
    int step = 1 << (j + 1);
    for (int m = -(u_range / step) * step; m <= u_range; m += step) {
        Monomial mono = Monomial::gen(bss.v_id(j));
        if (m != 0) mono = mono.times(Monomial::gen(bss.u_id(), m));
        out.push_back(Element::from(std::move(mono)));
    }
    return out;
}

AnnihilatorResult annihilator(const Bss& bss, const BssPage& page, const Element& x,
                              const ClaimedGenerators& claimed,
                              const TruncationWindow& win) {
    AnnihilatorResult res;
    const GeneratorTable& table = bss.ambient().table;
    auto xro = x.homogeneous_degree(table);
    if (!xro) throw std::invalid_argument("annihilator target must be nonzero");
    TermStats xs = stats_of(x, table, bss.a_id());
    TruncationWindow wide = widen(win, xs);

    // Every claimed generator annihilates x.
    auto annihilates = [&](const Element& g) {
        auto gro = g.homogeneous_degree(table);
        if (!gro) return true;
        TermStats gs = stats_of(g, table, bss.a_id());
        TruncationWindow w2 = widen(wide, gs);
        BssSlice s(bss, page, *xro + *gro, w2);
        return s.is_zero(x.times(g));
    };
    for (const auto& g : claimed.elements)
        if (!annihilates(g))
            res.report.fail("claimed generator does not annihilate: " + g.str(table));
    for (int j : claimed.v_families)
        for (const auto& g : u_power_torsion_family(bss, j, 4 << (j + 1)))
            if (!annihilates(g))
                res.report.fail("claimed family element does not annihilate: " +
                                g.str(table));

    // Kernel of multiplication by x on every window slice, factored against
    // the ideal the claimed generators span. Degrees are independent; results
    // land in per-degree slots so the merge order stays deterministic.
    std::vector<RODegree> degrees = window_degrees(win);
    std::vector<std::vector<Element>> found(degrees.size());
    std::vector<std::vector<std::string>> failures(degrees.size());
    parallel_for(degrees.size(), [&](size_t di) {
        RODegree D = degrees[di];
        BssSlice here(bss, page, D, win);
        if (here.basis().empty()) return;
        BssSlice there(bss, page, D + *xro, wide);
        GF2Matrix mult{there.width(), {}};
        for (const auto& b : here.basis())
            mult.add_row(there.reduce(x.times(b)));
        auto kernel = mult.kernel_basis();
        if (kernel.empty()) return;

        BssSlice wide_here(bss, page, D, wide);
        GF2RowSpace ideal(wide_here.width());
        for (const auto& g : claimed.elements) {
            auto gro = g.homogeneous_degree(table);
            if (!gro) continue;
            BssSlice cof(bss, page, D - *gro, wide);
            for (const auto& c : cof.members())
                ideal.insert(wide_here.reduce(g.times(c)));
        }
        for (int j : claimed.v_families)
            for (const auto& m : wide_here.members())
                if (m.exponent(bss.v_id(j)) > 0)
                    ideal.insert(wide_here.reduce(Element::from(m)));

        for (const auto& kv : kernel) {
            std::vector<Monomial> terms;
            for (size_t i = 0; i < here.basis().size(); ++i)
                if (kv.get(i)) terms.push_back(here.basis()[i]);
            Element y = Element::from_terms(std::move(terms));
            found[di].push_back(y);
            if (!ideal.contains(wide_here.reduce(y)))
                failures[di].push_back("annihilator outside the claimed ideal at " +
                                       deg_str(D) + ": " + y.str(table));
        }
    });
    for (size_t di = 0; di < degrees.size(); ++di) {
        for (auto& y : found[di]) res.found.push_back(std::move(y));
        for (auto& f : failures[di]) res.report.fail(f);
    }
    return res;
}

// ---------- structural verifications ----------

CheckReport verify_permanent_cycles(const Bss& bss, const BssPage& page) {
    CheckReport rep;
    const GeneratorTable& table = bss.ambient().table;
    auto expect_zero = [&](const Monomial& m) {
        if (!page.d(m).is_zero())
            rep.fail("expected a permanent cycle: " + m.str(table));
    };
    expect_zero(Monomial::gen(bss.a_id()));
    expect_zero(Monomial::gen(bss.t0_id()));
    for (int k = 1; k <= bss.e_count(); ++k) expect_zero(Monomial::gen(bss.e_id(k)));
    for (int j = page.index(); j < bss.v_count(); ++j)
        expect_zero(Monomial::gen(bss.v_id(j)));
    for (int j = 0; j < page.index() && j < bss.v_count(); ++j)
        for (const auto& g : u_power_torsion_family(bss, j, 4 << (j + 1)))
            for (const auto& t : g.terms) expect_zero(t);
    if (page.index() < bss.v_count()) {
        for (int sign : {1, -1}) {
            Monomial u_pow = Monomial::gen(bss.u_id(), sign * (1 << page.index()));
            Element got = page.d(u_pow);
            Element want = Element::from(
                u_pow.times(Monomial::gen(bss.u_id(), -(1 << page.index())))
                    .times(Monomial::gen(bss.a_id(), page.r()))
                    .times(Monomial::gen(bss.v_id(page.index()))));
            if (got != want)
                rep.fail("differential of " + u_pow.str(table) + " is " +
                         got.str(table) + ", expected " + want.str(table));
        }
    }
    return rep;
}

CheckReport verify_leibniz(const Bss& bss, const BssPage& page,
                           const TruncationWindow& win) {
    CheckReport rep;
    const GeneratorTable& table = bss.ambient().table;

    // A spread of sample members, taken near the origin first and with the
    // smallest a-exponents first so that pairs still fit under the caps.
    std::vector<RODegree> degrees = window_degrees(win);
    std::sort(degrees.begin(), degrees.end(), [](RODegree a, RODegree b) {
        int na = std::abs(a.trivial_part + a.sign_part) + std::abs(a.sign_part);
        int nb = std::abs(b.trivial_part + b.sign_part) + std::abs(b.sign_part);
        return na != nb ? na < nb : a < b;
    });
    std::vector<std::pair<RODegree, Monomial>> samples;
    for (RODegree D : degrees) {
        BssSlice s(bss, page, D, win);
        std::vector<Monomial> picks = s.basis();
        std::sort(picks.begin(), picks.end(), [&](const Monomial& x, const Monomial& y) {
            return x.exponent(bss.a_id()) < y.exponent(bss.a_id());
        });
        for (size_t taken = 0; taken < picks.size() && taken < 2; ++taken)
            samples.push_back({D, picks[taken]});
        if (samples.size() >= 40) break;
    }

    std::map<RODegree, std::unique_ptr<BssSlice>> cache;
    auto slice = [&](RODegree D) -> BssSlice& {
        auto it = cache.find(D);
        if (it == cache.end())
            it = cache.emplace(D, std::make_unique<BssSlice>(bss, page, D, win)).first;
        return *it->second;
    };

    size_t checks = 0;
    for (size_t i = 0; i < samples.size() && checks < 300; ++i) {
        for (size_t j = i; j < samples.size() && checks < 300; ++j) {
            const auto& [D1, m1] = samples[i];
            const auto& [D2, m2] = samples[j];
            MultiDegree t1 = m1.degree(table), t2 = m2.degree(table);
            if (t1.snaith_weight + t2.snaith_weight > win.weight_cap) continue;
            if (t1.adams_filtration + t2.adams_filtration + 1 > win.adams_cap) continue;
            if (m1.exponent(bss.a_id()) + m2.exponent(bss.a_id()) + page.r() >
                win.a_exponent_cap)
                continue;
            Monomial prod = m1.times(m2);
            Element lhs = page.d(prod);
            Element rhs = page.d(m1).times(m2).plus(page.d(m2).times(m1));
            BssSlice& tgt = slice(D1 + D2 + RODegree{-1, 0});
            if (!tgt.is_zero(lhs.plus(rhs)))
                rep.fail("Leibniz fails for " + m1.str(table) + " * " + m2.str(table));
            ++checks;
        }
    }
    if (checks == 0) rep.fail("no Leibniz pairs fit the window");
    return rep;
}

CheckReport verify_intermediate_vanishing(const Bss& bss, const BssPage& page,
                                          const TruncationWindow& win) {
    CheckReport rep;
    int n = page.index();
    for (int r = (1 << n); r <= (1 << (n + 1)) - 2; ++r) {
        TruncationWindow w2 = win;
        w2.a_exponent_cap = std::max(win.a_exponent_cap, r);
        for (int sign : {1, -1}) {
            RODegree source{sign * (1 << n), -sign * (1 << n)};
            BssSlice tgt(bss, page, source + RODegree{-1, 0}, w2);
            size_t dim = tgt.dimension_where([&](const Monomial& m) {
                return m.exponent(bss.a_id()) == r &&
                       m.degree(bss.ambient().table).snaith_weight == 0 &&
                       m.degree(bss.ambient().table).adams_filtration == 1;
            });
            if (dim != 0)
                rep.fail("an intermediate differential d_" + std::to_string(r) +
                         " from u^" + std::to_string(sign * (1 << n)) +
                         " has a nonempty target");
        }
    }
    return rep;
}

CheckReport verify_limit_vanishing(const Bss& bss, const TruncationWindow& win) {
    CheckReport rep;
    BssPage lim = bss.limit();
    auto check_empty = [&](RODegree D, const std::string& what) {
        int stem = D.trivial_part + D.sign_part;
        if (stem < win.stem_min || stem > win.stem_max) return;
        if (D.sign_part < win.sigma_min || D.sign_part > win.sigma_max) return;
        BssSlice s(bss, lim, D, win);
        if (s.dimension() != 0)
            rep.fail("nonzero limiting slice in " + what + " degree " + deg_str(D));
    };
    for (int j = -20; j <= 20; ++j) {
        check_empty({j - 1, j}, "j*rho - 1");
        check_empty({j, j + 1}, "j*rho + sigma");
    }
    return rep;
}

CheckReport verify_torsion_orders(const Bss& bss, int j_max, const TruncationWindow& win) {
    CheckReport rep;
    BssPage lim = bss.limit();
    const GeneratorTable& table = bss.ambient().table;
    for (int j = 0; j <= j_max; ++j) {
        int order = 1 << (j + 1);
        TruncationWindow w2 = win;
        w2.a_exponent_cap = std::max(win.a_exponent_cap, order);
        Monomial dead = Monomial::gen(bss.a_id(), order - 1).times(Monomial::gen(bss.v_id(j)));
        Monomial alive = order - 2 > 0
                             ? Monomial::gen(bss.a_id(), order - 2)
                                   .times(Monomial::gen(bss.v_id(j)))
                             : Monomial::gen(bss.v_id(j));
        BssSlice s_dead(bss, lim, dead.degree(table).ro, w2);
        BssSlice s_alive(bss, lim, alive.degree(table).ro, w2);
        if (!s_dead.is_zero(Element::from(dead)))
            rep.fail("expected zero torsion class: " + dead.str(table));
        if (s_alive.is_zero(Element::from(alive)))
            rep.fail("expected nonzero class below the torsion order: " +
                     alive.str(table));
    }
    return rep;
}

CheckReport verify_stabilization(const Bss& bss, int n_start, const TruncationWindow& win) {
    CheckReport rep;
    std::vector<BssPage> pages;
    for (int j = 0; j < 3; ++j) pages.push_back(bss.page(n_start + j));
    BssPage lim = bss.limit();
    for (RODegree D : window_degrees(win)) {
        size_t lim_dim = BssSlice(bss, lim, D, win).dimension();
        for (int j = 0; j < 3; ++j) {
            size_t dim = BssSlice(bss, pages[j], D, win).dimension();
            if (dim != lim_dim) {
                rep.fail("page " + std::to_string(n_start + j) + " at " + deg_str(D) +
                         " has dimension " + std::to_string(dim) + ", limit has " +
                         std::to_string(lim_dim));
                break;
            }
        }
    }
    return rep;
}

CheckReport verify_hidden_annotations(const Bss& bss, const TruncationWindow& win) {
    CheckReport rep;
    BssPage lim = bss.limit();
    const GeneratorTable& table = bss.ambient().table;
    if (lim.annotations().empty()) rep.fail("the limiting page records no annotations");
    for (const auto& ann : lim.annotations()) {
        auto low_d = ann.low.homogeneous_degree(table);
        auto high_d = ann.high.homogeneous_degree(table);
        if (!low_d || !high_d || *low_d != *high_d) {
            rep.fail("annotation sides disagree in degree: " + ann.note);
            continue;
        }
        TermStats s = stats_of(ann.low.plus(ann.high), table, bss.a_id());
        TruncationWindow w2 = win;
        w2.a_exponent_cap = std::max(win.a_exponent_cap, s.a_exp);
        w2.weight_cap = std::max(win.weight_cap, s.weight);
        w2.adams_cap = std::max(win.adams_cap, s.adams);
        for (const auto& t : ann.low.terms)
            if (!lim.member(t)) rep.fail("low-side term escapes the page: " + t.str(table));
        for (const auto& t : ann.high.terms)
            if (!lim.member(t)) rep.fail("high-side term escapes the page: " + t.str(table));
        // The product is hidden: its leading (lowest a-exponent) part dies on
        // the limiting page, and the detecting class sits strictly higher in
        // the a-filtration and survives.
        int low_a = std::numeric_limits<int>::max(), high_a = std::numeric_limits<int>::max();
        for (const auto& t : ann.low.terms) low_a = std::min(low_a, t.exponent(bss.a_id()));
        for (const auto& t : ann.high.terms) high_a = std::min(high_a, t.exponent(bss.a_id()));
        if (high_a <= low_a) {
            rep.fail("annotation does not jump the a-filtration: " + ann.note);
            continue;
        }
        std::vector<Monomial> lead;
        for (const auto& t : ann.low.terms)
            if (t.exponent(bss.a_id()) == low_a) lead.push_back(t);
        BssSlice slice(bss, lim, *low_d, w2);
        if (!slice.is_zero(Element::from_terms(std::move(lead))))
            rep.fail("leading part of the low side survives on the limiting page: " +
                     ann.low.str(table));
        if (slice.is_zero(ann.high))
            rep.fail("high side vanishes: " + ann.high.str(table));
    }
    return rep;
}

CheckReport verify_weight_split(const Bss& bss, const TruncationWindow& win) {
    CheckReport rep;
    BssPage lim = bss.limit();
    const GeneratorTable& table = bss.ambient().table;
    Monomial t0 = Monomial::gen(bss.t0_id());

    std::map<RODegree, std::unique_ptr<BssSlice>> cache;
    auto slice = [&](RODegree D) -> BssSlice& {
        auto it = cache.find(D);
        if (it == cache.end())
            it = cache.emplace(D, std::make_unique<BssSlice>(bss, lim, D, win)).first;
        return *it->second;
    };

    for (RODegree D : window_degrees(win)) {
        BssSlice& here = slice(D);
        if (here.members().empty()) continue;
        BssSlice& there = slice(D + RODegree{1, 0});
        for (int w = 0; w + 1 <= win.weight_cap; w += 2) {
            auto weight_is = [&](int want) {
                return [&table, want](const Monomial& m) {
                    return m.degree(table).snaith_weight == want;
                };
            };
            size_t src_dim = here.dimension_where(weight_is(w));
            if (src_dim == 0) continue;
            size_t tgt_dim = there.dimension_where(weight_is(w + 1));
            GF2Matrix mult{there.width(), {}};
            for (const auto& m : here.members())
                if (m.degree(table).snaith_weight == w)
                    mult.add_row(there.reduce(Element::from(m.times(t0))));
            size_t rank = mult.rank();
            if (rank != src_dim || rank != tgt_dim)
                rep.fail("t0-multiplication is not a bijection at " + deg_str(D) +
                         " weight " + std::to_string(w) + ": rank " +
                         std::to_string(rank) + ", source " + std::to_string(src_dim) +
                         ", target " + std::to_string(tgt_dim));
        }
    }
    return rep;
}

CheckReport verify_classical_specialization(const Bss& bss, const TruncationWindow& win) {
    CheckReport rep;

    // The singly graded specialization: v's keep Adams filtration 1, the
    // square-zero class x0 sits in degree 1, y_n in degree 2(2^n - 1), and the
    // relations lose their u-powers.
    AlgebraPresentation cl;
    std::vector<uint32_t> vids, yids;
    for (int j = 0; j < bss.v_count(); ++j)
        vids.push_back(cl.table.add("v" + std::to_string(j),
                                    MultiDegree{{2 * ((1 << j) - 1), 0}, 1, 0, 0}));
    uint32_t x0 = cl.table.add("x0", MultiDegree{{1, 0}, 0, 0, 1});
    for (int k = 1; k <= bss.e_count(); ++k)
        yids.push_back(cl.table.add("y" + std::to_string(k),
                                    MultiDegree{{2 * ((1 << k) - 1), 0}, 0, 0, 1 << k}));
    cl.rw.add(Monomial::gen(x0, 2), Element::zero());
    for (int k = 1; k <= bss.e_count(); ++k) {
        std::vector<Monomial> tail;
        for (int j = 1; j < k && j < bss.v_count(); ++j)
            tail.push_back(
                Monomial::gen(vids[j]).times(Monomial::gen(yids[k - j - 1], 1 << j)));
        cl.rw.add(Monomial::gen(vids[0]).times(Monomial::gen(yids[k - 1])),
                  Element::from_terms(std::move(tail)));
    }
    SliceOptions copts;
    for (int j = 0; j < bss.v_count(); ++j)
        if (j > win.v_index_cap) copts.exponent_cap[vids[j]] = 0;

    BssPage lim = bss.limit();
    for (int n = 0; 2 * n <= win.stem_max && n <= win.sigma_max; ++n) {
        QuotientSlice cq(cl, {2 * n, 0}, win, copts);
        BssSlice ls(bss, lim, {n, n}, win);
        if (cq.dimension() != ls.dimension())
            rep.fail("degree " + std::to_string(2 * n) + " specialization has dimension " +
                     std::to_string(cq.dimension()) + ", the limiting slice at " +
                     deg_str({n, n}) + " has " + std::to_string(ls.dimension()));
    }
    return rep;
}

CheckReport verify_annihilator_quotient(const Bss& bss, int n, const TruncationWindow& win) {
    CheckReport rep;
    BssPage pg = bss.page(n);
    const GeneratorTable& table = bss.ambient().table;

    // The annihilator of the top a-power is the ideal of the v-coupled
    // u-power families below n.
    Element x = Element::from(Monomial::gen(bss.a_id(), (1 << (n + 1)) - 1));
    ClaimedGenerators claimed;
    for (int j = 0; j < n; ++j) claimed.v_families.push_back(j);
    AnnihilatorResult ar = annihilator(bss, pg, x, claimed, win);
    if (!ar.report.ok)
        for (const auto& f : ar.report.failures) rep.fail(f);
    if (n == 0 && !ar.found.empty())
        rep.fail("the top a-power on the first page has a nonzero annihilator");

    // Quotient dimensions: page slice modulo the family ideal versus the
    // closed-form presentation on u-powers divisible by 2^n without low v's.
    std::vector<Element> rels;
    rels.push_back(Element::from(Monomial::gen(bss.t0_id(), 1 << (n + 1)))
                       .plus(Element::from(Monomial::gen(bss.u_id(), 1 << n)
                                               .times(Monomial::gen(bss.e_id(1), 1 << n)))));
    for (int m = n + 1; m <= bss.e_count(); ++m) {
        std::vector<Monomial> terms;
        for (int j = n; j < m && j < bss.v_count(); ++j)
            terms.push_back(
                Monomial::gen(bss.v_id(j)).times(Monomial::gen(bss.e_id(m - j), 1 << j)));
        rels.push_back(Element::from_terms(std::move(terms)));
    }
    SliceOptions opts = bss_slice_options(bss, win);
    opts.normal_forms_only = false;
    auto subring = [&](const Monomial& m) {
        if (m.exponent(bss.u_id()) % (1 << n) != 0) return false;
        for (int j = 0; j < n; ++j)
            if (m.exponent(bss.v_id(j)) > 0) return false;
        return true;
    };
    auto low_v = [&](const Monomial& m) {
        for (int j = 0; j < n; ++j)
            if (m.exponent(bss.v_id(j)) > 0) return true;
        return false;
    };

    for (RODegree D : window_degrees(win)) {
        BssSlice here(bss, pg, D, win);
        GF2RowSpace all(here.width()), ideal_lhs(here.width());
        for (const auto& m : here.members()) {
            all.insert(here.reduce(Element::from(m)));
            if (low_v(m)) ideal_lhs.insert(here.reduce(Element::from(m)));
        }
        size_t lhs = all.rank() - ideal_lhs.rank();

        std::vector<Monomial> ambient;
        for (const auto& m : basis_slice(bss.ambient(), D, win, opts))
            if (subring(m)) ambient.push_back(m);
        std::map<Monomial, size_t> index;
        for (size_t i = 0; i < ambient.size(); ++i) index[ambient[i]] = i;
        GF2RowSpace ideal_rhs(ambient.size());
        for (const auto& rel : rels) {
            auto rro = rel.homogeneous_degree(table);
            for (const auto& c : basis_slice(bss.ambient(), D - *rro, win, opts)) {
                if (!subring(c)) continue;
                GF2Vector row(ambient.size());
                for (const auto& t : rel.times(c).terms) {
                    auto it = index.find(t);
                    if (it != index.end()) row.flip(it->second);
                }
                ideal_rhs.insert(std::move(row));
            }
        }
        size_t rhs = ambient.size() - ideal_rhs.rank();
        if (lhs != rhs)
            rep.fail("quotient by the annihilator at " + deg_str(D) + " has dimension " +
                     std::to_string(lhs) + ", the closed form has " + std::to_string(rhs));
    }
    return rep;
}

// ---------- graded differential algebra utilities ----------

Element Derivation::apply(const Monomial& m, const AlgebraPresentation& pres) const {
    (void)pres;
    Element out;
    for (const auto& [g, e] : m.factors) {
        if ((e & 1) == 0) continue;
        auto it = images.find(g);
        if (it == images.end() || it->second.is_zero()) continue;
        out = out.plus(it->second.times(m.times(Monomial::gen(g, -1))));
    }
    return out;
}

Element Derivation::apply(const Element& e, const AlgebraPresentation& pres) const {
    Element out;
    for (const auto& t : e.terms) out = out.plus(apply(t, pres));
    return out;
}

std::vector<Element> kernel_generator_set(const AlgebraPresentation& pres, uint32_t x1,
                                          const std::vector<Element>& ann_image) {
    std::vector<Element> out;
    std::set<Element> seen;
    auto push = [&](Element e) {
        if (!e.is_zero() && seen.insert(e).second) out.push_back(std::move(e));
    };
    for (uint32_t g = 0; g < pres.table.size(); ++g)
        if (g != x1) push(Element::from(Monomial::gen(g)));
    push(Element::from(Monomial::gen(x1, 2)));
    if (pres.table.gen(x1).invertible) push(Element::from(Monomial::gen(x1, -2)));
    for (const auto& b : ann_image) {
        push(b);
        push(b.times(Monomial::gen(x1)));
    }
    return out;
}

std::vector<Element> product_span(const AlgebraPresentation& pres,
                                  const std::vector<Element>& gens, RODegree target,
                                  const TruncationWindow& win) {
    const GeneratorTable& table = pres.table;
    struct Item {
        Monomial m;
        MultiDegree deg;
    };
    std::vector<Item> items;
    for (const auto& g : gens) {
        if (g.terms.size() != 1)
            throw std::invalid_argument("product spans need monomial generators");
        items.push_back({g.terms[0], g.terms[0].degree(table)});
    }
    int pa = -1, pb = -1;
    for (size_t i = 0; i < items.size(); ++i)
        for (size_t j = i + 1; j < items.size(); ++j)
            if (items[i].m.times(items[j].m).is_one()) {
                if (pa >= 0)
                    throw std::invalid_argument("more than one mutually inverse pair");
                pa = static_cast<int>(i);
                pb = static_cast<int>(j);
            }
    std::vector<size_t> loose;
    int underlying_budget = std::max(0, target.underlying_dimension());
    for (size_t i = 0; i < items.size(); ++i) {
        if (static_cast<int>(i) == pa || static_cast<int>(i) == pb) continue;
        loose.push_back(i);
        int und = items[i].deg.ro.underlying_dimension();
        if (und < 0) underlying_budget += win.a_exponent_cap * (-und);
    }

    std::vector<Element> out;
    auto rec = [&](auto&& self, size_t idx, RODegree acc, int und_left, int weight_left,
                   int adams_left, const Monomial& cur) -> void {
        if (idx == loose.size()) {
            RODegree rest = target - acc;
            Monomial full = cur;
            if (pa >= 0) {
                RODegree base = items[pa].deg.ro;
                int k = 0;
                if (base == RODegree{}) {
                    if (rest != RODegree{}) return;
                } else {
                    int num = base.trivial_part != 0 ? rest.trivial_part : rest.sign_part;
                    int den = base.trivial_part != 0 ? base.trivial_part : base.sign_part;
                    if (num % den != 0) return;
                    k = num / den;
                    if (k * base != rest) return;
                }
                if (k > 0) full = full.times(items[pa].m.pow(k));
                if (k < 0) full = full.times(items[pb].m.pow(-k));
            } else if (rest != RODegree{}) {
                return;
            }
            out.push_back(Element::from(full));
            return;
        }
        const Item& it = items[loose[idx]];
        int und = it.deg.ro.underlying_dimension();
        int w = it.deg.snaith_weight;
        int s = it.deg.adams_filtration;
        int cap;
        if (und > 0)
            cap = und_left / und;
        else if (s > 0)
            cap = adams_left / s;
        else if (w > 0)
            cap = weight_left / w;
        else if (und < 0)
            cap = win.a_exponent_cap;
        else
            throw std::runtime_error("product-span generator has no exponent bound: " +
                                     it.m.str(table));
        for (int e = 0; e <= cap; ++e) {
            int nu = und_left - std::max(0, e * und);
            int nw = weight_left - e * w;
            int ns = adams_left - e * s;
            if (nu < 0 || nw < 0 || ns < 0) break;
            self(self, idx + 1, acc + e * it.deg.ro, nu, nw, ns,
                 e == 0 ? cur : cur.times(it.m.pow(e)));
        }
    };
    rec(rec, 0, RODegree{}, underlying_budget, win.weight_cap, win.adams_cap,
        Monomial::one());
    return out;
}

CheckReport verify_kernel_generators(const AlgebraPresentation& pres, const Derivation& d,
                                     const std::vector<Element>& gens,
                                     const TruncationWindow& win) {
    CheckReport rep;
    const GeneratorTable& table = pres.table;

    for (const auto& rule : pres.rw.rules) {
        Element rel = Element::from(rule.lead).plus(rule.tail);
        QuotientSlice q(pres, rule.lead.degree(table).ro + d.shift, win);
        if (!q.is_zero_in_quotient(d.apply(rel, pres)))
            rep.fail("derivation does not respect the relation " + rel.str(table));
    }
    for (const auto& g : gens) {
        Element dg = d.apply(g, pres);
        if (dg.is_zero()) continue;
        auto gro = g.homogeneous_degree(table);
        QuotientSlice q(pres, *gro + d.shift, win);
        if (!q.is_zero_in_quotient(dg))
            rep.fail("claimed kernel generator is not a cycle: " + g.str(table));
    }

    for (RODegree D : window_degrees(win)) {
        QuotientSlice q(pres, D, win);
        std::vector<Monomial> reps = q.coset_representatives();
        if (reps.empty()) continue;
        QuotientSlice t(pres, D + d.shift, win);

        std::map<std::pair<int, int>, std::vector<Monomial>> groups;
        for (const auto& m : reps) {
            MultiDegree md = m.degree(table);
            groups[{md.adams_filtration, md.bockstein_filtration}].push_back(m);
        }
        GF2RowSpace span(q.ambient().size());
        bool span_built = false;
        for (const auto& [key, ms] : groups) {
            auto [s, alpha] = key;
            if (s + d.adams_shift > win.adams_cap) continue;
            if (alpha + d.a_shift > win.a_exponent_cap) continue;
            GF2Matrix mat{t.ambient().size(), {}};
            for (const auto& m : ms)
                mat.add_row(t.reduce(d.apply(Element::from(m), pres)));
            auto kernel = mat.kernel_basis();
            if (kernel.empty()) continue;
            if (!span_built) {
                for (const auto& p : product_span(pres, gens, D, win))
                    span.insert(q.reduce(p));
                span_built = true;
            }
            for (const auto& kv : kernel) {
                std::vector<Monomial> terms;
                for (size_t i = 0; i < ms.size(); ++i)
                    if (kv.get(i)) terms.push_back(ms[i]);
                Element y = Element::from_terms(std::move(terms));
                if (!span.contains(q.reduce(y)))
                    rep.fail("kernel class outside the generated span at " + deg_str(D) +
                             ": " + y.str(table));
            }
        }
    }
    return rep;
}

// ---------- integral-domain / regular-sequence scan ----------

AlgebraPresentation laurent_relation_ring(int k, int relation_count, int e_count,
                                          int v_count) {
    if (k < 0 || e_count < 1 || v_count < 1) throw std::invalid_argument("ring shape");
    if (relation_count > e_count)
        throw std::invalid_argument("relations need their leading e generator");
    AlgebraPresentation pres;
    uint32_t w = pres.table.add("w", MultiDegree{{0, 0}, 0, 0, 0}, true);
    (void)w;
    std::vector<uint32_t> vids, eids;
    for (int j = 0; j < v_count; ++j)
        vids.push_back(pres.table.add(
            "v" + std::to_string(j), MultiDegree{{2 * ((1 << (j + k)) - 1), 0}, 1, 0, 0}));
    uint32_t e0 = pres.table.add("e0", MultiDegree{{1, 0}, 0, 0, 0});
    for (int i = 1; i <= e_count; ++i)
        eids.push_back(pres.table.add("e" + std::to_string(i),
                                      MultiDegree{{2 * ((1 << i) - 1), 0}, 0, 0, 0}));
    if (relation_count >= 1)
        pres.rw.add(Monomial::gen(e0, 1 << (k + 1)),
                    Element::from(Monomial::gen(pres.table.id("w"))
                                      .times(Monomial::gen(eids[0], 1 << k))));
    for (int n = 2; n <= relation_count; ++n) {
        std::vector<Monomial> tail;
        for (int i = 1; i < n && i < v_count; ++i)
            tail.push_back(
                Monomial::gen(vids[i]).times(Monomial::gen(eids[n - i - 1], 1 << (i + k))));
        pres.rw.add(Monomial::gen(vids[0]).times(Monomial::gen(eids[n - 1], 1 << k)),
                    Element::from_terms(std::move(tail)));
    }
    return pres;
}

namespace {

// Normal-form monomials of one degree with w-exponent pinned to zero.
std::vector<Monomial> laurent_reps(const AlgebraPresentation& pres, int degree,
                                   int adams_cap) {
    TruncationWindow win;
    win.adams_cap = adams_cap;
    SliceOptions opts;
    uint32_t w = pres.table.id("w");
    opts.exponent_floor[w] = 0;
    opts.exponent_cap[w] = 0;
    return basis_slice(pres, {degree, 0}, win, opts);
}

}  // namespace

DomainScanReport laurent_domain_scan(int k, int degree_bound, DomainScanOptions opts) {
    DomainScanReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };

    int e_count = 1;
    while (2 * ((1 << (e_count + 1)) - 1) <= degree_bound) ++e_count;
    int v_count = 1;
    while (2 * ((1 << (v_count + k)) - 1) <= degree_bound) ++v_count;
    int relation_count = 1;
    while (relation_count + 1 <= e_count &&
           (1 << (relation_count + k + 2)) - 2 <= degree_bound)
        ++relation_count;

    AlgebraPresentation pres = laurent_relation_ring(k, relation_count, e_count, v_count);
    const GeneratorTable& table = pres.table;

    std::vector<std::vector<Monomial>> reps(degree_bound + 1);
    for (int d = 0; d <= degree_bound; ++d) reps[d] = laurent_reps(pres, d, opts.adams_cap);
    if (reps[0].empty() || !reps[0][0].is_one()) fail("the unit monomial is missing");

    // 1 * x = x, and no normal-form product normalizes to zero.
    size_t samples = 0;
    uint64_t next_seed = opts.seed;
    for (int d1 = 0; d1 <= degree_bound; ++d1) {
        for (int d2 = d1; d1 + d2 <= degree_bound; ++d2) {
            for (const auto& x : reps[d1]) {
                for (const auto& y : reps[d2]) {
                    Element prod = Element::from(x.times(y));
                    Element nf = normalize(prod, pres.rw);
                    ++rep.pairs_checked;
                    if (nf.is_zero()) {
                        fail("zero divisor pair: " + x.str(table) + " * " + y.str(table));
                        continue;
                    }
                    if (x.is_one() && nf != Element::from(y))
                        fail("1 * " + y.str(table) + " normalized to " + nf.str(table));
                    if (samples < static_cast<size_t>(opts.confluence_samples) &&
                        rep.pairs_checked % 97 == 0) {
                        ++samples;
                        if (normalize_random_order(prod, pres.rw, next_seed++) != nf ||
                            normalize_random_order(prod, pres.rw, next_seed++) != nf) {
                            rep.confluent = false;
                            fail("randomized rewriting disagrees on " + x.str(table) +
                                 " * " + y.str(table));
                        }
                    }
                }
            }
        }
    }

    // Regular sequence: over the quotient by the earlier relations, the
    // normalized images of a slice under multiplication by r_n stay
    // independent. Images are indexed by exact monomials, so the Laurent
    // exponents raised by rewriting are kept, not truncated.
    for (int n = 1; n <= relation_count; ++n) {
        AlgebraPresentation prev = laurent_relation_ring(k, n - 1, e_count, v_count);
        const auto& rule = pres.rw.rules[n - 1];
        Element rel = Element::from(rule.lead).plus(rule.tail);
        int rel_deg = rule.lead.degree(table).ro.trivial_part;
        // The relation was built over `pres`; the generator tables share ids.
        for (int d = 0; d + rel_deg <= degree_bound; ++d) {
            std::vector<Monomial> slice = laurent_reps(prev, d, opts.adams_cap);
            if (slice.empty()) continue;
            std::vector<Element> images;
            std::map<Monomial, size_t> index;
            for (const auto& m : slice) {
                Element img = normalize(rel.times(m), prev.rw);
                for (const auto& t : img.terms) index.emplace(t, index.size());
                images.push_back(std::move(img));
            }
            GF2RowSpace space(index.size());
            for (size_t i = 0; i < images.size(); ++i) {
                GF2Vector row(index.size());
                for (const auto& t : images[i].terms) row.flip(index.at(t));
                if (!space.insert(std::move(row)))
                    fail("multiplication by relation " + std::to_string(n) +
                         " drops rank on the degree-" + std::to_string(d) + " slice at " +
                         slice[i].str(table));
            }
            ++rep.injectivity_slices;
        }
    }
    return rep;
}

}  // namespace rhoext
