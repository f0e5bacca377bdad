#include "rhoext/algebra.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rhoext {

// ---------- GeneratorTable ----------

uint32_t GeneratorTable::add(const std::string& name, MultiDegree degree, bool invertible) {
    if (find(name)) throw std::invalid_argument("duplicate generator: " + name);
    entries.push_back({name, degree, invertible});
    return static_cast<uint32_t>(entries.size() - 1);
}

uint32_t GeneratorTable::add(const std::string& name, bool invertible) {
    return add(name, degree_of_generator(name), invertible);
}

std::optional<uint32_t> GeneratorTable::find(const std::string& name) const {
    for (uint32_t i = 0; i < entries.size(); ++i)
        if (entries[i].name == name) return i;
    return std::nullopt;
}

uint32_t GeneratorTable::id(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw std::invalid_argument("generator not in table: " + name);
}

// ---------- Monomial ----------

Monomial Monomial::gen(uint32_t g, int e) {
    Monomial m;
    if (e != 0) m.factors.push_back({g, e});
    return m;
}

int Monomial::exponent(uint32_t g) const {
    for (const auto& [gen, exp] : factors)
        if (gen == g) return exp;
    return 0;
}

Monomial Monomial::times(const Monomial& other) const {
    Monomial out;
    size_t i = 0, j = 0;
    while (i < factors.size() || j < other.factors.size()) {
        if (j == other.factors.size() ||
            (i < factors.size() && factors[i].first < other.factors[j].first)) {
            out.factors.push_back(factors[i++]);
        } else if (i == factors.size() || other.factors[j].first < factors[i].first) {
            out.factors.push_back(other.factors[j++]);
        } else {
            int e = factors[i].second + other.factors[j].second;
            if (e != 0) out.factors.push_back({factors[i].first, e});
            ++i, ++j;
        }
    }
    return out;
}

Monomial Monomial::pow(int k) const {
    Monomial out;
    if (k == 0) return out;
    for (auto [g, e] : factors) out.factors.push_back({g, e * k});
    return out;
}

bool Monomial::divisible_by(const Monomial& lead) const {
    for (auto [g, e] : lead.factors) {
        int mine = exponent(g);
        if (e > 0 ? mine < e : mine > e) return false;
    }
    return true;
}

Monomial Monomial::divided_by(const Monomial& lead) const {
    return times(lead.pow(-1));
}

MultiDegree Monomial::degree(const GeneratorTable& table) const {
    MultiDegree d;
    for (auto [g, e] : factors) d = d + e * table.gen(g).degree;
    return d;
}

std::string Monomial::str(const GeneratorTable& table) const {
    if (is_one()) return "1";
    std::string out;
    for (auto [g, e] : factors) {
        if (!out.empty()) out += "*";
        out += table.gen(g).name;
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

// ---------- Element ----------

Element Element::from_terms(std::vector<Monomial> ms) {
    std::sort(ms.begin(), ms.end());
    Element out;
    for (size_t i = 0; i < ms.size();) {
        size_t j = i;
        while (j < ms.size() && ms[j] == ms[i]) ++j;
        if ((j - i) % 2 == 1) out.terms.push_back(ms[i]);
        i = j;
    }
    return out;
}

Element Element::plus(const Element& other) const {
    std::vector<Monomial> all = terms;
    all.insert(all.end(), other.terms.begin(), other.terms.end());
    return from_terms(std::move(all));
}

Element Element::times(const Element& other) const {
    std::vector<Monomial> all;
    for (const auto& a : terms)
        for (const auto& b : other.terms) all.push_back(a.times(b));
    return from_terms(std::move(all));
}

Element Element::times(const Monomial& m) const {
    std::vector<Monomial> all;
    for (const auto& a : terms) all.push_back(a.times(m));
    return from_terms(std::move(all));
}

std::optional<RODegree> Element::homogeneous_degree(const GeneratorTable& table) const {
    if (terms.empty()) return std::nullopt;
    RODegree d = terms[0].degree(table).ro;
    for (const auto& m : terms)
        if (m.degree(table).ro != d)
            throw std::invalid_argument("element is not RO-homogeneous");
    return d;
}

std::string Element::str(const GeneratorTable& table) const {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& m : terms) {
        if (!out.empty()) out += " + ";
        out += m.str(table);
    }
    return out;
}

// ---------- parsing ----------

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Monomial parse_monomial(const std::string& text, const GeneratorTable& table) {
    std::string t = strip(text);
    if (t == "1") return Monomial::one();
    Monomial m;
    for (const std::string& raw : split(t, '*')) {
        std::string f = strip(raw);
        if (f.empty()) throw std::invalid_argument("empty monomial factor in: " + text);
        int exp = 1;
        if (auto caret = f.find('^'); caret != std::string::npos) {
            exp = std::stoi(f.substr(caret + 1));
            f = strip(f.substr(0, caret));
        }
        m = m.times(Monomial::gen(table.id(f), exp));
    }
    return m;
}

Element parse_element(const std::string& text, const GeneratorTable& table) {
    std::string t = strip(text);
    if (t == "0") return Element::zero();
    std::vector<Monomial> terms;
    for (const std::string& part : split(t, '+')) terms.push_back(parse_monomial(part, table));
    return Element::from_terms(std::move(terms));
}

// ---------- rewriting ----------

void RewriteSystem::add(Monomial lead, Element tail) {
    for (const auto& m : tail.terms)
        if (m.divisible_by(lead))
            throw std::invalid_argument("rewrite tail contains its own lead");
    rules.push_back({std::move(lead), std::move(tail)});
}

void RewriteSystem::add(const std::string& relation_lead, const std::string& relation_tail) {
    add(parse_monomial(relation_lead, *table), parse_element(relation_tail, *table));
}

namespace {

struct Reduction {
    size_t term;
    size_t rule;
};

std::vector<Reduction> applicable(const Element& e, const RewriteSystem& rw) {
    std::vector<Reduction> out;
    for (size_t t = 0; t < e.terms.size(); ++t)
        for (size_t r = 0; r < rw.rules.size(); ++r)
            if (e.terms[t].divisible_by(rw.rules[r].lead)) out.push_back({t, r});
    return out;
}

Element apply_step(const Element& e, const RewriteSystem& rw, const Reduction& red) {
    const auto& rule = rw.rules[red.rule];
    const Monomial& m = e.terms[red.term];
    Monomial cofactor = m.divided_by(rule.lead);
    Element replaced = rule.tail.times(cofactor);
    // e - m + cofactor*tail over F2.
    Element rest;
    rest.terms = e.terms;
    rest.terms.erase(rest.terms.begin() + red.term);
    return rest.plus(replaced);
}

}  // namespace

Element normalize(const Element& e, const RewriteSystem& rw) {
    e.homogeneous_degree(*rw.table);  // throws if non-homogeneous
    Element cur = Element::from_terms(e.terms);
    long steps = 0;
    while (true) {
        bool reduced = false;
        for (size_t t = 0; t < cur.terms.size() && !reduced; ++t)
            for (size_t r = 0; r < rw.rules.size() && !reduced; ++r)
                if (cur.terms[t].divisible_by(rw.rules[r].lead)) {
                    cur = apply_step(cur, rw, {t, r});
                    reduced = true;
                }
        if (!reduced) return cur;
        if (++steps > kRewriteGuard)
            throw std::runtime_error("rewrite step guard exceeded (mis-oriented relations?)");
    }
}

Element normalize_random_order(const Element& e, const RewriteSystem& rw, uint64_t seed) {
    e.homogeneous_degree(*rw.table);
    std::mt19937_64 rng(seed);
    Element cur = Element::from_terms(e.terms);
    long steps = 0;
    while (true) {
        auto options = applicable(cur, rw);
        if (options.empty()) return cur;
        cur = apply_step(cur, rw, options[rng() % options.size()]);
        if (++steps > kRewriteGuard)
            throw std::runtime_error("rewrite step guard exceeded (mis-oriented relations?)");
    }
}

Element multiply(const Element& a, const Element& b, const RewriteSystem& rw) {
    return normalize(a.times(b), rw);
}

// ---------- slice enumeration ----------

namespace {

struct SliceEnumerator {
    const AlgebraPresentation& pres;
    RODegree target;
    const TruncationWindow& win;
    const SliceOptions& opts;
    std::optional<uint32_t> u_id, a_id;
    std::vector<uint32_t> enumerated;
    std::vector<Monomial> out;

    SliceEnumerator(const AlgebraPresentation& p, RODegree d, const TruncationWindow& w,
                    const SliceOptions& o)
        : pres(p), target(d), win(w), opts(o) {
        u_id = pres.table.find("u_sigma");
        a_id = pres.table.find("a_sigma");
        for (uint32_t g = 0; g < pres.table.size(); ++g)
            if (g != u_id && g != a_id) enumerated.push_back(g);
    }

    // Exponent bounds for enumerated generator g given remaining budgets.
    std::pair<int, int> bounds(uint32_t g, int weight_left, int adams_left,
                               int underlying_left) const {
        const auto& e = pres.table.gen(g);
        int lo = 0, hi = std::numeric_limits<int>::max();
        if (auto it = opts.exponent_floor.find(g); it != opts.exponent_floor.end())
            lo = it->second;
        bool bounded = false;
        if (auto it = opts.exponent_cap.find(g); it != opts.exponent_cap.end()) {
            hi = std::min(hi, it->second);
            bounded = true;
        }
        if (e.degree.snaith_weight > 0) {
            hi = std::min(hi, weight_left / e.degree.snaith_weight);
            bounded = true;
        }
        if (e.degree.adams_filtration > 0) {
            hi = std::min(hi, adams_left / e.degree.adams_filtration);
            bounded = true;
        }
        if (e.degree.ro.underlying_dimension() > 0) {
            hi = std::min(hi, underlying_left / e.degree.ro.underlying_dimension());
            bounded = true;
        }
        if (!bounded)
            throw std::runtime_error("window admits infinitely many monomials: generator " +
                                     e.name + " has no exponent bound");
        if (lo < 0 && !e.invertible) lo = 0;
        return {lo, hi};
    }

    void run() {
        std::vector<std::pair<uint32_t, int>> current;
        dfs(0, win.weight_cap, opts.adams ? *opts.adams : win.adams_cap,
            target.underlying_dimension() + (a_id ? win.a_exponent_cap : 0), current);
        std::sort(out.begin(), out.end());
    }

    void dfs(size_t idx, int weight_left, int adams_left, int underlying_left,
             std::vector<std::pair<uint32_t, int>>& current) {
        if (idx == enumerated.size()) {
            finish(current, adams_left);
            return;
        }
        uint32_t g = enumerated[idx];
        const auto& e = pres.table.gen(g);
        auto [lo, hi] = bounds(g, weight_left, adams_left, underlying_left);
        for (int exp = lo; exp <= hi; ++exp) {
            if (exp != 0 && exp < 0 && !e.invertible) continue;
            int w = weight_left - exp * e.degree.snaith_weight;
            int s = adams_left - exp * e.degree.adams_filtration;
            int u = underlying_left - exp * e.degree.ro.underlying_dimension();
            if (w < 0 || s < 0) continue;
            if (u < 0 && exp > 0 && e.degree.ro.underlying_dimension() > 0) continue;
            if (exp != 0) current.push_back({g, exp});
            dfs(idx + 1, w, s, u, current);
            if (exp != 0) current.pop_back();
        }
    }

    void finish(const std::vector<std::pair<uint32_t, int>>& current, int adams_left) {
        if (opts.adams && adams_left != 0) return;
        Monomial m;
        m.factors = current;
        std::sort(m.factors.begin(), m.factors.end());
        RODegree rest = target - m.degree(pres.table).ro;
        // Solve u_sigma and a_sigma exponents from the remaining degree.
        int m_u = rest.trivial_part;
        int n_a = -rest.underlying_dimension();
        if (!u_id && m_u != 0) return;
        if (!a_id && n_a != 0) return;
        if (a_id && (n_a < 0 || n_a > win.a_exponent_cap)) return;
        if (u_id && m_u < 0 && !pres.table.gen(*u_id).invertible) return;
        if (u_id && m_u != 0) m = m.times(Monomial::gen(*u_id, m_u));
        if (a_id && n_a != 0) m = m.times(Monomial::gen(*a_id, n_a));
        if (m.degree(pres.table).ro != target) return;
        if (opts.normal_forms_only)
            for (const auto& rule : pres.rw.rules)
                if (m.divisible_by(rule.lead)) return;
        out.push_back(std::move(m));
    }
};

}  // namespace

std::vector<Monomial> basis_slice(const AlgebraPresentation& pres, RODegree d,
                                  const TruncationWindow& win, const SliceOptions& opts) {
    SliceEnumerator e(pres, d, win, opts);
    e.run();
    return e.out;
}

// ---------- quotient slices ----------

QuotientSlice::QuotientSlice(const AlgebraPresentation& pres, RODegree d,
                             const TruncationWindow& win, const SliceOptions& opts)
    : pres_(&pres), ideal_(0) {
    SliceOptions ambient_opts = opts;
    ambient_opts.normal_forms_only = false;
    ambient_ = basis_slice(pres, d, win, ambient_opts);
    for (size_t i = 0; i < ambient_.size(); ++i) index_[ambient_[i]] = i;
    ideal_ = GF2RowSpace(ambient_.size());

    for (const auto& rule : pres.rw.rules) {
        Element rel = Element::from(rule.lead).plus(rule.tail);
        MultiDegree rel_deg = rule.lead.degree(pres.table);
        SliceOptions cof_opts = ambient_opts;
        if (opts.adams) cof_opts.adams = *opts.adams - rel_deg.adams_filtration;
        if (cof_opts.adams && *cof_opts.adams < 0) continue;
        std::vector<Monomial> cofactors = basis_slice(pres, d - rel_deg.ro, win, cof_opts);
        for (const auto& cof : cofactors) {
            Element row = rel.times(cof);
            GF2Vector v(ambient_.size());
            for (const auto& m : row.terms) {
                auto it = index_.find(m);
                // Terms beyond the window caps are truncated (monomial-ideal
                // quotient); see the window documentation.
                if (it != index_.end()) v.flip(it->second);
            }
            ideal_.insert(std::move(v));
        }
    }
}

std::vector<Monomial> QuotientSlice::coset_representatives() const {
    std::vector<Monomial> reps;
    for (size_t i = 0; i < ambient_.size(); ++i)
        if (!ideal_.is_pivot(i)) reps.push_back(ambient_[i]);
    return reps;
}

GF2Vector QuotientSlice::reduce(const Element& e) const {
    GF2Vector v(ambient_.size());
    for (const auto& m : e.terms) {
        auto it = index_.find(m);
        if (it != index_.end()) v.flip(it->second);
    }
    return ideal_.reduce(std::move(v));
}

Element QuotientSlice::reduce_to_element(const Element& e) const {
    GF2Vector v = reduce(e);
    std::vector<Monomial> terms;
    for (size_t i = 0; i < ambient_.size(); ++i)
        if (v.get(i)) terms.push_back(ambient_[i]);
    return Element::from_terms(std::move(terms));
}

}  // namespace rhoext
