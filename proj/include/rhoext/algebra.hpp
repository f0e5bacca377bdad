#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rhoext/gf2.hpp"
#include "rhoext/grading.hpp"

namespace rhoext {

// Ordered list of named graded generators; the order orients rewriting and
// fixes canonical monomial comparison.
struct GeneratorTable {
    struct Entry {
        std::string name;
        MultiDegree degree;
        bool invertible = false;
    };
    std::vector<Entry> entries;

    uint32_t add(const std::string& name, MultiDegree degree, bool invertible = false);
    // Registers `name` with degree_of_generator(name).
    uint32_t add(const std::string& name, bool invertible = false);
    std::optional<uint32_t> find(const std::string& name) const;
    uint32_t id(const std::string& name) const;  // throws if absent
    const Entry& gen(uint32_t i) const { return entries.at(i); }
    size_t size() const { return entries.size(); }
};

// A commutative monomial: sparse exponent vector, sorted by generator id,
// no zero exponents. Negative exponents only on invertible generators.
struct Monomial {
    std::vector<std::pair<uint32_t, int>> factors;

    static Monomial one() { return {}; }
    static Monomial gen(uint32_t g, int e = 1);
    bool is_one() const { return factors.empty(); }
    int exponent(uint32_t g) const;
    Monomial times(const Monomial& other) const;
    Monomial pow(int k) const;
    // Whether `lead` divides this (sign-aware: requires exponent >= lead's).
    bool divisible_by(const Monomial& lead) const;
    Monomial divided_by(const Monomial& lead) const;  // pre: divisible
    MultiDegree degree(const GeneratorTable& table) const;
    std::string str(const GeneratorTable& table) const;
    auto operator<=>(const Monomial&) const = default;
};

// F2-linear combination of monomials: sorted, duplicates cancelled in pairs.
struct Element {
    std::vector<Monomial> terms;

    static Element zero() { return {}; }
    static Element from(Monomial m) { return Element{{std::move(m)}}; }
    static Element from_terms(std::vector<Monomial> ms);  // canonicalizes
    bool is_zero() const { return terms.empty(); }
    Element plus(const Element& other) const;   // XOR of term sets
    Element times(const Element& other) const;  // free-ring product, no rewriting
    Element times(const Monomial& m) const;
    // Checks all terms share one RO degree; returns it (nullopt for 0).
    std::optional<RODegree> homogeneous_degree(const GeneratorTable& table) const;
    std::string str(const GeneratorTable& table) const;
    auto operator<=>(const Element&) const = default;
};

// Oriented rewrite relations lead -> tail over a fixed generator table.
struct RewriteSystem {
    struct Rule {
        Monomial lead;
        Element tail;
    };
    const GeneratorTable* table = nullptr;
    std::vector<Rule> rules;

    void add(Monomial lead, Element tail);
    void add(const std::string& relation_lead, const std::string& relation_tail);  // parsed
};

inline constexpr long kRewriteGuard = 1'000'000;  // steps before declaring mis-orientation

// Deterministic normal form: repeatedly rewrites the first (in canonical
// order) reducible term with the first applicable rule. Throws on
// non-homogeneous input or when the step guard is exceeded.
Element normalize(const Element& e, const RewriteSystem& rw);
// Oracle variant: applies applicable (term, rule) pairs in an order driven by
// the given RNG; confluent systems must agree with `normalize`.
Element normalize_random_order(const Element& e, const RewriteSystem& rw, uint64_t seed);

Element multiply(const Element& a, const Element& b, const RewriteSystem& rw);

// Truncation bounds for slice enumeration. stem/sigma ranges bound reporting
// windows; weight/v/a/adams caps bound enumeration.
struct TruncationWindow {
    int weight_cap = 4;
    int v_index_cap = 4;
    int a_exponent_cap = 16;
    int adams_cap = 12;
    int stem_min = -4, stem_max = 12;
    int sigma_min = -12, sigma_max = 12;
};

struct AlgebraPresentation {
    GeneratorTable table;
    RewriteSystem rw;  // rw.table must point at `table`

    AlgebraPresentation() { rw.table = &table; }
    AlgebraPresentation(const AlgebraPresentation& other) : table(other.table), rw(other.rw) {
        rw.table = &table;
    }
    AlgebraPresentation& operator=(const AlgebraPresentation& other) {
        table = other.table;
        rw = other.rw;
        rw.table = &table;
        return *this;
    }
};

// Extra per-call knobs for slice enumeration.
struct SliceOptions {
    // If set, only monomials with this total Adams filtration.
    std::optional<int> adams = std::nullopt;
    // Extra per-generator exponent caps (by id), for degree-0 generators.
    std::map<uint32_t, int> exponent_cap;
    // Exponent floor (negative range) for degree-0 invertible generators.
    std::map<uint32_t, int> exponent_floor;
    // When true, drop monomials divisible by some rewrite lead.
    bool normal_forms_only = true;
};

// All monomials of RO degree d within the window. Exponents of the solved
// coefficient generators (named u_sigma and a_sigma) are computed from the
// degree; every other generator is enumerated under the window caps. Throws
// if an enumerated generator admits unbounded exponents and carries no cap.
std::vector<Monomial> basis_slice(const AlgebraPresentation& pres, RODegree d,
                                  const TruncationWindow& win, const SliceOptions& opts = {});

// A graded slice of a presented quotient ring computed by exact linear
// algebra: ambient monomials modulo the row space of the ideal slice.
// This is canonical regardless of confluence of the oriented rules.
class QuotientSlice {
  public:
    QuotientSlice(const AlgebraPresentation& pres, RODegree d, const TruncationWindow& win,
                  const SliceOptions& opts = {});

    const std::vector<Monomial>& ambient() const { return ambient_; }
    size_t dimension() const { return ambient_.size() - ideal_.rank(); }
    // Coset representatives: ambient monomials at non-pivot coordinates.
    std::vector<Monomial> coset_representatives() const;
    // Canonical reduced coordinates of an element (free-ring terms).
    GF2Vector reduce(const Element& e) const;
    Element reduce_to_element(const Element& e) const;
    bool is_zero_in_quotient(const Element& e) const { return reduce(e).zero(); }

  private:
    const AlgebraPresentation* pres_;
    std::vector<Monomial> ambient_;
    std::map<Monomial, size_t> index_;
    GF2RowSpace ideal_;
};

// Parses a monomial like "t0^2*u_sigma^-1*e1" ("1" for the unit) against the
// table; element syntax is monomials joined by '+' ("0" for zero).
Monomial parse_monomial(const std::string& text, const GeneratorTable& table);
Element parse_element(const std::string& text, const GeneratorTable& table);

}  // namespace rhoext
