#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rhoext/algebra.hpp"
#include "rhoext/gf2.hpp"

namespace rhoext {

// Runner for the multiplicative spectral sequence of the a_sigma-adic
// filtration on the loop-space Ext computation. Each page has two
// representations: a closed-form description (a subalgebra of an explicit
// quotient presentation) and window slices computed by exact linear algebra;
// the runner verifies that the two agree.

struct BssOptions {
    int v_count = 8;  // generators v0 .. v{v_count-1}
    int e_count = 5;  // generators e1 .. e{e_count}
};

// A multiplicative relation of the filtered object that jumps a-filtration:
// the product `low` equals `high` in the abutment. On the limiting page only
// the leading (lowest a-exponent) part of `low` dies — that is what makes the
// extension hidden — and `high` survives strictly higher in the filtration.
// Recorded as an annotation, never as a relation of the presentation.
struct BssAnnotation {
    Element low;
    Element high;
    std::string note;
};

// The page E_r with r = 2^{index+1} - 1, or the limiting page. The page is
// the subalgebra of `quotient()` generated by u^{+-2^index}, a_sigma, t0, the
// e's, v_j for j >= index, and u^{2^{j+1}k} v_j for j < index, taken modulo
// the torsion ideal spanned by a^{2^{j+1}-1} v_j times page-(j+1) members for
// each j < index. The torsion relations are *not* relations of the ambient
// quotient: their cofactors are restricted to the subalgebra, because classes
// like a^{2^{j+1}-1} v_j times an odd u-power are not boundaries and must
// survive. Slices impose the torsion rows per degree. The limiting page drops
// the pure u powers and admits the v-coupled u powers for all j.
class BssPage {
  public:
    int index() const { return index_; }
    bool is_limit() const { return limit_; }
    int r() const { return (1 << (index_ + 1)) - 1; }
    // The ambient differential-free presentation (shared by all pages).
    const AlgebraPresentation& quotient() const { return quot_; }
    // Number of torsion families j with a^{2^{j+1}-1} v_j killed on this page.
    int torsion_limit() const;
    const std::vector<BssAnnotation>& annotations() const { return annotations_; }

    // Subalgebra membership of a raw monomial: its u-exponent must be a
    // multiple of 2^g, where g = min(index, 1 + smallest torsioned v-index
    // present). On the limiting page a monomial without v factors must have
    // u-exponent zero.
    bool member(const Monomial& m) const;

    // The differential d_r of a member monomial: zero when a torsioned v is
    // present or the u-exponent is an even multiple of 2^index; otherwise
    // m * u^{-2^index} * a^r * v_index. Throws on non-members and on the
    // limiting page.
    Element d(const Monomial& m) const;
    Element d(const Element& e) const;  // termwise

  private:
    friend class Bss;
    AlgebraPresentation quot_;
    int index_ = 0;
    bool limit_ = false;
    uint32_t u_id_ = 0;
    uint32_t a_id_ = 0;
    std::vector<uint32_t> v_ids_;
    std::vector<BssAnnotation> annotations_;
};

class Bss {
  public:
    explicit Bss(BssOptions opts = {});

    const AlgebraPresentation& ambient() const { return ambient_; }
    int v_count() const { return opts_.v_count; }
    int e_count() const { return opts_.e_count; }
    uint32_t u_id() const { return u_id_; }
    uint32_t a_id() const { return a_id_; }
    uint32_t t0_id() const { return t0_id_; }
    uint32_t v_id(int j) const { return v_ids_.at(j); }
    uint32_t e_id(int k) const { return e_ids_.at(k - 1); }

    // r_k = sum_{j<k} v_j e_{k-j}^{2^j}.
    Element relation(int k) const;

    BssPage page(int n) const;   // E_{2^{n+1}-1}
    BssPage limit() const;       // the limiting page, with annotations

  private:
    BssOptions opts_;
    AlgebraPresentation ambient_;  // generators + the differential-free relations
    uint32_t u_id_ = 0, a_id_ = 0, t0_id_ = 0;
    std::vector<uint32_t> v_ids_, e_ids_;
};

// Window options shared by all page slices: v-indices above the window cap
// are excluded from enumeration.
SliceOptions bss_slice_options(const Bss& bss, const TruncationWindow& win);

// One (page, RO degree) slice: the span of the raw member monomials inside
// the ambient quotient slice, modulo the page's torsion rows (each torsion
// class times the member monomials of the page on which it first dies).
class BssSlice {
  public:
    BssSlice(const Bss& bss, const BssPage& page, RODegree d, const TruncationWindow& win);

    RODegree degree() const { return degree_; }
    const std::vector<Monomial>& members() const { return members_; }
    // Members whose images are linearly independent (greedy, after torsion).
    const std::vector<Monomial>& basis() const { return basis_; }
    size_t dimension() const { return basis_.size(); }
    // Rank of the span of members passing the filter (the ambient ideal and
    // the torsion rows are homogeneous for the a-exponent, Adams, and weight
    // gradings, so filtered ranks are dimensions of the graded pieces).
    size_t dimension_where(const std::function<bool(const Monomial&)>& keep) const;

    GF2Vector reduce(const Element& e) const { return torsion_.reduce(quot_.reduce(e)); }
    bool is_zero(const Element& e) const { return reduce(e).zero(); }
    size_t width() const { return quot_.ambient().size(); }

  private:
    const BssPage* page_;
    RODegree degree_;
    QuotientSlice quot_;
    GF2RowSpace torsion_;
    std::vector<Monomial> members_;
    std::vector<Monomial> basis_;
};

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;
    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
};

// The reporting grid: degrees (stem - w, w) for stems and sign-weights w in
// the window ranges.
std::vector<RODegree> window_degrees(const TruncationWindow& win);

// Builds pages 0..n, verifying at each step that the membership dimensions of
// page j+1 equal the linear-algebra homology of page j's differential on
// every window slice (graded piece by graded piece where the window caps
// permit an exact computation). Also verifies that the differential descends
// to the quotient. Returns page n; failures are recorded in the report, or
// thrown when no report is supplied.
BssPage run_to(const Bss& bss, int n, const TruncationWindow& win, CheckReport* report = nullptr);

// Claimed generating set for an annihilator ideal: explicit homogeneous
// elements plus whole families u^{2^{j+1}k} v_j (over all k). Within the
// page subalgebra the ideal of the family j is spanned by exactly the member
// monomials with a positive v_j exponent.
struct ClaimedGenerators {
    std::vector<Element> elements;
    std::vector<int> v_families;
};

// All elements of the page slices in the window annihilated by x (kernel of
// the multiplication map, so combinations are found, not just monomials),
// factored against a claimed generating set: every found annihilator must lie
// in the ideal the claimed generators span within the window, and every
// claimed generator must annihilate x.
struct AnnihilatorResult {
    std::vector<Element> found;
    CheckReport report;
};
AnnihilatorResult annihilator(const Bss& bss, const BssPage& page, const Element& x,
                              const ClaimedGenerators& claimed, const TruncationWindow& win);

// The family u^{2^{j+1}k} v_j for all k with |2^{j+1}k| <= u_range.
std::vector<Element> u_power_torsion_family(const Bss& bss, int j, int u_range);

// d_r vanishes on a_sigma, t0, each e_k, each v_j with j >= index, and each
// u^{2^{j+1}k} v_j with j < index; on u^{2^index} it takes the stated value.
CheckReport verify_permanent_cycles(const Bss& bss, const BssPage& page);

// d_r(xy) = d_r(x) y + x d_r(y) for window products that stay inside the caps.
CheckReport verify_leibniz(const Bss& bss, const BssPage& page, const TruncationWindow& win);

// The differentials d_r for 2^n - 1 < r < 2^{n+1} - 1 all act on pages equal
// to page n and vanish: every generator except the u powers is a permanent
// cycle, and for the u powers the target slices (one cohomological degree up,
// a-exponent r, weight zero) are empty. With the Leibniz rule this forces
// d_r = 0 on every slice.
CheckReport verify_intermediate_vanishing(const Bss& bss, const BssPage& page,
                                          const TruncationWindow& win);

// The limiting page is empty in all degrees j*rho - 1 and j*rho + sigma
// inside the window.
CheckReport verify_limit_vanishing(const Bss& bss, const TruncationWindow& win);

// Exact torsion orders on the limiting page: a^{2^{j+1}-1} v_j = 0 while
// a^{2^{j+1}-2} v_j != 0, for j <= j_max.
CheckReport verify_torsion_orders(const Bss& bss, int j_max, const TruncationWindow& win);

// Per-degree stabilization: the slice dimensions of pages n_start, n_start+1,
// n_start+2 are constant and equal to the limiting page dimension.
CheckReport verify_stabilization(const Bss& bss, int n_start, const TruncationWindow& win);

// Each recorded annotation is degree-consistent and jumps the a-filtration:
// the leading part of the low side reduces to zero on the limiting page and
// the high side is nonzero there.
CheckReport verify_hidden_annotations(const Bss& bss, const TruncationWindow& win);

// Multiplication by t0 is a bijection from each even-weight graded piece of a
// limiting slice to the odd-weight piece one step up.
CheckReport verify_weight_split(const Bss& bss, const TruncationWindow& win);

// In degrees n*rho the limiting page has the dimensions of the u = 1, a = 0
// specialization: the singly graded ring F2[v..., x0, y1, ...]/(x0^2, r_k) in
// degree 2n.
CheckReport verify_classical_specialization(const Bss& bss, const TruncationWindow& win);

// The annihilator ideal of a^{2^{n+1}-1} on page n is generated by the
// v-coupled u powers below n, and the quotient of the page by that ideal has
// the dimensions of F2[u^{+-2^n}, a, v_{>=n}, t0, e...] modulo
// (t0^{2^{n+1}} + u^{2^n} e1^{2^n}) and the truncated relations.
CheckReport verify_annihilator_quotient(const Bss& bss, int n, const TruncationWindow& win);

// ---------- graded differential algebra utilities ----------

// An F2-linear derivation given by its values on generators.
struct Derivation {
    std::map<uint32_t, Element> images;  // absent = zero
    RODegree shift;                      // common degree shift of the images
    int adams_shift = 0;                 // common Adams-filtration shift
    int a_shift = 0;                     // common a-exponent shift

    Element apply(const Monomial& m, const AlgebraPresentation& pres) const;
    Element apply(const Element& e, const AlgebraPresentation& pres) const;
};

// Generating set for the kernel of a derivation with a single nonzero value
// d(x1) = y: all generators except x1, then x1^2 (and x1^{-2} when x1 is
// invertible), then the annihilator generators of y and their x1-multiples.
std::vector<Element> kernel_generator_set(const AlgebraPresentation& pres, uint32_t x1,
                                          const std::vector<Element>& ann_image);

// All products of powers of the given homogeneous elements landing in degree
// d, within the window caps. At most one mutually inverse pair is allowed
// among the generators; its net exponent is solved from the degree.
std::vector<Element> product_span(const AlgebraPresentation& pres,
                                  const std::vector<Element>& gens, RODegree d,
                                  const TruncationWindow& win);

// Verifies on every window degree that the kernel of the derivation on the
// quotient slices equals the span of products of the given elements.
CheckReport verify_kernel_generators(const AlgebraPresentation& pres, const Derivation& d,
                                     const std::vector<Element>& gens,
                                     const TruncationWindow& win);

// ---------- integral-domain / regular-sequence scan ----------

// The singly graded Laurent ring F2[w^{+-1}, v0, v1, ..., e0, e1, ...] modulo
// r_1 = e0^{2^{k+1}} + w e1^{2^k} and r_n = sum_{i<n} v_i e_{n-i}^{2^{i+k}},
// with |w| = 0, |v_j| = 2(2^{j+k} - 1), |e_i| = 2(2^i - 1), |e0| = 1.
AlgebraPresentation laurent_relation_ring(int k, int relation_count, int e_count,
                                          int v_count);

struct DomainScanOptions {
    int adams_cap = 6;             // bound on the total v-exponent
    int confluence_samples = 200;  // products re-normalized in randomized order
    uint64_t seed = 1;
};

struct DomainScanReport {
    bool ok = true;
    size_t pairs_checked = 0;
    size_t injectivity_slices = 0;
    bool confluent = true;  // sampled normal forms agree under randomized rewrite order
    std::vector<std::string> failures;
};

// Exhaustive scan up to the degree bound: no product of two normal-form basis
// monomials normalizes to zero (integral domain), the normalized images of
// each slice under multiplication by r_n stay linearly independent over the
// quotient by the earlier relations (regular sequence), and 1 * x = x.
// Representatives are taken at w-exponent zero: w is a degree-0 unit outside
// every rewrite lead, so each monomial is a w-power times a representative and
// products vanish if and only if the representative products do.
DomainScanReport laurent_domain_scan(int k, int degree_bound, DomainScanOptions opts = {});

}  // namespace rhoext
