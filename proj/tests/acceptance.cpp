// Acceptance gate: ten end-to-end criteria, one [PASS]/[FAIL] line each with
// timing. Exits nonzero when any criterion fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rhoext/charts.hpp"
#include "rhoext/ext.hpp"
#include "rhoext/gf2.hpp"
#include "rhoext/presentation_io.hpp"
#include "rhoext/runconfig.hpp"

using namespace rhoext;

namespace {

bool g_all_ok = true;

void criterion(int num, const std::string& name,
               const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("[%s] %2d. %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", num, name.c_str(),
                secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    g_all_ok = g_all_ok && ok;
}

bool report_ok(const CheckReport& rep, std::string& detail) {
    if (!rep.ok && !rep.failures.empty()) detail += rep.failures.front();
    return rep.ok;
}

bool in_span(const TensorElement& x, const std::vector<TensorElement>& span) {
    std::map<TensorTerm, size_t> index;
    auto touch = [&](const TensorElement& e) {
        for (const auto& t : e.terms) index.emplace(t, index.size());
    };
    touch(x);
    for (const auto& e : span) touch(e);
    GF2RowSpace space(index.size());
    auto coords = [&](const TensorElement& e) {
        GF2Vector v(index.size());
        for (const auto& t : e.terms) v.flip(index.at(t));
        return v;
    };
    for (const auto& e : span) space.insert(coords(e));
    return space.contains(coords(x));
}

// The synthetic-dga window: small ranges keep the kernel scan exhaustive.
TruncationWindow dga_window() {
    TruncationWindow win;
    win.stem_min = -2;
    win.stem_max = 6;
    win.sigma_min = -4;
    win.sigma_max = 4;
    win.a_exponent_cap = 8;
    win.adams_cap = 6;
    return win;
}

}  // namespace

int main() {
    const TruncationWindow win;  // the full acceptance window

    criterion(1, "operation recursion rebuilds the coactions up to index 4",
              [&](std::string& detail) {
                  auto spec = loop_space_comodule(HostKind::BorelA, 5, win.a_exponent_cap);
                  auto ops = equivariant_dl_ops(spec);
                  auto derived = derive_coaction(spec, ops, ExtendedPowerTable::standard(), 4);
                  if (derived.size() != 9) {
                      detail = "expected 9 derived generators";
                      return false;
                  }
                  TensorCalc calc = spec.calc();
                  for (const auto& [name, psi] : derived) {
                      auto closed =
                          calc.normalize(spec.coaction_of.at(spec.module.table.id(name)));
                      if (calc.normalize(psi) != closed) {
                          detail = "psi(" + name + ") disagrees with the closed form";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(2, "cobar Ext over the associated graded matches the first-page counts",
              [&](std::string& detail) {
                  auto spec = loop_space_comodule(HostKind::GrE, 5, win.a_exponent_cap);
                  Cobar cobar(spec);
                  Bss bss;
                  BssPage page0 = bss.page(0);
                  // Over the associated graded the differential changes neither
                  // the module a-exponent nor the Snaith weight (no right-unit
                  // twist, and t0^2 rewrites without an a-term), so the rank of
                  // d on a slice splits into blocks along that bigrading. Image
                  // terms are indexed as encountered, which leaves ranks intact.
                  const GeneratorTable& mtable = spec.module.table;
                  auto key_of = [&](const TensorTerm& t) {
                      MultiDegree d = t.module.degree(mtable);
                      return std::pair{d.bockstein_filtration, d.snaith_weight};
                  };
                  auto image_rank = [&](const std::vector<TensorTerm>& basis) {
                      std::map<std::pair<int, int>, std::vector<const TensorTerm*>> blocks;
                      for (const auto& t : basis) blocks[key_of(t)].push_back(&t);
                      size_t rank = 0;
                      for (const auto& [key, terms] : blocks) {
                          std::map<TensorTerm, size_t> col;
                          std::vector<TensorElement> images;
                          images.reserve(terms.size());
                          for (const TensorTerm* t : terms) {
                              images.push_back(cobar.d(TensorElement::from(*t)));
                              for (const auto& tt : images.back().terms)
                                  col.emplace(tt, col.size());
                          }
                          GF2RowSpace space(col.size());
                          for (const auto& e : images) {
                              GF2Vector v(col.size());
                              for (const auto& tt : e.terms) v.flip(col.at(tt));
                              space.insert(v);
                          }
                          rank += space.rank();
                      }
                      return rank;
                  };
                  // Alignment: the presentation places a class of Adams
                  // filtration s at the stem of its chart position, while the
                  // s-cochains carry the internal degree of their s co-operation
                  // slots — one extra (1,0) per slot ([tau_j] lands at 2^j*rho
                  // - sigma, its presentation image v_j at (2^j-1)*rho). So the
                  // count at degree D and filtration s is compared against
                  // Ext^s in internal degree D + (s,0).
                  //
                  // Over the associated graded d(u_sigma) = 0, so multiplying
                  // by the invertible u_sigma is a cochain isomorphism and Ext
                  // dimensions depend on a degree only through its stem. Check
                  // that vanishing, then compute one representative internal
                  // degree per stem.
                  {
                      TensorElement du = cobar.d(TensorElement::from(
                          TensorTerm{parse_monomial("u_sigma", mtable), {}}));
                      if (!du.terms.empty()) {
                          detail = "d(u_sigma) != 0 over the associated graded";
                          return false;
                      }
                  }
                  // The filtration direction is infinite (v0-towers), so any
                  // finite run fixes a cap; filtrations up to 4 cover all
                  // products of up to v_index_cap co-operation classes.
                  const int s_cap = 4;
                  TruncationWindow ext_win = win;
                  ext_win.stem_max = win.stem_max + s_cap;
                  // The blocked sweep must reproduce the spot computation; pin
                  // it at three degrees before trusting it across the window.
                  for (RODegree D : {RODegree{1, 0}, RODegree{2, 2}, RODegree{6, 0}}) {
                      size_t prev = 0;
                      for (int s = 0; s <= 3; ++s) {
                          auto basis = cobar.basis(D, s, ext_win);
                          size_t rank = image_rank(basis);
                          ExtSlice spot = ext_slice(cobar, D, s, ext_win);
                          if (basis.size() - rank - prev != spot.dimension()) {
                              detail = "filtration sweep disagrees with ext_slice";
                              return false;
                          }
                          prev = rank;
                      }
                  }
                  // ext_dim[stem - stem_min][s] at the representative internal
                  // degree (stem, 0); stems reach stem_max + s_cap via the
                  // degree shift.
                  const int n_stems = ext_win.stem_max - ext_win.stem_min + 1;
                  std::vector<std::array<size_t, 5>> ext_dim(n_stems);
                  parallel_for(static_cast<size_t>(n_stems), [&](size_t i) {
                      int stem = ext_win.stem_min + static_cast<int>(i);
                      RODegree E{stem, 0};
                      size_t prev_rank = 0;
                      for (int s = 0; s <= s_cap; ++s) {
                          auto basis = cobar.basis(E, s, ext_win);
                          size_t rank = image_rank(basis);
                          ext_dim[i][s] = basis.size() - rank - prev_rank;
                          prev_rank = rank;
                      }
                  });
                  std::vector<RODegree> degrees = window_degrees(win);
                  std::vector<std::string> bad(degrees.size());
                  parallel_for(degrees.size(), [&](size_t i) {
                      RODegree D = degrees[i];
                      BssSlice slice(bss, page0, D, win);
                      const GeneratorTable& table = bss.ambient().table;
                      for (int s = 0; s <= s_cap; ++s) {
                          int stem = D.underlying_dimension() + s;
                          size_t computed = ext_dim[stem - ext_win.stem_min][s];
                          size_t closed = slice.dimension_where([&](const Monomial& m) {
                              return m.degree(table).adams_filtration == s;
                          });
                          if (computed != closed)
                              bad[i] = "(" + std::to_string(D.trivial_part) + "," +
                                       std::to_string(D.sign_part) + ") s=" +
                                       std::to_string(s) + ": Ext " +
                                       std::to_string(computed) + " vs presentation " +
                                       std::to_string(closed);
                      }
                  });
                  for (const auto& b : bad)
                      if (!b.empty()) {
                          detail = b;
                          return false;
                      }
                  detail = std::to_string(degrees.size()) + " degrees, filtrations 0.." +
                           std::to_string(s_cap);
                  return true;
              });

    criterion(3, "page runner reproduces the presentations and differentials through n=3",
              [&](std::string& detail) {
                  Bss bss;
                  CheckReport rep;
                  run_to(bss, 3, win, &rep);
                  if (!report_ok(rep, detail)) return false;
                  auto table = bss.ambient().table;
                  Element d1 = bss.page(0).d(parse_monomial("u_sigma", table));
                  Element d3 = bss.page(1).d(parse_monomial("u_sigma^2", table));
                  if (d1 != parse_element("a_sigma*v0", table)) {
                      detail = "d_1(u_sigma) = " + d1.str(table);
                      return false;
                  }
                  if (d3 != parse_element("a_sigma^3*v1", table)) {
                      detail = "d_3(u_sigma^2) = " + d3.str(table);
                      return false;
                  }
                  return true;
              });

    criterion(4, "limit page: torsion orders, degree vanishing, tower stabilization",
              [&](std::string& detail) {
                  Bss bss;
                  return report_ok(verify_torsion_orders(bss, 2, win), detail) &&
                         report_ok(verify_limit_vanishing(bss, win), detail) &&
                         report_ok(verify_stabilization(bss, 5, win), detail);
              });

    criterion(5, "annihilator ideals of the torsion classes for n <= 2",
              [&](std::string& detail) {
                  Bss bss;
                  const GeneratorTable& table = bss.ambient().table;
                  // Page n is u_sigma^{2^n}-periodic: that unit commutes with
                  // multiplication by the torsion class and maps the claimed
                  // ideal onto itself, so the kernel scan at (t,s) repeats at
                  // (t+2^n, s-2^n). A sigma band wider than the period per
                  // stem therefore sees every slice up to that isomorphism.
                  TruncationWindow band = win;
                  band.sigma_min = -4;
                  band.sigma_max = 4;
                  auto check = [&](int n, const TruncationWindow& scan,
                                   std::string& why) {
                      ClaimedGenerators claimed;
                      claimed.elements.push_back(
                          parse_element("e1^" + std::to_string(1 << n), table));
                      for (int j = 0; j < n; ++j) claimed.v_families.push_back(j);
                      Element x = parse_element(
                          "a_sigma^" + std::to_string((1 << (n + 1)) - 1) + "*v" +
                              std::to_string(n),
                          table);
                      auto res = annihilator(bss, bss.page(n), x, claimed, scan);
                      if (!res.report.ok)
                          why = "n=" + std::to_string(n) + ": " +
                                (res.report.failures.empty()
                                     ? "mismatch"
                                     : res.report.failures.front());
                      return res.report.ok;
                  };
                  for (int n = 0; n <= 2; ++n)
                      if (!check(n, band, detail)) return false;
                  // e1^4 carries weight 8, above the window cap, so the span
                  // side never meets it in the band scan. Rerun n=2 at weight
                  // cap 8 on the region holding the e1^4-divisible slices
                  // (e1^4 u^j a_sigma^k sits at stem 8-k, sigma 4-j-k).
                  TruncationWindow focus = win;
                  focus.weight_cap = 8;
                  focus.stem_min = 4;
                  focus.stem_max = 8;
                  focus.sigma_min = 0;
                  focus.sigma_max = 4;
                  return check(2, focus, detail);
              });

    criterion(6, "hidden extensions: Massey bracket, product relation, bounding cochains",
              [&](std::string& detail) {
                  auto spec = loop_space_comodule(HostKind::BorelE, 5, 8);
                  Cobar cobar(spec);
                  TruncationWindow mwin = win;
                  mwin.a_exponent_cap = 8;
                  auto tensor = [&](const std::string& s) {
                      return parse_tensor(s, spec.module.table, spec.host.host);
                  };
                  auto a = tensor("a_sigma");
                  auto e1 = tensor("e1");
                  auto v0 = tensor("1 # tau0");
                  auto t0sq = tensor("a_sigma*t1 + u_sigma*e1");  // t0^2 in normal form
                  auto res = massey_triple(cobar, a, v0, e1, mwin);
                  std::vector<TensorElement> span = res.indeterminacy;
                  if (res.defined) span.push_back(res.representative);
                  if (!res.defined || !in_span(t0sq, span)) {
                      detail = "t0^2 not found in <a_sigma, v0, e1>";
                      return false;
                  }
                  auto lhs = cobar.product(v0, t0sq);
                  auto rhs = tensor("a_sigma^2*e1 # tau1");
                  if (!solve_boundary(cobar, lhs.plus(rhs), mwin).has_value()) {
                      detail = "v0 t0^2 + a^2 v1 e1 does not bound";
                      return false;
                  }
                  for (int n = 0; n <= 1; ++n) {
                      TruncationWindow wide = mwin;
                      if (n == 1) wide.weight_cap = 8;
                      if (!verify_vanishing_relation(cobar, n, wide).has_value()) {
                          detail = "no bounding cochain at n=" + std::to_string(n);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(7, "relation rings are integral domains with regular relations at desk scale",
              [&](std::string& detail) {
                  for (auto [k, bound] : {std::pair{0, 20}, std::pair{1, 16}}) {
                      DomainScanReport rep = laurent_domain_scan(k, bound);
                      if (!rep.ok || !rep.confluent) {
                          detail = "k=" + std::to_string(k) + ": " +
                                   (rep.failures.empty() ? "confluence sample failed"
                                                         : rep.failures.front());
                          return false;
                      }
                      if (rep.pairs_checked == 0 || rep.injectivity_slices == 0) {
                          detail = "k=" + std::to_string(k) + ": empty scan";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(8, "weight split by t0 and the classical specialization of the limit",
              [&](std::string& detail) {
                  Bss bss;
                  return report_ok(verify_weight_split(bss, win), detail) &&
                         report_ok(verify_classical_specialization(bss, win), detail);
              });

    criterion(9, "kernel generators span the homology of three synthetic dgas",
              [&](std::string& detail) {
                  TruncationWindow dwin = dga_window();

                  {  // d(x) = y with y^2 = 0.
                      AlgebraPresentation pres;
                      uint32_t x = pres.table.add("x", MultiDegree{{1, 0}, 0, 0, 0});
                      uint32_t y = pres.table.add("y", MultiDegree{{0, 0}, 1, 0, 0});
                      pres.rw.add(Monomial::gen(y, 2), Element::zero());
                      Derivation d;
                      d.images[x] = Element::from(Monomial::gen(y));
                      d.shift = {-1, 0};
                      d.adams_shift = 1;
                      auto gens =
                          kernel_generator_set(pres, x, {Element::from(Monomial::gen(y))});
                      if (!report_ok(verify_kernel_generators(pres, d, gens, dwin), detail))
                          return false;
                  }
                  {  // invertible source with an annihilated image
                      AlgebraPresentation pres;
                      uint32_t x = pres.table.add("u_sigma", true);
                      pres.table.add("a_sigma");
                      uint32_t v = pres.table.add("v", MultiDegree{{0, 0}, 1, 0, 0});
                      uint32_t e = pres.table.add("e", MultiDegree{{1, 1}, 0, 0, 2});
                      pres.rw.add(Monomial::gen(v).times(Monomial::gen(e)), Element::zero());
                      Derivation d;
                      d.images[x] = parse_element("a_sigma*v", pres.table);
                      d.shift = {-1, 0};
                      d.adams_shift = 1;
                      d.a_shift = 1;
                      auto gens =
                          kernel_generator_set(pres, x, {Element::from(Monomial::gen(e))});
                      if (!report_ok(verify_kernel_generators(pres, d, gens, dwin), detail))
                          return false;
                  }
                  {  // a small model of the first page
                      AlgebraPresentation pres;
                      uint32_t u = pres.table.add("u_sigma", true);
                      pres.table.add("a_sigma");
                      uint32_t v0 = pres.table.add("v0");
                      uint32_t t0 = pres.table.add("t0");
                      uint32_t e1 = pres.table.add("e1");
                      pres.rw.add(Monomial::gen(t0, 2),
                                  Element::from(Monomial::gen(u).times(Monomial::gen(e1))));
                      pres.rw.add(Monomial::gen(v0).times(Monomial::gen(e1)),
                                  Element::zero());
                      Derivation d;
                      d.images[u] = parse_element("a_sigma*v0", pres.table);
                      d.shift = {-1, 0};
                      d.adams_shift = 1;
                      d.a_shift = 1;
                      auto gens =
                          kernel_generator_set(pres, u, {Element::from(Monomial::gen(e1))});
                      if (!report_ok(verify_kernel_generators(pres, d, gens, dwin), detail))
                          return false;
                  }
                  return true;
              });

    criterion(10, "classical operation recursion rebuilds the coactions up to x4",
              [&](std::string& detail) {
                  auto spec = classical_loop_comodule(5);
                  auto ops = classical_dl_ops(spec);
                  auto derived = derive_classical_coaction(spec, ops, 4);
                  for (int i = 1; i <= 4; ++i) {
                      std::string name = "x" + std::to_string(i);
                      if (derived.at(name) !=
                          spec.coaction_of.at(spec.module.table.id(name))) {
                          detail = "psi(" + name + ") disagrees with the closed form";
                          return false;
                      }
                  }
                  // The recursion uses Q1(xi_k) = xi_{k+1} + xi1 xi_k^2; spot-check it.
                  auto xi1 = TensorElement::from(
                      TensorTerm{Monomial::one(), {Monomial::gen(spec.host.host.id("xi1"))}});
                  auto got = ops.q(1, xi1);
                  auto want = parse_tensor("1 # xi2 + 1 # xi1^3", spec.module.table,
                                           spec.host.host);
                  if (got != want) {
                      detail = "Q1(xi1) = " +
                               tensor_str(got, spec.module.table, spec.host.host);
                      return false;
                  }
                  return true;
              });

    return g_all_ok ? 0 : 1;
}
