#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "rhoext/charts.hpp"

using namespace rhoext;

namespace {

TruncationWindow small_window() {
    TruncationWindow win;
    win.stem_min = -2;
    win.stem_max = 6;
    win.sigma_min = -4;
    win.sigma_max = 4;
    win.a_exponent_cap = 8;
    win.adams_cap = 6;
    return win;
}

const ChartDot* find_dot(const Chart& c, int stem, int filtration,
                         const std::string& label) {
    for (const auto& d : c.dots)
        if (d.stem == stem && d.filtration == filtration && d.label == label) return &d;
    return nullptr;
}

size_t dot_index(const Chart& c, int stem, int filtration, const std::string& label) {
    for (size_t i = 0; i < c.dots.size(); ++i)
        if (c.dots[i].stem == stem && c.dots[i].filtration == filtration &&
            c.dots[i].label == label)
            return i;
    FAIL("missing dot ", label, " at (", stem, ",", filtration, ")");
    return 0;
}

bool has_line(const Chart& c, const std::string& kind, size_t from, size_t to) {
    for (const auto& l : c.lines)
        if (l.kind == kind && l.from == from && l.to == to) return true;
    return false;
}

bool has_line_from(const Chart& c, const std::string& kind, size_t from) {
    for (const auto& l : c.lines)
        if (l.kind == kind && l.from == from) return true;
    return false;
}

size_t count_occurrences(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

std::string golden_path(const std::string& name) {
    return std::string(RHOEXT_GOLDEN_DIR) + "/" + name;
}

void check_golden(const Chart& c, const std::string& name) {
    std::string got = emit_tsv(c);
    if (std::getenv("RHOEXT_REGEN_GOLDEN")) {
        std::ofstream out(golden_path(name), std::ios::binary);
        out << got;
    }
    std::ifstream in(golden_path(name), std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", name,
                    " (run with RHOEXT_REGEN_GOLDEN=1 once to create it)");
    std::ostringstream want;
    want << in.rdbuf();
    CHECK_MESSAGE(got == want.str(), "golden mismatch for ", name);
    CHECK(parse_tsv(want.str()) == c);
}

}  // namespace

TEST_CASE("weight-0 chart of the limiting page") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    Chart c = chart_of_page(bss, lim, 0, win);

    CHECK(c.page == "einfty");
    CHECK(c.weight == 0);
    CHECK(c.classes > c.dots.size());  // periodic families collapse

    SUBCASE("periodic generators land where expected") {
        const ChartDot* v1 = find_dot(c, 2, 1, "v1");
        REQUIRE(v1 != nullptr);
        CHECK(v1->period == 4);
        const ChartDot* v0 = find_dot(c, 0, 1, "v0");
        REQUIRE(v0 != nullptr);
        CHECK(v0->period == 2);
        const ChartDot* unit = find_dot(c, 0, 0, "1");
        REQUIRE(unit != nullptr);
        CHECK(unit->period == 0);  // pure u-powers die before the limit
    }

    SUBCASE("structure lines from the unit") {
        size_t unit = dot_index(c, 0, 0, "1");
        CHECK(has_line(c, "v0", unit, dot_index(c, 0, 1, "v0")));
        CHECK(has_line(c, "v1", unit, dot_index(c, 2, 1, "v1")));
        CHECK(has_line(c, "a_sigma", unit, dot_index(c, -1, 0, "a_sigma")));
        size_t a1 = dot_index(c, -1, 0, "a_sigma");
        CHECK(has_line(c, "a_sigma", a1, dot_index(c, -2, 0, "a_sigma^2")));
    }

    SUBCASE("line endpoints are dots") {
        for (const auto& l : c.lines) {
            CHECK(l.from < c.dots.size());
            CHECK(l.to < c.dots.size());
        }
    }
}

TEST_CASE("dot counts equal slice dimensions") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    const GeneratorTable& table = bss.ambient().table;

    for (int w : {0, 2}) {
        CAPTURE(w);
        Chart c = chart_of_page(bss, lim, w, win);

        size_t classes = 0;
        std::map<std::pair<int, int>, size_t> class_count, dim_count;
        std::map<std::pair<int, int>, std::set<Monomial>> keys;
        for (RODegree D : window_degrees(win)) {
            BssSlice s(bss, lim, D, win);
            int stem = D.underlying_dimension();
            std::set<int> filtrations;
            for (const auto& m : s.basis()) {
                MultiDegree md = m.degree(table);
                if (md.snaith_weight != w) continue;
                ++classes;
                ++class_count[{stem, md.adams_filtration}];
                filtrations.insert(md.adams_filtration);
                Monomial stripped;
                for (const auto& f : m.factors)
                    if (f.first != bss.u_id()) stripped.factors.push_back(f);
                keys[{stem, md.adams_filtration}].insert(stripped);
            }
            for (int f : filtrations)
                dim_count[{stem, f}] += s.dimension_where([&](const Monomial& m) {
                    MultiDegree md = m.degree(table);
                    return md.snaith_weight == w && md.adams_filtration == f;
                });
        }
        // No rendering loss: the class totals per position match the slice
        // dimensions, and the dots are exactly the periodicity classes.
        CHECK(c.classes == classes);
        CHECK(class_count == dim_count);
        std::map<std::pair<int, int>, size_t> dots;
        for (const auto& d : c.dots) ++dots[{d.stem, d.filtration}];
        CHECK(dots.size() == keys.size());
        for (const auto& [pos, ks] : keys) CHECK(dots[pos] == ks.size());
    }
}

TEST_CASE("weight-2 chart carries the hidden line") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    Chart c = chart_of_page(bss, lim, 2, win);

    size_t t0sq = dot_index(c, 2, 0, "t0^2");
    size_t high = dot_index(c, 2, 1, "a_sigma^2*v1*e1");
    CHECK(has_line(c, "hidden", t0sq, high));
    // The honest v0-product vanishes on the limiting page; only the dashed
    // hidden line connects the two classes.
    CHECK(!has_line_from(c, "v0", t0sq));

    SUBCASE("optional u_sigma e1 labelling") {
        ChartOptions opts;
        opts.u_e1_labels = true;
        Chart alt = chart_of_page(bss, lim, 2, win, opts);
        CHECK(find_dot(alt, 2, 0, "t0^2") == nullptr);
        CHECK(find_dot(alt, 2, 0, "u_sigma*e1") != nullptr);
    }
}

TEST_CASE("the weight-1 chart is the weight-0 chart shifted by t0") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    Chart c0 = chart_of_page(bss, lim, 0, win);
    Chart c1 = chart_of_page(bss, lim, 1, win);

    std::multiset<std::tuple<int, int, int>> shifted, odd;
    for (const auto& d : c0.dots)
        if (d.stem < win.stem_max) shifted.insert({d.stem + 1, d.filtration, d.period});
    for (const auto& d : c1.dots)
        if (d.stem > win.stem_min) odd.insert({d.stem, d.filtration, d.period});
    CHECK(!shifted.empty());
    CHECK(shifted == odd);
}

TEST_CASE("v-line depth control") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();

    ChartOptions none;
    none.v_line_cap = -1;
    Chart bare = chart_of_page(bss, lim, 0, win, none);
    for (const auto& l : bare.lines) CHECK(l.kind == "a_sigma");

    ChartOptions deep;
    deep.v_line_cap = 2;
    Chart c = chart_of_page(bss, lim, 0, win, deep);
    size_t unit = dot_index(c, 0, 0, "1");
    CHECK(has_line(c, "v2", unit, dot_index(c, 6, 1, "v2")));
}

TEST_CASE("charts of running pages") {
    Bss bss;
    TruncationWindow win = small_window();
    Chart c = chart_of_page(bss, bss.page(0), 0, win);
    CHECK(c.page == "1");
    // On the first page every u-power is present, so the unit family is
    // u_sigma-periodic with period 1.
    const ChartDot* unit = find_dot(c, 0, 0, "1");
    REQUIRE(unit != nullptr);
    CHECK(unit->period == 1);
}

TEST_CASE("TSV round trip") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    for (int w : {0, 1, 2}) {
        Chart c = chart_of_page(bss, lim, w, win);
        CHECK(parse_tsv(emit_tsv(c)) == c);
    }
    Chart empty;
    CHECK(parse_tsv(emit_tsv(empty)) == empty);
    CHECK_THROWS(parse_tsv("no header"));
    CHECK_THROWS(parse_tsv("# page=einfty weight=0 classes=0\n1\t2\t3\n"));
}

TEST_CASE("golden charts") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    check_golden(Chart{}, "empty.tsv");
    check_golden(chart_of_page(bss, lim, 0, win), "weight0_pageeinfty.tsv");
    check_golden(chart_of_page(bss, lim, 2, win), "weight2_pageeinfty.tsv");
}

TEST_CASE("SVG output") {
    Bss bss;
    BssPage lim = bss.limit();
    TruncationWindow win = small_window();
    Chart c = chart_of_page(bss, lim, 2, win);
    std::string svg = emit_svg(c);

    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") !=
          std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "<circle") == c.dots.size());
    CHECK(svg.find("hidden red dashed") != std::string::npos);  // legend
    CHECK(svg.find("stroke-dasharray") != std::string::npos);   // the hidden line
    CHECK(emit_svg(c) == svg);                                  // deterministic

    CHECK(emit(c, "svg") == svg);
    CHECK(emit(c, "tsv") == emit_tsv(c));
    CHECK_THROWS(emit(c, "png"));
    CHECK(chart_basename(c) == "weight2_pageeinfty");
}
