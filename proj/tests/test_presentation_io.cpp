#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "rhoext/bockstein.hpp"
#include "rhoext/ext.hpp"
#include "rhoext/presentation_io.hpp"

using namespace rhoext;

namespace {

void check_data_file(const std::string& name, const std::string& want) {
    if (std::getenv("RHOEXT_REGEN_DATA")) {
        std::ofstream out(data_file_path(name), std::ios::binary);
        out << want;
    }
    CHECK_MESSAGE(read_data_file(name) == want, "stale data file ", name,
                  " (run with RHOEXT_REGEN_DATA=1 once to refresh it)");
}

std::string replace_line(const std::string& text, const std::string& prefix,
                         const std::string& replacement) {
    size_t pos = text.find(prefix);
    REQUIRE(pos != std::string::npos);
    size_t end = text.find('\n', pos);
    return text.substr(0, pos) + replacement + text.substr(end);
}

}  // namespace

TEST_CASE("algebra presentations round-trip") {
    Bss bss;
    std::string s = serialize(bss.ambient());
    AlgebraPresentation p = parse_presentation(s);
    CHECK(serialize(p) == s);
    CHECK(p.table.size() == bss.ambient().table.size());

    SUBCASE("the parsed rewrite system behaves identically") {
        Element got = normalize(parse_element("t0^2", p.table), p.rw);
        CHECK(got == parse_element("u_sigma*e1", p.table));
        CHECK(normalize(parse_element("v0*e1", p.table), p.rw).is_zero());
    }

    SUBCASE("attributes survive") {
        uint32_t u = p.table.id("u_sigma");
        CHECK(p.table.gen(u).invertible);
        CHECK(p.table.gen(p.table.id("a_sigma")).degree.bockstein_filtration == 1);
        CHECK(p.table.gen(p.table.id("v1")).degree.adams_filtration == 1);
        CHECK(p.table.gen(p.table.id("e2")).degree.snaith_weight == 4);
    }

    SUBCASE("malformed input is rejected") {
        CHECK_THROWS(parse_presentation("generator x degree(0,0)\n"));  // no header
        CHECK_THROWS(parse_presentation("presentation\ngenerator x\n"));
        CHECK_THROWS(parse_presentation("presentation\ngenerator x degree(0,0) huh\n"));
        CHECK_THROWS(parse_presentation("presentation\nrelation x^2\n"));
        CHECK_THROWS(parse_presentation("presentation\nwhatever x\n"));
    }
}

TEST_CASE("host files round-trip for every builder") {
    std::vector<HopfAlgebroidSpec> hosts = {
        genuine_dual_steenrod(4), borel_dual_steenrod(4, 8), borel_exterior(4, 8),
        gr_exterior(4),           classical_dual_steenrod(4), classical_exterior(4)};
    for (const auto& spec : hosts) {
        CAPTURE(spec.name);
        std::string s = serialize(spec);
        HopfAlgebroidSpec back = parse_hopf_algebroid(s);
        CHECK(serialize(back) == s);
        CHECK(back.kind == spec.kind);
        CHECK(back.a_cap == spec.a_cap);
        CHECK(back.eta_r_twist == spec.eta_r_twist);
        CHECK(back.squares.size() == spec.squares.size());
        CHECK(back.host.size() == spec.host.size());
    }
}

TEST_CASE("coproduct stanzas are verified, not trusted") {
    std::string s = serialize(borel_exterior(3, 8));
    CHECK_NOTHROW(parse_hopf_algebroid(s));
    std::string bad = replace_line(s, "coproduct tau1", "coproduct tau1 = 1 # tau1 # 1");
    CHECK_THROWS(parse_hopf_algebroid(bad));
    CHECK_THROWS(parse_hopf_algebroid(replace_line(s, "kind", "kind Borel")));
    CHECK_THROWS(
        parse_hopf_algebroid(replace_line(s, "etaR", "etaR u_sigma = u_sigma # tau0")));
}

TEST_CASE("comodule files round-trip with their operations") {
    ComoduleSpec spec = loop_space_comodule(HostKind::BorelA, 4, 8);
    QOps ops = equivariant_dl_ops(spec);
    std::string s = serialize(spec, &ops);

    ComoduleSpec back = parse_comodule(s);
    QOps back_ops = parse_ops(s, back);
    CHECK(serialize(back, &back_ops) == s);
    CHECK(back.underlies_e_infty == spec.underlies_e_infty);
    CHECK(back.coaction_of == spec.coaction_of);
    for (int eps = 0; eps < 2; ++eps) {
        CHECK(back_ops.module_rule[eps] == ops.module_rule[eps]);
        CHECK(back_ops.host_rule[eps] == ops.host_rule[eps]);
    }

    SUBCASE("the parsed comodule computes") {
        Cobar cobar(back);
        TensorElement du = cobar.d(TensorElement::from(
            TensorTerm{parse_monomial("u_sigma", back.module.table), {}}));
        TensorElement want = TensorElement::from(
            TensorTerm{parse_monomial("a_sigma", back.module.table),
                       {parse_monomial("tau0", back.host.host)}});
        CHECK(du == want);
    }

    SUBCASE("classical comodule too") {
        ComoduleSpec cl = classical_loop_comodule(4);
        QOps cl_ops = classical_dl_ops(cl);
        std::string ct = serialize(cl, &cl_ops);
        ComoduleSpec cl_back = parse_comodule(ct);
        QOps cl_back_ops = parse_ops(ct, cl_back);
        CHECK(serialize(cl_back, &cl_back_ops) == ct);
        CHECK(cl_back_ops.classical);
    }

    SUBCASE("operation stanzas are required by parse_ops") {
        CHECK_THROWS(parse_ops(serialize(spec), spec));
    }
}

TEST_CASE("tensor text round-trips") {
    ComoduleSpec spec = loop_space_comodule(HostKind::BorelE, 3, 8);
    const GeneratorTable& mt = spec.module.table;
    const GeneratorTable& ht = spec.host.host;
    for (const char* text :
         {"0", "t1 # 1 + e1 # tau0", "a_sigma^2*e1 # tau0*tau1 # 1",
          "u_sigma^-1*t0 # tau2"}) {
        TensorElement e = parse_tensor(text, mt, ht);
        CHECK(tensor_str(e, mt, ht) == text);
    }
}

TEST_CASE("right-unit axiom file") {
    CHECK(eta_twist_axiom());
    CHECK(borel_exterior(2, 4).eta_r_twist);
    CHECK(genuine_dual_steenrod(2).eta_r_twist);
    CHECK(!gr_exterior(2).eta_r_twist);
    // The file spells out exactly the convention the builders run with.
    std::string axiom = read_data_file("eta_right.axiom");
    CHECK(axiom.find("etaR u_sigma = u_sigma # 1 + a_sigma # tau0") != std::string::npos);
}

TEST_CASE("shipped spec files match the builders") {
    check_data_file("genuine_dual_steenrod.hopf", serialize(genuine_dual_steenrod()));
    check_data_file("borel_exterior.hopf", serialize(borel_exterior()));
    {
        ComoduleSpec spec = loop_space_comodule(HostKind::BorelA);
        QOps ops = equivariant_dl_ops(spec);
        check_data_file("loop_space_borel.comodule", serialize(spec, &ops));
        ComoduleSpec back = parse_comodule(read_data_file("loop_space_borel.comodule"));
        CHECK(back.coaction_of == spec.coaction_of);
    }
    {
        ComoduleSpec spec = classical_loop_comodule();
        QOps ops = classical_dl_ops(spec);
        check_data_file("classical_loop.comodule", serialize(spec, &ops));
    }
    CHECK_THROWS(read_data_file("no_such_file.hopf"));
}
