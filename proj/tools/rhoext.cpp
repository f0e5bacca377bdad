// Command-line workbench: coaction derivation, spectral-sequence runs, slice
// dumps, chart rendering, and the named verification suites. Every command is
// deterministic given (config, seed); outputs carry the config hash and a
// machine-readable JSON summary is written next to the human text.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rhoext/charts.hpp"
#include "rhoext/ext.hpp"
#include "rhoext/presentation_io.hpp"
#include "rhoext/runconfig.hpp"

using namespace rhoext;
using nlohmann::json;

namespace {

// Collects human-readable lines plus a JSON mirror; a failed check makes the
// whole run exit nonzero.
struct Runner {
    RunConfig cfg;
    std::string command;
    bool ok = true;
    json checks = json::array();
    json artifacts = json::array();
    std::ostringstream text;

    explicit Runner(RunConfig c, std::string cmd) : cfg(std::move(c)), command(std::move(cmd)) {
        text << config_header(cfg);
    }

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        ok = ok && pass;
        text << (pass ? "[ok]   " : "[FAIL] ") << name;
        if (!detail.empty()) text << ": " << detail;
        text << "\n";
        checks.push_back({{"name", name}, {"ok", pass}, {"detail", detail}});
    }

    void note(const std::string& line) { text << line << "\n"; }

    void report(const std::string& name, const CheckReport& rep) {
        std::string detail;
        for (const auto& f : rep.failures) detail += (detail.empty() ? "" : "; ") + f;
        check(name, rep.ok, detail);
    }

    void artifact(const std::string& path) {
        artifacts.push_back(path);
        text << "wrote " << path << "\n";
    }

    int finish() {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        json summary = {{"command", command}, {"config", hex},  {"seed", cfg.seed},
                        {"ok", ok},           {"checks", checks}, {"artifacts", artifacts}};
        std::filesystem::create_directories(cfg.out);
        std::string path = cfg.out + "/summary.json";
        std::ofstream(path, std::ios::binary) << summary.dump(2) << "\n";
        text << "summary " << path << "\n";
        std::cout << text.str();
        return ok ? 0 : 1;
    }
};

TensorElement tensor_of(const std::string& text, const ComoduleSpec& spec) {
    return parse_tensor(text, spec.module.table, spec.host.host);
}

std::string str_of(const TensorElement& e, const ComoduleSpec& spec) {
    return tensor_str(e, spec.module.table, spec.host.host);
}

// ---------- derive-coaction ----------

int cmd_derive_coaction(Runner& r, int n) {
    auto spec = loop_space_comodule(HostKind::BorelA, n + 1, r.cfg.win.a_exponent_cap);
    auto ops = equivariant_dl_ops(spec);
    auto derived = derive_coaction(spec, ops, ExtendedPowerTable::standard(), n);
    TensorCalc calc = spec.calc();
    for (const auto& [name, psi] : derived) {
        auto closed = calc.normalize(spec.coaction_of.at(spec.module.table.id(name)));
        bool match = calc.normalize(psi) == closed;
        r.check("psi(" + name + ") matches the closed form", match,
                "derived " + str_of(psi, spec));
    }
    r.check("all generators up to index " + std::to_string(n) + " derived",
            static_cast<int>(derived.size()) == 2 * n + 1);
    return r.finish();
}

// ---------- bss ----------

int cmd_bss(Runner& r, int to, bool einfty) {
    Bss bss;
    const TruncationWindow& win = r.cfg.win;
    if (einfty) {
        r.report("degree-vanishing (j*rho-1 and j*rho+sigma empty)",
                 verify_limit_vanishing(bss, win));
        r.report("torsion orders a^(2^(j+1)-1) v_j for j <= 2",
                 verify_torsion_orders(bss, 2, win));
        r.report("a-tower stabilization from page 3", verify_stabilization(bss, 3, win));
        r.report("filtration-jumping annotations", verify_hidden_annotations(bss, win));
        BssPage page = bss.limit();
        for (const auto& ann : page.annotations())
            r.note("annotation: " + ann.low.str(bss.ambient().table) + " = " +
                   ann.high.str(bss.ambient().table) + " (" + ann.note + ")");
        size_t total = 0;
        for (RODegree D : window_degrees(win))
            total += BssSlice(bss, page, D, win).dimension();
        r.note("limit page: " + std::to_string(total) + " window classes");
    } else {
        CheckReport rep;
        BssPage page = run_to(bss, to, win, &rep);
        r.report("homology agrees with the closed-form pages through n=" +
                     std::to_string(to),
                 rep);
        r.report("permanent cycles on page r=" + std::to_string(page.r()),
                 verify_permanent_cycles(bss, page));
        Monomial u2n = Monomial::gen(bss.u_id(), 1 << to);
        r.note("d_" + std::to_string(page.r()) + "(" +
               u2n.str(bss.ambient().table) + ") = " +
               page.d(u2n).str(bss.ambient().table));
    }
    return r.finish();
}

// ---------- bss-dump / ext-dump ----------

std::string dump_header(const RunConfig& cfg, bool with_page) {
    return config_header(cfg) + (with_page ? "# page\tstem\tsigma\ts\tdim\tgenerators\n"
                                           : "# stem\tsigma\ts\tdim\tgenerators\n");
}

int cmd_bss_dump(Runner& r, const std::string& page_arg) {
    Bss bss;
    const TruncationWindow& win = r.cfg.win;
    BssPage page = page_arg == "einfty" ? bss.limit() : bss.page(std::stoi(page_arg));
    std::string page_col = page_arg == "einfty" ? "einfty" : std::to_string(page.r());
    const GeneratorTable& table = bss.ambient().table;
    std::vector<RODegree> degrees = window_degrees(win);
    std::vector<std::string> rows(degrees.size());
    parallel_for(degrees.size(), [&](size_t i) {
        RODegree D = degrees[i];
        BssSlice slice(bss, page, D, win);
        std::string out;
        for (int s = 0; s <= win.adams_cap; ++s) {
            size_t dim = slice.dimension_where([&](const Monomial& m) {
                return m.degree(table).adams_filtration == s;
            });
            if (dim == 0) continue;
            out += page_col + "\t" + std::to_string(D.underlying_dimension()) + "\t" +
                   std::to_string(D.sign_part) + "\t" + std::to_string(s) + "\t" +
                   std::to_string(dim);
            for (const Monomial& m : slice.basis())
                if (m.degree(table).adams_filtration == s) out += "\t" + m.str(table);
            out += "\n";
        }
        rows[i] = out;
    });
    std::string body = dump_header(r.cfg, true);
    for (const auto& row : rows) body += row;
    std::cout << body;
    r.note("dumped page " + page_col + " over " + std::to_string(degrees.size()) +
           " degrees");
    return r.finish();
}

int cmd_ext_dump(Runner& r, const std::string& host, int max_s) {
    HostKind kind = host == "gr" ? HostKind::GrE : HostKind::BorelE;
    auto spec = loop_space_comodule(kind, 5, r.cfg.win.a_exponent_cap);
    Cobar cobar(spec);
    const TruncationWindow& win = r.cfg.win;
    std::vector<RODegree> degrees = window_degrees(win);
    std::vector<std::string> rows(degrees.size());
    parallel_for(degrees.size(), [&](size_t i) {
        RODegree D = degrees[i];
        std::string out;
        for (int s = 0; s <= max_s; ++s) {
            ExtSlice slice = ext_slice(cobar, D, s, win);
            if (slice.dimension() == 0) continue;
            out += std::to_string(D.underlying_dimension()) + "\t" + std::to_string(D.sign_part) +
                   "\t" + std::to_string(s) + "\t" + std::to_string(slice.dimension());
            for (const auto& rep : slice.representatives) out += "\t" + str_of(rep, spec);
            out += "\n";
        }
        rows[i] = out;
    });
    std::string body = dump_header(r.cfg, false);
    for (const auto& row : rows) body += row;
    std::cout << body;
    r.note("dumped Ext over " + host + " through filtration " + std::to_string(max_s));
    return r.finish();
}

// ---------- chart ----------

int cmd_chart(Runner& r, int weight, const std::string& page_arg) {
    Bss bss;
    BssPage page = page_arg == "einfty" ? bss.limit() : bss.page(std::stoi(page_arg));
    Chart chart = chart_of_page(bss, page, weight, r.cfg.win);
    std::filesystem::create_directories(r.cfg.out);
    std::vector<std::string> formats;
    if (r.cfg.format == "both") {
        formats = {"svg", "tsv"};
    } else if (r.cfg.format == "svg" || r.cfg.format == "tsv") {
        formats = {r.cfg.format};
    } else {
        r.check("format is svg, tsv, or both", false, r.cfg.format);
        return r.finish();
    }
    for (const std::string& fmt : formats) {
        std::string body = emit(chart, fmt);
        if (fmt == "tsv") {
            body = config_header(r.cfg) + body;
        } else {
            // Embed the run header as an XML comment after the declaration.
            size_t nl = body.find('\n');
            std::string note = config_header(r.cfg);
            for (auto& ch : note)
                if (ch == '#') ch = ' ';
            body.insert(nl + 1, "<!--\n" + note + "-->\n");
        }
        std::string path = r.cfg.out + "/" + chart_basename(chart) + "." + fmt;
        std::ofstream(path, std::ios::binary) << body;
        r.artifact(path);
    }
    r.check("chart rendered with " + std::to_string(chart.dots.size()) + " dots and " +
                std::to_string(chart.lines.size()) + " lines",
            true);
    return r.finish();
}

// ---------- verify ----------

void suite_coassoc(Runner& r) {
    std::vector<HopfAlgebroidSpec> hosts = {
        genuine_dual_steenrod(4), borel_dual_steenrod(4), borel_exterior(4),
        gr_exterior(4),           classical_dual_steenrod(4), classical_exterior(4)};
    for (const auto& spec : hosts) {
        TensorCalc calc(spec.coefficients, spec);
        bool pass = true;
        for (uint32_t g = 0; g < spec.host.size() && pass; ++g) {
            auto d = calc.normalize(spec.coproduct(g));
            pass = calc.coproduct_on_slot(d, 1) == calc.coproduct_on_slot(d, 2);
        }
        r.check("coassociativity of " + spec.name, pass);
    }
}

void suite_cobar_d2(Runner& r) {
    auto spec = loop_space_comodule(HostKind::BorelE, 5, r.cfg.win.a_exponent_cap);
    Cobar cobar(spec);
    const TruncationWindow& win = r.cfg.win;
    std::vector<RODegree> degrees = window_degrees(win);
    std::vector<size_t> counted(degrees.size(), 0);
    std::vector<std::string> failed(degrees.size());
    parallel_for(degrees.size(), [&](size_t i) {
        for (int s = 0; s <= 2; ++s)
            for (const TensorTerm& t : cobar.basis(degrees[i], s, win)) {
                ++counted[i];
                if (!cobar.d(cobar.d(TensorElement::from(t))).is_zero())
                    failed[i] = str_of(TensorElement::from(t), spec);
            }
    });
    size_t total = 0;
    std::string bad;
    for (size_t i = 0; i < degrees.size(); ++i) {
        total += counted[i];
        if (!failed[i].empty()) bad = failed[i];
    }
    r.check("d o d = 0 on " + std::to_string(total) + " cobar basis cochains",
            bad.empty(), bad);
}

void suite_leibniz(Runner& r) {
    Bss bss;
    for (int n = 0; n <= 2; ++n)
        r.report("Leibniz rule on page r=" + std::to_string((1 << (n + 1)) - 1),
                 verify_leibniz(bss, bss.page(n), r.cfg.win));
}

void suite_domain_check(Runner& r, int k) {
    int bound = k == 0 ? 20 : 16;
    DomainScanOptions opts;
    opts.seed = r.cfg.seed;
    DomainScanReport rep = laurent_domain_scan(k, bound, opts);
    std::string detail = std::to_string(rep.pairs_checked) + " pairs, " +
                         std::to_string(rep.injectivity_slices) + " injectivity slices";
    for (const auto& f : rep.failures) detail += "; " + f;
    r.check("no zero divisors and regular relations at k=" + std::to_string(k) +
                ", degrees <= " + std::to_string(bound),
            rep.ok && rep.confluent, detail);
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

void suite_massey(Runner& r) {
    auto spec = loop_space_comodule(HostKind::BorelE, 5, 8);
    Cobar cobar(spec);
    TruncationWindow win = r.cfg.win;
    win.a_exponent_cap = std::min(win.a_exponent_cap, 8);

    auto a = tensor_of("a_sigma", spec);
    auto e1 = tensor_of("e1", spec);
    auto v0 = tensor_of("1 # tau0", spec);
    auto t0sq = tensor_of("a_sigma*t1 + u_sigma*e1", spec);  // t0^2 in normal form

    auto res = massey_triple(cobar, a, v0, e1, win);
    std::vector<TensorElement> span = res.indeterminacy;
    if (res.defined) span.push_back(res.representative);
    r.check("t0^2 lies in <a_sigma, v0, e1>", res.defined && in_span(t0sq, span),
            "indeterminacy dimension " + std::to_string(res.indeterminacy_dim));

    // The product relation v0 * t0^2 = a_sigma^2 v1 e1 on the cochain level:
    // the difference of the two cocycles bounds.
    auto lhs = cobar.product(v0, t0sq);
    auto rhs = tensor_of("a_sigma^2*e1 # tau1", spec);
    r.check("v0 * t0^2 = a_sigma^2 v1 e1 up to a coboundary",
            solve_boundary(cobar, lhs.plus(rhs), win).has_value());

    for (int n = 0; n <= 1; ++n) {
        TruncationWindow wide = win;
        if (n == 1) wide.weight_cap = std::max(wide.weight_cap, 8);
        auto prim = verify_vanishing_relation(cobar, n, wide);
        r.check("e1^(2^(n+1)-1) v_n bounds at n=" + std::to_string(n),
                prim.has_value());
    }
}

void suite_restriction(Runner& r) {
    Bss bss;
    r.report("limit dims at n*rho match the u=1, a=0 specialization",
             verify_classical_specialization(bss, r.cfg.win));
    r.report("t0-multiplication splits even and odd weights",
             verify_weight_split(bss, r.cfg.win));
}

int cmd_verify(Runner& r, const std::string& suite, int k) {
    if (suite == "coassoc")
        suite_coassoc(r);
    else if (suite == "cobar-d2")
        suite_cobar_d2(r);
    else if (suite == "leibniz")
        suite_leibniz(r);
    else if (suite == "domain-check")
        suite_domain_check(r, k);
    else if (suite == "massey")
        suite_massey(r);
    else if (suite == "restriction")
        suite_restriction(r);
    else
        r.check("known suite", false, suite);
    return r.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RO(C2)-graded Ext and Bockstein spectral-sequence workbench"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, window_arg, out_arg, format_arg;
    int weight_cap = 0, v_cap = 0, asigma_cap = 0;
    uint64_t seed_arg = 0;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--window", window_arg, "stem_min,stem_max,sigma_min,sigma_max");
    app.add_option("--weight-cap", weight_cap, "Snaith-weight cap");
    app.add_option("--v-cap", v_cap, "largest v-generator index enumerated");
    app.add_option("--asigma-cap", asigma_cap, "a_sigma-exponent cap");
    app.add_option("--out", out_arg, "output directory");
    app.add_option("--seed", seed_arg, "seed for randomized property corpora");
    app.add_option("--format", format_arg, "chart format: svg, tsv, or both");

    auto* derive = app.add_subcommand("derive-coaction",
                                      "rebuild the coactions from the operations");
    int derive_n = 2;
    derive->add_option("--n", derive_n, "largest generator index")->required();

    auto* bss_cmd = app.add_subcommand("bss", "run the spectral sequence");
    int bss_to = 0;
    bool bss_einfty = false;
    auto* to_opt = bss_cmd->add_option("--to", bss_to, "run pages through index n");
    auto* einfty_flag = bss_cmd->add_flag("--einfty", bss_einfty, "verify the stable page");
    to_opt->excludes(einfty_flag);

    auto* dump = app.add_subcommand("bss-dump", "per-page slice table as TSV");
    std::string dump_page = "einfty";
    dump->add_option("--page", dump_page, "page index n, or einfty");

    auto* extd = app.add_subcommand("ext-dump", "cobar Ext slice table as TSV");
    std::string ext_host = "gr";
    int ext_max_s = 4;
    extd->add_option("--host", ext_host, "gr or borel");
    extd->add_option("--max-s", ext_max_s, "largest cohomological filtration");

    auto* chart_cmd = app.add_subcommand("chart", "render one weight of one page");
    int chart_weight = 0;
    std::string chart_page = "einfty";
    chart_cmd->add_option("--weight", chart_weight, "Snaith weight")->required();
    chart_cmd->add_option("--page", chart_page, "page index n, or einfty");

    auto* verify = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite;
    int verify_k = 0;
    verify
        ->add_option("--suite", suite,
                     "coassoc, cobar-d2, leibniz, domain-check, massey, restriction")
        ->required();
    verify->add_option("--k", verify_k, "shift parameter of the Laurent relation ring");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (app.count("--window")) apply_setting(cfg, "window", window_arg);
        if (app.count("--weight-cap"))
            apply_setting(cfg, "weight_cap", std::to_string(weight_cap));
        if (app.count("--v-cap")) apply_setting(cfg, "v_cap", std::to_string(v_cap));
        if (app.count("--asigma-cap"))
            apply_setting(cfg, "asigma_cap", std::to_string(asigma_cap));
        if (app.count("--out")) cfg.out = out_arg;
        if (app.count("--seed")) cfg.seed = seed_arg;
        if (app.count("--format")) cfg.format = format_arg;

        if (derive->parsed()) {
            Runner r(cfg, "derive-coaction");
            return cmd_derive_coaction(r, derive_n);
        }
        if (bss_cmd->parsed()) {
            if (!bss_einfty && !to_opt->count())
                throw CLI::ValidationError("bss needs --to <n> or --einfty");
            Runner r(cfg, "bss");
            return cmd_bss(r, bss_to, bss_einfty);
        }
        if (dump->parsed()) {
            Runner r(cfg, "bss-dump");
            return cmd_bss_dump(r, dump_page);
        }
        if (extd->parsed()) {
            Runner r(cfg, "ext-dump");
            return cmd_ext_dump(r, ext_host, ext_max_s);
        }
        if (chart_cmd->parsed()) {
            Runner r(cfg, "chart");
            return cmd_chart(r, chart_weight, chart_page);
        }
        if (verify->parsed()) {
            Runner r(cfg, "verify " + suite);
            return cmd_verify(r, suite, verify_k);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
