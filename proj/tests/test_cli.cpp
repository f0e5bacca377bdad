#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhoext/charts.hpp"
#include "rhoext/runconfig.hpp"

using namespace rhoext;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(RHOEXT_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("rhoext_cli_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json summary_of(const std::string& dir) {
    return nlohmann::json::parse(slurp(dir + "/summary.json"));
}

}  // namespace

TEST_CASE("run configuration") {
    RunConfig cfg;

    SUBCASE("defaults are the acceptance window") {
        CHECK(cfg.win.stem_min == -4);
        CHECK(cfg.win.stem_max == 12);
        CHECK(cfg.win.sigma_min == -12);
        CHECK(cfg.win.sigma_max == 12);
        CHECK(cfg.win.weight_cap == 4);
        CHECK(cfg.win.v_index_cap == 4);
        CHECK(cfg.win.a_exponent_cap == 16);
    }

    SUBCASE("config text round-trips through the canonical form") {
        RunConfig parsed = parse_config(canonical(cfg));
        CHECK(canonical(parsed) == canonical(cfg));
        CHECK(config_hash(parsed) == config_hash(cfg));
    }

    SUBCASE("settings apply and are validated") {
        apply_setting(cfg, "window", "0,4,-2,2");
        CHECK(cfg.win.stem_min == 0);
        CHECK(cfg.win.sigma_max == 2);
        apply_setting(cfg, "seed", "42");
        CHECK(cfg.seed == 42);
        CHECK_THROWS(apply_setting(cfg, "weight_cap", "0"));
        CHECK_THROWS(apply_setting(cfg, "window", "3,1,0,0"));
        CHECK_THROWS(apply_setting(cfg, "no_such_key", "1"));
        CHECK_THROWS(parse_config("just words\n"));
    }

    SUBCASE("the hash separates configs and the header records the seed") {
        uint64_t base = config_hash(cfg);
        RunConfig other = cfg;
        other.seed = cfg.seed + 1;
        CHECK(config_hash(other) != base);
        CHECK(config_header(other).find("seed " + std::to_string(other.seed)) !=
              std::string::npos);
    }
}

TEST_CASE("parallel work scheduling") {
    SUBCASE("per-index slots make the merge deterministic") {
        std::vector<int> slots(200, 0);
        parallel_for(slots.size(), [&](size_t i) { slots[i] = static_cast<int>(i * i); });
        for (size_t i = 0; i < slots.size(); ++i)
            CHECK(slots[i] == static_cast<int>(i * i));
    }

    SUBCASE("RHOEXT_THREADS caps the worker count") {
        setenv("RHOEXT_THREADS", "1", 1);
        CHECK(thread_cap() == 1);
        setenv("RHOEXT_THREADS", "0", 1);
        CHECK(thread_cap() == 1);
        unsetenv("RHOEXT_THREADS");
        CHECK(thread_cap() >= 1);
    }
}

TEST_CASE("coaction derivation command") {
    std::string dir = temp_dir("derive");
    auto res = run_cli("derive-coaction --n 2 --out " + dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("# config ") == 0);
    CHECK(res.out.find("psi(t2) matches the closed form") != std::string::npos);
    CHECK(res.out.find("[FAIL]") == std::string::npos);
    auto summary = summary_of(dir);
    CHECK(summary["ok"] == true);
    CHECK(summary["command"] == "derive-coaction");
    CHECK(summary["checks"].size() == 6);  // t0..t2, e1, e2, count
}

TEST_CASE("spectral-sequence command") {
    std::string dir = temp_dir("bss");
    auto res = run_cli("bss --to 0 --window -2,4,-4,2 --out " + dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("d_1(u_sigma) = a_sigma*v0") != std::string::npos);
    CHECK(summary_of(dir)["ok"] == true);

    SUBCASE("missing mode is a usage error") {
        CHECK(run_cli("bss --out " + dir).exit_code != 0);
    }
}

TEST_CASE("slice dump command") {
    std::string dir = temp_dir("dump");
    auto res = run_cli("bss-dump --page 0 --window 0,3,-3,1 --out " + dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("# page\tstem\tsigma\ts\tdim\tgenerators") != std::string::npos);
    // The unit class of the E1 page sits at stem 0, sigma-weight 0, s = 0.
    CHECK(res.out.find("1\t0\t0\t0\t") != std::string::npos);
}

TEST_CASE("chart command") {
    std::string dir = temp_dir("chart");
    std::string flags = " --weight 0 --page einfty --window -2,6,-4,4 --out " + dir;
    auto res = run_cli("chart --format both" + flags);
    CHECK(res.exit_code == 0);
    std::string svg = slurp(dir + "/weight0_pageeinfty.svg");
    std::string tsv = slurp(dir + "/weight0_pageeinfty.tsv");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("config") != std::string::npos);
    CHECK(tsv.find("# config ") == 0);

    SUBCASE("the header-carrying TSV still parses and matches the chart") {
        Chart parsed = parse_tsv(tsv);
        Bss bss;
        RunConfig cfg;
        apply_setting(cfg, "window", "-2,6,-4,4");
        Chart direct = chart_of_page(bss, bss.limit(), 0, cfg.win);
        CHECK(parsed == direct);
    }

    SUBCASE("the output is deterministic") {
        std::string dir2 = temp_dir("chart2");
        std::string flags2 = " --weight 0 --page einfty --window -2,6,-4,4 --out " + dir2;
        CHECK(run_cli("chart --format tsv" + flags2).exit_code == 0);
        CHECK(slurp(dir2 + "/weight0_pageeinfty.tsv") == tsv);
    }

    SUBCASE("unknown formats fail") {
        CHECK(run_cli("chart --format png" + flags).exit_code != 0);
    }
}

TEST_CASE("verification suites") {
    std::string dir = temp_dir("verify");

    SUBCASE("coassociativity across all hosts") {
        auto res = run_cli("verify --suite coassoc --out " + dir);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("coassociativity of genuine_dual_steenrod") != std::string::npos);
        CHECK(summary_of(dir)["checks"].size() == 6);
    }

    SUBCASE("cobar differential squares to zero on a small window") {
        auto res = run_cli("verify --suite cobar-d2 --window 0,4,-4,2 --out " + dir);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("d o d = 0") != std::string::npos);
    }

    SUBCASE("unknown suites exit nonzero") {
        auto res = run_cli("verify --suite bogus --out " + dir);
        CHECK(res.exit_code == 1);
        CHECK(summary_of(dir)["ok"] == false);
    }
}

TEST_CASE("flags override the config file") {
    std::string dir = temp_dir("override");
    std::string cfg_path = dir + "/run.cfg";
    std::ofstream(cfg_path) << "seed=7\nwindow=0,2,-2,0\n";
    auto res = run_cli("verify --suite coassoc --config " + cfg_path + " --seed 9 --out " +
                       dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("seed 9") != std::string::npos);
    CHECK(res.out.find("stems 0..2") != std::string::npos);
    CHECK(summary_of(dir)["seed"] == 9);
}
