#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "rhoext/algebra.hpp"

namespace rhoext {

// Configuration shared by all command-line runs: the truncation window, the
// output directory, the artifact format, and the seed of the randomized
// property corpora. Defaults are the acceptance window. A config file holds
// `key=value` lines (`#` comments); command-line flags override the file.
struct RunConfig {
    TruncationWindow win;
    std::string out = ".";
    std::string format = "svg";
    uint64_t seed = 1;
};

// Applies one setting. Keys: stem_min, stem_max, sigma_min, sigma_max,
// weight_cap, v_cap, asigma_cap, adams_cap, window (four comma-separated
// values stem_min,stem_max,sigma_min,sigma_max), out, format, seed.
// Throws on unknown keys, malformed values, and non-positive caps.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);  // throws when unreadable

// Canonical `key=value` rendering of the computation-relevant settings
// (window and seed; the output directory and artifact format change nothing
// computed, so they are excluded). Its hash identifies the configuration.
std::string canonical(const RunConfig& cfg);
uint64_t config_hash(const RunConfig& cfg);  // FNV-1a 64 of canonical()

// Comment header embedded in every output: config hash, seed, window.
std::string config_header(const RunConfig& cfg);

// Worker-count cap: hardware concurrency clamped by the RHOEXT_THREADS
// environment variable (values < 1 read as 1).
int thread_cap();

// Runs f(0..n-1) on up to thread_cap() workers. Results must be written to
// per-index slots so that merging stays deterministic.
void parallel_for(size_t n, const std::function<void(size_t)>& f);

}  // namespace rhoext
