#pragma once

#include <string>
#include <vector>

#include "rhoext/bockstein.hpp"

namespace rhoext {

// One rendered symbol of a chart: a basis class of the chosen weight drawn at
// (stem, Adams filtration). Window classes that differ only by a power of
// u_sigma are collapsed into a single dot; `period` records the u_sigma step
// of the collapsed family (0 when the window holds a single class).
struct ChartDot {
    int stem = 0;
    int filtration = 0;
    std::string label;
    int period = 0;
    int weight = 0;
    bool operator==(const ChartDot&) const = default;
};

// A structure line between two dots (indices into Chart::dots). `kind` is
// "v0", "v1", ... for multiplication lines found by slice products,
// "a_sigma" for a_sigma-multiplication, and "hidden" for lines taken from the
// recorded filtration-jumping annotations (never from slice products).
struct ChartLine {
    std::string kind;
    size_t from = 0;
    size_t to = 0;
    bool operator==(const ChartLine&) const = default;
};

struct Chart {
    std::string page;    // "1", "3", "7", ... or "einfty"
    int weight = 0;
    size_t classes = 0;  // window classes before the periodicity collapse
    std::vector<ChartDot> dots;
    std::vector<ChartLine> lines;
    bool operator==(const Chart&) const = default;
};

struct ChartOptions {
    // Multiplication lines are drawn for v_j with j <= v_line_cap (deeper
    // families crowd the picture and are suppressed by default).
    int v_line_cap = 1;
    // When set, labels rewrite t0^{2k} factors as (u_sigma e1)^k.
    bool u_e1_labels = false;
};

// Renders one page of the spectral sequence at one Snaith weight. Dots are
// the window slice basis classes of that weight, collapsed along
// u_sigma-periodicity; lines come from multiplication checks inside the
// window plus the page's recorded annotations.
Chart chart_of_page(const Bss& bss, const BssPage& page, int weight,
                    const TruncationWindow& win, const ChartOptions& opts = {});

// Deterministic renderers. The TSV columns are
//   stem  filtration  label  period  weight  lines
// with the outgoing lines of each dot written as kind->target entries joined
// by ';' ("-" when there are none); two comment lines carry the page, weight,
// and class count. The SVG is static SVG 1.1 with a legend.
std::string emit_tsv(const Chart& c);
std::string emit_svg(const Chart& c);
std::string emit(const Chart& c, const std::string& format);  // "tsv" or "svg"

// Inverse of emit_tsv: parse_tsv(emit_tsv(c)) == c. Throws on malformed input.
Chart parse_tsv(const std::string& text);

// Canonical output stem, "weight{W}_page{P}"; append ".svg" or ".tsv".
std::string chart_basename(const Chart& c);

}  // namespace rhoext
