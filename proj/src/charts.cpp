#include "rhoext/charts.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rhoext {

namespace {

Monomial strip_u(const Monomial& m, uint32_t u_id) {
    Monomial out;
    for (const auto& f : m.factors)
        if (f.first != u_id) out.factors.push_back(f);
    return out;
}

bool in_window(RODegree d, const TruncationWindow& win) {
    int stem = d.underlying_dimension();
    return stem >= win.stem_min && stem <= win.stem_max && d.sign_part >= win.sigma_min &&
           d.sign_part <= win.sigma_max;
}

// Rewrites t0^{2k} factors of a label as (u_sigma e1)^k; the two spellings
// agree in the presented quotient.
Monomial relabel_t0_square(const Monomial& m, const Bss& bss) {
    int e = m.exponent(bss.t0_id());
    if (e < 2) return m;
    int k = e / 2;
    std::map<uint32_t, int> exps;
    for (const auto& f : m.factors) exps[f.first] += f.second;
    exps[bss.t0_id()] -= 2 * k;
    exps[bss.u_id()] += k;
    exps[bss.e_id(1)] += k;
    Monomial out;
    for (const auto& [g, x] : exps)
        if (x != 0) out.factors.push_back({g, x});
    return out;
}

}  // namespace

Chart chart_of_page(const Bss& bss, const BssPage& page, int weight,
                    const TruncationWindow& win, const ChartOptions& opts) {
    Chart chart;
    chart.page = page.is_limit() ? "einfty" : std::to_string(page.r());
    chart.weight = weight;
    const GeneratorTable& table = bss.ambient().table;

    std::map<RODegree, std::unique_ptr<BssSlice>> cache;
    auto slice = [&](RODegree D) -> BssSlice& {
        auto it = cache.find(D);
        if (it == cache.end())
            it = cache.emplace(D, std::make_unique<BssSlice>(bss, page, D, win)).first;
        return *it->second;
    };

    // Group the window basis classes of this weight by (stem, filtration,
    // u_sigma-stripped monomial); each group becomes one dot.
    struct Member {
        int u_exp;
        Monomial m;
        RODegree deg;
    };
    std::map<std::tuple<int, int, Monomial>, std::vector<Member>> groups;
    for (RODegree D : window_degrees(win)) {
        for (const auto& m : slice(D).basis()) {
            MultiDegree md = m.degree(table);
            if (md.snaith_weight != weight) continue;
            ++chart.classes;
            groups[{D.underlying_dimension(), md.adams_filtration, strip_u(m, bss.u_id())}]
                .push_back({m.exponent(bss.u_id()), m, D});
        }
    }

    std::map<std::pair<RODegree, Monomial>, size_t> class_dot;
    std::vector<Monomial> reps;
    std::vector<RODegree> rep_degs;
    for (auto& [key, ms] : groups) {
        std::sort(ms.begin(), ms.end(),
                  [](const Member& a, const Member& b) { return a.u_exp < b.u_exp; });
        int period = 0;
        for (size_t i = 1; i < ms.size(); ++i) {
            int gap = ms[i].u_exp - ms[i - 1].u_exp;
            period = period == 0 ? gap : std::min(period, gap);
        }
        const Member* rep = &ms[0];
        for (const auto& mm : ms) {
            auto score = [](int u) { return std::make_pair(std::abs(u), u < 0); };
            if (score(mm.u_exp) < score(rep->u_exp)) rep = &mm;
        }
        size_t dot = chart.dots.size();
        Monomial label = opts.u_e1_labels ? relabel_t0_square(rep->m, bss) : rep->m;
        chart.dots.push_back({std::get<0>(key), std::get<1>(key), label.str(table), period,
                              weight});
        reps.push_back(rep->m);
        rep_degs.push_back(rep->deg);
        for (const auto& mm : ms) class_dot[{mm.deg, mm.m}] = dot;
    }

    // Expresses a slice element in the dot basis; empty when it vanishes or
    // leaves the window caps.
    auto locate = [&](const Element& e, RODegree D) {
        std::vector<size_t> out;
        BssSlice& s = slice(D);
        GF2Vector v = s.reduce(e);
        if (v.zero()) return out;
        GF2Matrix mat{s.width(), {}};
        for (const auto& b : s.basis()) mat.add_row(s.reduce(Element::from(b)));
        auto sol = mat.solve(v);
        if (!sol) throw std::logic_error("chart class leaves the slice span");
        for (size_t i = 0; i < s.basis().size(); ++i)
            if (sol->get(i)) out.push_back(class_dot.at({D, s.basis()[i]}));
        return out;
    };

    std::set<std::tuple<size_t, std::string, size_t>> line_set;

    // Multiplication lines, checked on one representative per dot.
    std::vector<std::pair<std::string, Monomial>> mults;
    mults.push_back({"a_sigma", Monomial::gen(bss.a_id())});
    for (int j = 0; j <= opts.v_line_cap && j < bss.v_count() && j <= win.v_index_cap; ++j)
        mults.push_back({"v" + std::to_string(j), Monomial::gen(bss.v_id(j))});
    for (size_t i = 0; i < reps.size(); ++i) {
        for (const auto& [kind, g] : mults) {
            Monomial prod = reps[i].times(g);
            MultiDegree pd = prod.degree(table);
            RODegree D2 = rep_degs[i] + g.degree(table).ro;
            if (!in_window(D2, win)) continue;
            if (pd.adams_filtration > win.adams_cap) continue;
            if (prod.exponent(bss.a_id()) > win.a_exponent_cap) continue;
            for (size_t to : locate(Element::from(prod), D2))
                line_set.insert({i, kind, to});
        }
    }

    // Hidden lines: from the class under the low side's common v-multiplier
    // (leading a-part) to the recorded detecting class.
    for (const auto& ann : page.annotations()) {
        int jv = -1;
        for (int j = 0; j < bss.v_count() && jv < 0; ++j) {
            bool all = !ann.low.terms.empty();
            for (const auto& t : ann.low.terms)
                if (t.exponent(bss.v_id(j)) < 1) {
                    all = false;
                    break;
                }
            if (all) jv = j;
        }
        if (jv < 0) continue;
        const Monomial* lead = nullptr;
        for (const auto& t : ann.low.terms)
            if (!lead || t.exponent(bss.a_id()) < lead->exponent(bss.a_id())) lead = &t;
        Monomial src = lead->divided_by(Monomial::gen(bss.v_id(jv)));
        MultiDegree sd = src.degree(table);
        if (sd.snaith_weight != weight) continue;
        auto hd = ann.high.homogeneous_degree(table);
        if (!hd || !in_window(sd.ro, win) || !in_window(*hd, win)) continue;
        auto fits = [&](const Monomial& m) {
            MultiDegree md = m.degree(table);
            if (md.snaith_weight > win.weight_cap || md.adams_filtration > win.adams_cap)
                return false;
            if (m.exponent(bss.a_id()) > win.a_exponent_cap) return false;
            for (int j = win.v_index_cap + 1; j < bss.v_count(); ++j)
                if (m.exponent(bss.v_id(j)) > 0) return false;
            return true;
        };
        bool ok = fits(src);
        for (const auto& t : ann.high.terms) ok = ok && fits(t);
        if (!ok) continue;
        for (size_t s : locate(Element::from(src), sd.ro))
            for (size_t t : locate(ann.high, *hd)) line_set.insert({s, "hidden", t});
    }

    for (const auto& [from, kind, to] : line_set) chart.lines.push_back({kind, from, to});
    return chart;
}

// ---------- TSV ----------

std::string emit_tsv(const Chart& c) {
    std::ostringstream out;
    out << "# page=" << (c.page.empty() ? "-" : c.page) << " weight=" << c.weight
        << " classes=" << c.classes << "\n";
    out << "# stem\tfiltration\tlabel\tperiod\tweight\tlines\n";
    std::vector<std::string> per_dot(c.dots.size());
    for (const auto& l : c.lines) {
        if (l.from >= c.dots.size() || l.to >= c.dots.size())
            throw std::invalid_argument("chart line endpoint is not a dot");
        std::string& s = per_dot[l.from];
        if (!s.empty()) s += ";";
        s += l.kind + "->" + std::to_string(l.to);
    }
    for (size_t i = 0; i < c.dots.size(); ++i) {
        const ChartDot& d = c.dots[i];
        out << d.stem << '\t' << d.filtration << '\t' << d.label << '\t' << d.period
            << '\t' << d.weight << '\t' << (per_dot[i].empty() ? "-" : per_dot[i])
            << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(const std::string& s) {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters in number");
    return v;
}

}  // namespace

Chart parse_tsv(const std::string& text) {
    Chart c;
    std::istringstream in(text);
    std::string line;
    // Extra leading comment lines (run headers) are permitted before the
    // page header.
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("# page=", 0) == 0) {
            found = true;
            break;
        }
        if (!line.empty() && line[0] != '#')
            throw std::invalid_argument("chart TSV must start with the page header");
    }
    if (!found) throw std::invalid_argument("chart TSV must start with the page header");
    {
        std::istringstream head(line.substr(2));
        std::string tok;
        while (head >> tok) {
            size_t eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("malformed chart header token: " + tok);
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "page")
                c.page = val == "-" ? "" : val;
            else if (key == "weight")
                c.weight = parse_int(val);
            else if (key == "classes")
                c.classes = static_cast<size_t>(parse_int(val));
            else
                throw std::invalid_argument("unknown chart header key: " + key);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 6)
            throw std::invalid_argument("chart TSV row needs 6 columns: " + line);
        ChartDot d;
        d.stem = parse_int(cols[0]);
        d.filtration = parse_int(cols[1]);
        d.label = cols[2];
        d.period = parse_int(cols[3]);
        d.weight = parse_int(cols[4]);
        size_t from = c.dots.size();
        c.dots.push_back(std::move(d));
        if (cols[5] == "-") continue;
        for (const std::string& item : split(cols[5], ';')) {
            size_t arrow = item.find("->");
            if (arrow == std::string::npos)
                throw std::invalid_argument("malformed chart line entry: " + item);
            c.lines.push_back({item.substr(0, arrow), from,
                               static_cast<size_t>(parse_int(item.substr(arrow + 2)))});
        }
    }
    for (const auto& l : c.lines)
        if (l.to >= c.dots.size())
            throw std::invalid_argument("chart line target is not a dot");
    return c;
}

// ---------- SVG ----------

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '&')
            out += "&amp;";
        else if (ch == '<')
            out += "&lt;";
        else if (ch == '>')
            out += "&gt;";
        else
            out += ch;
    }
    return out;
}

struct LineStyle {
    const char* stroke;
    const char* dash;  // nullptr = solid
};

LineStyle line_style(const std::string& kind) {
    if (kind == "v0") return {"#000000", nullptr};
    if (kind == "a_sigma") return {"#999999", nullptr};
    if (kind == "v1") return {"#2e8b57", nullptr};
    if (kind == "hidden") return {"#cc2222", "5,3"};
    return {"#6a5acd", "2,2"};  // deeper v-families, when enabled
}

}  // namespace

std::string emit_svg(const Chart& c) {
    int smin = 0, smax = 0, fmin = 0, fmax = 0;
    for (size_t i = 0; i < c.dots.size(); ++i) {
        const ChartDot& d = c.dots[i];
        if (i == 0) {
            smin = smax = d.stem;
            fmin = fmax = d.filtration;
        } else {
            smin = std::min(smin, d.stem);
            smax = std::max(smax, d.stem);
            fmin = std::min(fmin, d.filtration);
            fmax = std::max(fmax, d.filtration);
        }
    }
    const int cell = 72, left = 60, top = 78, bottom = 44, right = 28;
    int width = left + (smax - smin + 1) * cell + right;
    int height = top + (fmax - fmin + 1) * cell + bottom;

    // Dots sharing a (stem, filtration) cell are fanned out horizontally.
    std::map<std::pair<int, int>, int> counts, seen;
    for (const auto& d : c.dots) ++counts[{d.stem, d.filtration}];
    std::vector<double> px(c.dots.size()), py(c.dots.size());
    for (size_t i = 0; i < c.dots.size(); ++i) {
        const ChartDot& d = c.dots[i];
        int n = counts[{d.stem, d.filtration}];
        int k = seen[{d.stem, d.filtration}]++;
        px[i] = left + (d.stem - smin) * cell + cell / 2.0 + (k - (n - 1) / 2.0) * 18.0;
        py[i] = top + (fmax - d.filtration) * cell + cell / 2.0;
    }

    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\" font-family=\"monospace\">\n";
    out << "  <title>" << xml_escape(chart_basename(c)) << "</title>\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";
    out << "  <text x=\"10\" y=\"20\" font-size=\"13\">page "
        << xml_escape(c.page.empty() ? "-" : c.page) << ", weight " << c.weight << " ("
        << c.classes << " classes in the window)</text>\n";
    out << "  <text x=\"10\" y=\"38\" font-size=\"10\">lines: v0 black, a_sigma grey, v1 "
           "green, hidden red dashed</text>\n";
    out << "  <text x=\"10\" y=\"52\" font-size=\"10\">a dot marked u^&#177;p stands for "
           "its whole u_sigma^&#177;p-periodic family</text>\n";

    // Grid and axis labels (stems across, filtrations up).
    for (int s = smin; s <= smax; ++s) {
        double x = left + (s - smin) * cell + cell / 2.0;
        out << "  <line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
            << height - bottom << "\" stroke=\"#eeeeee\"/>\n";
        out << "  <text x=\"" << x - 4 << "\" y=\"" << height - bottom + 18
            << "\" font-size=\"11\">" << s << "</text>\n";
    }
    for (int f = fmin; f <= fmax; ++f) {
        double y = top + (fmax - f) * cell + cell / 2.0;
        out << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - right
            << "\" y2=\"" << y << "\" stroke=\"#eeeeee\"/>\n";
        out << "  <text x=\"" << left - 26 << "\" y=\"" << y + 4
            << "\" font-size=\"11\">" << f << "</text>\n";
    }

    for (const auto& l : c.lines) {
        if (l.from >= c.dots.size() || l.to >= c.dots.size())
            throw std::invalid_argument("chart line endpoint is not a dot");
        LineStyle st = line_style(l.kind);
        out << "  <line x1=\"" << px[l.from] << "\" y1=\"" << py[l.from] << "\" x2=\""
            << px[l.to] << "\" y2=\"" << py[l.to] << "\" stroke=\"" << st.stroke
            << "\" stroke-width=\"1.2\"";
        if (st.dash) out << " stroke-dasharray=\"" << st.dash << "\"";
        out << "/>\n";
    }
    for (size_t i = 0; i < c.dots.size(); ++i) {
        const ChartDot& d = c.dots[i];
        out << "  <circle cx=\"" << px[i] << "\" cy=\"" << py[i]
            << "\" r=\"4.0\" fill=\"#000000\"/>\n";
        out << "  <text x=\"" << px[i] + 6 << "\" y=\"" << py[i] - 6
            << "\" font-size=\"9\">" << xml_escape(d.label) << "</text>\n";
        if (d.period > 0)
            out << "  <text x=\"" << px[i] + 6 << "\" y=\"" << py[i] + 14
                << "\" font-size=\"8\" fill=\"#555555\">u^&#177;" << d.period
                << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string emit(const Chart& c, const std::string& format) {
    if (format == "tsv") return emit_tsv(c);
    if (format == "svg") return emit_svg(c);
    throw std::invalid_argument("unknown chart format: " + format);
}

std::string chart_basename(const Chart& c) {
    return "weight" + std::to_string(c.weight) + "_page" +
           (c.page.empty() ? "0" : c.page);
}

}  // namespace rhoext
