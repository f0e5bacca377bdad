#include "rhoext/presentation_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhoext {

namespace {

// ---------- line utilities ----------

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Non-empty, non-comment lines, trimmed.
std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty() && t[0] != '#') out.push_back(std::move(t));
    }
    return out;
}

// Splits "keyword rest" at the first space.
std::pair<std::string, std::string> keyword_of(const std::string& line) {
    size_t sp = line.find(' ');
    if (sp == std::string::npos) return {line, ""};
    return {line.substr(0, sp), trim(line.substr(sp + 1))};
}

// Splits "name = value" stanzas.
std::pair<std::string, std::string> stanza_of(const std::string& body,
                                              const std::string& what) {
    size_t eq = body.find(" = ");
    if (eq == std::string::npos)
        throw std::invalid_argument("malformed " + what + " stanza: " + body);
    return {trim(body.substr(0, eq)), trim(body.substr(eq + 3))};
}

int to_int(const std::string& s) {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size())
        throw std::invalid_argument("malformed number in spec file: " + s);
    return v;
}

// ---------- generator lines ----------

std::string generator_body(const GeneratorTable::Entry& g) {
    const MultiDegree& d = g.degree;
    std::string s = g.name + " degree(" + std::to_string(d.ro.trivial_part) + "," +
                    std::to_string(d.ro.sign_part) + ")";
    if (d.adams_filtration != 0) s += " adams=" + std::to_string(d.adams_filtration);
    if (d.bockstein_filtration != 0)
        s += " bockstein=" + std::to_string(d.bockstein_filtration);
    if (d.snaith_weight != 0) s += " weight=" + std::to_string(d.snaith_weight);
    if (g.invertible) s += " invertible";
    return s;
}

void add_generator(GeneratorTable& table, const std::string& body) {
    std::istringstream in(body);
    std::string name, tok;
    if (!(in >> name >> tok) || tok.rfind("degree(", 0) != 0 || tok.back() != ')')
        throw std::invalid_argument("malformed generator line: " + body);
    std::string inner = tok.substr(7, tok.size() - 8);
    size_t comma = inner.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("malformed generator degree: " + body);
    MultiDegree d;
    d.ro = {to_int(inner.substr(0, comma)), to_int(inner.substr(comma + 1))};
    bool invertible = false;
    while (in >> tok) {
        if (tok == "invertible")
            invertible = true;
        else if (tok.rfind("adams=", 0) == 0)
            d.adams_filtration = to_int(tok.substr(6));
        else if (tok.rfind("bockstein=", 0) == 0)
            d.bockstein_filtration = to_int(tok.substr(10));
        else if (tok.rfind("weight=", 0) == 0)
            d.snaith_weight = to_int(tok.substr(7));
        else
            throw std::invalid_argument("unknown generator attribute: " + tok);
    }
    table.add(name, d, invertible);
}

std::string relation_body(const RewriteSystem::Rule& r, const GeneratorTable& table) {
    return r.lead.str(table) + " = " + r.tail.str(table);
}

void add_relation(AlgebraPresentation& pres, const std::string& body) {
    auto [lhs, rhs] = stanza_of(body, "relation");
    pres.rw.add(parse_monomial(lhs, pres.table), parse_element(rhs, pres.table));
}

// ---------- host kinds ----------

const std::pair<HostKind, const char*> kKinds[] = {
    {HostKind::GenuineA, "GenuineA"},   {HostKind::BorelA, "BorelA"},
    {HostKind::BorelE, "BorelE"},       {HostKind::GrE, "GrE"},
    {HostKind::ClassicalA, "ClassicalA"}, {HostKind::ClassicalE, "ClassicalE"},
};

std::string kind_str(HostKind k) {
    for (const auto& [kind, name] : kKinds)
        if (kind == k) return name;
    throw std::logic_error("unregistered host kind");
}

HostKind kind_from(const std::string& s) {
    for (const auto& [kind, name] : kKinds)
        if (s == name) return kind;
    throw std::invalid_argument("unknown host kind: " + s);
}

// Coefficient and host generators side by side, for square elements.
GeneratorTable combined_table(const HopfAlgebroidSpec& spec) {
    GeneratorTable t = spec.coefficients.table;
    for (const auto& e : spec.host.entries) t.add(e.name, e.degree, e.invertible);
    return t;
}

std::string square_str(const std::vector<HopfAlgebroidSpec::SquareTerm>& terms,
                       const HopfAlgebroidSpec& spec, const GeneratorTable& combined) {
    if (terms.empty()) return "0";
    size_t shift = spec.coefficients.table.size();
    std::vector<Monomial> ms;
    for (const auto& t : terms) {
        Monomial m;
        if (t.u_exp != 0)
            m = m.times(Monomial::gen(spec.coefficients.table.id("u_sigma"), t.u_exp));
        if (t.a_exp != 0)
            m = m.times(Monomial::gen(spec.coefficients.table.id("a_sigma"), t.a_exp));
        for (const auto& [g, e] : t.host.factors)
            m = m.times(Monomial::gen(g + static_cast<uint32_t>(shift), e));
        ms.push_back(std::move(m));
    }
    return Element::from_terms(std::move(ms)).str(combined);
}

std::vector<HopfAlgebroidSpec::SquareTerm> parse_square(const std::string& text,
                                                        const HopfAlgebroidSpec& spec,
                                                        const GeneratorTable& combined) {
    std::vector<HopfAlgebroidSpec::SquareTerm> out;
    if (trim(text) == "0") return out;
    size_t shift = spec.coefficients.table.size();
    for (const Monomial& m : parse_element(text, combined).terms) {
        HopfAlgebroidSpec::SquareTerm t;
        for (const auto& [g, e] : m.factors) {
            if (g >= shift) {
                t.host = t.host.times(Monomial::gen(g - static_cast<uint32_t>(shift), e));
            } else if (combined.gen(g).name == "u_sigma") {
                t.u_exp = e;
            } else if (combined.gen(g).name == "a_sigma") {
                t.a_exp = e;
            } else {
                throw std::invalid_argument("square coefficient outside u/a powers: " +
                                            m.str(combined));
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

// ---------- tensors ----------

std::string tensor_str(const TensorElement& e, const GeneratorTable& module,
                       const GeneratorTable& host) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& t : e.terms) {
        if (!out.empty()) out += " + ";
        out += t.module.str(module);
        for (const auto& s : t.slots) out += " # " + s.str(host);
    }
    return out;
}

TensorElement parse_tensor(const std::string& text, const GeneratorTable& module,
                           const GeneratorTable& host) {
    std::string body = trim(text);
    if (body == "0") return TensorElement::zero();
    std::vector<TensorTerm> terms;
    size_t start = 0;
    while (start <= body.size()) {
        size_t plus = body.find(" + ", start);
        std::string part =
            body.substr(start, plus == std::string::npos ? plus : plus - start);
        TensorTerm term;
        size_t p = 0;
        bool first = true;
        while (p <= part.size()) {
            size_t hash = part.find(" # ", p);
            std::string piece =
                trim(part.substr(p, hash == std::string::npos ? hash : hash - p));
            if (first) {
                term.module = parse_monomial(piece, module);
                first = false;
            } else {
                term.slots.push_back(parse_monomial(piece, host));
            }
            if (hash == std::string::npos) break;
            p = hash + 3;
        }
        terms.push_back(std::move(term));
        if (plus == std::string::npos) break;
        start = plus + 3;
    }
    return TensorElement::from_terms(std::move(terms));
}

// ---------- algebra presentations ----------

std::string serialize(const AlgebraPresentation& pres) {
    std::string out = "presentation\n";
    for (const auto& g : pres.table.entries) out += "generator " + generator_body(g) + "\n";
    for (const auto& r : pres.rw.rules)
        out += "relation " + relation_body(r, pres.table) + "\n";
    return out;
}

AlgebraPresentation parse_presentation(const std::string& text) {
    AlgebraPresentation pres;
    std::vector<std::string> lines = content_lines(text);
    if (lines.empty() || lines[0] != "presentation")
        throw std::invalid_argument("presentation file must start with 'presentation'");
    for (size_t i = 1; i < lines.size(); ++i) {
        auto [kw, body] = keyword_of(lines[i]);
        if (kw == "generator")
            add_generator(pres.table, body);
        else if (kw == "relation")
            add_relation(pres, body);
        else
            throw std::invalid_argument("unknown presentation stanza: " + kw);
    }
    return pres;
}

// ---------- Hopf algebroid hosts ----------

std::string serialize(const HopfAlgebroidSpec& spec) {
    std::string out = "hopf " + spec.name + "\n";
    out += "kind " + kind_str(spec.kind) + "\n";
    out += "a_cap " + std::to_string(spec.a_cap) + "\n";
    for (const auto& g : spec.coefficients.table.entries)
        out += "coefficient " + generator_body(g) + "\n";
    for (const auto& r : spec.coefficients.rw.rules)
        out += "coefficient-relation " + relation_body(r, spec.coefficients.table) + "\n";
    for (const auto& g : spec.host.entries) out += "host " + generator_body(g) + "\n";
    GeneratorTable combined = combined_table(spec);
    for (const auto& [g, terms] : spec.squares)
        out += "square " + spec.host.gen(g).name + " = " +
               square_str(terms, spec, combined) + "\n";
    if (spec.coefficients.table.find("u_sigma")) {
        out += "etaR u_sigma = u_sigma # 1";
        if (spec.eta_r_twist) out += " + a_sigma # tau0";
        out += "\n";
    }
    for (uint32_t g = 0; g < spec.host.size(); ++g)
        out += "coproduct " + spec.host.gen(g).name + " = " +
               tensor_str(spec.coproduct(g), spec.coefficients.table, spec.host) + "\n";
    return out;
}

HopfAlgebroidSpec parse_hopf_algebroid(const std::string& text) {
    HopfAlgebroidSpec spec;
    std::vector<std::string> lines = content_lines(text);
    if (lines.empty() || keyword_of(lines[0]).first != "hopf")
        throw std::invalid_argument("host file must start with 'hopf <name>'");
    spec.name = keyword_of(lines[0]).second;
    std::vector<std::pair<std::string, std::string>> squares, coproducts;
    std::string eta;
    bool has_eta = false;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto [kw, body] = keyword_of(lines[i]);
        if (kw == "kind")
            spec.kind = kind_from(body);
        else if (kw == "a_cap")
            spec.a_cap = to_int(body);
        else if (kw == "coefficient")
            add_generator(spec.coefficients.table, body);
        else if (kw == "coefficient-relation")
            add_relation(spec.coefficients, body);
        else if (kw == "host")
            add_generator(spec.host, body);
        else if (kw == "square")
            squares.push_back(stanza_of(body, "square"));
        else if (kw == "etaR") {
            auto [lhs, rhs] = stanza_of(body, "etaR");
            if (lhs != "u_sigma")
                throw std::invalid_argument("the right unit stanza must act on u_sigma");
            eta = rhs;
            has_eta = true;
        } else if (kw == "coproduct")
            coproducts.push_back(stanza_of(body, "coproduct"));
        else
            throw std::invalid_argument("unknown host stanza: " + kw);
    }
    GeneratorTable combined = combined_table(spec);
    for (const auto& [name, value] : squares)
        spec.squares[spec.host.id(name)] = parse_square(value, spec, combined);
    if (has_eta) {
        if (eta == "u_sigma # 1 + a_sigma # tau0")
            spec.eta_r_twist = true;
        else if (eta == "u_sigma # 1")
            spec.eta_r_twist = false;
        else
            throw std::invalid_argument("unsupported right unit: " + eta);
    }
    // The coproduct stanzas are restatements; recompute and compare.
    for (const auto& [name, value] : coproducts) {
        uint32_t g = spec.host.id(name);
        TensorElement stated = parse_tensor(value, spec.coefficients.table, spec.host);
        if (stated != spec.coproduct(g))
            throw std::invalid_argument("coproduct stanza disagrees with the Milnor-type "
                                        "formula for " + name);
    }
    return spec;
}

// ---------- comodule algebras ----------

std::string serialize(const ComoduleSpec& spec, const QOps* ops) {
    std::string out = "comodule " + spec.name + "\n";
    out += std::string("e-infinity ") + (spec.underlies_e_infty ? "true" : "false") + "\n";
    out += "begin-host\n" + serialize(spec.host) + "end-host\n";
    for (const auto& g : spec.module.table.entries)
        out += "generator " + generator_body(g) + "\n";
    for (const auto& r : spec.module.rw.rules)
        out += "relation " + relation_body(r, spec.module.table) + "\n";
    for (const auto& [g, psi] : spec.coaction_of)
        out += "coact " + spec.module.table.gen(g).name + " = " +
               tensor_str(psi, spec.module.table, spec.host.host) + "\n";
    if (ops) {
        out += std::string("ops ") + (ops->classical ? "classical" : "equivariant") + "\n";
        for (int eps = 0; eps < 2; ++eps) {
            for (const auto& [g, v] : ops->module_rule[eps])
                out += "Q" + std::to_string(eps) + " " + spec.module.table.gen(g).name +
                       " = " + v.str(spec.module.table) + "\n";
            for (const auto& [g, v] : ops->host_rule[eps])
                out += "Q" + std::to_string(eps) + " " + spec.host.host.gen(g).name +
                       " = " + v.str(spec.host.host) + "\n";
        }
    }
    return out;
}

namespace {

// Splits a comodule file into the host block and the remaining lines.
void split_comodule(const std::string& text, std::string& host_text,
                    std::vector<std::string>& rest) {
    bool in_host = false;
    for (const std::string& line : content_lines(text)) {
        if (line == "begin-host") {
            in_host = true;
        } else if (line == "end-host") {
            in_host = false;
        } else if (in_host) {
            host_text += line + "\n";
        } else {
            rest.push_back(line);
        }
    }
}

}  // namespace

ComoduleSpec parse_comodule(const std::string& text) {
    ComoduleSpec spec;
    std::string host_text;
    std::vector<std::string> lines;
    split_comodule(text, host_text, lines);
    if (lines.empty() || keyword_of(lines[0]).first != "comodule")
        throw std::invalid_argument("comodule file must start with 'comodule <name>'");
    spec.name = keyword_of(lines[0]).second;
    spec.host = parse_hopf_algebroid(host_text);
    std::vector<std::pair<std::string, std::string>> coacts;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto [kw, body] = keyword_of(lines[i]);
        if (kw == "e-infinity")
            spec.underlies_e_infty = body == "true";
        else if (kw == "generator")
            add_generator(spec.module.table, body);
        else if (kw == "relation")
            add_relation(spec.module, body);
        else if (kw == "coact")
            coacts.push_back(stanza_of(body, "coact"));
        else if (kw == "ops" || kw == "Q0" || kw == "Q1")
            continue;  // operation stanzas are read by parse_ops
        else
            throw std::invalid_argument("unknown comodule stanza: " + kw);
    }
    for (const auto& [name, value] : coacts)
        spec.coaction_of[spec.module.table.id(name)] =
            parse_tensor(value, spec.module.table, spec.host.host);
    return spec;
}

QOps parse_ops(const std::string& text, const ComoduleSpec& spec) {
    QOps ops;
    ops.spec = &spec;
    bool seen = false;
    std::string host_text;
    std::vector<std::string> lines;
    split_comodule(text, host_text, lines);
    for (const std::string& line : lines) {
        auto [kw, body] = keyword_of(line);
        if (kw == "ops") {
            if (body != "classical" && body != "equivariant")
                throw std::invalid_argument("unknown operation family: " + body);
            ops.classical = body == "classical";
            seen = true;
        } else if (kw == "Q0" || kw == "Q1") {
            int eps = kw == "Q1" ? 1 : 0;
            auto [name, value] = stanza_of(body, kw);
            if (auto g = spec.module.table.find(name))
                ops.module_rule[eps][*g] = parse_element(value, spec.module.table);
            else
                ops.host_rule[eps][spec.host.host.id(name)] =
                    parse_element(value, spec.host.host);
        }
    }
    if (!seen) throw std::invalid_argument("comodule file carries no operation stanzas");
    return ops;
}

// ---------- data files ----------

std::string data_file_path(const std::string& name) {
    return std::string(RHOEXT_DATA_DIR) + "/" + name;
}

std::string read_data_file(const std::string& name) {
    std::ifstream in(data_file_path(name), std::ios::binary);
    if (!in.good()) throw std::runtime_error("missing data file: " + name);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool eta_twist_axiom() {
    static const bool twist = [] {
        std::ifstream in(data_file_path("eta_right.axiom"), std::ios::binary);
        if (!in.good()) return true;  // baked-in default: twisted
        std::ostringstream buf;
        buf << in.rdbuf();
        for (const std::string& line : content_lines(buf.str())) {
            auto [kw, body] = keyword_of(line);
            if (kw != "etaR")
                throw std::runtime_error("unexpected stanza in eta_right.axiom: " + kw);
            auto [lhs, rhs] = stanza_of(body, "etaR");
            if (lhs != "u_sigma")
                throw std::runtime_error("eta_right.axiom must act on u_sigma");
            if (rhs == "u_sigma # 1 + a_sigma # tau0") return true;
            if (rhs == "u_sigma # 1") return false;
            throw std::runtime_error("unsupported right unit in eta_right.axiom: " + rhs);
        }
        return true;
    }();
    return twist;
}

}  // namespace rhoext
