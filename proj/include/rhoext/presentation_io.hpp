#pragma once

#include <string>

#include "rhoext/comodules.hpp"

namespace rhoext {

// Plain-text spec files for presented algebras, Hopf-algebroid hosts, and
// comodule algebras. The exact grammar is documented in data/grammar.md;
// serialization is canonical, so parse followed by serialize reproduces a
// serialized file bit-exactly.

std::string serialize(const AlgebraPresentation& pres);
AlgebraPresentation parse_presentation(const std::string& text);

// Hosts add `kind`, `a_cap`, `coefficient(-relation)`, `host`, `square`,
// `etaR`, and `coproduct` stanzas. The coproduct stanzas are restatements of
// the Milnor-type formula: parsing recomputes them and throws on mismatch.
std::string serialize(const HopfAlgebroidSpec& spec);
HopfAlgebroidSpec parse_hopf_algebroid(const std::string& text);

// Comodules embed their host between `begin-host`/`end-host` and add `coact`
// stanzas; `serialize` optionally appends the `Q0`/`Q1` operation stanzas.
std::string serialize(const ComoduleSpec& spec, const QOps* ops = nullptr);
ComoduleSpec parse_comodule(const std::string& text);
// Reads the operation stanzas of a comodule file against an already parsed
// spec (the returned object keeps a pointer to `spec`).
QOps parse_ops(const std::string& text, const ComoduleSpec& spec);

// Tensor text: terms `module # slot1 # ... # slotN` joined by " + ", with
// "0" for zero; the module monomial is read over `module`, slots over `host`.
std::string tensor_str(const TensorElement& e, const GeneratorTable& module,
                       const GeneratorTable& host);
TensorElement parse_tensor(const std::string& text, const GeneratorTable& module,
                           const GeneratorTable& host);

// Files shipped under the compiled-in data directory.
std::string data_file_path(const std::string& name);
std::string read_data_file(const std::string& name);  // throws when missing

// The right-unit convention of the twisted hosts, read once from
// data/eta_right.axiom: `etaR u_sigma = u_sigma # 1 + a_sigma # tau0` means
// twisted, `etaR u_sigma = u_sigma # 1` untwisted. A missing file falls back
// to the twisted convention; anything else is rejected.
bool eta_twist_axiom();

}  // namespace rhoext
