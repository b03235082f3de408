#pragma once

#include <string>
#include <string_view>

#include "douglaskit/douglas.hpp"
#include "douglaskit/lemma.hpp"

// JSON wire formats. Complex entries are two-element arrays [re, im];
// matrices are row-major nested arrays. Finite doubles round-trip
// bit-exactly; non-finite report fields (an infinite lambda*) serialize as
// null because JSON has no infinity literal.
//
//   algebra element  {"shape": [n1, ...], "blocks": [matrix, ...]}
//   module shape     {"algebra": [n1, ...], "rows": [p1, ...]}
//   module element   {"shape": module-shape, "blocks": [matrix, ...]}
//   operator         {"domain": module-shape, "codomain": module-shape,
//                     "mats": [matrix, ...]}
//   submodule        {"ambient": module-shape, "bases": [matrix, ...]}

namespace douglaskit::io {

std::string dump(const AlgebraElement& x);
std::string dump(const ModuleElement& x);
std::string dump(const AdjointableOperator& t);
std::string dump(const Submodule& f);
std::string dump(const MajorizationReport& rep);
std::string dump(const DouglasSolution& sol);
std::string dump(const WitnessBundle& bundle);

/// {"no_solution": true, "witness": <module element>}
std::string dump_no_solution(const ModuleElement& witness);

AlgebraElement parse_algebra_element(std::string_view text);
ModuleElement parse_module_element(std::string_view text);
AdjointableOperator parse_operator(std::string_view text);
Submodule parse_submodule(std::string_view text);

enum class PayloadKind { AlgebraElement, ModuleElement, Operator, Submodule };

/// Classify a JSON document by its keys. Throws FormatError when it is
/// malformed or matches none of the formats.
PayloadKind detect_kind(std::string_view text);

const char* payload_kind_name(PayloadKind kind);

}  // namespace douglaskit::io
