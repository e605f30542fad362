#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rodnet/model.hpp"

namespace rodnet {

/// Location of a token in the source text. Lines are 1-based; the column
/// range is 1-based and half-open, always non-empty.
struct SourceSpan {
    int line = 1;
    int col_begin = 1;
    int col_end = 2;
};

enum class DiagnosticKind { Syntax, Reference, Range };

struct ParseDiagnostic {
    SourceSpan span;
    std::string message;
    DiagnosticKind kind = DiagnosticKind::Syntax;
};

/// Outcome of parse_model: a model when the text was clean, otherwise every
/// diagnostic found in one pass over the input.
struct ParseResult {
    std::optional<Model> model;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Parses the line-oriented model description language. Comments run from
/// '#' to end of line; declarations of different kinds may appear in any
/// order (references are resolved in a second pass). A successful parse
/// always yields a model with no validate_model findings.
ParseResult parse_model(std::string_view text);

/// Renders a valid model back to netlist text. Numeric literals use the
/// shortest representation that parses back to the identical value, so
/// parse_model(serialize_model(m)) reproduces m exactly.
std::string serialize_model(const Model& model);

} // namespace rodnet
