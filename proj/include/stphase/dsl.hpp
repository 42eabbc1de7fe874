#pragma once

#include "stphase/connection.hpp"
#include "stphase/fourier.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stphase {

struct SourceSpan {
    int line = 1;
    int column = 1;
};

struct NamedConnection {
    std::string name; // empty for a bare expression
    FormalConnection value;
    SourceSpan span;
};

struct ParsedDocument {
    std::vector<NamedConnection> statements;
    // The input was a single expression without `name = ...;`.
    bool bare = false;
};

// Grammar:
//   document := stmt* | conn [';']
//   stmt     := name '=' conn ';'
//   conn     := term ('(+)' term)*
//   term     := 'El(' 'rho=' expr ',' 'phi=' expr ',' 'R=' jordan ')' | 'Reg(' 'R=' jordan ')' | name
//   jordan   := '[' [entry (',' entry)*] ']'      entry := '(' eig ':' int ')'
//   eig      := 'res:' rational | expr
//   expr     := sums, products, quotients and integer powers of integers, 'i', 'zeta(' int ')',
//               'root(' expr ',' int ')', one series variable and 'O(' var '^' int ')'
// '#' starts a comment. ParseError carries line and column.
ParsedDocument parse(std::string_view text);
// Exactly one connection (bare or a single statement).
FormalConnection parse_connection(std::string_view text);
FieldElement parse_scalar(std::string_view text);
RegularPart parse_jordan(std::string_view text);

enum class Format { text, json };

nlohmann::json connection_json(const FormalConnection& m);
std::string print_canonical(const FormalConnection& m, Format format = Format::text);
// Inverse of connection_json: rebuilds each summand from its rho, phi and jordan fields.
FormalConnection connection_from_json(const nlohmann::json& doc);
// DSL text, or a JSON connection record when the first non-blank character is '{'.
ParsedDocument parse_input(std::string_view text);
// Statements as `name = conn;` lines, or the bare expression.
std::string print_document(const ParsedDocument& doc);

// Singularity data in JSON:
//   {"genus": 0, "points": [
//      {"location": "0", "summands": "<conn>", "psi": "[(<eig>:<size>), ...]"},
//      {"location": "inf", "germ": "<conn>"}
//      {"location": "inf", "slope_above": "<conn>", "slope_one": [{"c": "<scalar>", "residual": "<El>"}],
//       "slope_below": "<conn>"}]}
// Connection strings use the DSL; their errors are reported with the JSON path prefixed.
struct SingularityDocument {
    long genus = 0;
    std::vector<SingularityDatum> points;
};

nlohmann::json parse_json(std::string_view text);
std::vector<SingularityDatum> singularity_points(const nlohmann::json& points, const std::string& path,
                                                 const Settings& s = {});
SingularityDocument parse_singularity_document(std::string_view text, const Settings& s = {});

} // namespace stphase
