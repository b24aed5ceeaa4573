#pragma once

#include <string>
#include <string_view>

#include "bgpl/engine.hpp"

namespace bgpl {

/// SPARQL 1.1 text for a SELECT DISTINCT query. An empty projection is written as ASK.
std::string to_sparql(const SelectQuery& q);

/// `SELECT DISTINCT ?source ?target WHERE { gp }`, the form shown to users.
std::string to_sparql_select(const GraphPattern& gp);

/// ASK with the binding expressed as a one-row VALUES block.
std::string to_sparql_ask(const GraphPattern& gp, const Binding& binding = {});

struct ParsedQuery {
    bool is_ask = false;
    SelectQuery query;  // empty projection for ASK
};

/// Parses the query subset this library emits: PREFIX/BASE prologue, SELECT
/// [DISTINCT] vars|* or ASK, a WHERE block of triple patterns and VALUES
/// blocks, optional LIMIT. Throws ParseError otherwise.
ParsedQuery parse_sparql(std::string_view text);

}  // namespace bgpl
