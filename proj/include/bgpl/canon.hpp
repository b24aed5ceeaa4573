#pragma once

#include <map>
#include <string>

#include "bgpl/pattern.hpp"

namespace bgpl {

/// Canonical labelling of a pattern. Non-reserved variables and blank nodes are
/// renamed ?c0, ?c1, ...; ?source and ?target keep their names.
struct CanonicalForm {
    std::string key;               // text of `pattern`, one sorted triple per line
    GraphPattern pattern;          // the relabelled pattern
    std::map<Node, Variable> mapping;  // original variable / blank node -> canonical variable
};

/// Equal keys iff the patterns are equal up to renaming of non-reserved
/// variables (and blank nodes). Color refinement on the incidence graph with
/// individualization on ties; the key is the minimum serialization over all leaves.
CanonicalForm canonicalize(const GraphPattern& gp);

inline std::string canonical_key(const GraphPattern& gp) { return canonicalize(gp).key; }

}  // namespace bgpl
