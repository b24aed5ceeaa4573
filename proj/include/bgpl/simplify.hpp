#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bgpl/endpoint.hpp"

namespace bgpl {

/// Decides whether replacing `before` by `after` keeps the ?source/?target projection.
using EquivalenceCheck = std::function<bool(const GraphPattern& before, const GraphPattern& after)>;

/// Removes triples by three rules until none applies:
///  (a) a triple whose differing positions hold single-occurrence variables,
///      while another triple agrees on all remaining positions;
///  (b) a triple whose variables all lie in components (joined by shared
///      variables only) without ?source and ?target, or that has no variables;
///  (c) a triple with a single-occurrence predicate variable and a
///      single-occurrence variable at one end.
/// A removal that would make a complete pattern incomplete or a connected
/// pattern disconnected is skipped. With `verify`, each removal also needs its
/// approval; a rejection stands until the pattern changes.
GraphPattern simplify(const GraphPattern& gp, const EquivalenceCheck& verify = nullptr);

/// Compares SELECT DISTINCT ?source ?target of both patterns on the endpoint,
/// optionally restricted to the given sources. Timeouts count as "not equal".
EquivalenceCheck projection_verifier(std::shared_ptr<Endpoint> ep, std::optional<std::vector<Term>> sources = std::nullopt);
/// As above; the endpoint must outlive the returned check.
EquivalenceCheck projection_verifier(Endpoint& ep, std::optional<std::vector<Term>> sources = std::nullopt);

}  // namespace bgpl
