"""Planning knowledge graph toolkit: PDDL, ontology graph, planner selection and macro mining."""

from ._core import (
    Error,
    Graph,
    __version__,
    bundle_json,
    canonical_domain,
    canonical_problem,
    domain_issues,
    relevance,
    run,
    solve,
)

__all__ = [
    "Error",
    "Graph",
    "__version__",
    "bundle_json",
    "canonical_domain",
    "canonical_problem",
    "domain_issues",
    "relevance",
    "run",
    "solve",
]
