"""Approximate maximum-weight travelling salesman tours with a 4/5 guarantee."""

import json

from ._maxtsp import (
    CERTIFICATE_VERSION,
    ORACLE_LIMIT,
    Graph,
    InstanceError,
    InternalError,
    TooLarge,
    UnhandledCase,
    certificate,
    families,
    generate,
    oracle,
    solve,
    tour_weight,
    verify,
)

__all__ = [
    "CERTIFICATE_VERSION",
    "ORACLE_LIMIT",
    "Graph",
    "InstanceError",
    "InternalError",
    "TooLarge",
    "UnhandledCase",
    "certificate",
    "certificate_dict",
    "families",
    "generate",
    "oracle",
    "solve",
    "tour_weight",
    "verify",
]


def certificate_dict(graph, **kwargs):
    return json.loads(certificate(graph, **kwargs))
