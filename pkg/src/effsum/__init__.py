"""Decide whether adding a set ``B`` changes the efficient points of ``A``.

Given a group ``G`` with a reflexive relation ``R``, the package compares the
efficient set of ``A + B`` (the Minkowski sum) with that of ``A``, both by
theorem rules gated on audited relation properties and by brute force.
"""
from .audit import AuditConfig, PropertyStatus, audit_all, audit_property, probe_closure
from .groups import (
    CayleyGroup, CyclicGroup, FiniteSet, FinSetGroup, GroupContext, IntVecGroup,
    SymmetricGroup, group_from_descriptor, minkowski_sum, minkowski_sum_many,
)
from .instance import Instance, parse_instance, parse_instance_text
from .relations import (
    EfficiencyPartition, ExplicitMatrix, ProductOrder, compare, efficient_set, is_stable,
    relation_from_descriptor, white_witness,
)
from .verdict import Verdict, combined_verdict, oracle_verdict, theorem_verdict

__all__ = [
    "AuditConfig", "PropertyStatus", "audit_all", "audit_property", "probe_closure",
    "CayleyGroup", "CyclicGroup", "FiniteSet", "FinSetGroup", "GroupContext",
    "IntVecGroup", "SymmetricGroup", "group_from_descriptor", "minkowski_sum",
    "minkowski_sum_many", "Instance", "parse_instance", "parse_instance_text",
    "EfficiencyPartition", "ExplicitMatrix", "ProductOrder", "compare", "efficient_set",
    "is_stable", "relation_from_descriptor", "white_witness", "Verdict", "combined_verdict",
    "oracle_verdict", "theorem_verdict",
]
