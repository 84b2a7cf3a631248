"""Directed class-to-class link matrices, one per connector operation.

Each top-level connector in a parsed expression links the class left of it
to the class right of it.  Group operands distribute: an operator next to a
``[...]`` subgroup links the outside class to every class-bearing member.
Connectors inside auxiliary payloads and stroke ranges within a single term
never link classes.  Class 4 -- empty in the scheme itself -- stays in the
matrix as a noise channel: any weight touching it points at mis-parsed
notation upstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .ingest import WEIGHT_MODES, UdcRecord
from .notation import (
    ConnectorKind,
    GroupTerm,
    SimpleTerm,
    Term,
    UdcExpression,
    leading_class,
)

CLASS_COUNT = 10

#: Canonical reporting order for operator maps and exports.
OPERATOR_ORDER = (
    ConnectorKind.PLUS,
    ConnectorKind.STROKE,
    ConnectorKind.COLON,
    ConnectorKind.DOUBLE_COLON,
)

#: The operations reported by default; order-fixing ``::`` parses but is
#: excluded unless explicitly requested.
DEFAULT_OPERATORS = frozenset(
    {ConnectorKind.PLUS, ConnectorKind.STROKE, ConnectorKind.COLON}
)


@dataclass(frozen=True)
class LinkPolicy:
    """Which operators count and how subgroups participate."""

    operators: frozenset[ConnectorKind] = DEFAULT_OPERATORS
    distribute_over_groups: bool = True
    count_group_internal: bool = True

    def __post_init__(self) -> None:
        if not self.operators:
            raise ValueError("link policy needs at least one operator")
        object.__setattr__(self, "operators", frozenset(self.operators))


@dataclass(frozen=True)
class Link:
    operator: ConnectorKind
    from_class: int
    to_class: int
    weight: int = 1


@dataclass(frozen=True)
class SuppressedConnector:
    """A connector that emitted no link, and why."""

    kind: ConnectorKind
    offset: int
    reason: str  # auxiliary-internal | auxiliary-range | classless-operand |
    # operator-excluded | group-internal-disabled


def _zero_cells() -> list[list[int]]:
    return [[0] * CLASS_COUNT for _ in range(CLASS_COUNT)]


@dataclass
class OperationMatrix:
    """10x10 directed weight matrix for one operator, indexed [from][to]."""

    operator: ConnectorKind
    cells: list[list[int]] = field(default_factory=_zero_cells)

    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def merge(self, other: "OperationMatrix") -> "OperationMatrix":
        if other.operator is not self.operator:
            raise ValueError("cannot merge matrices of different operators")
        return OperationMatrix(
            self.operator,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.cells, other.cells)],
        )


@dataclass(frozen=True)
class DegreeVector:
    """Per-class link strength; self-loops count once inbound, once outbound."""

    in_strength: tuple[int, ...]
    out_strength: tuple[int, ...]
    weighted_degree: tuple[int, ...]


def _operand_classes(term: Term, policy: LinkPolicy) -> list[int]:
    if isinstance(term, SimpleTerm):
        return [int(term.class_digits[0])] if term.class_digits else []
    if policy.distribute_over_groups:
        classes: list[int] = []
        for member in term.inner.terms:
            classes.extend(_operand_classes(member, policy))
        return classes
    lead = leading_class(term.inner)
    return [lead] if lead is not None else []


def _walk(
    expr: UdcExpression,
    policy: LinkPolicy,
    links: list[Link],
    suppressed: list[SuppressedConnector] | None,
) -> None:
    for i, conn in enumerate(expr.connectors):
        if conn.kind not in policy.operators:
            if suppressed is not None:
                suppressed.append(
                    SuppressedConnector(conn.kind, conn.offset, "operator-excluded")
                )
            continue
        froms = _operand_classes(expr.terms[i], policy)
        tos = _operand_classes(expr.terms[i + 1], policy)
        if not froms or not tos:
            if suppressed is not None:
                suppressed.append(
                    SuppressedConnector(conn.kind, conn.offset, "classless-operand")
                )
            continue
        for from_class in froms:
            for to_class in tos:
                links.append(Link(conn.kind, from_class, to_class))
    for term in expr.terms:
        if isinstance(term, GroupTerm):
            if policy.count_group_internal:
                _walk(term.inner, policy, links, suppressed)
            elif suppressed is not None:
                for conn in term.inner.connectors:
                    suppressed.append(
                        SuppressedConnector(
                            conn.kind, conn.offset, "group-internal-disabled"
                        )
                    )
        elif suppressed is not None:
            for aux in term.auxiliaries:
                for ic in aux.inner_connectors:
                    # every payload delimiter is one character wide
                    suppressed.append(
                        SuppressedConnector(
                            ic.kind, aux.offset + 1 + ic.position, "auxiliary-internal"
                        )
                    )
            for rng in term.inner_ranges:
                suppressed.append(
                    SuppressedConnector(rng.kind, rng.offset, "auxiliary-range")
                )


def extract_links(expr: UdcExpression, policy: LinkPolicy | None = None) -> list[Link]:
    """Links emitted by one expression, in document order.

    For each connector the left operand's classes pair with the right
    operand's classes (cross product when groups distribute); afterwards the
    walk recurses into subgroups for their internal connectors.
    """
    policy = policy or LinkPolicy()
    links: list[Link] = []
    _walk(expr, policy, links, None)
    return links


def trace_links(
    expr: UdcExpression, policy: LinkPolicy | None = None
) -> tuple[list[Link], list[SuppressedConnector]]:
    """Like :func:`extract_links` but also reports every suppressed connector."""
    policy = policy or LinkPolicy()
    links: list[Link] = []
    suppressed: list[SuppressedConnector] = []
    _walk(expr, policy, links, suppressed)
    suppressed.sort(key=lambda s: s.offset)
    return links, suppressed


def ordered_operators(operators: Iterable[ConnectorKind]) -> list[ConnectorKind]:
    wanted = set(operators)
    return [op for op in OPERATOR_ORDER if op in wanted]


def build_matrices(
    records: Iterable[UdcRecord],
    policy: LinkPolicy | None = None,
    weight_mode: str = "unique",
) -> dict[ConnectorKind, OperationMatrix]:
    """Accumulate link weights per operator over a record stream.

    Operators in the policy always get a matrix, all-zero when no link of
    that kind occurred.
    """
    policy = policy or LinkPolicy()
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode: {weight_mode!r}")
    matrices = {op: OperationMatrix(op) for op in ordered_operators(policy.operators)}
    for record in records:
        if record.expression is None:
            continue
        weight = record.frequency if weight_mode == "frequency" else 1
        for link in extract_links(record.expression, policy):
            matrices[link.operator].cells[link.from_class][link.to_class] += (
                link.weight * weight
            )
    return matrices


def merge_matrix_maps(
    maps: Iterable[dict[ConnectorKind, OperationMatrix]],
) -> dict[ConnectorKind, OperationMatrix]:
    """Element-wise sum of per-operator matrix maps (for chunked folds)."""
    merged: dict[ConnectorKind, OperationMatrix] = {}
    for matrix_map in maps:
        for op, matrix in matrix_map.items():
            merged[op] = merged[op].merge(matrix) if op in merged else matrix
    return merged


def weighted_degree(matrix: OperationMatrix) -> DegreeVector:
    """Row sums out, column sums in; their total drives node sizing."""
    out_strength = tuple(sum(row) for row in matrix.cells)
    in_strength = tuple(
        sum(matrix.cells[f][t] for f in range(CLASS_COUNT)) for t in range(CLASS_COUNT)
    )
    degree = tuple(i + o for i, o in zip(in_strength, out_strength))
    return DegreeVector(in_strength, out_strength, degree)


def normalize_matrix(matrix, class_occurrence):
    """Scale each cell by the product of its endpoint class occurrences.

    ``class_occurrence`` must be an all-method distribution over the same
    corpus.  Cells whose denominator has a zero factor come back as ``None``
    (undefined), never as zero.
    """
    if class_occurrence.method != "all":
        raise ValueError("normalization needs occurrence counts with method='all'")
    occurrence = class_occurrence.counts
    normalized: list[list[float | None]] = []
    for f in range(CLASS_COUNT):
        row: list[float | None] = []
        for t in range(CLASS_COUNT):
            if occurrence[f] == 0 or occurrence[t] == 0:
                row.append(None)
            else:
                row.append(matrix.cells[f][t] / (occurrence[f] * occurrence[t]))
        normalized.append(row)
    return normalized
