"""Streaming extraction of UDC candidate strings from catalogue exports.

Three line formats are supported:

* ``oclc``  -- ``<id><TAB>a<udc-string>``; the ``a`` subfield tag is required.
* ``libis`` -- ``$$8<udc>$$a<heading>$$9<lang><TAB><count>``; lenient mode
  additionally recovers lines whose ``$$`` markers degraded to a bare ``8``.
* ``plain`` -- one UDC string per line.

Every non-blank line is accounted for exactly once, so the counters satisfy
``lines_read == blank_lines + lines_without_subfield + lines_malformed +
candidates_extracted`` and ``candidates_extracted == dismissed_non_udc +
records_accepted`` on every run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .notation import UdcExpression, classify

SOURCE_FORMATS = ("oclc", "libis", "plain")
WEIGHT_MODES = ("unique", "frequency")


class NoSubfieldError(Exception):
    """The line carries no extractable UDC subfield."""


class MalformedLineError(Exception):
    """The line does not match the declared format at all."""


@dataclass(frozen=True)
class UdcRecord:
    """One ingested candidate: either a parsed expression or a rejection."""

    source_id: str
    raw_udc: str
    frequency: int
    expression: UdcExpression | None = None
    rejection: str | None = None

    @property
    def accepted(self) -> bool:
        return self.expression is not None


@dataclass
class IngestStats:
    lines_read: int = 0
    blank_lines: int = 0
    lines_without_subfield: int = 0
    lines_malformed: int = 0
    candidates_extracted: int = 0
    dismissed_non_udc: int = 0
    records_accepted: int = 0
    rejection_reasons: dict[str, int] = field(default_factory=dict)

    def merge(self, other: "IngestStats") -> "IngestStats":
        """Combine two partial counts; addition makes chunked runs exact."""
        reasons = dict(self.rejection_reasons)
        for reason, count in other.rejection_reasons.items():
            reasons[reason] = reasons.get(reason, 0) + count
        return IngestStats(
            self.lines_read + other.lines_read,
            self.blank_lines + other.blank_lines,
            self.lines_without_subfield + other.lines_without_subfield,
            self.lines_malformed + other.lines_malformed,
            self.candidates_extracted + other.candidates_extracted,
            self.dismissed_non_udc + other.dismissed_non_udc,
            self.records_accepted + other.records_accepted,
            reasons,
        )


def parse_oclc_line(line: str) -> tuple[str, str]:
    """Split one OCLC export line into (source id, candidate string).

    Raises :class:`MalformedLineError` when there is no tab separator and
    :class:`NoSubfieldError` when the second field does not start with the
    ``a`` tag or carries nothing after it.
    """
    if "\t" not in line:
        raise MalformedLineError("no tab separator")
    source_id, rest = line.split("\t", 1)
    body = rest.strip()
    if not body.startswith("a"):
        raise NoSubfieldError("second field does not start with 'a'")
    candidate = body[1:].strip()
    if not candidate:
        raise NoSubfieldError("nothing after the 'a' tag")
    return source_id, candidate


class LibisFields(NamedTuple):
    candidate: str
    heading: str
    language: str
    frequency: int


def _first_long_alpha_run(text: str) -> int:
    """Start of the first alphabetic run of length >= 2, or -1.

    Single letters stay with the notation: alphabetical extensions such as
    ``(043)U1`` must not be cut in half.
    """
    i = 0
    n = len(text)
    while i < n:
        if text[i].isalpha():
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            if j - i >= 2:
                return i
            i = j
        else:
            i += 1
    return -1


def parse_libis_line(line: str, lenient: bool = False) -> LibisFields:
    """Extract (candidate, heading, language, frequency) from a LIBIS line.

    Strict mode requires the ``$$8`` marker.  Lenient mode falls back to a
    leading bare ``8`` and, when the ``$$a`` marker is missing too, cuts the
    candidate at the first alphabetic run of length >= 2 (the heading text).
    """
    if "\t" in line:
        body, count_text = line.rsplit("\t", 1)
        count_text = count_text.strip()
        if not count_text.isdigit():
            raise MalformedLineError(f"non-numeric frequency field {count_text!r}")
        frequency = int(count_text)
    else:
        body = line
        frequency = 1

    marker = body.find("$$8")
    if marker != -1:
        rest = body[marker + 3 :]
    elif lenient and body.startswith("8"):
        rest = body[1:]
    else:
        raise NoSubfieldError("no $$8 marker")

    a_pos = rest.find("$$a")
    if a_pos != -1:
        candidate = rest[:a_pos]
        remainder = rest[a_pos + 3 :]
    elif lenient:
        cut = _first_long_alpha_run(rest)
        if cut == -1:
            candidate, remainder = rest, ""
        else:
            candidate, remainder = rest[:cut], rest[cut:]
    else:
        candidate, remainder = rest, ""

    nine_pos = remainder.find("$$9")
    if nine_pos != -1:
        heading = remainder[:nine_pos]
        language = remainder[nine_pos + 3 :].strip()
    else:
        heading, language = remainder, ""
    return LibisFields(candidate.strip(), heading.strip(), language, frequency)


def parse_plain_line(line: str) -> str:
    """One candidate per line; surrounding whitespace is not notation."""
    return line.strip()


def ingest_stream(
    lines: Iterable[str],
    source_format: str = "plain",
    weight_mode: str = "unique",
    lenient: bool = False,
    first_line: int = 1,
) -> tuple[list[UdcRecord], IngestStats]:
    """Extract, classify and count every line of ``lines``.

    Records come back in input order, rejected candidates included (with
    their rejection reason).  ``weight_mode="unique"`` forces every record
    frequency to 1; ``"frequency"`` keeps the LIBIS count column.
    ``first_line`` seeds the line numbering used for synthesised source ids,
    so contiguous chunks of one file can be processed independently.
    """
    if source_format not in SOURCE_FORMATS:
        raise ValueError(f"unknown source format: {source_format!r}")
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode: {weight_mode!r}")

    records: list[UdcRecord] = []
    stats = IngestStats()
    for lineno, line in enumerate(lines, start=first_line):
        line = line.rstrip("\r\n")
        stats.lines_read += 1
        if not line.strip():
            stats.blank_lines += 1
            continue
        try:
            if source_format == "oclc":
                source_id, candidate = parse_oclc_line(line)
                frequency = 1
            elif source_format == "libis":
                fields = parse_libis_line(line, lenient=lenient)
                source_id, candidate = str(lineno), fields.candidate
                frequency = fields.frequency
            else:
                source_id, candidate = str(lineno), parse_plain_line(line)
                frequency = 1
        except NoSubfieldError:
            stats.lines_without_subfield += 1
            continue
        except MalformedLineError:
            stats.lines_malformed += 1
            continue
        stats.candidates_extracted += 1
        if weight_mode == "unique":
            frequency = 1
        outcome = classify(candidate)
        if outcome.valid:
            records.append(
                UdcRecord(source_id, candidate, frequency, outcome.expression)
            )
            stats.records_accepted += 1
        else:
            records.append(
                UdcRecord(source_id, candidate, frequency, rejection=outcome.reason)
            )
            stats.dismissed_non_udc += 1
            reason = outcome.reason or "unknown"
            stats.rejection_reasons[reason] = stats.rejection_reasons.get(reason, 0) + 1
    return records, stats


def ingest_path(
    path: str,
    source_format: str = "plain",
    weight_mode: str = "unique",
    lenient: bool = False,
) -> tuple[list[UdcRecord], IngestStats]:
    """Ingest a file; bytes that are not UTF-8 are replaced, never fatal."""
    with open(path, encoding="utf-8", errors="replace", newline=None) as handle:
        return ingest_stream(handle, source_format, weight_mode, lenient)
