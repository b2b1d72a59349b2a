"""Reading and writing instances.

Two input families are supported:

* FCC-style CSV: a domain file of ``DOMAIN,<station>,<c1>,<c2>,...`` lines
  and an interference file of ``CO,<channel>,<protected>,<i1>,...`` /
  ``ADJ+k,...`` / ``ADJ-k,...`` lines.  The ``paired`` dialect carries the
  interferer's channel explicitly: ``ADJ+1,<channel>,<channel+1>,<protected>,...``.
* A versioned JSON document written by :func:`save_instance`.

Parsers collect recoverable oddities as warning strings and raise
:class:`ParseError` for anything they cannot interpret.
"""

from __future__ import annotations

import csv
import io
import json
import random
import re
from dataclasses import dataclass
from typing import Iterable, Literal, TextIO, Union

import jsonschema

from .model import Constraint, Instance, StationId, normalize

NATIVE_FORMAT = "repack-instance"
NATIVE_VERSION = 1

Stream = Union[str, TextIO, Iterable[str]]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = [p for p in (source, f"line {line}" if line is not None else None) if p]
        super().__init__(": ".join(where + [message]))


@dataclass(frozen=True)
class RawDomainRecord:
    station: StationId
    channels: tuple[int, ...]


@dataclass(frozen=True)
class RawInterferenceRecord:
    offset: int  # 0 for co-channel, k for ADJ+k
    channel: int
    protected: StationId
    interferers: tuple[StationId, ...]
    line: int = 0

    @property
    def kind(self) -> str:
        return "CO" if self.offset == 0 else f"ADJ{self.offset:+d}"

    def expand(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [((self.protected, self.channel), (t, self.channel + self.offset)) for t in self.interferers]


def _rows(stream: Stream):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for lineno, row in enumerate(csv.reader(stream), 1):
        fields = [f.strip() for f in row]
        while fields and fields[-1] == "":
            fields.pop()
        if not fields or fields[0].startswith("#"):
            continue
        yield lineno, fields


def _nat(text: str, what: str, lineno: int) -> int:
    if not re.fullmatch(r"\d+", text):
        raise ParseError(f"{what} {text!r} is not a non-negative integer", lineno)
    return int(text)


def parse_domain_file(stream: Stream):
    """Parse domain lines; returns ``(records, warnings)``, one record per station."""
    merged: dict[StationId, list[int]] = {}
    warnings: list[str] = []
    for lineno, fields in _rows(stream):
        if fields[0].upper() != "DOMAIN":
            raise ParseError(f"expected tag DOMAIN, got {fields[0]!r}", lineno)
        if len(fields) < 2:
            raise ParseError("missing station id", lineno)
        station = _nat(fields[1], "station", lineno)
        chans = [_nat(f, "channel", lineno) for f in fields[2:]]
        if not chans:
            raise ParseError(f"station {station} lists no channels", lineno)
        if len(set(chans)) < len(chans):
            warnings.append(f"line {lineno}: duplicate channels for station {station} merged")
        if station in merged:
            warnings.append(f"line {lineno}: station {station} already has a domain; channels unioned")
            merged[station].extend(chans)
        else:
            merged[station] = chans
    records = [RawDomainRecord(s, tuple(sorted(set(c)))) for s, c in merged.items()]
    return records, warnings


_KIND = re.compile(r"^(CO|ADJ([+-]\d+))$", re.IGNORECASE)

Dialect = Literal["simple", "paired", "auto"]


def _kind_offset(tag: str, lineno: int) -> int:
    m = _KIND.match(tag)
    if not m:
        raise ParseError(f"unknown constraint kind {tag!r}", lineno)
    return int(m.group(2)) if m.group(2) else 0


def _looks_paired(rows) -> bool:
    # every row repeats the channel with the kind's offset applied
    if not rows:
        return False
    for lineno, fields in rows:
        try:
            k = _kind_offset(fields[0], lineno)
            if len(fields) < 5 or int(fields[2]) - int(fields[1]) != k:
                return False
        except (ParseError, ValueError):
            return False
    return True


def parse_interference_file(stream: Stream, dialect: Dialect = "simple"):
    """Parse interference lines; returns ``(records, warnings)``."""
    rows = list(_rows(stream))
    if dialect == "auto":
        dialect = "paired" if _looks_paired(rows) else "simple"
    elif dialect not in ("simple", "paired"):
        raise ValueError(f"unknown dialect {dialect!r}")
    head = 3 if dialect == "paired" else 2
    records, warnings = [], []
    for lineno, fields in rows:
        k = _kind_offset(fields[0], lineno)
        if len(fields) < head + 2:
            raise ParseError("expected channel, protected station and at least one interferer", lineno)
        channel = _nat(fields[1], "channel", lineno)
        if dialect == "paired":
            other = _nat(fields[2], "channel", lineno)
            if other - channel != k:
                raise ParseError(f"channels {channel},{other} do not match kind {fields[0]}", lineno)
        protected = _nat(fields[head], "station", lineno)
        interferers = tuple(_nat(f, "station", lineno) for f in fields[head + 1:])
        if len(set(interferers)) < len(interferers):
            warnings.append(f"line {lineno}: repeated interferer")
        records.append(RawInterferenceRecord(k, channel, protected, interferers, lineno))
    return records, warnings


def load_instance(domain_stream: Stream, interference_stream: Stream | None = None, dialect: Dialect = "simple"):
    """Build an instance from a domain file and an optional interference file.

    Returns ``(instance, warnings)``.  The station set comes from the domain
    file; interference naming other stations is dropped with a warning.
    """
    domains, warnings = parse_domain_file(domain_stream)
    raw = []
    if interference_stream is not None:
        records, more = parse_interference_file(interference_stream, dialect)
        warnings += more
        for rec in records:
            raw.extend(rec.expand())
    instance, more = normalize(raw, {r.station: r.channels for r in domains})
    return instance, warnings + more


def save_instance(instance: Instance) -> str:
    """Canonical JSON text for ``instance``; identical instances give identical text."""
    lines = ["{", f'  "format": "{NATIVE_FORMAT}",', f'  "version": {NATIVE_VERSION},']
    doms = [f'    "{s}": {json.dumps(sorted(c))}' for s, c in instance.domains.items()]
    lines.append('  "domains": {' + ("" if doms else "},"))
    if doms:
        lines.append(",\n".join(doms))
        lines.append("  },")
    cons = [f"    [[{a.station}, {a.channel}], [{b.station}, {b.channel}]]" for a, b in instance.constraints]
    lines.append('  "constraints": [' + ("" if cons else "]"))
    if cons:
        lines.append(",\n".join(cons))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


_PAIR = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
NATIVE_SCHEMA = {
    "type": "object",
    "required": ["format", "version", "domains", "constraints"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": NATIVE_FORMAT},
        "version": {"const": NATIVE_VERSION},
        "domains": {
            "type": "object",
            "propertyNames": {"pattern": "^[0-9]+$"},
            "additionalProperties": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
        "constraints": {"type": "array", "items": {"type": "array", "items": _PAIR, "minItems": 2, "maxItems": 2}},
    },
}


def load_native(text: str, source: str | None = None):
    """Parse a document written by :func:`save_instance`; returns ``(instance, warnings)``.

    Hand-edited documents are re-normalized, so duplicates or reversed
    constraints come back as warnings rather than errors.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"column {exc.colno}: {exc.msg}", exc.lineno, source) from None
    errors = sorted(jsonschema.Draft202012Validator(NATIVE_SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise ParseError(f"{err.json_path}: {err.message}", None, source)
    domains = {int(s): chans for s, chans in doc["domains"].items()}
    warnings = []
    for s, chans in domains.items():
        if len(set(chans)) < len(chans):
            warnings.append(f"domain of station {s} repeats a channel")
    raw = [Constraint.of(*con) for con in doc["constraints"]]
    instance, more = normalize(raw, domains)
    dups = len(raw) - len(set(raw))
    if dups:
        more.append(f"{dups} duplicate constraint(s) merged")
    elif [c for c in raw if c.a.station != c.b.station] != list(instance.constraints) and not more:
        more.append("constraints re-sorted into canonical order")
    return instance, warnings + more


@dataclass(frozen=True)
class GeneratorConfig:
    station_count: int
    channel_count: int
    domain_density: float = 0.5
    interference_density: float = 0.1
    offsets: frozenset = frozenset({0})
    seed: int = 0

    def __post_init__(self):
        if self.station_count < 0:
            raise ValueError("station_count must be non-negative")
        if self.channel_count < 1:
            raise ValueError("channel_count must be at least 1")
        for name in ("domain_density", "interference_density"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        object.__setattr__(self, "offsets", frozenset(int(k) for k in self.offsets))


def generate(config: GeneratorConfig) -> Instance:
    """Random instance; the same config always yields the same instance.

    Stations are ``1..station_count`` and channels ``1..channel_count``.
    """
    rng = random.Random(config.seed)
    channels = range(1, config.channel_count + 1)
    stations = range(1, config.station_count + 1)
    domains = {}
    for s in stations:
        dom = [c for c in channels if rng.random() < config.domain_density]
        domains[s] = dom or [rng.choice(channels)]
    offsets = sorted(config.offsets)
    raw = []
    for s in stations:
        for t in range(s + 1, config.station_count + 1):
            for c in channels:
                for k in offsets:
                    if 1 <= c + k <= config.channel_count and rng.random() < config.interference_density:
                        raw.append(((s, c), (t, c + k)))
    instance, _ = normalize(raw, domains)
    return instance
