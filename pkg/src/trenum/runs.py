"""Work units, shard planning and result files."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .bounds import EPSILON, as_fraction, odlyzko_floor
from .lattice import DELTA_LLL
from .polyarith import MonicPolynomial
from .search import FieldRecord, seed_pairs, seed_weight

FORMAT_VERSION = 1
TRIAL_DIVISION_LIMIT = 10 ** 6

log = logging.getLogger(__name__)


def bound_str(B) -> str:
    B = as_fraction(B)
    if B.denominator == 1:
        return str(B.numerator)
    # exact decimal if the denominator divides a power of ten
    k = next((k for k in range(1, 31) if 10 ** k % B.denominator == 0), None)
    if k is not None:
        s = str(abs(B.numerator) * (10 ** k // B.denominator)).rjust(k + 1, "0")
        sign = "-" if B < 0 else ""
        return f"{sign}{s[:-k]}.{s[-k:]}"
    return f"{B.numerator}/{B.denominator}"


@dataclass(frozen=True)
class WorkUnit:
    """A contiguous slice ``[start, stop)`` of the ordered seed pairs."""

    degree: int
    bound: str
    shard_id: int
    shard_count: int
    start: int
    stop: int
    includes_exceptional: bool

    def pairs(self) -> list[tuple[int, int]]:
        return seed_pairs(self.degree, Fraction(self.bound))[self.start:self.stop]


def plan_shards(n: int, B, count: int) -> list[WorkUnit]:
    """Split the seed pairs into ``count`` contiguous slices of similar cost."""
    if count < 1:
        raise ValueError("shard count must be positive")
    B = as_fraction(B)
    bs = bound_str(B)
    if B <= odlyzko_floor(n):
        log.warning("bound %s is below the Odlyzko bound for degree %d", bs, n)
        return [WorkUnit(n, bs, 0, 1, 0, 0, True)]
    pairs = seed_pairs(n, B)
    weights = [seed_weight(n, p) for p in pairs]
    total = sum(weights)
    cuts = [0]
    acc = 0
    i = 0
    for s in range(1, count):
        target = total * s // count
        while i < len(pairs) and acc + weights[i] <= target:
            acc += weights[i]
            i += 1
        cuts.append(max(i, cuts[-1]))
    cuts.append(len(pairs))
    return [WorkUnit(n, bs, s, count, cuts[s], cuts[s + 1], s == 0) for s in range(count)]


# ---------------------------------------------------------------------------
# records


def record_to_json(r: FieldRecord) -> dict:
    out = {
        "degree": r.degree,
        "disc": str(r.disc),
        "coeffs": [str(c) for c in r.poly.coeffs],
        "primitive": r.primitive,
        "subfield_degree": r.subfield_degree,
        "subfield_disc": str(r.subfield_disc),
    }
    if r.review:
        out["review"] = True
    return out


def record_from_json(obj: dict) -> FieldRecord:
    return FieldRecord(
        int(obj["degree"]),
        int(obj["disc"]),
        MonicPolynomial(tuple(int(c) for c in obj["coeffs"])),
        bool(obj["primitive"]),
        int(obj["subfield_degree"]),
        int(obj["subfield_disc"]),
        bool(obj.get("review", False)),
    )


def write_records(path, records: Iterable[FieldRecord]) -> None:
    recs = sorted(records, key=FieldRecord.sort_key)
    with open(path, "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(json.dumps(record_to_json(r), sort_keys=True) + "\n")


def read_records(path) -> list[FieldRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(record_from_json(json.loads(line)))
    return out


@dataclass
class RunManifest:
    degree: int
    bound: str
    shard: str
    mode: str
    counters: dict = field(default_factory=dict)
    wall_time: float = 0.0
    params: dict = field(default_factory=lambda: {
        "epsilon": EPSILON,
        "delta_lll": float(DELTA_LLL),
        "trial_division_limit": TRIAL_DIVISION_LIMIT,
    })
    format_version: int = FORMAT_VERSION

    def write(self, records_path) -> Path:
        p = manifest_path(records_path)
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, sort_keys=True, indent=2)
            fh.write("\n")
        return p

    @classmethod
    def read(cls, records_path) -> "RunManifest | None":
        p = manifest_path(records_path)
        if not p.exists():
            return None
        with open(p, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(**data)


def manifest_path(records_path) -> Path:
    records_path = Path(records_path)
    return records_path.with_name(records_path.name + ".manifest.json")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TRENUM_WORKERS", "1")))
    except ValueError:
        return 1
