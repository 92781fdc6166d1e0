"""Append-only run log with a chained digest per round record.

Records serialize to canonical JSON (sorted keys, compact separators)
and each record's digest covers the previous digest plus the record
body, so any tampering is detectable at the exact round where it
happened and a replayed run can be compared digest-by-digest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

GENESIS_ROUND = -1
_NULL_DIGEST = "0" * 64


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def record_digest(prev_digest: str, body: dict) -> str:
    payload = prev_digest + canonical_json(body)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class RunLog:
    records: list[dict] = field(default_factory=list)

    def append(self, body: dict) -> str:
        """Append one round record (no digest field yet); returns the
        chained digest stored on it."""
        if "digest" in body:
            raise ValueError("record body must not carry a digest")
        prev = self.records[-1]["digest"] if self.records else _NULL_DIGEST
        digest = record_digest(prev, body)
        stored = dict(body)
        stored["digest"] = digest
        self.records.append(stored)
        return digest

    @property
    def final_digest(self) -> str:
        return self.records[-1]["digest"] if self.records else _NULL_DIGEST

    def verify_chain(self) -> int | None:
        """Recompute every digest; returns the round of the first
        corrupt record, or None when the chain is intact."""
        prev = _NULL_DIGEST
        for record in self.records:
            body = {k: v for k, v in record.items() if k != "digest"}
            if record_digest(prev, body) != record.get("digest"):
                return record.get("round")
            prev = record["digest"]
        return None

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.records:
                fh.write(canonical_json(record))
                fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "RunLog":
        log = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    log.records.append(json.loads(line))
        return log


def first_divergence(a: RunLog, b: RunLog) -> int | None:
    """Round index of the first record whose digest differs between two
    logs (or the first round present in only one), None if identical."""
    for ra, rb in zip(a.records, b.records):
        if ra.get("digest") != rb.get("digest"):
            return ra.get("round")
    if len(a.records) != len(b.records):
        longer = a if len(a.records) > len(b.records) else b
        return longer.records[min(len(a.records), len(b.records))].get("round")
    return None
