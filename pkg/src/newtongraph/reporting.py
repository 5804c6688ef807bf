"""Itemized validation reports.

A report is an ordered list of independent check items.  Each item has a
stable plain-language id, one of four statuses, a human-readable detail
sentence, and an optional machine-readable witness payload.  Reports map
onto process exit codes: any failing item means 1, otherwise any partial
or unverified item means 2, otherwise 0.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

PASS = "pass"
FAIL = "fail"
PARTIAL = "partial"
UNVERIFIED = "unverified"

_STATUS_ORDER = (FAIL, UNVERIFIED, PARTIAL, PASS)


@dataclass(frozen=True)
class ReportItem:
    item_id: str
    status: str
    detail: str = ""
    witness: Optional[object] = None

    def __post_init__(self):
        if self.status not in _STATUS_ORDER:
            raise ValueError(f"unknown status {self.status!r}")


@dataclass(frozen=True)
class Report:
    subject: str
    items: Tuple[ReportItem, ...]

    def item(self, item_id):
        for it in self.items:
            if it.item_id == item_id:
                return it
        raise KeyError(item_id)

    def statuses(self):
        return {it.item_id: it.status for it in self.items}

    @property
    def has_failures(self):
        return any(it.status == FAIL for it in self.items)

    @property
    def result(self):
        """Worst status across items; an empty report counts as pass."""
        present = {it.status for it in self.items}
        for status in _STATUS_ORDER:
            if status in present:
                return status
        return PASS

    @property
    def exit_code(self):
        if self.has_failures:
            return 1
        if self.result in (PARTIAL, UNVERIFIED):
            return 2
        return 0

    def render_text(self):
        width = max((len(it.item_id) for it in self.items), default=0)
        lines = [f"subject: {self.subject}"]
        for it in self.items:
            lines.append(
                f"  {it.status.upper():<10} {it.item_id:<{width}}  {it.detail}"
            )
        lines.append(f"result: {self.result} ({len(self.items)} items)")
        return "\n".join(lines)

    def to_payload(self):
        """JSON-serializable representation."""
        return {
            "subject": self.subject,
            "result": self.result,
            "items": [
                {
                    "id": it.item_id,
                    "status": it.status,
                    "detail": it.detail,
                    "witness": _jsonable(it.witness),
                }
                for it in self.items
            ],
        }


def _jsonable(value):
    """Best-effort conversion of witness payloads to JSON-friendly data."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=str)
    return repr(value)
