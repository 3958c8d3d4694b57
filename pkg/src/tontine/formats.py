"""Pool-spec and claims-spec JSON documents, CSV payout tables, number formatting.

Pool spec (version 1)::

    {
      "version": 1,
      "participants": [{"investment": 80, "survival_prob": 0.2}, ...],
      "admin_investment": 0,
      "return": 0,
      "joint_table": [p_0, p_1, ...]          # optional, 2**n entries
    }

Claims spec (version 1)::

    {
      "version": 1,
      "premiums": [1, 1, 1],
      "return": 0,
      "outcomes": [{"probability": 0.5, "claims": [1, 0, 2]}, ...]
    }

Unknown fields are rejected at every level.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .drs import ClaimsDistribution, PremiumVector
from .model import PAPER_ORDER_N3, Independent, JointTable, Pool, SurvivalModel

SPEC_VERSION = 1
MONEY_DECIMALS = 6
DISPLAY_DECIMALS = 2

_POOL_KEYS = {"version", "participants", "admin_investment", "return", "joint_table"}
_PARTICIPANT_KEYS = {"investment", "survival_prob"}
_CLAIMS_KEYS = {"version", "premiums", "return", "outcomes"}
_OUTCOME_KEYS = {"probability", "claims"}


class SpecError(ValueError):
    """A spec document is malformed (parse or schema error, not a domain violation)."""


def _check_keys(obj, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SpecError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise SpecError(f"{where}: missing field(s) {', '.join(sorted(missing))}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where}: expected a number, got {value!r}")
    return value


def _check_version(doc: dict) -> None:
    version = doc.get("version", SPEC_VERSION)
    if version != SPEC_VERSION:
        raise SpecError(f"unsupported spec version {version!r}")


def _load_json(source) -> dict:
    try:
        if isinstance(source, dict):
            return source
        if isinstance(source, str) and source.lstrip().startswith("{"):
            return json.loads(source)
        return json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec: {exc}") from exc


def parse_pool_spec(source) -> tuple[Pool, SurvivalModel]:
    """Parse a pool spec (path, JSON text or already-decoded dict)."""
    doc = _load_json(source)
    _check_keys(doc, _POOL_KEYS, {"participants"}, "pool spec")
    _check_version(doc)
    parts = doc["participants"]
    if not isinstance(parts, list):
        raise SpecError("participants: expected a list")
    investments, probs = [], []
    for k, part in enumerate(parts, start=1):
        _check_keys(part, _PARTICIPANT_KEYS, _PARTICIPANT_KEYS, f"participant {k}")
        investments.append(_number(part["investment"], f"participant {k} investment"))
        probs.append(_number(part["survival_prob"], f"participant {k} survival_prob"))
    admin = _number(doc.get("admin_investment", 0), "admin_investment")
    rate = _number(doc.get("return", 0), "return")
    pool = Pool.from_arrays(investments, probs, admin, rate)
    if "joint_table" in doc:
        table = doc["joint_table"]
        if not isinstance(table, list):
            raise SpecError("joint_table: expected a list")
        entries = [_number(v, "joint_table entry") for v in table]
        if len(entries) != 1 << len(investments):
            raise SpecError(f"joint_table needs {1 << len(investments)} entries, got {len(entries)}")
        model: SurvivalModel = JointTable(entries)
    else:
        model = Independent(probs)
    return pool, model


def pool_spec_dict(pool: Pool, model: SurvivalModel | None = None) -> dict:
    doc = {
        "version": SPEC_VERSION,
        "participants": [{"investment": p.investment, "survival_prob": p.survival_prob}
                         for p in pool.participants],
        "admin_investment": pool.admin_investment,
        "return": pool.period_return,
    }
    if isinstance(model, JointTable):
        doc["joint_table"] = list(model.probs)
    return doc


def dump_pool_spec(pool: Pool, model: SurvivalModel | None = None) -> str:
    return json.dumps(pool_spec_dict(pool, model), indent=2) + "\n"


def parse_claims_spec(source) -> tuple[ClaimsDistribution, PremiumVector, float]:
    doc = _load_json(source)
    _check_keys(doc, _CLAIMS_KEYS, {"premiums", "outcomes"}, "claims spec")
    _check_version(doc)
    premiums = [_number(v, "premium") for v in doc["premiums"]]
    rate = _number(doc.get("return", 0), "return")
    rows = []
    for k, outcome in enumerate(doc["outcomes"], start=1):
        _check_keys(outcome, _OUTCOME_KEYS, _OUTCOME_KEYS, f"outcome {k}")
        claims = [_number(v, f"outcome {k} claim") for v in outcome["claims"]]
        if len(claims) != len(premiums):
            raise SpecError(f"outcome {k}: {len(claims)} claims for {len(premiums)} premiums")
        rows.append((_number(outcome["probability"], f"outcome {k} probability"), claims))
    if not rows:
        raise SpecError("outcomes: need at least one outcome")
    return ClaimsDistribution.from_outcomes(rows), PremiumVector(premiums), rate


def _decimal(value) -> Decimal:
    if isinstance(value, Fraction):
        return Decimal(value.numerator) / Decimal(value.denominator)
    if isinstance(value, int):
        return Decimal(value)
    return Decimal(float(value))


def format_money(value, decimals: int = MONEY_DECIMALS) -> str:
    """Fixed point, round-half-even on the exact value."""
    out = _decimal(value).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN)
    if out == 0:
        out = abs(out)
    return str(out)


def format_prob(value) -> str:
    return f"{float(value):.12g}"


def paper_order(n: int) -> tuple[int, ...]:
    if n != 3:
        raise ValueError("the published column ordering is only defined for three participants")
    return PAPER_ORDER_N3


def payout_table_csv(rows: Iterable, n: int, decimals: int = MONEY_DECIMALS,
                     order: Iterable[int] | None = None) -> str:
    """CSV of (scenario, probability, W_1..W_{n+1}) rows."""
    rows = list(rows)
    if order is not None:
        by_index = {row.scenario.index: row for row in rows}
        rows = [by_index[i] for i in order]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "probability"] + [f"W{i}" for i in range(1, n + 2)])
    for row in rows:
        writer.writerow([row.scenario.index, format_prob(row.probability)]
                        + [format_money(w, decimals) for w in row.payouts])
    return buf.getvalue()
