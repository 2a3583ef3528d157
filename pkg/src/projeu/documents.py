"""Versioned JSON documents for matrices, lotteries, acts, beliefs and games.

Every document is an object with ``"kind"`` and ``"schema_version"`` keys.
Structural problems raise :class:`SchemaError` with a JSON path; values that
parse but break a model invariant raise :class:`InvariantError`, prefixed
with the offending path.

Examples of each kind::

    {"kind": "payoff_matrix", "schema_version": 1, "n": 2, "entries": [[1, 0], [0, 0]]}
    {"kind": "lottery", "schema_version": 1, "probabilities": [0.2, 0, 0.8]}
    {"kind": "act", "schema_version": 1, "states": ["Urn1", "Urn2"],
     "lotteries": [{"amplitudes": [1, 0]}, {"probabilities": [0, 1]}]}
    {"kind": "belief", "schema_version": 1, "probs": [0.5, 0.5]}
    {"kind": "game", "schema_version": 1, "players": 2, "actions": [2, 2],
     "payoffs": [{"0": [[1, 0], [0, 0]], "1": [[0, 0], [0, 1]]}, {...}]}

Game payoff keys are the opponents' action indices joined by commas, in
player order with the owning player left out.
"""

from __future__ import annotations

import json
from pathlib import Path

from projeu.equilibrium import FiniteGame
from projeu.exceptions import InvariantError, SchemaError
from projeu.lottery import Lottery
from projeu.subjective import Act, Belief, StateSpace
from projeu.utility import PayoffMatrix

__all__ = ["SCHEMA_VERSION", "to_document", "from_document", "loads", "load", "dumps", "dump"]

SCHEMA_VERSION = 1
KINDS = ("payoff_matrix", "lottery", "act", "belief", "game")


def _fail(msg, path):
    raise SchemaError(msg, path)


def _require(doc, key, path):
    if not isinstance(doc, dict):
        _fail("expected an object", path)
    if key not in doc:
        _fail(f"missing field {key!r}", path)
    return doc[key]


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"expected a number, got {type(v).__name__}", path)
    return float(v)


def _vector(v, path):
    if not isinstance(v, list) or not v:
        _fail("expected a non-empty array of numbers", path)
    return [_number(x, f"{path}[{i}]") for i, x in enumerate(v)]


def _matrix(v, path):
    if not isinstance(v, list) or not v:
        _fail("expected a non-empty array of rows", path)
    rows = [_vector(r, f"{path}[{i}]") for i, r in enumerate(v)]
    if len({len(r) for r in rows}) != 1:
        _fail("rows have different lengths", path)
    return rows


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        _fail("expected an integer", path)
    return v


def _invariant(fn, path):
    try:
        return fn()
    except InvariantError as exc:
        raise InvariantError(f"{path}: {exc}") from None


def _header(doc, kind, path="$"):
    if not isinstance(doc, dict):
        _fail("document must be a JSON object", path)
    version = _require(doc, "schema_version", path)
    if version != SCHEMA_VERSION:
        _fail(f"unsupported schema_version {version!r}", f"{path}.schema_version")
    found = _require(doc, "kind", path)
    if found not in KINDS:
        _fail(f"unknown kind {found!r}", f"{path}.kind")
    if kind is not None and found != kind:
        _fail(f"expected a {kind!r} document, got {found!r}", f"{path}.kind")
    return found


def _parse_lottery(doc, path):
    if not isinstance(doc, dict):
        _fail("expected an object", path)
    has_a, has_p = "amplitudes" in doc, "probabilities" in doc
    if has_a and has_p:
        _fail("give either 'amplitudes' or 'probabilities', not both", path)
    if has_a:
        vals = _vector(doc["amplitudes"], f"{path}.amplitudes")
        return _invariant(lambda: Lottery(vals), f"{path}.amplitudes")
    if has_p:
        vals = _vector(doc["probabilities"], f"{path}.probabilities")
        return _invariant(lambda: Lottery.from_probabilities(vals), f"{path}.probabilities")
    _fail("missing 'amplitudes' or 'probabilities'", path)


def _parse(doc, kind):
    path = "$"
    if kind == "payoff_matrix":
        n = _int(_require(doc, "n", path), "$.n")
        entries = _matrix(_require(doc, "entries", path), "$.entries")
        if len(entries) != n or len(entries[0]) != n:
            raise InvariantError(f"$.entries: expected {n}x{n}, got {len(entries)}x{len(entries[0])}")
        return _invariant(lambda: PayoffMatrix(entries), "$.entries")
    if kind == "lottery":
        return _parse_lottery(doc, path)
    if kind == "belief":
        probs = _vector(_require(doc, "probs", path), "$.probs")
        return _invariant(lambda: Belief(probs), "$.probs")
    if kind == "act":
        states = _require(doc, "states", path)
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            _fail("expected an array of state names", "$.states")
        raw = _require(doc, "lotteries", path)
        if not isinstance(raw, list):
            _fail("expected an array of lotteries", "$.lotteries")
        lots = [_parse_lottery(x, f"$.lotteries[{i}]") for i, x in enumerate(raw)]
        return _invariant(lambda: Act(StateSpace(states), tuple(lots)), "$")
    if kind == "game":
        return _parse_game(doc)
    raise AssertionError(kind)


def _parse_game(doc):
    players = _int(_require(doc, "players", "$"), "$.players")
    actions = _require(doc, "actions", "$")
    if not isinstance(actions, list):
        _fail("expected an array of action counts", "$.actions")
    actions = [_int(a, f"$.actions[{i}]") for i, a in enumerate(actions)]
    if players < 2 or len(actions) != players:
        raise InvariantError(f"$.actions: need one action count per player (players={players})")
    if any(a < 1 for a in actions):
        raise InvariantError("$.actions: action counts must be positive")
    payoffs = _require(doc, "payoffs", "$")
    if not isinstance(payoffs, list) or len(payoffs) != players:
        _fail(f"expected {players} payoff tables", "$.payoffs")
    tables = []
    for i, table in enumerate(payoffs):
        tpath = f"$.payoffs[{i}]"
        if not isinstance(table, dict):
            _fail("expected an object keyed by opponent profile", tpath)
        parsed = {}
        for key, m in table.items():
            try:
                prof = tuple(int(k) for k in key.split(",")) if key != "" else ()
            except ValueError:
                _fail(f"bad opponent profile key {key!r}", tpath)
            parsed[prof] = _matrix(m, f"{tpath}[{key!r}]")
        tables.append(parsed)
    return _invariant(lambda: FiniteGame.from_profiles(actions, tables), "$.payoffs")


def from_document(doc: dict, kind: str | None = None):
    """Validate a parsed JSON document and build the corresponding object."""
    return _parse(doc, _header(doc, kind))


def _profile_key(prof):
    return ",".join(str(a) for a in prof)


def to_document(obj) -> dict:
    """Inverse of :func:`from_document`."""
    head = {"schema_version": SCHEMA_VERSION}
    if isinstance(obj, PayoffMatrix):
        return {"kind": "payoff_matrix", **head, "n": obj.n, "entries": obj.u.tolist()}
    if isinstance(obj, Lottery):
        return {"kind": "lottery", **head, "amplitudes": obj.amplitudes.tolist()}
    if isinstance(obj, Belief):
        return {"kind": "belief", **head, "probs": obj.probs.tolist()}
    if isinstance(obj, Act):
        return {
            "kind": "act",
            **head,
            "states": list(obj.states.labels),
            "lotteries": [{"amplitudes": x.amplitudes.tolist()} for x in obj.lotteries],
        }
    if isinstance(obj, FiniteGame):
        payoffs = []
        for i in range(obj.players):
            payoffs.append(
                {_profile_key(p): obj.matrix(i, p).tolist() for p in obj.opponent_profiles(i)}
            )
        return {
            "kind": "game",
            **head,
            "players": obj.players,
            "actions": list(obj.actions),
            "payoffs": payoffs,
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def loads(text: str, kind: str | None = None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return from_document(doc, kind)


def load(path, kind: str | None = None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, kind)


def dumps(obj) -> str:
    return json.dumps(to_document(obj), indent=2)


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")

