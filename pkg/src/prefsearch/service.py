"""Live critiquing service: sessions, displays, choices, stats.

Sessions are event-sourced: every state change appends one event to an
append-only log (a JSON-lines file per session when a data directory is
configured), and the current state of a session is a pure fold over its
history. Replaying a recorded log therefore reproduces the same model and,
given the same catalog and configuration, the same display decisions —
which is how the replay tests work.

The HTTP layer is a thin JSON router over the standard library's threading
HTTP server:

    POST /catalogs                      GET /catalogs
    POST /sessions                      GET  /sessions/{id}/display
    POST /sessions/{id}/preferences     POST /sessions/{id}/choice
    GET  /stats?mode=...

Errors come back as ``{"error": code, "detail": ..., "field": ...}``.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Mapping
from urllib.parse import parse_qs, urlparse

from .catalog import Catalog, CatalogError, catalog_from_json, catalog_to_json
from .dominance import build_dominance_index
from .preferences import (Peaked, Preference, PreferenceError, PreferenceModel,
                          QualitativeValue, Threshold, preference_from_json,
                          preference_to_json, top_k_candidates)
from .suggest import SuggestionConfig, select_suggestions

MODE_CANDIDATES_ONLY = "C"
MODE_CANDIDATES_PLUS_SUGGESTIONS = "C+S"
_MODE_ALIASES = {
    "C": MODE_CANDIDATES_ONLY,
    "candidates_only": MODE_CANDIDATES_ONLY,
    "C+S": MODE_CANDIDATES_PLUS_SUGGESTIONS,
    "candidates_plus_suggestions": MODE_CANDIDATES_PLUS_SUGGESTIONS,
}

# Display shapes per interface variant: candidates, suggestions.
MODE_SHAPE = {
    MODE_CANDIDATES_ONLY: (6, 0),
    MODE_CANDIDATES_PLUS_SUGGESTIONS: (3, 3),
}

# Tolerance of preferences created from relational edits, as a fraction of
# the attribute range.
RELATIONAL_TOLERANCE = 0.05


class ServiceError(Exception):
    """API-level failure carrying an HTTP status and error payload."""

    def __init__(self, status: int, code: str, detail: str, field_name: str | None = None):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail
        self.field = field_name

    def payload(self) -> dict:
        out = {"error": self.code, "detail": self.detail}
        if self.field:
            out["field"] = self.field
        return out


@dataclass(frozen=True)
class ServiceConfig:
    """Scoring setup shared by every session of one service instance."""

    criterion: str = "utility"
    strategy: str = "prob_joint"
    suggestion_config: SuggestionConfig | None = None

    def scoring(self, set_size: int, candidate_count: int) -> SuggestionConfig:
        base = self.suggestion_config or SuggestionConfig()
        return replace(base, strategy=self.strategy, criterion=self.criterion,
                       set_size=set_size, candidate_count=candidate_count, seed=0)


def _edit_key(pref: Preference) -> tuple:
    """Identity of a preference within a session's panel.

    One slot per (attribute, shape); the two threshold polarities are
    distinct slots so a two-sided band stays expressible.
    """
    if isinstance(pref, Threshold):
        return (pref.attr, "threshold", pref.polarity)
    return (pref.attr, type(pref).__name__.lower())


def _relational_to_preference(entry: Mapping[str, Any], catalog: Catalog) -> Preference:
    """Map the study interface's relational form onto a cost-function family."""
    attr = entry["attr"]
    op = entry["operator"]
    weight = int(entry.get("weight", 1))
    schema = catalog.attribute(attr)
    if op in ("<", ">"):
        if not schema.is_numeric:
            raise ServiceError(400, "validation", f"{attr}: relational {op} needs a numeric attribute",
                               "preference")
        return Threshold(attr=attr, weight=weight,
                         polarity="less_than" if op == "<" else "greater_than",
                         theta=float(entry["theta"]),
                         tolerance=RELATIONAL_TOLERANCE * schema.range)
    if op == "=":
        if schema.is_numeric:
            return Peaked(attr=attr, weight=weight, theta=float(entry["theta"]),
                          tolerance=RELATIONAL_TOLERANCE * schema.range)
        return QualitativeValue(attr=attr, weight=weight, theta=entry["theta"])
    raise ServiceError(400, "validation", f"unknown relational operator {op!r}", "operator")


def _parse_preference(entry: Mapping[str, Any], catalog: Catalog) -> Preference:
    try:
        if "operator" in entry:
            pref = _relational_to_preference(entry, catalog)
        else:
            pref = preference_from_json(entry)
        pref.validate(catalog.attribute(pref.attr))
    except ServiceError:
        raise
    except (PreferenceError, KeyError, TypeError, ValueError) as exc:
        raise ServiceError(400, "validation", f"invalid preference: {exc}", "preference") from None
    return pref


@dataclass
class SessionState:
    """Mutable session aggregate, rebuilt purely from its event history."""

    id: str
    catalog_id: str
    mode: str
    preferences: list[Preference] = field(default_factory=list)
    cycle: int = 0
    initial_count: int | None = None  # model size at the first display
    last_display: tuple[list[str], list[str]] | None = None
    closed: bool = False
    final_choice: str | None = None
    history: list[dict] = field(default_factory=list)
    created: float = 0.0
    updated: float = 0.0

    def apply(self, event: Mapping[str, Any], catalog: Catalog) -> None:
        kind = event["kind"]
        payload = event["payload"]
        if kind == "prefs_added":
            self.preferences.append(_parse_preference(payload["preference"], catalog))
        elif kind == "prefs_changed":
            pref = _parse_preference(payload["preference"], catalog)
            key = _edit_key(pref)
            for i, existing in enumerate(self.preferences):
                if _edit_key(existing) == key:
                    self.preferences[i] = pref
                    break
        elif kind == "prefs_removed":
            pref = _parse_preference(payload["preference"], catalog)
            key = _edit_key(pref)
            for i, existing in enumerate(self.preferences):
                if _edit_key(existing) == key:
                    del self.preferences[i]
                    break
        elif kind == "display_shown":
            self.cycle = event["cycle"]
            if self.initial_count is None:
                self.initial_count = len(self.preferences)
            self.last_display = (list(payload["candidates"]), list(payload["suggestions"]))
        elif kind == "final_choice":
            self.closed = True
            self.final_choice = payload["option_id"]
        else:
            raise ValueError(f"unknown event kind {kind!r}")
        self.history.append(dict(event))
        self.updated = event.get("ts", self.updated)

    def model(self) -> PreferenceModel:
        return PreferenceModel(tuple(self.preferences))

    def summary(self) -> dict:
        final = len(self.preferences)
        initial = self.initial_count if self.initial_count is not None else final
        return {
            "session_id": self.id,
            "catalog_id": self.catalog_id,
            "mode": self.mode,
            "cycles": self.cycle,
            "initial_preferences": initial,
            "final_preferences": final,
            "increment": final - initial,
            "final_choice": self.final_choice,
            "closed": self.closed,
        }


class CritiquingService:
    """Catalog registry plus event-sourced session store."""

    def __init__(self, data_dir: str | None = None, config: ServiceConfig | None = None):
        self.config = config or ServiceConfig()
        self.data_dir = data_dir
        self.catalogs: dict[str, Catalog] = {}
        self.sessions: dict[str, SessionState] = {}
        self._store_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        if data_dir:
            os.makedirs(os.path.join(data_dir, "catalogs"), exist_ok=True)
            os.makedirs(os.path.join(data_dir, "sessions"), exist_ok=True)
            self._load_disk_state()

    # -- persistence --------------------------------------------------------

    def _load_disk_state(self) -> None:
        cat_dir = os.path.join(self.data_dir, "catalogs")  # type: ignore[arg-type]
        for name in sorted(os.listdir(cat_dir)):
            if not name.endswith(".json"):
                continue
            with open(os.path.join(cat_dir, name), encoding="utf-8") as f:
                self.catalogs[name[:-5]] = catalog_from_json(json.load(f))
        sess_dir = os.path.join(self.data_dir, "sessions")  # type: ignore[arg-type]
        for name in sorted(os.listdir(sess_dir)):
            if not name.endswith(".jsonl"):
                continue
            with open(os.path.join(sess_dir, name), encoding="utf-8") as f:
                lines = [json.loads(line) for line in f if line.strip()]
            if lines:
                state = self._rebuild(lines)
                self.sessions[state.id] = state
                self._session_locks[state.id] = threading.Lock()

    def _rebuild(self, events: list[dict]) -> SessionState:
        head = events[0]
        if head["kind"] != "session_created":
            raise ValueError("session log must start with session_created")
        payload = head["payload"]
        state = SessionState(id=head["session"], catalog_id=payload["catalog_id"],
                             mode=payload["mode"], created=head.get("ts", 0.0))
        catalog = self.catalogs[state.catalog_id]
        for event in events[1:]:
            state.apply(event, catalog)
        state.history = events
        return state

    def _append_event(self, state: SessionState, kind: str, payload: dict,
                      cycle: int | None = None) -> dict:
        event = {
            "ts": time.time(),
            "session": state.id,
            "cycle": state.cycle if cycle is None else cycle,
            "kind": kind,
            "payload": payload,
        }
        if self.data_dir:
            path = os.path.join(self.data_dir, "sessions", f"{state.id}.jsonl")
            with open(path, "a", encoding="utf-8") as f:
                f.write(json.dumps(event) + "\n")
        return event

    # -- catalogs ------------------------------------------------------------

    def add_catalog(self, data: Mapping[str, Any], catalog_id: str | None = None) -> str:
        body = dict(data)
        catalog_id = catalog_id or body.pop("id", None) or f"cat-{uuid.uuid4().hex[:8]}"
        try:
            catalog = catalog_from_json(body)
        except CatalogError as exc:
            raise ServiceError(400, "invalid_catalog", str(exc)) from None
        with self._store_lock:
            self.catalogs[catalog_id] = catalog
        if self.data_dir:
            path = os.path.join(self.data_dir, "catalogs", f"{catalog_id}.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(catalog_to_json(catalog), f)
        return catalog_id

    def list_catalogs(self) -> list[dict]:
        return [{"id": cid, "n": cat.n, "k": cat.k} for cid, cat in sorted(self.catalogs.items())]

    def catalog(self, catalog_id: str) -> Catalog:
        try:
            return self.catalogs[catalog_id]
        except KeyError:
            raise ServiceError(404, "unknown_catalog", f"no catalog {catalog_id!r}") from None

    def schema_payload(self, catalog_id: str) -> dict:
        return catalog_to_json(self.catalog(catalog_id))

    # -- sessions -------------------------------------------------------------

    def create_session(self, catalog_id: str, mode: str) -> SessionState:
        self.catalog(catalog_id)
        mode_norm = _MODE_ALIASES.get(mode)
        if mode_norm is None:
            raise ServiceError(400, "validation", f"unknown mode {mode!r}", "mode")
        state = SessionState(id=f"s-{uuid.uuid4().hex[:12]}", catalog_id=catalog_id,
                             mode=mode_norm, created=time.time())
        with self._store_lock:
            self.sessions[state.id] = state
            self._session_locks[state.id] = threading.Lock()
        event = self._append_event(state, "session_created",
                                   {"catalog_id": catalog_id, "mode": mode_norm}, cycle=0)
        state.history.append(event)
        return state

    def _session(self, session_id: str) -> tuple[SessionState, threading.Lock]:
        try:
            return self.sessions[session_id], self._session_locks[session_id]
        except KeyError:
            raise ServiceError(404, "unknown_session", f"no session {session_id!r}") from None

    def get_session(self, session_id: str) -> SessionState:
        return self._session(session_id)[0]

    def update_preferences(self, session_id: str, edits: list[Mapping[str, Any]]) -> dict:
        state, lock = self._session(session_id)
        with lock:
            if state.closed:
                raise ServiceError(409, "session_closed", "session already closed")
            if not isinstance(edits, list) or not edits:
                raise ServiceError(400, "validation", "edits must be a non-empty list", "edits")
            catalog = self.catalog(state.catalog_id)
            # Validate the whole batch against the current model before
            # touching state: either all edits apply or none do.
            staged = list(state.preferences)
            events: list[tuple[str, dict]] = []
            for edit in edits:
                op = edit.get("op")
                if op not in ("add", "change", "remove"):
                    raise ServiceError(400, "validation", f"unknown edit op {op!r}", "op")
                if "preference" not in edit:
                    raise ServiceError(400, "validation", "edit needs a preference", "preference")
                pref = _parse_preference(edit["preference"], catalog)
                key = _edit_key(pref)
                slot = next((i for i, p in enumerate(staged) if _edit_key(p) == key), None)
                if op == "add":
                    if slot is not None:
                        raise ServiceError(400, "validation",
                                           f"preference already stated for {key}", "preference")
                    staged.append(pref)
                    events.append(("prefs_added", {"preference": preference_to_json(pref)}))
                elif op == "change":
                    if slot is None:
                        raise ServiceError(400, "validation",
                                           f"no existing preference for {key}", "preference")
                    staged[slot] = pref
                    events.append(("prefs_changed", {"preference": preference_to_json(pref)}))
                else:
                    if slot is None:
                        raise ServiceError(400, "validation",
                                           f"no existing preference for {key}", "preference")
                    del staged[slot]
                    events.append(("prefs_removed", {"preference": preference_to_json(pref)}))
            try:
                PreferenceModel(tuple(staged)).validate(catalog)
            except (PreferenceError, TypeError) as exc:
                raise ServiceError(400, "validation", str(exc), "preference") from None
            for kind, payload in events:
                state.apply(self._append_event(state, kind, payload), catalog)
            return {"model": [preference_to_json(p) for p in state.preferences],
                    "size": len(state.preferences)}

    def compute_display(self, state: SessionState) -> tuple[list[str], list[str]]:
        """Candidates and suggestions for the session's current model."""
        catalog = self.catalog(state.catalog_id)
        model = state.model()
        n_cand, n_sugg = MODE_SHAPE[state.mode]
        candidates = [o.id for o in top_k_candidates(model, catalog, n_cand)]
        suggestions: list[str] = []
        if n_sugg:
            index = build_dominance_index(model, catalog, self.config.criterion)
            scoring = self.config.scoring(n_sugg, n_cand)
            picks = select_suggestions(catalog, model, index, scoring,
                                       exclude_ids=frozenset(candidates))
            suggestions = [o.id for o in picks]
        return candidates, suggestions

    def get_display(self, session_id: str) -> dict:
        state, lock = self._session(session_id)
        with lock:
            if state.closed:
                raise ServiceError(409, "session_closed", "session already closed")
            if not state.preferences:
                raise ServiceError(400, "empty_model",
                                   "state at least one preference to see options")
            catalog = self.catalog(state.catalog_id)
            candidates, suggestions = self.compute_display(state)
            cycle = state.cycle + 1
            event = self._append_event(state, "display_shown",
                                       {"candidates": candidates, "suggestions": suggestions},
                                       cycle=cycle)
            state.apply(event, catalog)
            return {
                "cycle": cycle,
                "candidates": [self._option_payload(catalog, oid) for oid in candidates],
                "suggestions": [self._option_payload(catalog, oid) for oid in suggestions],
            }

    @staticmethod
    def _option_payload(catalog: Catalog, option_id: str) -> dict:
        return {"id": option_id, "values": dict(catalog.option(option_id).values)}

    def record_final_choice(self, session_id: str, option_id: str) -> dict:
        state, lock = self._session(session_id)
        with lock:
            if state.closed:
                raise ServiceError(409, "session_closed", "session already closed")
            if state.last_display is None:
                raise ServiceError(409, "no_display", "no options were displayed yet")
            candidates, suggestions = state.last_display
            if option_id not in candidates and option_id not in suggestions:
                raise ServiceError(400, "not_displayed",
                                   f"option {option_id!r} was not in the last display",
                                   "option_id")
            catalog = self.catalog(state.catalog_id)
            event = self._append_event(state, "final_choice", {"option_id": option_id})
            state.apply(event, catalog)
            return state.summary()

    # -- stats ----------------------------------------------------------------

    def aggregate_stats(self, mode: str | None = None) -> dict:
        """Table of means over closed sessions, grouped by interface mode."""
        wanted = _MODE_ALIASES.get(mode) if mode else None
        if mode and wanted is None:
            raise ServiceError(400, "validation", f"unknown mode {mode!r}", "mode")
        groups: dict[str, list[SessionState]] = {}
        for state in self.sessions.values():
            if not state.closed:
                continue
            if wanted and state.mode != wanted:
                continue
            groups.setdefault(state.mode, []).append(state)
        out = {}
        for mode_name, states in sorted(groups.items()):
            rows = [s.summary() for s in states]
            out[mode_name] = {
                "sessions": len(rows),
                "cycles": _mean(r["cycles"] for r in rows),
                "initial_preferences": _mean(r["initial_preferences"] for r in rows),
                "final_preferences": _mean(r["final_preferences"] for r in rows),
                "increment": _mean(r["increment"] for r in rows),
            }
        return {"modes": out}

    # -- replay ----------------------------------------------------------------

    def replay_events(self, events: list[dict]) -> list[dict]:
        """Re-derive every display in a recorded session from its preference
        events; returns one comparison row per display event."""
        head = events[0]
        state = SessionState(id=head["session"], catalog_id=head["payload"]["catalog_id"],
                             mode=head["payload"]["mode"])
        catalog = self.catalog(state.catalog_id)
        rows = []
        for event in events[1:]:
            if event["kind"] == "display_shown":
                candidates, suggestions = self.compute_display(state)
                rows.append({
                    "cycle": event["cycle"],
                    "recorded": event["payload"],
                    "recomputed": {"candidates": candidates, "suggestions": suggestions},
                    "match": event["payload"]["candidates"] == candidates
                             and event["payload"]["suggestions"] == suggestions,
                })
            state.apply(event, catalog)
        return rows


def _mean(values) -> float:
    items = list(values)
    return sum(items) / len(items) if items else 0.0


# ---------------------------------------------------------------------------
# HTTP layer


_ROUTES = [
    ("POST", re.compile(r"^/catalogs$"), "post_catalog"),
    ("GET", re.compile(r"^/catalogs$"), "get_catalogs"),
    ("GET", re.compile(r"^/catalogs/(?P<cid>[^/]+)$"), "get_catalog"),
    ("POST", re.compile(r"^/sessions$"), "post_session"),
    ("GET", re.compile(r"^/sessions/(?P<sid>[^/]+)/display$"), "get_display"),
    ("POST", re.compile(r"^/sessions/(?P<sid>[^/]+)/preferences$"), "post_preferences"),
    ("POST", re.compile(r"^/sessions/(?P<sid>[^/]+)/choice$"), "post_choice"),
    ("GET", re.compile(r"^/sessions/(?P<sid>[^/]+)$"), "get_session"),
    ("GET", re.compile(r"^/stats$"), "get_stats"),
]


class _Handler(BaseHTTPRequestHandler):
    service: CritiquingService  # set on the server class

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        raw = self.rfile.read(length)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ServiceError(400, "bad_json", f"malformed JSON body: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ServiceError(400, "bad_json", "JSON body must be an object")
        return data

    def _dispatch(self, method: str) -> None:
        parsed = urlparse(self.path)
        for want, pattern, name in _ROUTES:
            if want != method:
                continue
            match = pattern.match(parsed.path)
            if match:
                try:
                    getattr(self, name)(parse_qs(parsed.query), **match.groupdict())
                except ServiceError as exc:
                    self._send(exc.status, exc.payload())
                except Exception as exc:  # pragma: no cover - defensive
                    self._send(500, {"error": "internal", "detail": str(exc)})
                return
        self._send(404, {"error": "not_found", "detail": f"no route for {method} {parsed.path}"})

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    # -- handlers ---------------------------------------------------------

    def post_catalog(self, query):
        body = self._body()
        cid = self.service.add_catalog(body)
        self._send(201, {"catalog_id": cid})

    def get_catalogs(self, query):
        self._send(200, {"catalogs": self.service.list_catalogs()})

    def get_catalog(self, query, cid):
        self._send(200, self.service.schema_payload(cid))

    def post_session(self, query):
        body = self._body()
        if "catalog_id" not in body:
            raise ServiceError(400, "validation", "catalog_id is required", "catalog_id")
        state = self.service.create_session(body["catalog_id"], body.get("mode", "C+S"))
        self._send(201, {"session_id": state.id, "catalog_id": state.catalog_id,
                         "mode": state.mode})

    def get_session(self, query, sid):
        self._send(200, self.service.get_session(sid).summary())

    def post_preferences(self, query, sid):
        body = self._body()
        result = self.service.update_preferences(sid, body.get("edits", []))
        self._send(200, result)

    def get_display(self, query, sid):
        self._send(200, self.service.get_display(sid))

    def post_choice(self, query, sid):
        body = self._body()
        if "option_id" not in body:
            raise ServiceError(400, "validation", "option_id is required", "option_id")
        self._send(200, self.service.record_final_choice(sid, body["option_id"]))

    def get_stats(self, query):
        mode = query.get("mode", [None])[0]
        self._send(200, self.service.aggregate_stats(mode))


def make_server(service: CritiquingService, host: str = "127.0.0.1",
                port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(service: CritiquingService, host: str, port: int) -> None:  # pragma: no cover
    server = make_server(service, host, port)
    print(f"serving on http://{host}:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
