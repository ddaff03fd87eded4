"""ECA runtime: navigation handling, rule firing, layer weaving, replay.

Provides:
- PageCorpus: hermetic URL→file page store (manifest.json)
- Session / SessionLog: one consumer's state machine plus its append-only log
- new_session, handle_nav, handle_context: the event loop pieces
- run_trace: fold a whole trace, collecting snapshots after every weave
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .appspec.bindings import BindingError
from .appspec.model import (
    ConcreteTarget,
    MobileAppSpec,
    PatternTarget,
    POI_TARGET_TOKEN,
)
from .appspec.validate import validate_spec
from .appspec.xmlio import InvalidSpec
from .augmenters import BindingContext, apply_layer
from .extractor import ExtractCache
from .htmldom import Document, parse_html, serialize_html
from .sensors import (
    AtPoi,
    ContextChange,
    InBand,
    Nav,
    OrientationMode,
    Semantic,
    SensorState,
    SimEvent,
    semantic_str,
    step,
)
from .tour import TourState, new_tour, visit
from .urls import matches_pattern, normalize_url

logger = logging.getLogger(__name__)


class BrokenCorpus(Exception):
    def __init__(self, detail: str) -> None:
        super().__init__(detail)


class PageCorpus:
    """Read-only page store: manifest.json maps normalized URL → relative path."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        manifest_path = self.directory / "manifest.json"
        if not manifest_path.exists():
            raise BrokenCorpus(f"no manifest.json in {self.directory}")
        self.manifest: dict[str, str] = json.loads(manifest_path.read_text(encoding="utf-8"))
        for url, rel in self.manifest.items():
            if not (self.directory / rel).exists():
                raise BrokenCorpus(f"manifest entry {url} points at missing file {rel}")

    def urls(self) -> set[str]:
        return set(self.manifest)

    def has(self, url: str) -> bool:
        return normalize_url(url) in self.manifest

    def load(self, url: str) -> Document:
        """Fresh parse on every load; augmentation mutates documents."""
        key = normalize_url(url)
        rel = self.manifest.get(key)
        if rel is None:
            raise BrokenCorpus(f"{url} is not in the corpus")
        return parse_html((self.directory / rel).read_bytes(), source_url=key)


@dataclass
class SessionLog:
    entries: list[dict] = field(default_factory=list)

    def nav_loaded(self, url: str) -> None:
        self.entries.append({"type": "nav-loaded", "url": url})

    def rule_fired(self, sensor_id: str, layer_id: str, semantic: str) -> None:
        self.entries.append(
            {"type": "rule-fired", "sensor": sensor_id, "layer": layer_id, "semantic": semantic}
        )

    def layer_applied(self, layer_id: str, url: str, augmenters: int, warnings: int) -> None:
        self.entries.append(
            {
                "type": "layer-applied",
                "layer": layer_id,
                "url": url,
                "augmenters": augmenters,
                "warnings": warnings,
            }
        )

    def warning(self, key: str, detail: str) -> None:
        self.entries.append({"type": "warning", "key": key, "detail": detail})

    def snapshot(self, path: str) -> None:
        self.entries.append({"type": "snapshot", "path": path})

    def to_jsonl(self) -> bytes:
        return ("\n".join(json.dumps(e, sort_keys=True) for e in self.entries) + "\n").encode(
            "utf-8"
        ) if self.entries else b""


SnapshotHook = Callable[[int, str, bytes], None]


@dataclass
class Session:
    spec: MobileAppSpec
    corpus: PageCorpus
    cache: ExtractCache | None
    tour: TourState
    sensor_state: SensorState = field(default_factory=SensorState)
    current_url: str | None = None
    current_doc: Document | None = None
    log: SessionLog = field(default_factory=SessionLog)
    now_ms: int = 0
    on_layer_applied: SnapshotHook | None = None


def new_session(spec: MobileAppSpec, corpus: PageCorpus, cache: ExtractCache | None = None) -> Session:
    report = validate_spec(spec)
    if not report.ok:
        first = report.errors()[0]
        raise InvalidSpec(f"{first.key}: {first.message}", report)
    return Session(spec=spec, corpus=corpus, cache=cache, tour=new_tour(spec.space))


def _apply_and_log(session: Session, layer, ctx: BindingContext) -> None:
    assert session.current_doc is not None and session.current_url is not None
    warnings_before = len(ctx.warnings)
    try:
        woven = apply_layer(session.current_doc, layer, ctx)
    except BindingError as exc:
        session.log.warning("binding.error", f"{layer.id}: {exc}")
        return
    session.current_doc = woven
    new_warnings = ctx.warnings[warnings_before:]
    for key, detail in new_warnings:
        session.log.warning(key, detail)
    session.log.layer_applied(layer.id, session.current_url, ctx.applied, len(new_warnings))
    if session.on_layer_applied is not None:
        session.on_layer_applied(session.now_ms, layer.id, serialize_html(woven))


def _context_for(session: Session, semantic: Semantic | None) -> BindingContext:
    ctx = BindingContext(spec=session.spec, cache=session.cache, tour=session.tour)
    if isinstance(semantic, AtPoi):
        ctx.poi = semantic.poi_id
    elif isinstance(semantic, InBand):
        ctx.band = session.spec.space.band_by_id(semantic.band_id)
    elif isinstance(semantic, OrientationMode):
        ctx.orientation = semantic.mode
    return ctx


def _semantic_matches(session: Session, semantic: Semantic | None) -> bool:
    """Condition check: is the semantic among the spec's values of interest?"""
    if isinstance(semantic, AtPoi):
        return session.spec.space.poi_by_id(semantic.poi_id) is not None
    if isinstance(semantic, InBand):
        return session.spec.space.band_by_id(semantic.band_id) is not None
    if isinstance(semantic, OrientationMode):
        return True
    return False  # None or LeftPois: nothing of interest


def handle_nav(session: Session, url: str) -> Session:
    target = normalize_url(url)
    if not session.corpus.has(target):
        session.log.warning("nav.miss", f"{target} is not in the corpus")
        return session
    session.current_doc = session.corpus.load(target)
    session.current_url = target
    session.log.nav_loaded(target)
    for layer in session.spec.layers:
        if not isinstance(layer.target, PatternTarget):
            continue
        if not matches_pattern(layer.target.glob, target):
            continue
        rules = [r for r in session.spec.rules if r.layer_id == layer.id]
        if not rules:
            # unconditioned layer: applies on every matching navigation
            _apply_and_log(session, layer, _context_for(session, None))
            continue
        for rule in rules:
            sensor = session.spec.sensor_by_id(rule.sensor_id)
            if sensor is None:
                continue
            semantic = session.sensor_state.value(sensor)
            if _semantic_matches(session, semantic):
                _apply_and_log(session, layer, _context_for(session, semantic))
                break
    return session


def handle_context(session: Session, change: ContextChange) -> Session:
    semantic = change.semantic
    if isinstance(semantic, AtPoi):
        visit(session.tour, semantic.poi_id)
    for rule in session.spec.rules:
        if rule.sensor_id != change.sensor_id:
            continue
        if not _semantic_matches(session, semantic):
            continue
        layer = session.spec.layer_by_id(rule.layer_id)
        if layer is None:
            continue
        session.log.rule_fired(rule.sensor_id, layer.id, semantic_str(semantic))
        if isinstance(layer.target, ConcreteTarget):
            if layer.target.url == POI_TARGET_TOKEN:
                if not isinstance(semantic, AtPoi):
                    session.log.warning(
                        "layer.no-poi-for-target",
                        f"{layer.id}: {POI_TARGET_TOKEN} needs a PoI match",
                    )
                    continue
                poi = session.spec.space.poi_by_id(semantic.poi_id)
                assert poi is not None  # condition checked above
                target_url = poi.target_url
            else:
                target_url = layer.target.url
            target = normalize_url(target_url)
            if not session.corpus.has(target):
                session.log.warning("nav.miss", f"{target} is not in the corpus")
                continue
            session.current_doc = session.corpus.load(target)
            session.current_url = target
            session.log.nav_loaded(target)
        else:
            if session.current_url is None or not matches_pattern(
                layer.target.glob, session.current_url
            ):
                continue
        _apply_and_log(session, layer, _context_for(session, semantic))
    return session


@dataclass
class RunResult:
    log: SessionLog
    snapshots: list[tuple[int, str, bytes]]  # (t_ms, filename, page bytes)
    session: Session


def run_trace(
    spec: MobileAppSpec,
    corpus: PageCorpus,
    trace: list[SimEvent],
    cache: ExtractCache | None = None,
) -> RunResult:
    session = new_session(spec, corpus, cache)
    snapshots: list[tuple[int, str, bytes]] = []

    def hook(t_ms: int, layer_id: str, data: bytes) -> None:
        name = f"{t_ms}-{layer_id}.html"
        snapshots.append((t_ms, name, data))
        session.log.snapshot(name)

    session.on_layer_applied = hook
    for ev in trace:
        session.now_ms = ev.t_ms
        if isinstance(ev.payload, Nav):
            handle_nav(session, ev.payload.url)
            continue
        next_state, change = step(session.sensor_state, spec, ev)
        session.sensor_state = next_state
        if change is not None:
            handle_context(session, change)
    return RunResult(log=session.log, snapshots=snapshots, session=session)
