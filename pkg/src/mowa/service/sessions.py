"""Authoring sessions: six staged builders over one growing draft.

Each stage owns one slice of the draft (identity, context types, sensors,
space, layers, rules). A submit merges its payload, materializes the whole
draft into an application spec, and runs the full validator; any error
rejects the submit atomically, so a stored draft always validates cleanly.
Stage n is submittable only once stages 1..n-1 are complete.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field, replace

from ..appspec.bindings import format_bind, parse_bind
from ..appspec.model import (
    AugmenterInstance,
    Band,
    CONTEXT_TYPE_KINDS,
    ConcreteTarget,
    ContextRule,
    DimensionalSpace,
    ExtractSource,
    Layer,
    LiteralSource,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    SensorDecl,
)
from ..appspec.validate import ValidationReport, validate_spec

STAGE_COUNT = 6


class PayloadError(ValueError):
    """Malformed stage payload (shape, not domain semantics)."""

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class StageOrder(Exception):
    def __init__(self, missing: list[int]) -> None:
        super().__init__(f"stages {missing} must be completed first")
        self.missing = missing


class Busy(Exception):
    pass


@dataclass(frozen=True)
class Draft:
    """Immutable snapshot of the merged stage payloads."""

    identity: dict = field(default_factory=dict)
    context_types: tuple[str, ...] = ()
    sensors: tuple[SensorDecl, ...] = ()
    space: DimensionalSpace | None = None
    layers: tuple[Layer, ...] = ()
    rules: tuple[ContextRule, ...] = ()


EMPTY_SPACE = DimensionalSpace(
    kind="map2d", image_url=None, width=None, height=None, pois=(), bands=(), links=()
)


def materialize(draft: Draft, for_preview: bool = False) -> MobileAppSpec:
    name = draft.identity.get("name", "")
    namespace = draft.identity.get("namespace", "")
    filename = draft.identity.get("filename", "")
    if for_preview:
        name = name or "draft"
        namespace = namespace or "draft.example"
        filename = filename or "draft"
    return MobileAppSpec(
        name=name,
        namespace=namespace,
        filename=filename,
        context_types=set(draft.context_types),
        sensors=draft.sensors,
        space=draft.space if draft.space is not None else EMPTY_SPACE,
        layers=draft.layers,
        rules=draft.rules,
    )


class Session:
    def __init__(self, session_id: str) -> None:
        self.id = session_id
        self.created_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        self.draft = Draft()
        self.complete: set[int] = set()
        self.lock = threading.Lock()

    def view(self) -> dict:
        completed = [n in self.complete for n in range(1, STAGE_COUNT + 1)]
        next_stage = next(
            (n for n in range(1, STAGE_COUNT + 1) if n not in self.complete), None
        )
        return {
            "id": self.id,
            "created_at": self.created_at,
            "stages_complete": completed,
            "next_stage": next_stage,
            "draft": draft_view(self.draft),
        }


class SessionRegistry:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self) -> Session:
        session = Session(uuid.uuid4().hex[:12])
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        return self._sessions.get(session_id)


# ---------------------------------------------------------------------------
# payload -> model builders
# ---------------------------------------------------------------------------

def _str_field(obj: dict, name: str, where: str, required: bool = True) -> str | None:
    value = obj.get(name)
    if value is None:
        if required:
            raise PayloadError(f"{where}: missing field {name!r}")
        return None
    if not isinstance(value, str):
        raise PayloadError(f"{where}: field {name!r} must be a string")
    return value


def _num_field(obj: dict, name: str, where: str, required: bool = True) -> float | None:
    value = obj.get(name)
    if value is None:
        if required:
            raise PayloadError(f"{where}: missing field {name!r}")
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PayloadError(f"{where}: field {name!r} must be a number")
    return float(value)


def _list_field(obj: dict, name: str, where: str) -> list:
    value = obj.get(name)
    if not isinstance(value, list):
        raise PayloadError(f"{where}: field {name!r} must be a list")
    return value


def build_stage1(payload: dict, draft: Draft) -> Draft:
    identity = {}
    for key in ("name", "namespace", "filename"):
        value = _str_field(payload, key, "stage 1")
        if not value.strip():
            # app.name-empty comes from the validator; the other two are shape checks
            if key != "name":
                raise PayloadError(f"stage 1: field {key!r} must not be empty")
        identity[key] = value
    return replace(draft, identity=identity)


def build_stage2(payload: dict, draft: Draft) -> Draft:
    kinds = _list_field(payload, "context_types", "stage 2")
    if not kinds:
        raise PayloadError("stage 2: at least one context type is required")
    seen: list[str] = []
    for kind in kinds:
        if not isinstance(kind, str) or kind not in CONTEXT_TYPE_KINDS:
            raise PayloadError(f"stage 2: unknown context type {kind!r}")
        if kind not in seen:
            seen.append(kind)
    return replace(draft, context_types=tuple(seen))


def build_stage3(payload: dict, draft: Draft) -> Draft:
    sensors = []
    for i, item in enumerate(_list_field(payload, "sensors", "stage 3")):
        if not isinstance(item, dict):
            raise PayloadError(f"stage 3: sensors[{i}] must be an object")
        where = f"stage 3: sensors[{i}]"
        kind = _str_field(item, "kind", where)
        decl = SensorDecl(
            id=_str_field(item, "id", where),
            kind=kind,
            context_type=_str_field(item, "context_type", where),
        )
        radius = _num_field(item, "radius_m", where, required=False)
        if radius is not None and kind == "gps":
            decl = replace(decl, radius_m=radius)
        sensors.append(decl)
    return replace(draft, sensors=tuple(sensors))


def _build_prop_source(spec: dict, where: str):
    literal = spec.get("literal")
    extract = spec.get("extract")
    if (literal is None) == (extract is None):
        raise PayloadError(f"{where}: exactly one of 'literal' or 'extract' is required")
    if literal is not None:
        if not isinstance(literal, str):
            raise PayloadError(f"{where}: 'literal' must be a string")
        return LiteralSource(literal)
    if not isinstance(extract, dict):
        raise PayloadError(f"{where}: 'extract' must be an object")
    return ExtractSource(
        url=_str_field(extract, "url", where),
        xpath=_str_field(extract, "xpath", where),
        mode=_str_field(extract, "mode", where),
    )


def build_stage4(payload: dict, draft: Draft) -> Draft:
    space_obj = payload.get("space")
    if not isinstance(space_obj, dict):
        raise PayloadError("stage 4: field 'space' must be an object")
    kind = _str_field(space_obj, "kind", "stage 4")
    pois = []
    for i, item in enumerate(space_obj.get("pois") or []):
        if not isinstance(item, dict):
            raise PayloadError(f"stage 4: pois[{i}] must be an object")
        where = f"stage 4: pois[{i}]"
        props = {}
        for prop_name, prop_spec in (item.get("props") or {}).items():
            if not isinstance(prop_spec, dict):
                raise PayloadError(f"{where}: prop {prop_name!r} must be an object")
            props[prop_name] = _build_prop_source(prop_spec, f"{where}.{prop_name}")
        order = item.get("order")
        if order is not None and (isinstance(order, bool) or not isinstance(order, int)):
            raise PayloadError(f"{where}: field 'order' must be an integer")
        pois.append(
            PointOfInterest(
                id=_str_field(item, "id", where),
                name=_str_field(item, "name", where),
                position=PointInSpace(
                    _num_field(item, "x", where), _num_field(item, "y", where)
                ),
                target_url=_str_field(item, "target_url", where),
                order=order,
                code=_str_field(item, "code", where, required=False),
                props=props,
            )
        )
    links = []
    for i, item in enumerate(space_obj.get("links") or []):
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise PayloadError(f"stage 4: links[{i}] must be a [from, to] pair of PoI ids")
        links.append((item[0], item[1]))
    bands = []
    for i, item in enumerate(space_obj.get("bands") or []):
        if not isinstance(item, dict):
            raise PayloadError(f"stage 4: bands[{i}] must be an object")
        where = f"stage 4: bands[{i}]"
        bands.append(
            Band(
                id=_str_field(item, "id", where),
                label=_str_field(item, "label", where),
                min=_num_field(item, "min", where),
                max=_num_field(item, "max", where),
                units=_str_field(item, "units", where),
            )
        )
    space = DimensionalSpace(
        kind=kind,
        image_url=_str_field(space_obj, "image_url", "stage 4", required=False),
        width=_num_field(space_obj, "width", "stage 4", required=False),
        height=_num_field(space_obj, "height", "stage 4", required=False),
        pois=tuple(pois),
        bands=tuple(bands),
        links=tuple(links),
    )
    return replace(draft, space=space)


def build_stage5(payload: dict, draft: Draft) -> Draft:
    layers = []
    for i, item in enumerate(_list_field(payload, "layers", "stage 5")):
        if not isinstance(item, dict):
            raise PayloadError(f"stage 5: layers[{i}] must be an object")
        where = f"stage 5: layers[{i}]"
        target_obj = item.get("target")
        if not isinstance(target_obj, dict):
            raise PayloadError(f"{where}: field 'target' must be an object")
        if ("pattern" in target_obj) == ("url" in target_obj):
            raise PayloadError(f"{where}: target needs exactly one of 'pattern' or 'url'")
        if "pattern" in target_obj:
            target = PatternTarget(_str_field(target_obj, "pattern", where))
        else:
            target = ConcreteTarget(_str_field(target_obj, "url", where))
        augmenters = []
        for j, aug in enumerate(item.get("augmenters") or []):
            if not isinstance(aug, dict):
                raise PayloadError(f"{where}: augmenters[{j}] must be an object")
            aug_where = f"{where}.augmenters[{j}]"
            params = {}
            for name, value in (aug.get("params") or {}).items():
                if not isinstance(value, dict):
                    raise PayloadError(f"{aug_where}: param {name!r} must be an object")
                if ("literal" in value) == ("bind" in value):
                    raise PayloadError(
                        f"{aug_where}: param {name!r} needs exactly one of 'literal' or 'bind'"
                    )
                if "literal" in value:
                    if not isinstance(value["literal"], str):
                        raise PayloadError(f"{aug_where}: param {name!r} literal must be a string")
                    from ..appspec.bindings import LiteralBinding

                    params[name] = LiteralBinding(value["literal"])
                else:
                    try:
                        params[name] = parse_bind(value["bind"])
                    except (ValueError, TypeError) as exc:
                        raise PayloadError(f"{aug_where}: param {name!r}: {exc}") from None
            augmenters.append(
                AugmenterInstance(
                    kind=_str_field(aug, "kind", aug_where),
                    anchor=_str_field(aug, "anchor", aug_where),
                    position=_str_field(aug, "position", aug_where),
                    params=params,
                )
            )
        layers.append(
            Layer(id=_str_field(item, "id", where), target=target, augmenters=tuple(augmenters))
        )
    return replace(draft, layers=tuple(layers))


def build_stage6(payload: dict, draft: Draft) -> Draft:
    raw = payload.get("rules")
    if raw is None:
        raw = []
    if not isinstance(raw, list):
        raise PayloadError("stage 6: field 'rules' must be a list")
    rules = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise PayloadError(f"stage 6: rules[{i}] must be an object")
        where = f"stage 6: rules[{i}]"
        rules.append(
            ContextRule(
                sensor_id=_str_field(item, "sensor", where),
                layer_id=_str_field(item, "layer", where),
            )
        )
    if not rules and len(draft.sensors) == 1:
        # a lone sensor is matched to every layer automatically
        only = draft.sensors[0]
        rules = [ContextRule(sensor_id=only.id, layer_id=layer.id) for layer in draft.layers]
    return replace(draft, rules=tuple(rules))


BUILDERS = {
    1: build_stage1,
    2: build_stage2,
    3: build_stage3,
    4: build_stage4,
    5: build_stage5,
    6: build_stage6,
}


def submit_stage(
    session: Session, stage: int, payload: dict, known_urls: set[str] | None = None
) -> tuple[ValidationReport, bool]:
    """Returns (report, accepted). Raises StageOrder / Busy / PayloadError."""
    if not session.lock.acquire(blocking=False):
        raise Busy()
    try:
        missing = [n for n in range(1, stage) if n not in session.complete]
        if missing:
            raise StageOrder(missing)
        candidate = BUILDERS[stage](payload, session.draft)
        report = validate_spec(materialize(candidate), known_urls=known_urls)
        if report.errors():
            return report, False
        session.draft = candidate
        session.complete.add(stage)
        return report, True
    finally:
        session.lock.release()


# ---------------------------------------------------------------------------
# draft -> wire view (for GET /sessions/{id} and UI form rehydration)
# ---------------------------------------------------------------------------

def _source_view(source) -> dict:
    if isinstance(source, LiteralSource):
        return {"literal": source.value}
    return {"extract": {"url": source.url, "xpath": source.xpath, "mode": source.mode}}


def _binding_view(binding) -> dict:
    bind = format_bind(binding)
    if bind is None:
        return {"literal": binding.value}
    return {"bind": bind}


def draft_view(draft: Draft) -> dict:
    view: dict = {}
    if draft.identity:
        view["identity"] = dict(draft.identity)
    if draft.context_types:
        view["context_types"] = list(draft.context_types)
    if draft.sensors:
        view["sensors"] = [
            {
                "id": s.id,
                "kind": s.kind,
                "context_type": s.context_type,
                **({"radius_m": s.radius_m} if s.kind == "gps" else {}),
            }
            for s in draft.sensors
        ]
    if draft.space is not None:
        space = draft.space
        view["space"] = {
            "kind": space.kind,
            **({"image_url": space.image_url} if space.image_url else {}),
            **({"width": space.width} if space.width is not None else {}),
            **({"height": space.height} if space.height is not None else {}),
            "pois": [
                {
                    "id": p.id,
                    "name": p.name,
                    "x": p.position.x,
                    "y": p.position.y,
                    "target_url": p.target_url,
                    **({"order": p.order} if p.order is not None else {}),
                    **({"code": p.code} if p.code is not None else {}),
                    **(
                        {"props": {k: _source_view(v) for k, v in p.props.items()}}
                        if p.props
                        else {}
                    ),
                }
                for p in space.pois
            ],
            "links": [list(link) for link in space.links],
            "bands": [
                {"id": b.id, "label": b.label, "min": b.min, "max": b.max, "units": b.units}
                for b in space.bands
            ],
        }
    if draft.layers:
        view["layers"] = [
            {
                "id": layer.id,
                "target": (
                    {"pattern": layer.target.glob}
                    if isinstance(layer.target, PatternTarget)
                    else {"url": layer.target.url}
                ),
                "augmenters": [
                    {
                        "kind": a.kind,
                        "anchor": a.anchor,
                        "position": a.position,
                        "params": {k: _binding_view(v) for k, v in a.params.items()},
                    }
                    for a in layer.augmenters
                ],
            }
            for layer in draft.layers
        ]
    if draft.rules:
        view["rules"] = [
            {"sensor": r.sensor_id, "layer": r.layer_id} for r in draft.rules
        ]
    return view


def draft_from_spec(spec: MobileAppSpec) -> Draft:
    """Seed a session from a published application (extend-existing flow)."""
    return Draft(
        identity={
            "name": spec.name,
            "namespace": spec.namespace,
            "filename": spec.filename,
        },
        context_types=tuple(sorted(spec.context_types, key=CONTEXT_TYPE_KINDS.index)),
        sensors=spec.sensors,
        space=spec.space,
        layers=spec.layers,
        rules=spec.rules,
    )
