"""Production grading and cohort statistics.

Grading compares a candidate application spec against a reference spec under
a rubric: per-PoI property cells (a), info-panel placement and parameters
(b), nav-augmenter placement (c), name+URL correctness (d), and link-chain
agreement (e), composed into SR = ((a+b)/2 + 2*(c+d+e)/3) / 3.

Computation stays unrounded; display rounding is half-away-from-zero. Cohort
statistics (mean, sample std, exact-binomial sign test) operate on whatever
values the caller passes - by convention the display-rounded SR column, which
is what published summaries print.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from statistics import fmean, stdev
from typing import TYPE_CHECKING

from .appspec.model import (
    ConcreteTarget,
    ExtractSource,
    Layer,
    LiteralSource,
    MobileAppSpec,
    PatternTarget,
    POI_TARGET_TOKEN,
    PointOfInterest,
    PropertySource,
)
from .appspec.validate import validate_spec
from .htmldom import XPathSyntax, parse_xpath
from .urls import matches_pattern, normalize_url

if TYPE_CHECKING:
    from .extractor import ExtractCache


class DomainError(ValueError):
    pass


class TooFew(ValueError):
    pass


class AllTies(ValueError):
    pass


class RubricMismatch(ValueError):
    pass


def display_round(value: float, places: int = 2) -> float:
    """Half-away-from-zero at `places` decimals.

    The 10-digit text pre-round strips float representation noise first, so
    e.g. (0.85+0.88)/2 stored as 0.86499999999999999 still rounds up to 0.87.
    """
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(f"{value:.10f}").quantize(quantum, rounding=ROUND_HALF_UP))


def display_str(value: float, places: int = 2) -> str:
    return f"{display_round(value, places):.{places}f}"


# ---------------------------------------------------------------------------
# SR formula
# ---------------------------------------------------------------------------

def sr(a: float, b: float, c: float, d: float, e: float) -> float:
    for name, value in (("a", a), ("b", b), ("c", c), ("d", d), ("e", e)):
        if not (0.0 <= value <= 1.0):
            raise DomainError(f"{name}={value} outside [0, 1]")
    return ((a + b) / 2 + 2 * (c + d + e) / 3) / 3


@dataclass(frozen=True)
class GradeReport:
    a: float
    b: float
    c: float
    d: float
    e: float
    r1: float
    r23: float
    sr: float

    @classmethod
    def from_cells(cls, a: float, b: float, c: float, d: float, e: float) -> "GradeReport":
        return cls(a, b, c, d, e, r1=(a + b) / 2, r23=(c + d + e) / 3, sr=sr(a, b, c, d, e))

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "e": self.e,
            "r1": self.r1,
            "r23": self.r23,
            "sr": self.sr,
        }


@dataclass(frozen=True)
class Rubric:
    reference: MobileAppSpec
    expected_poi_count: int
    expected_link_count: int
    required_props: tuple[str, ...] = ("poi-desc", "poi-pic")
    tolerance: float = 0.05  # fraction of the space diagonal
    cache: "ExtractCache | None" = None


# ---------------------------------------------------------------------------
# grading
# ---------------------------------------------------------------------------

def _space_diagonal(spec: MobileAppSpec) -> float:
    space = spec.space
    if space.width is not None and space.height is not None:
        return math.hypot(space.width, space.height)
    xs = [p.position.x for p in space.pois]
    ys = [p.position.y for p in space.pois]
    if len(xs) < 2:
        return 0.0
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def _pair_pois(
    reference: MobileAppSpec, candidate: MobileAppSpec, tolerance: float
) -> dict[str, PointOfInterest]:
    """Greedy nearest-first matching of reference PoIs to candidate PoIs."""
    max_dist = tolerance * _space_diagonal(reference)
    pairs: list[tuple[float, str, str]] = []
    for ref in reference.space.pois:
        for cand in candidate.space.pois:
            dist = math.hypot(
                cand.position.x - ref.position.x, cand.position.y - ref.position.y
            )
            if dist <= max_dist:
                pairs.append((dist, ref.id, cand.id))
    pairs.sort()
    taken_ref: set[str] = set()
    taken_cand: set[str] = set()
    mapping: dict[str, PointOfInterest] = {}
    for _, ref_id, cand_id in pairs:
        if ref_id in taken_ref or cand_id in taken_cand:
            continue
        taken_ref.add(ref_id)
        taken_cand.add(cand_id)
        poi = candidate.space.poi_by_id(cand_id)
        assert poi is not None
        mapping[ref_id] = poi
    return mapping


def _resolve_source(source: PropertySource, cache: "ExtractCache | None") -> str | None:
    if isinstance(source, LiteralSource):
        return source.value
    assert isinstance(source, ExtractSource)
    if cache is None:
        return None
    from .extractor import ExtractorError, extract

    try:
        return extract(source.url, source.xpath, source.mode, cache)
    except (ExtractorError, XPathSyntax, ValueError):
        return None


def _prop_matches(
    ref_poi: PointOfInterest,
    cand_poi: PointOfInterest,
    prop: str,
    cache: "ExtractCache | None",
) -> bool:
    ref_source = ref_poi.props.get(prop)
    cand_source = cand_poi.props.get(prop)
    if ref_source is None or cand_source is None:
        return False
    ref_value = _resolve_source(ref_source, cache)
    cand_value = _resolve_source(cand_source, cache)
    if ref_value is not None and cand_value is not None:
        return ref_value == cand_value
    # no cache to resolve through: fall back to structural source equality
    return ref_source == cand_source


def _names_match(a: str, b: str) -> bool:
    return a.strip().casefold() == b.strip().casefold()


def _urls_match(a: str, b: str) -> bool:
    return normalize_url(a) == normalize_url(b)


def _layer_serves(layer: Layer, url: str, owner: PointOfInterest | None) -> bool:
    """Would this layer fire on the page at url (owned by the given PoI)?"""
    if isinstance(layer.target, PatternTarget):
        return matches_pattern(layer.target.glob, url)
    assert isinstance(layer.target, ConcreteTarget)
    if layer.target.url == POI_TARGET_TOKEN:
        return owner is not None and _urls_match(owner.target_url, url)
    return _urls_match(layer.target.url, url)


def _anchors_equal(a: str, b: str) -> bool:
    try:
        return parse_xpath(a) == parse_xpath(b)
    except XPathSyntax:
        return False


def _panels_on_page(
    spec: MobileAppSpec, kind: str, url: str, owner: PointOfInterest | None
) -> list:
    found = []
    for layer in spec.layers:
        if not _layer_serves(layer, url, owner):
            continue
        for aug in layer.augmenters:
            if aug.kind == kind:
                found.append(aug)
    return found


def grade(candidate: MobileAppSpec, rubric: Rubric) -> GradeReport:
    report = validate_spec(rubric.reference)
    if not report.ok:
        first = report.errors()[0]
        raise RubricMismatch(f"reference spec is invalid: {first.key}")

    reference = rubric.reference
    mapping = _pair_pois(reference, candidate, rubric.tolerance)
    n_pois = rubric.expected_poi_count

    # a: four property cells per expected PoI
    properties = ("name", "target_url") + tuple(rubric.required_props)
    cells = 0
    for ref_poi in reference.space.pois:
        cand_poi = mapping.get(ref_poi.id)
        if cand_poi is None:
            continue
        for prop in properties:
            if prop == "name":
                ok = _names_match(ref_poi.name, cand_poi.name)
            elif prop == "target_url":
                ok = _urls_match(ref_poi.target_url, cand_poi.target_url)
            else:
                ok = _prop_matches(ref_poi, cand_poi, prop, rubric.cache)
            if ok:
                cells += 1
    a = cells / (n_pois * len(properties))

    # b and c: augmenter placement per expected PoI page
    b_total = 0.0
    c_hits = 0
    for ref_poi in reference.space.pois:
        url = ref_poi.target_url
        cand_poi = mapping.get(ref_poi.id)
        ref_panels = _panels_on_page(reference, "poi-info-panel", url, ref_poi)
        cand_panels = _panels_on_page(candidate, "poi-info-panel", url, cand_poi)
        if ref_panels:
            ref_panel = ref_panels[0]
            best = 0.0
            for panel in cand_panels:
                positioned = int(
                    _anchors_equal(panel.anchor, ref_panel.anchor)
                    and panel.position == ref_panel.position
                )
                params_ok = int(
                    cand_poi is not None
                    and _params_match(reference, ref_panel, ref_poi, candidate, panel, cand_poi, rubric)
                )
                best = max(best, (positioned + params_ok) / 2)
            b_total += best
        ref_navs = _panels_on_page(reference, "hypermedia-nav", url, ref_poi)
        cand_navs = _panels_on_page(candidate, "hypermedia-nav", url, cand_poi)
        if ref_navs:
            ref_nav = ref_navs[0]
            if any(
                _anchors_equal(nav.anchor, ref_nav.anchor) and nav.position == ref_nav.position
                for nav in cand_navs
            ):
                c_hits += 1
    b = b_total / n_pois
    c = c_hits / n_pois

    # d: correct name AND target URL per expected PoI
    d_hits = 0
    for ref_poi in reference.space.pois:
        cand_poi = mapping.get(ref_poi.id)
        if cand_poi is None:
            continue
        if _names_match(ref_poi.name, cand_poi.name) and _urls_match(
            ref_poi.target_url, cand_poi.target_url
        ):
            d_hits += 1
    d = d_hits / n_pois

    # e: direction-sensitive link agreement
    cand_links = set(candidate.space.links)
    e_hits = 0
    for from_id, to_id in reference.space.links:
        cand_from = mapping.get(from_id)
        cand_to = mapping.get(to_id)
        if cand_from is None or cand_to is None:
            continue
        if (cand_from.id, cand_to.id) in cand_links:
            e_hits += 1
    e = e_hits / rubric.expected_link_count

    clamp = lambda v: min(1.0, max(0.0, v))  # noqa: E731 - tiny local guard
    return GradeReport.from_cells(clamp(a), clamp(b), clamp(c), clamp(d), clamp(e))


def _params_match(
    reference: MobileAppSpec,
    ref_aug,
    ref_poi: PointOfInterest,
    candidate: MobileAppSpec,
    cand_aug,
    cand_poi: PointOfInterest,
    rubric: Rubric,
) -> bool:
    """Resolved parameter equality for the info panel's three parameters."""
    from .appspec.bindings import BindingError, resolve_binding

    for name in ("title", "description", "image-url"):
        ref_binding = ref_aug.params.get(name)
        cand_binding = cand_aug.params.get(name)
        if ref_binding is None or cand_binding is None:
            return False
        try:
            ref_value = resolve_binding(reference, ref_binding, ref_poi.id, rubric.cache)
            cand_value = resolve_binding(candidate, cand_binding, cand_poi.id, rubric.cache)
        except BindingError:
            if ref_binding != cand_binding:
                return False
            continue
        if ref_value != cand_value:
            return False
    return True


# ---------------------------------------------------------------------------
# cohort statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stats:
    n: int
    mean: float
    sample_std: float


def cohort_stats(values: list[float]) -> Stats:
    if len(values) < 2:
        raise TooFew(f"need at least 2 values, got {len(values)}")
    return Stats(n=len(values), mean=fmean(values), sample_std=stdev(values))


@dataclass(frozen=True)
class SignTestResult:
    hypothesized_median: float
    n_below: int
    n_equal: int
    n_above: int
    p_value: float
    alpha: float
    reject: bool


def sign_test(values: list[float], median: float, alpha: float = 0.05) -> SignTestResult:
    """One-sided exact binomial test; ties (|v-median| < 1e-9) are excluded."""
    if not values:
        raise AllTies("no values")
    below = sum(1 for v in values if median - v > 1e-9)
    above = sum(1 for v in values if v - median > 1e-9)
    equal = len(values) - below - above
    n = below + above
    if n == 0:
        raise AllTies("every value ties the hypothesized median")
    tail = sum(math.comb(n, k) for k in range(above, n + 1))
    p = float(Fraction(tail, 2**n))
    return SignTestResult(
        hypothesized_median=median,
        n_below=below,
        n_equal=equal,
        n_above=above,
        p_value=p,
        alpha=alpha,
        reject=p < alpha,
    )


# ---------------------------------------------------------------------------
# table rendering
# ---------------------------------------------------------------------------

def format_table(rows: list[tuple[str, GradeReport]]) -> str:
    """Aligned text table over labeled grade reports."""
    header = ("PS", "a", "b", "R1", "c", "d", "e", "R2&3", "SR")
    body: list[tuple[str, ...]] = [header]
    for label, report in rows:
        body.append(
            (
                label,
                display_str(report.a),
                display_str(report.b),
                display_str(report.r1),
                display_str(report.c),
                display_str(report.d),
                display_str(report.e),
                display_str(report.r23),
                display_str(report.sr),
            )
        )
    widths = [max(len(row[i]) for row in body) for i in range(len(header))]
    lines = []
    for row in body:
        lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)
