"""Regenerate the bundled demo fixtures under src/mowa/fixtures/.

Run from the repository root:

    python3 tools/gen_fixtures.py

Produces three fixture sets:
- museum:  a 12-piece guided tour over a floorplan (QR sensor, info panel,
  tour navigation), with a hermetic page corpus and two sensor traces
- db_media: a noise-reactive video page (dB sensor, volume adapter, badge)
- grading:  the demo cohort of 21 graded submissions with printed columns
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from mowa.appspec.bindings import LiteralBinding, PoiFieldBinding, PoiPropBinding
from mowa.appspec.model import (
    AugmenterInstance,
    Band,
    ConcreteTarget,
    ContextRule,
    DimensionalSpace,
    ExtractSource,
    Layer,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    POI_TARGET_TOKEN,
    SensorDecl,
)
from mowa.appspec.xmlio import parse_spec, serialize_spec
from mowa.evaluation import GradeReport, display_str
from mowa.urls import normalize_url

FIXTURES = ROOT / "src" / "mowa" / "fixtures"

COLLECTION_URL = "https://museum.example/collection"

# name, floorplan x, floorplan y, signage description
PIECES = [
    ("Toxodon", 60, 80, "A heavily built notoungulate about the size of a rhinoceros, with high-crowned teeth suited to coarse grasses."),
    ("Glyptodon", 150, 60, "An armoured relative of armadillos whose rigid shell was built from hundreds of interlocking bony plates."),
    ("Megatherium", 240, 100, "One of the largest ground sloths, able to rear on its hind legs to browse high branches."),
    ("Macrauchenia", 360, 70, "A long-necked litoptern with nostrils set high on the skull, hinting at a short trunk."),
    ("Mylodon", 450, 90, "A stout ground sloth known from cave deposits that preserved patches of skin and reddish hair."),
    ("Scelidotherium", 540, 60, "A burrowing ground sloth with a long narrow skull; fossil tunnels match its arm anatomy."),
    ("Doedicurus", 540, 260, "A glyptodont bearing a spiked tail club swung both in contests and in defence."),
    ("Smilodon", 450, 300, "A sabre-toothed cat whose flattened canines served an ambush hunter of large, slow prey."),
    ("Hippidion", 360, 280, "A stocky South American horse with a deeply recessed nasal region."),
    ("Panochthus", 240, 320, "A large glyptodont whose tail sheath carried rosette patterns instead of spikes."),
    ("Lestodon", 150, 280, "A bulky ground sloth whose broad muzzle marks it as a grazer of open lowlands."),
    ("Eutatus", 60, 300, "A large long-nosed armadillo that persisted into the early Holocene."),
]

WIKI_PAGE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{name}</title>
</head>
<body>
<header>
<h1 id="firstHeading">{name}</h1>
</header>
<div id="mw-content-text">
<p><b>{name}</b> is an extinct Pleistocene animal of South America. {desc}</p>
<h2>Description</h2>
<p>Remains of {name} are well represented in the pampean deposits, and mounted
skeletons anchor several public collections.</p>
<h2>Distribution</h2>
<p>Finds attributed to {name} cluster around the Luján river basin, with
outliers reported across the wider region.</p>
</div>
<footer><p>Demo encyclopedia page bundled for the museum walkthrough.</p></footer>
</body>
</html>
"""

VIDEO_PAGE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>Clip 42</title>
</head>
<body>
<main>
<video src="https://videos.example/media/clip42.mp4" controls></video>
<p>A short documentary clip about fieldwork in the pampas.</p>
</main>
</body>
</html>
"""

# demo cohort: per-submission rubric cells plus the columns as printed
COHORT = [
    # id,   a,    b,    r1,   c,    d,    e,    r23,  sr  (printed)
    ("1", 0.98, 0.50, 0.74, 0.50, 1.00, 1.00, 0.83, 0.80),
    ("2", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    ("3", 0.71, 0.71, 0.71, 0.92, 1.00, 1.00, 0.97, 0.89),
    ("4", 1.00, 1.00, 1.00, 1.00, 1.00, 0.80, 0.93, 0.96),
    ("5", 0.33, 0.17, 0.25, 0.17, 0.33, 0.30, 0.27, 0.26),
    ("6", 1.00, 0.00, 0.50, 0.00, 1.00, 1.00, 0.67, 0.61),
    ("7", 0.58, 0.58, 0.58, 1.00, 1.00, 1.00, 1.00, 0.86),
    ("8", 0.92, 0.92, 0.92, 0.92, 0.92, 0.50, 0.78, 0.83),
    ("9", 1.00, 1.00, 1.00, 1.00, 1.00, 0.70, 0.90, 0.93),
    ("10", 0.67, 0.33, 0.50, 0.33, 0.67, 0.50, 0.50, 0.50),
    ("11", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    ("12", 0.54, 0.54, 0.54, 1.00, 1.00, 1.00, 1.00, 0.85),
    ("13", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    ("14", 1.00, 0.83, 0.92, 0.83, 1.00, 1.00, 0.94, 0.93),
    ("15", 1.00, 1.00, 1.00, 1.00, 1.00, 0.60, 0.87, 0.91),
    ("16", 1.00, 1.00, 1.00, 1.00, 1.00, 0.70, 0.90, 0.93),
    ("17", 0.85, 0.88, 0.87, 0.92, 0.88, 0.70, 0.83, 0.84),
    ("18", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    ("19", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    ("20", 1.00, 0.54, 0.77, 1.00, 1.00, 1.00, 1.00, 0.92),
    ("21", 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
]


def slug(name: str) -> str:
    return name.lower()


def wiki_url(name: str) -> str:
    return f"https://en.wikipedia.org/wiki/{name}"


def museum_spec() -> MobileAppSpec:
    pois = []
    links = []
    for i, (name, x, y, _) in enumerate(PIECES, start=1):
        pois.append(
            PointOfInterest(
                id=f"p{i}",
                name=name,
                position=PointInSpace(float(x), float(y)),
                target_url=wiki_url(name),
                order=i,
                code=f"https://en.qrwp.example/{name}",
                props={
                    "poi-desc": ExtractSource(
                        url=COLLECTION_URL,
                        xpath=f"//p[@id='desc-{slug(name)}']",
                        mode="text",
                    ),
                    "poi-pic": ExtractSource(
                        url=COLLECTION_URL,
                        xpath=f"//img[@id='pic-{slug(name)}']",
                        mode="attribute:src",
                    ),
                },
            )
        )
        if i > 1:
            links.append((f"p{i - 1}", f"p{i}"))
    space = DimensionalSpace(
        kind="floorplan",
        image_url="https://museum.example/plans/hall.png",
        width=600.0,
        height=400.0,
        pois=tuple(pois),
        bands=(),
        links=tuple(links),
    )
    tour_layer = Layer(
        id="tour",
        target=ConcreteTarget(POI_TARGET_TOKEN),
        augmenters=(
            AugmenterInstance(
                kind="poi-info-panel",
                anchor="//div[@id='mw-content-text']",
                position="first_child",
                params={
                    "title": PoiFieldBinding("name"),
                    "description": PoiPropBinding("poi-desc"),
                    "image-url": PoiPropBinding("poi-pic"),
                },
            ),
            AugmenterInstance(
                kind="hypermedia-nav",
                anchor="//div[@id='mw-content-text']",
                position="last_child",
                params={},
            ),
        ),
    )
    return MobileAppSpec(
        name="Pleistocene Hall Tour",
        namespace="museum.example",
        filename="museum-tour",
        context_types={"location"},
        sensors=(SensorDecl(id="qr1", kind="qr", context_type="location"),),
        space=space,
        layers=(tour_layer,),
        rules=(ContextRule(sensor_id="qr1", layer_id="tour"),),
    )


def db_media_spec() -> MobileAppSpec:
    space = DimensionalSpace(
        kind="scalar_scale",
        image_url=None,
        width=None,
        height=None,
        pois=(),
        bands=(
            Band(id="quiet", label="Quiet", min=0.0, max=40.0, units="dB"),
            Band(id="normal", label="Normal", min=40.0, max=70.0, units="dB"),
            Band(id="noisy", label="Noisy", min=70.0, max=120.0, units="dB"),
        ),
        links=(),
    )
    volume_layer = Layer(
        id="volume",
        target=PatternTarget("https://videos.example/*"),
        augmenters=(
            AugmenterInstance(
                kind="media-volume-adapter",
                anchor="/html/body",
                position="first_child",
                params={
                    "media-xpath": LiteralBinding("//video"),
                    "volume:quiet": LiteralBinding("0.2"),
                    "volume:normal": LiteralBinding("0.5"),
                    "volume:noisy": LiteralBinding("0.9"),
                },
            ),
            AugmenterInstance(
                kind="scalar-badge",
                anchor="/html/body",
                position="first_child",
                params={"label-prefix": LiteralBinding("Noise: ")},
            ),
        ),
    )
    return MobileAppSpec(
        name="Reactive Video Volume",
        namespace="videos.example",
        filename="reactive-volume",
        context_types={"noise"},
        sensors=(SensorDecl(id="db1", kind="db", context_type="noise"),),
        space=space,
        layers=(volume_layer,),
        rules=(ContextRule(sensor_id="db1", layer_id="volume"),),
    )


def write_corpus(directory: Path, pages: dict[str, tuple[str, str]]) -> None:
    """pages: url -> (relative filename, html text)."""
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for url, (rel, html) in sorted(pages.items()):
        (directory / rel).write_text(html, encoding="utf-8")
        manifest[normalize_url(url)] = rel
    (directory / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def collection_page() -> str:
    items = []
    for name, _, _, desc in PIECES:
        s = slug(name)
        items.append(
            "<li>\n"
            f"<h2>{name}</h2>\n"
            f'<img id="pic-{s}" class="piece" src="https://museum.example/media/{s}.jpg" alt="{name}">\n'
            f'<p id="desc-{s}">{desc}</p>\n'
            "</li>"
        )
    body = "\n".join(items)
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>Hall of Pleistocene Fauna</title>\n</head>\n<body>\n"
        "<h1>Hall of Pleistocene Fauna</h1>\n"
        "<p>Signage copy for the touring exhibition, one entry per piece.</p>\n"
        f'<ul class="pieces">\n{body}\n</ul>\n</body>\n</html>\n'
    )


def gen_museum() -> None:
    base = FIXTURES / "museum"
    spec = museum_spec()
    xml = serialize_spec(spec)
    parse_spec(xml)  # fixture must round-trip before it ships
    base.mkdir(parents=True, exist_ok=True)
    (base / "app.mowa.xml").write_bytes(xml)

    pages: dict[str, tuple[str, str]] = {
        COLLECTION_URL: ("collection.html", collection_page())
    }
    for name, _, _, desc in PIECES:
        pages[wiki_url(name)] = (f"{slug(name)}.html", WIKI_PAGE.format(name=name, desc=desc))
    write_corpus(base / "corpus", pages)

    traces = base / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    in_order = [
        {"t": 1000 * i, "kind": "qr", "payload": f"https://en.qrwp.example/{name}"}
        for i, (name, _, _, _) in enumerate(PIECES, start=1)
    ]
    (traces / "in_order.jsonl").write_text(
        "\n".join(json.dumps(e) for e in in_order) + "\n", encoding="utf-8"
    )
    # scans the second piece first, then recovers and walks 1..3
    order = [PIECES[1], PIECES[0], PIECES[1], PIECES[2]]
    out_of_order = [
        {"t": 1000 * i, "kind": "qr", "payload": f"https://en.qrwp.example/{name}"}
        for i, (name, _, _, _) in enumerate(order, start=1)
    ]
    (traces / "out_of_order.jsonl").write_text(
        "\n".join(json.dumps(e) for e in out_of_order) + "\n", encoding="utf-8"
    )


def gen_db_media() -> None:
    base = FIXTURES / "db_media"
    spec = db_media_spec()
    xml = serialize_spec(spec)
    parse_spec(xml)
    base.mkdir(parents=True, exist_ok=True)
    (base / "app.mowa.xml").write_bytes(xml)
    write_corpus(base / "corpus", {"https://videos.example/clip42": ("clip42.html", VIDEO_PAGE)})
    traces = base / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    events = [
        {"t": 1000, "kind": "nav", "url": "https://videos.example/clip42"},
        {"t": 2000, "kind": "scalar", "sensor": "db1", "value": 30},
        {"t": 3000, "kind": "scalar", "sensor": "db1", "value": 35},
        {"t": 4000, "kind": "scalar", "sensor": "db1", "value": 85},
        {"t": 5000, "kind": "scalar", "sensor": "db1", "value": 88},
    ]
    (traces / "trace.jsonl").write_text(
        "\n".join(json.dumps(e) for e in events) + "\n", encoding="utf-8"
    )


def gen_cohort() -> None:
    base = FIXTURES / "grading"
    base.mkdir(parents=True, exist_ok=True)
    rows = []
    for sid, a, b, r1, c, d, e, r23, sr_printed in COHORT:
        report = GradeReport.from_cells(a, b, c, d, e)
        printed = {
            "a": display_str(report.a),
            "b": display_str(report.b),
            "r1": display_str(report.r1),
            "c": display_str(report.c),
            "d": display_str(report.d),
            "e": display_str(report.e),
            "r23": display_str(report.r23),
            "sr": display_str(report.sr),
        }
        expected = {
            "r1": f"{r1:.2f}",
            "r23": f"{r23:.2f}",
            "sr": f"{sr_printed:.2f}",
        }
        for key, want in expected.items():
            if printed[key] != want:
                raise SystemExit(f"cohort row {sid}: {key} computes to {printed[key]}, table says {want}")
        rows.append(
            {
                "id": sid,
                "cells": {"a": a, "b": b, "c": c, "d": d, "e": e},
                "printed": printed,
            }
        )
    doc = {
        "description": "Demo cohort: rubric cells for 21 graded submissions, with the columns as printed.",
        "hypothesized_median": 0.84,
        "rows": rows,
    }
    (base / "cohort.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def main() -> None:
    gen_museum()
    gen_db_media()
    gen_cohort()
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
