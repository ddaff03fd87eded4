"""Seeded random generators for property tests.

Plain `random.Random` driven so bulk runs (1000+ cases) stay fast and
reproducible; hypothesis is reserved for the shrinking-friendly edge cases.
"""

from __future__ import annotations

import random

from mowa.appspec.bindings import LiteralBinding, PoiFieldBinding, PoiPropBinding
from mowa.appspec.model import (
    Band,
    AugmenterInstance,
    ConcreteTarget,
    ContextRule,
    DimensionalSpace,
    Layer,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    ExtractSource,
    LiteralSource,
    POI_TARGET_TOKEN,
    SensorDecl,
)
from mowa.htmldom import Comment, Document, Element, Text

# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

TAGS = ["div", "span", "p", "ul", "li", "a", "section", "b"]
ATTR_NAMES = ["id", "class", "href", "data-k"]
ATTR_VALUES = ["x", "y", "z", "one", "two"]
TEXTS = ["alpha", "beta gamma", "x & y", "a < b", 'say "hi"', "déjà vu"]

# direct nestings the parser's autoclose rules would rewrite on reparse
_AUTOCLOSE = {"p": {"p"}, "li": {"li"}, "td": {"td", "th"}, "th": {"td", "th"}, "tr": {"tr", "td", "th"}}


def _child_tag(rng: random.Random, parent_tag: str) -> str:
    choices = [t for t in TAGS if parent_tag not in _AUTOCLOSE.get(t, ())]
    return rng.choice(choices)


def gen_element(rng: random.Random, depth: int, tag: str | None = None) -> Element:
    el = Element(tag if tag is not None else rng.choice(TAGS))
    for name in rng.sample(ATTR_NAMES, rng.randint(0, 2)):
        el.attrs[name] = rng.choice(ATTR_VALUES)
    if depth <= 0:
        return el
    last_was_text = False
    for _ in range(rng.randint(0, 4)):
        roll = rng.random()
        if roll < 0.35 and not last_was_text:
            el.append(Text(rng.choice(TEXTS)))
            last_was_text = True
        elif roll < 0.45:
            el.append(Comment("note " + rng.choice(ATTR_VALUES)))
            last_was_text = False
        else:
            el.append(gen_element(rng, depth - 1, tag=_child_tag(rng, el.tag)))
            last_was_text = False
    return el


def gen_tree(rng: random.Random) -> Document:
    root = Element("html")
    body = gen_element(rng, rng.randint(1, 4))
    root.append(body)
    if rng.random() < 0.5:
        root.append(gen_element(rng, rng.randint(0, 2)))
    return Document(root)


# ---------------------------------------------------------------------------
# xpath expressions, paired with the structure the oracle evaluates
# ---------------------------------------------------------------------------

def _gen_test(rng: random.Random):
    roll = rng.random()
    if roll < 0.6:
        return ("name", rng.choice(TAGS))
    if roll < 0.85:
        return ("wild",)
    return ("text",)


def _gen_predicates(rng: random.Random, test) -> list:
    preds = []
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            preds.append(("pos", rng.randint(1, 3)))
        elif test[0] != "text":
            preds.append(("attr", rng.choice(ATTR_NAMES), rng.choice(ATTR_VALUES)))
    return preds


def _render_steps(steps, attribute) -> str:
    parts = []
    for axis, test, preds in steps:
        parts.append("//" if axis == "descendant" else "/")
        if test[0] == "name":
            parts.append(test[1])
        elif test[0] == "wild":
            parts.append("*")
        else:
            parts.append("text()")
        for pred in preds:
            if pred[0] == "pos":
                parts.append(f"[{pred[1]}]")
            else:
                parts.append(f"[@{pred[1]}='{pred[2]}']")
    if attribute is not None:
        parts.append(f"/@{attribute}")
    return "".join(parts)


def gen_xpath_case(rng: random.Random, doc: Document):
    """Returns (expression string, steps description, attribute or None)."""
    if rng.random() < 0.4:
        # walk a real path so hits are guaranteed often
        steps = []
        node = doc.root
        steps.append(("child", ("name", node.tag), []))
        for _ in range(rng.randint(0, 3)):
            elements = [c for c in node.children if isinstance(c, Element)]
            if not elements:
                break
            node = rng.choice(elements)
            axis = "child" if rng.random() < 0.7 else "descendant"
            steps.append((axis, ("name", node.tag), _gen_predicates(rng, ("name",))))
    else:
        steps = []
        for i in range(rng.randint(1, 3)):
            axis = "descendant" if (i == 0 or rng.random() < 0.5) else "child"
            if i == 0 and rng.random() < 0.3:
                axis = "child"
            test = _gen_test(rng)
            steps.append((axis, test, _gen_predicates(rng, test)))
    attribute = rng.choice(ATTR_NAMES) if rng.random() < 0.2 else None
    return _render_steps(steps, attribute), steps, attribute


# ---------------------------------------------------------------------------
# application specs
# ---------------------------------------------------------------------------

WORDS = ["Museo", "Hall", "Garden", "Campus", "Plaza", "Atrium", "Annex"]
FANCY = ["Café & Friends", "a<b>c", 'the "quoted" one', "Über App", "日本語の名前"]
PROP_NAMES = ["info", "poi-desc", "poi-pic", "blurb"]
ANCHORS = ["/html/body", "//div[@id='mw-content-text']", "//section", "/html"]


def _gen_props(rng: random.Random) -> dict:
    props = {}
    for name in rng.sample(PROP_NAMES, rng.randint(0, 2)):
        if rng.random() < 0.5:
            props[name] = LiteralSource(rng.choice(TEXTS))
        else:
            props[name] = ExtractSource(
                url=f"https://pages.example/{rng.randint(1, 5)}",
                xpath=rng.choice(["//p[@id='x']", "//img[@id='pic']", "/html/body/div"]),
                mode=rng.choice(["text", "attribute:src", "attribute:href"]),
            )
    return props


def _gen_location_space(rng: random.Random) -> DimensionalSpace:
    kind = rng.choice(["map2d", "floorplan"])
    if kind == "floorplan":
        width, height = float(rng.randint(100, 900)), float(rng.randint(100, 900))
        image = "https://maps.example/plan.png" if rng.random() < 0.7 else None
    else:
        width = height = image = None
    n = rng.randint(1, 6)
    orders = list(range(1, n + 1))
    rng.shuffle(orders)
    pois = []
    for i in range(n):
        if kind == "floorplan":
            x = rng.uniform(0, width)
            y = rng.uniform(0, height)
        else:
            x = rng.uniform(-180, 180)
            y = rng.uniform(-85, 85)
        pois.append(
            PointOfInterest(
                id=f"p{i + 1}",
                name=rng.choice(WORDS + FANCY) + f" {i + 1}",
                position=PointInSpace(x, y),
                target_url=f"https://pages.example/{i + 1}",
                order=orders[i] if rng.random() < 0.8 else None,
                code=f"https://codes.example/{i + 1}" if rng.random() < 0.5 else None,
                props=_gen_props(rng),
            )
        )
    links: list[tuple[str, str]] = []
    if n >= 2 and rng.random() < 0.5:
        ids = [p.id for p in pois]
        rng.shuffle(ids)
        k = rng.randint(2, n)
        links = [(ids[i], ids[i + 1]) for i in range(k - 1)]
    return DimensionalSpace(
        kind=kind, image_url=image, width=width, height=height, pois=pois, links=links
    )


def _gen_scalar_space(rng: random.Random) -> DimensionalSpace:
    kind = rng.choice(["scalar_scale", "angle_scale", "time_scale"])
    cuts = sorted(rng.sample(range(0, 200), rng.randint(2, 5)))
    bands = []
    for i in range(len(cuts) - 1):
        lo, hi = float(cuts[i]), float(cuts[i + 1])
        if rng.random() < 0.3 and hi - lo > 2:
            hi -= 1.0  # leave a gap: bands need not cover the axis
        bands.append(Band(id=f"b{i + 1}", label=f"Band {i + 1}", min=lo, max=hi, units="dB"))
    return DimensionalSpace(kind=kind, bands=bands)


def gen_spec(rng: random.Random) -> MobileAppSpec:
    """A structurally valid spec (validate_spec yields no errors)."""
    flavor = rng.choice(["location", "scalar"])
    if flavor == "location":
        context_types = {"location"}
        space = _gen_location_space(rng)
        sensors = []
        if rng.random() < 0.7:
            sensors.append(SensorDecl("s-qr", "qr", "location"))
        if not sensors or rng.random() < 0.4:
            sensors.append(
                SensorDecl("s-gps", "gps", "location", radius_m=float(rng.randint(5, 50)))
            )
        aug_pool = ["poi-info-panel", "hypermedia-nav", "text-injector"]
    else:
        context_types = {"noise"}
        space = _gen_scalar_space(rng)
        sensors = [SensorDecl("s-db", "db", "noise")]
        aug_pool = ["scalar-badge", "media-volume-adapter", "text-injector"]

    layers = []
    for i in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            target = PatternTarget(f"https://pages.example/{'*' if rng.random() < 0.8 else str(i)}")
        elif flavor == "location" and rng.random() < 0.5:
            target = ConcreteTarget(POI_TARGET_TOKEN)
        else:
            target = ConcreteTarget(f"https://pages.example/{i + 1}")
        augmenters = []
        for kind in rng.sample(aug_pool, rng.randint(1, 2)):
            params: dict = {}
            if kind == "poi-info-panel":
                params = {
                    "title": PoiFieldBinding("name"),
                    "description": LiteralBinding(rng.choice(TEXTS)),
                    "image-url": LiteralBinding("https://pages.example/pic.png"),
                }
                prop_names = {n for p in space.pois for n in p.props}
                if prop_names and rng.random() < 0.5:
                    params["description"] = PoiPropBinding(rng.choice(sorted(prop_names)))
            elif kind == "scalar-badge":
                params = {"label-prefix": LiteralBinding("Level: ")}
            elif kind == "media-volume-adapter":
                params = {"media-xpath": LiteralBinding("//video")}
                for band in space.bands:
                    params[f"volume:{band.id}"] = LiteralBinding(f"0.{rng.randint(1, 9)}")
            elif kind == "text-injector":
                params = {"text": LiteralBinding(rng.choice(TEXTS))}
            augmenters.append(
                AugmenterInstance(
                    kind=kind,
                    anchor=rng.choice(ANCHORS),
                    position=rng.choice(
                        ["before", "after", "first_child", "last_child", "replace_children"]
                    ),
                    params=params,
                )
            )
        layers.append(Layer(id=f"layer{i + 1}", target=target, augmenters=augmenters))

    rules = []
    for sensor in sensors:
        for layer in layers:
            if rng.random() < 0.5:
                rules.append(ContextRule(sensor.id, layer.id))

    return MobileAppSpec(
        name=rng.choice(WORDS + FANCY),
        namespace="demo.example",
        filename=f"app-{rng.randint(1, 99)}",
        version=1,
        context_types=context_types,
        sensors=sensors,
        space=space,
        layers=layers,
        rules=rules,
        locale=rng.choice(["en", "es", "fr"]),
    )
