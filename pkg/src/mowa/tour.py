"""Tour state machine for mobile hypermedia assistance.

The visiting order comes from the link chain when links exist (the unique
PoI with no inbound link starts it); otherwise from ascending `order`
fields. Sensing the expected PoI advances; sensing anything else flips to
wrong_piece without losing progress; once complete the tour stays complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .appspec.model import DimensionalSpace
from .appspec.xmlio import InvalidSpec

MODES = ("not_started", "on_track", "wrong_piece", "complete")


@dataclass
class TourState:
    ordered_pois: list[str]
    poi_names: dict[str, str]
    poi_urls: dict[str, str]
    expected_index: int = 0
    visited: set[str] = field(default_factory=set)
    mode: str = "not_started"
    last_sensed: str | None = None

    def expected_poi(self) -> str | None:
        if self.expected_index < len(self.ordered_pois):
            return self.ordered_pois[self.expected_index]
        return None


def derive_ordered_pois(space: DimensionalSpace) -> list[str]:
    """Raises InvalidSpec("links.not-a-chain") when links exist but do not
    form one linear chain."""
    if not space.links:
        with_order = [p for p in space.pois if p.order is not None]
        with_order.sort(key=lambda p: p.order)  # type: ignore[arg-type, return-value]
        return [p.id for p in with_order]
    outgoing: dict[str, str] = {}
    incoming: set[str] = set()
    for from_id, to_id in space.links:
        if from_id in outgoing or to_id in incoming:
            raise InvalidSpec("links.not-a-chain: duplicate link endpoint")
        outgoing[from_id] = to_id
        incoming.add(to_id)
    roots = [poi for poi in outgoing if poi not in incoming]
    if len(roots) != 1:
        raise InvalidSpec("links.not-a-chain: need exactly one chain root")
    chain = [roots[0]]
    current = roots[0]
    while current in outgoing:
        current = outgoing[current]
        chain.append(current)
        if len(chain) > len(space.links) + 1:
            raise InvalidSpec("links.not-a-chain: cycle detected")
    if len(chain) != len(space.links) + 1:
        raise InvalidSpec("links.not-a-chain: disconnected links")
    return chain


def new_tour(space: DimensionalSpace) -> TourState:
    return TourState(
        ordered_pois=derive_ordered_pois(space),
        poi_names={p.id: p.name for p in space.pois},
        poi_urls={p.id: p.target_url for p in space.pois},
    )


def visit(tour: TourState, poi_id: str) -> None:
    """Apply one AtPoi observation. Mutates the tour in place."""
    tour.last_sensed = poi_id
    if tour.mode == "complete" or not tour.ordered_pois:
        return
    if poi_id == tour.ordered_pois[tour.expected_index]:
        tour.visited.add(poi_id)
        tour.expected_index += 1
        tour.mode = "complete" if tour.expected_index >= len(tour.ordered_pois) else "on_track"
    else:
        tour.mode = "wrong_piece"
