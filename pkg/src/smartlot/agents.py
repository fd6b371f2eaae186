"""Three-tier agent hierarchy: node agents detect, follower agents track a
car through one trip, the decision agent answers "which spot should this
user take" from the specification store and a truth tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .formulas import Atom, Formula, eventually_atoms, pretty
from .knowledge import (
    EventRecord,
    KnowledgeError,
    SpecStore,
    Trip,
    resolve_contradiction,
    spec_formula,
)
from .tableaux import (
    OPEN,
    UNSATISFIABLE,
    TruthTree,
    build_tree,
    is_satisfiable,
    open_consequences,
)
from .worldgraph import GraphError, WorldGraph

ENTER = "enter"
MOVE = "move"
EXIT = "exit"

PREFERRED = "Preferred"
FALLBACK_CANDIDATE = "FallbackCandidate"
NEAREST_FREE = "NearestFree"
NO_SUGGESTION = "NoSuggestion"


@dataclass(frozen=True)
class DecisionConfig:
    fallback_nearest: bool = False
    never_gate_threshold: int = 3
    rng_seed: int = 0


# -- messages ---------------------------------------------------------------


@dataclass(frozen=True)
class Detection:  # A1 -> A2/A3
    user: str
    node: str
    timestamp: datetime


@dataclass(frozen=True)
class FollowUpdate:  # A1 -> A2
    user: str
    node: str


@dataclass(frozen=True)
class TripReport:  # A2 -> A3
    trip: Trip


@dataclass(frozen=True)
class DecisionRequest:  # A2 -> A3
    user: str
    gate: str


@dataclass(frozen=True)
class PreferenceDecision:  # A3 -> user
    user: str
    gate: str
    suggestion: str | None
    candidates: tuple[tuple[str, int], ...]  # (spot, r), ranked
    rationale: str
    tree: TruthTree


# -- A1: node agents --------------------------------------------------------


def a1_detect(
    graph: WorldGraph, node: str, user: str, timestamp: datetime
) -> tuple[EventRecord, str]:
    """Event record plus the graph transformation the detection implies:
    a gateway detection is an entry for an absent car and an exit for a
    present one; anything else is a move."""
    label = graph.label(node)
    event = EventRecord(user, node, timestamp)
    present = graph.car_position(user) is not None
    if label == "G":
        return event, EXIT if present else ENTER
    if not present:
        raise GraphError(f"car {user} detected at {node} before entering")
    return event, MOVE


# -- A2: follower agents ----------------------------------------------------


@dataclass
class FollowerState:
    user: str
    entry_gate: str
    events: list[EventRecord] = field(default_factory=list)
    parked_spot: str | None = None
    defunct: bool = False


class FollowerError(RuntimeError):
    pass


def a2_spawn(user: str, gate: str) -> FollowerState:
    return FollowerState(user, gate)


def a2_update(state: FollowerState, event: EventRecord, node_label: str) -> FollowerState:
    if state.defunct:
        raise FollowerError(f"follower for {state.user} already finalized")
    state.events.append(event)
    if node_label == "P":
        state.parked_spot = event.node
    return state


def a2_finalize(state: FollowerState, exit_gate: str) -> TripReport:
    if state.defunct:
        raise FollowerError(f"follower for {state.user} already finalized")
    state.defunct = True
    return TripReport(
        Trip(
            user=state.user,
            entry_gate=state.entry_gate,
            parked_spot=state.parked_spot,
            exit_gate=exit_gate,
            events=tuple(state.events),
        )
    )


# -- A3: decision agent -----------------------------------------------------


def a3_decide(
    store: SpecStore,
    graph: WorldGraph,
    user: str,
    gate: str,
    config: DecisionConfig = DecisionConfig(),
) -> tuple[PreferenceDecision, list[Formula]]:
    """Preference decision for a user arriving at a gate.  Returns the
    decision plus the formulas removed by contradiction resolution (empty
    when the stored specification was consistent with the observation)."""
    if graph.label(gate) != "G":
        raise GraphError(f"not a gateway: {gate}")
    observation = Atom(gate)

    phi = spec_formula(store, user, observation)
    removed: list[Formula] = []
    if is_satisfiable(phi) == UNSATISFIABLE:
        removed = resolve_contradiction(store, user, observation)
        phi = spec_formula(store, user, observation)

    tree = build_tree(phi)
    candidate_atoms: set[str] = set()
    for _, introduced in open_consequences(tree):
        candidate_atoms |= introduced
    spots = {a for a in candidate_atoms if graph.has_node(a) and graph.label(a) == "P"}

    ranked = sorted(
        ((spot, _spot_weight(store, user, spot)) for spot in spots),
        key=lambda item: (-item[1], item[0]),
    )

    suggestion = None
    rationale = NO_SUGGESTION
    for i, (spot, _) in enumerate(ranked):
        if graph.is_free(spot):
            suggestion = spot
            rationale = PREFERRED if i == 0 else FALLBACK_CANDIDATE
            break
    if suggestion is None and config.fallback_nearest:
        nearest = graph.nearest_free_spot(gate)
        if nearest is not None:
            suggestion = nearest
            rationale = NEAREST_FREE

    decision = PreferenceDecision(
        user=user,
        gate=gate,
        suggestion=suggestion,
        candidates=tuple(ranked),
        rationale=rationale,
        tree=tree,
    )
    return decision, removed


def _spot_weight(store: SpecStore, user: str, spot: str) -> int:
    weights = [
        t.r for t in store.triples(user) if spot in eventually_atoms(t.formula)
    ]
    return max(weights, default=0)
