"""Labeled truth-tree prover for the F/G temporal fragment.

Formulas are decomposed into a tree of branches.  Literals carry world
labels: a named label (written ``1.[a]``) marks the specific world introduced
by an F operator, a universal label (written ``1.[x]``) stands for the
current world and every later one, as introduced by G.  A branch closes when
it holds a literal and its negation under unifiable labels.

Because the intended models are linear (a single time line with an
eventually constant tail), label unification alone is not a complete
satisfiability test: two universally labeled literals in sibling scopes both
reach the tail, and disjunctions under G may pick different disjuncts at
different worlds.  Branches that survive unification therefore go through a
realizability check that searches for an ordering of the introduced worlds,
plus a constant tail state, satisfying every recorded constraint.  A branch
with no such arrangement is closed as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formulas import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Not,
    Or,
    nnf,
    pretty,
)

SATISFIABLE = "Satisfiable"
UNSATISFIABLE = "Unsatisfiable"
VALID = "Valid"
NOT_VALID = "NotValid"

OPEN = "Open"
CLOSED = "Closed"


@dataclass(frozen=True)
class WorldLabel:
    """Position annotation for a literal: a chain of named worlds, optionally
    ending in a universal ("this world and all later ones") step."""

    prefix: tuple[str, ...] = ()
    universal: bool = False

    def render(self) -> str:
        parts = [f"{i + 1}.[{name}]" for i, name in enumerate(self.prefix)]
        if self.universal:
            parts.append(f"{len(self.prefix) + 1}.[x]")
        return ".".join(parts)

    def is_root(self) -> bool:
        return not self.prefix and not self.universal

    def unifies(self, other: "WorldLabel") -> bool:
        if self.universal and other.universal:
            # both hold at the constant tail of any linear model
            return True
        if self.universal:
            return other.prefix[: len(self.prefix)] == self.prefix
        if other.universal:
            return self.prefix[: len(other.prefix)] == other.prefix
        return self.prefix == other.prefix


Literal = tuple[str, str, WorldLabel]  # sign "+"/"-", atom, label


@dataclass
class TreeNode:
    formula: Formula
    label: WorldLabel
    children: list["TreeNode"] = field(default_factory=list)
    marker: str | None = None  # "x" / "o" on branch leaves

    def text(self) -> str:
        rendered = self.label.render()
        body = pretty(self.formula)
        return f"{rendered}: {body}" if rendered else body


@dataclass
class Branch:
    index: int  # 1-based, depth-first order
    literals: list[Literal]
    status: str  # OPEN / CLOSED
    leaf: TreeNode


@dataclass
class TruthTree:
    root_formula: Formula
    root: TreeNode
    branches: list[Branch]

    @property
    def closed(self) -> bool:
        return all(b.status == CLOSED for b in self.branches)

    @property
    def open(self) -> bool:
        return not self.closed


def _is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.operand, Atom))


def _literal(f: Formula, label: WorldLabel) -> Literal:
    if isinstance(f, Atom):
        return ("+", f.name, label)
    return ("-", f.operand.name, label)


class _FreshNames:
    """Deterministic a, b, c, ... generator; skips x, reserved for universals."""

    def __init__(self):
        self.n = 0

    def next(self) -> str:
        letters = "abcdefghijklmnopqrstuvwyz"  # no x
        n = self.n
        self.n += 1
        name = letters[n % len(letters)]
        if n >= len(letters):
            name += str(n // len(letters))
        return name


class _Builder:
    def __init__(self, f: Formula):
        self.root_formula = f
        self.fresh = _FreshNames()
        self.branches: list[Branch] = []
        self.root = TreeNode(f, WorldLabel())

    def build(self) -> TruthTree:
        start = nnf(self.root_formula)
        self._expand([(start, WorldLabel())], [], [], self.root, first=True)
        return TruthTree(self.root_formula, self.root, self.branches)

    def _expand(
        self,
        stack: list[tuple[Formula, WorldLabel]],
        literals: list[Literal],
        commitments: list[tuple[Formula, tuple[str, ...]]],
        attach: TreeNode,
        first: bool = False,
    ) -> None:
        while stack:
            f, label = stack.pop()
            if _is_literal(f):
                lit = _literal(f, label)
                literals = literals + [lit]
                # the root node already displays a bare literal formula
                if not (first and f == self.root_formula and label.is_root()):
                    node = TreeNode(f, label)
                    attach.children.append(node)
                    attach = node
                first = False
                if self._closes(lit, literals[:-1]):
                    self._finish(literals, attach, CLOSED)
                    return
                continue
            first = False
            if isinstance(f, And):
                stack.append((f.right, label))
                stack.append((f.left, label))
                continue
            if isinstance(f, Always):
                stack.append((f.operand, WorldLabel(label.prefix, True)))
                continue
            if isinstance(f, Or):
                if label.universal:
                    commitments = commitments + [(f, label.prefix)]
                    continue
                self._expand(stack + [(f.left, label)], list(literals), list(commitments), attach)
                self._expand(stack + [(f.right, label)], list(literals), list(commitments), attach)
                return
            if isinstance(f, Eventually):
                if label.universal:
                    commitments = commitments + [(f, label.prefix)]
                    continue
                world = label.prefix + (self.fresh.next(),)
                stack.append((f.operand, WorldLabel(world, False)))
                continue
            raise TypeError(f"unexpected formula in nnf: {f!r}")
        status = OPEN if _realizable(literals, commitments) else CLOSED
        self._finish(literals, attach, status)

    def _closes(self, lit: Literal, previous: list[Literal]) -> bool:
        sign, atom, label = lit
        return any(
            s != sign and a == atom and l.unifies(label) for s, a, l in previous
        )

    def _finish(self, literals: list[Literal], leaf: TreeNode, status: str) -> None:
        leaf.marker = "x" if status == CLOSED else "o"
        self.branches.append(Branch(len(self.branches) + 1, literals, status, leaf))


def build_tree(f: Formula) -> TruthTree:
    return _Builder(f).build()


def is_satisfiable(f: Formula) -> str:
    return SATISFIABLE if build_tree(f).open else UNSATISFIABLE


def is_valid(f: Formula) -> str:
    return VALID if build_tree(Not(f)).closed else NOT_VALID


def open_consequences(tree: TruthTree) -> list[tuple[int, set[str]]]:
    """Per open branch: positive atoms introduced under named (F-generated)
    labels.  These are the candidate preference targets."""
    out = []
    for b in tree.branches:
        if b.status != OPEN:
            continue
        introduced = {
            atom for sign, atom, label in b.literals if sign == "+" and label.prefix
        }
        out.append((b.index, introduced))
    return out


# ---------------------------------------------------------------------------
# Linear realizability
#
# A surviving branch supplies exact literals (at a specific named world),
# universal literals (at a world and all later ones), and deferred
# commitments: formulas under a G whose decomposition depends on the world
# (disjunctions and nested F).  The branch is realizable when some linear
# arrangement of its worlds, padded with one helper position per F occurring
# inside commitments and ending in a constant tail state, admits valuations
# meeting every constraint.

_TAIL = ("<tail>",)


def _realizable(
    literals: list[Literal], commitments: list[tuple[Formula, tuple[str, ...]]]
) -> bool:
    worlds: set[tuple[str, ...]] = {()}
    for _, _, label in literals:
        for i in range(len(label.prefix) + 1):
            worlds.add(label.prefix[:i])
    for _, base in commitments:
        for i in range(len(base) + 1):
            worlds.add(base[:i])

    names: set[str] = set(a for _, a, _ in literals)
    for f, _ in commitments:
        names |= _formula_atoms(f)
    atom_list = sorted(names)

    helpers = sum(_count_f(f) for f, _ in commitments)
    named = sorted(w for w in worlds if w)

    for order in _linear_extensions(named):
        positions: list[tuple[str, ...]] = [()] + list(order)
        positions += [("<helper>", str(i)) for i in range(helpers)]
        positions.append(_TAIL)
        if _check_order(positions, literals, commitments, atom_list):
            return True
    return False


def _formula_atoms(f: Formula) -> set[str]:
    from .formulas import atoms as _atoms

    return _atoms(f)


def _count_f(f: Formula) -> int:
    from .formulas import count_eventually

    return count_eventually(f)


def _linear_extensions(worlds: list[tuple[str, ...]]):
    """All orderings of the named worlds consistent with prefix nesting."""
    if not worlds:
        yield ()
        return
    remaining = list(worlds)

    def rec(placed: tuple[tuple[str, ...], ...], left: list[tuple[str, ...]]):
        if not left:
            yield placed
            return
        for w in left:
            parent = w[:-1]
            if parent == () or parent in placed:
                rest = [v for v in left if v != w]
                yield from rec(placed + (w,), rest)

    yield from rec((), remaining)


def _check_order(
    positions: list[tuple[str, ...]],
    literals: list[Literal],
    commitments: list[tuple[Formula, tuple[str, ...]]],
    atom_list: list[str],
) -> bool:
    idx = {w: i for i, w in enumerate(positions)}
    n = len(positions)
    tail_i = n - 1

    def base_index(prefix: tuple[str, ...]) -> int:
        return idx[prefix] if prefix else 0

    # forced[i]: atom -> bool
    forced: list[dict[str, bool]] = [dict() for _ in range(n)]
    for sign, atom, label in literals:
        value = sign == "+"
        if label.universal:
            start = base_index(label.prefix)
            span = range(start, n)
        else:
            span = [idx[label.prefix]]
        for i in span:
            if forced[i].get(atom, value) != value:
                return False
            forced[i][atom] = value

    # duties[i]: formulas that must hold at position i
    duties: list[list[Formula]] = [[] for _ in range(n)]
    for f, base in commitments:
        for i in range(base_index(base), n):
            duties[i].append(f)

    def candidate_vals(i: int):
        free = [a for a in atom_list if a not in forced[i]]
        fixed = dict(forced[i])
        for bits in itertools.product((False, True), repeat=len(free)):
            v = dict(fixed)
            v.update(zip(free, bits))
            yield v

    # choose valuations back to front so temporal duties can look ahead
    chosen: list[dict[str, bool] | None] = [None] * n

    def holds(f: Formula, i: int) -> bool:
        if isinstance(f, Atom):
            return chosen[i][f.name]
        if isinstance(f, Not):
            return not holds(f.operand, i)
        if isinstance(f, And):
            return holds(f.left, i) and holds(f.right, i)
        if isinstance(f, Or):
            return holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Eventually):
            return any(holds(f.operand, j) for j in range(i, n))
        if isinstance(f, Always):
            return all(holds(f.operand, j) for j in range(i, n))
        raise TypeError(f"unexpected formula in nnf: {f!r}")

    def assign(i: int) -> bool:
        if i < 0:
            return True
        for v in candidate_vals(i):
            chosen[i] = v
            if all(holds(f, i) for f in duties[i]) and assign(i - 1):
                return True
        chosen[i] = None
        return False

    # the tail is constant: at tail_i there are no later positions, so
    # F/G duties reduce to evaluation at the tail itself, which `holds`
    # already does when i == tail_i.
    return assign(tail_i)


# ---------------------------------------------------------------------------
# Export


def export_tree(tree: TruthTree, format: str = "ascii") -> str:
    if format == "ascii":
        return _export_ascii(tree)
    if format == "dot":
        return _export_dot(tree)
    raise ValueError(f"unknown export format: {format!r}")


def _export_ascii(tree: TruthTree) -> str:
    lines: list[str] = []

    def walk(node: TreeNode, depth: int):
        lines.append("  " * depth + node.text())
        if node.marker is not None:
            lines.append("  " * (depth + 1) + node.marker)
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"


def _export_dot(tree: TruthTree) -> str:
    lines = ["digraph truthtree {", "  node [shape=plaintext];"]
    counter = itertools.count()
    edges: list[str] = []

    def walk(node: TreeNode) -> int:
        nid = next(counter)
        attrs = [f'label="{node.text()}"']
        if node.marker == "x":
            attrs = [f'label="{node.text()}"', "shape=box", "peripheries=2"]
        elif node.marker == "o":
            attrs = [f'label="{node.text()}"', "shape=ellipse"]
        lines.append(f"  n{nid} [{', '.join(attrs)}];")
        for child in node.children:
            cid = walk(child)
            edges.append(f"  n{nid} -> n{cid};")
        return nid

    walk(tree.root)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
