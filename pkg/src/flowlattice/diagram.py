"""Coherence diagrams of lab-framed Path(k) and Cycle(k) DAGs.

One box per route, in the row of its source edge and the column of its sink
edge. For a cycle, 1-leg routes leaving vertex 1 sit in two extra bottom rows
whose right boundary is glued to the left boundary of the top two rows, so
east/west regions in those rows continue across the glue.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .dag import EdgeName, FramedDag, is_lab_framing
from .errors import ContractError
from .routes import RoutePair, anomalous_routes, enumerate_routes, route_pair

RELATIONS = ("N", "S", "E", "W", "NW", "NE", "SW", "SE")

# Conflicting pairs among the eight anomalous routes of Cycle(k1, k2), keyed by
# (leg label, first marker, second marker) of the route pair. Frozen from the
# minimal-face oracle; identical for every Cycle(k1, k2) in the test corpus.
# The region calculus misses the last two pairs.
_ANOMALOUS_CONFLICTS = frozenset(
    frozenset(p)
    for p in [
        ((1, -1, -1), (2, 1, -1)),
        ((1, -1, -1), (2, 1, 1)),
        ((1, 1, -1), (2, -1, -1)),
        ((1, 1, -1), (2, 1, -1)),
        ((1, 1, -1), (2, 1, 1)),
        ((1, 1, 1), (2, -1, -1)),
        ((1, 1, 1), (2, 1, -1)),
        ((1, -1, -1), (1, 1, 1)),
        ((2, -1, -1), (2, 1, 1)),
    ]
)


def _anomalous_role(b: "Box") -> tuple[int, int, int]:
    return (b.pair.leg_label, b.pair.first.marker, b.pair.second.marker)


@dataclass(frozen=True)
class Box:
    route_id: int
    pair: RoutePair
    row: EdgeName
    col: EdgeName
    band: str  # "main" or "bottom"
    exceptional: bool
    anomalous: bool

    @property
    def key(self) -> tuple[EdgeName, EdgeName, int]:
        return (self.row, self.col, self.pair.leg_label)

    def __str__(self) -> str:
        return str(self.pair)


@dataclass(frozen=True)
class Prediction:
    kind: str  # conflict_full_polytope | conflict_quadrilateral | coherent_edge | coherent_nonedge | coherent_full_polytope
    squarette: tuple[int, int, int, int] | None = None

    @property
    def conflict(self) -> bool:
        return self.kind.startswith("conflict")


class CoherenceDiagram:
    def __init__(self, d: FramedDag):
        if d.kind not in ("path", "cycle") or not is_lab_framing(d):
            raise ContractError("coherence diagrams need a lab-framed Path or Cycle")
        self.dag = d
        self.routes = enumerate_routes(d)
        anom = {r.edge_ids for r in anomalous_routes(d)}
        self.is_cycle = d.kind == "cycle"
        boxes = []
        for i, r in enumerate(self.routes):
            p = route_pair(d, r)
            row, col = p.source_name, p.sink_name
            band = "main"
            if self.is_cycle and p.leg_label == 1 and row.base == 1:
                band = "bottom"
            boxes.append(Box(i, p, row, col, band, r.is_exceptional, r.edge_ids in anom))
        self.boxes: tuple[Box, ...] = tuple(boxes)
        self.row_names = tuple(sorted({b.row for b in boxes if b.band == "main"}))
        self.col_names = tuple(sorted({b.col for b in boxes}))
        self.bottom_names = tuple(sorted({b.row for b in boxes if b.band == "bottom"}))
        if self.is_cycle:
            self.bottom_names = tuple(n for n in self.row_names if n.base == 1)
        self._rix = {n: i for i, n in enumerate(self.row_names)}
        self._cix = {n: i for i, n in enumerate(self.col_names)}
        self.width = len(self.col_names)
        self.height = len(self.row_names) + len(self.bottom_names)
        seen = {}
        for b in boxes:
            if (self.rc(b.route_id)) in seen:
                raise ContractError(f"two boxes at one position: {b} and {seen[self.rc(b.route_id)]}")
            seen[self.rc(b.route_id)] = b
        self._at = {self.rc(b.route_id): b.route_id for b in boxes}

    # -- coordinates -----------------------------------------------------

    def rc(self, i: int) -> tuple[int, int]:
        """Grid position (row index, column index); bottom band rows follow the main rows."""
        b = self.boxes[i]
        c = self._cix[b.col]
        if b.band == "bottom":
            return len(self.row_names) + self.bottom_names.index(b.row), c
        return self._rix[b.row], c

    def at(self, r: int, c: int) -> int | None:
        return self._at.get((r, c))

    def box(self, first: str, second: str) -> int:
        """Route id of the box with the given route pair, e.g. box("4-", "5")."""
        a, b = EdgeName.parse(first), EdgeName.parse(second)
        hits = [bx.route_id for bx in self.boxes if (bx.pair.first, bx.pair.second) == (a, b)]
        if len(hits) != 1:
            raise ContractError(f"{len(hits)} boxes with pair ({first},{second})")
        return hits[0]

    def _glued_row(self, i: int) -> tuple[str, int] | None:
        """(row name, position along the glued row) for boxes in the glued rows."""
        if not self.is_cycle:
            return None
        b = self.boxes[i]
        if b.row not in self.bottom_names:
            return None
        c = self._cix[b.col]
        return str(b.row), c if b.band == "bottom" else c + self.width

    # -- regions ---------------------------------------------------------

    @cached_property
    def _cardinal(self) -> list[dict[str, frozenset[int]]]:
        n = len(self.boxes)
        pos = [self.rc(i) for i in range(n)]
        glued = [self._glued_row(i) for i in range(n)]
        out = []
        for i in range(n):
            r, c = pos[i]
            north = frozenset(j for j in range(n) if pos[j][1] == c and pos[j][0] < r)
            south = frozenset(j for j in range(n) if pos[j][1] == c and pos[j][0] > r)
            if glued[i] is not None:
                name, k = glued[i]
                same = [j for j in range(n) if glued[j] is not None and glued[j][0] == name]
                east = frozenset(j for j in same if glued[j][1] > k)
                west = frozenset(j for j in same if glued[j][1] < k)
            else:
                east = frozenset(j for j in range(n) if pos[j][0] == r and pos[j][1] > c)
                west = frozenset(j for j in range(n) if pos[j][0] == r and pos[j][1] < c)
            out.append({"N": north, "S": south, "E": east, "W": west})
        return out

    @cached_property
    def _diagonal(self) -> list[dict[str, dict[int, tuple[int, int]]]]:
        """For each box R, the diagonal regions as {R': (T1, T2)} witness maps."""
        card = self._cardinal
        n = len(self.boxes)
        rules = {
            "NW": (("W", "S"), ("N", "E")),
            "NE": (("E", "S"), ("N", "W")),
            "SW": (("W", "N"), ("S", "E")),
            "SE": (("E", "N"), ("S", "W")),
        }
        out = []
        for i in range(n):
            regs = {}
            for rel, ((a1, b1), (a2, b2)) in rules.items():
                hits = {}
                for j in range(n):
                    t1 = card[i][a1] & card[j][b1]
                    if len(t1) != 1:
                        continue
                    t2 = card[i][a2] & card[j][b2]
                    if len(t2) == 1:
                        hits[j] = (next(iter(t1)), next(iter(t2)))
                regs[rel] = hits
            out.append(regs)
        return out

    def region(self, i: int, rel: str) -> frozenset[int]:
        if rel in ("N", "S", "E", "W"):
            return self._cardinal[i][rel]
        if rel in ("NW", "NE", "SW", "SE"):
            return frozenset(self._diagonal[i][rel])
        raise ValueError(f"unknown relation {rel!r}")

    def relations(self, i: int, j: int) -> set[str]:
        return {rel for rel in RELATIONS if j in self.region(i, rel)}

    def squarette(self, i: int, j: int) -> tuple[int, int, int, int] | None:
        """(R, S, T1, T2) when R = i is northwest of S = j, else None."""
        w = self._diagonal[j]["NW"].get(i)
        if w is None:
            return None
        return (i, j, w[0], w[1])

    # -- coherence predictions -------------------------------------------------

    def predict(self, i: int, j: int) -> Prediction:
        if i == j:
            raise ContractError("predict needs two distinct routes")
        R, S = self.boxes[i], self.boxes[j]
        nw_se = j in self._diagonal[i]["NW"] or j in self._diagonal[i]["SE"]
        either_exc = R.exceptional or S.exceptional
        if R.anomalous and S.anomalous:
            if frozenset((_anomalous_role(R), _anomalous_role(S))) in _ANOMALOUS_CONFLICTS:
                return Prediction("conflict_full_polytope")
            return Prediction("coherent_full_polytope" if either_exc else "coherent_edge")
        if nw_se:
            sq = self.squarette(j, i) or self.squarette(i, j)
            t1, t2 = sq[2], sq[3]
            if self.boxes[t1].exceptional or self.boxes[t2].exceptional:
                return Prediction("conflict_full_polytope", sq)
            return Prediction("conflict_quadrilateral", sq)
        if either_exc:
            return Prediction("coherent_full_polytope")
        if j in self._diagonal[i]["NE"] or j in self._diagonal[i]["SW"]:
            return Prediction("coherent_nonedge")
        return Prediction("coherent_edge")

    # -- pull steps --------------------------------------------------------------

    @cached_property
    def exceptional_ids(self) -> frozenset[int]:
        return frozenset(b.route_id for b in self.boxes if b.exceptional)

    def _require_step_logic(self) -> None:
        if self.is_cycle and self.dag.k == (1, 1):
            raise ContractError("pull-step logic does not apply to Cycle(1,1); the origin alone suffices")

    def is_dkk_pull_step(self, V: Iterable[int], i: int) -> bool:
        """(W ⊆ V or N ⊆ V) and (E ⊆ V or S ⊆ V); exceptional boxes count as pulled."""
        self._require_step_logic()
        Vs = frozenset(V) | self.exceptional_ids
        if i in Vs:
            raise ContractError(f"box {self.boxes[i]} is already pulled")
        c = self._cardinal[i]
        return (c["W"] <= Vs or c["N"] <= Vs) and (c["E"] <= Vs or c["S"] <= Vs)

    def is_redundant_step(self, V: Iterable[int], i: int) -> bool:
        Vs = frozenset(V) | self.exceptional_ids
        return self.region(i, "NE") | self.region(i, "SW") <= Vs

    def is_closed_pull_set(self, V: Iterable[int]) -> bool:
        """Every pulled box satisfies the step condition relative to the whole set."""
        Vs = frozenset(V) | self.exceptional_ids
        for i in Vs - self.exceptional_ids:
            c = self._cardinal[i]
            if not ((c["W"] <= Vs or c["N"] <= Vs) and (c["E"] <= Vs or c["S"] <= Vs)):
                return False
        return True

    def _sort_key(self, i: int) -> tuple[int, int]:
        return self.rc(i)

    def canonical_pull_order(self) -> list[int]:
        """Sweep from the outer corners inward, one layer of valid boxes at a time.

        Each layer is every box that is a valid step against the boxes pulled
        before the layer, listed upper-left to lower-right.
        """
        if self.is_cycle and self.dag.k == (1, 1):
            return []
        V = set(self.exceptional_ids)
        order: list[int] = []
        todo = set(range(len(self.boxes))) - V
        while todo:
            layer = sorted((i for i in todo if self.is_dkk_pull_step(V, i)), key=self._sort_key)
            if not layer:
                raise ContractError("no valid pull step remains")
            order.extend(layer)
            V.update(layer)
            todo.difference_update(layer)
        return order

    def enumerate_pull_orders(self, limit: int = 500) -> Iterator[list[int]]:
        """DKK pull orders, branching over irredundant valid steps.

        Whenever only redundant steps are valid they are all taken at once in
        grid order. A sequence ends when every box is pulled or every remaining
        box is a valid redundant step.
        """
        if self.is_cycle and self.dag.k == (1, 1):
            yield []
            return
        count = 0
        allb = frozenset(range(len(self.boxes)))

        def rec(V: frozenset, seq: list[int]):
            nonlocal count
            todo = allb - V
            valid = [i for i in sorted(todo, key=self._sort_key) if self.is_dkk_pull_step(V, i)]
            irr = [i for i in valid if not self.is_redundant_step(V, i)]
            if irr:
                for i in irr:
                    if count >= limit:
                        return
                    yield from rec(V | {i}, seq + [i])
                return
            if len(valid) == len(todo):
                count += 1
                yield seq
                return
            if not valid:
                raise ContractError("pull order got stuck")
            yield from rec(V | frozenset(valid), seq + valid)

        yield from rec(self.exceptional_ids, [])

    # -- shape -------------------------------------------------------------------

    def bounding_strip(self) -> frozenset[int]:
        d = self.dag
        par_s, par_t = set(), set()
        source_heads = [e.head for e in d.out_edges[d.source]]
        sink_tails = [e.tail for e in d.in_edges[d.sink]]
        for e in d.edges:
            if e.tail == d.source and source_heads.count(e.head) == 2:
                par_s.add(d.edge_names[e.id])
            if e.head == d.sink and sink_tails.count(e.tail) == 2:
                par_t.add(d.edge_names[e.id])
        return frozenset(b.route_id for b in self.boxes if b.row in par_s or b.col in par_t)

    def outer_corners(self) -> frozenset[int]:
        """Top-right and bottom-left boxes of maximal rectangles.

        For a cycle, rectangles across the glue are found on three stacked
        copies of the diagram, each shifted by (main rows, width) from the
        last, keeping rectangles that touch the middle copy.
        """
        h_main = len(self.row_names)
        cells = {self.rc(i): i for i in range(len(self.boxes))}
        if self.is_cycle:
            grid = {}
            for t in (-1, 0, 1):
                for (r, c), i in cells.items():
                    grid[(r + t * h_main, c + t * self.width)] = (i, t)
        else:
            grid = {k: (i, 0) for k, i in cells.items()}
        rects = _maximal_rectangles(set(grid))
        out = set()
        for r1, r2, c1, c2 in rects:
            if not any(grid[(r, c)][1] == 0 for r in range(r1, r2 + 1) for c in range(c1, c2 + 1)):
                continue
            out.add(grid[(r1, c2)][0])
            out.add(grid[(r2, c1)][0])
        return frozenset(out)

    def is_skew_ferrers(self) -> bool:
        """Rows and columns are contiguous and their ends move weakly the same way.

        Checked on the main rows; the glued bottom band is excluded.
        """
        rows = {}
        for i in range(len(self.boxes)):
            r, c = self.rc(i)
            if r < len(self.row_names):
                rows.setdefault(r, []).append(c)
        spans = []
        for r in sorted(rows):
            cs = sorted(rows[r])
            if cs != list(range(cs[0], cs[-1] + 1)):
                return False
            spans.append((cs[0], cs[-1]))
        if any(spans[k][0] > spans[k + 1][0] or spans[k][1] > spans[k + 1][1] for k in range(len(spans) - 1)) and any(
            spans[k][0] < spans[k + 1][0] or spans[k][1] < spans[k + 1][1] for k in range(len(spans) - 1)
        ):
            return False
        return True

    # -- output --------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "diagram.v1",
            "rows": [str(n) for n in self.row_names],
            "bottom_rows": [str(n) for n in self.bottom_names],
            "cols": [str(n) for n in self.col_names],
            "glue": self.is_cycle,
            "boxes": [
                {
                    "route": b.route_id,
                    "pair": [str(b.pair.first), str(b.pair.second)],
                    "row": str(b.row),
                    "col": str(b.col),
                    "band": b.band,
                    "exceptional": b.exceptional,
                    "anomalous": b.anomalous,
                }
                for b in self.boxes
            ],
        }

    def to_ascii(self, marks: dict[int, str] | None = None) -> str:
        """Grid rendering: '●' exceptional, '◆' anomalous, '□' other boxes."""
        marks = marks or {}
        w = max(len(str(n)) for n in self.col_names + self.row_names) + 1
        head = " " * w + "".join(str(n).rjust(w) for n in self.col_names)
        lines = [head]
        names = list(self.row_names) + list(self.bottom_names)
        for r, name in enumerate(names):
            if r == len(self.row_names) and self.bottom_names:
                lines.append(" " * w + "~" * (w * self.width))
            cells = []
            for c in range(self.width):
                i = self.at(r, c)
                if i is None:
                    ch = "·"
                elif i in marks:
                    ch = marks[i]
                else:
                    b = self.boxes[i]
                    ch = "●" if b.exceptional else "◆" if b.anomalous else "□"
                cells.append(ch.rjust(w))
            lines.append(str(name).rjust(w) + "".join(cells))
        return "\n".join(lines)

    def to_tikz(self) -> str:
        names = list(self.row_names) + list(self.bottom_names)
        lines = ["\\begin{tikzpicture}[scale=0.5]"]
        for c, n in enumerate(self.col_names):
            lines.append(f"  \\node at ({c + 0.5},1) {{${_tex(n)}$}};")
        for r, n in enumerate(names):
            lines.append(f"  \\node at (-0.7,{-r - 0.5}) {{${_tex(n)}$}};")
        for i, b in enumerate(self.boxes):
            r, c = self.rc(i)
            lines.append(f"  \\draw ({c},{-r}) rectangle ({c + 1},{-r - 1});")
            if b.exceptional:
                lines.append(f"  \\fill ({c + 0.5},{-r - 0.5}) circle (0.12);")
            elif b.anomalous:
                lines.append(f"  \\node at ({c + 0.5},{-r - 0.5}) {{$\\diamond$}};")
        if self.is_cycle:
            top, bot = 0, len(self.row_names)
            lines.append(f"  \\draw[magenta,very thick] (0,{-top}) -- (0,{-top - 2});")
            lines.append(f"  \\draw[magenta,very thick] ({self.width},{-bot}) -- ({self.width},{-bot - 2});")
        lines.append("\\end{tikzpicture}")
        return "\n".join(lines)


def _tex(n: EdgeName) -> str:
    return f"{n.base}" + {-1: "^-", 0: "", 1: "^+"}[n.marker]


def _maximal_rectangles(cells: set[tuple[int, int]]) -> list[tuple[int, int, int, int]]:
    """All inclusion-maximal axis-parallel rectangles (r1, r2, c1, c2) of filled cells."""
    if not cells:
        return []
    rects = set()
    rows = sorted({r for r, _ in cells})
    for r1 in rows:
        cols_here = sorted(c for r, c in cells if r == r1)
        for c1 in cols_here:
            c2max = c1
            while (r1, c2max + 1) in cells:
                c2max += 1
            for c2 in range(c1, c2max + 1):
                r2 = r1
                while all((r2 + 1, c) in cells for c in range(c1, c2 + 1)):
                    r2 += 1
                rects.add((r1, r2, c1, c2))
    out = []
    for r1, r2, c1, c2 in rects:
        grow = (
            all((r1 - 1, c) in cells for c in range(c1, c2 + 1))
            or all((r2 + 1, c) in cells for c in range(c1, c2 + 1))
            or all((r, c1 - 1) in cells for r in range(r1, r2 + 1))
            or all((r, c2 + 1) in cells for r in range(r1, r2 + 1))
        )
        if not grow:
            out.append((r1, r2, c1, c2))
    return sorted(out)


def build_diagram(d: FramedDag) -> CoherenceDiagram:
    return CoherenceDiagram(d)


def random_pull_order(cd: CoherenceDiagram, rng) -> list[int]:
    """A uniformly chosen valid step at each stage until every box is pulled."""
    if cd.is_cycle and cd.dag.k == (1, 1):
        return []
    V = set(cd.exceptional_ids)
    order = []
    todo = set(range(len(cd.boxes))) - V
    while todo:
        valid = sorted(i for i in todo if cd.is_dkk_pull_step(V, i))
        i = rng.choice(valid)
        order.append(i)
        V.add(i)
        todo.discard(i)
    return order
