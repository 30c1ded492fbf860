"""Named instances and the default verification corpus."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

from .dag import FramedDag, build_cycle, build_path, claw_dag, disjoint_union, is_lab_framing
from .errors import InvalidParameterError

DEFAULT_DIM_CAP = 7


def dim_cap() -> int:
    """Largest g-polytope dimension for geometric checks (FLOWLATTICE_DIM_CAP)."""
    raw = os.environ.get("FLOWLATTICE_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameterError(f"FLOWLATTICE_DIM_CAP must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class InstanceSpec:
    """A buildable instance.

    ``kind`` is path, cycle, union (of ``parts``), claw (unlabeled; checks
    range over its ample framings) or general (explicit dag.v1 payload).
    """

    kind: str
    k: tuple[int, ...] = ()
    parts: tuple["InstanceSpec", ...] = ()
    parallel_first_label: int = 1
    combinatorial_only: bool = False
    dag: tuple = field(default=(), compare=True)  # (n_inner, ((tail, head, label), ...)) for general

    @property
    def name(self) -> str:
        if self.kind in ("path", "cycle"):
            s = f"{self.kind.capitalize()}({','.join(map(str, self.k))})"
        elif self.kind == "union":
            s = " + ".join(p.name for p in self.parts)
        elif self.kind == "claw":
            s = "claw"
        else:
            s = f"general(n={self.dag[0]})"
        if self.parallel_first_label != 1:
            s += "[alt]"
        return s

    def build(self) -> FramedDag:
        """The framed DAG. For the claw this is its first ample framing."""
        if self.kind == "path":
            return build_path(self.k, parallel_first_label=self.parallel_first_label)
        if self.kind == "cycle":
            return build_cycle(self.k, parallel_first_label=self.parallel_first_label)
        if self.kind == "union":
            if len(self.parts) < 2:
                raise InvalidParameterError("a union needs at least two parts")
            d = self.parts[0].build()
            for p in self.parts[1:]:
                d = disjoint_union(d, p.build())
            return d
        if self.kind == "claw":
            from .dag import enumerate_ample_framings

            return next(iter(enumerate_ample_framings(claw_dag())))
        if self.kind == "general":
            n, triples = self.dag
            return FramedDag.general(n, [tuple(t) for t in triples])
        raise InvalidParameterError(f"unknown instance kind {self.kind!r}")

    @cached_property
    def dim(self) -> int:
        return self.build().n_inner

    @property
    def is_lab(self) -> bool:
        return self.kind in ("path", "cycle") and is_lab_framing(self.build())

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.k:
            out["k"] = list(self.k)
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        if self.parallel_first_label != 1:
            out["parallel_first_label"] = self.parallel_first_label
        if self.combinatorial_only:
            out["combinatorial_only"] = True
        if self.dag:
            out["dag"] = {"n_inner": self.dag[0], "edges": [list(t) for t in self.dag[1]]}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "InstanceSpec":
        dag = ()
        if "dag" in data:
            dag = (data["dag"]["n_inner"], tuple(tuple(t) for t in data["dag"]["edges"]))
        return cls(
            kind=data["kind"],
            k=tuple(data.get("k", ())),
            parts=tuple(cls.from_json(p) for p in data.get("parts", ())),
            parallel_first_label=data.get("parallel_first_label", 1),
            combinatorial_only=data.get("combinatorial_only", False),
            dag=dag,
        )


def path(*k: int, **kw) -> InstanceSpec:
    return InstanceSpec("path", tuple(k), **kw)


def cycle(*k: int, **kw) -> InstanceSpec:
    return InstanceSpec("cycle", tuple(k), **kw)


def general(d: FramedDag) -> InstanceSpec:
    return InstanceSpec("general", dag=(d.n_inner, tuple((e.tail, e.head, e.label) for e in d.edges)))


def parse_instance(text: str) -> InstanceSpec:
    """Parse ``path:3,4,2``, ``cycle:3,2``, ``claw`` or ``path:1+cycle:1,1``."""
    text = text.strip()
    if "+" in text:
        return InstanceSpec("union", parts=tuple(parse_instance(t) for t in text.split("+")))
    if text == "claw":
        return InstanceSpec("claw")
    kind, _, rest = text.partition(":")
    if kind not in ("path", "cycle") or not rest:
        raise InvalidParameterError(f"cannot parse instance {text!r}")
    try:
        k = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise InvalidParameterError(f"cannot parse instance {text!r}") from None
    return InstanceSpec(kind, k)


DEFAULT_CORPUS: tuple[InstanceSpec, ...] = (
    path(1),
    path(2),
    path(4),
    path(1, 1),
    path(2, 2),
    path(3, 4, 2, combinatorial_only=True),
    cycle(1, 1),
    cycle(2, 2),
    cycle(3, 2),
    InstanceSpec("union", parts=(path(1), cycle(1, 1))),
    InstanceSpec("claw"),
)


def load_corpus(name: str) -> tuple[InstanceSpec, ...]:
    if name == "default":
        return DEFAULT_CORPUS
    if name == "empty":
        return ()
    return tuple(parse_instance(t) for t in name.split(";") if t.strip())
