"""A small dependency graph of certificate steps.

Each node computes a NodeResult from the results of its dependencies.  A
node runs only when every dependency passed; otherwise (or when disabled)
it reports "unverified-dependency" and names the earliest broken ancestor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .certificates import FAIL, PASS, UNVERIFIED, CertificateFailed

DISABLED_NOTE = "disabled on request"


@dataclass
class NodeResult:
    name: str
    status: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    note: str = ""
    broken_ancestor: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class Node:
    name: str
    deps: tuple
    compute: Callable    # compute(inputs: dict[name -> NodeResult]) -> (checks, values)
    description: str = ""


class CycleError(ValueError):
    pass


class CertificateDAG:
    def __init__(self):
        self.nodes: dict[str, Node] = {}

    def add(self, name, deps, compute, description="") -> None:
        if name in self.nodes:
            raise ValueError(f"duplicate node {name!r}")
        self.nodes[name] = Node(name, tuple(deps), compute, description)

    def order(self) -> list:
        """Topological order; ties broken by insertion order (so runs are deterministic)."""
        for n in self.nodes.values():
            for d in n.deps:
                if d not in self.nodes:
                    raise KeyError(f"{n.name} depends on unknown node {d!r}")
        done, out, active = set(), [], set()

        def visit(name):
            if name in done:
                return
            if name in active:
                raise CycleError(f"cycle through {name!r}")
            active.add(name)
            for d in self.nodes[name].deps:
                visit(d)
            active.discard(name)
            done.add(name)
            out.append(name)

        for name in self.nodes:
            visit(name)
        return out

    def descendants(self, name) -> set:
        out, frontier = set(), [name]
        while frontier:
            cur = frontier.pop()
            for n in self.nodes.values():
                if cur in n.deps and n.name not in out:
                    out.add(n.name)
                    frontier.append(n.name)
        return out

    def run(self, disable=(), only=None) -> dict:
        """Evaluate the graph.  ``only`` restricts to the given nodes and their ancestors."""
        disable = set(disable)
        unknown = disable - set(self.nodes)
        if unknown:
            raise KeyError(f"unknown node(s): {', '.join(sorted(unknown))}")
        wanted = None
        if only is not None:
            wanted = set()
            stack = list(only)
            while stack:
                cur = stack.pop()
                if cur not in wanted:
                    wanted.add(cur)
                    stack.extend(self.nodes[cur].deps)
        results: dict[str, NodeResult] = {}
        for name in self.order():
            if wanted is not None and name not in wanted:
                continue
            node = self.nodes[name]
            if name in disable:
                results[name] = NodeResult(name, UNVERIFIED, note=DISABLED_NOTE, broken_ancestor=name)
                continue
            bad = [d for d in node.deps if not results[d].passed]
            if bad:
                first = results[bad[0]]
                root = first.broken_ancestor or first.name
                results[name] = NodeResult(name, UNVERIFIED, note=f"depends on {bad[0]}",
                                           broken_ancestor=root)
                continue
            results[name] = _evaluate(node, {d: results[d] for d in node.deps})
        return results


def _evaluate(node: Node, inputs: dict) -> NodeResult:
    try:
        checks, values = node.compute(inputs)
    except CertificateFailed as exc:
        cert = exc.certificate
        checks = list(cert.checks) if cert is not None else []
        return NodeResult(node.name, FAIL, checks, {}, note=str(exc))
    for c in checks:
        if c.status not in (PASS, FAIL):
            c.decide()
    status = PASS if all(c.passed for c in checks) else FAIL
    return NodeResult(node.name, status, list(checks), dict(values))
