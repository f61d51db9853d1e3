"""Bounded emptiness checks, periodic-point search and stabilizers.

Every query compiles to the same finite problem: one variable per cell of a
domain, values are symbol indices, and each placement of a forbidden pattern
is a nogood (a conjunction of cell=value that must not hold in full).  The
backtracker uses forward checking on nogoods, picks the cell with the
smallest live domain (ties to the lowest canonical cell index), and tries
values in alphabet order, so answers and witnesses are reproducible.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass

from .errors import BudgetExceeded, GroupMismatch, RadiusTooSmall
from .groups import FREE_ABELIAN, GroupElement
from .lattice import Lattice, lattices_up_to
from .sft import Configuration, Domain, Sft

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7

WITNESS = "witness"
EMPTY = "empty"
INCONCLUSIVE = "inconclusive"


def compile_nogoods(x: Sft, domain: Domain) -> list[tuple[tuple[int, int], ...]]:
    """Deduplicated nogoods ((cell, symbol), ...) for every pattern placement.

    On a torus two support cells may land on the same residue; the placement
    is dropped when they demand different symbols and merged otherwise.
    """
    if x.group != domain.group:
        raise GroupMismatch(f"SFT over {x.group}, domain over {domain.group}")
    seen = set()
    out = []
    for support, table in x.by_support.values():
        fits = domain.fits(support)
        for syms in table:
            for _, cells in fits:
                merged: dict[int, int] = {}
                ok = True
                for c, s in zip(cells, syms):
                    if merged.setdefault(c, s) != s:
                        ok = False
                        break
                if not ok:
                    continue
                ng = tuple(sorted(merged.items()))
                if ng not in seen:
                    seen.add(ng)
                    out.append(ng)
    return out


class Search:
    """Forward-checking backtracker over one compiled problem.

    Owns all mutable state; build one instance per query.
    """

    def __init__(self, n_cells: int, n_symbols: int, nogoods, budget: int = DEFAULT_BUDGET):
        self.n_cells = n_cells
        self.n_symbols = n_symbols
        self.budget = budget
        self.nodes = 0
        full = (1 << n_symbols) - 1
        self.domains = [full] * n_cells
        self.assigned = [-1] * n_cells
        self.trail: list[tuple[int, int]] = []
        self.ng_cells: list[tuple[int, ...]] = []
        self.ng_vals: list[tuple[int, ...]] = []
        self.watch: list[list[int]] = [[] for _ in range(n_cells * n_symbols)]
        self.infeasible = False
        for ng in nogoods:
            if len(ng) == 1:
                (c, s), = ng
                self.domains[c] &= ~(1 << s)
                continue
            nid = len(self.ng_cells)
            self.ng_cells.append(tuple(c for c, _ in ng))
            self.ng_vals.append(tuple(s for _, s in ng))
            for c, s in ng:
                self.watch[c * n_symbols + s].append(nid)
        if any(d == 0 for d in self.domains):
            self.infeasible = True

    @classmethod
    def for_domain(cls, x: Sft, domain: Domain, budget: int = DEFAULT_BUDGET) -> Search:
        return cls(len(domain), len(x.alphabet), compile_nogoods(x, domain), budget)

    def _assign(self, cell: int, v: int) -> bool:
        domains, assigned, trail = self.domains, self.assigned, self.trail
        trail.append((cell, domains[cell]))
        domains[cell] = 1 << v
        assigned[cell] = v
        ng_cells, ng_vals = self.ng_cells, self.ng_vals
        for nid in self.watch[cell * self.n_symbols + v]:
            last_c = -1
            last_v = 0
            live = 0
            for c2, v2 in zip(ng_cells[nid], ng_vals[nid]):
                if c2 == cell:
                    continue
                a = assigned[c2]
                if a >= 0:
                    if a != v2:
                        break
                elif not (domains[c2] >> v2) & 1:
                    break
                else:
                    live += 1
                    if live > 1:
                        break
                    last_c, last_v = c2, v2
            else:
                if live == 0:
                    return False
                trail.append((last_c, domains[last_c]))
                domains[last_c] &= ~(1 << last_v)
                if not domains[last_c]:
                    return False
        return True

    def _undo(self, mark: int):
        domains, trail = self.domains, self.trail
        while len(trail) > mark:
            c, d = trail.pop()
            domains[c] = d

    def _pick(self) -> int:
        best, best_size = -1, 1 << 30
        assigned, domains = self.assigned, self.domains
        for c in range(self.n_cells):
            if assigned[c] < 0:
                size = domains[c].bit_count()
                if size < best_size:
                    best, best_size = c, size
                    if size <= 1:
                        break
        return best

    def solutions(self) -> Iterator[tuple[int, ...]]:
        """All solutions in search order; raises BudgetExceeded at the node limit."""
        if self.infeasible:
            return
        yield from self._walk()

    def _walk(self):
        cell = self._pick()
        if cell < 0:
            yield tuple(self.assigned)
            return
        dom = self.domains[cell]
        v = 0
        while dom:
            if dom & 1:
                self.nodes += 1
                if self.nodes > self.budget:
                    raise BudgetExceeded(f"node budget {self.budget} exhausted")
                mark = len(self.trail)
                if self._assign(cell, v):
                    yield from self._walk()
                self._undo(mark)
                self.assigned[cell] = -1
            dom >>= 1
            v += 1

    def first(self) -> tuple[int, ...] | None:
        return next(self.solutions(), None)


@dataclass(frozen=True)
class EmptinessVerdict:
    kind: str
    radius: int
    witness: Configuration | None = None
    nodes: int = 0

    @property
    def is_witness(self) -> bool:
        return self.kind == WITNESS

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY


def check_ball_emptiness(x: Sft, r: int, budget: int = DEFAULT_BUDGET) -> EmptinessVerdict:
    """Search for a locally admissible coloring of ball(G, r)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    need = x.support_radius()
    if r < need:
        raise RadiusTooSmall(f"radius {r} is below the pattern support radius {need}")
    domain = Domain.ball(x.group, r)
    return _verdict(x, domain, r, budget)


def check_domain(x: Sft, domain: Domain, budget: int = DEFAULT_BUDGET) -> EmptinessVerdict:
    """Same as check_ball_emptiness on an arbitrary domain (radius reported as -1 unless a ball)."""
    return _verdict(x, domain, domain.radius if domain.radius is not None else -1, budget)


def _verdict(x: Sft, domain: Domain, r: int, budget: int) -> EmptinessVerdict:
    search = Search.for_domain(x, domain, budget)
    try:
        sol = search.first()
    except BudgetExceeded:
        log.info("ball search inconclusive after %d nodes", search.nodes)
        return EmptinessVerdict(INCONCLUSIVE, r, None, search.nodes)
    if sol is None:
        return EmptinessVerdict(EMPTY, r, None, search.nodes)
    return EmptinessVerdict(WITNESS, r, Configuration(domain, sol), search.nodes)


def _torus(x: Sft, lattice: Lattice) -> Domain:
    if x.group.family != FREE_ABELIAN:
        raise GroupMismatch("periodic search needs a free abelian group")
    return Domain.torus(x.group, lattice)


def find_periodic(x: Sft, lattice: Lattice, budget: int = DEFAULT_BUDGET) -> Configuration | None:
    """An admissible coloring of Z^n / lattice, or None if there is none.

    Raises BudgetExceeded rather than answering when the search is cut short.
    """
    domain = _torus(x, lattice)
    sol = Search.for_domain(x, domain, budget).first()
    return None if sol is None else Configuration(domain, sol)


def iter_admissible(x: Sft, domain: Domain, budget: int = DEFAULT_BUDGET) -> Iterator[Configuration]:
    for sol in Search.for_domain(x, domain, budget).solutions():
        yield Configuration(domain, sol)


def count_admissible(x: Sft, domain: Domain, budget: int = DEFAULT_BUDGET) -> int:
    return sum(1 for _ in Search.for_domain(x, domain, budget).solutions())


def stabilizer(c: Configuration) -> Lattice:
    """{g in Z^n : g.c = c} for a torus configuration, in Hermite normal form."""
    dom = c.domain
    if not dom.is_torus:
        raise ValueError("stabilizers are computed for torus configurations")
    lat = dom.lattice
    vals = c.values
    periods = []
    for g in dom.cells:
        # (g.c)(h) = c(h - g); compare against c cellwise
        if all(vals[dom.position(GroupElement(dom.group, tuple(a - b for a, b in zip(h.coords, g.coords))))] == v
               for h, v in zip(dom.cells, vals)):
            periods.append(g.coords)
    return Lattice.from_generators(list(lat.basis) + periods, lat.n)


@dataclass(frozen=True)
class PeriodResult:
    lattice: Lattice
    witness: Configuration | None


def search_periods(x: Sft, max_index: int, budget: int = DEFAULT_BUDGET) -> list[PeriodResult]:
    """find_periodic over every HNF lattice of index <= max_index, by index then HNF order."""
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    if x.group.family != FREE_ABELIAN:
        raise GroupMismatch("periodic search needs a free abelian group")
    return [PeriodResult(lat, find_periodic(x, lat, budget)) for lat in lattices_up_to(x.group.rank, max_index)]


def dimacs_clauses(x: Sft, domain: Domain) -> tuple[int, list[list[int]]]:
    """(number of variables, clauses) with v(cell, symbol) = cell*|A| + symbol + 1."""
    k = len(x.alphabet)

    def var(c, s):
        return c * k + s + 1

    clauses = []
    for c in range(len(domain)):
        clauses.append([var(c, s) for s in range(k)])
        for s in range(k):
            for t in range(s + 1, k):
                clauses.append([-var(c, s), -var(c, t)])
    for p in x.forbidden:
        syms = p.symbols
        for _, cells in domain.placements(p):
            lits = list(dict.fromkeys(-var(c, s) for c, s in zip(cells, syms)))
            clauses.append(lits)
    return len(domain) * k, clauses


def to_dimacs(x: Sft, domain: Domain) -> str:
    nvars, clauses = dimacs_clauses(x, domain)
    lines = [f"c sftkit export: {len(domain)} cells, {len(x.alphabet)} symbols",
             f"p cnf {nvars} {len(clauses)}"]
    lines.extend(" ".join(map(str, cl)) + " 0" for cl in clauses)
    return "\n".join(lines) + "\n"
