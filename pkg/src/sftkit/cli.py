"""Command-line front end.

Exit codes: 0 success / witness / consistent, 1 certified empty / none found /
refuted, 2 inconclusive (budget), 64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

from . import constructions, solver
from .automorphism import DivVerdict, div_witness_check
from .errors import BudgetExceeded, SftError
from .groups import FREE_ABELIAN
from .io import (
    automorphism_from_json,
    chain_from_json,
    config_from_json,
    config_to_json,
    digest,
    dumps,
    hom_from_json,
    load_json,
    sft_from_json,
    sft_to_json,
    tiles_from_json,
)
from .lattice import Lattice
from .sft import Alphabet, Configuration, Domain, wang_to_sft

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_MALFORMED = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Run:
    """Collects input digests and renders the report for one invocation."""

    def __init__(self, argv, out, timing: bool):
        self.argv = list(argv)
        self.out = out
        self.timing = timing
        self.inputs: dict[str, str] = {}
        self.started = time.perf_counter()

    def load(self, path: str) -> Any:
        try:
            data = load_json(path)
        except OSError as exc:
            raise SftError(f"cannot read {path}: {exc}") from exc
        self.inputs[path] = digest(data)
        return data

    def report(self, result: dict, nodes: int | None = None):
        rep: dict[str, Any] = {"command": self.argv, "inputs": self.inputs, "result": result}
        if nodes is not None:
            rep["nodes"] = nodes
        if self.timing:
            rep["timing"] = {"wall_seconds": round(time.perf_counter() - self.started, 6)}
        self.out.write(dumps(rep))

    def emit_sft(self, x):
        self.out.write(dumps(sft_to_json(x)))


def _build_parser() -> _Parser:
    p = _Parser(prog="sftkit", description="SFT constructions and bounded verification on f.g. groups")
    p.add_argument("--timing", action="store_true", help="add a wall-time section to reports")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="bounded emptiness on a Cayley ball")
    s.add_argument("sft")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--budget", type=int, default=solver.DEFAULT_BUDGET)

    s = sub.add_parser("periodic", help="admissible coloring of a torus Z^n/L")
    s.add_argument("sft")
    s.add_argument("--lattice", required=True, help='row-major basis "a,b;c,d"')
    s.add_argument("--budget", type=int, default=solver.DEFAULT_BUDGET)

    s = sub.add_parser("search-periods", help="periodic search over all lattices up to an index")
    s.add_argument("sft")
    s.add_argument("--max-index", type=int, required=True)
    s.add_argument("--budget", type=int, default=solver.DEFAULT_BUDGET)

    s = sub.add_parser("stabilizer", help="stabilizer lattice of a torus configuration")
    s.add_argument("config")

    for name, helptext in (("lift", "lift through a quotient map"), ("induce", "induce along an embedding")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("sft")
        s.add_argument("--hom", required=True)

    s = sub.add_parser("product", help="cartesian product of SFTs")
    s.add_argument("sfts", nargs="+")

    s = sub.add_parser("mod3", help="mod-3 marker SFT on Z^n")
    s.add_argument("--dim", type=int, required=True)

    s = sub.add_parser("extend", help="Z^2 SFT extended to Z^n, constant along e3..en")
    s.add_argument("sft")
    s.add_argument("--dim", type=int, required=True)

    s = sub.add_parser("autfree", help="X_1 x ... x X_n x mod-3 marker from a Z^2 base")
    s.add_argument("sft")
    s.add_argument("--projection", required=True, help='JSON object or file mapping base symbols to 0/1')
    s.add_argument("--dim", type=int, required=True)

    s = sub.add_parser("wang", help="Wang tile set to SFT on Z^2")
    s.add_argument("tiles")

    s = sub.add_parser("reduce", help="carry a Wang tile set along a chain of homomorphisms")
    s.add_argument("tiles")
    s.add_argument("--chain", required=True)

    s = sub.add_parser("aut-check", help="window test of an automorphism against an SFT")
    s.add_argument("sft")
    s.add_argument("config")
    s.add_argument("--matrix", required=True, help='"a,b;c,d", a JSON object, or a JSON file')

    s = sub.add_parser("render", help="draw a configuration")
    s.add_argument("config")
    s.add_argument("--format", choices=("text", "pgm"), default="text")

    s = sub.add_parser("export-cnf", help="DIMACS CNF for a Cayley ball")
    s.add_argument("sft")
    s.add_argument("--radius", type=int, required=True)
    return p


def _witness_json(c: Configuration | None, alphabet: Alphabet):
    return None if c is None else config_to_json(c, alphabet)


def _parse_matrix(run: _Run, text: str):
    text = text.strip()
    if text.startswith("{"):
        return automorphism_from_json(json.loads(text))
    if ";" in text or "," in text:
        try:
            rows = [[int(v) for v in row.split(",")] for row in text.split(";")]
        except ValueError as exc:
            raise UsageError(f"bad matrix {text!r}") from exc
        return automorphism_from_json({"matrix": rows})
    return automorphism_from_json(run.load(text))


def _parse_projection(run: _Run, text: str) -> dict:
    text = text.strip()
    data = json.loads(text) if text.startswith("{") else run.load(text)
    return {str(k): int(v) for k, v in data.items()}


def _lattice(text: str) -> Lattice:
    try:
        return Lattice.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def render_text(c: Configuration, alphabet: Alphabet) -> str:
    g = c.group
    width = max(len(s) for s in alphabet)
    if g.family == FREE_ABELIAN and g.rank in (1, 2):
        grid = {(h.coords + (0,))[:2]: alphabet[v] for h, v in c.items()}
        xs = [p[0] for p in grid]
        ys = [p[1] for p in grid]
        lines = []
        for y in range(max(ys), min(ys) - 1, -1):
            row = [grid.get((x, y), ".").rjust(width) for x in range(min(xs), max(xs) + 1)]
            lines.append(" ".join(row))
        return "\n".join(lines) + "\n"
    return "".join(f"{','.join(map(str, h.coords))}\t{alphabet[v]}\n" for h, v in c.items())


def render_pgm(c: Configuration, alphabet: Alphabet) -> bytes:
    """Binary P5; gray = floor(255 * idx / (|A| - 1)), cells missing from a window are 0."""
    g = c.group
    if g.family != FREE_ABELIAN or g.rank > 2:
        raise SftError("PGM rendering needs a configuration on Z or Z^2")
    k = len(alphabet)
    grid = {(h.coords + (0,))[:2]: v for h, v in c.items()}
    xs = [p[0] for p in grid]
    ys = [p[1] for p in grid]
    w, h = max(xs) - min(xs) + 1, max(ys) - min(ys) + 1
    pixels = bytearray()
    for y in range(max(ys), min(ys) - 1, -1):
        for x in range(min(xs), max(xs) + 1):
            v = grid.get((x, y))
            pixels.append(0 if v is None or k == 1 else (255 * v) // (k - 1))
    return f"P5\n{w} {h}\n255\n".encode() + bytes(pixels)


def _dispatch(args, run: _Run) -> int:
    cmd = args.cmd
    if cmd == "check":
        x = sft_from_json(run.load(args.sft))
        v = solver.check_ball_emptiness(x, args.radius, args.budget)
        run.report({"verdict": v.kind, "radius": v.radius, "witness": _witness_json(v.witness, x.alphabet)}, v.nodes)
        return {solver.WITNESS: EXIT_OK, solver.EMPTY: EXIT_NEGATIVE}.get(v.kind, EXIT_INCONCLUSIVE)

    if cmd == "periodic":
        x = sft_from_json(run.load(args.sft))
        lat = _lattice(args.lattice)
        search = solver.Search.for_domain(x, Domain.torus(x.group, lat), args.budget) \
            if x.group.family == FREE_ABELIAN else None
        if search is None:
            raise SftError("periodic search needs a free abelian group")
        try:
            sol = search.first()
        except BudgetExceeded:
            run.report({"lattice": lat.to_text(), "verdict": solver.INCONCLUSIVE, "witness": None}, search.nodes)
            return EXIT_INCONCLUSIVE
        c = None if sol is None else Configuration(Domain.torus(x.group, lat), sol)
        run.report({"lattice": lat.to_text(), "verdict": "found" if c else "none",
                    "witness": _witness_json(c, x.alphabet)}, search.nodes)
        return EXIT_OK if c else EXIT_NEGATIVE

    if cmd == "search-periods":
        x = sft_from_json(run.load(args.sft))
        try:
            results = solver.search_periods(x, args.max_index, args.budget)
        except BudgetExceeded as exc:
            run.report({"verdict": solver.INCONCLUSIVE, "detail": str(exc)})
            return EXIT_INCONCLUSIVE
        rows = [{"lattice": r.lattice.to_text(), "index": r.lattice.index, "admits": r.witness is not None}
                for r in results]
        found = sum(r["admits"] for r in rows)
        run.report({"max_index": args.max_index, "lattices": rows, "admitting": found})
        return EXIT_OK if found else EXIT_NEGATIVE

    if cmd == "stabilizer":
        c, _ = config_from_json(run.load(args.config))
        if not c.domain.is_torus:
            raise SftError("stabilizer needs a torus configuration")
        lat = solver.stabilizer(c)
        run.report({"stabilizer": lat.to_text(), "index": lat.index})
        return EXIT_OK

    if cmd in ("lift", "induce"):
        x = sft_from_json(run.load(args.sft))
        h = hom_from_json(run.load(args.hom))
        op = constructions.quotient_lift if cmd == "lift" else constructions.subgroup_induce
        run.emit_sft(op(x, h))
        return EXIT_OK

    if cmd == "product":
        if len(args.sfts) < 2:
            raise UsageError("product needs at least two SFT files")
        run.emit_sft(constructions.product(*(sft_from_json(run.load(p)) for p in args.sfts)))
        return EXIT_OK

    if cmd == "mod3":
        if args.dim < 1:
            raise UsageError("--dim must be >= 1")
        run.emit_sft(constructions.mod3_marker(args.dim))
        return EXIT_OK

    if cmd == "extend":
        run.emit_sft(constructions.extend_periodic(sft_from_json(run.load(args.sft)), args.dim))
        return EXIT_OK

    if cmd == "autfree":
        base = sft_from_json(run.load(args.sft))
        proj = _parse_projection(run, args.projection)
        run.emit_sft(constructions.automorphism_free_product(base, proj, args.dim))
        return EXIT_OK

    if cmd == "wang":
        run.emit_sft(wang_to_sft(tiles_from_json(run.load(args.tiles))))
        return EXIT_OK

    if cmd == "reduce":
        tiles = tiles_from_json(run.load(args.tiles))
        chain = chain_from_json(run.load(args.chain))
        run.emit_sft(constructions.reduce_to_group(tiles, chain))
        return EXIT_OK

    if cmd == "aut-check":
        x = sft_from_json(run.load(args.sft))
        c, alphabet = config_from_json(run.load(args.config))
        if alphabet != x.alphabet:
            raise SftError("configuration alphabet differs from the SFT alphabet")
        m = _parse_matrix(run, args.matrix)
        verdict = div_witness_check(x, c, m)
        run.report({"matrix": [list(r) for r in m.entries], "verdict": verdict.value})
        return EXIT_OK if verdict == DivVerdict.CONSISTENT else EXIT_NEGATIVE

    if cmd == "render":
        c, alphabet = config_from_json(run.load(args.config))
        if args.format == "text":
            run.out.write(render_text(c, alphabet))
        else:
            data = render_pgm(c, alphabet)
            buf = getattr(run.out, "buffer", None)
            if buf is not None:
                buf.write(data)
                buf.flush()
            else:
                run.out.write(data.decode("latin-1"))
        return EXIT_OK

    if cmd == "export-cnf":
        x = sft_from_json(run.load(args.sft))
        if args.radius < 0:
            raise UsageError("--radius must be nonnegative")
        run.out.write(solver.to_dimacs(x, Domain.ball(x.group, args.radius)))
        return EXIT_OK

    raise UsageError(f"unknown command {cmd!r}")


def run(argv: list[str], out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _dispatch(args, _Run(argv, out, args.timing))
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (SftError, ValueError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_MALFORMED


def main(argv: list[str] | None = None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
