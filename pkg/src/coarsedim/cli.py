"""Command-line workbench: generators, certification runs, pipelines, oracles.

Exit codes: 0 when every certificate passes, 1 when a certificate fails
(the document is still emitted), 2 on input errors (a machine-readable error
document goes to stdout).
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import formats, oracles
from .asdim import (
    build_skeleton_pu,
    check_asdim_pair,
    choose_filler_params,
    filler,
    find_witness_bruteforce,
    shrink_with_multiplicity,
    trim_to_cover,
)
from .covers import Cover, FiniteCoarseSpace, chain_index, is_refinement, iterated_star
from .errors import ConstructionError, InputError, PreconditionError
from .generators import (
    GridInstance,
    LineInstance,
    gen_grid2d,
    gen_line,
    gen_random_geometric,
    random_cover,
    random_refinement_pair,
)
from .metric import FiniteMetricSpace, certify_delta_pu
from .pou import barycentric_map, certify_pu, variation

LINE_RE = re.compile(r"^line(\d+)$")
GRID_RE = re.compile(r"^grid(\d+)x(\d+)$")


@dataclass
class SpaceContext:
    space: FiniteCoarseSpace
    line: LineInstance | None = None
    grid: GridInstance | None = None


def _load_space_arg(arg: str) -> SpaceContext:
    m = LINE_RE.match(arg)
    if m:
        inst = gen_line(int(m.group(1)))
        return SpaceContext(inst.space, line=inst)
    m = GRID_RE.match(arg)
    if m:
        inst = gen_grid2d(int(m.group(1)), int(m.group(2)))
        return SpaceContext(inst.space, grid=inst)
    path = Path(arg)
    if not path.exists():
        raise InputError(f"space {arg!r} is neither a spec (lineN, gridWxH) nor a file")
    return SpaceContext(formats.load_space(path.read_text()))


def _load_cover_arg(arg: str, ctx: SpaceContext) -> Cover:
    if arg == "gauge":
        return ctx.space.gauge
    head, _, tail = arg.partition(":")
    if head == "st" and tail:
        return iterated_star(ctx.space.gauge, int(tail))
    if head == "staggered" and tail:
        if ctx.line is None:
            raise InputError("staggered covers need a line space")
        return ctx.line.staggered(int(tail))
    if head == "blocks" and tail:
        if ctx.line is None:
            raise InputError("block covers need a line space")
        return ctx.line.blocks(int(tail))
    if head == "bricks" and tail:
        if ctx.grid is None:
            raise InputError("brick covers need a grid space")
        return ctx.grid.bricks(int(tail))
    path = Path(arg)
    if not path.exists():
        raise InputError(f"cover {arg!r} is neither a shorthand nor a file")
    return formats.load_cover(path.read_text())


def _load_metric_arg(arg: str) -> FiniteMetricSpace:
    m = LINE_RE.match(arg)
    if m:
        return FiniteMetricSpace.line(int(m.group(1)))
    path = Path(arg)
    if not path.exists():
        raise InputError(f"metric {arg!r} is neither lineN nor a file")
    return formats.load_metric(path.read_text())


def _emit(doc, out: str | None) -> None:
    text = formats.doc_dumps(doc)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def _cert_doc(name: str, cert, extra=None) -> dict:
    doc = {"construction": name, "certificate": formats.encode(cert)}
    if extra:
        doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_gen(args) -> int:
    written = []
    if args.kind == "line":
        inst = gen_line(args.n)
        prefix = args.out_prefix or f"line{args.n}"
        written.append(_write(f"{prefix}.space.txt", formats.dump_space(inst.space)))
        for h in args.staggered_half or []:
            written.append(_write(f"{prefix}.staggered{h}.cover.txt",
                                  formats.dump_cover(inst.staggered(h))))
        for length in args.block_len or []:
            written.append(_write(f"{prefix}.blocks{length}.cover.txt",
                                  formats.dump_cover(inst.blocks(length))))
    elif args.kind == "grid2d":
        inst = gen_grid2d(args.width, args.height)
        prefix = args.out_prefix or f"grid{args.width}x{args.height}"
        written.append(_write(f"{prefix}.space.txt", formats.dump_space(inst.space)))
        for b in args.brick_len or []:
            cover = inst.bricks(b)
            written.append(_write(f"{prefix}.bricks{b}.cover.txt",
                                  formats.dump_cover(cover)))
    else:
        inst = gen_random_geometric(args.n, formats.parse_fraction(args.radius), args.seed)
        prefix = args.out_prefix or f"rg{args.n}s{args.seed}"
        written.append(_write(f"{prefix}.space.txt", formats.dump_space(inst.space)))
        written.append(_write(f"{prefix}.metric.txt", formats.dump_metric(inst.metric)))
        connected = inst.space.chain.is_connected()
        _emit({"generated": args.kind, "files": written, "chain_connected": connected}, None)
        return 0
    _emit({"generated": args.kind, "files": written}, None)
    return 0


def _write(path: str, text: str) -> str:
    Path(path).write_text(text)
    return path


def _cmd_phi(args) -> int:
    ctx = _load_space_arg(args.space)
    target = _load_cover_arg(args.cover, ctx)
    chains = _load_cover_arg(args.chains, ctx)
    pu = barycentric_map(chains, target, d_cap=args.d_cap)
    if args.out_pu:
        Path(args.out_pu).write_text(formats.dump_pu(pu))
    doc = {
        "construction": "barycentric-map",
        "points": pu.n_points,
        "vertices": len(pu.vertices),
        "max_carrier": pu.max_carrier_size(),
        "complex_dimension": pu.complex.dimension if pu.complex else None,
        "weights_sum_to_one": True,  # enforced by construction; recorded for the document
    }
    _emit(doc, args.out)
    return 0


def _cmd_certify(args) -> int:
    if args.mode == "pu":
        ctx = _load_space_arg(args.space)
        pu = formats.load_pu(Path(args.pu).read_text())
        cover = _load_cover_arg(args.cover, ctx)
        eps = formats.parse_fraction(args.eps)
        cert = certify_pu(pu, cover, ctx.space, eps, args.diam)
        _emit(_cert_doc("certify-pu", cert), args.out)
        return 0 if cert.ok else 1
    metric = _load_metric_arg(args.metric)
    pu = formats.load_pu(Path(args.pu).read_text())
    cert = certify_delta_pu(pu, metric, formats.parse_fraction(args.delta),
                            formats.parse_fraction(args.diam))
    _emit(_cert_doc("certify-delta-pu", cert), args.out)
    return 0 if cert.ok else 1


def _cmd_asdim(args) -> int:
    ctx = _load_space_arg(args.space)
    if args.mode == "check":
        u = _load_cover_arg(args.cover_u, ctx)
        v = _load_cover_arg(args.cover_v, ctx)
        cert = check_asdim_pair(u, v, args.n)
        _emit(_cert_doc("asdim-pair", cert), args.out)
        return 0 if cert.ok else 1
    witness_arg = args.witness or _default_witness(ctx, args.k)
    witness = _load_cover_arg(witness_arg, ctx)
    if args.mode == "skeleton":
        result = build_skeleton_pu(ctx.space, ctx.space.gauge, witness,
                                   args.k, args.n, args.diam)
        if args.out_pu:
            Path(args.out_pu).write_text(formats.dump_pu(result.pu))
        _emit(_cert_doc("skeleton-map", result.certificate,
                        {"witness": witness_arg,
                         "precondition": formats.encode(result.precondition)}),
              args.out)
        return 0 if result.certificate.ok else 1
    # round trip: witness -> certified map -> trimmed witness
    gauge = ctx.space.gauge
    result = build_skeleton_pu(ctx.space, gauge, witness, args.k, args.n, args.diam)
    wide = certify_pu(result.pu, iterated_star(gauge, 2), ctx.space, None, args.diam)
    trim = trim_to_cover(result.pu, gauge, args.n)
    ok = result.certificate.ok and wide.ok and trim.certificate.ok
    _emit({
        "construction": "asdim-roundtrip",
        "witness": witness_arg,
        "skeleton_certificate": formats.encode(result.certificate),
        "wide_scale_certificate": formats.encode(wide),
        "trimmed_counts": formats.encode(trim.certificate),
        "ok": ok,
    }, args.out)
    return 0 if ok else 1


def _default_witness(ctx: SpaceContext, k: int) -> str:
    if ctx.line is not None:
        return f"blocks:{4 * k + 10}"
    if ctx.grid is not None:
        return f"bricks:{8 * k + 4}"
    raise InputError("a witness cover is required for file-based spaces")


def _cmd_filler(args) -> int:
    ctx = _load_space_arg(args.space)
    if ctx.line is None:
        raise InputError("the filler pipeline is wired for line specs (lineN)")
    n_points = ctx.space.n_points
    params = choose_filler_params(formats.parse_fraction(args.eps), args.n)
    coarse = ctx.line.staggered(2 * params.k + 1)
    blocks = ctx.line.blocks((n_points + 1) // 2 if args.n >= 1 else n_points)
    base = build_skeleton_pu(ctx.space, coarse, blocks, 1, args.n, args.diam)
    subset = range(args.a_end)
    result = filler(ctx.space, base.pu, subset, ctx.space.gauge, coarse,
                    params, args.diam)
    if args.out_pu:
        Path(args.out_pu).write_text(formats.dump_pu(result.pu))
    doc = {
        "construction": "filler",
        "params": formats.encode(params),
        "input_certificate": formats.encode(result.input_certificate),
        "certificate": formats.encode(result.certificate),
        "budget": formats.encode(result.budget),
        "measured_variation": formats.encode(result.measured_variation),
        "budget_ok": result.budget_ok,
        "max_deviation_on_anchors": formats.encode(result.max_deviation_on_anchors),
        "max_carrier_size": result.max_carrier_size,
        "min_peak_weight": formats.encode(result.min_peak_weight),
        "ok": result.certificate.ok and result.budget_ok,
    }
    _emit(doc, args.out)
    return 0 if doc["ok"] else 1


def _cmd_oracle(args) -> int:
    if args.mode == "chain-index":
        rng = random.Random(args.seed)
        mismatches = 0
        for _ in range(args.instances):
            n = rng.randrange(2, args.max_points + 1)
            cover = random_cover(rng, n, connected=True)
            region = frozenset(x for x in range(n) if rng.random() < 0.6)
            for x in range(n):
                got = chain_index(cover, x, region)
                want = oracles.chain_index_by_enumeration(cover, x, region)
                if got != want:
                    mismatches += 1
        doc = {"oracle": "chain-index", "instances": args.instances,
               "mismatches": mismatches, "ok": mismatches == 0}
        _emit(doc, args.out)
        return 0 if mismatches == 0 else 1
    if args.mode == "shrink":
        rng = random.Random(args.seed)
        violations = 0
        for _ in range(args.instances):
            n = rng.randrange(2, args.max_points + 1)
            fine, coarse = random_refinement_pair(rng, n)
            shrunk = shrink_with_multiplicity(fine, coarse)
            okay = all(shrunk.sets[s] <= coarse.sets[s] for s in range(len(coarse.sets)))
            okay = okay and is_refinement(fine, shrunk).ok
            okay = okay and all(shrunk.multiplicity(x) <= fine.multiplicity(x)
                                for x in range(n))
            for s in range(len(coarse.sets)):
                for x in coarse.sets[s]:
                    if coarse.multiplicity(x) <= fine.multiplicity(x) and x not in shrunk.sets[s]:
                        okay = False
            if not okay:
                violations += 1
        doc = {"oracle": "shrink", "instances": args.instances,
               "violations": violations, "ok": violations == 0}
        _emit(doc, args.out)
        return 0 if violations == 0 else 1
    ctx = _load_space_arg(args.space)
    cover = _load_cover_arg(args.cover, ctx)
    witness = find_witness_bruteforce(ctx.space, cover, args.n, args.diam)
    if witness is None:
        _emit({"oracle": "asdim-witness", "found": False,
               "note": "no witness within the ball family and budget; "
                       "this refutes nothing beyond that family"}, args.out)
        return 1
    doc = {"oracle": "asdim-witness", "found": True,
           "elements": [sorted(s) for s in witness.sets]}
    if args.out_cover:
        Path(args.out_cover).write_text(formats.dump_cover(witness))
    _emit(doc, args.out)
    return 0


def _parse_k_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    k = int(text)
    return range(k, k + 1)


def _cmd_sweep(args) -> int:
    ctx = _load_space_arg(args.space)
    if ctx.line is None:
        raise InputError("the sweep is wired for line specs (lineN)")
    gauge = ctx.space.gauge
    rows = []
    previous = None
    monotone = True
    bounded = True
    for k in _parse_k_range(args.k):
        cover = ctx.line.staggered(2 * k + 1).normalize()
        if not is_refinement(iterated_star(gauge, k), cover).ok:
            raise ConstructionError(f"staggered witness at k={k} is not coarse enough")
        pu = barycentric_map(gauge, cover)
        var = variation(pu, gauge)
        bound = Fraction(16, k)
        rows.append((k, var.value, bound))
        if var.value > bound:
            bounded = False
        if previous is not None and var.value > previous:
            monotone = False
        previous = var.value
    if args.out:
        lines = ["k,variation_num,variation_den,bound_num,bound_den"]
        for k, v, b in rows:
            lines.append(f"{k},{v.numerator},{v.denominator},{b.numerator},{b.denominator}")
        Path(args.out).write_text("\n".join(lines) + "\n")
    doc = {
        "construction": "variation-sweep",
        "rows": [{"k": k, "variation": formats.encode(v), "bound": formats.encode(b)}
                 for k, v, b in rows],
        "all_within_bound": bounded,
        "nonincreasing": monotone,
        "ok": bounded and monotone,
    }
    _emit(doc, None)
    return 0 if doc["ok"] else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarsedim",
        description="Cover algebra, nerve maps, and asymptotic-dimension "
                    "certificates on finite coarse spaces (exact arithmetic).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit space and cover files")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("line")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--staggered-half", type=int, action="append")
    g.add_argument("--block-len", type=int, action="append")
    g.add_argument("--out-prefix")
    g = gsub.add_parser("grid2d")
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--height", type=int, required=True)
    g.add_argument("--brick-len", type=int, action="append")
    g.add_argument("--out-prefix")
    g = gsub.add_parser("random-geometric")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--radius", required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out-prefix")

    p = sub.add_parser("phi", help="build the nerve map for a cover")
    p.add_argument("--space", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--chains", default="gauge")
    p.add_argument("--d-cap", type=int, default=None)
    p.add_argument("--out-pu")
    p.add_argument("--out")

    p = sub.add_parser("certify", help="run a certificate")
    csub = p.add_subparsers(dest="mode", required=True)
    c = csub.add_parser("pu")
    c.add_argument("--space", required=True)
    c.add_argument("--pu", required=True)
    c.add_argument("--cover", required=True)
    c.add_argument("--eps", required=True, help="p/q, an integer, or inf")
    c.add_argument("--diam", type=int, required=True)
    c.add_argument("--out")
    c = csub.add_parser("delta")
    c.add_argument("--metric", required=True)
    c.add_argument("--pu", required=True)
    c.add_argument("--delta", required=True)
    c.add_argument("--diam", required=True)
    c.add_argument("--out")

    p = sub.add_parser("asdim", help="intersection counts, skeleton maps, round trips")
    asub = p.add_subparsers(dest="mode", required=True)
    a = asub.add_parser("check")
    a.add_argument("--space", required=True)
    a.add_argument("--cover-u", required=True)
    a.add_argument("--cover-v", required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--out")
    for name in ("skeleton", "roundtrip"):
        a = asub.add_parser(name)
        a.add_argument("--space", required=True)
        a.add_argument("--witness")
        a.add_argument("--k", type=int, required=True)
        a.add_argument("--n", type=int, required=True)
        a.add_argument("--diam", type=int, required=True)
        a.add_argument("--out")
        if name == "skeleton":
            a.add_argument("--out-pu")

    p = sub.add_parser("filler", help="full blend pipeline on a line space")
    p.add_argument("--space", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--a-end", type=int, required=True,
                   help="the anchor subset is 0..a_end-1")
    p.add_argument("--diam", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--out-pu")

    p = sub.add_parser("oracle", help="tiny-instance brute-force comparisons")
    osub = p.add_subparsers(dest="mode", required=True)
    o = osub.add_parser("chain-index")
    o.add_argument("--instances", type=int, default=200)
    o.add_argument("--max-points", type=int, default=8)
    o.add_argument("--seed", type=int, default=1)
    o.add_argument("--out")
    o = osub.add_parser("shrink")
    o.add_argument("--instances", type=int, default=200)
    o.add_argument("--max-points", type=int, default=12)
    o.add_argument("--seed", type=int, default=2)
    o.add_argument("--out")
    o = osub.add_parser("asdim-witness")
    o.add_argument("--space", required=True)
    o.add_argument("--cover", default="gauge")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--diam", type=int, required=True)
    o.add_argument("--out")
    o.add_argument("--out-cover")

    p = sub.add_parser("sweep", help="variation against the bound over a range of scales")
    p.add_argument("--space", required=True)
    p.add_argument("--k", required=True, help="a single k or a range like 1..64")
    p.add_argument("--out", help="CSV output path")

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "phi": _cmd_phi,
    "certify": _cmd_certify,
    "asdim": _cmd_asdim,
    "filler": _cmd_filler,
    "oracle": _cmd_oracle,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (InputError, PreconditionError) as exc:
        sys.stdout.write(formats.doc_dumps(
            {"error": type(exc).__name__, "detail": str(exc)}))
        return 2
    except ConstructionError as exc:
        sys.stdout.write(formats.doc_dumps(
            {"error": "ConstructionError", "detail": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
