"""Batch front end.

Every command reads a quiver (from a config file or an inline parameter
string), runs one computation, and writes a deterministic plain-text
report.  Exit codes: 0 success, 1 a mathematical check failed, 2 input
error.  The crystal command also exports the graph in DOT form and can
render it to an image file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import characters as chars
from . import fmod, hecke, klr, quiver as quiv
from .ground import LaurentV
from .quiver import DimVector, QuiverConfigError, QuiverWithInvolution

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class InputError(Exception):
    pass


def load_quiver(args) -> QuiverWithInvolution:
    if getattr(args, "hecke", None):
        params = {}
        for part in args.hecke.split(";"):
            key, eq, val = part.partition("=")
            if not eq:
                raise InputError("bad --hecke fragment %r" % part)
            params[key.strip().lower()] = val.strip()
        try:
            return quiv.build_from_hecke_params(params)
        except (quiv.QuiverError, ValueError, ZeroDivisionError) as e:
            raise InputError("bad --hecke parameters: %s" % e) from None
    if getattr(args, "quiver", None):
        try:
            text = Path(args.quiver).read_text()
        except OSError as e:
            raise InputError("cannot read quiver file: %s" % e) from None
        try:
            return quiv.parse_quiver_config(text)
        except QuiverConfigError as e:
            raise InputError("quiver config: %s" % e) from None
    raise InputError("a quiver is required (--quiver FILE or --hecke SPEC)")


def hecke_params_of(args, quiver) -> hecke.HeckeParams:
    spec = {}
    if getattr(args, "hecke", None):
        for part in args.hecke.split(";"):
            key, eq, val = part.partition("=")
            spec[key.strip().lower()] = val.strip()
    elif getattr(args, "quiver", None):
        spec = _hecke_section(Path(args.quiver).read_text())
    family = spec.get("family", getattr(args, "family", None) or "B").upper()
    try:
        if family == "B":
            return hecke.HeckeParams("B", spec["p"], q=spec["q"])
        return hecke.HeckeParams("C", spec["p"], q0=spec["q0"], q1=spec["q1"])
    except KeyError as e:
        raise InputError("missing hecke parameter %s" % e) from None
    except hecke.DegenerateParameter as e:
        raise InputError(str(e)) from None


def _hecke_section(text: str) -> dict:
    """Key/value pairs of a config file's [hecke] section, if any."""
    spec = {}
    section = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            continue
        if section == "hecke":
            key, eq, val = line.partition("=")
            if eq:
                spec[key.strip().lower()] = val.strip()
    return spec


def emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_nu(args) -> DimVector:
    if getattr(args, "nu", None) is None:
        raise InputError("--nu is required for this command")
    try:
        return DimVector.parse(args.nu)  # the empty string is the unit block
    except (ValueError, quiv.QuiverError) as e:
        raise InputError("bad --nu: %s" % e) from None


# -- commands -----------------------------------------------------------------


def cmd_verify(args) -> int:
    quiver = load_quiver(args)
    lines = []
    failed = False
    rank = args.rank
    for m in range(0, rank + 1):
        for nu in quiv.theta_dimvectors(quiver, m):
            rep = klr.verify_relations(quiver, nu, "B", corrupt_Q=args.corrupt_Q)
            lines.append("theta nu=%s : checked %d failed %d"
                         % (nu, rep.checked(), len(rep.failures)))
            lines.extend("  FAIL %s at %s" % (t, w) for t, w, _ in rep.failures)
            failed = failed or not rep.ok()
    arank = args.type_a_rank if args.type_a_rank is not None else min(rank, 3)
    for m in range(1, arank + 1):
        for seq_tuple in _plain_contents(quiver, m):
            counts = {}
            for a in seq_tuple:
                counts[a] = counts.get(a, 0) + 1
            nu = DimVector(counts)
            rep = klr.verify_relations(quiver, nu, "A", corrupt_Q=args.corrupt_Q)
            lines.append("plain nu=%s : checked %d failed %d"
                         % (nu, rep.checked(), len(rep.failures)))
            lines.extend("  FAIL %s at %s" % (t, w) for t, w, _ in rep.failures)
            failed = failed or not rep.ok()
    lines.append("verdict: %s" % ("FAIL" if failed else "PASS"))
    emit(args, "\n".join(lines) + "\n")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _plain_contents(quiver, m):
    import itertools
    out = []
    for combo in itertools.combinations_with_replacement(quiver.vertices, m):
        out.append(tuple(sorted(combo)))
    return sorted(set(out))


def cmd_pbw(args) -> int:
    quiver = load_quiver(args)
    nu = parse_nu(args)
    alg = klr.Algebra(quiver, nu, "B")
    expected = len(alg.seqs) * alg.group.order()
    lines = ["pbw basis for nu=%s" % nu,
             "sequences %d x group order %d = %d basis elements"
             % (len(alg.seqs), alg.group.order(), expected)]
    sample = args.samples
    count = 0
    ok = True
    for i in alg.seqs:
        for w in alg.group.elements:
            for j in alg.seqs:
                for u in alg.group.elements:
                    if count >= sample:
                        break
                    x = klr.embed_basis(alg, i, w) * klr.embed_basis(alg, j, u)
                    try:
                        p = klr.to_pbw(x)
                    except klr.NotInAlgebra:
                        ok = False
                        lines.append("FAIL product (%s,%r)(%s,%r) not polynomial"
                                     % (alg.seq_str(i), w.images, alg.seq_str(j), u.images))
                        count += 1
                        continue
                    back = klr.from_pbw(p)
                    if not (back - x).is_zero():
                        ok = False
                        lines.append("FAIL roundtrip at (%s,%r)(%s,%r)"
                                     % (alg.seq_str(i), w.images, alg.seq_str(j), u.images))
                    count += 1
                if count >= sample:
                    break
            if count >= sample:
                break
        if count >= sample:
            break
    lines.append("products checked: %d" % count)
    lines.append("verdict: %s" % ("PASS" if ok else "FAIL"))
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_gdim(args) -> int:
    quiver = load_quiver(args)
    nu = parse_nu(args)
    alg = klr.Algebra(quiver, nu, "B")
    lines = ["graded dimensions of 1_i R 1_j for nu=%s" % nu]
    for i in alg.seqs:
        for j in alg.seqs:
            num, d = klr.gdim_pair(alg, i, j)
            if num.is_zero():
                continue
            lines.append("[%s] | [%s] : %s / (1-v^2)^%d"
                         % (alg.seq_str(i), alg.seq_str(j), num, d))
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_character(args) -> int:
    quiver = load_quiver(args)
    nu = parse_nu(args)
    alg = klr.Algebra(quiver, nu, "B")
    lines = ["projective characters for nu=%s (shuffle route vs PBW route)" % nu]
    all_match = True
    for j in alg.seqs:
        a = chars.ch_projective(quiver, j)
        b = chars.ch_projective_gdim_route(quiver, j)
        verdict = "MATCH" if a == b else "MISMATCH"
        all_match = all_match and (a == b)
        lines.append("sequence [%s] : %s" % (alg.seq_str(j), verdict))
        for s in a.support():
            lines.append("  %s : %s / (1-v^2)^%d" % (a.seq_str(s), a.coeffs[s], a.denom))
    lines.append("verdict: %s" % ("PASS" if all_match else "FAIL"))
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all_match else EXIT_CHECK_FAILED


def cmd_shuffle(args) -> int:
    quiver = load_quiver(args)
    left = tuple(x for x in (args.left or "").split(",") if x)
    right = tuple(x for x in (args.right or "").split(",") if x)
    for v in left + right:
        if v not in quiver.vertices:
            raise InputError("unknown vertex %r" % v)
    f = chars.Character(quiver, "theta", len(left), {left: LaurentV.one()})
    g = chars.Character(quiver, "plain", len(right), {right: LaurentV.one()})
    out = chars.shuffle(f, g)
    lines = ["shuffle of theta [%s] with plain [%s]"
             % (",".join(left) or "-", ",".join(right) or "-")]
    lines.append(out.render())
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_crystal(args) -> int:
    quiver = load_quiver(args)
    try:
        graph = fmod.build_crystal(quiver, args.depth)
    except fmod.ClosureViolation as e:
        emit(args, "closure violation: %s\n" % e)
        return EXIT_CHECK_FAILED
    lines = ["crystal to depth %d : %d nodes, %d edges"
             % (args.depth, len(graph.nodes), len(graph.edges))]
    for idx, w in enumerate(graph.nodes):
        lines.append("node %d : nu=%s dim=%d" % (idx, w.module.nu, w.module.dim()))
        ch = w.character()
        for s in ch.support():
            lines.append("  %s : %s" % (ch.seq_str(s), ch.coeffs[s]))
    for src, vertex, dst in graph.edges:
        lines.append("edge %d -[%s]-> %d" % (src, vertex, dst))
    emit(args, "\n".join(lines) + "\n")
    if args.dot:
        Path(args.dot).write_text(crystal_dot(graph))
    if args.fig:
        render_crystal_figure(graph, args.fig)
    return EXIT_OK


def crystal_dot(graph: fmod.CrystalGraph) -> str:
    lines = ["digraph crystal {"]
    for idx, w in enumerate(graph.nodes):
        ch = w.character()
        label = "\\n".join("%s : %s" % (ch.seq_str(s), ch.coeffs[s])
                           for s in ch.support()) or "unit"
        lines.append('  n%d [label="%s"];' % (idx, label))
    for src, vertex, dst in sorted(set(graph.edges)):
        lines.append('  n%d -> n%d [label="%s"];' % (src, dst, vertex))
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_crystal_figure(graph: fmod.CrystalGraph, path: str):
    """Draw the crystal with one row per rank and save to an image file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    levels: dict[int, list[int]] = {}
    for idx, w in enumerate(graph.nodes):
        levels.setdefault(w.module.m, []).append(idx)
    pos = {}
    for m, idxs in sorted(levels.items()):
        for col, idx in enumerate(idxs):
            pos[idx] = (col - (len(idxs) - 1) / 2.0, -m)
    fig, ax = plt.subplots(figsize=(max(6, 2 * max(len(v) for v in levels.values())),
                                    2 + 2 * len(levels)))
    for src, vertex, dst in sorted(set(graph.edges)):
        x0, y0 = pos[src]
        x1, y1 = pos[dst]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="-|>", color="gray"))
        ax.text((x0 + x1) / 2, (y0 + y1) / 2, vertex, fontsize=8, color="darkred")
    for idx, (x, y) in pos.items():
        w = graph.nodes[idx]
        ax.plot([x], [y], "o", color="steelblue", markersize=14)
        ax.text(x, y - 0.18, "%d" % w.module.dim(), ha="center", fontsize=8)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_hecke(args) -> int:
    quiver = load_quiver(args)
    params = hecke_params_of(args, quiver)
    lines = []
    failed = False
    if args.module:
        try:
            text = Path(args.module).read_text()
        except OSError as e:
            raise InputError("cannot read module file: %s" % e) from None
        try:
            M = fmod.module_from_text(text, quiver)
        except fmod.ModuleFileError as e:
            raise InputError("module file: %s" % e) from None
        vrep = fmod.validate(M)
        if not vrep.ok():
            emit(args, vrep.render() + "\nverdict: FAIL\n")
            return EXIT_CHECK_FAILED
        try:
            H = hecke.transport(M, params)
        except (hecke.ParameterMismatch, quiv.ValueMissing) as e:
            raise InputError(str(e)) from None
        rep = hecke.verify_hecke(H, params)
        lines.append("transport: dim %d, relations checked %d, failed %d"
                     % (H.dim, len(rep.entries), len(rep.failures)))
        lines.extend("  FAIL %s" % t for t in rep.failures)
        failed = failed or not rep.ok()
        erep = hecke.check_Ei_compat(M, params)
        lines.append("restriction compatibility: checked %d, failed %d"
                     % (len(erep.entries), len(erep.failures)))
        failed = failed or not erep.ok()
        if args.out_module:
            Path(args.out_module).write_text(hecke.hecke_to_text(H))
    else:
        graph = fmod.build_crystal(quiver, 1)
        lines.append("rank-1 classification at %r" % (params,))
        for w in graph.nodes:
            M = w.module
            if M.m != 1:
                continue
            H = hecke.transport(M, params)
            rep = hecke.verify_hecke(H, params)
            failed = failed or not rep.ok()
            ch = M.character()
            chtext = "; ".join("%s : %s" % (ch.seq_str(s), ch.coeffs[s])
                               for s in ch.support())
            lines.append("simple [%s] dim %d : relations %s"
                         % (chtext, M.dim(), "PASS" if rep.ok() else "FAIL"))
            for l, X in enumerate(H.X, start=1):
                lines.append("  X%d = %s" % (l, _mat_text(X)))
            for k, T in enumerate(H.T):
                lines.append("  T%d = %s" % (k, _mat_text(T)))
    lines.append("verdict: %s" % ("FAIL" if failed else "PASS"))
    emit(args, "\n".join(lines) + "\n")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _mat_text(mat) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in mat.rows) + "]"


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="klrb",
                                 description="exact workbench for quiver Hecke "
                                             "algebras with involution")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--quiver", help="quiver config file")
        p.add_argument("--hecke", help="inline parameters: values=..;p=..;q=.. "
                                       "(or family=C;..;q0=..;q1=..)")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("verify", help="check the defining relations")
    common(p)
    p.add_argument("--rank", type=int, default=2, help="largest rank m (theta side)")
    p.add_argument("--type-a-rank", type=int, default=None)
    p.add_argument("--corrupt-Q", action="store_true",
                   help="negative control: flip the sign of Q")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("pbw", help="PBW basis count and normal-form round trips")
    common(p)
    p.add_argument("--nu", required=True)
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(fn=cmd_pbw)

    p = sub.add_parser("gdim", help="graded dimensions of the idempotent pieces")
    common(p)
    p.add_argument("--nu", required=True)
    p.set_defaults(fn=cmd_gdim)

    p = sub.add_parser("character", help="projective characters, both routes")
    common(p)
    p.add_argument("--nu", required=True)
    p.set_defaults(fn=cmd_character)

    p = sub.add_parser("shuffle", help="shuffle two basis characters")
    common(p)
    p.add_argument("--left", default="", help="theta sequence right half, comma separated")
    p.add_argument("--right", default="", help="plain sequence, comma separated")
    p.set_defaults(fn=cmd_shuffle)

    p = sub.add_parser("crystal", help="crystal graph of simple modules")
    common(p)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--dot", help="write the graph in DOT form here")
    p.add_argument("--fig", help="render the graph to this image file")
    p.set_defaults(fn=cmd_crystal)

    p = sub.add_parser("hecke", help="transport modules to the affine Hecke algebra")
    common(p)
    p.add_argument("--family", choices=["B", "C"])
    p.add_argument("--module", help="graded module file to transport")
    p.add_argument("--out-module", help="write the transported matrices here")
    p.set_defaults(fn=cmd_hecke)
    return ap


def main(argv=None) -> int:
    from .weyl import RankTooLarge

    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, RankTooLarge, quiv.QuiverError) as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
