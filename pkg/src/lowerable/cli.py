"""Command-line front end: ``lowerable analyze|generators|verify <germ.json>``.

Exit codes: 0 success, 1 input error, 2 not finitely 𝓛-determined (or delta
not certified) within the bounds, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .determinacy import DEFAULT_ELL_MAX
from .errors import DeltaNotCertified, GermValidationError, NotFinitelyDetermined
from .generators import Generator, assemble, analyze, prune
from .germ import validate
from .localalgebra import DEFAULT_DELTA_MAX
from .poly import Poly, render
from .verification import default_orders, verify_generators

EXIT_OK, EXIT_INPUT, EXIT_NOT_DETERMINED, EXIT_MISMATCH = 0, 1, 2, 3

OPTION_KEYS = {"ell_max", "delta_max", "verify_orders", "prune"}


class InputError(Exception):
    pass


def load_germ_file(path):
    """Read and validate a germ file; returns ``(MultiGerm, options)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_germ_document(doc)


def parse_germ_document(doc):
    if not isinstance(doc, dict):
        raise InputError("germ file must contain a JSON object")
    unknown = set(doc) - {"n", "p", "branches", "options"}
    if unknown:
        raise InputError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InputError("options must be an object")
    bad = set(options) - OPTION_KEYS
    if bad:
        raise InputError(f"unknown option keys: {', '.join(sorted(bad))}")
    for key in ("ell_max", "delta_max"):
        if key in options and not (isinstance(options[key], int) and options[key] >= 1):
            raise InputError(f"option {key} must be a positive integer")
    if "verify_orders" in options:
        vo = options["verify_orders"]
        if not (isinstance(vo, list) and all(isinstance(x, int) and x >= 1 for x in vo)):
            raise InputError("option verify_orders must be a list of positive integers")
    if "prune" in options and not isinstance(options["prune"], bool):
        raise InputError("option prune must be a boolean")
    for key in ("n", "p"):
        if not isinstance(doc.get(key), int) or isinstance(doc.get(key), bool):
            raise InputError(f"{key} must be a positive integer")
    try:
        germ = validate(doc)
    except GermValidationError as exc:
        raise InputError("invalid germ: " + "; ".join(exc.violations)) from None
    return germ, options


def _field_json(fld):
    return fld.to_strings()


def _preimage_json(src):
    return [[render(a) for a in slot] for slot in src.slots]


def analysis_json(f, algebras, cert):
    return {
        "n": f.n,
        "p": f.p,
        "r": f.r,
        "delta": [a.delta for a in algebras],
        "phi": [[render(Poly.monomial(m)) for m in a.phi_basis] for a in algebras],
        "d_branch": [a.d for a in algebras],
        "d": cert.d,
        "ell": cert.ell,
        "jet_order_used": cert.jet_order_used,
    }


def _tag_json(tag):
    k, i, j, alpha = tag
    return {"k": k, "i": i, "j": j, "alpha": list(alpha)}


def generators_json(G):
    return {
        "V": [
            {
                "field": _field_json(v.field),
                "preimage": _preimage_json(v.preimage),
                "combination": [{"L": idx + 1, "coeff": str(c)} for idx, c in v.combination],
            }
            for v in G.V_basis
        ],
        "H": [
            {
                "field": _field_json(h.field),
                "preimage": _preimage_json(h.preimage),
                "tag": _tag_json(h.tag),
                "redundant": red,
            }
            for h, red in zip(G.H_distinct, G.H_redundant)
        ],
        "module": [
            {"origin": g.origin, "field": _field_json(g.field), "preimage": _preimage_json(g.preimage)}
            for g in G.generators
        ],
        "lowerable": [g.preimage.render() for g in G.generators],
        "counts": {
            **G.counts,
            "H_distinct": len(G.H_distinct),
            "generators": len(G.generators),
        },
        "pruned_at": G.pruned_at,
    }


def inject_fault(G, index, mode):
    """Corrupt generator ``index`` (1-based) for testing the verifier."""
    gens = list(G.generators)
    if not 1 <= index <= len(gens):
        raise InputError(f"--inject-fault index {index} out of range 1..{len(gens)}")
    g = gens[index - 1]
    if mode == "drop":
        del gens[index - 1]
    else:
        slots = [list(s) for s in g.field.slots]
        nvars = slots[0][0].nvars
        slots[0][0] = slots[0][0] + Poly.one(nvars)
        gens[index - 1] = Generator(type(g.field)(slots), g.preimage, g.origin + "*")
    return replace(G, generators=gens)


# -- text rendering ---------------------------------------------------------

def _text_field(rendered):
    return " | ".join("(" + ", ".join(slot) + ")" for slot in rendered)


def render_text(doc):
    lines = [f"germ: n={doc['n']} p={doc['p']} r={doc['r']}"]
    for k, (dl, phi, dk) in enumerate(zip(doc["delta"], doc["phi"], doc["d_branch"]), start=1):
        lines.append(f"branch {k}: delta={dl} phi={{{', '.join(phi)}}} d={dk}")
    lines.append(f"d={doc['d']} ell={doc['ell']} (certified at jet order {doc['jet_order_used']})")
    gen = doc.get("generators")
    if gen:
        c = gen["counts"]
        lines.append(
            f"|L|={c['L']} |H|={c['H']} ({c['H_distinct']} distinct) m={c['m']} generators={c['generators']}"
        )
        if gen["pruned_at"] is not None:
            lines.append(f"pruned at jet order {gen['pruned_at']} (heuristic)")
        for g in gen["module"]:
            lines.append(f"  {g['origin']}: {_text_field(g['field'])}")
        lines.append("lowerable generators:")
        for low in gen["lowerable"]:
            lines.append("  " + " | ".join(low))
    ver = doc.get("verify")
    if ver:
        lines.append(f"verification at orders {ver['orders']}: {ver['verdict']}")
        for chk in ver["checks"]:
            if not chk["passed"]:
                w = _text_field(chk["witness"]) if chk.get("witness") else ""
                lines.append(f"  FAIL {chk['name']} N={chk['order']} {chk.get('detail', '')} witness {w}")
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lowerable",
        description="Generators of TR_e(f) ∩ TL_e(f) and lowerable vector fields of polynomial multigerms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("analyze", "local algebras, delta, and the certified determinacy order"),
        ("generators", "generating sets and lowerable vector fields"),
        ("verify", "check generators against the brute-force jet oracle"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--ell-max", type=int)
        p.add_argument("--delta-max", type=int)
        p.add_argument("--jet-order", type=int, action="append", dest="jet_orders")
        p.add_argument("--prune", action="store_true", default=None)
        p.add_argument("--format", choices=["json", "text"], default="text")
        p.add_argument("-o", "--output")
        p.add_argument("--inject-fault", type=int, help=argparse.SUPPRESS)
        p.add_argument("--fault-mode", choices=["perturb", "drop"], default="perturb", help=argparse.SUPPRESS)
    return parser


def _emit(doc, args):
    if args.format == "json":
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    else:
        text = render_text(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(args) -> int:
    f, options = load_germ_file(args.file)
    ell_max = args.ell_max if args.ell_max is not None else options.get("ell_max", DEFAULT_ELL_MAX)
    delta_max = args.delta_max if args.delta_max is not None else options.get("delta_max", DEFAULT_DELTA_MAX)
    if ell_max < 1 or delta_max < 1:
        raise InputError("--ell-max and --delta-max must be positive")
    do_prune = args.prune if args.prune is not None else options.get("prune", False)

    algebras, cert = analyze(f, delta_max, ell_max)
    doc = analysis_json(f, algebras, cert)
    if args.command == "analyze":
        _emit(doc, args)
        return EXIT_OK

    G = assemble(f, algebras, cert)
    if do_prune:
        G = prune(G, f)
    if args.inject_fault is not None:
        G = inject_fault(G, args.inject_fault, args.fault_mode)
    doc["generators"] = generators_json(G)

    status = EXIT_OK
    if args.command == "verify" or do_prune or args.inject_fault is not None:
        orders = args.jet_orders or options.get("verify_orders") or default_orders(cert.ell)
        low = [N for N in orders if N < cert.ell]
        if low:
            raise InputError(f"jet orders {low} are below ell={cert.ell}")
        report = verify_generators(f, G, orders)
        doc["verify"] = report.to_json()
        if not report.passed:
            status = EXIT_MISMATCH
    _emit(doc, args)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotFinitelyDetermined, DeltaNotCertified) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DETERMINED


if __name__ == "__main__":
    sys.exit(main())
