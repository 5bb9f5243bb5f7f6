"""Command-line front end.

Exit codes: 0 when the command ran and its verdict is positive (or the
command is purely informational), 1 when a verdict is "invalid"/"no" or
a domain error occurred, 2 on usage or parse errors.  ``--format
structured`` emits a JSON document on stdout instead of text lines.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import HolonetError, ParseError
from .gerbe import flatten, validate_gerbe
from .lifting import lift_search, lift_via_det_section
from .netbundle import (
    chern_c1,
    equivalent,
    gauge_reduction_check,
    holonomy,
    morphism_dim,
    quotient_holonomy,
    reconstruct,
    sections_dim,
    validate_cocycle,
)
from .poset import path_frame, pi1_presentation
from .tannaka import (
    check_symmetry_axioms,
    conjugate_solution,
    dual_recover_in_ambient,
    intertwiner_basis,
    normalizer_membership,
    tannaka_dual_membership,
)
from .unitary import DEFAULT_EPS, SpecialFiber

# exit codes
OK, NO, USAGE = 0, 1, 2


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=DEFAULT_EPS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--rmax", type=int, default=3)
    common.add_argument("--budget", type=int, default=1_000_000)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    parser = argparse.ArgumentParser(
        prog="holonet",
        description="poset holonomy, lifting, duality and gerbe computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = cmd("simplices", help="enumerate the 1- and 2-simplices of a poset")
    p.add_argument("poset")

    p = cmd("pi1", help="reduced presentation of the fundamental group")
    p.add_argument("poset")
    p.add_argument("--base", required=True)

    p = cmd("check-cocycle", help="validate the 1-cocycle law")
    p.add_argument("cocycle")

    p = cmd("holonomy", help="holonomy representation of a cocycle")
    p.add_argument("cocycle")
    p.add_argument("--base", required=True)

    p = cmd("reconstruct", help="cocycle with a prescribed holonomy")
    p.add_argument("holonomy")

    p = cmd("equivalent", help="search for a conjugating unitary")
    p.add_argument("first")
    p.add_argument("second")

    p = cmd("chern", help="determinant of each generator image")
    p.add_argument("holonomy")

    p = cmd("sections", help="dimension of the joint fixed space")
    p.add_argument("holonomy")

    p = cmd("morphisms", help="dimension of the intertwiner space")
    p.add_argument("first")
    p.add_argument("second")

    p = cmd("quotient", help="reinterpret a holonomy modulo a fiber")
    p.add_argument("holonomy")
    p.add_argument("--fiber", required=True,
                   help="group file, or special:<d> / scalar:<d>")

    p = cmd("gauge-check", help="do the values normalize the group?")
    p.add_argument("values", help="cocycle or holonomy file")
    p.add_argument("group")

    p = cmd("lift", help="lift a quotient holonomy through the normalizer")
    p.add_argument("problem")

    p = cmd("intertwiners", help="intertwiner space of tensor powers")
    p.add_argument("group")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)

    p = cmd("symmetry-check", help="verify the flip coherence identities")
    p.add_argument("-d", type=int, required=True)

    p = cmd("conjugates", help="canonical conjugate-equation solution")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--group")

    p = cmd("normalizer", help="does the unitary normalize the group?")
    p.add_argument("group")
    p.add_argument("matrix")

    p = cmd("dual-membership", help="does the unitary fix all intertwiners?")
    p.add_argument("group")
    p.add_argument("matrix")

    p = cmd("dual-recover", help="dual-group members inside an ambient group")
    p.add_argument("group")
    p.add_argument("ambient")

    p = cmd("gerbe-validate", help="validate a gerbe cochain")
    p.add_argument("gerbe")

    p = cmd("gerbe-flatten", help="flatten a gerbe cochain to a cocycle")
    p.add_argument("gerbe")
    p.add_argument("--base")

    return parser


def _fiber_arg(spec, eps):
    if ":" in spec:
        kind, _, dim = spec.partition(":")
        if kind == "special":
            return SpecialFiber(int(dim))
        if kind == "scalar":
            from .unitary import ScalarFiber

            return ScalarFiber(int(dim))
        raise ParseError(f"unknown fiber spec {spec!r}")
    return io.group_from_data(io.load_document(spec), eps)


def _simplex_str(b):
    return f"({b.d0},{b.d1};{b.support})"


def _run(args):
    """Execute one parsed command; returns (exit_code, report dict, text lines)."""
    eps = args.eps

    if args.command == "simplices":
        poset = io.poset_from_data(io.load_document(args.poset))
        s1, s2 = poset.simplices1(), poset.simplices2()
        report = {
            "simplices1": [io._edge_to_data(b) for b in s1],
            "count1": len(s1),
            "count2": len(s2),
        }
        return OK, report, [f"1-simplices: {len(s1)}", f"2-simplices: {len(s2)}"]

    if args.command == "pi1":
        poset = io.poset_from_data(io.load_document(args.poset))
        pres = pi1_presentation(poset, args.base)
        report = {
            "generators": pres.num_generators,
            "relations": pres.num_relations,
            "generator_simplices": [io._edge_to_data(b) for b in pres.generator_simplices()],
            "relators": [list(w) for w in pres.relators],
        }
        lines = [
            f"generators: {pres.num_generators}",
            f"relations: {pres.num_relations}",
        ]
        return OK, report, lines

    if args.command == "check-cocycle":
        cocycle = io.cocycle_from_data(io.load_document(args.cocycle))
        result = validate_cocycle(cocycle, eps)
        report = {
            "valid": result.ok,
            "violations": [
                {"support": c.support, "residual": r} for c, r in result.violations
            ],
        }
        lines = [f"valid: {result.ok}", f"violations: {len(result.violations)}"]
        return (OK if result.ok else NO), report, lines

    if args.command == "holonomy":
        cocycle = io.cocycle_from_data(io.load_document(args.cocycle))
        frame = path_frame(cocycle.poset, args.base)
        rep = holonomy(cocycle, frame, eps)
        report = io.holonomy_to_data(rep)
        report["max_relation_residual"] = rep.max_relation_residual()
        lines = [f"generators: {len(rep.images)}",
                 f"max relation residual: {rep.max_relation_residual():.3g}"]
        return OK, report, lines

    if args.command == "reconstruct":
        rep = io.holonomy_from_data(io.load_document(args.holonomy))
        frame = path_frame(rep.presentation.poset, rep.presentation.base)
        report = io.cocycle_to_data(reconstruct(rep, frame))
        return OK, report, [f"entries: {len(report['entries'])}"]

    if args.command == "equivalent":
        rep1 = io.holonomy_from_data(io.load_document(args.first))
        rep2 = io.holonomy_from_data(io.load_document(args.second))
        result = equivalent(rep1, rep2, eps, seed=args.seed)
        report = {
            "equivalent": bool(result),
            "certified_distinct": result.certified_distinct,
            "detail": result.detail,
        }
        if result.witness is not None:
            report["witness"] = io.matrix_to_data(result.witness)
        lines = [f"equivalent: {bool(result)}", f"detail: {result.detail}"]
        return (OK if result else NO), report, lines

    if args.command == "chern":
        rep = io.holonomy_from_data(io.load_document(args.holonomy))
        values = chern_c1(rep)
        report = {
            "c1": [
                {"generator": j, "value": io.complex_to_data(values[g])}
                for j, g in enumerate(rep.presentation.alive)
            ]
        }
        lines = [
            f"generator {j}: {values[g]:.6g}"
            for j, g in enumerate(rep.presentation.alive)
        ] or ["trivial fundamental group"]
        return OK, report, lines

    if args.command == "sections":
        rep = io.holonomy_from_data(io.load_document(args.holonomy))
        dim = sections_dim(rep)
        return OK, {"dim": dim}, [f"dim = {dim}"]

    if args.command == "morphisms":
        rep1 = io.holonomy_from_data(io.load_document(args.first))
        rep2 = io.holonomy_from_data(io.load_document(args.second))
        dim = morphism_dim(rep1, rep2, eps)
        return OK, {"dim": dim}, [f"dim = {dim}"]

    if args.command == "quotient":
        rep = io.holonomy_from_data(io.load_document(args.holonomy))
        fiber = _fiber_arg(args.fiber, eps)
        qrep = quotient_holonomy(rep, fiber, eps)
        residuals = qrep.relation_fiber_residuals()
        report = {"relation_fiber_residuals": residuals}
        dets = {
            j: qrep.coset_invariant(g)
            for j, g in enumerate(rep.presentation.alive)
        }
        if any(v is not None for v in dets.values()):
            report["coset_determinants"] = {
                str(j): io.complex_to_data(v) for j, v in dets.items() if v is not None
            }
        lines = [f"quotient holonomy over {len(rep.images)} generators",
                 f"max relation fiber residual: {max(residuals, default=0.0):.3g}"]
        return OK, report, lines

    if args.command == "gauge-check":
        doc = io.load_document(args.values)
        if doc["kind"] == "cocycle":
            values = io.cocycle_from_data(doc)
        else:
            values = io.holonomy_from_data(doc)
        group = io.group_from_data(io.load_document(args.group), eps)
        verdict = gauge_reduction_check(values, group, eps)
        return (OK if verdict else NO), {"normalizes": verdict}, [f"normalizes: {verdict}"]

    if args.command == "lift":
        problem = io.lift_problem_from_data(io.load_document(args.problem), eps)
        if isinstance(problem.fiber, SpecialFiber):
            result = lift_via_det_section(problem, eps)
        else:
            result = lift_search(problem, eps, args.budget)
        report = {"status": result.status}
        if result.lifted:
            report["images"] = [io.matrix_to_data(m) for m in result.images]
        elif result.defects is not None:
            report["defects"] = {
                str(i): [io.matrix_to_data(m) for m in ds]
                for i, ds in result.defects.items()
            }
            report["defects_complete"] = result.defects_complete
        return (OK if result.lifted else NO), report, [f"status: {result.status}"]

    if args.command == "intertwiners":
        group = io.group_from_data(io.load_document(args.group), eps)
        space = intertwiner_basis(group, args.r, args.s, eps)
        report = {"dim": space.dim,
                  "basis": [io.matrix_to_data(t) for t in space.basis]}
        return OK, report, [f"dim = {space.dim}"]

    if args.command == "symmetry-check":
        result = check_symmetry_axioms(args.d, args.rmax, eps, args.seed)
        report = {
            "flip_involution_exact": result.flip_involution_exact,
            "unit_exact": result.unit_exact,
            "tensor_law_exact": result.tensor_law_exact,
            "naturality_residual": result.naturality_residual,
        }
        ok = result.ok and result.naturality_residual <= max(eps, 1e-10)
        lines = [f"coherence identities exact: {result.ok}",
                 f"naturality residual: {result.naturality_residual:.3g}"]
        return (OK if ok else NO), report, lines

    if args.command == "conjugates":
        group = None
        if args.group:
            group = io.group_from_data(io.load_document(args.group), eps)
        r_vec, result = conjugate_solution(args.d, group)
        report = {
            "pairing": io.matrix_to_data(r_vec),
            "left_residual": result.left_residual,
            "right_residual": result.right_residual,
            "invariance_residual": result.invariance_residual,
        }
        ok = result.ok(max(eps, 1e-12))
        lines = [f"conjugate equations hold: {ok}"]
        return (OK if ok else NO), report, lines

    if args.command == "normalizer":
        group = io.group_from_data(io.load_document(args.group), eps)
        u = io.matrix_doc_from_data(io.load_document(args.matrix))
        verdict = normalizer_membership(group, u, args.rmax, eps)
        report = {
            "member": verdict.member,
            "rmax": verdict.rmax,
            "max_evidence_residual": verdict.max_evidence_residual,
        }
        lines = [f"member: {verdict.member}",
                 f"evidence residual (rmax={verdict.rmax}): "
                 f"{verdict.max_evidence_residual:.3g}"]
        return (OK if verdict.member else NO), report, lines

    if args.command == "dual-membership":
        group = io.group_from_data(io.load_document(args.group), eps)
        u = io.matrix_doc_from_data(io.load_document(args.matrix))
        member = tannaka_dual_membership(group, u, args.rmax, eps)
        report = {"member": member, "rmax": args.rmax}
        return (OK if member else NO), report, [f"member: {member}"]

    if args.command == "dual-recover":
        group = io.group_from_data(io.load_document(args.group), eps)
        ambient = io.group_from_data(io.load_document(args.ambient), eps)
        recovered = dual_recover_in_ambient(group, ambient, args.rmax, eps)
        report = io.group_to_data(recovered)
        report["order"] = len(recovered)
        return OK, report, [f"recovered order: {len(recovered)}"]

    if args.command == "gerbe-validate":
        cochain = io.gerbe_from_data(io.load_document(args.gerbe), eps)
        result = validate_gerbe(cochain, eps)
        report = {
            "valid": result.ok,
            "normalizer_violations": len(result.normalizer_violations),
            "coboundary_violations": len(result.coboundary_violations),
            "crossed_module_residual": result.crossed_module_residual,
        }
        lines = [f"valid: {result.ok}",
                 f"crossed module residual: {result.crossed_module_residual:.3g}"]
        return (OK if result.ok else NO), report, lines

    if args.command == "gerbe-flatten":
        cochain = io.gerbe_from_data(io.load_document(args.gerbe), eps)
        pair = flatten(cochain, args.base, eps, args.budget)
        if pair is None:
            return NO, {"flattened": False}, ["flattened: False"]
        report = {
            "flattened": True,
            "cocycle": io.cocycle_to_data(pair.cocycle),
            "vertex_gauge": {
                o: io.matrix_to_data(m) for o, m in sorted(pair.vertex_gauge.items())
            },
        }
        return OK, report, ["flattened: True"]

    raise ParseError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else 0
    try:
        code, report, lines = _run(args)
    except ParseError as exc:
        print(f"error[ParseError]: {exc}", file=sys.stderr)
        return USAGE
    except HolonetError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return NO
    if args.format == "structured":
        report = {"command": args.command, "exit": code, **report}
        print(json.dumps(report, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
