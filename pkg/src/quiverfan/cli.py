"""Command-line front end: JSON in, JSON out, exact numbers only.

Every run prints a single JSON document, including error runs, which print
{"error": <code>, "detail": <text>}.  Exit status is 0 on success, 1 on
I/O, usage or schema problems, and 2 on domain errors such as a weight on
a wall.  Identical inputs produce byte-identical output; the only
randomized piece, the Monte-Carlo cover check of the fan, runs only when
an explicit seed is given.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra, cohomology, fan as fan_mod, lattice, stability
from .errors import MalformedInput, QuiverFanError
from .quiver import Quiver, Weight, canonical_weight, parse_quiver, parse_scalar


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc


def _load_quiver(path: str) -> Quiver:
    return parse_quiver(_load_json(path))


def _load_weight(quiver: Quiver, spec: str) -> Weight:
    if spec == "canonical":
        return canonical_weight(quiver)
    raw = _load_json(spec)
    if not isinstance(raw, dict):
        raise MalformedInput("weight file must be a JSON object mapping vertex to integer")
    values = {}
    for vertex, value in raw.items():
        values[vertex] = parse_scalar(value)
    weight = Weight.from_mapping(quiver, values)
    if not weight.is_integral:
        raise MalformedInput("weight files must contain integers")
    return weight


def _polytope_doc(quiver, weight, trace=False):
    polytope = lattice.flow_polytope(quiver, weight)
    vertices = lattice.polytope_vertices(polytope, weight)
    points = lattice.lattice_points(polytope)
    doc = {
        "weight": weight.to_json_dict(),
        "constrained_arrows": list(polytope.constrained),
        "bounded": polytope.bounded,
        "vertices": [[int(x) for x in v.values] for v in vertices.values()],
        "lattice_point_count": points.count,
        "interior_point_count": points.interior_count,
    }
    if trace:
        doc["vertex_trees"] = {" ".join(tree): [int(x) for x in v.values] for tree, v in vertices.items()}
        doc["lattice_points"] = [[int(x) for x in p.values] for p in points.points]
    return doc


def _fan_doc(quiver, weight, seed=None, trace=False):
    built = fan_mod.build_fan(quiver, weight)
    checks = fan_mod.fan_checks(built)
    doc = built.to_json_dict(checks)
    doc["pairwise_intersections_ok"] = checks.pairwise_intersections_ok
    if seed is not None:
        doc["monte_carlo_cover_ok"] = fan_mod.monte_carlo_cover_check(built, seed)
    if trace:
        doc["offending"] = list(checks.offending)
    return doc


def _report_doc(quiver, weight, seed=None, trace=False):
    position = stability.weight_position(quiver, weight)
    doc = {
        "quiver": quiver.to_json_dict(),
        "moduli_dimension": quiver.moduli_dimension,
        "weight": weight.to_json_dict(),
        "walls": [w.to_json_dict() for w in stability.enumerate_walls(quiver)],
        "position": position.to_json_dict(),
    }
    doc["polytope"] = _polytope_doc(quiver, weight, trace=trace)
    doc["reflexivity"] = lattice.reflexivity_report(quiver).to_json_dict() if weight == canonical_weight(quiver) else None
    doc["fan"] = _fan_doc(quiver, weight, seed=seed, trace=trace)
    ext = cohomology.ext_table(quiver, weight)
    doc["ext"] = ext.to_json_dict()
    end = algebra.end_algebra_report(quiver, weight)
    doc["end_algebra"] = end.to_json_dict()
    exceptional = algebra.exceptional_check(quiver, weight)
    doc["exceptional"] = exceptional.to_json_dict()
    doc["vanishing_holds"] = ext.vanishing_holds
    doc["dim_end"] = end.total_dim
    if trace:
        doc["stable_trees"] = [list(t) for t in stability.stable_trees(quiver, weight)]
    return doc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverfan",
        description="Toric geometry of quiver flow polytopes, in exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, help_text, weight=False, klass=False, pair=False):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("quiver", help="path to the quiver JSON file")
        if weight:
            p.add_argument("--weight", required=True, help="weight JSON file or the literal 'canonical'")
        if klass:
            p.add_argument("--class", dest="bundle_class", required=True,
                           help="line bundle class: weight JSON file or 'canonical'/'anticanonical'")
        if pair:
            p.add_argument("--source", required=True, help="source vertex p")
            p.add_argument("--target", required=True, help="target vertex q")
        p.add_argument("--out", help="also write the JSON document to this path")
        p.add_argument("--detail", choices=["summary", "full"], default="summary")
        p.add_argument("--trace", action="store_true", help="include intermediate artifacts")
        p.add_argument("--seed", type=int, help="seed for the randomized cross-checks")
        return p

    add("validate", "parse a quiver file and check its invariants")
    add("canonical", "print the canonical weight")
    add("walls", "list all walls (and, with --weight, which ones are hit)")
    sub.choices["walls"].add_argument("--weight", help="weight JSON file or 'canonical'")
    add("polytope", "vertices and lattice points of the flow polytope", weight=True)
    add("fan", "rays, maximal cones and smoothness/completeness checks", weight=True)
    add("cohomology", "cohomology table of a line bundle class", weight=True, klass=True)
    add("hom", "Hom dimension between two summands of the universal bundle", weight=True, pair=True)
    add("ext", "Ext table of the universal bundle", weight=True)
    add("endalg", "endomorphism algebra report", weight=True)
    add("exceptional", "strong exceptional sequence check", weight=True)
    add("report", "full pipeline: walls, polytope, fan, ext, algebra", weight=True)
    return parser


def _dispatch(args) -> dict:
    quiver = _load_quiver(args.quiver)
    trace = getattr(args, "trace", False)
    detail = getattr(args, "detail", "summary") == "full"
    verb = args.verb
    if verb == "validate":
        doc = quiver.to_json_dict()
        doc["moduli_dimension"] = quiver.moduli_dimension
        doc["valid"] = True
        return doc
    if verb == "canonical":
        return canonical_weight(quiver).to_json_dict()
    if verb == "walls":
        doc = {"walls": [w.to_json_dict() for w in stability.enumerate_walls(quiver)]}
        if getattr(args, "weight", None):
            weight = _load_weight(quiver, args.weight)
            doc["weight"] = weight.to_json_dict()
            doc["position"] = stability.weight_position(quiver, weight).to_json_dict()
        return doc

    weight = _load_weight(quiver, args.weight)
    if verb == "polytope":
        return _polytope_doc(quiver, weight, trace=trace)
    if verb == "fan":
        return _fan_doc(quiver, weight, seed=args.seed, trace=trace)
    if verb == "cohomology":
        spec = args.bundle_class
        if spec == "anticanonical":
            bundle_class = canonical_weight(quiver)
        elif spec == "canonical":
            bundle_class = -canonical_weight(quiver)
        else:
            bundle_class = _load_weight(quiver, spec)
        table = cohomology.line_bundle_cohomology(quiver, weight, bundle_class)
        return table.to_json_dict(detail=detail or trace)
    if verb == "hom":
        dim = algebra.hom_dim(quiver, weight, args.source, args.target)
        return {"source": args.source, "target": args.target, "dim": dim}
    if verb == "ext":
        return cohomology.ext_table(quiver, weight).to_json_dict()
    if verb == "endalg":
        end = algebra.end_algebra_report(quiver, weight)
        doc = end.to_json_dict()
        exceptional = algebra.exceptional_check(quiver, weight)
        doc["sequence"] = list(exceptional.sequence)
        doc["strong_exceptional"] = exceptional.is_strong_exceptional_sequence
        return doc
    if verb == "exceptional":
        return algebra.exceptional_check(quiver, weight).to_json_dict()
    if verb == "report":
        return _report_doc(quiver, weight, seed=args.seed, trace=trace)
    raise MalformedInput(f"unknown verb {verb!r}")


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help
            return 0
        print(json.dumps({"error": "usage", "detail": "bad command line"}, indent=2))
        return 1
    try:
        doc = _dispatch(args)
    except MalformedInput as exc:
        print(json.dumps({"error": exc.code, "detail": exc.detail}, indent=2))
        return 1
    except QuiverFanError as exc:
        print(json.dumps({"error": exc.code, "detail": exc.detail}, indent=2))
        return 2
    text = json.dumps(doc, indent=2)
    print(text)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
