"""Command-line interface: constructions, analyses, the census and schema export."""

from __future__ import annotations

import argparse
import json
import logging
import math
import pathlib
import sys
from collections.abc import Callable, Sequence
from typing import Any

import pydantic

from . import classify, constructions, spectral
from .cliques import (
    Clique,
    baer_subarray_check,
    classify_clique,
    max_cliques_through_zero,
    maximal_cliques_through_zero,
    nexus_check,
    strict_ekr,
)
from .errors import (
    EXIT_BAD_INPUT,
    EXIT_OK,
    InconsistencyError,
    InvalidInputError,
    NotDelsarteCliqueError,
    PeisertError,
)
from .fields import prime_power
from .graph import PeisertGraph, spectrum_verify, srg_verify
from .plane import default_basis
from .schema.config import Budget, RunConfig
from .schema.graph import GraphDescriptor
from .schema.reports import (
    AnalysisReport,
    CliqueRecord,
    CliqueSummary,
    ConstructionReport,
    ExtremalValuesReport,
    IsoReport,
)
from .schema.tower import TowerDescriptor

logger = logging.getLogger(__name__)

CONSTRUCTIONS = [
    "extremal",
    "ls",
    "y_qn",
    "xq",
    "vo_plus",
    "example_q32",
    "paley",
    "gpaley",
]
ANALYSES = ["srg", "cliques", "ekr", "maximal", "eigenfunctions", "baer"]
DEEP_CENSUS_Q = 32

SCHEMAS: dict[str, type[pydantic.BaseModel]] = {
    "tower-descriptor": TowerDescriptor,
    "graph-descriptor": GraphDescriptor,
    "run-config": RunConfig,
    "census-row": classify.CensusRow,
    "analysis-report": AnalysisReport,
    "construction-report": ConstructionReport,
    "eigenfunction-report": spectral.EigenfunctionReport,
    "iso-report": IsoReport,
    "extremal-values-report": ExtremalValuesReport,
}
ALL_NAMES = list(SCHEMAS)


def get_schema(schema_name: str) -> dict[str, Any]:
    """JSON Schema of a serialized record by name."""
    try:
        model = SCHEMAS[schema_name]
    except KeyError:
        raise InvalidInputError(f"Unknown schema: {schema_name}") from None
    return model.model_json_schema(by_alias=True)


# -- construct ------------------------------------------------------------------


def _peisert_report(
    kind: str, g: PeisertGraph, witness: frozenset[int] = frozenset()
) -> ConstructionReport:
    srg = srg_verify(g)
    spectrum_verify(g)
    checks = {"srg": True, "spectrum": True}
    extremal = None
    if witness:
        clique = classify_clique(g, witness)
        if clique.canonical:
            raise InconsistencyError(f"{kind}: the witness clique is canonical")
        checks["witness_noncanonical"] = True
        extremal = g.m == classify.closed_form_extremal_type(g.q)
    return ConstructionReport(
        kind=kind,
        descriptor=GraphDescriptor.from_graph(g),
        vertices=g.order,
        m=g.m,
        srg=srg,
        extremal=extremal,
        witness=sorted(witness) or None,
        checks=checks,
    )


def _require(value: int | None, flag: str) -> int:
    if value is None:
        raise InvalidInputError(f"{flag} is required")
    return value


def cmd_construct(
    args: argparse.Namespace, config: RunConfig
) -> list[ConstructionReport]:
    """Build a named construction and verify it."""
    kind = args.kind
    if kind == "ls":
        built = constructions.ls_graph(_require(args.p, "--p"))
        return [_peisert_report(kind, built.graph, built.witness)]
    if kind == "example_q32":
        return [
            _peisert_report(kind, built.graph, built.witness)
            for built in constructions.example_q32()
        ]
    if kind == "vo_plus":
        r, e = _require(args.r, "--r"), _require(args.e, "--e")
        form_graph = constructions.vo_plus(e, r)
        cliques = form_graph.maximal_cliques_through_zero()
        all_maximum = all(len(c) == r**e for c in cliques)
        if not all_maximum:
            raise InconsistencyError("VO+ has a maximal clique that is not maximum")
        return [
            ConstructionReport(
                kind=kind,
                vertices=form_graph.order,
                maximal_cliques_through_zero=len(cliques),
                checks={"maximal_cliques_all_maximum": all_maximum},
            )
        ]

    tower = config.tower()
    basis = default_basis(tower)
    if kind == "extremal":
        if tower.n == 1:
            built = constructions.ls_graph(tower.p)
        else:
            built = constructions.extremal_construction(tower, basis)
    elif kind == "xq":
        built = constructions.oval_graph_xq(basis)
    elif kind == "y_qn":
        p, sub = prime_power(_require(args.r, "--r"))
        if p != tower.p:
            raise InvalidInputError(f"r={args.r} is not a power of p={tower.p}")
        hyperplane = constructions.linear_hyperplane(tower, sub)
        built = constructions.y_qn(basis, hyperplane.tolist(), sub)
    elif kind == "paley":
        return [_peisert_report(kind, constructions.paley_graph(basis))]
    elif kind == "gpaley":
        graph = constructions.generalized_paley_graph(basis, _require(args.d, "--d"))
        return [_peisert_report(kind, graph)]
    else:
        raise InvalidInputError(f"unknown construction {kind!r}")
    return [_peisert_report(kind, built.graph, built.witness)]


# -- analyze ----------------------------------------------------------------------


def _read_descriptor(path: str) -> GraphDescriptor:
    text = sys.stdin.read() if path == "-" else pathlib.Path(path).read_text()
    return GraphDescriptor.model_validate_json(text)


def _is_square(q: int) -> bool:
    return math.isqrt(q) ** 2 == q


def _is_oval_graph(g: PeisertGraph) -> bool:
    if not _is_square(g.q) or g.m != math.isqrt(g.q) + 1:
        return False
    oval_graph = constructions.oval_graph_xq(g.basis).graph
    return oval_graph.directions.members == g.directions.members


def _clique_records(g: PeisertGraph, cliques: list[Clique]) -> list[CliqueRecord]:
    records = []
    for clique in cliques:
        try:
            nexus = nexus_check(g, clique) if clique.size == g.q else None
        except NotDelsarteCliqueError as exc:
            logger.warning("%s", exc)
            nexus = None
        records.append(CliqueRecord.from_clique(clique, nexus))
    return records


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> list[AnalysisReport]:
    """Run the requested analyses on a graph descriptor."""
    g = _read_descriptor(args.descriptor).to_graph()
    wanted = set(args.only or ANALYSES)
    budget = config.budget
    report = AnalysisReport(label=g.label, q=g.q, m=g.m)
    if "srg" in wanted:
        report.srg = srg_verify(g)
        report.spectrum = spectrum_verify(g)
        if not report.srg.primitive:
            logger.warning("type (%d, %d) is imprimitive", g.m, g.q)
    cliques: list[Clique] | None = None
    if "cliques" in wanted or "baer" in wanted:
        cliques = max_cliques_through_zero(g, max_nodes=budget.max_clique_nodes)
    if "cliques" in wanted and cliques is not None:
        report.cliques = _clique_records(g, cliques)
        report.clique_summary = CliqueSummary.tally(cliques)
    if "ekr" in wanted:
        holds, witness = strict_ekr(g, max_nodes=budget.max_clique_nodes)
        report.strict_ekr = holds
        if witness is not None:
            report.ekr_witness = CliqueRecord.from_clique(witness)
    if "maximal" in wanted:
        maximal = maximal_cliques_through_zero(g, max_nodes=budget.max_clique_nodes)
        report.maximal = [CliqueRecord.from_clique(c) for c in maximal]
    if "eigenfunctions" in wanted and _is_oval_graph(g):
        first = g.basis.direction_element(g.directions.sorted_members[0])
        line = g.basis.tower.mul_array(g.basis.tower.fq_elements, first)
        report.eigenfunctions = [
            spectral.build_f1(g, line.tolist(), 0).report(),
            spectral.build_f2(g).report(),
        ]
    if "baer" in wanted and cliques is not None and _is_square(g.q):
        report.baer = [baer_subarray_check(g, c) for c in cliques if not c.canonical]
    return [report]


# -- census, iso, extremal values ------------------------------------------------


def cmd_census(args: argparse.Namespace, config: RunConfig) -> list[classify.CensusRow]:
    """Census rows for q."""
    q = config.order
    max_q = DEEP_CENSUS_Q if args.deep else config.budget.max_census_q
    return classify.census(
        q,
        args.m or None,
        tower=config.tower(),
        max_q=max_q,
        max_clique_nodes=config.budget.max_clique_nodes,
        max_labeling_nodes=config.budget.max_labeling_nodes,
        workers=config.workers,
    )


def cmd_iso(args: argparse.Namespace, config: RunConfig) -> list[IsoReport]:
    """Decide isomorphism of two descriptors, optionally with a vertex map."""
    g1 = _read_descriptor(args.first).to_graph()
    g2 = _read_descriptor(args.second).to_graph()
    budget = config.budget
    if args.map:
        mapping = classify.isomorphism_map(g1, g2, max_nodes=budget.max_labeling_nodes)
        return [
            IsoReport(
                isomorphic=mapping is not None,
                mapping=None if mapping is None else mapping.tolist(),
            )
        ]
    same = classify.isomorphic(
        g1,
        g2,
        max_clique_nodes=budget.max_clique_nodes,
        max_labeling_nodes=budget.max_labeling_nodes,
    )
    return [IsoReport(isomorphic=same)]


def cmd_extremal_values(
    args: argparse.Namespace, config: RunConfig
) -> list[ExtremalValuesReport]:
    """``e_q`` and ``E_q``, from a census when q is within the cap."""
    q = config.order
    if q > config.budget.max_census_q:
        e_q = classify.verify_extremal_witness(config.tower())
        logger.info("q=%d is above the census cap; E_q is not computed", q)
        return [ExtremalValuesReport(q=q, e_q=e_q, complete=False)]
    rows = classify.census(
        q,
        range(3, q + 1),
        tower=config.tower(),
        max_q=config.budget.max_census_q,
        max_clique_nodes=config.budget.max_clique_nodes,
        max_labeling_nodes=config.budget.max_labeling_nodes,
        workers=config.workers,
    )
    e_q, e_q_max = classify.extremal_values_from_rows(rows)
    return [
        ExtremalValuesReport(
            q=q, e_q=e_q, e_q_max=e_q_max, complete=all(r.complete for r in rows)
        )
    ]


# -- plumbing -------------------------------------------------------------------


def _polynomial(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers: {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of ``peisert-ekr``."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-o", "--output", help="Output file path (if not specified, prints to stdout)"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    common.add_argument(
        "--format",
        choices=["human", "machine"],
        default="human",
        help="Aligned tables and indented JSON, or one JSON record per line",
    )
    common.add_argument("--q", type=int, help="Order of F_q")
    common.add_argument("--p", type=int, help="Characteristic")
    common.add_argument("--n", type=int, help="Degree of F_q over F_p")
    common.add_argument("--max-clique-nodes", type=int)
    common.add_argument("--max-labeling-nodes", type=int)
    common.add_argument("--max-census-q", type=int)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--modulus", type=_polynomial, help="e.g. 1,1,0,0,1")
    common.add_argument("--fq-modulus", type=_polynomial)
    common.add_argument("--fq2-modulus", type=_polynomial)

    parser = argparse.ArgumentParser(
        prog="peisert-ekr",
        description="Peisert-type graphs: constructions, cliques and the census",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser(
        "construct", parents=[common], help="Build a construction"
    )
    construct.add_argument("kind", choices=CONSTRUCTIONS)
    construct.add_argument("--r", type=int, help="Order of the subfield F_r")
    construct.add_argument("--e", type=int, help="Half the dimension of VO+")
    construct.add_argument(
        "--d", type=int, help="Power for the generalized Paley graph"
    )

    analyze = sub.add_parser("analyze", parents=[common], help="Analyze a descriptor")
    analyze.add_argument("descriptor", help="Graph descriptor JSON file, - for stdin")
    analyze.add_argument("--only", action="append", choices=ANALYSES)

    census = sub.add_parser("census", parents=[common], help="Isomorphism census for q")
    census.add_argument("--m", type=int, action="append", help="Restrict to these m")
    census.add_argument(
        "--deep", action="store_true", help=f"Allow q up to {DEEP_CENSUS_Q}"
    )

    iso = sub.add_parser("iso", parents=[common], help="Compare two descriptors")
    iso.add_argument("first")
    iso.add_argument("second")
    iso.add_argument("--map", action="store_true", help="Emit an explicit vertex map")

    sub.add_parser("extremal-values", parents=[common], help="Print e_q and E_q")

    schema = sub.add_parser("schema", parents=[common], help="Export a JSON Schema")
    schema.add_argument(
        "schema",
        choices=ALL_NAMES,
        help=f"Schema to export as JSON Schema ({' or '.join(ALL_NAMES)})",
    )
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    budget = {
        key: value
        for key, value in (
            ("max_clique_nodes", args.max_clique_nodes),
            ("max_labeling_nodes", args.max_labeling_nodes),
            ("max_census_q", args.max_census_q),
        )
        if value is not None
    }
    return RunConfig(
        command=args.command,
        q=args.q,
        p=args.p,
        n=args.n,
        budget=Budget(**budget),
        output_format=args.format,
        output=args.output,
        workers=args.workers,
        modulus=args.modulus,
        fq_modulus=args.fq_modulus,
        fq2_modulus=args.fq2_modulus,
    )


def _render(records: Sequence[pydantic.BaseModel], fmt: str) -> str:
    if fmt == "machine":
        return "".join(r.model_dump_json(by_alias=True) + "\n" for r in records)
    dumped = [r.model_dump(mode="json", by_alias=True) for r in records]
    return json.dumps(dumped[0] if len(dumped) == 1 else dumped, indent=2) + "\n"


Command = Callable[[argparse.Namespace, RunConfig], Sequence[pydantic.BaseModel]]

COMMANDS: dict[str, Command] = {
    "construct": cmd_construct,
    "analyze": cmd_analyze,
    "census": cmd_census,
    "iso": cmd_iso,
    "extremal-values": cmd_extremal_values,
}


def run(args: argparse.Namespace) -> str:
    """Execute a parsed command and return its rendered output."""
    if args.command == "schema":
        return json.dumps(get_schema(args.schema), indent=2) + "\n"
    config = _config(args)
    records = COMMANDS[args.command](args, config)
    if args.command == "census" and config.output_format == "human":
        return classify.format_census_table(config.order, records)
    return _render(records, config.output_format)


def _validation_message(exc: pydantic.ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "input"
    return f"{location}: {first['msg']}"


def main(argv: Sequence[str] | None = None) -> int:
    """Main."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )
    try:
        result = run(args)
    except PeisertError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except pydantic.ValidationError as exc:
        print(f"error[bad-input]: {_validation_message(exc)}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"error[bad-input]: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.output:
        with open(args.output, "w") as f:
            f.write(result)
        print(f"Results written to {args.output}")
    else:
        sys.stdout.write(result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
