"""
Command-line surface: one subcommand per invariant, JSON on standard output.

Every run writes {result, diagnostics, run_record}. Logs and --table output go
to standard error so standard output stays a single JSON document.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

import core
import finite_cover
import heat_trace
import hyperbolic
import mapping_torus
import nielsen
from config import SETTINGS, Settings
from errors import ConvergenceError, DelocError, DomainError, SchemaError, UnsupportedError, ValidationError
from groups import CharacterTable, GroupFactory, InducedRepData, burnside_table
from serialization import dumps, file_digest, load_json, parse_complex

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3

ZETA_TERMS = 12

# families whose subcommand may be omitted
DEFAULT_COMMANDS = {"heat-trace": "trace"}


@dataclass
class CommandOutput:
    """What a handler hands back to dispatch"""

    result: Any
    formulas: List[str]
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    oracle: Optional[Dict[str, Any]] = None
    table: Optional[pd.DataFrame] = None
    inputs: List[str] = field(default_factory=list)


def _as_complex(x: Any) -> np.ndarray:
    return np.array([complex(v) for v in np.ravel(np.asarray(x, dtype=object))])


def _oracle_report(route: str, value: Any, reference: Any) -> Dict[str, Any]:
    difference = float(np.max(np.abs(_as_complex(value) - _as_complex(reference))))
    return {"route": route, "value": reference, "difference": difference}


def _chop(value: Any, atol: float) -> complex:
    """Drop an imaginary part at rounding level"""
    value = complex(value)
    return complex(value.real, 0.0) if abs(value.imag) <= atol else value


def _inputs(args) -> List[str]:
    return [path for path in (getattr(args, "file", None), getattr(args, "rep", None)) if path]


# hyperbolic

def _geodesic(args) -> hyperbolic.GeodesicClass:
    if args.file:
        return hyperbolic.GeodesicClass.from_json(load_json(args.file))
    missing = [name for name in ("n", "k", "l", "angles") if getattr(args, name) is None]
    if missing:
        raise SchemaError(f"missing --{', --'.join(missing)} (or pass --file)", "$")
    return hyperbolic.GeodesicClass(args.n, args.k, args.l, tuple(args.angles))


def _hyperbolic_torsion(args, settings: Settings) -> CommandOutput:
    g = _geodesic(args)
    out = CommandOutput(hyperbolic.torsion_closed(g), ["hyperbolic.torsion_closed"],
                        {"geodesic": g.to_json()}, inputs=_inputs(args))
    if args.oracle:
        value = core.torsion_integral(hyperbolic.selberg_torsion_series(g), settings.atol)
        out.oracle = _oracle_report("selberg_quadrature", out.result, value)
    return out


def _hyperbolic_eta(args, settings: Settings) -> CommandOutput:
    g = _geodesic(args)
    out = CommandOutput(hyperbolic.eta_closed(g), ["hyperbolic.eta_closed"], {"geodesic": g.to_json()},
                        inputs=_inputs(args))
    if args.oracle:
        if g.n % 2 == 0:
            out.diagnostics["oracle_skipped"] = "eta vanishes identically for even n"
        else:
            value = core.eta_integral(hyperbolic.millson_eta_sampler(g), settings.atol)
            out.oracle = _oracle_report("millson_quadrature", out.result, value)
    return out


def _hyperbolic_betti(args, settings: Settings) -> CommandOutput:
    g = _geodesic(args)
    out = CommandOutput(hyperbolic.hyperbolic_betti(g, args.p), ["hyperbolic.betti_vanishing"],
                        {"geodesic": g.to_json(), "p": args.p}, inputs=_inputs(args))
    profile = hyperbolic.betti_decay_profile(g, args.p)
    out.diagnostics["decay_rate"] = profile.attrs.get("rate")
    out.table = profile
    if args.oracle:
        out.oracle = _oracle_report("heat_trace_at_largest_t", out.result, profile["value"].iloc[-1])
    return out


def _hyperbolic_recover_length(args, settings: Settings) -> CommandOutput:
    g = _geodesic(args)
    if args.r_max < args.r_min:
        raise DomainError(f"--r-max {args.r_max} is below --r-min {args.r_min}")
    values = [(r, hyperbolic.torsion_closed(hyperbolic.power_class(g, r)))
              for r in range(args.r_min, args.r_max + 1)]
    estimate = hyperbolic.recover_length(values, g.n, method=args.method)
    out = CommandOutput(estimate.length, ["hyperbolic.torsion_closed", "hyperbolic.length_asymptotics"],
                        estimate.to_dict(), table=estimate.table, inputs=_inputs(args))
    if args.oracle:
        out.oracle = _oracle_report("input_length", estimate.length, g.l)
    return out


# mapping torus

def _action(args) -> mapping_torus.CohomologyAction:
    return mapping_torus.CohomologyAction.from_json(load_json(args.file))


def _mapping_torus_torsion(args, settings: Settings) -> CommandOutput:
    action = _action(args)
    out = CommandOutput(mapping_torus.torsion_k(action, args.k), ["mapping_torus.torsion_cohomology"],
                        {"dims": action.dims, "unit_circle_spectrum": action.has_unit_circle_spectrum()},
                        table=mapping_torus.spectrum_table(action, args.k), inputs=[args.file])
    if args.oracle:
        value = mapping_torus.fourier_torsion_oracle(action, args.k, tolerance=settings.atol)
        out.oracle = _oracle_report("fourier_of_log_zeta", out.result, value)
    return out


def _mapping_torus_lefschetz(args, settings: Settings) -> CommandOutput:
    action = _action(args)
    out = CommandOutput(mapping_torus.lefschetz_number(action, args.k), ["mapping_torus.lefschetz"],
                        {"dims": action.dims}, inputs=[args.file])
    if args.oracle:
        zeta = mapping_torus.zeta_rational(action)
        value = args.k * zeta.log_coefficients(args.k)[args.k - 1]
        out.oracle = _oracle_report("zeta_log_series", out.result, value)
    return out


def _mapping_torus_zeta(args, settings: Settings) -> CommandOutput:
    action = _action(args)
    zeta = mapping_torus.zeta_rational(action)
    logs = zeta.log_coefficients(args.terms)
    result = zeta.to_json()
    result["log_coefficients"] = logs
    out = CommandOutput(result, ["mapping_torus.milnor_determinant"], {"exact": zeta.exact}, inputs=[args.file])
    if args.oracle:
        lefschetz = [mapping_torus.lefschetz_number(action, k) for k in range(1, args.terms + 1)]
        out.oracle = _oracle_report("lefschetz_numbers", [k * c for k, c in enumerate(logs, start=1)], lefschetz)
    return out


def _mapping_torus_eta(args, settings: Settings) -> CommandOutput:
    supertrace = complex(args.supertrace, args.supertrace_imag)
    out = CommandOutput(mapping_torus.atiyah_bott_eta(supertrace, args.k), ["mapping_torus.suspended_dirac_eta"],
                        {"supertrace": supertrace, "k": args.k})
    if args.oracle:
        # the supertrace on Ker(D_Z) is index data the cohomology action does not determine
        out.diagnostics["oracle_skipped"] = "no independent route from a caller-supplied supertrace"
    return out


# nielsen

def _complex(args) -> nielsen.EquivariantComplex:
    return nielsen.EquivariantComplex.from_json(load_json(args.file))


def _rep(args, X: nielsen.EquivariantComplex) -> InducedRepData:
    if not args.rep:
        return InducedRepData.trivial(X.group, X.alpha, args.phase)
    return InducedRepData.from_json(X.group, X.alpha, load_json(args.rep))


def _element(X: nielsen.EquivariantComplex, token: str) -> int:
    labels = list(X.group.labels)
    if token in labels:
        return labels.index(token)
    if token.isdigit() and int(token) < X.group.order:
        return int(token)
    raise SchemaError(f"unknown element {token!r}; labels are {labels}", "$.f")


def _nielsen_index(args, settings: Settings) -> CommandOutput:
    X = _complex(args)
    table = nielsen.index_table(X, args.k)
    if args.f is not None:
        result = nielsen.nielsen_index(X, args.k, _element(X, args.f))
    else:
        result = {label: int(v) for label, v in table["index"].items()}
    out = CommandOutput(result, ["nielsen.class_index"], {"group_order": X.group.order, "k": args.k},
                        table=table, inputs=_inputs(args))
    if args.oracle and args.k >= 1:
        trivial = InducedRepData.trivial(X.group, X.alpha)
        total = sum(nielsen.alternating_coefficient_sum(X, f, args.k) for f in X.group.elements)
        out.oracle = _oracle_report("trivial_rep_lefschetz", total, nielsen.twisted_lefschetz(X, trivial, args.k))
    return out


def _nielsen_lefschetz(args, settings: Settings) -> CommandOutput:
    X = _complex(args)
    rep = _rep(args, X)
    out = CommandOutput(nielsen.twisted_lefschetz(X, rep, args.r),
                        ["nielsen.twisted_lefschetz", "nielsen.index_expansion"],
                        {"rep_dimension": rep.dimension, "j": rep.j}, inputs=_inputs(args))
    if args.oracle:
        zeta = nielsen.zeta_rho(X, rep, terms=max(args.r, 1))
        out.oracle = _oracle_report("zeta_rho_log_series", out.result, args.r * zeta.log_coefficients(args.r)[-1])
    return out


def _nielsen_zeta(args, settings: Settings) -> CommandOutput:
    X = _complex(args)
    rep = _rep(args, X)
    zeta = nielsen.zeta_rho(X, rep, terms=args.terms)
    result = zeta.to_json()
    result["log_coefficients"] = zeta.log_coefficients(args.terms)
    out = CommandOutput(result, ["nielsen.zeta_rho"], {"exact": zeta.exact, "j": rep.j}, inputs=_inputs(args))
    if args.oracle:
        series = [k * c for k, c in enumerate(result["log_coefficients"], start=1)]
        lefschetz = [nielsen.twisted_lefschetz(X, rep, r) for r in range(1, args.terms + 1)]
        out.oracle = _oracle_report("twisted_lefschetz", series, lefschetz)
    return out


def _nielsen_pairing(args, settings: Settings) -> CommandOutput:
    X = _complex(args)
    if args.theta is not None:
        if args.rep:
            raise SchemaError("--theta and --rep are exclusive", "$.theta")
        result = nielsen.pairing_on_circle(X, args.theta)
    else:
        result = nielsen.zeta_pairing(X, _rep(args, X))
    out = CommandOutput(result, ["nielsen.zeta_pairing"], {"theta": args.theta}, inputs=_inputs(args))
    if args.oracle:
        if X.group.order != 1 or args.theta is None:
            out.diagnostics["oracle_skipped"] = "circle oracle needs the trivial group and --theta"
        else:
            value = mapping_torus.circle_torsion(nielsen.cochain_action(X), args.theta)
            out.oracle = _oracle_report("cochain_circle_torsion", result, value)
    return out


def _nielsen_recover(args, settings: Settings) -> CommandOutput:
    X = _complex(args)
    values = nielsen.recover_torsion_trivial_group(X, args.ks, tolerance=settings.atol)
    out = CommandOutput({str(k): v for k, v in values.items()}, ["nielsen.zeta_pairing", "fourier_inversion"],
                        inputs=_inputs(args))
    if args.oracle:
        action = nielsen.cochain_action(X)
        direct = [mapping_torus.torsion_k(action, k) for k in values]
        out.oracle = _oracle_report("torsion_cohomology", list(values.values()), direct)
    return out


# heat trace

def _laurent(args) -> heat_trace.LaurentMatrixComplex:
    return heat_trace.LaurentMatrixComplex.from_json(load_json(args.file))


def _class_vector(args) -> List[int]:
    return [x for part in args.m for x in part]


def _heat_trace_trace(args, settings: Settings) -> CommandOutput:
    X = _laurent(args)
    m = _class_vector(args)
    result = _chop(heat_trace.delocalized_heat_trace(X, args.p, m, args.t, args.grid, settings.atol, settings.rtol,
                                                     settings.max_grid), settings.atol)
    out = CommandOutput(result, ["heat_trace.fourier_coefficient"], {"t": args.t, "m": m, "p": args.p},
                        inputs=[args.file])
    if args.oracle:
        finer = heat_trace.delocalized_heat_trace(X, args.p, m, args.t, 4 * args.grid, settings.atol, settings.rtol,
                                                  settings.max_grid)
        out.oracle = _oracle_report("refined_grid", result, _chop(finer, settings.atol))
    return out


def _heat_trace_betti(args, settings: Settings) -> CommandOutput:
    X = _laurent(args)
    report = heat_trace.delocalized_betti(X, args.p, _class_vector(args), args.t_max, args.grid, settings.atol,
                                          settings.rtol, settings.max_grid)
    diagnostics = report.to_dict()
    diagnostics.pop("limit")
    out = CommandOutput(_chop(report.limit, settings.atol), ["heat_trace.large_time_limit"], diagnostics,
                        table=report.table, inputs=[args.file])
    if args.oracle:
        out.oracle = _oracle_report("last_ladder_value", report.limit, report.table["value"].iloc[-1])
    return out


def _heat_trace_torsion(args, settings: Settings) -> CommandOutput:
    X = _laurent(args)
    m = _class_vector(args)
    result = _chop(heat_trace.cover_torsion(X, m, settings.atol, args.grid), settings.atol)
    out = CommandOutput(result, ["heat_trace.fourier_coefficient", "core.torsion_integral"],
                        {"m": m}, inputs=[args.file])
    if args.oracle:
        value = heat_trace.log_determinant_torsion(X, m, args.grid, settings.atol, settings.rtol, settings.max_grid)
        out.oracle = _oracle_report("log_determinant_fourier", result, _chop(value, settings.atol))
    return out


# finite cover

def _character_table(args) -> CharacterTable:
    if args.group:
        return burnside_table(GroupFactory.from_spec(args.group))
    if not args.table:
        raise SchemaError("pass --characters or --group", "$.table")
    return CharacterTable.from_json(load_json(args.table))


def _values_doc(args) -> Dict[str, Any]:
    doc = load_json(args.values)
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), list):
        raise SchemaError("expected {values: [...]}", "$.values")
    return doc


def _finite_inputs(args) -> List[str]:
    return [path for path in (args.table, args.values) if path]


def _finite_cover_to_twisted(args, settings: Settings) -> CommandOutput:
    table = _character_table(args)
    vector = finite_cover.ClassValueVector.from_json(table, _values_doc(args))
    per_rep = finite_cover.twisted_from_delocalized(vector)
    frame = pd.DataFrame({"twisted": per_rep}, index=table.rep_labels or None)
    out = CommandOutput(per_rep, ["finite_cover.character_expansion"], {"kind": vector.kind.value},
                        table=frame, inputs=_finite_inputs(args))
    if args.oracle:
        back = finite_cover.delocalized_from_twisted(table, per_rep, vector.kind)
        out.oracle = _oracle_report("inverse_solve", vector.values, back.values)
    return out


def _finite_cover_from_twisted(args, settings: Settings) -> CommandOutput:
    table = _character_table(args)
    doc = _values_doc(args)
    per_rep = [parse_complex(x, f"$.values[{i}]") for i, x in enumerate(doc["values"])]
    vector = finite_cover.delocalized_from_twisted(table, per_rep, doc.get("kind", "betti"))
    out = CommandOutput(vector.values, ["finite_cover.character_expansion"], {"kind": vector.kind.value},
                        table=vector.to_series().to_frame(), inputs=_finite_inputs(args))
    if args.oracle:
        out.oracle = _oracle_report("forward_expansion", per_rep, finite_cover.twisted_from_delocalized(vector))
    return out


# core

def _core_gaussian_moment(args, settings: Settings) -> CommandOutput:
    out = CommandOutput(core.gaussian_moment(args.l, args.c), ["core.gaussian_moment"],
                        {"l": args.l, "c": args.c})
    if args.oracle:
        value = core.gaussian_moment(args.l, args.c, method="quadrature", tolerance=settings.atol)
        out.oracle = _oracle_report("quadrature", out.result, value)
    return out


def _core_vanishing(args, settings: Settings) -> CommandOutput:
    value = core.vanishing_rules(args.d, args.kind)
    return CommandOutput(value, ["core.vanishing_rules"], {"d": args.d, "kind": args.kind, "forced": value is not None})


def _core_product(args, settings: Settings) -> CommandOutput:
    value = core.product_combinators(args.chi1, args.chi2, complex(*args.t1), complex(*args.t2),
                                     args.g1_trivial, args.g2_trivial)
    return CommandOutput(value, ["core.product_formula"],
                         {"g1_trivial": args.g1_trivial, "g2_trivial": args.g2_trivial})


def _core_dual(args, settings: Settings) -> CommandOutput:
    v = core.InvariantValue(args.kind, args.label, complex(*args.value))
    dual = core.dual_class_value(v, args.inverse_label)
    return CommandOutput(dual.value, ["core.conjugate_duality"], {"class": dual.class_label, "kind": dual.kind.value})


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", action="store_true", help="also run the independent route and report both")
    common.add_argument("--tolerance", type=float, default=None, help="override DELOC_ATOL and DELOC_RTOL")
    common.add_argument("--table", dest="print_table", action="store_true", help="print a text table to stderr")
    common.add_argument("--verbose", action="store_true", help="DEBUG logging on stderr")
    return common


def _complex_pair(text: str) -> List[float]:
    return [float(x) for x in text.split(",")][:2]


def _int_tokens(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="deloc", description="Delocalized L2-invariants")
    groups = parser.add_subparsers(dest="family", required=True)

    def leaf(sub, name: str, handler: Callable, help_text: str,
             aliases: Sequence[str] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, aliases=list(aliases))
        p.set_defaults(handler=handler)
        return p

    def geodesic_flags(p: argparse.ArgumentParser):
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=float)
        p.add_argument("--angles", type=float, nargs="+")
        p.add_argument("--file", help="geodesic class JSON {n, k, l, angles}")

    hyp = groups.add_parser("hyperbolic", help="closed hyperbolic manifolds").add_subparsers(dest="command",
                                                                                           required=True)
    geodesic_flags(leaf(hyp, "torsion", _hyperbolic_torsion, "delocalized torsion, closed form"))
    geodesic_flags(leaf(hyp, "eta", _hyperbolic_eta, "delocalized eta invariant, closed form"))
    p = leaf(hyp, "betti", _hyperbolic_betti, "delocalized Betti number and its decay")
    geodesic_flags(p)
    p.add_argument("--p", type=int, default=0)
    p = leaf(hyp, "length-spectrum", _hyperbolic_recover_length, "length from torsion on powers",
             aliases=["recover-length"])
    geodesic_flags(p)
    p.add_argument("--r-min", type=int, default=4)
    p.add_argument("--r-max", type=int, default=30)
    p.add_argument("--method", choices=["regression", "recurrence", "auto"], default="auto")

    mt = groups.add_parser("mapping-torus", help="mapping tori with Z fundamental group") \
        .add_subparsers(dest="command", required=True)
    for name, handler, help_text in (("torsion", _mapping_torus_torsion, "torsion on <k>"),
                                     ("lefschetz", _mapping_torus_lefschetz, "Lefschetz number L(phi^k)")):
        p = leaf(mt, name, handler, help_text)
        p.add_argument("--file", required=True, help="cohomology action JSON {matrices}")
        p.add_argument("--k", type=int, required=True)
    p = leaf(mt, "zeta", _mapping_torus_zeta, "rational Lefschetz zeta function")
    p.add_argument("--file", required=True)
    p.add_argument("--terms", type=int, default=ZETA_TERMS)
    p = leaf(mt, "eta", _mapping_torus_eta, "eta on <k> from the supertrace")
    p.add_argument("--supertrace", type=float, required=True)
    p.add_argument("--supertrace-imag", type=float, default=0.0)
    p.add_argument("--k", type=int, required=True)

    ni = groups.add_parser("nielsen", help="mapping tori with finite fiber group") \
        .add_subparsers(dest="command", required=True)

    def complex_flags(p: argparse.ArgumentParser, with_rep: bool = True):
        p.add_argument("--file", required=True, help="equivariant complex JSON")
        if with_rep:
            p.add_argument("--rep", help="induced representation JSON; trivial when omitted")
            p.add_argument("--phase", type=float, default=0.0, help="U = e^(i phase) for the trivial rep")

    p = leaf(ni, "index", _nielsen_index, "Nielsen indices of the twisted classes")
    complex_flags(p, with_rep=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--f", help="element label or index; all classes when omitted")
    p = leaf(ni, "lefschetz", _nielsen_lefschetz, "twisted Lefschetz number")
    complex_flags(p)
    p.add_argument("--r", type=int, required=True)
    p = leaf(ni, "zeta", _nielsen_zeta, "zeta_rho")
    complex_flags(p)
    p.add_argument("--terms", type=int, default=ZETA_TERMS)
    p = leaf(ni, "pairing", _nielsen_pairing, "ln|zeta_rho(1)|^2")
    complex_flags(p)
    p.add_argument("--theta", type=float, help="circle family U = e^(i theta) of the trivial rep")
    p = leaf(ni, "recover", _nielsen_recover, "torsion classes by Fourier inversion (trivial group)")
    complex_flags(p, with_rep=False)
    p.add_argument("--ks", type=int, nargs="+", required=True)

    ht = groups.add_parser("heat-trace", help="Z^l-covers of finite complexes") \
        .add_subparsers(dest="command", required=True)
    for name, handler, help_text in (("trace", _heat_trace_trace, "delocalized heat trace"),
                                     ("betti", _heat_trace_betti, "delocalized Betti number"),
                                     ("torsion", _heat_trace_torsion, "delocalized torsion (gapped complexes)")):
        p = leaf(ht, name, handler, help_text)
        p.add_argument("--file", required=True, help="Laurent complex JSON")
        p.add_argument("--m", type=_int_tokens, nargs="+", required=True, help="class vector: 1 0 or 1,0")
        p.add_argument("--grid", type=int, default=heat_trace.traces.MIN_GRID)
        if name != "torsion":
            p.add_argument("--p", type=int, required=True)
        if name == "trace":
            p.add_argument("--t", type=float, required=True)
        if name == "betti":
            p.add_argument("--t-max", type=float, default=heat_trace.traces.DEFAULT_T_MAX)

    fc = groups.add_parser("finite-cover", help="finite fundamental groups") \
        .add_subparsers(dest="command", required=True)
    for name, handler, help_text in (("to-twisted", _finite_cover_to_twisted, "class values -> per rep"),
                                     ("from-twisted", _finite_cover_from_twisted, "per rep -> class values")):
        p = leaf(fc, name, handler, help_text)
        p.add_argument("--characters", dest="table", help="character table JSON")
        p.add_argument("--group", help="group name; its table is computed")
        p.add_argument("--values", required=True, help="values JSON {values, kind}")

    co = groups.add_parser("core", help="generic identities").add_subparsers(dest="command", required=True)
    p = leaf(co, "gaussian-moment", _core_gaussian_moment, "Gaussian dt/t moment")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--c", type=float, default=0.0)
    p = leaf(co, "vanishing", _core_vanishing, "dimension-forced vanishing")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kind", choices=["torsion", "signature_eta"], required=True)
    p = leaf(co, "product", _core_product, "torsion of a product")
    p.add_argument("--chi1", type=int, required=True)
    p.add_argument("--chi2", type=int, required=True)
    p.add_argument("--t1", type=_complex_pair, required=True, help="re[,im]")
    p.add_argument("--t2", type=_complex_pair, required=True, help="re[,im]")
    p.add_argument("--g1-trivial", action="store_true")
    p.add_argument("--g2-trivial", action="store_true")
    p = leaf(co, "dual", _core_dual, "value on the inverse class")
    p.add_argument("--value", type=_complex_pair, required=True, help="re[,im]")
    p.add_argument("--kind", choices=[k.value for k in core.InvariantKind], default="torsion")
    p.add_argument("--label", default="g")
    p.add_argument("--inverse-label")
    return parser


def _configure_logging(verbose: bool):
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


def _run_record(argv: Sequence[str], settings: Settings, out: Optional[CommandOutput]) -> Dict[str, Any]:
    inputs = out.inputs if out else []
    return {"command": list(argv),
            "input_digest": file_digest(inputs) if inputs else None,
            "inputs": inputs,
            "tolerance": {"atol": settings.atol, "rtol": settings.rtol},
            "threads": settings.threads,
            "oracle": out.oracle if out else None,
            "formulas": out.formulas if out else []}


def _error_diagnostics(e: Exception) -> Dict[str, Any]:
    error = {"type": type(e).__name__, "message": str(e)}
    if isinstance(e, SchemaError):
        error["path"] = e.path
    if isinstance(e, ConvergenceError):
        error["partial_value"] = e.partial_value
        error["tail_estimate"] = e.tail_estimate
        error["estimates"] = e.estimates
    if isinstance(e, ValidationError):
        error["violations"] = list(getattr(e.report, "violations", []))
    return {"error": error}


def _exit_code(e: Exception) -> int:
    if isinstance(e, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(e, (SchemaError, DomainError, ValidationError, UnsupportedError, ValueError)):
        return EXIT_INPUT
    return EXIT_FAILURE


def _with_default_command(argv: Sequence[str]) -> List[str]:
    argv = list(argv)
    if argv and argv[0] in DEFAULT_COMMANDS:
        nxt = argv[1] if len(argv) > 1 else None
        if nxt is None or (nxt.startswith("-") and nxt not in ("-h", "--help")):
            argv.insert(1, DEFAULT_COMMANDS[argv[0]])
    return argv


def dispatch(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """
    Parse argv, run one subcommand and write its JSON document

    :param argv: list of str - arguments without the program name
    :param stdout: file, optional - JSON destination
    :param stderr: file, optional - error lines and --table output
    :return: int - 0 ok, 2 input error, 3 convergence failure, 1 otherwise
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(_with_default_command(argv))
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    _configure_logging(args.verbose)
    settings = SETTINGS.with_tolerance(args.tolerance)
    out = None
    try:
        out = args.handler(args, settings)
        document = {"result": out.result, "diagnostics": out.diagnostics,
                    "run_record": _run_record(argv, settings, out)}
        code = EXIT_OK
    except (DelocError, ValueError, np.linalg.LinAlgError) as e:
        logger.debug(f"{args.family} {args.command} failed", exc_info=True)
        print(f"error: {e}", file=stderr)
        document = {"result": None, "diagnostics": _error_diagnostics(e),
                    "run_record": _run_record(argv, settings, out)}
        code = _exit_code(e)
    print(dumps(document), file=stdout)
    if code == EXIT_OK and args.print_table and out.table is not None:
        with pd.option_context("display.width", 160, "display.max_columns", 20):
            print(out.table.to_string(), file=stderr)
    return code


def main():
    sys.exit(dispatch(sys.argv[1:]))
