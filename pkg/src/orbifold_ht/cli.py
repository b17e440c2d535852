"""Command line surface: scenario files, commands, report emission.

Scenario files are JSON with the fields name, n, complexStructure (the
2n x 2n rational matrix as a flat row-major list of "p/q" strings),
generators (name, optional order, flat row-major integer matrix) and
options (omegaCharacterSign, signConvention, closureBound).  Class
expressions use the grammar  word:component:B|Q  with B and Q comma lists
of one-based positions in the sector's fixed-index basis.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .chenruan import (
    compare_sides,
    cr_degree_dimensions,
    is_holomorphic_symplectic,
    orbifold_hodge_table,
)
from .exactfield import Matrix, QQ
from .fixedloci import (
    averaging_split_check,
    pair_data,
    quotient_decomposition,
    sector_data,
    tangent_complex_cohomology,
)
from .htspace import (
    HTClass,
    HTLabel,
    degree_dimensions,
    dimension_table,
    label_bidegree,
    label_degree,
)
from .product import middle_term_table, multiply, verify_ring_axioms
from .reporting import (
    bidegree_str,
    build_report,
    checks_payload,
    checks_section,
    emit_structured,
    emit_table,
    frac_str,
)
from .torusaction import ScenarioOptions, ScenarioError, validate_scenario


class ParseError(ValueError):
    def __init__(self, path, location, message):
        super().__init__(f"{path}: {location}: {message}")
        self.path = path
        self.location = location


class ClassParseError(ValueError):
    pass


def _parse_fraction(text, path, location):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(path, location, f"bad rational {text!r}: {exc}") from None


def _unflatten(flat, size, path, location):
    if len(flat) != size * size:
        raise ParseError(path, location,
                         f"expected {size * size} entries, got {len(flat)}")
    return [flat[i * size:(i + 1) * size] for i in range(size)]


def load_scenario(path, omega_sign=None):
    """Parse and validate a scenario file; diagnostics carry field paths."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(path, "-", str(exc)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"line {exc.lineno}", exc.msg) from None
    if not isinstance(raw, dict):
        raise ParseError(path, "$", "scenario must be a JSON object")
    for key in ("name", "n", "complexStructure", "generators"):
        if key not in raw:
            raise ParseError(path, "$", f"missing field {key!r}")
    name = raw["name"]
    n = raw["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(path, "n", "complex dimension must be a positive integer")
    size = 2 * n
    cs = raw["complexStructure"]
    if not isinstance(cs, list):
        raise ParseError(path, "complexStructure", "expected a flat array")
    flat = [_parse_fraction(e, path, f"complexStructure[{i}]")
            for i, e in enumerate(cs)]
    j_rows = _unflatten(flat, size, path, "complexStructure")
    gens = []
    for gi, gspec in enumerate(raw["generators"]):
        loc = f"generators[{gi}]"
        if not isinstance(gspec, dict) or "name" not in gspec or "matrix" not in gspec:
            raise ParseError(path, loc, "generator needs name and matrix")
        mat = gspec["matrix"]
        if not isinstance(mat, list):
            raise ParseError(path, f"{loc}.matrix", "expected a flat array")
        ints = []
        for i, e in enumerate(mat):
            if not isinstance(e, int):
                raise ParseError(path, f"{loc}.matrix[{i}]", f"expected integer, got {e!r}")
            ints.append(e)
        rows = _unflatten(ints, size, path, f"{loc}.matrix")
        gens.append((gspec["name"], rows))
    opts_raw = raw.get("options", {})
    opts = ScenarioOptions(
        omega_character_sign=(omega_sign if omega_sign is not None
                              else opts_raw.get("omegaCharacterSign", -1)),
        sign_convention=opts_raw.get("signConvention", "standard"),
        closure_bound=opts_raw.get("closureBound", 1024),
    )
    if opts.omega_character_sign not in (1, -1):
        raise ParseError(path, "options.omegaCharacterSign", "must be 1 or -1")
    if opts.sign_convention != "standard":
        raise ParseError(path, "options.signConvention",
                         f"unknown profile {opts.sign_convention!r}")
    return validate_scenario(name, n, j_rows, gens, opts)


def _sector_position_map(scenario, sector_index):
    sd = sector_data(scenario, sector_index)
    return list(sd.fixed_indices)


def parse_class_expression(scenario, text):
    """word:component:B|Q with one-based positions inside the sector basis."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ClassParseError(f"expected word:component:B|Q, got {text!r}")
    word, comp_text, sets_text = parts
    try:
        el = scenario.element(word)
    except KeyError:
        raise ClassParseError(f"unknown sector word {word!r}") from None
    sd = sector_data(scenario, el.index)
    try:
        kappa = int(comp_text)
    except ValueError:
        raise ClassParseError(f"bad component index {comp_text!r}") from None
    if not 0 <= kappa < sd.components.order:
        raise ClassParseError(
            f"component {kappa} out of range for sector {word!r} "
            f"({sd.components.order} components)")
    if "|" not in sets_text:
        raise ClassParseError("missing '|' between form and polyvector sets")
    b_text, q_text = sets_text.split("|", 1)
    fixed = _sector_position_map(scenario, el.index)

    def parse_set(chunk, label):
        if not chunk:
            return ()
        out = []
        for piece in chunk.split(","):
            try:
                pos = int(piece)
            except ValueError:
                raise ClassParseError(f"bad {label} index {piece!r}") from None
            if not 1 <= pos <= len(fixed):
                raise ClassParseError(
                    f"{label} index {pos} out of range 1..{len(fixed)}")
            out.append(fixed[pos - 1])
        if len(set(out)) != len(out):
            raise ClassParseError(f"repeated {label} index in {chunk!r}")
        return tuple(sorted(out))

    b = parse_set(b_text, "form")
    q = parse_set(q_text, "polyvector")
    return HTClass.of(scenario.field, HTLabel(el.index, kappa, b, q))


def render_label(scenario, label):
    el = scenario.elements[label.sector]
    fixed = _sector_position_map(scenario, label.sector)
    pos = {j: i + 1 for i, j in enumerate(fixed)}
    b = ",".join(str(pos[j]) for j in label.forms)
    q = ",".join(str(pos[j]) for j in label.polys)
    return f"{el.word}:{label.component}:{b}|{q}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_sectors(scenario, args):
    rows = []
    for el in scenario.elements:
        sd = sector_data(scenario, el.index)
        factors = ",".join(str(d) for d in sd.components.invariant_factors) or "1"
        rows.append([el.word, str(el.order), frac_str(sd.age), str(sd.m),
                     str(sd.c), str(sd.components.order), factors])
    payload = [{"word": r[0], "order": int(r[1]), "age": r[2], "fixedDim": int(r[3]),
                "codim": int(r[4]), "components": int(r[5]), "invariantFactors": r[6]}
               for r in rows]
    sections = [{"title": "sectors",
                 "columns": ["element", "order", "age", "dimV^g", "codim",
                             "components", "invariant-factors"],
                 "rows": rows}]
    return {"sections": sections}, {"sectors": payload}


def _cmd_ages(scenario, args):
    rows = []
    for el in scenario.elements:
        exps = sorted(scenario.char_exponent(j, el.index) for j in range(scenario.n))
        total = sum(exps, Fraction(0))
        rows.append([el.word, " ".join(frac_str(e) for e in exps), frac_str(total)])
    sections = [{"title": "ages", "columns": ["element", "exponents", "age"],
                 "rows": rows}]
    payload = [{"word": r[0], "exponents": r[1].split(" ") if r[1] else [],
                "age": r[2]} for r in rows]
    return {"sections": sections}, {"ages": payload}


def _cmd_fixed_loci(scenario, args):
    rows = []
    payload = []
    for el in scenario.elements:
        sd = sector_data(scenario, el.index)
        for kappa, rep in enumerate(sd.components.reps):
            rep_text = "(" + ",".join(frac_str(x) for x in rep) + ")"
            rows.append([el.word, str(kappa), rep_text])
            payload.append({"word": el.word, "component": kappa, "point": rep_text})
    sections = [{"title": "fixed locus components",
                 "columns": ["element", "component", "representative"],
                 "rows": rows}]
    return {"sections": sections}, {"components": payload}


def _table_payload(table, degree_table):
    keys = sorted(table)
    rows = [[frac_str(p), frac_str(q), str(table[(p, q)])] for (p, q) in keys]
    deg_rows = [[frac_str(d), str(degree_table[d])] for d in sorted(degree_table)]
    sections = [
        {"title": "bigraded dimensions", "columns": ["p", "q", "dim"], "rows": rows},
        {"title": "dimensions by total degree", "columns": ["degree", "dim"],
         "rows": deg_rows},
    ]
    payload = {
        "bigraded": [{"p": r[0], "q": r[1], "dim": int(r[2])} for r in rows],
        "byDegree": [{"degree": r[0], "dim": int(r[1])} for r in deg_rows],
    }
    return {"sections": sections}, payload


def _cmd_ht_table(scenario, args):
    table = dimension_table(scenario, args.convention)
    return _table_payload(table, degree_dimensions(scenario))


def _cmd_cr_table(scenario, args):
    return _table_payload(orbifold_hodge_table(scenario),
                          cr_degree_dimensions(scenario))


def _cmd_product(scenario, args):
    a = parse_class_expression(scenario, args.class_a)
    b = parse_class_expression(scenario, args.class_b)
    prod = multiply(scenario, a, b)
    rows = []
    for label, coeff in prod.items_sorted():
        bidegree = bidegree_str(label_bidegree(scenario, label))
        rows.append([render_label(scenario, label), repr(coeff),
                     str(label_degree(scenario, label)), bidegree])
    sections = [{"title": f"product {args.class_a} * {args.class_b}",
                 "columns": ["label", "coefficient", "degree", "bidegree"],
                 "rows": rows or [["0", "", "", ""]]}]
    payload = {"terms": [{"label": r[0], "coefficient": r[1], "degree": r[2],
                          "bidegree": r[3]} for r in rows]}
    return {"sections": sections}, payload


def _cmd_middle_term(scenario, args):
    g, h = args.pair.split(",")
    degs = [int(x) for x in args.degrees.split(",")]
    if len(degs) != 4:
        raise ClassParseError("--degrees expects p,q,p2,q2")
    table = middle_term_table(scenario, g, h, *degs)
    pd = pair_data(scenario, g, h)
    rows = [[str(i), str(dim)] for i, dim in sorted(table.items())]
    sections = [{"title": f"middle term dimensions for ({g},{h}), "
                          f"degrees {tuple(degs)}, excess rank {pd.r}, k {pd.k}",
                 "columns": ["i", "dim"], "rows": rows}]
    payload = {"excessRank": pd.r, "k": pd.k,
               "dims": [{"i": int(r[0]), "dim": int(r[1])} for r in rows]}
    return {"sections": sections}, payload


def _cmd_verify(scenario, args):
    rep = verify_ring_axioms(scenario, mode=args.mode, seed=args.seed,
                             count=args.count)
    sections = [checks_section(f"ring axioms ({rep.mode})", rep.checks)]
    payload = {"mode": rep.mode, "allPassed": rep.passed,
               "checks": checks_payload(rep.checks)}
    return {"sections": sections}, payload


def _cmd_compare(scenario, args):
    force = False if args.dims_only else None
    comp = compare_sides(scenario, structure_constants=force)
    sections = [checks_section(f"side comparison ({comp.mode})", comp.checks)]
    payload = {"mode": comp.mode, "allPassed": comp.passed,
               "globalScalar": repr(comp.global_scalar) if comp.global_scalar is not None else None,
               "checks": checks_payload(comp.checks)}
    return {"sections": sections}, payload


def _cmd_lemmas(scenario, args):
    rows = []
    all_ok = True
    for a in scenario.elements:
        for b in scenario.elements:
            g = a.matrix.to_matrix()
            h = b.matrix.to_matrix()
            qd = quotient_decomposition(g, h)
            sc = averaging_split_check(g, h)
            h0, h1 = tangent_complex_cohomology(g, h)
            expect_h1 = qd.dim_fixed_g + qd.dim_fixed_h + qd.excess_rank
            ok = (qd.is_isomorphism and sc.passed and h1 == expect_h1)
            all_ok = all_ok and ok
            rows.append([a.word, b.word, str(qd.dim_quotient),
                         f"{qd.dim_fixed_g}+{qd.dim_fixed_h}+{qd.excess_rank}",
                         "pass" if sc.passed else "fail",
                         f"({h0},{h1})",
                         "pass" if ok else "fail"])
    sections = [{"title": "structural lemmas on the lattice representation",
                 "columns": ["g", "h", "dim-quotient", "fixed+fixed+excess",
                             "split", "tangent-(h0,h1)", "status"],
                 "rows": rows}]
    payload = {"allPassed": all_ok,
               "pairs": [{"g": r[0], "h": r[1], "dimQuotient": int(r[2]),
                          "decomposition": r[3], "split": r[4],
                          "tangent": r[5], "status": r[6]} for r in rows]}
    return {"sections": sections}, payload


COMMANDS = {
    "sectors": _cmd_sectors,
    "ages": _cmd_ages,
    "fixed-loci": _cmd_fixed_loci,
    "ht-table": _cmd_ht_table,
    "cr-table": _cmd_cr_table,
    "product": _cmd_product,
    "middle-term": _cmd_middle_term,
    "verify": _cmd_verify,
    "compare": _cmd_compare,
    "lemmas": _cmd_lemmas,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="orbifold-ht",
        description="Exact calculator for orbifold polyvector-field rings "
                    "of complex-torus quotients.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("scenario", help="path to a .scenario file")
    parser.add_argument("class_a", nargs="?", help="first class expression (product)")
    parser.add_argument("class_b", nargs="?", help="second class expression (product)")
    parser.add_argument("--output", choices=["table", "structured"], default="table")
    parser.add_argument("--omega-sign", type=int, choices=[1, -1], default=None,
                        help="override the twist character sign convention")
    parser.add_argument("--convention", choices=["new", "parenthesized"],
                        default="new", help="bigrading convention for ht-table")
    parser.add_argument("--mode", default="exhaustive",
                        choices=["exhaustive", "exhaustive-deg2", "sampled"],
                        help="verification mode for verify")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--pair", default="e,e", help="g,h words for middle-term")
    parser.add_argument("--degrees", default="0,0,0,0",
                        help="p,q,p2,q2 for middle-term")
    parser.add_argument("--dims-only", action="store_true",
                        help="skip structure constants in compare")
    parser.add_argument("--timing", action="store_true",
                        help="fill the timing field in structured output")
    return parser


def run_command(args):
    scenario = load_scenario(args.scenario, omega_sign=args.omega_sign)
    if args.command == "product":
        if not args.class_a or not args.class_b:
            raise ClassParseError("product needs two class expressions")
    start = time.perf_counter()
    table_result, payload = COMMANDS[args.command](scenario, args)
    elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
    options = {"omegaCharacterSign": scenario.options.omega_character_sign,
               "signConvention": scenario.options.sign_convention}
    if args.command == "verify":
        options["mode"] = args.mode
        if args.mode == "sampled":
            options["seed"] = args.seed
            options["count"] = args.count
    if args.command == "ht-table":
        options["convention"] = args.convention
    report = build_report(args.command, scenario.name, options, payload,
                          timing_ms=elapsed_ms if args.timing else None)
    if args.output == "structured":
        return emit_structured(report)
    table_report = dict(report)
    table_report["result"] = table_result
    return emit_table(table_report)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(run_command(args))
    except (ParseError, ClassParseError, ScenarioError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
