"""Command-line entry point for eqra.

Every subcommand prints text to standard output, or JSON with ``--json``.
Certificate commands exit 0 when every check passes and 1 otherwise;
malformed input and out-of-range parameters exit 2.
"""

import asyncio
import functools
import json
import logging
import sys
from typing import Callable, List, Optional, Sequence

import click

from eqra import __version__
from eqra.algebra.finite_algebra import congruences, load_algebra, ppf_eq_certificate
from eqra.constructions.representation import represent_mn
from eqra.constructions.zp2 import emit_family, zp2_family
from eqra.core.certificate import Certificate, RunConfig
from eqra.core.verification import example_2x2, verify_all, verify_all_async, verify_lemma, verify_lemma1
from eqra.exceptions import (
    AlgebraFormatException,
    BaseTooLargeException,
    ConfigurationException,
    ConstructionException,
    EqraException,
    FormulaException,
    InvalidBaseSizeException,
    RelationFormatException,
    SizeMismatchException,
)
from eqra.lattice.eqlattice import build_lattice, extract_equivalences, mn_shape
from eqra.logic.evaluation import evaluate_binary
from eqra.logic.formulas import Structure, format_formula, fragment_report
from eqra.logic.parser import parse_formula, parse_ra_term
from eqra.logic.primitive_positive import pp_search, pp_search_async
from eqra.logic.ra_terms import evaluate_ra_term, format_ra_term, ra_term_to_fo3
from eqra.relations import relcore
from eqra.relations.closure import AtomStructure, ba_closure, ra_closure
from eqra.relations.relation_io import load_relation, load_structure, read_text, relation_to_json
from eqra.relations.relcore import BinRel
from eqra.settings import config
from eqra.utils.helpers import digest_text, generate_correlation_id
from eqra.utils.logging_config import set_correlation_id, setup_logging

logger = logging.getLogger(__name__)

USAGE_ERRORS = (
    ConfigurationException,
    ConstructionException,
    FormulaException,
    InvalidBaseSizeException,
    RelationFormatException,
    SizeMismatchException,
    AlgebraFormatException,
    BaseTooLargeException,
)

INPUT_FILE = click.Path(exists=True, dir_okay=False, allow_dash=True)


def _guard(command: Callable) -> Callable:
    """Map library errors to click: usage-type errors exit 2, the rest exit 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except USAGE_ERRORS as e:
            raise click.UsageError(f"{type(e).__name__}: {e}") from None
        except EqraException as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            sys.exit(1)

    return wrapper


def output_options(command: Callable) -> Callable:
    command = click.option("--json", "json_output", is_flag=True, help="Emit JSON instead of text.")(command)
    command = click.option("--quiet", is_flag=True, help="Print nothing; keep the exit code.")(command)
    return command


def certificate_options(command: Callable) -> Callable:
    command = output_options(command)
    command = click.option("--stable", is_flag=True, help="Report elapsed_ms as 0 for byte-stable output.")(command)
    return command


def budget_option(command: Callable) -> Callable:
    return click.option(
        "--atom-budget",
        type=click.IntRange(min=1),
        default=None,
        help=f"Maximum closure atoms (default EQRA_ATOM_BUDGET or {config.ATOM_BUDGET}).",
    )(command)


def pp_options(command: Callable) -> Callable:
    command = click.option("--max-vars", type=click.IntRange(min=2), default=config.PP_MAX_VARS, show_default=True)(command)
    command = click.option(
        "--max-constraints", type=click.IntRange(min=1), default=config.PP_MAX_CONSTRAINTS, show_default=True
    )(command)
    return command


def _echo(text: str, quiet: bool) -> None:
    if not quiet:
        click.echo(text)


def _emit_data(data: dict, text: str, json_output: bool, quiet: bool) -> None:
    _echo(json.dumps(data, sort_keys=True, indent=2) if json_output else text, quiet)


def _emit_certificate(cert: Certificate, json_output: bool, quiet: bool, stable: bool, verbose: bool = False) -> None:
    if stable:
        cert.elapsed_ms = 0
    _echo(cert.to_json() if json_output else cert.format_text(verbose), quiet)
    sys.exit(0 if cert.passed else 1)


def _describe(r: BinRel) -> str:
    if relcore.is_equivalence(r):
        return " | ".join(" ".join(str(x) for x in block) for block in relcore.classes(r))
    return " ".join(f"({a},{b})" for a, b in r.pairs())


def _load_relations(paths: Sequence[str]) -> List[BinRel]:
    return [load_relation(path) for path in paths]


def _file_inputs(paths: Sequence[str]) -> dict:
    return {path: digest_text(read_text(path)) for path in paths if path != "-"}


def _load_structure(path: str) -> Structure:
    n, relations = load_structure(path)
    return Structure(n, relations)


def _closure_data(s: AtomStructure) -> dict:
    return {
        "n": s.n,
        "atom_count": s.atom_count,
        "atom_sizes": s.atom_sizes,
        "atoms": [relation_to_json(a)["pairs"] for a in s.atoms],
        "comp_table": [[sorted(cell) for cell in row] for row in s.comp_table],
        "converse_map": list(s.converse_map),
        "identity_atoms": sorted(s.identity_atoms),
        "atom_terms": [format_ra_term(t) for t in s.atom_terms] if s.atom_terms else None,
    }


@click.group()
@click.version_option(__version__, prog_name="eqra")
@click.option("--log-level", default=None, help="Logging level (default EQRA_LOG_LEVEL).")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """Relation-algebra closures, equivalence lattices and their certificates."""
    setup_logging(level=log_level)
    set_correlation_id(generate_correlation_id(), ctx.invoked_subcommand or "eqra")


@cli.command("closure")
@click.argument("files", nargs=-1, required=True, type=INPUT_FILE)
@click.option("--boolean", is_flag=True, help="Only the Boolean closure (no refinement).")
@budget_option
@output_options
@_guard
def closure_command(files, boolean, atom_budget, json_output, quiet):
    """Atoms, composition table and converse map of the closure of relation FILES."""
    relations = _load_relations(files)
    build = ba_closure if boolean else ra_closure
    s = build(relations, atom_budget=atom_budget)
    data = _closure_data(s)
    lines = [f"n = {s.n}, {s.atom_count} atoms, sizes {s.atom_sizes}", f"identity atoms: {sorted(s.identity_atoms)}"]
    for i in range(s.atom_count):
        row = " ".join("{" + ",".join(map(str, sorted(cell))) + "}" for cell in s.comp_table[i])
        lines.append(f"atom {i}: converse {s.converse_map[i]}; row {row}")
    _emit_data(data, "\n".join(lines), json_output, quiet)


@cli.command("eq-lattice")
@click.argument("files", nargs=-1, required=True, type=INPUT_FILE)
@budget_option
@output_options
@_guard
def eq_lattice_command(files, atom_budget, json_output, quiet):
    """Equivalences in the closure of FILES, their Hasse diagram and M_n verdict."""
    s = ra_closure(_load_relations(files), atom_budget=atom_budget)
    lattice = build_lattice(extract_equivalences(s, atom_budget))
    shape = mn_shape(lattice)
    data = {
        "elements": [relation_to_json(r)["pairs"] for r in lattice.elements],
        "hasse": [list(edge) for edge in lattice.hasse_edges],
        "shape": {"n_atoms": shape.n_atoms, "atom_indices": list(shape.atom_indices)},
    }
    lines = [f"{i}: {_describe(r)}" for i, r in enumerate(lattice.elements)]
    lines.append("hasse: " + " ".join(f"{a}<{b}" for a, b in lattice.hasse_edges))
    lines.append(f"shape: {shape.describe()}")
    _emit_data(data, "\n".join(lines), json_output, quiet)


@cli.command("con")
@click.argument("algebra_file", type=INPUT_FILE)
@output_options
@_guard
def con_command(algebra_file, json_output, quiet):
    """Congruence lattice of the algebra in ALGEBRA_FILE."""
    algebra = load_algebra(algebra_file)
    con = congruences(algebra)
    shape = mn_shape(con.lattice)
    data = {
        "n": algebra.n,
        "congruences": [[list(block) for block in relcore.classes(r)] for r in con],
        "shape": shape.n_atoms,
    }
    lines = [f"{len(con)} congruences, {shape.describe()}"] + [_describe(r) for r in con]
    _emit_data(data, "\n".join(lines), json_output, quiet)


@cli.command("ppf-cert")
@click.argument("algebra_file", type=INPUT_FILE)
@click.argument("relation_files", nargs=-1, required=True, type=INPUT_FILE)
@certificate_options
@_guard
def ppf_cert_command(algebra_file, relation_files, json_output, quiet, stable):
    """Certify that the relations in RELATION_FILES are exactly Con of the algebra."""
    cert = ppf_eq_certificate(_load_relations(relation_files), load_algebra(algebra_file))
    cert.inputs["files"] = _file_inputs([algebra_file, *relation_files])
    _emit_certificate(cert, json_output, quiet, stable)


def _free_pair(free: str) -> List[str]:
    names = [v.strip() for v in free.split(",")]
    if len(names) != 2:
        raise click.BadParameter("expected two variables such as x,y", param_hint="--free")
    return names


@cli.command("eval-formula")
@click.option("--structure", "structure_file", required=True, type=INPUT_FILE)
@click.option("--formula", "text", required=True)
@click.option("--free", default="x,y", show_default=True, help="Output variables.")
@output_options
@_guard
def eval_formula_command(structure_file, text, free, json_output, quiet):
    """Evaluate a formula over a structure file as a binary relation."""
    x, y = _free_pair(free)
    formula = parse_formula(text)
    relation = evaluate_binary(formula, _load_structure(structure_file), x, y)
    report = fragment_report(formula)
    data = {
        "formula": format_formula(formula),
        "relation": relation_to_json(relation),
        "fragment": {"variable_count": report.variable_count, "is_pp": report.is_pp, "is_fo3": report.is_fo3},
    }
    text_out = (
        f"{format_formula(formula)}\n{len(relation)} pairs: {_describe(relation)}\n"
        f"variables {report.variable_count}, pp {report.is_pp}, fo3 {report.is_fo3}"
    )
    _emit_data(data, text_out, json_output, quiet)


@cli.command("eval-term")
@click.option("--structure", "structure_file", required=True, type=INPUT_FILE)
@click.option("--term", "text", required=True)
@output_options
@_guard
def eval_term_command(structure_file, text, json_output, quiet):
    """Evaluate an RA term over a structure file, with its three-variable translation."""
    term = parse_ra_term(text)
    relation = evaluate_ra_term(term, _load_structure(structure_file))
    fo3 = format_formula(ra_term_to_fo3(term))
    data = {"term": format_ra_term(term), "fo3": fo3, "relation": relation_to_json(relation)}
    text_out = f"{format_ra_term(term)}\nfo3: {fo3}\n{len(relation)} pairs: {_describe(relation)}"
    _emit_data(data, text_out, json_output, quiet)


@cli.command("pp-search")
@click.option("--structure", "structure_file", required=True, type=INPUT_FILE)
@click.option("--target", "target_file", required=True, type=INPUT_FILE)
@click.option("--symbols", default=None, help="Comma separated symbols to use (default all).")
@click.option("--no-equality", is_flag=True, help="Disallow equality constraints.")
@click.option("--parallelism", type=click.IntRange(min=1), default=config.PARALLELISM, show_default=True)
@pp_options
@output_options
@_guard
def pp_search_command(
    structure_file, target_file, symbols, no_equality, parallelism, max_vars, max_constraints, json_output, quiet
):
    """Search for a primitive positive definition of the target relation."""
    structure = _load_structure(structure_file)
    target = load_relation(target_file)
    chosen = [s.strip() for s in symbols.split(",")] if symbols else None
    if parallelism > 1:
        found = asyncio.run(
            pp_search_async(structure, target, max_vars, max_constraints, chosen, not no_equality, parallelism)
        )
    else:
        found = pp_search(structure, target, max_vars, max_constraints, chosen, not no_equality)
    budget = {"max_vars": max_vars, "max_constraints": max_constraints}
    if found is None:
        data = {"found": False, "budget": budget}
        text_out = f"not found within budget ({max_vars} variables, {max_constraints} constraints)"
    else:
        data = {"found": True, "budget": budget, "query": [list(c) for c in found.constraints], "formula": found.format()}
        text_out = found.format()
    _emit_data(data, text_out, json_output, quiet)


@cli.command("zp2")
@click.option("--p", "p", type=int, required=True, help="Prime modulus.")
@click.option("--emit-dir", type=click.Path(file_okay=False), default=None, help="Write relation files here.")
@output_options
@_guard
def zp2_command(p, emit_dir, json_output, quiet):
    """Summarise (or write out) the kernel relations of Z_p^2."""
    family = zp2_family(p)
    written = emit_family(family, emit_dir) if emit_dir else []
    named = family.named()
    data = {
        "p": p,
        "n": family.n_base,
        "relations": {name: len(relcore.classes(r)) for name, r in named.items()},
        "written": written,
    }
    lines = [f"Z_{p}^2: {family.n_base} points"]
    lines += [f"{name}: {len(relcore.classes(r))} classes of size {p}" for name, r in named.items()]
    lines += [f"wrote {path}" for path in written]
    _emit_data(data, "\n".join(lines), json_output, quiet)


@cli.command("represent-mn")
@click.argument("m", type=int)
@click.option("--prime", type=int, default=None, help="Override the modulus for m >= 3.")
@budget_option
@certificate_options
@_guard
def represent_mn_command(m, prime, atom_budget, json_output, quiet, stable):
    """Represent M_M as Eq of a finite relation algebra and certify it."""
    _emit_certificate(represent_mn(m, prime, atom_budget).certificate(), json_output, quiet, stable, verbose=True)


@cli.command("verify-lemma")
@click.option("--p", "p", type=int, default=5, show_default=True)
@certificate_options
@_guard
def verify_lemma_command(p, json_output, quiet, stable):
    """Composition of distinct kernels of Z_p^2 is universal."""
    _emit_certificate(verify_lemma(p), json_output, quiet, stable)


@cli.command("verify-lemma1")
@click.option("--p", "p", type=int, default=5, show_default=True)
@click.option("--n", "n", type=int, default=1, show_default=True)
@click.option("--unsafe", is_flag=True, help="Allow n outside 1 <= n < p - 2 (failures become info).")
@budget_option
@certificate_options
@_guard
def verify_lemma1_command(p, n, unsafe, atom_budget, json_output, quiet, stable):
    """Eq(RA(M)) = M for M = {1, 1', eta0, eta1, alpha_1..alpha_n}."""
    _emit_certificate(verify_lemma1(p, n, unsafe, atom_budget), json_output, quiet, stable)


@cli.command("example-2x2")
@pp_options
@budget_option
@certificate_options
@_guard
def example_2x2_command(max_vars, max_constraints, atom_budget, json_output, quiet, stable):
    """The 2^2 lattice example: Eq(RA(L)) gains gamma while Eq(PPF(L)) = L."""
    rc = RunConfig(
        atom_budget=atom_budget or config.ATOM_BUDGET, pp_max_vars=max_vars, pp_max_constraints=max_constraints
    )
    _emit_certificate(example_2x2(rc), json_output, quiet, stable)


@cli.command("verify-all")
@click.option("--unsafe", is_flag=True, help="Also check instances outside the lemma hypotheses (as info).")
@click.option("--parallelism", type=click.IntRange(min=1), default=config.PARALLELISM, show_default=True)
@click.option("--seed", type=int, default=config.RANDOM_SEED, show_default=True)
@pp_options
@budget_option
@certificate_options
@_guard
def verify_all_command(unsafe, parallelism, seed, max_vars, max_constraints, atom_budget, json_output, quiet, stable):
    """Run every verification section and emit one certificate."""
    rc = RunConfig(
        atom_budget=atom_budget or config.ATOM_BUDGET,
        pp_max_vars=max_vars,
        pp_max_constraints=max_constraints,
        json_output=json_output,
        unsafe=unsafe,
        parallelism=parallelism,
        seed=seed,
    )
    cert = asyncio.run(verify_all_async(rc)) if parallelism > 1 else verify_all(rc)
    _emit_certificate(cert, json_output, quiet, stable)


def run(argv: Sequence[str]) -> int:
    """Run the CLI on an argument list and return its exit code."""
    try:
        cli.main(args=list(argv), prog_name="eqra", standalone_mode=True)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (0 if e.code is None else 1)
    return 0


def main() -> int:
    """Console script entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
