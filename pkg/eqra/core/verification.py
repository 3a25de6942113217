"""Verification suites for the Z_p^2 construction, the 2^2 example and the logic engines.

Every suite returns Check lists; the ``verify_*`` functions wrap them into
Certificates. Exceptions raised inside a section of ``verify_all`` become
fail entries for that section and the remaining sections still run.
"""

import asyncio
import itertools
import logging
from typing import Callable, List, Optional, Sequence, Tuple

from eqra.algebra.finite_algebra import (
    compatibility_witness,
    congruences,
    is_compatible,
    ppf_eq_certificate,
    zp2_group_algebra,
)
from eqra.constructions.examples import example_formulas, two_by_two_example
from eqra.constructions.representation import represent_mn
from eqra.constructions.witnesses import case1_failures, case2_failures, first_failure
from eqra.constructions.zp2 import Zp2Family, lemma1_hypothesis, make_M, make_m_names, zp2_family
from eqra.core import sampling
from eqra.core.certificate import Certificate, Check, CheckStatus, RunConfig, check
from eqra.exceptions import EqraException
from eqra.lattice.eqlattice import build_lattice, extract_equivalences, lattices_equal, mn_shape
from eqra.logic.evaluation import evaluate_binary
from eqra.logic.formulas import Structure, format_formula, fragment_report
from eqra.logic.parser import parse_formula, parse_ra_term
from eqra.logic.primitive_positive import pp_evaluate, pp_search, pp_to_formula
from eqra.logic.ra_terms import FO3_VARIABLES, evaluate_ra_term, format_ra_term, ra_term_to_fo3
from eqra.relations import relcore
from eqra.relations.closure import AtomStructure, ba_closure, decompose, invariant_violations, ra_closure
from eqra.relations.relation_io import relation_to_json
from eqra.relations.relcore import BinRel
from eqra.settings import config
from eqra.utils.helpers import Timer
from eqra.utils.logging_config import log_section

logger = logging.getLogger(__name__)

LEMMA_PRIMES = (5, 7)
LEMMA1_INSTANCES = ((5, 1), (5, 2), (7, 1), (7, 2), (7, 3), (7, 4))
UNSAFE_INSTANCES = ((5, 3), (7, 5))
REPRESENTED_M = tuple(range(1, 9))
CON_PRIMES = (2, 3, 5, 7)

Section = Tuple[str, Callable[[], List[Check]]]


def _kernel_names(family: Zp2Family) -> List[Tuple[str, BinRel]]:
    return [("eta0", family.eta0), ("eta1", family.eta1)] + [
        (f"alpha{k}", r) for k, r in enumerate(family.alpha, start=1)
    ]


def _missing_pair(family: Zp2Family, r: BinRel) -> Optional[List[str]]:
    missing = relcore.difference(relcore.universal(family.n_base), r).pairs()
    if not missing:
        return None
    a, b = missing[0]
    return [family.format_point(a), family.format_point(b)]


def lemma_checks(p: int) -> List[Check]:
    """a ; b is universal for distinct kernels a, b, by brute force and by the witness formulas."""
    family = zp2_family(p)
    universal = relcore.universal(family.n_base)
    checks = []
    for (name_a, a), (name_b, b) in itertools.combinations(_kernel_names(family), 2):
        forward, backward = relcore.compose(a, b), relcore.compose(b, a)
        ok = forward == universal and backward == universal
        witness = None if ok else _missing_pair(family, forward if forward != universal else backward)
        checks.append(check(f"lemma.p{p}.{name_a}.{name_b}", ok, f"{name_a};{name_b} and {name_b};{name_a} universal", witness))
    for coordinate in (0, 1):
        failures = case1_failures(p, coordinate)
        checks.append(
            check(
                f"lemma.p{p}.witness.eta{coordinate}_alpha",
                not failures,
                f"case 1 witness valid and distinct for all k, u, v ({len(failures)} failures)",
                first_failure(failures),
            )
        )
    failures = case2_failures(p)
    checks.append(
        check(
            f"lemma.p{p}.witness.alpha_alpha",
            not failures,
            f"case 2 witness valid and distinct for all i != j, u, v ({len(failures)} failures); "
            "y1 = j(y0 - v0) + v1",
            first_failure(failures),
        )
    )
    return checks


def verify_lemma(p: int) -> Certificate:
    with Timer() as timer:
        checks = lemma_checks(p)
    return Certificate("verify-lemma", {"p": p}, checks, timer.elapsed_ms)


def _atom_of(s: AtomStructure, r: BinRel) -> Optional[int]:
    atoms = decompose(s, r)
    if atoms is None or len(atoms) != 1:
        return None
    return next(iter(atoms))


def lemma1_checks(p: int, n: int, unsafe: bool = False, atom_budget: Optional[int] = None) -> List[Check]:
    """Eq(RA(M)) = M for M = make_M(p, n), with the atom identities behind it.

    Outside 1 <= n < p - 2 (only with ``unsafe``) failures are reported as info.
    """
    info = not lemma1_hypothesis(p, n)
    tag = f"lemma1.p{p}.n{n}"
    family = zp2_family(p)
    generators = make_M(p, n, unsafe=unsafe)
    names = make_m_names(n)
    s = ra_closure(generators, names, atom_budget)
    boolean = ba_closure(generators, names, atom_budget)
    eqs = extract_equivalences(s, atom_budget)
    identity = relcore.identity(family.n_base)

    extra = [relation_to_json(r)["pairs"] for r in eqs if r not in set(generators)]
    checks = [
        check(f"{tag}.eq_equals_M", lattices_equal(eqs, generators), f"{len(eqs)} equivalences in RA(M)", extra or None, info),
        check(f"{tag}.atom_count", s.atom_count == n + 4, f"{s.atom_count} atoms, expected {n + 4}", None, info),
        check(f"{tag}.ba_equals_ra", boolean.atoms == s.atoms, f"BA(M) has {boolean.atom_count} atoms", None, info),
        check(f"{tag}.invariants", not invariant_violations(s), "atom structure invariants", invariant_violations(s) or None),
    ]

    kernels = generators[2:]
    derived = {}
    for name, g in zip(names[2:], kernels):
        atom = _atom_of(s, relcore.difference(g, identity))
        checks.append(check(f"{tag}.atom.{name}", atom is not None, f"{name} minus 1' is an atom", None, info))
        if atom is not None:
            derived[name] = atom
    for name, i in derived.items():
        a = s.atoms[i]
        ok = relcore.compose(a, a) == relcore.union(identity, a)
        checks.append(check(f"{tag}.square.{name}", ok, "a;a = 1' + a", None, info))
    for (name_a, i), (name_b, j) in itertools.combinations(derived.items(), 2):
        a, b = s.atoms[i], s.atoms[j]
        expected = relcore.complement(relcore.union_all([identity, a, b], family.n_base))
        ok = relcore.compose(a, b) == expected and relcore.compose(b, a) == expected
        checks.append(check(f"{tag}.product.{name_a}.{name_b}", ok, "a;b = complement(1' + a + b)", None, info))
        if name_a.startswith("A") and name_b.startswith("A"):
            disjoint = relcore.intersect(relcore.compose(a, b), kernels[names.index(name_a) - 2]).is_empty()
            checks.append(check(f"{tag}.disjoint.{name_a}.{name_b}", disjoint, "a;b misses alpha_i", None, info))

    expected_beta = relcore.complement(relcore.union_all([identity, *kernels], family.n_base))
    others = sorted(set(range(s.atom_count)) - set(derived.values()) - set(s.identity_atoms))
    beta = others[0] if len(others) == 1 else None
    checks.append(
        check(
            f"{tag}.beta",
            beta is not None and s.atoms[beta] == expected_beta,
            f"one further atom equal to complement(1' + eta0 + eta1 + alphas), |beta| = {len(expected_beta)}",
            None,
            info,
        )
    )
    if beta is not None:
        for k in range(s.atom_count):
            if k in s.identity_atoms:
                continue
            x = s.atoms[k]
            literal = relcore.complement(relcore.union_all([identity, s.atoms[beta], x], family.n_base))
            row = sorted(s.comp_table[beta][k])
            checks.append(
                check(
                    f"{tag}.beta_row.{k}",
                    relcore.compose(s.atoms[beta], x) == literal,
                    f"beta;atom{k} covers atoms {row}; compared with complement(1' + beta + atom{k})",
                    {"atoms": row},
                    informational=True,
                )
            )

    structure = s.structure()
    fo3_ok = all(
        evaluate_binary(ra_term_to_fo3(term), structure, *FO3_VARIABLES[:2]) == atom
        for term, atom in zip(s.atom_terms, s.atoms)
    )
    checks.append(check(f"{tag}.fo3_atoms", fo3_ok, "every atom is defined by its three-variable formula"))

    top = family.alpha_k(p - 1)
    checks.append(check(f"{tag}.alpha_top_not_member", decompose(s, top) is None, f"alpha{p - 1} is not in RA(M)", None, info))
    query = example_formulas().alpha_pp
    pp_structure = family.structure(["E0", "E1", "A1"])
    checks.append(
        check(
            f"{tag}.alpha_top_pp",
            pp_evaluate(query.constraints, pp_structure, query.x, query.y) == top,
            f"the pp query with A1 = alpha1 defines alpha{p - 1}, so Eq(PPF(M)) differs from M",
        )
    )
    return checks


def verify_lemma1(p: int, n: int, unsafe: bool = False, atom_budget: Optional[int] = None) -> Certificate:
    with Timer() as timer:
        checks = lemma1_checks(p, n, unsafe, atom_budget)
    inputs = {"p": p, "n": n, "unsafe": unsafe, "hypothesis": lemma1_hypothesis(p, n)}
    return Certificate("verify-lemma1", inputs, checks, timer.elapsed_ms)


def example_2x2_checks(rc: RunConfig) -> List[Check]:
    """The square of the two-element lattice: Eq(RA(L)) = L + {gamma}, yet Eq(PPF(L)) = L."""
    example = two_by_two_example()
    relations, gamma = list(example.relations), example.gamma
    s = ra_closure(relations, ["I", "E0", "E1", "U"], rc.atom_budget)
    eqs = extract_equivalences(s, rc.atom_budget)
    lattice = build_lattice(eqs)
    shape = mn_shape(lattice)
    formulas = example_formulas()
    report = fragment_report(formulas.gamma_fo2)

    checks = [
        check("example2x2.atoms", s.atom_count == 4, f"RA(L) has {s.atom_count} atoms"),
        check("example2x2.eq", lattices_equal(eqs, relations + [gamma]), "Eq(RA(L)) = {1', eta0, eta1, gamma, 1}"),
        check("example2x2.shape", shape.n_atoms == 3, f"Eq(RA(L)) is {shape.describe()}"),
        check("example2x2.eq_differs_from_L", not lattices_equal(eqs, relations), "gamma is the extra equivalence"),
        check("example2x2.gamma_formula", evaluate_binary(formulas.gamma_fo2, example.structure) == gamma, format_formula(formulas.gamma_fo2)),
        check(
            "example2x2.gamma_two_variables",
            report.variable_count == 2 and report.is_fo3 and not report.is_pp,
            f"{report.variable_count} variables, fo3={report.is_fo3}, pp={report.is_pp}",
        ),
        check("example2x2.gamma_term", evaluate_ra_term(formulas.gamma_term, example.structure) == gamma, format_ra_term(formulas.gamma_term)),
    ]

    witness = compatibility_witness(gamma, example.algebra)
    checks.append(check("example2x2.gamma_not_congruence", witness is not None, "gamma is not compatible", list(witness or ()) or None))
    con = congruences(example.algebra)
    checks.append(check("example2x2.con", lattices_equal(list(con), relations), f"Con(2^2) has {len(con)} congruences"))
    for item in ppf_eq_certificate(relations, example.algebra).checks:
        checks.append(Check(f"example2x2.{item.name}", item.status, item.detail, item.witness))

    found = pp_search(example.structure, gamma, rc.pp_max_vars, rc.pp_max_constraints)
    checks.append(
        check(
            "example2x2.gamma_pp_search",
            found is None,
            f"no pp definition of gamma from E0, E1 within {rc.pp_max_vars} variables and "
            f"{rc.pp_max_constraints} constraints (bounded search)",
            found.format() if found else None,
        )
    )
    return checks


def example_2x2(rc: Optional[RunConfig] = None) -> Certificate:
    rc = rc or RunConfig()
    with Timer() as timer:
        checks = example_2x2_checks(rc)
    inputs = {"pp_max_vars": rc.pp_max_vars, "pp_max_constraints": rc.pp_max_constraints}
    return Certificate("example-2x2", inputs, checks, timer.elapsed_ms)


def con_zp2_checks(p: int) -> List[Check]:
    """The p + 3 kernels form M_{p+1}; for p <= 3 they are exactly Con(Z_p^2)."""
    family = zp2_family(p)
    members = family.congruence_set()
    lattice = build_lattice(members)
    shape = mn_shape(lattice)
    identity, universal = relcore.identity(family.n_base), relcore.universal(family.n_base)
    pairs_ok = all(
        relcore.intersect(a, b) == identity and relcore.transitive_closure(relcore.union(a, b)) == universal
        for a, b in itertools.combinations(family.kernels(), 2)
    )
    checks = [
        check(f"con.p{p}.shape", shape.n_atoms == p + 1, f"{shape.describe()}, expected M_{p + 1}"),
        check(f"con.p{p}.meets_joins", pairs_ok, "pairwise meets are 1', pairwise joins are 1"),
    ]
    if family.n_base <= config.MAX_ALGEBRA_SIZE:
        con = congruences(zp2_group_algebra(p))
        checks.append(check(f"con.p{p}.algebra", lattices_equal(list(con), members), f"Con(Z_{p}^2) has {len(con)} elements"))
    else:
        checks.append(Check(f"con.p{p}.algebra", CheckStatus.SKIPPED, f"{family.n_base} points exceed the enumeration guard"))
    return checks


def represent_checks(m: int, atom_budget: Optional[int] = None) -> List[Check]:
    return list(represent_mn(m, atom_budget=atom_budget).checks)


def _mismatch_check(name: str, total: int, mismatches: List[str]) -> Check:
    return check(name, not mismatches, f"{total - len(mismatches)}/{total} agree", mismatches[:3] or None)


def logic_property_checks(seed: int) -> List[Check]:
    """Sampled agreement of the independent evaluators and parser round trips."""
    rng = sampling.make_rng(seed)

    mismatches = []
    for _ in range(config.SAMPLE_TERM_PAIRS):
        s = sampling.random_structure(rng)
        term = sampling.random_ra_term(rng, s.symbols, 4)
        formula = ra_term_to_fo3(term)
        same = evaluate_binary(formula, s, *FO3_VARIABLES[:2]) == evaluate_ra_term(term, s)
        if not same or not fragment_report(formula).is_fo3:
            mismatches.append(format_ra_term(term))
    checks = [_mismatch_check("logic.ra_term_vs_fo3", config.SAMPLE_TERM_PAIRS, mismatches)]

    mismatches = []
    for _ in range(config.SAMPLE_PP_QUERIES):
        s = sampling.random_structure(rng)
        query = sampling.random_pp_query(rng, s.symbols)
        if pp_evaluate(query.constraints, s) != evaluate_binary(pp_to_formula(query), s):
            mismatches.append(query.format())
    checks.append(_mismatch_check("logic.pp_vs_formula", config.SAMPLE_PP_QUERIES, mismatches))

    mismatches = []
    for _ in range(config.SAMPLE_ROUND_TRIPS):
        formula = sampling.random_formula(rng, sampling.SYMBOLS, 4)
        term = sampling.random_ra_term(rng, sampling.SYMBOLS, 4)
        if parse_formula(format_formula(formula)) != formula or parse_ra_term(format_ra_term(term)) != term:
            mismatches.append(format_formula(formula))
    checks.append(_mismatch_check("logic.round_trip", config.SAMPLE_ROUND_TRIPS, mismatches))

    example = two_by_two_example()
    con_structure = Structure(4, {"E0": example.relations[1], "E1": example.relations[2]})
    reducts = [example.algebra.without(op.name) for op in example.algebra.operations]
    mismatches, reduct_mismatches = [], []
    for _ in range(config.SAMPLE_PP_QUERIES):
        query = sampling.random_pp_query(rng, con_structure.symbols)
        relation = pp_evaluate(query.constraints, con_structure)
        if not is_compatible(relation, example.algebra):
            mismatches.append(query.format())
        elif not all(is_compatible(relation, reduct) for reduct in reducts):
            reduct_mismatches.append(query.format())
    checks.append(_mismatch_check("logic.pp_preserves_compatibility", config.SAMPLE_PP_QUERIES, mismatches))
    checks.append(
        _mismatch_check("logic.reducts_preserve_compatibility", config.SAMPLE_PP_QUERIES, reduct_mismatches)
    )
    return checks


def closure_property_checks(seed: int) -> List[Check]:
    """Random generator sets: term membership, atom invariants, Eq as a lattice, shape under relabelling."""
    rng = sampling.make_rng(seed + 1)
    outside, broken, not_lattice, shape_changed = [], [], [], []
    for index in range(config.SAMPLE_CLOSURES):
        generators = sampling.random_generators(rng)
        n = generators[0].n
        names = list(sampling.SYMBOLS[: len(generators)])
        s = ra_closure(generators, names, atom_budget=n * n)
        structure = s.structure()
        term = sampling.random_ra_term(rng, names, 4)
        if decompose(s, evaluate_ra_term(term, structure)) is None:
            outside.append(f"set {index}: {format_ra_term(term)}")
        if invariant_violations(s):
            broken.append(f"set {index}")
        try:
            lattice = build_lattice(extract_equivalences(s, atom_budget=n * n))
        except EqraException as e:
            not_lattice.append(f"set {index}: {e}")
            continue
        permutation = rng.permutation(n)
        relabelled = ra_closure([relcore.permute(g, permutation) for g in generators], names, atom_budget=n * n)
        image = build_lattice(extract_equivalences(relabelled, atom_budget=n * n))
        before = (s.atom_count, len(lattice), mn_shape(lattice).n_atoms)
        if (relabelled.atom_count, len(image), mn_shape(image).n_atoms) != before:
            shape_changed.append(f"set {index}: permutation {permutation.tolist()}")
    total = config.SAMPLE_CLOSURES
    return [
        _mismatch_check("closure.terms_are_members", total, outside),
        _mismatch_check("closure.invariants", total, broken),
        _mismatch_check("closure.eq_is_lattice", total, not_lattice),
        _mismatch_check("closure.shape_under_relabelling", total, shape_changed),
    ]


def _sections(rc: RunConfig) -> List[Section]:
    sections: List[Section] = [(f"lemma.p{p}", lambda p=p: lemma_checks(p)) for p in LEMMA_PRIMES]
    sections += [
        (f"lemma1.p{p}.n{n}", lambda p=p, n=n: lemma1_checks(p, n, atom_budget=rc.atom_budget))
        for p, n in LEMMA1_INSTANCES
    ]
    if rc.unsafe:
        sections += [
            (f"lemma1.p{p}.n{n}", lambda p=p, n=n: lemma1_checks(p, n, unsafe=True, atom_budget=rc.atom_budget))
            for p, n in UNSAFE_INSTANCES
        ]
    sections.append(("example2x2", lambda: example_2x2_checks(rc)))
    sections += [(f"represent.m{m}", lambda m=m: represent_checks(m, rc.atom_budget)) for m in REPRESENTED_M]
    sections += [(f"con.p{p}", lambda p=p: con_zp2_checks(p)) for p in CON_PRIMES]
    sections.append(("logic", lambda: logic_property_checks(rc.seed)))
    sections.append(("closure", lambda: closure_property_checks(rc.seed)))
    return sections


def _run_section(name: str, run: Callable[[], List[Check]]) -> List[Check]:
    with log_section(name):
        logger.info(f"Running section {name}")
        try:
            return run()
        except EqraException as e:
            logger.error(f"Section {name} failed: {e}")
            return [Check(f"{name}.error", CheckStatus.FAIL, f"{type(e).__name__}: {e}")]
        except Exception as e:
            logger.exception(f"Section {name} crashed: {e}")
            return [Check(f"{name}.error", CheckStatus.FAIL, f"unexpected {type(e).__name__}: {e}")]


def _inputs(rc: RunConfig) -> dict:
    return {
        "atom_budget": rc.atom_budget,
        "pp_max_vars": rc.pp_max_vars,
        "pp_max_constraints": rc.pp_max_constraints,
        "unsafe": rc.unsafe,
        "seed": rc.seed,
    }


def verify_all(rc: Optional[RunConfig] = None) -> Certificate:
    """Run every section in order and merge the checks into one certificate."""
    rc = rc or RunConfig()
    cert = Certificate("verify-all", _inputs(rc))
    with Timer() as timer:
        for name, run in _sections(rc):
            cert.extend(_run_section(name, run))
    cert.elapsed_ms = timer.elapsed_ms
    logger.info(f"verify-all finished: {cert.overall} with {len(cert.checks)} checks")
    return cert


async def verify_all_async(rc: Optional[RunConfig] = None) -> Certificate:
    """verify_all with sections on up to ``rc.parallelism`` worker threads; checks keep section order."""
    rc = rc or RunConfig()
    limit = asyncio.Semaphore(rc.parallelism)

    async def run_limited(name: str, run: Callable[[], List[Check]]) -> List[Check]:
        async with limit:
            return await asyncio.to_thread(_run_section, name, run)

    cert = Certificate("verify-all", _inputs(rc))
    with Timer() as timer:
        results: Sequence[List[Check]] = await asyncio.gather(*(run_limited(name, run) for name, run in _sections(rc)))
        for checks in results:
            cert.extend(checks)
    cert.elapsed_ms = timer.elapsed_ms
    return cert
