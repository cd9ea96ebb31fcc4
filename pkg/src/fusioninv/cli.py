"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 parse error, 3 invalid ring, 4 failed
verification or property test, 5 internal-consistency failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import mpmath

from . import numeric
from .catalog import builtin_ring, repds3_zero_pattern, resolve_ring, resolve_solution, repds3_standins
from .classify import classify, zero_set_orbit
from .invariants import (InternalConsistencyError, ZeroSetMismatch, basis_from_dict, evaluate_basis,
                         invariant_basis, localize_pentagon, phi_coverage_check, rationality_check)
from .lattice import build_exponent_matrix
from .ring import NotMultiplicityFree, RingParseError, automorphism_group, gamma_set, validate_ring
from .symbols import (NotAnAutomorphism, SolutionDomainError, ZeroGaugeEntry, apply_gauge, pentagon_instances,
                      phi_set, sample_normalized_gauge, verify_solution, zero_set, zeros_from_dict)

EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_VERIFY, EXIT_INTERNAL = 1, 2, 3, 4, 5


class CommandFailed(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    precision: int = numeric.DEFAULT_PRECISION
    tol: float = numeric.DEFAULT_TOL
    zero_tol: float = numeric.DEFAULT_ZERO_TOL
    max_denominator: int = numeric.DEFAULT_MAX_DENOMINATOR
    seed: int = 0

    def check(self) -> None:
        if self.precision < 20:
            raise CommandFailed(EXIT_USAGE, f"precision must be at least 20, got {self.precision}")
        if self.tol <= 0 or self.zero_tol <= 0:
            raise CommandFailed(EXIT_USAGE, "tolerances must be positive")
        if min(self.tol, self.zero_tol) < mpmath.mpf(10) ** (2 - self.precision):
            raise CommandFailed(EXIT_USAGE, "tolerance is below what the working precision resolves")
        if self.max_denominator < 1 or self.seed < 0:
            raise CommandFailed(EXIT_USAGE, "max-denominator must be positive and seed nonnegative")


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CommandFailed(EXIT_PARSE, f"{args.config}: {exc}") from None
        known = {f.name for f in fields(RunConfig)}
        for key, value in data.items():
            if key not in known:
                raise CommandFailed(EXIT_PARSE, f"{args.config}: unknown key {key!r}")
            setattr(cfg, key, type(getattr(cfg, key))(value))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    cfg.check()
    numeric.set_precision(cfg.precision)
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


def _ring(args, check: bool = True):
    ring = resolve_ring(args.ring)
    if check:
        report = validate_ring(ring)
        if not report.ok:
            raise CommandFailed(EXIT_INVALID, f"{args.ring}: invalid ring ({', '.join(report.kinds())})")
    return ring


def _zeros(ring, ref: str):
    m = re.fullmatch(r"pattern(\d)", ref)
    if m and not Path(ref).exists():
        if ring.basis != builtin_ring("repds3").basis:
            raise CommandFailed(EXIT_USAGE, "built-in zero patterns exist only for the repds3 ring")
        return repds3_zero_pattern(int(m.group(1)))
    return zeros_from_dict(ring, json.loads(Path(ref).read_text(encoding="utf-8")))


# commands --------------------------------------------------------------------------

def cmd_validate(args, cfg):
    ring = _ring(args, check=False)
    report = validate_ring(ring, strict_duality=args.strict_duality)
    lines = [f"{v.kind}\t{' '.join(v.witness)}\t{v.detail}" for v in report.violations]
    lines.append(f"{ring.name}: {'valid' if report.ok else f'{len(report.violations)} violation(s)'}"
                 f", multiplicity free: {'yes' if report.multiplicity_free else 'no'}")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else EXIT_INVALID


def cmd_aut(args, cfg):
    group = automorphism_group(_ring(args))
    _emit(args, "".join(f"{rho.cycle_string()}\n" for rho in group) + f"order {len(group)}\n")
    return 0


def cmd_phi(args, cfg):
    ring = _ring(args)
    _emit(args, "".join(f"{i}\t{phi}\n" for i, phi in enumerate(phi_set(ring))))
    return 0


def cmd_gamma(args, cfg):
    ring = _ring(args)
    _emit(args, "".join(f"{i}\tγ[{t.a} {t.b}; {t.c}]\n" for i, t in enumerate(gamma_set(ring))))
    return 0


def cmd_pentagon(args, cfg):
    eqs = pentagon_instances(_ring(args))
    out = []
    if args.dump:
        for eq in eqs:
            terms = " ".join(("+ " if s > 0 else "- ") + " · ".join(map(str, t)) for s, t in eq.terms())
            out.append(f"{' '.join(eq.outer)}\t{terms} = 0")
    out.append(f"{len(eqs)} pentagon equations")
    _emit(args, "\n".join(out) + "\n")
    return 0


def cmd_matrix(args, cfg):
    ring = _ring(args)
    zeros = _zeros(ring, args.zeros) if args.zeros else frozenset()
    _emit(args, build_exponent_matrix(ring, zeros).to_tsv())
    return 0


def cmd_verify(args, cfg):
    ring = _ring(args)
    sol = resolve_solution(args.solution, ring)
    report = verify_solution(ring, sol, cfg.tol)
    lines = [f"unit\t{phi}\t{numeric.format_complex(v)}" for phi, v in report.unit_violations]
    lines += [f"vanishing\t{phi}" for phi in report.vanishing_violations]
    lines += [f"pentagon\t{' '.join(eq.outer)}\t{mpmath.nstr(r, 5)}" for eq, r in report.pentagon_violations]
    lines += [f"singular\t{' '.join(b)}\t{mpmath.nstr(d, 5)}" for b, d in report.singular_blocks]
    lines.append(f"{sol.name}: {'passes' if report.ok else 'FAILS'}; {report.summary()}")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else EXIT_VERIFY


def cmd_invariant_basis(args, cfg):
    ring = _ring(args)
    if args.zeros and args.from_solution:
        raise CommandFailed(EXIT_USAGE, "give at most one of --zeros and --from-solution")
    zeros = frozenset()
    if args.zeros:
        zeros = _zeros(ring, args.zeros)
    elif args.from_solution:
        zeros = zero_set(resolve_solution(args.from_solution, ring), cfg.zero_tol)
    basis = invariant_basis(ring, zeros)
    data = basis.to_dict(args.ring)
    ok, uncovered = phi_coverage_check(basis)
    data["coverage"] = {"complete": ok, "uncovered": [phi.to_dict() for phi in uncovered]}
    _emit(args, _dump(data))
    print(f"{len(basis)} monomials", file=sys.stderr)
    return 0


def _load_basis(ring, path):
    return basis_from_dict(ring, json.loads(Path(path).read_text(encoding="utf-8")))


def cmd_evaluate(args, cfg):
    ring = _ring(args)
    sol = resolve_solution(args.solution, ring)
    record = evaluate_basis(sol, _load_basis(ring, args.basis), cfg.zero_tol)
    _emit(args, _dump(record.to_dict()))
    return 0


def cmd_localize(args, cfg):
    ring = _ring(args)
    basis = _load_basis(ring, args.basis)
    eqs = localize_pentagon(ring, basis.zeros, basis)
    seen, lines = set(), []
    for eq in eqs:
        text = eq.format()
        if args.all or text not in seen:
            seen.add(text)
            lines.append(text)
    lines.append(f"{len(lines)} localized equations ({len(eqs)} pentagon instances)")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_galois(args, cfg):
    ring = _ring(args)
    sol = resolve_solution(args.solution, ring)
    basis = invariant_basis(ring, zero_set(sol, cfg.zero_tol))
    verdict = rationality_check(evaluate_basis(sol, basis, cfg.zero_tol), cfg.max_denominator, cfg.tol)
    lines = [f"s{i + 1}\t{q if q is not None else 'irrational'}" for i, q in enumerate(verdict.values)]
    lines.append(f"{sol.name}: rational {'yes' if verdict else 'no'}; "
                 f"gauge equivalent to all Galois conjugates: {'yes' if verdict else 'no'}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_orbit(args, cfg):
    ring = _ring(args)
    report = zero_set_orbit(ring, _zeros(ring, args.zeros))
    if args.json:
        _emit(args, _dump(report.to_dict(ring)))
    else:
        text = "".join(f"{rho.cycle_string()}\n" for rho in report.stabilizer)
        _emit(args, text + f"stabilizer order {len(report.stabilizer)}, orbit size {len(report.orbit)}\n")
    return 0


def cmd_classify(args, cfg):
    ring = _ring(args)
    items = [resolve_solution(ref, ring) for ref in args.solutions]
    if args.repds3_standins:
        if ring.basis != builtin_ring("repds3").basis:
            raise CommandFailed(EXIT_USAGE, "--repds3-standins needs the repds3 ring")
        items += repds3_standins(ring)
    if not items:
        raise CommandFailed(EXIT_USAGE, "nothing to classify")
    result = classify(ring, items, cfg.tol, cfg.zero_tol)
    _emit(args, _dump(result.to_dict(ring)) if args.json else result.format_table())
    return 0


def cmd_gauge_test(args, cfg):
    ring = _ring(args)
    sol = resolve_solution(args.solution, ring)
    zeros = zero_set(sol, cfg.zero_tol)
    basis = invariant_basis(ring, zeros)
    before = evaluate_basis(sol, basis, cfg.zero_tol).values
    worst_inv, worst_raw, failures = mpmath.mpf(0), mpmath.mpf(0), 0
    for k in range(args.n):
        g = sample_normalized_gauge(ring, cfg.seed + k)
        moved = apply_gauge(sol, g)
        if zero_set(moved, cfg.zero_tol) != zeros:
            failures += 1
            continue
        after = evaluate_basis(moved, basis, cfg.zero_tol).values
        dev = max((abs(x - y) for x, y in zip(before, after)), default=mpmath.mpf(0))
        worst_inv = max(worst_inv, dev)
        worst_raw = max(worst_raw, max(abs(moved[p] - sol[p]) for p in sol.values))
        if dev >= cfg.tol or (args.verify and not verify_solution(ring, moved, cfg.tol).ok):
            failures += 1
    _emit(args, f"{args.n} gauges from seed {cfg.seed}: {failures} failure(s); "
                f"max invariant change {mpmath.nstr(worst_inv, 3)}, max F-symbol change {mpmath.nstr(worst_raw, 3)}\n")
    return 0 if failures == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in decimal digits (default 50)")
    common.add_argument("--tol", type=float, help="equality tolerance (default 1e-9)")
    common.add_argument("--zero-tol", type=float, help="zero threshold (default 1e-9)")
    common.add_argument("--max-denominator", type=int, help="rational reconstruction bound (default 10^6)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--config", help="JSON file with defaults for the options above")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    parser = _Parser(prog="fusioninv", description="Gauge invariants of multiplicity-free fusion categories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, *pos):
        p = sub.add_parser(name, parents=[common], help=help)
        for arg in pos:
            p.add_argument(arg)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check the based-ring axioms", "ring")
    p.add_argument("--strict-duality", action="store_true", help="also require N(x,y,z) = N(y*,x*,z*)")
    add("aut", cmd_aut, "list the automorphism group", "ring")
    add("phi", cmd_phi, "list the F-symbol variables", "ring")
    add("gamma", cmd_gamma, "list the fusion triples", "ring")
    p = add("pentagon", cmd_pentagon, "count (or dump) the pentagon equations", "ring")
    p.add_argument("--dump", action="store_true")
    p = add("matrix", cmd_matrix, "dump the exponent matrix as TSV", "ring")
    p.add_argument("--zeros", help="zero-set file, or patternK for the built-in repds3 patterns")
    add("verify", cmd_verify, "check a solution against the pentagon and unit constraints", "ring", "solution")
    p = add("invariant-basis", cmd_invariant_basis, "compute a basis of invariant monomials", "ring")
    p.add_argument("--zeros")
    p.add_argument("--from-solution")
    add("evaluate", cmd_evaluate, "evaluate a basis on a solution", "ring", "solution", "basis")
    p = add("localize", cmd_localize, "rewrite the pentagon equations in basis coordinates", "ring", "basis")
    p.add_argument("--all", action="store_true", help="keep duplicate equations")
    add("galois", cmd_galois, "rationality check of the basis evaluations", "ring", "solution")
    p = add("orbit", cmd_orbit, "stabilizer and orbit of a zero set", "ring")
    p.add_argument("--zeros", required=True)
    p.add_argument("--json", action="store_true")
    p = add("classify", cmd_classify, "gauge and monoidal classes of solutions", "ring")
    p.add_argument("solutions", nargs="*")
    p.add_argument("--repds3-standins", action="store_true", help="add the twenty encoded repds3 stand-ins")
    p.add_argument("--json", action="store_true")
    p = add("gauge-test", cmd_gauge_test, "random normalized gauges must fix the invariants", "ring", "solution")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--verify", action="store_true", help="also verify every gauged solution")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except CommandFailed as exc:
        if str(exc):
            print(f"fusioninv: {exc}", file=sys.stderr)
        return exc.code
    except (RingParseError, SolutionDomainError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"fusioninv: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotMultiplicityFree, NotAnAutomorphism) as exc:
        print(f"fusioninv: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ZeroSetMismatch, ZeroGaugeEntry) as exc:
        print(f"fusioninv: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except InternalConsistencyError as exc:
        print(f"fusioninv: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
