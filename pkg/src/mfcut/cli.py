"""Command-line driver.

Exit codes: 0 every check passed, 1 some check failed, 2 some check was
inconclusive at the homotopy degree cap (and none failed), 3 usage or parse
error.  Output is deterministic: matrices first, then the report sorted by
check name.  MFCUT_THREADS sets the number of worker threads for `verify`.
"""

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import instances, perturb, transfer
from .cut import cut_compose, relation_checks, associator_check, top_projector_check
from .mf import UnknownAtBound, mf_tensor
from .problem import parse_problem, serialize
from .ring import ParseError

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown-at-bound"
EXIT = {PASS: 0, FAIL: 1, UNKNOWN: 2}
USAGE = 3


@dataclass(frozen=True)
class RunConfig:
    degree_cap: int = None
    format: str = "pretty"
    matrices: bool = True
    timing: bool = False
    literal: bool = False
    threads: int = 1

    @classmethod
    def from_args(cls, args, environ=os.environ):
        try:
            threads = max(1, int(environ.get("MFCUT_THREADS", "1")))
        except ValueError:
            threads = 1
        return cls(args.degree_cap, args.format, not args.no_matrices, args.timing,
                   getattr(args, "literal", False), threads)


@dataclass
class Check:
    name: str
    status: str
    witness: str = "-"
    seconds: float = 0.0


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    info: list = field(default_factory=list)

    def add(self, name, ok, witness="-", seconds=0.0):
        status = ok if isinstance(ok, str) else (PASS if ok else FAIL)
        self.checks.append(Check(name, status, witness, seconds))

    @property
    def status(self):
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if UNKNOWN in states:
            return UNKNOWN
        return PASS

    def render(self, timing=False):
        lines = [f"report {self.command}"]
        for key, value in self.info:
            lines.append(f"info {key} = {value}")
        for c in sorted(self.checks, key=lambda c: c.name):
            line = f"check {c.status:<16} {c.name} witness={c.witness}"
            if timing:
                line += f" seconds={c.seconds:.3f}"
            lines.append(line)
        counts = {s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, UNKNOWN)}
        lines.append(f"summary {self.status} pass={counts[PASS]} fail={counts[FAIL]} "
                     f"unknown-at-bound={counts[UNKNOWN]}")
        return "\n".join(lines) + "\n"


def _homotopy_status(status):
    """Map exact/homotopy/fail/unknown-at-bound to a report status and witness tag."""
    if status in ("exact", "homotopy"):
        return PASS, status
    return (UNKNOWN, "-") if status == UNKNOWN else (FAIL, "-")


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _pair(problem, left="Y", right="X"):
    try:
        return problem.factorisations[left], problem.factorisations[right]
    except KeyError as exc:
        raise ValueError(f"missing factorisation {exc.args[0]}") from None


def _cut(problem, args):
    Y, X = _pair(problem, args.left, args.right)
    V = problem.potentials.get("V")
    y_vars = tuple(n for n in problem.groups["y"] if n in Y.context or n in X.context) or None
    return cut_compose(Y, X, V=V, y_vars=y_vars, verify=False)


def _cut_checks(report, res, degree_cap, literal=False):
    d = res.d
    report.add("factorisation law", d @ d == res.mf.identity().scale(res.mf.potential))
    rank = res.tensor.rank * res.jacobi.dim
    report.add("rank law", res.rank == rank)
    for name, (lhs, rhs) in relation_checks(res, exact=True).items():
        report.add(name, lhs == rhs, "exact-witness")
    if literal:
        for name, (lhs, rhs) in relation_checks(res, exact=False).items():
            report.add("literal " + name, lhs == rhs, "literal-witness")
    for i, A in enumerate(res.gamma):
        report.add(f"closed gamma_{i + 1}", d.bracket(A).is_zero())
    for i, A in enumerate(res.gamma_dagger):
        report.add(f"closed gamma_dagger_{i + 1}", d.bracket(A).is_zero())


def _cut_matrices(res):
    out = [("d", res.d)]
    m = res.jacobi.m
    for i in range(m):
        out.append((f"gamma_{i + 1}", res.gamma[i]))
    for i in range(m):
        out.append((f"gamma_dagger_{i + 1}", res.gamma_dagger[i]))
    for i in range(m):
        for j in range(m):
            out.append((f"h_{i + 1}{j + 1}", res.h[(i, j)]))
            out.append((f"w_{i + 1}{j + 1}", res.w_exact[(i, j)]))
            out.append((f"c_{i + 1}{j + 1}", res.c_exact[(i, j)]))
    return out


def cmd_tensor(args):
    Y, X = _pair(_load(args.file), args.left, args.right)
    T = mf_tensor(Y, X)
    report = Report("tensor")
    report.add("factorisation law", T.d @ T.d == T.identity().scale(T.potential))
    return [("d", T.d)], report


def cmd_cut(args):
    res = _cut(_load(args.file), args)
    report = Report("cut")
    report.info.append(("rank", res.rank))
    _cut_checks(report, res, args.config.degree_cap, args.config.literal)
    return _cut_matrices(res), report


def cmd_verify(args):
    problem = _load(args.file)
    res = _cut(problem, args)
    report = Report("verify")
    report.info.append(("rank", res.rank))
    _cut_checks(report, res, args.config.degree_cap, args.config.literal)
    Y, X = _pair(problem, args.left, args.right)
    cap = args.config.degree_cap

    def projector():
        out = top_projector_check(res, cap)
        return [("top projector", *_homotopy_status(out["status"]))]

    def intertwining():
        fm = perturb.phi_map(Y, X, res=res)
        rows = [("Phi is the quotient map in theta-degree 0", PASS, "exact")]
        ident = (Y.identity(), X.identity(), Y, X)
        out = perturb.clifford_intertwine_check(Y, X, fm=fm, morphisms=ident, degree_cap=cap)
        for name, (status, order) in out.items():
            st, how = _homotopy_status(status)
            rows.append((name, st, f"{how}@order{order}" if st == PASS else how))
        return rows

    def creations():
        rows = []
        for q in range(res.jacobi.m):
            exact, status = perturb.creation_check(res, (q,), cap)
            rows.append((f"pi theta*_{q + 1} sigma_inf = At_{q + 1}", PASS if exact else FAIL, "exact"))
        return rows

    tasks = [projector, intertwining, creations]
    with ThreadPoolExecutor(max_workers=args.config.threads) as pool:
        futures = [(time.perf_counter(), pool.submit(t)) for t in tasks]
        for start, fut in futures:
            for name, status, witness in fut.result():
                report.add(name, status, witness, time.perf_counter() - start)
    return [], report


def cmd_hom(args):
    problem = _load(args.file)
    Y, X = _pair(problem, args.left, args.right)
    if Y.potential != X.potential.to_context(Y.potential.context):
        raise ValueError("hom needs Y and X with the same potential (set 'potential = ...')")
    out = perturb.hom_pipeline(Y, X)
    oracle, degree = perturb.ext_oracle(Y, X)
    report = Report("hom")
    H, image = out["cohomology"], out["image"]
    report.info.append(("cohomology", f"{H[0]}|{H[1]}"))
    report.info.append(("e_1 image", f"{image[0]}|{image[1]}"))
    report.info.append(("oracle ext", f"{oracle[0]}|{oracle[1]} (stable at degree {degree})"))
    report.add("e_1 image equals oracle ext", image == oracle)
    return [("d", out["cut"].d)], report


def cmd_assoc(args):
    problem = _load(args.file)
    Z = problem.factorisations.get("Z")
    if Z is None:
        raise ValueError("assoc needs factorisations Z, Y and X")
    Y, X = _pair(problem)
    out = associator_check(Z, Y, X, args.config.degree_cap)
    report = Report("assoc")
    report.info.append(("ranks", f"{out['rank_left']} {out['rank_right']}"))
    report.add("rank equality", out["rank_left"] == out["rank_right"])
    for name, status in out["checks"].items():
        st, how = _homotopy_status(status)
        report.add(name, st, how)
    return [], report


def cmd_perturb_demo(args):
    D = args.degree
    s = perturb.koszul_truncation(D)
    report = Report("perturb-demo")
    for name, ok in perturb.sdr_validate(s).items():
        report.add(f"koszul {name}", ok)
    tau = perturb.koszul_perturbation(D, args.coefficient, 2)
    p = perturb.perturb_sdr(s, tau)
    for name, ok in perturb.sdr_validate(p).items():
        report.add(f"perturbed {name}", ok)
    t2 = perturb.koszul_perturbation(D, 1, 3)
    report.add("perturbation composes", perturb.perturb_sdr(p, t2) == perturb.perturb_sdr(s, tau + t2))
    back = perturb.splitting_sdr_roundtrip(perturb.splitting_sdr_roundtrip(s))
    report.add("splitting homotopy roundtrip", perturb.retracts_isomorphic(s, back))
    out = transfer.combin_check(args.combin, args.combin)
    report.add(f"binomial identity a,b <= {args.combin}", out["passed"])
    return [("d_inf", p.small)], report


def cmd_transfer_demo(args):
    report = Report("transfer-demo")
    setup = transfer.fermat_setup([args.n] * args.m)
    ok = True
    try:
        transfer.delta_exp(setup)
    except transfer.FormulaMismatch:
        ok = False
    report.add("exp(delta) exp(-delta) = 1 and intertwining", ok)
    f = transfer.hessian_scalars(setup)
    for i in range(setup.m):
        try:
            transfer.transfer_general(setup, setup.lambdas[i])
            report.add(f"T(lambda_{i + 1}) series = conjugation", True)
        except transfer.FormulaMismatch:
            report.add(f"T(lambda_{i + 1}) series = conjugation", False)
        try:
            _, w = transfer.transfer_theta(setup, i, f if args.m == 1 else None, args.config.degree_cap)
            report.add(f"T(theta_{i + 1}) series = conjugation", True)
            if w is not None:
                report.add(f"T(theta_{i + 1}) ~ simplified form", PASS, f"homotopy@degree{w.bound}")
        except transfer.FormulaMismatch:
            report.add(f"T(theta_{i + 1}) series = conjugation", False)
        except UnknownAtBound:
            report.add(f"T(theta_{i + 1}) ~ simplified form", UNKNOWN)
    report.add("T(d) = d + d_K", transfer.transfer_general(setup, setup.base.d) == setup.d + setup.d_koszul)
    for name, ok in transfer.identity_checks(setup).items():
        report.add(name, ok)
    report.add("closedness transport", transfer.closedness_transport(setup, setup.lambdas[0]))
    return [], report


def cmd_an_example(args):
    N, i, j = args.n, args.i, args.j
    if N < 2 or not (1 <= i < N and 1 <= j < N):
        raise ValueError("need N >= 2 and 1 <= i, j < N")
    ex = instances.hom_example(N, i, j)
    report = Report("an-example")
    val = instances.constant_entries
    mats = [("d_hom", ex.d), ("y", ex.inflation), ("gamma", ex.gamma), ("gamma_dagger", ex.gamma_dagger)]
    report.add("d_hom golden", val(ex.d) == instances.golden_d(N, i, j))
    report.add("[y] golden", val(ex.inflation) == instances.golden_block_y(N, 1))
    for a in range(N - 1):
        R = instances.residue_matrix(N, a)
        mats.append((f"R_{a}", R))
        report.add(f"[R_{a}] golden", val(R) == instances.golden_R(N, a))
    report.add("gamma golden", val(ex.gamma) == instances.golden_gamma(N, i, j))
    report.add("gamma_dagger golden", val(ex.gamma_dagger) == instances.golden_gamma_dagger(N, i, j))
    return mats, report


COMMANDS = {
    "tensor": cmd_tensor,
    "cut": cmd_cut,
    "verify": cmd_verify,
    "hom": cmd_hom,
    "assoc": cmd_assoc,
    "perturb-demo": cmd_perturb_demo,
    "transfer-demo": cmd_transfer_demo,
    "an-example": cmd_an_example,
}


def build_parser():
    p = argparse.ArgumentParser(prog="mfcut", description="Exact cuts of matrix factorisations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree-cap", type=int, default=None,
                        help="maximum entry degree for homotopy searches")
    common.add_argument("--format", choices=("pretty", "machine"), default="pretty")
    common.add_argument("--no-matrices", action="store_true", help="emit the report only")
    common.add_argument("--timing", action="store_true", help="add per-check timings")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("tensor", "cut", "verify", "hom"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file")
        s.add_argument("--left", default="Y")
        s.add_argument("--right", default="X")
        if name in ("cut", "verify"):
            s.add_argument("--literal", action="store_true",
                           help="also check the literal closed-form witnesses")
    s = sub.add_parser("assoc", parents=[common])
    s.add_argument("file")
    s = sub.add_parser("perturb-demo", parents=[common])
    s.add_argument("--degree", type=int, default=12)
    s.add_argument("--coefficient", type=int, default=1)
    s.add_argument("--combin", type=int, default=8)
    s = sub.add_parser("transfer-demo", parents=[common])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--m", type=int, default=1)
    s = sub.add_parser("an-example", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else 0
    args.config = config = RunConfig.from_args(args)
    try:
        matrices, report = COMMANDS[args.command](args)
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    if config.matrices and matrices:
        out.write(serialize(matrices, config.format))
    out.write(report.render(config.timing))
    return EXIT[report.status]


if __name__ == "__main__":
    sys.exit(main())
