"""Command-line front end.

Exit status: 0 when every asserted property held, 2 on a property failure,
3 when an exact computation was refused for budget reasons, 1 on usage or
I/O errors.  Reports are deterministic key=value text.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import comb

from . import complex as cx
from . import cones, css, expansion, homology, local, zoo
from .errors import BudgetExceeded, CosyxError, InputError
from .report import Report
from .search import default_budget
from .tensor import dumps_tensor, tensor

EXIT_OK, EXIT_IO, EXIT_PROPERTY, EXIT_BUDGET = 0, 1, 2, 3


class _Failed(Exception):
    """Raised internally to turn a failed assertion into exit 2 after writing."""


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--weight", choices=[cx.HAMMING, cx.NORMALIZED, cx.TOPCELL], default=None)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["dense", "alist"], default="dense")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cosyx", description="Exact F2 chain-complex measurements and CSS codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a zoo complex")
    p.add_argument("spec", nargs="+", help="kind and parameters, e.g. 'cycle 3'")
    _common(p)

    p = sub.add_parser("tensor", help="tensor product of two complex files ('-' reads stdin)")
    p.add_argument("left")
    p.add_argument("right")
    _common(p)

    for name, hlp in [
        ("validate", "check ∂∂ = 0 and report localities"),
        ("homology", "Betti numbers and cohomology representatives"),
        ("expansion", "systole, cosystole, η, μ and collective μ̄"),
        ("css", "extract the CSS code of degree --k"),
        ("balance", "tensor with a cycle and measure the resulting code"),
    ]:
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file", nargs="?", default="-")
        _common(p)
        if name == "css":
            p.add_argument("--params", action="store_true", help="measure exact distances")
            p.add_argument("--export", choices=["hx", "hz", "both"], default=None)
        if name == "balance":
            p.add_argument("--L", type=int, default=None, dest="cycle_length")

    p = sub.add_parser("local-check", help="minimality, local minimization, skeleton ρ and fat bounds")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--members", default=None, help="cochains as cell lists separated by ';'")
    p.add_argument("--m", type=int, default=2, help="random collection size when --members is absent")
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--xi", default="9/10")
    p.add_argument("--eps", default="0")
    _common(p)

    p = sub.add_parser("cones-check", help="cone systems and building-like data")
    p.add_argument("family", choices=["simplex", "pg2"])
    p.add_argument("size", type=int, help="N vertices (simplex) or the order q (pg2)")
    p.add_argument("--random", type=int, default=50, help="random coboundary collections per degree")
    p.add_argument("--m", type=int, default=2, help="collection size")
    _common(p)

    p = sub.add_parser("verify-product", help="check the product theorem's inequalities on X ⊗ Y")
    p.add_argument("left")
    p.add_argument("right")
    _common(p)
    return ap


# ---------------------------------------------------------------- io


class _Inputs:
    """Reads complex files; '-' is stdin, read once and shared."""

    def __init__(self):
        self._stdin = None

    def text(self, path: str) -> str:
        if path == "-":
            if self._stdin is None:
                self._stdin = sys.stdin.read()
            return self._stdin
        with open(path) as fh:
            return fh.read()

    def complex(self, path: str, check: bool = True) -> cx.BasedComplex:
        return cx.loads(self.text(path), check=check)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_k(args, default=None) -> int:
    if args.k is None:
        if default is None:
            raise InputError("--k is required")
        return default
    return args.k


# ---------------------------------------------------------------- commands


def cmd_gen(args, rep: Report, inp: _Inputs) -> str:
    tokens = list(args.spec)
    spec = zoo.parse_spec(tokens)
    if spec.kind == "lm_random" and len(spec.params) == 3:
        spec = zoo.GenSpec(spec.kind, spec.params + (args.seed,))
    X = zoo.generate(spec)
    return rep.comment_header() + spec.header() + "\n" + cx.dumps(X)


def cmd_tensor(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.left)
    Y = inp.complex(args.right)
    T = tensor(X.unaugmented_copy(), Y.unaugmented_copy())
    return rep.comment_header() + dumps_tensor(T)


def cmd_validate(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file, check=False)
    v = X.validate()
    rep.add(f"counts={' '.join(map(str, X.counts()))}", *v.lines())
    if not v.ok:
        raise _Failed
    return rep.text()


def cmd_homology(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file)
    rep.add("betti=" + " ".join(map(str, homology.betti_numbers(X))))
    rep.add("reduced_betti=" + " ".join(map(str, homology.betti_numbers(X, reduced=True))))
    ks = [args.k] if args.k is not None else list(range(0, X.dim + 1))
    for k in ks:
        basis = homology.cohomology_basis(X, k)
        for i, r in enumerate(basis.reps):
            rep.add(f"cohomology_{k}_{i}=" + " ".join(map(str, r.support)))
        hb = homology.homology_basis(X, k)
        for i, r in enumerate(hb.reps):
            rep.add(f"homology_{k}_{i}=" + " ".join(map(str, r.support)))
    return rep.text()


def cmd_expansion(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file)
    k = _need_k(args)
    r = expansion.expansion_report(X, k, rep.weight, m_max=args.m_max, budget=rep.budget, workers=args.workers)
    rep.add(*r.lines())
    mc = r.mu_coll
    if mc is not None:
        vals = [mc.values[m] for m in sorted(mc.values)]
        mono = all(a <= b for a, b in zip(vals, vals[1:])) and r.mu.value <= vals[0]
        rep.add(f"check_monotone={int(mono)}")
        if not mono:
            raise _Failed
    return rep.text()


def _random_collection(X: cx.BasedComplex, k: int, m: int, density: float, seed: int) -> list[int]:
    draws = zoo.uniform_draws(seed, m * X.n(k))
    out = []
    for a in range(m):
        bits = 0
        for i in range(X.n(k)):
            if draws[a * X.n(k) + i] < density:
                bits |= 1 << i
        out.append(bits)
    return out


def _parse_members(text: str) -> list[int]:
    out = []
    for part in text.split(";"):
        try:
            out.append(sum(1 << int(t) for t in set(part.split())))
        except ValueError as exc:
            raise InputError(f"bad cell list {part!r}") from exc
    return out


def cmd_local_check(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file)
    k = _need_k(args)
    if not X.is_simplicial or not X.is_pure:
        raise InputError("local-check needs a pure simplicial complex")
    if args.weight not in (None, cx.TOPCELL):
        rep.add("weight_note=non-canonical weight used for the minimality verdicts only")
    members = _parse_members(args.members) if args.members else _random_collection(X, k, args.m, args.density, args.seed)
    for b in members:
        if b >> X.n(k):
            raise InputError("cell index out of range")
    C = local.CochainCollection.of(X, k, members)
    w = rep.weight
    failed = False
    g = local.is_minimal_collection(X, C, "global", weight=w, budget=rep.budget)
    lo = local.is_minimal_collection(X, C, "local", weight=w, budget=rep.budget)
    rep.add("input_global_" + g.lines()[0], "input_local_" + lo.lines()[0])
    res = local.local_minimize(X, C, budget=rep.budget)
    out = res.collection
    wk = X.weight_fn(cx.TOPCELL, k)
    before, after = wk.of(C.union), wk.of(out.union)
    gu = 0
    for gm in res.gammas:
        gu |= gm.bits
    gw = X.weight_fn(cx.TOPCELL, k - 1).of(gu) if k >= 1 else Fraction(0)
    again = local.is_minimal_collection(X, out, "local", budget=rep.budget)
    rep.add(f"minimize_steps={res.steps}", f"union_before={before}", f"union_after={after}")
    rep.add(f"gamma_union={gw}", f"Q={res.Q}", "N_trace=" + " ".join(map(str, res.trace)))
    rep.add("output=" + " | ".join(" ".join(map(str, a.support)) for a in out.members))
    checks = {
        "output_locally_minimal": again.ok,
        "union_nonincreasing": after <= before,
        "gamma_bound": gw <= res.Q * before,
    }
    if k >= 1:
        checks["gamma_consistent"] = all(
            X.delta(k - 1, gm.bits) ^ a == b.bits for gm, a, b in zip(res.gammas, members, out.members)
        )
    rho = local.skeleton_rho(X.unaugmented_copy())
    rep.add(f"skeleton_rho={rho}")
    fb = local.check_fat_bounds(X, out, Fraction(args.xi), eps=Fraction(args.eps), m_max=args.m_max, budget=rep.budget)
    rep.add(*("fat_" + ln for ln in fb.lines()))
    checks["fat_bounds"] = fb.ok
    for key in sorted(checks):
        rep.add(f"check_{key}={int(checks[key])}")
        failed |= not checks[key]
    if failed:
        raise _Failed
    return rep.text()


def cmd_cones_check(args, rep: Report, inp: _Inputs) -> str:
    failed = False
    if args.family == "simplex":
        X, C = cones.simplex_cones(args.size)
        _, S, D = cones.full_simplex_building_data(args.size)
        v = cones.validate_cones(X, C)
        h = cones.check_homotopy(X, C)
        rep.add(*("cones_" + ln for ln in v.lines()), *("homotopy_" + ln for ln in h.lines()))
        failed |= not (v.ok and h.ok)
        draws_seed = args.seed
        for k in range(0, X.dim):
            th = cones.theta(X, C, k)
            worst = Fraction(0)
            ok = True
            for r in range(args.random):
                alphas = _random_collection(X, k, args.m, 0.5, draws_seed * 1000003 + k * 1009 + r)
                betas = local.CochainCollection.of(X, k + 1, [X.delta(k, a) for a in alphas])
                if not betas.union:
                    continue
                res = cones.cofill_via_cones(X, C, betas)
                ok &= res.average_ok and res.ratio <= th
                worst = max(worst, res.average)
            rep.add(f"theta_{k}={th}", f"average_ratio_max_{k}={worst}", f"check_average_{k}={int(ok)}")
            failed |= not ok
    else:
        X, S, D = cones.flag_pg2_building_data(args.size)
    bv = cones.check_building_like(X, S, D)
    rep.add(*("building_" + ln for ln in bv.lines()))
    if bv.ok:
        n = X.dim
        for k in sorted(bv.a):
            bound = comb(n + 1, k + 2) * bv.a[k]
            try:
                res = expansion.collective_cofilling(X, k, cx.TOPCELL, m_max=args.m_max, budget=rep.budget, adaptive=True)
            except BudgetExceeded as exc:
                rep.add(f"mu_coll_{k}=refused ({exc})")
                continue
            val = res.value()
            rep.add(f"mu_coll_{k}={val}", f"mu_coll_{k}_m={res.m_max}", f"bound_{k}={bound}")
            rep.add(f"check_bound_{k}={int(val <= bound)}")
            failed |= val > bound
    if failed:
        raise _Failed
    return rep.text()


def _refuse_unknown(params: css.CodeParams) -> None:
    # a distance the budget could not settle is a refusal, not a partial answer
    if params.k_dim and params.d is None:
        raise BudgetExceeded(params.note)


def cmd_css(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file)
    k = _need_k(args)
    code = css.from_complex(X, k)
    rep.add(f"degree={k}", f"orthogonal={int(code.orthogonal())}")
    betti = homology.betti(X, k)
    rep.add(f"betti={betti}")
    if args.params:
        params = css.code_params(code, budget=rep.budget, workers=args.workers)
        _refuse_unknown(params)
        rep.add(*params.lines())
    else:
        rep.add(f"n={code.n}", f"k={code.k_dim}")
    if args.export:
        for name in (["hx", "hz"] if args.export == "both" else [args.export]):
            H = code.HX if name == "hx" else code.HZ
            body = css.dumps_alist(H) if args.format == "alist" else cx.gf2.dumps_dense(H)
            rep.extra += [f"begin {name} {args.format}", body.rstrip("\n"), f"end {name}"]
    if not code.orthogonal() or code.k_dim != betti:
        raise _Failed
    return rep.text()


def cmd_balance(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.file)
    k = _need_k(args)
    r = css.balance(X, k, L=args.cycle_length, budget=rep.budget, workers=args.workers)
    _refuse_unknown(r.params)
    rep.add(*r.lines())
    rep.add(f"check_kunneth={int(r.h_out >= r.h_in)}")
    if r.h_out < r.h_in:
        raise _Failed
    return rep.text()


def cmd_verify_product(args, rep: Report, inp: _Inputs) -> str:
    X = inp.complex(args.left).unaugmented_copy()
    Y = inp.complex(args.right).unaugmented_copy()
    l = args.l if args.l is not None else 1
    v = expansion.verify_product_theorem(X, Y, l, m_max=min(args.m_max, 2), budget=rep.budget, workers=args.workers)
    rep.add(*v.lines())
    if not v.ok:
        raise _Failed
    return rep.text()


COMMANDS = {
    "gen": cmd_gen,
    "tensor": cmd_tensor,
    "validate": cmd_validate,
    "homology": cmd_homology,
    "expansion": cmd_expansion,
    "local-check": cmd_local_check,
    "cones-check": cmd_cones_check,
    "css": cmd_css,
    "balance": cmd_balance,
    "verify-product": cmd_verify_product,
}


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    budget = args.budget if args.budget is not None else default_budget()
    if budget <= 0 or args.workers <= 0 or args.m_max <= 0:
        print("error: budgets and worker counts must be positive", file=sys.stderr)
        return EXIT_IO
    default_weight = cx.TOPCELL if args.command in ("local-check", "cones-check") else cx.HAMMING
    rep = Report(args.command, args.seed, budget, args.m_max, args.weight or default_weight)
    inp = _Inputs()
    try:
        text = COMMANDS[args.command](args, rep, inp)
    except _Failed:
        _emit(rep.text(), args.out)
        return EXIT_PROPERTY
    except BudgetExceeded as exc:
        refusal = Report(rep.command, rep.seed, rep.budget, rep.m_max, rep.weight)
        refusal.add("status=budget_refused", f"reason={exc}")
        _emit(refusal.text(), args.out)
        print(f"budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CosyxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit(text, args.out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
