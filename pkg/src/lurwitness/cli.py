"""Command-line interface.

Exit codes for the checking commands: 0 = entangled, 1 = inconclusive,
2 = invalid input.  ``bounds`` exits 0 when the numeric minimum matches the
analytic value to within ``--tol``.

Usage::

    lurwitness bounds spin1_xy
    lurwitness make-state werner --p 0.69 -o w.json
    lurwitness check-state w.json --spec pauli3
    lurwitness simulate w.json --spec pauli2 --shots 10000 --seed 1 -o data.json
    lurwitness check-data data.json --spec pauli2 --format csv
    lurwitness werner-sweep --from 0 --to 1 --steps 11
"""
from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click
import numpy as np

from . import ingest, states
from .config import DEFAULT_OPTIMIZER, DEFAULT_TOLERANCES, load_config
from .errors import LURError, NonConvergence
from .lur import ENTANGLED, builtin_spec, evaluate, fmt_float, werner_sweep
from .uncertainty import ANALYTIC_KINDS, analytic_bound, bound_observables, minimize_sum_uncertainty

EXIT_ENTANGLED, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2
SPEC_NAMES = ("pauli3", "pauli2", "spin3", "spin1_xy")


class Ctx:
    def __init__(self, tol=DEFAULT_TOLERANCES, opt=DEFAULT_OPTIMIZER):
        self.tol = tol
        self.opt = opt


def _fail(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_ERROR)


def _spec(name: str, l):
    kind = name[:-4] if name.endswith("_lur") else name
    if kind == "spin3" and l is None:
        _fail("--spec spin3 needs --l")
    return builtin_spec(kind, l=l)


def _emit_report(report, fmt: str) -> None:
    if fmt == "json":
        click.echo(report.to_json())
    elif fmt == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        click.echo(report.pretty())
    sys.exit(EXIT_ENTANGLED if report.verdict == ENTANGLED else EXIT_INCONCLUSIVE)


def _parse_l(value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a number or fraction like 3/2")


spin_option = click.option("--l", "l", default=None, help="Spin quantum number, e.g. 1 or 3/2.")
format_option = click.option("--format", "fmt", type=click.Choice(["pretty", "json", "csv"]), default="pretty")


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file overriding tolerance / optimizer defaults.")
@click.pass_context
def main(ctx, config_path):
    """Entanglement detection with local uncertainty relations."""
    if config_path:
        try:
            tol, opt = load_config(config_path)
        except (ValueError, TypeError) as exc:
            _fail(f"bad config file: {exc}")
        ctx.obj = Ctx(tol, opt)
    else:
        ctx.obj = Ctx()


@main.command()
@click.argument("kind", type=click.Choice(ANALYTIC_KINDS))
@spin_option
@click.option("--restarts", type=int, default=None)
@click.option("--tol", type=float, default=None, help="Gradient tolerance and allowed |gap|.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["pretty", "json"]), default="pretty")
@click.pass_obj
def bounds(obj, kind, l, restarts, tol, seed, fmt):
    """Certify an analytic sum-uncertainty bound by numerical minimization."""
    l = _parse_l(l)
    if kind == "spin3" and l is None:
        _fail("spin3 needs --l")
    restarts = obj.opt.restarts if restarts is None else restarts
    tol = obj.opt.tol if tol is None else tol
    try:
        exact = analytic_bound(kind, l)
        num = minimize_sum_uncertainty(bound_observables(kind, l), restarts=restarts, tol=tol, seed=seed,
                                       max_iter=obj.opt.max_iter)
    except NonConvergence as exc:
        _fail(str(exc))
    except LURError as exc:
        _fail(str(exc))
    gap = num.value - exact.value
    amps = num.best_state.amplitudes.copy()
    amps.real[np.abs(amps.real) < 1e-15] = 0.0
    amps.imag[np.abs(amps.imag) < 1e-15] = 0.0
    if fmt == "json":
        out = {
            "kind": kind,
            "label": exact.label,
            "analytic": float(fmt_float(exact.value)),
            "numeric": float(fmt_float(num.value)),
            "gap": float(fmt_float(gap)) + 0.0,
            "restarts": restarts,
            "converged_restarts": num.converged_restarts,
            "tolerance": tol,
            "achiever": [[float(fmt_float(z.real)) + 0.0, float(fmt_float(z.imag)) + 0.0] for z in amps],
        }
        click.echo(json.dumps(out, sort_keys=True, indent=2))
    else:
        click.echo(f"bound {exact.label}")
        click.echo(f"  analytic = {fmt_float(exact.value)}")
        click.echo(f"  numeric  = {fmt_float(num.value)}  ({num.converged_restarts}/{restarts} restarts converged)")
        click.echo(f"  gap      = {fmt_float(gap)}")
        click.echo("  achiever = [" + ", ".join(f"{fmt_float(z.real)}{z.imag:+.12g}j" for z in amps) + "]")
    sys.exit(0 if abs(gap) <= tol else 1)


@main.command("check-state")
@click.argument("state_file", type=click.Path(dir_okay=False))
@click.option("--spec", "spec_name", type=click.Choice(SPEC_NAMES + tuple(s + "_lur" for s in SPEC_NAMES)),
              required=True)
@spin_option
@format_option
@click.pass_obj
def check_state(obj, state_file, spec_name, l, fmt):
    """Evaluate a local uncertainty relation on a state file."""
    try:
        spec = _spec(spec_name, _parse_l(l))
        rho = states.load_state(state_file, obj.tol)
        report = evaluate(rho, spec, obj.tol)
    except (LURError, OSError, ValueError) as exc:
        _fail(str(exc))
    _emit_report(report, fmt)


@main.command("check-data")
@click.argument("data_file", type=click.Path(dir_okay=False))
@click.option("--spec", "spec_name", type=click.Choice(SPEC_NAMES + tuple(s + "_lur" for s in SPEC_NAMES)),
              required=True)
@spin_option
@format_option
@click.pass_obj
def check_data(obj, data_file, spec_name, l, fmt):
    """Evaluate a local uncertainty relation on measured outcome statistics."""
    try:
        spec = _spec(spec_name, _parse_l(l))
        ds = ingest.load(data_file, spec, obj.tol)
        report = ingest.evaluate_from_data(ds, spec, obj.tol)
    except KeyError as exc:  # MissingSetting
        _fail(exc.args[0] if exc.args else str(exc))
    except (LURError, OSError, ValueError) as exc:
        _fail(str(exc))
    _emit_report(report, fmt)


@main.command("werner-sweep")
@click.option("--from", "p_from", type=float, default=0.0, show_default=True)
@click.option("--to", "p_to", type=float, default=1.0, show_default=True)
@click.option("--steps", type=int, default=11, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def werner_sweep_cmd(p_from, p_to, steps, fmt):
    """Tabulate C_LUR (pauli3, pauli2) and concurrence for Werner states."""
    if steps < 1 or not (0.0 <= p_from <= 1.0 and 0.0 <= p_to <= 1.0):
        _fail("need steps >= 1 and a grid inside [0, 1]")
    rows = werner_sweep(np.linspace(p_from, p_to, steps))
    cols = ("p_s", "c_lur_pauli3", "c_lur_pauli2", "concurrence")
    if fmt == "json":
        data = [{c: float(fmt_float(getattr(r, c))) + 0.0 for c in cols} for r in rows]
        click.echo(json.dumps(data, sort_keys=True, indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt_float(getattr(r, c) + 0.0) for c in cols])
        click.echo(buf.getvalue(), nl=False)


@main.command()
@click.argument("state_file", type=click.Path(dir_okay=False))
@click.option("--spec", "spec_name", type=click.Choice(SPEC_NAMES + tuple(s + "_lur" for s in SPEC_NAMES)),
              required=True)
@spin_option
@click.option("--shots", type=int, default=None, help="Multinomial sample size per setting.")
@click.option("--exact", is_flag=True, help="Emit exact probabilities (the default without --shots).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def simulate(obj, state_file, spec_name, l, shots, exact, seed, output):
    """Produce a measurement dataset from a state file."""
    if exact and shots is not None:
        _fail("--exact and --shots are mutually exclusive")
    try:
        spec = _spec(spec_name, _parse_l(l))
        rho = states.load_state(state_file, obj.tol)
        ds = ingest.simulate(rho, spec, shots=shots, seed=seed)
    except (LURError, OSError, ValueError) as exc:
        _fail(str(exc))
    if output:
        ingest.save(ds, output)
    else:
        click.echo(ds.to_json())


@main.command("make-state")
@click.argument("kind", type=click.Choice(["singlet", "werner", "noise-model", "max-entangled", "maximally-mixed"]))
@click.option("--p", "p_s", type=float, default=1.0, show_default=True, help="Singlet fraction p_s.")
@spin_option
@click.option("--n", "n", type=int, default=2, show_default=True, help="Local dimension (max-entangled, maximally-mixed).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def make_state(kind, p_s, l, n, output):
    """Write one of the built-in states as a state file."""
    try:
        if kind == "singlet":
            st = states.singlet(_parse_l(l) if l is not None else 0.5)
        elif kind == "werner":
            st = states.werner(p_s)
        elif kind == "noise-model":
            st = states.noise_model_state(p_s)
        elif kind == "max-entangled":
            st = states.max_entangled(n)
        else:
            st = states.DensityMatrix(np.eye(n * n) / (n * n), dims=(n, n))
    except (LURError, ValueError) as exc:
        _fail(str(exc))
    text = json.dumps(states.state_to_dict(st))
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


if __name__ == "__main__":
    main()
